//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p upbook-core --test acceptance`. Everything is
//! deterministic (fixed seeds) and sequential. The sweeps labelled "exhaustive"
//! cover every plane st-graph with at most 7 vertices; 8 and 9 vertices are
//! covered by seeded random samples because the full families are too large.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use upbook_core::book::{
    hp_completion_to_2ube, is_embedding_preserving, is_hamiltonian_path, two_ube_to_hp_completion, verify_kube,
};
use upbook_core::construct::{hp_complete_long_right, hp_complete_rhombi};
use upbook_core::decomp::sphere::{build_sphere_cut, validate_sphere_cut};
use upbook_core::decomp::spqr::{build_spqr, check_tree, NodeKind};
use upbook_core::fixtures;
use upbook_core::fpt::pnode::{
    p_node_types_fixed, p_node_types_fixed_literal, p_node_types_variable, p_node_types_variable_brute,
    p_node_types_variable_literal,
};
use upbook_core::fpt::types::all_types;
use upbook_core::fpt::{test_2ube_fpt, with_st_edge, EmbMode, KeySet, TypeSet};
use upbook_core::gen;
use upbook_core::graph::{classify_faces, validate_plane_st_graph, PlaneStGraph};
use upbook_core::hardness::{
    build_filled, build_lambda_filled, check_structural_conditions, construct_3ube_from_witness,
    page_condition_counterexample, reduce_betweenness, solve_betweenness_brute, BetweennessInstance,
};
use upbook_core::solver::{enumerate_orders, solve_kube_brute, solve_with_stats, Mode, Outcome, DEFAULT_BUDGET};
use upbook_core::special::test_2ube_special_faces;

const MAX_N: usize = 7;
const REDUCTION_BUDGET: u64 = 100_000_000;

enum Status {
    Pass,
    Fail,
    /// Inconclusive (search budget exhausted); never counted as a pass.
    Skip,
}

type Verdict = (Status, String);

fn ok(detail: String) -> Verdict {
    (Status::Pass, detail)
}

fn fail(detail: String) -> Verdict {
    (Status::Fail, detail)
}

fn small_graphs() -> &'static [PlaneStGraph] {
    static ALL: OnceLock<Vec<PlaneStGraph>> = OnceLock::new();
    ALL.get_or_init(|| gen::all_plane_st_graphs(MAX_N))
}

fn found(o: &Outcome) -> Result<bool, String> {
    match o {
        Outcome::Found(_) => Ok(true),
        Outcome::None => Ok(false),
        Outcome::Unknown => Err("search budget exhausted".into()),
    }
}

fn solver_soundness() -> Verdict {
    let graphs = small_graphs();
    let mut witnesses = 0usize;
    for p in graphs {
        let mut prev = false;
        for k in 1..=3 {
            let o = solve_kube_brute(&p.g, k, Mode::Variable, DEFAULT_BUDGET).unwrap();
            let f = match found(&o) {
                Ok(f) => f,
                Err(e) => return fail(format!("k={k} {p:?}: {e}")),
            };
            if let Some(be) = o.found() {
                witnesses += 1;
                if be.k != k || !verify_kube(&p.g, be).valid {
                    return fail(format!("invalid {k}UBE witness for {p:?}"));
                }
            }
            if prev && !f {
                return fail(format!("monotonicity broken at k={k} for {p:?}"));
            }
            prev = f;
        }
        let o = solve_kube_brute(&p.g, 2, Mode::Fixed(p), DEFAULT_BUDGET).unwrap();
        if let Some(be) = o.found() {
            witnesses += 1;
            if !verify_kube(&p.g, be).valid || !is_embedding_preserving(p, be) {
                return fail(format!("invalid fixed 2UBE witness for {p:?}"));
            }
            let var = solve_kube_brute(&p.g, 2, Mode::Variable, DEFAULT_BUDGET).unwrap();
            if !var.is_found() {
                return fail(format!("fixed 2UBE exists but variable search says none: {p:?}"));
            }
        } else if matches!(o, Outcome::Unknown) {
            return fail(format!("fixed search exhausted budget on {p:?}"));
        }
    }
    ok(format!("{} graphs (<= {MAX_N} vertices), {witnesses} witnesses verified, k = 1..3 monotone", graphs.len()))
}

fn round_trip() -> Verdict {
    let pool: Vec<&PlaneStGraph> = small_graphs().iter().filter(|p| p.n() >= 5).collect();
    let step = pool.len() / 400;
    let mut done = 0;
    for p in pool.iter().step_by(step.max(1)) {
        if done == 100 {
            break;
        }
        let o = solve_kube_brute(&p.g, 2, Mode::Fixed(p), DEFAULT_BUDGET).unwrap();
        let Some(be) = o.found() else { continue };
        let hp = match two_ube_to_hp_completion(p, be) {
            Ok(hp) => hp,
            Err(e) => return fail(format!("{p:?}: {e}")),
        };
        if !validate_plane_st_graph(&hp.gbar.to_embedded()).is_valid() {
            return fail(format!("completion is not a plane st-graph for {p:?}"));
        }
        if !is_hamiltonian_path(&hp.gbar, &hp.path) {
            return fail(format!("no Hamiltonian st-path in completion of {p:?}"));
        }
        let back = match hp_completion_to_2ube(&p.g, &hp.gbar, &hp.path) {
            Ok(b) => b,
            Err(e) => return fail(format!("{p:?}: {e}")),
        };
        if back != be.normalize_consecutive(&p.g) {
            return fail(format!("round trip changed the drawing of {p:?}"));
        }
        done += 1;
    }
    if done < 100 {
        return fail(format!("only {done} witnesses sampled"));
    }
    ok(format!("{done} fixed-mode witnesses (5 to {MAX_N} vertices), exact identity"))
}

fn constructions() -> Verdict {
    let mut count = 0;
    let mut max_n = 0;
    for i in 0..200u64 {
        let n = 6 + (i as usize * 7) % 35;
        let (p, c) = if i % 2 == 0 {
            let p = gen::long_right_path(n, i).unwrap();
            let c = hp_complete_long_right(&p);
            (p, c)
        } else {
            let p = gen::random_rhombi(n, i).unwrap();
            let c = hp_complete_rhombi(&p);
            (p, c)
        };
        let c = match c {
            Ok(c) => c,
            Err(e) => return fail(format!("instance {i} ({} vertices): {e}", p.n())),
        };
        if !is_hamiltonian_path(&c.completion.gbar, &c.completion.path) {
            return fail(format!("instance {i}: path is not Hamiltonian"));
        }
        let be = match hp_completion_to_2ube(&p.g, &c.completion.gbar, &c.completion.path) {
            Ok(be) => be,
            Err(e) => return fail(format!("instance {i}: {e}")),
        };
        if !verify_kube(&p.g, &be).valid || !is_embedding_preserving(&p, &be) {
            return fail(format!("instance {i}: drawing invalid or not embedding-preserving"));
        }
        max_n = max_n.max(p.n());
        count += 1;
    }
    ok(format!("{count} instances (100 long right path, 100 rhombi, up to {max_n} vertices)"))
}

fn special_faces() -> Verdict {
    let mut cases: Vec<PlaneStGraph> =
        small_graphs().iter().filter(|p| classify_faces(p).all_special()).cloned().collect();
    let exhaustive = cases.len();
    for seed in 0..100u64 {
        cases.push(gen::random_special(8, seed).unwrap());
        cases.push(gen::random_special(9, 1000 + seed).unwrap());
    }
    for seed in 0..200u64 {
        cases.push(gen::random_special(5 + (seed as usize % 10), 5000 + seed).unwrap());
    }
    let mut yes = 0;
    for p in &cases {
        if !classify_faces(p).all_special() {
            return fail(format!("generator produced an ineligible graph {p:?}"));
        }
        let got = match test_2ube_special_faces(p) {
            Ok(g) => g,
            Err(e) => return fail(format!("{p:?}: {e}")),
        };
        let want = match found(&solve_kube_brute(&p.g, 2, Mode::Fixed(p), DEFAULT_BUDGET).unwrap()) {
            Ok(w) => w,
            Err(e) => return fail(format!("{p:?}: {e}")),
        };
        if got.is_some() != want {
            return fail(format!("tester says {}, search says {want} on {p:?}", got.is_some()));
        }
        if let Some(be) = got {
            if !verify_kube(&p.g, &be).valid || !is_embedding_preserving(p, &be) {
                return fail(format!("tester witness invalid on {p:?}"));
            }
            yes += 1;
        }
    }
    ok(format!(
        "{} graphs agree ({exhaustive} exhaustive <= {MAX_N} vertices, 200 random with 8/9, 200 random <= 14), {yes} yes",
        cases.len()
    ))
}

fn betweenness_instances(n: usize, max_r: usize, canonical: bool) -> Vec<BetweennessInstance> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut trips = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != b && b != c && a != c && (!canonical || a < c) {
                    trips.push([a, b, c]);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        trips: &[[usize; 3]],
        from: usize,
        left: usize,
        pick: &mut Vec<[usize; 3]>,
        names: &[String],
        out: &mut Vec<BetweennessInstance>,
    ) {
        if !pick.is_empty() {
            out.push(BetweennessInstance::new(names.to_vec(), pick.clone()).unwrap());
        }
        if left == 0 {
            return;
        }
        for i in from..trips.len() {
            pick.push(trips[i]);
            rec(trips, i + 1, left - 1, pick, names, out);
            pick.pop();
        }
    }
    rec(&trips, 0, max_r, &mut pick, &names, &mut out);
    out
}

fn reduction_forward() -> Verdict {
    let (mut sat, mut total) = (0, 0);
    for n in 3..=5 {
        for inst in betweenness_instances(n, 3, true) {
            total += 1;
            let Some(tau) = solve_betweenness_brute(&inst).unwrap() else { continue };
            sat += 1;
            let be = match construct_3ube_from_witness(&inst, &tau) {
                Ok(be) => be,
                Err(e) => return fail(format!("{:?}: {e}", inst.triplets)),
            };
            let gg = reduce_betweenness(&inst, 3).unwrap();
            if !verify_kube(&gg.graph, &be).valid {
                return fail(format!("constructed 3UBE invalid for {:?}", inst.triplets));
            }
        }
    }
    ok(format!("{sat} satisfiable of {total} instances (3 <= |S| <= 5, 1 <= |R| <= 3), all drawings valid"))
}

fn reduction_equivalence() -> Verdict {
    let mut cases = betweenness_instances(3, 2, false);
    let listed = cases.len();
    cases.push(BetweennessInstance::from_labels(&["a", "b", "c"], &[["a", "b", "c"], ["b", "a", "c"], ["a", "c", "b"]]).unwrap());
    let (mut unknown, mut max_nodes) = (0, 0);
    let mut extra = String::new();
    for (i, inst) in cases.iter().enumerate() {
        let sat = solve_betweenness_brute(inst).unwrap().is_some();
        let gg = reduce_betweenness(inst, 3).unwrap();
        let (o, nodes) = solve_with_stats(&gg.graph, 3, Mode::Variable, REDUCTION_BUDGET).unwrap();
        max_nodes = max_nodes.max(nodes);
        match o {
            Outcome::Unknown => unknown += 1,
            Outcome::Found(be) => {
                if !sat || !verify_kube(&gg.graph, &be).valid {
                    return fail(format!("{:?}: 3UBE found for unsatisfiable instance", inst.triplets));
                }
            }
            Outcome::None => {
                if sat {
                    return fail(format!("{:?}: satisfiable but no 3UBE", inst.triplets));
                }
            }
        }
        if i == listed {
            extra = format!("three-middles: no 3UBE ({} vertices, {nodes} nodes)", gg.graph.n);
        }
    }
    let detail = format!(
        "{listed} instances with |S| = 3, 1 <= |R| <= 2 plus {extra}; max {max_nodes} search nodes, {unknown} unknown"
    );
    if unknown > 0 {
        (Status::Skip, detail)
    } else {
        ok(detail)
    }
}

fn gadget_conditions() -> Verdict {
    let mut orders = 0;
    let mut fixtures_run = Vec::new();
    for h in [0, 2] {
        for s in 1..=3 {
            // with no gadget rows the two fillings coincide
            let gg = if h == 0 { build_filled(h, s) } else { build_lambda_filled(h, s) }.unwrap();
            let mut bad = None;
            let mut here = 0;
            let res = enumerate_orders(&gg.graph, 3, 100_000_000, |be| {
                here += 1;
                match check_structural_conditions(&gg, be) {
                    Ok(r) if r.all_pass() => {}
                    Ok(r) => bad = Some(format!("{:?}", r.failures())),
                    Err(e) => bad = Some(e.to_string()),
                }
                if bad.is_none() {
                    if let Some((c, _, _)) = page_condition_counterexample(&gg, &be.order) {
                        bad = Some(format!("page condition {c} violated by another page assignment"));
                    }
                }
                bad.is_none()
            });
            if let Err(e) = res {
                return fail(format!("h={h} s={s}: {e}"));
            }
            if let Some(b) = bad {
                return fail(format!("h={h} s={s}: {b}"));
            }
            if here == 0 {
                return fail(format!("h={h} s={s}: no 3UBE found"));
            }
            orders += here;
            fixtures_run.push(format!("({h},{s}):{here}"));
        }
    }
    ok(format!("{orders} spine orders over 6 fixtures [{}], every one satisfies all conditions", fixtures_run.join(" ")))
}

fn fpt_cases() -> Vec<(String, PlaneStGraph)> {
    let mut v = Vec::new();
    for seed in 0..100u64 {
        v.push(("random8".into(), gen::random_planar_st(8, seed).unwrap()));
        v.push(("random9".into(), gen::random_planar_st(9, 2000 + seed).unwrap()));
    }
    for i in 0..300u64 {
        let n = 6 + (i as usize % 11);
        let p = match i % 3 {
            0 => gen::series_parallel(n, 3000 + i).unwrap(),
            1 => gen::random_rigid(n, 4 + (i as usize % 4), 3000 + i).unwrap(),
            _ => gen::stacked_triangulation(n, 3000 + i).unwrap(),
        };
        v.push((["series-parallel", "rigid", "stacked"][i as usize % 3].into(), p));
    }
    v
}

fn fpt_end_to_end() -> Verdict {
    let extra = fpt_cases();
    if let Some((k, p)) = extra.iter().find(|(k, p)| k != "random8" && k != "random9" && p.n() > 16) {
        return fail(format!("{k} instance with {} vertices", p.n()));
    }
    let mut checked = 0;
    let mut yes = [0, 0];
    let all = small_graphs().iter().chain(extra.iter().map(|(_, p)| p));
    for p in all {
        for (i, (mode, m)) in [(EmbMode::Variable, Mode::Variable), (EmbMode::Fixed, Mode::Fixed(p))].into_iter().enumerate() {
            let got = match test_2ube_fpt(p, mode) {
                Ok(r) => r.answer,
                Err(e) => return fail(format!("{mode:?} {p:?}: {e}")),
            };
            let want = match found(&solve_kube_brute(&p.g, 2, m, u64::MAX).unwrap()) {
                Ok(w) => w,
                Err(e) => return fail(e),
            };
            if got != want {
                return fail(format!("{mode:?}: tester {got}, search {want} on {p:?}"));
            }
            yes[i] += got as usize;
            checked += 1;
        }
    }
    ok(format!(
        "{checked} comparisons ({} exhaustive <= {MAX_N} vertices, 200 random with 8/9, 300 series-parallel/rigid/stacked <= 16), yes: {} variable, {} fixed",
        small_graphs().len(),
        yes[0],
        yes[1]
    ))
}

fn p_node_calculus() -> Verdict {
    let mut options: Vec<KeySet> = all_types().iter().map(|&t| KeySet::of_types(TypeSet::single(t))).collect();
    options.push(KeySet::Q);
    let mut multisets = Vec::new();
    fn rec(opts: &[KeySet], from: usize, left: usize, cur: &mut Vec<KeySet>, out: &mut Vec<Vec<KeySet>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in from..opts.len() {
            cur.push(opts[i]);
            rec(opts, i, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&options, 0, 4, &mut Vec::new(), &mut multisets);
    let mut pattern_misses = 0;
    for ch in &multisets {
        let exact = p_node_types_variable(ch);
        let brute = p_node_types_variable_brute(ch);
        if exact != brute {
            return fail(format!("children {ch:?}: flow {exact:?} vs permutations {brute:?}"));
        }
        if p_node_types_variable_literal(ch) != exact {
            pattern_misses += 1;
        }
    }
    // fixed folds against the literal rule table, over ordered sequences
    let types = all_types();
    let (mut seqs, mut gaps) = (0, 0);
    let mut idx = vec![0usize; 4];
    for len in 2..=4 {
        let total = types.len().pow(len as u32);
        for code in 0..total {
            let mut c = code;
            for slot in idx.iter_mut().take(len) {
                *slot = c % types.len();
                c /= types.len();
            }
            let ts: Vec<TypeSet> = idx[..len].iter().map(|&i| TypeSet::single(types[i])).collect();
            let ks: Vec<KeySet> = ts.iter().map(|&t| KeySet::of_types(t)).collect();
            seqs += 1;
            if p_node_types_fixed(&ks) != p_node_types_fixed_literal(&ts) {
                gaps += 1;
            }
        }
    }
    ok(format!(
        "{} multisets (2..4 children over 18 types + edge): exact equality; reported separately: literal case patterns differ on {pattern_misses}, literal fixed rules differ on {gaps} of {seqs} sequences",
        multisets.len()
    ))
}

fn decomposition() -> Verdict {
    let mut graphs: Vec<PlaneStGraph> = small_graphs().to_vec();
    graphs.extend(fpt_cases().into_iter().map(|(_, p)| p));
    for i in 0..20u64 {
        graphs.push(gen::stacked_triangulation(20 + i as usize, 7000 + i).unwrap());
        graphs.push(gen::rhombus_grid(2 + i as usize % 4, 2 + i as usize / 5).unwrap());
    }
    let mut seen = HashSet::new();
    let (mut trees, mut cuts, mut max_w) = (0, 0, 0);
    for p in &graphs {
        let (q, _) = with_st_edge(p).unwrap();
        let tree = match build_spqr(&q) {
            Ok(t) => t,
            Err(e) => return fail(format!("{q:?}: {e}")),
        };
        let issues = check_tree(&q, &tree);
        if !issues.is_empty() {
            return fail(format!("{q:?}: {issues:?}"));
        }
        trees += 1;
        for n in &tree.nodes {
            if n.kind != NodeKind::R {
                continue;
            }
            let rigid = n.rigid.as_ref().unwrap();
            if !seen.insert(rigid.plus.clone()) {
                continue;
            }
            let sc = match build_sphere_cut(&rigid.plus, rigid.reference_edge()) {
                Ok(sc) => sc,
                Err(e) => return fail(format!("skeleton {:?}: {e}", rigid.plus)),
            };
            let issues = validate_sphere_cut(&rigid.plus, &sc);
            if !issues.is_empty() {
                return fail(format!("skeleton {:?}: {issues:?}", rigid.plus));
            }
            max_w = max_w.max(sc.width());
            cuts += 1;
        }
    }
    let k4 = fixtures::k4();
    let k4w: Vec<usize> = (0..k4.m()).map(|e| build_sphere_cut(&k4, e).unwrap().width()).collect();
    if k4w.iter().any(|&w| w != 3) {
        return fail(format!("K4 widths {k4w:?}"));
    }
    let c4 = fixtures::diamond();
    let c4w: Vec<usize> = (0..c4.m()).map(|e| build_sphere_cut(&c4, e).unwrap().width()).collect();
    if c4w.iter().any(|&w| w != 2) {
        return fail(format!("C4 widths {c4w:?}"));
    }
    ok(format!(
        "{trees} SPQR-trees reassemble, {cuts} distinct rigid skeletons with valid sphere-cuts (max width {max_w}); K4 width 3, C4 width 2 for every root edge"
    ))
}

fn hard_fixture() -> Verdict {
    let mut graphs: Vec<&PlaneStGraph> = small_graphs().iter().collect();
    graphs.sort_by_cached_key(|p| (p.n(), p.m(), gen::canonical_code(p)));
    let mut first = None;
    let mut same_size = 0;
    for p in graphs {
        if let Some((n, m, _)) = &first {
            if (p.n(), p.m()) != (*n, *m) {
                break;
            }
        }
        let o = solve_kube_brute(&p.g, 2, Mode::Fixed(p), DEFAULT_BUDGET).unwrap();
        match found(&o) {
            Err(e) => return fail(e),
            Ok(true) => {}
            Ok(false) => {
                same_size += 1;
                if first.is_none() {
                    first = Some((p.n(), p.m(), p.clone()));
                }
            }
        }
    }
    let Some((n, m, p)) = first else { return fail("every graph admits an embedding-preserving 2UBE".into()) };
    let fc = fixtures::fc();
    let code = gen::canonical_code(&p);
    if code != gen::canonical_code(&fc) && code != gen::canonical_code(&fc.mirror()) {
        return fail(format!("smallest hard graph {p:?} differs from the frozen fixture"));
    }
    if solve_kube_brute(&fc.g, 2, Mode::Variable, DEFAULT_BUDGET).unwrap().found().is_none() {
        return fail("frozen fixture has no 2UBE even with a free embedding".into());
    }
    ok(format!(
        "smallest hard graph has {n} vertices and {m} edges ({same_size} of that size), matches the frozen fixture; it admits a 2UBE once the embedding is free"
    ))
}

type Criterion = (&'static str, u64, fn() -> Verdict);

const CRITERIA: [Criterion; 11] = [
    ("solver soundness and k-monotonicity", 120, solver_soundness),
    ("2UBE / HP-completion round trip", 60, round_trip),
    ("HP-completion constructions", 120, constructions),
    ("special-faces tester vs search", 300, special_faces),
    ("reduction, forward direction", 120, reduction_forward),
    ("reduction, equivalence", 600, reduction_equivalence),
    ("structural conditions of gadget graphs", 300, gadget_conditions),
    ("FPT tester vs search, both modes", 900, fpt_end_to_end),
    ("P-node calculus", 300, p_node_calculus),
    ("SPQR and sphere-cut validity", 120, decomposition),
    ("smallest graph without a fixed 2UBE", 600, hard_fixture),
];

fn main() {
    let t = Instant::now();
    let n = small_graphs().len();
    println!("setup: {n} plane st-graphs with <= {MAX_N} vertices in {:.1}s", t.elapsed().as_secs_f64());
    let mut failed = 0;
    for (name, limit, run) in CRITERIA {
        let t = Instant::now();
        let (status, detail) = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = t.elapsed();
        let over = took > Duration::from_secs(limit);
        let tag = match status {
            Status::Pass if !over => "PASS",
            Status::Skip if !over => "SKIP",
            _ => "FAIL",
        };
        if tag != "PASS" {
            failed += 1;
        }
        let late = if over { " [time limit exceeded]" } else { "" };
        println!("{tag}  {name}: {detail} ({:.1}s, limit {limit}s){late}", took.as_secs_f64());
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
