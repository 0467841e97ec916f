//! Types of P-nodes from the types of their children.
//!
//! Children are given as key sets (`KeySet`): a child that is a single edge
//! uses the two single-edge keys, any other child the keys of its types. The
//! exact rules fold the composition table over the children; the literal
//! rule sets are kept next to them for comparison.

use super::flow::FlowNetwork;
use super::types::*;
use std::collections::BTreeMap;

/// Key set of a child from its types.
pub fn child_keys(types: TypeSet, is_q: bool) -> KeySet {
    if !is_q {
        return KeySet::of_types(types);
    }
    let mut k = 0;
    if types.contains(LLL) {
        k |= 1 << Q_LLL;
    }
    if types.contains(RRR) {
        k |= 1 << Q_RRR;
    }
    KeySet(k)
}

fn compose_sets(states: KeySet, child: KeySet) -> KeySet {
    let mut out = 0;
    for a in states.keys() {
        for b in child.keys() {
            out |= compose(a, b).0;
        }
    }
    KeySet(out)
}

/// Children in their left-to-right order.
pub fn p_node_types_fixed(children: &[KeySet]) -> TypeSet {
    let Some((first, rest)) = children.split_first() else {
        return TypeSet::EMPTY;
    };
    rest.iter().fold(*first, |acc, &c| compose_sets(acc, c)).types()
}

fn literal_pair(x: EmbType, y: EmbType) -> Option<EmbType> {
    use Spine as S;
    use Vis as V;
    let (a, b, c) = (y.s, y.spine, y.t);
    if matches!(x.s, V::N | V::L) && matches!(a, V::N | V::R) {
        return None;
    }
    if matches!(x.t, V::N | V::L) && matches!(c, V::N | V::R) {
        return None;
    }
    if x.spine == S::L {
        return None;
    }
    // when the two sides differ and neither is N the rules say nothing; the
    // leftmost child decides
    let side = |u: V, v: V| if u == v { u } else if u == V::N || v == V::N { V::N } else { u };
    let q = match (x.spine, b) {
        (S::R, S::L | S::B) => S::B,
        (S::R, S::R) => S::R,
        (S::B, S::R | S::B) => S::B,
        (S::B, S::L) => S::L,
        // unspecified (b = N, or y = N): the left part keeps its visibility
        (y, _) => y,
    };
    let t = EmbType::new(side(x.s, a), q, side(x.t, c));
    t.admissible().then_some(t)
}

/// The fixed-embedding rules exactly as stated for P-nodes (rejections,
/// then p, q, w per pair), folded left to right. Not used for decisions.
pub fn p_node_types_fixed_literal(children: &[TypeSet]) -> TypeSet {
    let Some((first, rest)) = children.split_first() else {
        return TypeSet::EMPTY;
    };
    rest.iter().fold(*first, |acc, &c| {
        let mut out = TypeSet::EMPTY;
        for x in acc.iter() {
            for y in c.iter() {
                if let Some(t) = literal_pair(x, y) {
                    out.insert(t);
                }
            }
        }
        out
    })
}

/// Union of the fixed fold over all orders of the children.
pub fn p_node_types_variable_brute(children: &[KeySet]) -> TypeSet {
    fn rec(rest: &mut Vec<KeySet>, acc: Option<KeySet>, out: &mut TypeSet) {
        if rest.is_empty() {
            if let Some(a) = acc {
                *out = out.union(a.types());
            }
            return;
        }
        if acc.is_some_and(|a| a.is_empty()) {
            return;
        }
        let mut tried = Vec::new();
        for i in 0..rest.len() {
            let c = rest[i];
            if tried.contains(&c) {
                continue;
            }
            tried.push(c);
            rest.remove(i);
            let next = match acc {
                None => c,
                Some(a) => compose_sets(a, c),
            };
            rec(rest, Some(next), out);
            rest.insert(i, c);
        }
    }
    let mut out = TypeSet::EMPTY;
    rec(&mut children.to_vec(), None, &mut out);
    out
}

/// Children grouped by key set, with multiplicities.
fn classes(children: &[KeySet]) -> Vec<(KeySet, usize)> {
    let mut m: BTreeMap<KeySet, usize> = BTreeMap::new();
    for &c in children {
        *m.entry(c).or_default() += 1;
    }
    m.into_iter().collect()
}

/// Is there an order of the children and a choice of keys whose fold passes
/// through exactly the states of `chain`? Slot 0 takes the first child, slot
/// i (i >= 1) the child that moves the state from chain[i-1] to chain[i];
/// every other child must keep some state unchanged.
fn chain_feasible(cls: &[(KeySet, usize)], chain: &[Key]) -> bool {
    let k: usize = cls.iter().map(|c| c.1).sum();
    let mut net: FlowNetwork<i64> = FlowNetwork::new(2, 0, 1);
    let mut enters: Vec<Box<dyn Fn(KeySet) -> bool>> = Vec::new();
    let mut slots = Vec::new();
    let q0 = chain[0];
    enters.push(Box::new(move |c: KeySet| c.0 >> q0 & 1 == 1));
    slots.push((1, 1));
    for w in chain.windows(2) {
        let (a, b) = (w[0], w[1]);
        enters.push(Box::new(move |c: KeySet| c.keys().any(|x| compose(a, x).0 >> b & 1 == 1)));
        slots.push((1, 1));
    }
    for &q in chain {
        if q < NUM_TYPES {
            enters.push(Box::new(move |c: KeySet| c.keys().any(|x| compose(q, x).0 >> q & 1 == 1)));
            slots.push((0, k as i64));
        }
    }
    let slot_nodes: Vec<usize> = slots
        .iter()
        .map(|&(lo, hi)| {
            let v = net.add_node();
            net.add_arc(v, 1, lo, hi);
            v
        })
        .collect();
    for &(c, m) in cls {
        let v = net.add_node();
        net.add_arc(0, v, m as i64, m as i64);
        for (i, f) in enters.iter().enumerate() {
            if f(c) {
                net.add_arc(v, slot_nodes[i], 0, m as i64);
            }
        }
    }
    net.feasible_flow().is_some()
}

/// Exact types of a P-node whose children may be permuted. Fold states only
/// move down (visibility is lost, never gained), so every order visits a
/// chain of distinct states; each chain is checked with one flow network.
pub fn p_node_types_variable(children: &[KeySet]) -> TypeSet {
    if children.is_empty() || children.iter().any(|c| c.is_empty()) {
        return TypeSet::EMPTY;
    }
    let cls = classes(children);
    let all_keys = KeySet(children.iter().fold(0, |a, c| a | c.0));
    let mut out = TypeSet::EMPTY;
    fn dfs(cls: &[(KeySet, usize)], all: KeySet, chain: &mut Vec<Key>, k: usize, out: &mut TypeSet) {
        let last = *chain.last().unwrap();
        if !out.contains(key_type(last)) {
            if chain_feasible(cls, chain) {
                out.insert(key_type(last));
            }
        }
        if chain.len() >= k {
            return;
        }
        let next = compose_sets(KeySet(1 << last), all);
        for q in next.keys() {
            if q != last && !chain.contains(&q) {
                chain.push(q);
                dfs(cls, all, chain, k, out);
                chain.pop();
            }
        }
    }
    let k = children.len();
    for q0 in all_keys.keys() {
        dfs(&cls, all_keys, &mut vec![q0], k, &mut out);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Qual {
    Any,
    Q,
    NotQ,
}

#[derive(Clone, Debug)]
struct Role {
    ty: EmbType,
    q: Qual,
    cap: usize,
}

#[derive(Clone, Debug)]
struct Group {
    roles: Vec<Role>,
    min: usize,
    max: usize,
}

type Pattern = Vec<Group>;

const INF: usize = usize::MAX;

fn ty(s: &str) -> EmbType {
    EmbType::parse(s).expect("type name")
}
fn r(s: &str) -> Role {
    Role { ty: ty(s), q: Qual::Any, cap: INF }
}
fn rq(s: &str, q: Qual, cap: usize) -> Role {
    Role { ty: ty(s), q, cap }
}
fn g(roles: Vec<Role>, min: usize) -> Group {
    Group { roles, min, max: INF }
}
fn gm(roles: Vec<Role>, min: usize, max: usize) -> Group {
    Group { roles, min, max }
}
fn vflip(p: &Pattern) -> Pattern {
    p.iter()
        .map(|gr| Group {
            roles: gr.roles.iter().map(|ro| Role { ty: ro.ty.vmirror(), ..ro.clone() }).collect(),
            ..gr.clone()
        })
        .collect()
}

/// The case conditions of the variable-embedding case analysis, one list of
/// patterns per relevant type. A pattern is a list of groups; each child
/// takes one role of one group, roles and groups have capacities and groups
/// have minimum sizes. The other eight types follow by left-right mirroring.
fn case_patterns() -> Vec<(EmbType, Vec<Pattern>)> {
    use Qual::*;
    let mut p: Vec<(EmbType, Vec<Pattern>)> = Vec::new();
    p.push((ty("LBR"), vec![vec![g(vec![r("LBR")], 0)]]));
    p.push((ty("RBR"), vec![vec![g(vec![r("RBR")], 0)]]));
    p.push((
        ty("RRR"),
        vec![
            vec![gm(vec![rq("RRR", Q, 1)], 1, 1), g(vec![r("RBR")], 0), gm(vec![rq("RRR", NotQ, 1)], 0, 1)],
            vec![gm(vec![rq("RRR", NotQ, 1)], 1, 1), g(vec![rq("RBR", NotQ, INF)], 0)],
        ],
    ));
    let nrr = vec![
        vec![gm(vec![rq("RRR", Q, 1), rq("NRR", Any, 1)], 1, 2), g(vec![r("LBR")], 0)],
        vec![
            gm(vec![rq("RRR", Q, 1), rq("RRR", NotQ, 1)], 1, 2),
            g(vec![r("RBR")], 0),
            g(vec![rq("NBR", Any, 1), r("LBR")], 1),
        ],
    ];
    let nbr = vec![
        vec![g(vec![r("LBR")], 1), g(vec![r("RBR")], 1)],
        vec![gm(vec![r("NBR")], 1, 1), g(vec![r("LBR"), r("RBR")], 0)],
    ];
    let mut nbn = vec![
        vec![gm(vec![r("NBN")], 1, 1), g(vec![r("RBR"), r("LBL")], 0)],
        vec![g(vec![r("RBR"), rq("NBR", Any, 1)], 1), g(vec![r("LBR")], 0), g(vec![rq("LBN", Any, 1), r("LBL")], 1)],
    ];
    nbn.push(vflip(&nbn[1]));
    p.push((ty("RBN"), nbr.iter().map(vflip).collect()));
    p.push((ty("RRN"), nrr.iter().map(vflip).collect()));
    p.push((ty("NRR"), nrr));
    p.push((ty("NBR"), nbr));
    p.push((ty("NBN"), nbn));
    let nrn3 = vec![
        gm(vec![rq("RRR", Q, 1), rq("RRN", Any, 1)], 1, 2),
        g(vec![r("RBL")], 0),
        g(vec![rq("NBL", Any, 1), r("LBL")], 1),
    ];
    let nrn5 = vec![
        gm(vec![rq("RRR", Q, 1), rq("RRR", NotQ, 1)], 1, 2),
        g(vec![rq("RBN", Any, 1), r("RBL")], 0),
        g(vec![rq("NBL", Any, 1), r("LBL")], 1),
    ];
    p.push((
        ty("NRN"),
        vec![
            vec![gm(vec![r("NRN")], 1, 1), g(vec![rq("LBL", NotQ, INF)], 0), gm(vec![rq("RRR", Q, 1)], 0, 1)],
            vec![
                gm(vec![rq("RRR", Q, 1), rq("RRR", NotQ, 1)], 1, 2),
                g(vec![r("RBR")], 0),
                g(vec![rq("NBN", Any, 1), r("LBL")], 1),
            ],
            vflip(&nrn3),
            nrn3,
            vflip(&nrn5),
            nrn5,
        ],
    ));
    let lll_c = || vec![rq("LLL", Q, 1), rq("LLL", NotQ, 1)];
    let rrr_c = || vec![rq("RRR", Q, 1), rq("RRR", NotQ, 1)];
    let c4 = vec![gm(vec![r("RRN")], 1, 1), g(vec![r("RBL"), r("LBL"), rq("NBL", Any, 1)], 0), gm(lll_c(), 1, 2)];
    let c6a = vec![
        gm(vec![r("RRN")], 1, 1),
        g(vec![r("RBL")], 0),
        gm(vec![rq("NLL", Any, 1)], 1, 1),
        gm(vec![rq("LLL", Q, 1)], 0, 1),
    ];
    let c6b = vec![gm(vec![r("RRN")], 1, 1), g(vec![r("RBL")], 0), gm(vec![rq("LLL", Q, 1)], 1, 1)];
    let c8mid = || vec![gm(vec![r("RBN")], 1, 1), g(vec![rq("NBL", Any, 1), r("RBR"), r("RBL"), r("LBL")], 0)];
    let c8: Vec<Pattern> = vec![
        [c8mid(), vec![gm(vec![rq("RRR", NotQ, 1)], 1, 1), gm(vec![rq("LLL", NotQ, 1)], 1, 1), gm(vec![rq("LLL", Q, 1)], 0, 1)]].concat(),
        [c8mid(), vec![gm(vec![rq("RRR", NotQ, 1)], 1, 1), gm(vec![rq("LLL", Q, 1)], 1, 1)]].concat(),
        [c8mid(), vec![gm(vec![rq("RRR", Q, 1)], 1, 1), gm(vec![rq("LLL", NotQ, 1)], 1, 1)]].concat(),
    ];
    let c10mid = || vec![gm(vec![r("RBN")], 1, 1), g(vec![r("RBR"), r("RBL")], 0)];
    let c10: Vec<Pattern> = vec![
        [c10mid(), vec![gm(vec![rq("RRR", NotQ, 1)], 1, 1), gm(vec![rq("NLL", NotQ, 1)], 1, 1), gm(vec![rq("LLL", Q, 1)], 0, 1)]].concat(),
        [c10mid(), vec![gm(vec![rq("RRR", NotQ, 1)], 1, 1), gm(vec![rq("LLL", Q, 1)], 1, 1)]].concat(),
        [c10mid(), vec![gm(vec![rq("RRR", Q, 1)], 1, 1), gm(vec![rq("NLL", NotQ, 1)], 1, 1)]].concat(),
    ];
    let c12 = vec![gm(vec![rq("RRR", NotQ, 1)], 1, 1), g(vec![r("RBR"), r("LBR")], 0), gm(lll_c(), 1, 2)];
    // 13 constructions are described for NNN; mirrored variants are generated
    // here instead of being listed (the text counts 26 cases)
    let mut nnn: Vec<Pattern> = vec![
        vec![gm(vec![rq("RRR", Q, 1)], 1, 1), gm(vec![r("NNN")], 1, 1)],
        // the construction draws the NRN child with LLL caps
        vec![gm(vec![r("NRN")], 1, 1), gm(lll_c(), 1, 2), g(vec![r("LBL")], 0)],
        vec![gm(rrr_c(), 1, 2), g(vec![r("RBR")], 0), gm(vec![r("NBN")], 1, 1), g(vec![r("LBL")], 0), gm(lll_c(), 1, 2)],
        vflip(&c4),
        c4,
        vflip(&c6a),
        vflip(&c6b),
        c6a,
        c6b,
    ];
    for x in c8.iter().chain(&c10) {
        nnn.push(x.clone());
        nnn.push(vflip(x));
    }
    nnn.push(vflip(&c12));
    nnn.push(c12);
    p.push((ty("NNN"), nnn));
    p
}

fn pattern_feasible(cls: &[(KeySet, usize)], pat: &Pattern) -> bool {
    let k: usize = cls.iter().map(|c| c.1).sum();
    let cap = |x: usize| x.min(k) as i64;
    let mut net: FlowNetwork<i64> = FlowNetwork::new(2, 0, 1);
    let mut roles = Vec::new();
    for gr in pat {
        let gv = net.add_node();
        net.add_arc(gv, 1, gr.min as i64, cap(gr.max));
        for ro in &gr.roles {
            let rv = net.add_node();
            net.add_arc(rv, gv, 0, cap(ro.cap));
            roles.push((rv, ro));
        }
    }
    for &(c, m) in cls {
        let v = net.add_node();
        net.add_arc(0, v, m as i64, m as i64);
        for &(rv, ro) in &roles {
            let q_ok = match ro.q {
                Qual::Any => true,
                Qual::Q => c.is_q(),
                Qual::NotQ => !c.is_q(),
            };
            if q_ok && c.types().contains(ro.ty) {
                net.add_arc(v, rv, 0, m as i64);
            }
        }
    }
    net.feasible_flow().is_some()
}

/// The case conditions for the ten relevant types, evaluated with flow
/// networks, plus their left-right mirrors. Not used for decisions.
pub fn p_node_types_variable_literal(children: &[KeySet]) -> TypeSet {
    static PATTERNS: std::sync::OnceLock<Vec<(EmbType, Vec<Pattern>)>> = std::sync::OnceLock::new();
    let pats = PATTERNS.get_or_init(case_patterns);
    let cls = classes(children);
    let mirrored: Vec<KeySet> = children
        .iter()
        .map(|&c| child_keys(c.types().hmirror(), c.is_q()))
        .collect();
    let mcls = classes(&mirrored);
    let mut out = TypeSet::EMPTY;
    for (t, ps) in pats {
        if ps.iter().any(|p| pattern_feasible(&cls, p)) {
            out.insert(*t);
        }
        if ps.iter().any(|p| pattern_feasible(&mcls, p)) {
            out.insert(t.hmirror());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> KeySet {
        KeySet::of_types(TypeSet::single(ty(s)))
    }
    fn ts(s: &str) -> TypeSet {
        TypeSet::single(ty(s))
    }

    #[test]
    fn fixed_rules_examples() {
        assert!(p_node_types_fixed_literal(&[ts("NRR"), ts("NBR")]).is_empty());
        assert_eq!(p_node_types_fixed_literal(&[ts("RRR"), ts("RBR")]), ts("RBR"));
        assert!(p_node_types_fixed_literal(&[ts("LLL").union(ts("NLL")), ts("RRR")]).is_empty());
        // exact geometry: the left child covers every gap from the left
        assert!(p_node_types_fixed(&[k("NRR"), k("NBR")]).is_empty());
        assert_eq!(p_node_types_fixed(&[k("RRR"), k("RBR")]), ts("RRR"));
        assert_eq!(p_node_types_fixed(&[KeySet(1 << Q_RRR), KeySet(1 << Q_LLL)]), ts("NNN"));
    }

    #[test]
    fn variable_examples() {
        let q = child_keys(ts("RRR"), true);
        assert!(p_node_types_variable(&[q, k("NRR")]).contains(ty("NRR")));
        assert!(!p_node_types_variable(&[k("NBR"), k("NBR")]).contains(ty("NRR")));
        assert!(p_node_types_variable(&[k("LBR"), k("LBR"), k("LBR")]).contains(ty("LBR")));
        assert!(p_node_types_variable_literal(&[q, k("NRR")]).contains(ty("NRR")));
        assert!(!p_node_types_variable_literal(&[k("NBR"), k("NBR")]).contains(ty("NRR")));
        assert!(p_node_types_variable_literal(&[k("LBR"), k("LBR")]).contains(ty("LBR")));
    }

    #[test]
    fn variable_matches_permutations() {
        let keys: Vec<KeySet> = (0..NUM_TYPES).map(|i| KeySet(1 << i)).chain([KeySet::Q]).collect();
        for a in 0..keys.len() {
            for b in a..keys.len() {
                for c in b..keys.len() {
                    let ch = [keys[a], keys[b], keys[c]];
                    assert_eq!(p_node_types_variable(&ch), p_node_types_variable_brute(&ch), "{ch:?}");
                }
            }
        }
        // children with several options
        let mixed = [KeySet(0b1011), KeySet(0b110000), KeySet::Q, KeySet(1 << 7 | 1 << 12)];
        assert_eq!(p_node_types_variable(&mixed), p_node_types_variable_brute(&mixed));
    }

    #[test]
    fn empty_child_kills_everything() {
        assert!(p_node_types_variable(&[KeySet(0), KeySet::Q]).is_empty());
        assert!(p_node_types_fixed(&[KeySet(0), KeySet::Q]).is_empty());
    }
}
