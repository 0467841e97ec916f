//! Instance generators. Every generator builds the embedding directly through
//! left-to-right orders, so outputs are valid plane st-graphs by construction
//! (and are re-checked by `Builder::build`).

use crate::graph::{Builder, PlaneStGraph};
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashSet, VecDeque};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn insert_after(list: &mut Vec<usize>, after: usize, e: usize) {
    let i = list.iter().position(|&x| x == after).expect("edge present");
    list.insert(i + 1, e);
}

fn insert_before(list: &mut Vec<usize>, before: usize, e: usize) {
    let i = list.iter().position(|&x| x == before).expect("edge present");
    list.insert(i, e);
}

/// Grid of w x h rhombi. Vertex (i,j) has id i*(h+1)+j; the j-direction goes
/// up-left and the i-direction up-right.
pub fn rhombus_grid(w: usize, h: usize) -> Result<PlaneStGraph, Error> {
    if w == 0 && h == 0 {
        return Err(Error::Precondition("rhombus_grid needs w + h >= 1".into()));
    }
    let id = |i: usize, j: usize| i * (h + 1) + j;
    let mut b = Builder::new((w + 1) * (h + 1));
    // in_lr[(i,j)] = [from (i-1,j), from (i,j-1)]; out_lr = [to (i,j+1), to (i+1,j)]
    for i in 0..=w {
        for j in 0..=h {
            if j < h {
                b.push_edge(id(i, j), id(i, j + 1));
            }
            if i < w {
                b.push_edge(id(i, j), id(i + 1, j));
            }
        }
    }
    for i in 0..=w {
        for j in 0..=h {
            let v = id(i, j);
            let mut ins = b.in_lr[v].clone();
            ins.sort_by_key(|&e| if b.edges[e].0 + 1 == v { 1 } else { 0 });
            b.in_lr[v] = ins;
        }
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

/// Random plane st-graph on exactly n vertices, grown by adding faces along the
/// right boundary.
pub fn random_planar_st(n: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    if n < 2 {
        return Err(Error::Precondition("random_planar_st needs n >= 2".into()));
    }
    let mut r = rng(seed);
    let first = r.gen_range(2..=n.min(4));
    let mut b = Builder::new(first);
    for v in 0..first - 1 {
        b.push_edge(v, v + 1);
    }
    let (s, t) = (0, first - 1);
    let mut chords = r.gen_range(0..=n / 2);
    let mut guard = 0;
    while b.n < n || (chords > 0 && guard < 200) {
        guard += 1;
        let rb = b.right_boundary(s, t);
        let i = r.gen_range(0..rb.len() - 1);
        let j = r.gen_range(i + 1..rb.len());
        let k = if b.n < n { r.gen_range(0..=2usize.min(n - b.n)) } else { 0 };
        if k == 0 {
            if j - i < 2 || b.has_edge(rb[i], rb[j]) {
                continue;
            }
            if b.n >= n {
                chords -= 1;
            }
        }
        b.push_path(rb[i], rb[j], k);
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

/// Plane st-graph on n vertices in which every internal face has a left path
/// with at least two edges and a right path with at least three.
pub fn long_right_path(n: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    if n < 2 {
        return Err(Error::Precondition("long_right_path needs n >= 2".into()));
    }
    let mut r = rng(seed);
    let first = match n {
        2 => 2,
        4 => 4,
        _ => 3,
    };
    let mut b = Builder::new(first);
    for v in 0..first - 1 {
        b.push_edge(v, v + 1);
    }
    let t = first - 1;
    while b.n < n {
        let rem = n - b.n;
        let opts: Vec<usize> = (2..=4).filter(|&c| c <= rem && rem - c != 1).collect();
        let c = opts[r.gen_range(0..opts.len())];
        let rb = b.right_boundary(0, t);
        let i = r.gen_range(0..rb.len() - 2);
        let j = r.gen_range(i + 2..rb.len());
        b.push_path(rb[i], rb[j], c);
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

fn subdivide(b: &mut Builder, e: usize) -> usize {
    let (u, v) = b.edges[e];
    let w = b.add_vertex();
    b.edges[e] = (u, w);
    let e2 = b.edges.len();
    b.edges.push((w, v));
    let i = b.in_lr[v].iter().position(|&x| x == e).unwrap();
    b.in_lr[v][i] = e2;
    b.in_lr[w].push(e);
    b.out_lr[w].push(e2);
    w
}

fn parallel_path(b: &mut Builder, e: usize, right: bool) -> usize {
    let (u, v) = b.edges[e];
    let w = b.add_vertex();
    let e1 = b.edges.len();
    b.edges.push((u, w));
    let e2 = b.edges.len();
    b.edges.push((w, v));
    if right {
        insert_after(&mut b.out_lr[u], e, e1);
        insert_after(&mut b.in_lr[v], e, e2);
    } else {
        insert_before(&mut b.out_lr[u], e, e1);
        insert_before(&mut b.in_lr[v], e, e2);
    }
    b.in_lr[w].push(e1);
    b.out_lr[w].push(e2);
    w
}

/// Adds (u,v) next to the 2-path u -> w -> v, if w has exactly that in/out edge.
fn close_two_path(b: &mut Builder, w: usize, right: bool) -> bool {
    if b.in_lr[w].len() != 1 || b.out_lr[w].len() != 1 {
        return false;
    }
    let (ea, eb) = (b.in_lr[w][0], b.out_lr[w][0]);
    let (u, v) = (b.edges[ea].0, b.edges[eb].1);
    if b.has_edge(u, v) {
        return false;
    }
    let e = b.edges.len();
    b.edges.push((u, v));
    if right {
        insert_after(&mut b.out_lr[u], ea, e);
        insert_after(&mut b.in_lr[v], eb, e);
    } else {
        insert_before(&mut b.out_lr[u], ea, e);
        insert_before(&mut b.in_lr[v], eb, e);
    }
    true
}

fn sp_step(b: &mut Builder, r: &mut ChaCha8Rng) {
    loop {
        match r.gen_range(0..3) {
            0 => {
                let e = r.gen_range(0..b.edges.len());
                subdivide(b, e);
                return;
            }
            1 => {
                let e = r.gen_range(0..b.edges.len());
                let right = r.gen_bool(0.5);
                parallel_path(b, e, right);
                return;
            }
            _ => {
                let w = r.gen_range(0..b.n);
                let right = r.gen_bool(0.5);
                if close_two_path(b, w, right) {
                    // no new vertex; keep going so the count still advances
                    continue;
                }
            }
        }
    }
}

/// Random two-terminal series-parallel st-graph on exactly n vertices.
pub fn series_parallel(n: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    if n < 2 {
        return Err(Error::Precondition("series_parallel needs n >= 2".into()));
    }
    let mut r = rng(seed);
    let mut b = Builder::new(2);
    b.push_edge(0, 1);
    while b.n < n {
        sp_step(&mut b, &mut r);
    }
    // a few extra transitive edges over 2-paths
    for _ in 0..r.gen_range(0..=n / 3) {
        let w = r.gen_range(0..b.n);
        let right = r.gen_bool(0.5);
        close_two_path(&mut b, w, right);
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

fn stack_into(b: &mut Builder, p: &PlaneStGraph, face: usize) {
    let faces = p.faces();
    let f = &faces.faces[face];
    let w = b.add_vertex();
    let (sf, tf) = (f.s_f, f.t_f);
    let e1 = b.edges.len();
    b.edges.push((sf, w));
    let e2 = b.edges.len();
    b.edges.push((w, tf));
    let e3 = b.edges.len();
    if f.left_edges.len() == 2 {
        let m = f.left_path[1];
        b.edges.push((m, w));
        insert_after(&mut b.out_lr[sf], f.left_edges[0], e1);
        insert_after(&mut b.in_lr[tf], f.left_edges[1], e2);
        b.out_lr[m].push(e3);
        b.in_lr[w] = vec![e3, e1];
        b.out_lr[w] = vec![e2];
    } else {
        let m = f.right_path[1];
        b.edges.push((w, m));
        insert_after(&mut b.out_lr[sf], f.left_edges[0], e1);
        insert_after(&mut b.in_lr[tf], f.left_edges[0], e2);
        b.in_lr[m].insert(0, e3);
        b.in_lr[w] = vec![e1];
        b.out_lr[w] = vec![e2, e3];
    }
}

/// Stacked triangulation (triconnected) on n >= 3 vertices containing (s,t).
pub fn stacked_triangulation(n: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    if n < 3 {
        return Err(Error::Precondition("stacked_triangulation needs n >= 3".into()));
    }
    let mut r = rng(seed);
    let mut b = Builder::new(3);
    b.push_edge(0, 1);
    b.push_edge(1, 2);
    b.push_edge(0, 2);
    while b.n < n {
        let p = b.build().map_err(|r| Error::Invalid(r.to_string()))?;
        let inner: Vec<usize> = p.faces().internal().map(|f| f.id).collect();
        let f = inner[r.gen_range(0..inner.len())];
        stack_into(&mut b, &p, f);
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

/// A stacked triangulation on `core` vertices with series-parallel pieces
/// substituted for random edges until n vertices are reached. Its SPQR-tree has
/// an R-node with non-trivial children.
pub fn random_rigid(n: usize, core: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    let core = core.clamp(3, n);
    let p = stacked_triangulation(core, seed)?;
    let mut r = rng(seed ^ 0x5eed);
    let mut b = Builder::from_plane(&p);
    while b.n < n {
        sp_step(&mut b, &mut r);
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

/// Plane st-graph on n vertices whose internal faces are all generalized
/// triangles or rhombi.
pub fn random_special(n: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    if n < 2 {
        return Err(Error::Precondition("random_special needs n >= 2".into()));
    }
    let mut r = rng(seed);
    let first = r.gen_range(2..=n.min(4));
    let mut b = Builder::new(first);
    for v in 0..first - 1 {
        b.push_edge(v, v + 1);
    }
    let t = first - 1;
    let mut chords = r.gen_range(0..=n / 3);
    let mut guard = 0;
    while (b.n < n || chords > 0) && guard < 1000 {
        guard += 1;
        let rb = b.right_boundary(0, t);
        match r.gen_range(0..3) {
            0 => {
                // transitive chord over a subpath of >= 2 edges
                if rb.len() < 3 {
                    continue;
                }
                let i = r.gen_range(0..rb.len() - 2);
                let j = r.gen_range(i + 2..rb.len());
                if b.has_edge(rb[i], rb[j]) {
                    continue;
                }
                b.push_path(rb[i], rb[j], 0);
                chords = chords.saturating_sub(1);
            }
            1 if b.n < n => {
                // new path over a single boundary edge
                let i = r.gen_range(0..rb.len() - 1);
                let k = r.gen_range(1..=(n - b.n).min(3));
                b.push_path(rb[i], rb[i + 1], k);
            }
            2 if b.n < n => {
                // rhombus over a 2-edge subpath
                if rb.len() < 3 {
                    continue;
                }
                let i = r.gen_range(0..rb.len() - 2);
                b.push_path(rb[i], rb[i + 2], 1);
            }
            _ => {}
        }
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

/// Plane st-graph on at least n vertices whose internal faces are all rhombi:
/// a path s, a, t with rhombi stacked on 2-edge subpaths of the right
/// boundary.
pub fn random_rhombi(n: usize, seed: u64) -> Result<PlaneStGraph, Error> {
    if n < 3 {
        return Err(Error::Precondition("random_rhombi needs n >= 3".into()));
    }
    let mut r = rng(seed);
    let mut b = Builder::new(3);
    b.push_edge(0, 1);
    b.push_edge(1, 2);
    while b.n < n {
        let rb = b.right_boundary(0, 2);
        let i = r.gen_range(0..rb.len() - 2);
        b.push_path(rb[i], rb[i + 2], 1);
    }
    b.build().map_err(|r| Error::Invalid(r.to_string()))
}

/// Canonical relabelling: preorder of a DFS from s taking out-edges left to
/// right. Returns the relabelled graph with edges listed by (tail, out position).
pub fn canonical_form(p: &PlaneStGraph) -> PlaneStGraph {
    let n = p.n();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = vec![p.s];
    while let Some(v) = stack.pop() {
        if label[v] != usize::MAX {
            continue;
        }
        label[v] = next;
        next += 1;
        for &e in p.out_lr[v].iter().rev() {
            let w = p.g.edges[e].1;
            if label[w] == usize::MAX {
                stack.push(w);
            }
        }
    }
    let mut inv = vec![0; n];
    for v in 0..n {
        inv[label[v]] = v;
    }
    let mut new_e = vec![0; p.m()];
    let mut b = Builder::new(n);
    for &v in &inv {
        for &e in &p.out_lr[v] {
            new_e[e] = b.edges.len();
            b.edges.push((label[v], label[p.g.edges[e].1]));
        }
    }
    for v in 0..n {
        b.out_lr[label[v]] = p.out_lr[v].iter().map(|&e| new_e[e]).collect();
        b.in_lr[label[v]] = p.in_lr[v].iter().map(|&e| new_e[e]).collect();
    }
    PlaneStGraph {
        g: crate::graph::Digraph::new(n, b.edges),
        s: label[p.s],
        t: label[p.t],
        out_lr: b.out_lr,
        in_lr: b.in_lr,
    }
}

/// Code of the embedded structure; equal codes iff the embedded graphs are
/// isomorphic (mirrors distinguished).
pub fn canonical_code(p: &PlaneStGraph) -> Vec<u16> {
    let c = canonical_form(p);
    let mut code = vec![c.n() as u16];
    for v in 0..c.n() {
        code.push(c.out_lr[v].len() as u16);
        code.extend(c.out_lr[v].iter().map(|&e| c.g.edges[e].1 as u16));
        code.push(c.in_lr[v].len() as u16);
        code.extend(c.in_lr[v].iter().map(|&e| c.g.edges[e].0 as u16));
    }
    code
}

/// Every plane st-graph with at most `max_n` vertices, mirror images counted
/// separately, in canonical form, sorted by (n, m, code).
pub fn all_plane_st_graphs(max_n: usize) -> Vec<PlaneStGraph> {
    all_plane_st_graphs_where(max_n, |_, _| true)
}

/// Like `all_plane_st_graphs`, restricted to graphs whose every internal face
/// satisfies `face_ok(left edges, right edges)`. Faces are added in a
/// topological order of the dual, so every intermediate graph of a sequence
/// producing an admissible graph is admissible as well.
pub fn all_plane_st_graphs_where(max_n: usize, face_ok: impl Fn(usize, usize) -> bool) -> Vec<PlaneStGraph> {
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    for len in 2..=max_n {
        let mut b = Builder::new(len);
        for v in 0..len - 1 {
            b.push_edge(v, v + 1);
        }
        let p = b.build().unwrap();
        if seen.insert(canonical_code(&p)) {
            queue.push_back(canonical_form(&p));
        }
    }
    while let Some(p) = queue.pop_front() {
        let b0 = Builder::from_plane(&p);
        let rb = b0.right_boundary(p.s, p.t);
        for i in 0..rb.len() - 1 {
            for j in i + 1..rb.len() {
                for k in 0..=(max_n - p.n()) {
                    if k == 0 && (j - i < 2 || b0.has_edge(rb[i], rb[j])) {
                        continue;
                    }
                    if !face_ok(j - i, k + 1) {
                        continue;
                    }
                    let mut b = b0.clone();
                    b.push_path(rb[i], rb[j], k);
                    let q = b.build().expect("face addition keeps validity");
                    let code = canonical_code(&q);
                    if seen.insert(code) {
                        queue.push_back(canonical_form(&q));
                    }
                }
            }
        }
        out.push(p);
    }
    out.sort_by_cached_key(|p| (p.n(), p.m(), canonical_code(p)));
    out
}

/// Plane st-graphs with exactly n vertices, one representative per pair of
/// mirror images.
pub fn exhaustive_small(n: usize) -> Vec<PlaneStGraph> {
    let mut seen = HashSet::new();
    all_plane_st_graphs(n)
        .into_iter()
        .filter(|p| p.n() == n)
        .filter(|p| {
            let key = canonical_code(p).min(canonical_code(&p.mirror()));
            seen.insert(key)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    RhombusGrid { w: usize, h: usize },
    LongRightPath { n: usize },
    SeriesParallel { n: usize },
    RandomPlanarSt { n: usize },
    ExhaustiveSmall { n: usize },
}

/// Single entry point used by the CLI.
pub fn generate(kind: &GenKind, seed: u64) -> Result<Vec<PlaneStGraph>, Error> {
    Ok(match *kind {
        GenKind::RhombusGrid { w, h } => vec![rhombus_grid(w, h)?],
        GenKind::LongRightPath { n } => vec![long_right_path(n, seed)?],
        GenKind::SeriesParallel { n } => vec![series_parallel(n, seed)?],
        GenKind::RandomPlanarSt { n } => vec![random_planar_st(n, seed)?],
        GenKind::ExhaustiveSmall { n } => {
            if n < 2 {
                return Err(Error::Precondition("exhaustive_small needs n >= 2".into()));
            }
            exhaustive_small(n)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{classify_faces, FaceKind};

    #[test]
    fn grid_1x1_is_diamond() {
        assert_eq!(rhombus_grid(1, 1).unwrap(), fixtures::diamond());
    }

    #[test]
    fn exhaustive_three() {
        let gs = exhaustive_small(3);
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[0].m(), 2);
        assert_eq!(gs[1].m(), 3);
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_planar_st(20, 7).unwrap(), random_planar_st(20, 7).unwrap());
        assert_eq!(random_planar_st(20, 7).unwrap().n(), 20);
    }

    #[test]
    fn long_right_shapes() {
        for seed in 0..20 {
            let p = long_right_path(15 + seed as usize, seed).unwrap();
            assert_eq!(p.n(), 15 + seed as usize);
            for f in p.faces().internal() {
                assert!(f.left_edges.len() >= 2 && f.right_edges.len() >= 3);
            }
        }
    }

    #[test]
    fn special_shapes() {
        for seed in 0..20 {
            let p = random_special(12, seed).unwrap();
            assert!(classify_faces(&p).kinds.iter().all(|(_, k)| *k != FaceKind::Other));
        }
    }

    #[test]
    fn rhombi_shapes() {
        for seed in 0..20 {
            let p = random_rhombi(15, seed).unwrap();
            assert_eq!(p.n(), 15);
            assert!(classify_faces(&p).kinds.iter().all(|(_, k)| *k == FaceKind::Rhombus));
        }
    }

    #[test]
    fn stacked_has_st_edge() {
        let p = stacked_triangulation(8, 1).unwrap();
        assert!(p.g.find_edge(p.s, p.t).is_some());
        assert_eq!(p.m(), 3 * 8 - 6);
    }
}
