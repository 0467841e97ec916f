//! Sphere-cut decompositions of plane graphs.
//!
//! A decomposition is a ternary tree whose leaves are the edges, rooted at the
//! leaf of a chosen root edge. Every other node `a` stands for the arc to its
//! parent and the edge set `E_a` of the leaves below it. The middle set
//! `mid(a)` holds the vertices incident to both `E_a` and the rest; the noose
//! is a closed curve through the faces that meets the graph exactly in
//! `mid(a)` and separates `E_a` from the rest. Both sides must be connected.

use crate::graph::PlaneStGraph;
use crate::Error;
use serde::Serialize;
use std::collections::BTreeSet;

/// Subsets of up to this many non-root edges get an optimal decomposition.
pub const EXHAUSTIVE_EDGES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// The edge of a leaf.
    pub edge: Option<usize>,
    /// Edges below this node, sorted.
    pub edges: Vec<usize>,
    /// Sorted middle set.
    pub mid: Vec<usize>,
    /// Cyclic order of the noose, starting at its smallest vertex.
    pub noose: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereCut {
    pub nodes: Vec<ScNode>,
    /// The leaf of the root edge.
    pub root: usize,
    pub root_edge: usize,
}

impl SphereCut {
    pub fn width(&self) -> usize {
        self.nodes.iter().enumerate().filter(|&(i, _)| i != self.root).map(|(_, n)| n.mid.len()).max().unwrap_or(0)
    }

    /// Non-root nodes, children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                if v != self.root {
                    out.push(v);
                }
                continue;
            }
            stack.push((v, true));
            for &c in self.nodes[v].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }
}

fn middle(p: &PlaneStGraph, inside: &[bool]) -> Vec<usize> {
    let mut has = vec![[false; 2]; p.n()];
    for (e, &(u, v)) in p.g.edges.iter().enumerate() {
        let side = inside[e] as usize;
        has[u][side] = true;
        has[v][side] = true;
    }
    (0..p.n()).filter(|&v| has[v][0] && has[v][1]).collect()
}

fn connected(p: &PlaneStGraph, inside: &[bool], side: bool) -> bool {
    let mut parent: Vec<usize> = (0..p.n()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let mut touched = BTreeSet::new();
    for (e, &(u, v)) in p.g.edges.iter().enumerate() {
        if inside[e] == side {
            touched.insert(u);
            touched.insert(v);
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let roots: BTreeSet<usize> = touched.iter().map(|&v| find(&mut parent, v)).collect();
    roots.len() <= 1
}

/// Middle set and noose of the edge set `inside`, or `None` if no noose
/// separates it from the rest (a face met twice, a vertex passed twice, or a
/// disconnected side).
pub fn noose_of(p: &PlaneStGraph, cycles: &[Vec<usize>], inside: &[bool]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n_in = inside.iter().filter(|&&b| b).count();
    if n_in == 0 || n_in == inside.len() {
        return None;
    }
    if !connected(p, inside, true) || !connected(p, inside, false) {
        return None;
    }
    let head = |d: usize| if d % 2 == 0 { p.g.edges[d / 2].1 } else { p.g.edges[d / 2].0 };
    let mut next = vec![usize::MAX; p.n()];
    let mut indeg = vec![0usize; p.n()];
    let mut count = 0;
    for c in cycles {
        let len = c.len();
        let mut x = None;
        let mut y = None;
        for i in 0..len {
            let (a, b) = (inside[c[i] / 2], inside[c[(i + 1) % len] / 2]);
            if a != b {
                // the transition happens at the head of dart c[i]
                let w = head(c[i]);
                let slot = if b { &mut x } else { &mut y };
                if slot.is_some() {
                    return None;
                }
                *slot = Some(w);
            }
        }
        if let (Some(x), Some(y)) = (x, y) {
            if next[x] != usize::MAX {
                return None;
            }
            next[x] = y;
            indeg[y] += 1;
            count += 1;
        }
    }
    let mid = middle(p, inside);
    let on: Vec<usize> = (0..p.n()).filter(|&v| next[v] != usize::MAX).collect();
    if on != mid || on.iter().any(|&v| indeg[v] != 1) || count != mid.len() {
        return None;
    }
    let start = mid[0];
    let mut noose = vec![start];
    let mut v = next[start];
    while v != start {
        if noose.len() > mid.len() {
            return None;
        }
        noose.push(v);
        v = next[v];
    }
    (noose.len() == mid.len()).then_some((mid, noose))
}

struct Build<'a> {
    p: &'a PlaneStGraph,
    cycles: Vec<Vec<usize>>,
    nodes: Vec<ScNode>,
}

impl<'a> Build<'a> {
    fn node(&mut self, edges: Vec<usize>, children: Vec<usize>) -> Result<usize, Error> {
        let mut inside = vec![false; self.p.m()];
        for &e in &edges {
            inside[e] = true;
        }
        let (mid, noose) = noose_of(self.p, &self.cycles, &inside)
            .ok_or_else(|| Error::Invalid(format!("edge set {edges:?} has no noose")))?;
        let id = self.nodes.len();
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        let edge = (children.is_empty()).then(|| edges[0]);
        self.nodes.push(ScNode { parent: None, children, edge, edges, mid, noose });
        Ok(id)
    }

    fn inside_of(&self, edges: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.p.m()];
        for &e in edges {
            inside[e] = true;
        }
        inside
    }
}

/// Builds a sphere-cut decomposition rooted at the leaf of `root_edge`. The
/// graph should be 2-connected; on rigid skeletons (up to
/// `EXHAUSTIVE_EDGES` other edges) the width is optimal, larger inputs are
/// merged greedily with a sweep along the st-order as fallback.
pub fn build_sphere_cut(p: &PlaneStGraph, root_edge: usize) -> Result<SphereCut, Error> {
    if root_edge >= p.m() {
        return Err(Error::Invalid(format!("no edge {root_edge}")));
    }
    let others: Vec<usize> = (0..p.m()).filter(|&e| e != root_edge).collect();
    if others.is_empty() {
        return Err(Error::Precondition("a sphere-cut decomposition needs at least two edges".into()));
    }
    let mut b = Build { p, cycles: p.dart_cycles(), nodes: Vec::new() };
    let top = if others.len() <= EXHAUSTIVE_EDGES {
        exhaustive(&mut b, &others)?
    } else {
        match greedy(&mut b, &others) {
            Ok(t) => t,
            Err(_) => {
                b.nodes.clear();
                sweep(&mut b, &others)?
            }
        }
    };
    let root = b.nodes.len();
    b.nodes[top].parent = Some(root);
    b.nodes.push(ScNode {
        parent: None,
        children: vec![top],
        edge: Some(root_edge),
        edges: vec![root_edge],
        mid: vec![p.g.edges[root_edge].0.min(p.g.edges[root_edge].1), p.g.edges[root_edge].0.max(p.g.edges[root_edge].1)],
        noose: Vec::new(),
    });
    let root_noose = {
        let inside = b.inside_of(&[root_edge]);
        noose_of(p, &b.cycles, &inside).map(|x| x.1).unwrap_or_default()
    };
    b.nodes[root].noose = root_noose;
    Ok(SphereCut { nodes: b.nodes, root, root_edge })
}

/// `noose_of` on bitmasks, for the exhaustive search: bit i stands for
/// `others[i]`, bit k for the root edge, which is always outside.
struct MaskNoose {
    inc: Vec<u32>,
    /// Per face: (bit of the dart's edge, head of the dart).
    faces: Vec<Vec<(u32, usize)>>,
    next: Vec<usize>,
    indeg: Vec<u8>,
}

impl MaskNoose {
    fn new(p: &PlaneStGraph, cycles: &[Vec<usize>], others: &[usize]) -> Self {
        let k = others.len();
        let mut bit = vec![1u32 << k; p.m()];
        for (i, &e) in others.iter().enumerate() {
            bit[e] = 1 << i;
        }
        let mut inc = vec![0u32; p.n()];
        for (e, &(u, v)) in p.g.edges.iter().enumerate() {
            inc[u] |= bit[e];
            inc[v] |= bit[e];
        }
        let head = |d: usize| if d % 2 == 0 { p.g.edges[d / 2].1 } else { p.g.edges[d / 2].0 };
        let faces = cycles.iter().map(|c| c.iter().map(|&d| (bit[d / 2], head(d))).collect()).collect();
        MaskNoose { inc, faces, next: vec![usize::MAX; p.n()], indeg: vec![0; p.n()] }
    }

    fn connected(&self, set: u32) -> bool {
        if set == 0 {
            return true;
        }
        let mut reach = set & set.wrapping_neg();
        loop {
            let mut grow = reach;
            for &i in &self.inc {
                if i & reach != 0 {
                    grow |= i & set;
                }
            }
            if grow == reach {
                return reach == set;
            }
            reach = grow;
        }
    }

    /// Size of the middle set of `inside` if it has a noose.
    fn width(&mut self, inside: u32, outside: u32) -> Option<usize> {
        if !self.connected(inside) || !self.connected(outside) {
            return None;
        }
        let mut touched = Vec::new();
        let ok = self.link(inside, &mut touched);
        let res = ok.and_then(|count| {
            let mid: Vec<usize> =
                (0..self.inc.len()).filter(|&v| self.inc[v] & inside != 0 && self.inc[v] & outside != 0).collect();
            if count != mid.len() || mid.iter().any(|&v| self.next[v] == usize::MAX || self.indeg[v] != 1) {
                return None;
            }
            let mut len = 1;
            let mut v = self.next[mid[0]];
            while v != mid[0] && len <= mid.len() {
                len += 1;
                v = self.next[v];
            }
            (len == mid.len()).then_some(mid.len())
        });
        for v in touched {
            self.next[v] = usize::MAX;
            self.indeg[v] = 0;
        }
        res
    }

    fn link(&mut self, inside: u32, touched: &mut Vec<usize>) -> Option<usize> {
        let mut count = 0;
        for c in &self.faces {
            let len = c.len();
            let (mut x, mut y) = (None, None);
            for i in 0..len {
                let (a, b) = (c[i].0 & inside != 0, c[(i + 1) % len].0 & inside != 0);
                if a != b {
                    let slot = if b { &mut x } else { &mut y };
                    if slot.is_some() {
                        return None;
                    }
                    *slot = Some(c[i].1);
                }
            }
            if let (Some(x), Some(y)) = (x, y) {
                if self.next[x] != usize::MAX {
                    return None;
                }
                self.next[x] = y;
                self.indeg[y] += 1;
                touched.push(x);
                touched.push(y);
                count += 1;
            }
        }
        Some(count)
    }
}

fn exhaustive(b: &mut Build, others: &[usize]) -> Result<usize, Error> {
    let k = others.len();
    let full = (1usize << k) - 1;
    let mut width = vec![usize::MAX; 1 << k];
    let mut oracle = MaskNoose::new(b.p, &b.cycles, others);
    for mask in 1..=full {
        if let Some(w) = oracle.width(mask as u32, (full ^ mask) as u32 | 1 << k) {
            width[mask] = w;
        }
    }
    let mut best = vec![usize::MAX; 1 << k];
    let mut split = vec![0usize; 1 << k];
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        if width[mask] == usize::MAX {
            continue;
        }
        if mask.count_ones() == 1 {
            best[mask] = width[mask];
            continue;
        }
        let low = mask & mask.wrapping_neg();
        // submasks containing the lowest bit, so each split is seen once
        let mut sub = (mask - 1) & mask;
        while sub > 0 {
            if sub & low != 0 {
                let rest = mask ^ sub;
                if best[sub] != usize::MAX && best[rest] != usize::MAX {
                    let w = best[sub].max(best[rest]).max(width[mask]);
                    if w < best[mask] {
                        best[mask] = w;
                        split[mask] = sub;
                    }
                }
            }
            sub = (sub - 1) & mask;
        }
    }
    if best[full] == usize::MAX {
        return Err(Error::Invalid("no sphere-cut decomposition exists".into()));
    }
    fn make(b: &mut Build, others: &[usize], split: &[usize], mask: usize) -> Result<usize, Error> {
        let es: Vec<usize> = (0..others.len()).filter(|i| mask >> i & 1 == 1).map(|i| others[i]).collect();
        if mask.count_ones() == 1 {
            return b.node(es, Vec::new());
        }
        let l = make(b, others, split, split[mask])?;
        let r = make(b, others, split, mask ^ split[mask])?;
        b.node(es, vec![l, r])
    }
    make(b, others, &split, full)
}

fn greedy(b: &mut Build, others: &[usize]) -> Result<usize, Error> {
    let mut clusters: Vec<(Vec<usize>, usize)> = Vec::new();
    for &e in others {
        let id = b.node(vec![e], Vec::new())?;
        clusters.push((vec![e], id));
    }
    while clusters.len() > 1 {
        let mut pick: Option<((usize, usize, usize, usize), Vec<usize>)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let mut u: Vec<usize> = clusters[i].0.iter().chain(&clusters[j].0).copied().collect();
                u.sort_unstable();
                if let Some((mid, _)) = noose_of(b.p, &b.cycles, &b.inside_of(&u)) {
                    let key = (mid.len(), u.len(), i, j);
                    if pick.as_ref().map_or(true, |(k, _)| key < *k) {
                        pick = Some((key, u));
                    }
                }
            }
        }
        let ((_, _, i, j), u) = pick.ok_or_else(|| Error::Invalid("greedy merging got stuck".into()))?;
        let id = b.node(u.clone(), vec![clusters[i].1, clusters[j].1])?;
        clusters.remove(j);
        clusters[i] = (u, id);
    }
    Ok(clusters[0].1)
}

/// Caterpillar along the st-order: edges sorted by the rank of their tail
/// and their position in the tail's left-to-right order.
fn sweep(b: &mut Build, others: &[usize]) -> Result<usize, Error> {
    let order = b.p.g.topological_order().ok_or_else(|| Error::Invalid("graph has a cycle".into()))?;
    let mut key = vec![(0, 0); b.p.m()];
    for (r, &v) in order.iter().enumerate() {
        for (i, &e) in b.p.out_lr[v].iter().enumerate() {
            key[e] = (r, i);
        }
    }
    let mut es = others.to_vec();
    es.sort_by_key(|&e| key[e]);
    let mut acc = vec![es[0]];
    let mut cur = b.node(acc.clone(), Vec::new())?;
    for &e in &es[1..] {
        let leaf = b.node(vec![e], Vec::new())?;
        acc.push(e);
        let mut sorted = acc.clone();
        sorted.sort_unstable();
        cur = b.node(sorted, vec![cur, leaf])?;
    }
    Ok(cur)
}

/// Checks a decomposition against the graph; returns the violations.
pub fn validate_sphere_cut(p: &PlaneStGraph, sc: &SphereCut) -> Vec<String> {
    let mut bad = Vec::new();
    let cycles = p.dart_cycles();
    let mut seen = vec![0usize; p.m()];
    for n in &sc.nodes {
        if let Some(e) = n.edge {
            if n.children.is_empty() || n.parent.is_none() {
                if e < p.m() {
                    seen[e] += 1;
                } else {
                    bad.push(format!("leaf edge {e} out of range"));
                }
            }
        }
    }
    if seen.iter().any(|&c| c != 1) {
        bad.push("leaves are not in bijection with the edges".into());
    }
    let root = &sc.nodes[sc.root];
    if root.children.len() != 1 || root.edge != Some(sc.root_edge) || root.parent.is_some() {
        bad.push("root is not the leaf of the root edge".into());
    }
    for (i, n) in sc.nodes.iter().enumerate() {
        if i == sc.root {
            continue;
        }
        match (n.children.len(), n.edge) {
            (0, Some(_)) | (2, None) => {}
            _ => bad.push(format!("node {i} is not a leaf or a degree-3 node")),
        }
        if n.parent.map_or(true, |q| !sc.nodes[q].children.contains(&i)) {
            bad.push(format!("node {i}: broken parent link"));
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    // recompute edge sets bottom-up
    for i in sc.post_order() {
        let n = &sc.nodes[i];
        let mut es: Vec<usize> = match n.edge {
            Some(e) if n.children.is_empty() => vec![e],
            _ => n.children.iter().flat_map(|&c| sc.nodes[c].edges.clone()).collect(),
        };
        es.sort_unstable();
        let distinct = es.windows(2).all(|w| w[0] != w[1]);
        if !distinct {
            bad.push(format!("node {i}: children overlap (not laminar)"));
        }
        if es != n.edges {
            bad.push(format!("node {i}: stored edge set differs from its leaves"));
        }
        let mut inside = vec![false; p.m()];
        for &e in &es {
            if e < p.m() {
                inside[e] = true;
            }
        }
        let mid = middle(p, &inside);
        if mid != n.mid {
            bad.push(format!("node {i}: middle set mismatch"));
        }
        match noose_of(p, &cycles, &inside) {
            None => bad.push(format!("node {i}: noose condition violated")),
            Some((_, noose)) => {
                if noose != n.noose {
                    bad.push(format!("node {i}: noose mismatch"));
                }
            }
        }
    }
    bad
}

/// Boundary paths of the inside part along the noose: the maximal runs of
/// inside darts on faces the noose crosses, cut at middle vertices and where
/// the edge direction changes. Vertex lists.
pub fn outer_paths(p: &PlaneStGraph, inside: &[bool]) -> Vec<Vec<usize>> {
    let cycles = p.dart_cycles();
    let mid: BTreeSet<usize> = middle(p, inside).into_iter().collect();
    let tail = |d: usize| if d % 2 == 0 { p.g.edges[d / 2].0 } else { p.g.edges[d / 2].1 };
    let head = |d: usize| if d % 2 == 0 { p.g.edges[d / 2].1 } else { p.g.edges[d / 2].0 };
    let mut out = Vec::new();
    for c in &cycles {
        let len = c.len();
        let mixed = c.iter().any(|&d| inside[d / 2]) && c.iter().any(|&d| !inside[d / 2]);
        if !mixed {
            continue;
        }
        let start = (0..len).find(|&i| inside[c[i] / 2] && !inside[c[(i + len - 1) % len] / 2]).unwrap();
        let mut cur: Vec<usize> = Vec::new();
        let mut dir = None;
        for k in 0..len {
            let d = c[(start + k) % len];
            if !inside[d / 2] {
                break;
            }
            let fwd = d % 2 == 0;
            if cur.is_empty() {
                cur = vec![tail(d), head(d)];
                dir = Some(fwd);
                continue;
            }
            let at = *cur.last().unwrap();
            if mid.contains(&at) || dir != Some(fwd) {
                out.push(std::mem::take(&mut cur));
                cur = vec![tail(d), head(d)];
                dir = Some(fwd);
            } else {
                cur.push(head(d));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn k4_width_three() {
        let p = fixtures::k4();
        let r = p.g.find_edge(0, 3).unwrap();
        let sc = build_sphere_cut(&p, r).unwrap();
        assert!(validate_sphere_cut(&p, &sc).is_empty());
        assert_eq!(sc.width(), 3);
    }

    #[test]
    fn cycle_width_two() {
        let p = fixtures::diamond();
        let sc = build_sphere_cut(&p, 0).unwrap();
        assert!(validate_sphere_cut(&p, &sc).is_empty());
        assert_eq!(sc.width(), 2);
    }

    #[test]
    fn single_edge_noose() {
        let p = fixtures::k4();
        let mut inside = vec![false; p.m()];
        inside[0] = true;
        let (mid, noose) = noose_of(&p, &p.dart_cycles(), &inside).unwrap();
        assert_eq!(mid, vec![0, 1]);
        assert_eq!(noose, vec![0, 1]);
    }

    #[test]
    fn validator_catches_tampering() {
        let p = fixtures::k4();
        let sc = build_sphere_cut(&p, 5).unwrap();
        let top = sc.nodes[sc.root].children[0];
        let a = sc.nodes[top].children[0];
        let mut bad = sc.clone();
        bad.nodes[a].mid.push(99);
        assert!(validate_sphere_cut(&p, &bad).iter().any(|v| v.contains("middle set mismatch")));
        let mut bad = sc.clone();
        bad.nodes[a].noose.reverse();
        bad.nodes[a].noose.rotate_right(1);
        if bad.nodes[a].noose != sc.nodes[a].noose {
            assert!(validate_sphere_cut(&p, &bad).iter().any(|v| v.contains("noose mismatch")));
        }
        // swap two leaves between far apart subtrees so a side disconnects
        let leaves: Vec<usize> = (0..sc.nodes.len()).filter(|&i| sc.nodes[i].children.is_empty() && i != sc.root).collect();
        let mut found = false;
        for &x in &leaves {
            for &y in &leaves {
                let mut bad = sc.clone();
                let (ex, ey) = (bad.nodes[x].edge.unwrap(), bad.nodes[y].edge.unwrap());
                if ex >= ey {
                    continue;
                }
                bad.nodes[x].edge = Some(ey);
                bad.nodes[x].edges = vec![ey];
                bad.nodes[y].edge = Some(ex);
                bad.nodes[y].edges = vec![ex];
                if validate_sphere_cut(&p, &bad).iter().any(|v| v.contains("noose condition violated")) {
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn outer_paths_of_a_leaf() {
        let p = fixtures::k4();
        let mut inside = vec![false; p.m()];
        inside[0] = true;
        let paths = outer_paths(&p, &inside);
        assert_eq!(paths, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn larger_graphs_decompose() {
        for seed in 0..20 {
            let p = crate::gen::random_rigid(14, 10, seed).unwrap();
            let Some(r) = p.g.find_edge(p.s, p.t) else { continue };
            let sc = build_sphere_cut(&p, r).unwrap();
            assert!(validate_sphere_cut(&p, &sc).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn mask_noose_agrees_with_noose_of() {
        for p in crate::gen::all_plane_st_graphs(5).iter().filter(|p| p.m() >= 3 && p.m() <= 9) {
            let cycles = p.dart_cycles();
            let others: Vec<usize> = (0..p.m() - 1).collect();
            let k = others.len();
            let mut oracle = MaskNoose::new(p, &cycles, &others);
            for mask in 1usize..1 << k {
                let inside: Vec<bool> = (0..p.m()).map(|e| e < k && mask >> e & 1 == 1).collect();
                let want = noose_of(p, &cycles, &inside).map(|x| x.0.len());
                assert_eq!(oracle.width(mask as u32, ((1 << k) - 1 ^ mask) as u32 | 1 << k), want);
            }
        }
    }
}
