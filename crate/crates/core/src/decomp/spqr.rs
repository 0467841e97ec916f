//! SPQR-trees of plane st-graphs that contain the edge (s,t), built by
//! recursive split-pair decomposition.
//!
//! The tree is rooted at the Q-node of (s,t) and comes out normalized: every
//! S-node has exactly two children (lower part, upper part) and no skeleton
//! stores its parent virtual edge. Every skeleton edge points to a child; real
//! edges point to Q-nodes.

use crate::graph::{Digraph, PlaneStGraph};
use crate::Error;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NodeKind {
    Q,
    S,
    P,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkelEdge {
    pub u: usize,
    pub v: usize,
    pub child: usize,
    /// Edge id in the input graph when the child is a Q-node.
    pub real: Option<usize>,
}

/// Skeleton of an R-node with its inherited embedding. `plus` is the
/// skeleton plus the reference edge (poles), on local vertex ids: its edges
/// `0..k` are the skeleton edges in order and edge `k` is the reference edge,
/// drawn to the right of everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidSkeleton {
    pub vertices: Vec<usize>,
    pub plus: PlaneStGraph,
}

impl RigidSkeleton {
    pub fn local(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
    pub fn reference_edge(&self) -> usize {
        self.plus.m() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpqrNode {
    pub kind: NodeKind,
    pub poles: (usize, usize),
    pub parent: Option<usize>,
    /// S: [lower, upper]; P: left to right; R: in skeleton edge order.
    pub children: Vec<usize>,
    pub skeleton: Vec<SkelEdge>,
    /// Input edges of the pertinent graph, sorted.
    pub edges: Vec<usize>,
    #[serde(skip)]
    pub rigid: Option<RigidSkeleton>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpqrTree {
    pub nodes: Vec<SpqrNode>,
    pub root: usize,
    pub s: usize,
    pub t: usize,
    pub st_edge: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpqrStats {
    pub q: usize,
    pub s: usize,
    pub p: usize,
    pub r: usize,
}

impl SpqrTree {
    pub fn stats(&self) -> SpqrStats {
        let mut st = SpqrStats::default();
        for n in &self.nodes {
            match n.kind {
                NodeKind::Q => st.q += 1,
                NodeKind::S => st.s += 1,
                NodeKind::P => st.p += 1,
                NodeKind::R => st.r += 1,
            }
        }
        st
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
                continue;
            }
            stack.push((v, true));
            for &c in self.nodes[v].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

struct Ctx<'a> {
    p: &'a PlaneStGraph,
    rank: Vec<usize>,
    nodes: Vec<SpqrNode>,
}

/// Edge classes of `edges` with respect to the vertex pair {x,y}: two edges
/// are together when they share a vertex other than x and y. Edges are given
/// as (id, tail, head); ids are opaque. Classes are sorted by smallest member.
fn split_classes(edges: &[(usize, usize, usize)], x: usize, y: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let mut owner: std::collections::HashMap<usize, usize> = Default::default();
    for (i, &(_, a, b)) in edges.iter().enumerate() {
        for w in [a, b] {
            if w == x || w == y {
                continue;
            }
            match owner.get(&w) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
                None => {
                    owner.insert(w, i);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..edges.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(edges[i].0);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

impl<'a> Ctx<'a> {
    fn triple(&self, e: usize) -> (usize, usize, usize) {
        let (a, b) = self.p.g.edges[e];
        (e, a, b)
    }

    fn push(&mut self, kind: NodeKind, poles: (usize, usize), parent: Option<usize>, edges: Vec<usize>) -> usize {
        self.nodes.push(SpqrNode {
            kind,
            poles,
            parent,
            children: Vec::new(),
            skeleton: Vec::new(),
            edges,
            rigid: None,
        });
        self.nodes.len() - 1
    }

    fn attach(&mut self, node: usize, u: usize, v: usize, edges: Vec<usize>) {
        let child = self.decompose(edges, u, v, Some(node));
        let real = (self.nodes[child].kind == NodeKind::Q).then(|| self.nodes[child].edges[0]);
        self.nodes[node].children.push(child);
        self.nodes[node].skeleton.push(SkelEdge { u, v, child, real });
    }

    fn decompose(&mut self, mut edges: Vec<usize>, u: usize, v: usize, parent: Option<usize>) -> usize {
        edges.sort_unstable();
        if edges.len() == 1 {
            let id = self.push(NodeKind::Q, (u, v), parent, edges.clone());
            let e = edges[0];
            self.nodes[id].skeleton.push(SkelEdge { u, v, child: id, real: Some(e) });
            self.nodes[id].skeleton[0].child = usize::MAX;
            return id;
        }
        let trip: Vec<_> = edges.iter().map(|&e| self.triple(e)).collect();
        let classes = split_classes(&trip, u, v);
        if classes.len() >= 2 {
            let mut classes = classes;
            let key = |c: &Vec<usize>| {
                c.iter()
                    .filter_map(|&e| self.p.out_lr[u].iter().position(|&f| f == e))
                    .min()
                    .unwrap_or(usize::MAX)
            };
            classes.sort_by_key(key);
            let id = self.push(NodeKind::P, (u, v), parent, edges);
            for c in classes {
                self.attach(id, u, v, c);
            }
            return id;
        }
        if let Some(c) = self.first_cut_vertex(&edges, u, v) {
            let lower = self.reach_edges(&edges, u, c);
            let set: BTreeSet<usize> = lower.iter().copied().collect();
            let upper: Vec<usize> = edges.iter().copied().filter(|e| !set.contains(e)).collect();
            let id = self.push(NodeKind::S, (u, v), parent, edges);
            self.attach(id, u, c, lower);
            self.attach(id, c, v, upper);
            return id;
        }
        self.rigid(edges, u, v, parent)
    }

    /// Edges of the component of u once `c` is removed, plus their edges to c.
    fn reach_edges(&self, edges: &[usize], u: usize, c: usize) -> Vec<usize> {
        let g = &self.p.g;
        let mut seen = BTreeSet::new();
        seen.insert(u);
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &e in edges {
                let (a, b) = g.edges[e];
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if y != c && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        edges
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = g.edges[e];
                seen.contains(&a) || seen.contains(&b)
            })
            .collect()
    }

    fn first_cut_vertex(&self, edges: &[usize], u: usize, v: usize) -> Option<usize> {
        let g = &self.p.g;
        let mut verts: Vec<usize> = edges
            .iter()
            .flat_map(|&e| [g.edges[e].0, g.edges[e].1])
            .filter(|&w| w != u && w != v)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        verts.sort_by_key(|&w| self.rank[w]);
        verts.into_iter().find(|&c| {
            let r = self.reach_edges(edges, u, c);
            !r.iter().any(|&e| g.edges[e].0 == v || g.edges[e].1 == v)
        })
    }

    fn rigid(&mut self, edges: Vec<usize>, u: usize, v: usize, parent: Option<usize>) -> usize {
        let g = &self.p.g;
        const REF: usize = usize::MAX;
        let mut plus: Vec<(usize, usize, usize)> = edges.iter().map(|&e| self.triple(e)).collect();
        plus.push((REF, u, v));
        let verts: Vec<usize> = edges
            .iter()
            .flat_map(|&e| [g.edges[e].0, g.edges[e].1])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // inner parts of all split pairs other than the poles
        let mut cands: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for (i, &x) in verts.iter().enumerate() {
            for &y in &verts[i + 1..] {
                let cl = split_classes(&plus, x, y);
                if cl.len() < 2 {
                    continue;
                }
                let inner: Vec<usize> = cl.into_iter().filter(|c| !c.contains(&REF)).flatten().collect();
                if inner.len() >= 2 && inner.len() < edges.len() {
                    cands.push((x, y, inner));
                }
            }
        }
        cands.sort_by(|a, b| b.2.len().cmp(&a.2.len()).then(a.2.cmp(&b.2)));
        let mut chosen: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for (x, y, inner) in cands {
            if inner.iter().all(|e| used.contains(e)) {
                continue;
            }
            debug_assert!(inner.iter().all(|e| !used.contains(e)), "overlapping split components");
            used.extend(inner.iter().copied());
            // orient from the source of the part
            let (a, b) = if inner.iter().any(|&e| g.edges[e].0 == x) { (x, y) } else { (y, x) };
            chosen.push((a, b, inner));
        }
        // skeleton edges: virtual parts, then real edges, ordered by smallest input edge
        let mut skel: Vec<(usize, usize, Vec<usize>)> = chosen;
        for &e in &edges {
            if !used.contains(&e) {
                skel.push((g.edges[e].0, g.edges[e].1, vec![e]));
            }
        }
        skel.sort_by_key(|s| s.2[0]);
        let id = self.push(NodeKind::R, (u, v), parent, edges.clone());
        let mut owner = vec![usize::MAX; g.m()];
        for (i, s) in skel.iter().enumerate() {
            for &e in &s.2 {
                owner[e] = i;
            }
        }
        let sverts: Vec<usize> = skel
            .iter()
            .flat_map(|s| [s.0, s.1])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let local = |w: usize| sverts.binary_search(&w).expect("skeleton vertex");
        let collapse = |lst: &[usize]| {
            let mut out: Vec<usize> = Vec::new();
            for &e in lst {
                if owner[e] == usize::MAX {
                    continue;
                }
                if out.last() != Some(&owner[e]) {
                    out.push(owner[e]);
                }
            }
            out
        };
        let k = skel.len();
        let mut out_lr: Vec<Vec<usize>> = sverts.iter().map(|&w| collapse(&self.p.out_lr[w])).collect();
        let mut in_lr: Vec<Vec<usize>> = sverts.iter().map(|&w| collapse(&self.p.in_lr[w])).collect();
        out_lr[local(u)].push(k);
        in_lr[local(v)].push(k);
        let mut sedges: Vec<(usize, usize)> = skel.iter().map(|s| (local(s.0), local(s.1))).collect();
        sedges.push((local(u), local(v)));
        let plus_graph = PlaneStGraph::from_lr(Digraph::new(sverts.len(), sedges), out_lr, in_lr)
            .expect("rigid skeleton inherits a plane st-embedding");
        self.nodes[id].rigid = Some(RigidSkeleton { vertices: sverts.clone(), plus: plus_graph });
        for (a, b, part) in skel {
            self.attach(id, a, b, part);
        }
        id
    }
}

/// Builds the SPQR-tree of a plane st-graph containing the edge (s,t).
pub fn build_spqr(p: &PlaneStGraph) -> Result<SpqrTree, Error> {
    let st = p
        .g
        .find_edge(p.s, p.t)
        .ok_or_else(|| Error::Precondition("graph has no (s,t) edge, so it need not be biconnected".into()))?;
    let order = p.g.topological_order().ok_or_else(|| Error::Invalid("graph has a cycle".into()))?;
    let mut rank = vec![0; p.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut ctx = Ctx { p, rank, nodes: Vec::new() };
    let root = ctx.push(NodeKind::Q, (p.s, p.t), None, vec![st]);
    ctx.nodes[root].skeleton.push(SkelEdge { u: p.s, v: p.t, child: usize::MAX, real: Some(st) });
    let rest: Vec<usize> = (0..p.m()).filter(|&e| e != st).collect();
    if !rest.is_empty() {
        let c = ctx.decompose(rest, p.s, p.t, Some(root));
        ctx.nodes[root].children.push(c);
    }
    Ok(SpqrTree { nodes: ctx.nodes, root, s: p.s, t: p.t, st_edge: st })
}

/// The pertinent graph of a non-root node, with the map local id -> input id.
pub fn pertinent_graph(p: &PlaneStGraph, tree: &SpqrTree, mu: usize) -> Result<(Digraph, Vec<usize>), Error> {
    if mu == tree.root {
        return Err(Error::Precondition("the root has no pertinent graph".into()));
    }
    let node = tree.nodes.get(mu).ok_or_else(|| Error::Invalid(format!("no node {mu}")))?;
    Ok(p.g.edge_subgraph(&node.edges))
}

/// Input edges obtained by expanding the skeletons below `mu` (with
/// multiplicity).
pub fn expand(tree: &SpqrTree, mu: usize) -> Vec<usize> {
    let node = &tree.nodes[mu];
    let mut out = Vec::new();
    for se in &node.skeleton {
        match (se.real, node.kind) {
            (Some(e), NodeKind::Q) => out.push(e),
            _ => out.extend(expand(tree, se.child)),
        }
    }
    out.sort_unstable();
    out
}

/// Structural checks: reassembly, binary S-nodes, pertinent graphs are
/// uv-graphs between the poles, skeleton children match. Returns violations.
pub fn check_tree(p: &PlaneStGraph, tree: &SpqrTree) -> Vec<String> {
    let mut bad = Vec::new();
    let mut all = expand(tree, tree.root);
    if tree.nodes[tree.root].kind == NodeKind::Q {
        if let Some(&c) = tree.nodes[tree.root].children.first() {
            all.extend(expand(tree, c));
            all.sort_unstable();
        }
    }
    if all != (0..p.m()).collect::<Vec<_>>() {
        bad.push("reassembled edge set differs from the input".to_string());
    }
    for (i, n) in tree.nodes.iter().enumerate() {
        if i == tree.root {
            continue;
        }
        if n.kind == NodeKind::S && n.children.len() != 2 {
            bad.push(format!("S-node {i} has {} children", n.children.len()));
        }
        if n.kind != NodeKind::Q && expand(tree, i) != n.edges {
            bad.push(format!("node {i}: skeleton expansion differs from its edge set"));
        }
        let (g, old) = p.g.edge_subgraph(&n.edges);
        let (src, snk) = (g.sources(), g.sinks());
        if src.len() != 1 || snk.len() != 1 || old[src[0]] != n.poles.0 || old[snk[0]] != n.poles.1 {
            bad.push(format!("node {i}: pertinent graph is not a uv-graph between its poles"));
        }
        if let Some(par) = n.parent {
            if !tree.nodes[par].children.contains(&i) {
                bad.push(format!("node {i}: parent link broken"));
            }
        }
    }
    bad
}

/// Number of plane st-embeddings with (s,t) on the outer face, from the tree:
/// 2 (side of (s,t)) times k! per P-node times 2 per R-node.
pub fn embedding_count(tree: &SpqrTree) -> u128 {
    let mut c: u128 = if tree.nodes[tree.root].children.is_empty() { 1 } else { 2 };
    for n in &tree.nodes {
        match n.kind {
            NodeKind::P => c *= (1..=n.children.len() as u128).product::<u128>(),
            NodeKind::R => c *= 2,
            _ => {}
        }
    }
    c
}

/// Direct count of the plane st-embeddings of `g` (with source s, sink t and
/// the edge (s,t)) in which (s,t) is on the outer face, by trying every
/// left-to-right order at every vertex. Exponential; for tiny graphs.
pub fn count_embeddings_brute(g: &Digraph, s: usize, t: usize) -> u64 {
    let st = match g.find_edge(s, t) {
        Some(e) => e,
        None => return 0,
    };
    let outs = g.out_edges();
    let ins = g.in_edges();
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n {
        lists.push(outs[v].clone());
        lists.push(ins[v].clone());
    }
    let perms: Vec<Vec<Vec<usize>>> = lists.iter().map(|l| permutations(l)).collect();
    let mut idx = vec![0usize; perms.len()];
    let mut count = 0;
    loop {
        let out_lr: Vec<Vec<usize>> = (0..g.n).map(|v| perms[2 * v][idx[2 * v]].clone()).collect();
        let in_lr: Vec<Vec<usize>> = (0..g.n).map(|v| perms[2 * v + 1][idx[2 * v + 1]].clone()).collect();
        let outer_ok = out_lr[s].first() == Some(&st) || out_lr[s].last() == Some(&st);
        if outer_ok && PlaneStGraph::from_lr(g.clone(), out_lr, in_lr).is_ok() {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return count;
            }
            idx[i] += 1;
            if idx[i] < perms[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn permutations(l: &[usize]) -> Vec<Vec<usize>> {
    if l.len() <= 1 {
        return vec![l.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..l.len() {
        let mut rest = l.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
