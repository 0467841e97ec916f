//! Digraphs and plane st-graphs.
//!
//! Darts: edge `e` gives dart `2e` (tail to head) and `2e + 1` (head to tail).
//! A face lies to the left of each of its darts. Rotations are clockwise and the
//! y axis points upward, so for a plane st-graph the clockwise rotation at `v` is
//! its outgoing edges from left to right followed by its incoming edges from
//! right to left.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Digraph { n, edges }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (e, &(u, _)) in self.edges.iter().enumerate() {
            out[u].push(e);
        }
        out
    }

    pub fn in_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(_, v)) in self.edges.iter().enumerate() {
            inc[v].push(e);
        }
        inc
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|&(a, b)| a == u && b == v)
    }

    /// Smallest-id-first Kahn order; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let out = self.out_edges();
        let mut indeg = vec![0usize; self.n];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..self.n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = heap.pop() {
            order.push(v);
            for &e in &out[v] {
                let w = self.edges[e].1;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.n];
        for &(_, v) in &self.edges {
            has_in[v] = true;
        }
        (0..self.n).filter(|&v| !has_in[v]).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.n];
        for &(u, _) in &self.edges {
            has_out[u] = true;
        }
        (0..self.n).filter(|&v| !has_out[v]).collect()
    }

    /// Transitive reachability as bitsets (n is small everywhere this is used).
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let order = self.topological_order().expect("acyclic");
        let out = self.out_edges();
        let mut reach = vec![vec![false; self.n]; self.n];
        for &v in order.iter().rev() {
            reach[v][v] = true;
            for &e in &out[v] {
                let w = self.edges[e].1;
                for x in 0..self.n {
                    if reach[w][x] {
                        reach[v][x] = true;
                    }
                }
            }
        }
        reach
    }

    /// Subgraph on the given edges, vertices relabelled in increasing id order.
    /// Returns the subgraph and the map new id -> old id.
    pub fn edge_subgraph(&self, edges: &[usize]) -> (Digraph, Vec<usize>) {
        let mut verts = BTreeSet::new();
        for &e in edges {
            verts.insert(self.edges[e].0);
            verts.insert(self.edges[e].1);
        }
        let old: Vec<usize> = verts.into_iter().collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let sub = edges
            .iter()
            .map(|&e| (new_id[self.edges[e].0], new_id[self.edges[e].1]))
            .collect();
        (Digraph::new(old.len(), sub), old)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: usize,
    pub left_path: Vec<usize>,
    pub right_path: Vec<usize>,
    pub left_edges: Vec<usize>,
    pub right_edges: Vec<usize>,
    pub s_f: usize,
    pub t_f: usize,
    pub is_outer: bool,
}

#[derive(Clone, Debug)]
pub struct Faces {
    pub faces: Vec<Face>,
    pub dart_face: Vec<usize>,
    pub outer: usize,
}

impl Faces {
    pub fn left_face(&self, e: usize) -> usize {
        self.dart_face[2 * e]
    }
    pub fn right_face(&self, e: usize) -> usize {
        self.dart_face[2 * e + 1]
    }
    pub fn internal(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.is_outer)
    }
}

/// How the outer face of a raw embedding is designated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterSpec {
    /// First face containing both the source and the sink.
    Auto,
    /// Cyclic vertex walk of the outer face.
    Walk(Vec<usize>),
    /// A dart of the outer face.
    Dart(usize),
}

/// An unchecked digraph with a rotation system; the input side of validation.
#[derive(Clone, Debug)]
pub struct EmbeddedDigraph {
    pub g: Digraph,
    pub rotation: Vec<Vec<usize>>,
    pub outer: OuterSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
    fn push(&mut self, s: impl Into<String>) {
        self.violations.push(s.into());
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

fn dart_tail(g: &Digraph, d: usize) -> usize {
    let (u, v) = g.edges[d / 2];
    if d % 2 == 0 {
        u
    } else {
        v
    }
}

fn dart_head(g: &Digraph, d: usize) -> usize {
    dart_tail(g, d ^ 1)
}

/// Traces face cycles. `rotation` must be a permutation of incident edges at
/// every vertex.
fn trace_faces(g: &Digraph, rotation: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    // position of edge e in rotation of each endpoint
    let mut pos_tail = vec![0; g.m()];
    let mut pos_head = vec![0; g.m()];
    for (v, rot) in rotation.iter().enumerate() {
        for (i, &e) in rot.iter().enumerate() {
            if g.edges[e].0 == v {
                pos_tail[e] = i;
            } else {
                pos_head[e] = i;
            }
        }
    }
    let next = |d: usize| -> usize {
        let e = d / 2;
        let v = dart_head(g, d);
        let i = if d % 2 == 0 { pos_head[e] } else { pos_tail[e] };
        let rot = &rotation[v];
        let f = rot[(i + 1) % rot.len()];
        if g.edges[f].0 == v {
            2 * f
        } else {
            2 * f + 1
        }
    };
    let mut dart_face = vec![usize::MAX; 2 * g.m()];
    let mut cycles = Vec::new();
    for d0 in 0..2 * g.m() {
        if dart_face[d0] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut d = d0;
        while dart_face[d] == usize::MAX {
            dart_face[d] = id;
            cyc.push(d);
            d = next(d);
        }
        cycles.push(cyc);
    }
    (cycles, dart_face)
}

fn is_connected(g: &Digraph) -> bool {
    if g.n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&b| b)
}

fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..b.len()).any(|r| (0..a.len()).all(|i| a[i] == b[(i + r) % b.len()]))
}

/// Full check of an embedded digraph against the plane st-graph definition.
/// On success also returns the derived left-to-right orders.
pub fn check_embedded(
    input: &EmbeddedDigraph,
) -> (ValidationReport, Option<(usize, usize, Vec<Vec<usize>>, Vec<Vec<usize>>)>) {
    let g = &input.g;
    let mut rep = ValidationReport::default();
    let mut ids_ok = true;
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if u >= g.n || v >= g.n {
            rep.push(format!("edge {e} ({u},{v}) has a vertex id out of range"));
            ids_ok = false;
        } else if u == v {
            rep.push(format!("edge {e} is a self-loop at {u}"));
            ids_ok = false;
        }
    }
    if !ids_ok {
        return (rep, None);
    }
    let mut seen = BTreeSet::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if !seen.insert((u, v)) {
            rep.push(format!("edge {e} ({u},{v}) is a duplicate"));
        }
    }
    if !g.is_acyclic() {
        rep.push("graph has a directed cycle");
    }
    let sources = g.sources();
    let sinks = g.sinks();
    if sources.len() != 1 {
        rep.push(format!("{} sources", sources.len()));
    }
    if sinks.len() != 1 {
        rep.push(format!("{} sinks", sinks.len()));
    }
    if g.n < 2 || g.m() == 0 {
        rep.push("an st-graph needs at least one edge");
    }
    if !is_connected(g) {
        rep.push("graph is not connected");
    }
    if !rep.is_valid() {
        return (rep, None);
    }
    let (s, t) = (sources[0], sinks[0]);

    // rotation is a permutation of the incident edges
    let rot = &input.rotation;
    if rot.len() != g.n {
        rep.push(format!("rotation has {} vertex entries, expected {}", rot.len(), g.n));
        return (rep, None);
    }
    for v in 0..g.n {
        let mut inc: Vec<usize> = (0..g.m())
            .filter(|&e| g.edges[e].0 == v || g.edges[e].1 == v)
            .collect();
        let mut r = rot[v].clone();
        inc.sort_unstable();
        r.sort_unstable();
        if inc != r {
            rep.push(format!("rotation at vertex {v} is not a permutation of its incident edges"));
        }
    }
    if !rep.is_valid() {
        return (rep, None);
    }
    let (cycles, dart_face) = trace_faces(g, rot);
    let f = cycles.len();
    if g.n + f != g.m() + 2 {
        rep.push(format!(
            "rotation is not planar: n - m + f = {} - {} + {} != 2",
            g.n,
            g.m(),
            f
        ));
        return (rep, None);
    }
    let face_verts = |c: &Vec<usize>| -> Vec<usize> { c.iter().map(|&d| dart_tail(g, d)).collect() };
    let outer = match &input.outer {
        OuterSpec::Auto => cycles.iter().position(|c| {
            let vs = face_verts(c);
            vs.contains(&s) && vs.contains(&t)
        }),
        OuterSpec::Walk(w) => cycles.iter().position(|c| cyclic_eq(&face_verts(c), w)),
        OuterSpec::Dart(d) => (*d < 2 * g.m()).then(|| dart_face[*d]),
    };
    let Some(outer) = outer else {
        rep.push("outer face not found");
        return (rep, None);
    };
    let ov = face_verts(&cycles[outer]);
    if !ov.contains(&s) || !ov.contains(&t) {
        rep.push("source and sink are not both on the outer face");
        return (rep, None);
    }

    let is_out = |v: usize, e: usize| g.edges[e].0 == v;
    let mut out_lr = vec![Vec::new(); g.n];
    let mut in_lr = vec![Vec::new(); g.n];
    for v in 0..g.n {
        let r = &rot[v];
        let d = r.len();
        let start = if v == s {
            (0..d).find(|&i| dart_face[2 * r[i] + 1] == outer).map(|i| (i + 1) % d)
        } else if v == t {
            (0..d).find(|&i| dart_face[2 * r[i]] == outer).map(|i| (i + 1) % d)
        } else {
            let trans: Vec<usize> = (0..d)
                .filter(|&i| is_out(v, r[i]) != is_out(v, r[(i + 1) % d]))
                .collect();
            if trans.len() != 2 {
                rep.push(format!("vertex {v} is not bimodal"));
                continue;
            }
            trans
                .iter()
                .find(|&&i| !is_out(v, r[i]))
                .map(|&i| (i + 1) % d)
        };
        let Some(start) = start else {
            rep.push(format!("vertex {v} has no angle on the outer face"));
            continue;
        };
        let cw: Vec<usize> = (0..d).map(|i| r[(start + i) % d]).collect();
        let k = cw.iter().take_while(|&&e| is_out(v, e)).count();
        out_lr[v] = cw[..k].to_vec();
        in_lr[v] = cw[k..].iter().rev().copied().collect();
    }
    if !rep.is_valid() {
        return (rep, None);
    }
    // every face must be bounded by two directed paths
    for (fid, c) in cycles.iter().enumerate() {
        let switches = (0..c.len())
            .filter(|&i| c[i] % 2 != c[(i + 1) % c.len()] % 2)
            .count();
        if switches != 2 {
            rep.push(format!("face {fid} is not bounded by two directed paths"));
        }
    }
    if dart_face[2 * out_lr[s][0]] != outer {
        rep.push("leftmost edge of the source does not bound the outer face");
    }
    if !rep.is_valid() {
        return (rep, None);
    }
    (rep, Some((s, t, out_lr, in_lr)))
}

pub fn validate_plane_st_graph(input: &EmbeddedDigraph) -> ValidationReport {
    check_embedded(input).0
}

/// A valid plane st-graph. The embedding is stored as the left-to-right orders
/// of outgoing and incoming edges at every vertex; the outer face is the one
/// left of the leftmost path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneStGraph {
    pub g: Digraph,
    pub s: usize,
    pub t: usize,
    pub out_lr: Vec<Vec<usize>>,
    pub in_lr: Vec<Vec<usize>>,
}

impl PlaneStGraph {
    pub fn from_embedded(input: &EmbeddedDigraph) -> Result<Self, ValidationReport> {
        match check_embedded(input) {
            (_, Some((s, t, out_lr, in_lr))) => Ok(PlaneStGraph { g: input.g.clone(), s, t, out_lr, in_lr }),
            (rep, None) => Err(rep),
        }
    }

    /// Builds from left-to-right orders and checks the result.
    pub fn from_lr(
        g: Digraph,
        out_lr: Vec<Vec<usize>>,
        in_lr: Vec<Vec<usize>>,
    ) -> Result<Self, ValidationReport> {
        if out_lr.len() != g.n || in_lr.len() != g.n {
            return Err(ValidationReport { violations: vec!["order lists have wrong length".into()] });
        }
        let rotation: Vec<Vec<usize>> = (0..g.n)
            .map(|v| out_lr[v].iter().chain(in_lr[v].iter().rev()).copied().collect())
            .collect();
        let sources = g.sources();
        let outer = match sources.as_slice() {
            [s] if !out_lr[*s].is_empty() => OuterSpec::Dart(2 * out_lr[*s][0]),
            _ => OuterSpec::Auto,
        };
        let p = Self::from_embedded(&EmbeddedDigraph { g, rotation, outer })?;
        if p.out_lr != out_lr || p.in_lr != in_lr {
            return Err(ValidationReport {
                violations: vec!["left-to-right orders are inconsistent with the derived embedding".into()],
            });
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.g.n
    }

    pub fn m(&self) -> usize {
        self.g.m()
    }

    pub fn rotation(&self) -> Vec<Vec<usize>> {
        (0..self.g.n)
            .map(|v| self.out_lr[v].iter().chain(self.in_lr[v].iter().rev()).copied().collect())
            .collect()
    }

    pub fn outer_dart(&self) -> usize {
        2 * self.out_lr[self.s][0]
    }

    pub fn to_embedded(&self) -> EmbeddedDigraph {
        EmbeddedDigraph { g: self.g.clone(), rotation: self.rotation(), outer: OuterSpec::Dart(self.outer_dart()) }
    }

    pub fn faces(&self) -> Faces {
        let g = &self.g;
        let (cycles, dart_face) = trace_faces(g, &self.rotation());
        let outer = dart_face[self.outer_dart()];
        let faces = cycles
            .iter()
            .enumerate()
            .map(|(id, c)| {
                let len = c.len();
                // start of the forward run
                let i0 = (0..len)
                    .find(|&i| c[(i + len - 1) % len] % 2 == 1 && c[i] % 2 == 0)
                    .unwrap_or(0);
                let seq: Vec<usize> = (0..len).map(|i| c[(i0 + i) % len]).collect();
                let fwd: Vec<usize> = seq.iter().take_while(|&&d| d % 2 == 0).map(|&d| d / 2).collect();
                let mut bwd: Vec<usize> = seq[fwd.len()..].iter().map(|&d| d / 2).collect();
                bwd.reverse();
                let path = |es: &[usize]| -> Vec<usize> {
                    let mut p = vec![g.edges[es[0]].0];
                    p.extend(es.iter().map(|&e| g.edges[e].1));
                    p
                };
                let (fwd_v, bwd_v) = (path(&fwd), path(&bwd));
                let is_outer = id == outer;
                let (left_path, right_path, left_edges, right_edges) = if is_outer {
                    (fwd_v, bwd_v, fwd, bwd)
                } else {
                    (bwd_v, fwd_v, bwd, fwd)
                };
                Face {
                    id,
                    s_f: left_path[0],
                    t_f: *left_path.last().unwrap(),
                    left_path,
                    right_path,
                    left_edges,
                    right_edges,
                    is_outer,
                }
            })
            .collect();
        Faces { faces, dart_face, outer }
    }

    /// Face boundaries as dart cycles (face to the left), indexed like
    /// `faces()`.
    pub fn dart_cycles(&self) -> Vec<Vec<usize>> {
        trace_faces(&self.g, &self.rotation()).0
    }

    /// The embedding restricted to a subset of the edges, on the vertices they
    /// touch (relabelled in increasing id order). Returns the restriction and
    /// the map new id -> old id, or `None` if it is not a plane st-graph.
    pub fn restrict(&self, edges: &[usize]) -> Option<(PlaneStGraph, Vec<usize>)> {
        let (sub, old) = self.g.edge_subgraph(edges);
        let mut new_e = vec![usize::MAX; self.g.m()];
        for (i, &e) in edges.iter().enumerate() {
            new_e[e] = i;
        }
        let map = |l: &Vec<usize>| l.iter().filter(|&&e| new_e[e] != usize::MAX).map(|&e| new_e[e]).collect();
        let out_lr = old.iter().map(|&v| map(&self.out_lr[v])).collect();
        let in_lr = old.iter().map(|&v| map(&self.in_lr[v])).collect();
        PlaneStGraph::from_lr(sub, out_lr, in_lr).ok().map(|p| (p, old))
    }

    /// Left-right mirror image.
    pub fn mirror(&self) -> PlaneStGraph {
        let rev = |l: &Vec<Vec<usize>>| l.iter().map(|x| x.iter().rev().copied().collect()).collect();
        PlaneStGraph { g: self.g.clone(), s: self.s, t: self.t, out_lr: rev(&self.out_lr), in_lr: rev(&self.in_lr) }
    }

    /// All edges reversed (the drawing turned by 180 degrees), so left and
    /// right paths of every face swap.
    pub fn reversed(&self) -> PlaneStGraph {
        let g = Digraph::new(self.g.n, self.g.edges.iter().map(|&(u, v)| (v, u)).collect());
        let rev = |l: &Vec<usize>| l.iter().rev().copied().collect::<Vec<_>>();
        PlaneStGraph {
            g,
            s: self.t,
            t: self.s,
            out_lr: self.in_lr.iter().map(rev).collect(),
            in_lr: self.out_lr.iter().map(rev).collect(),
        }
    }

    /// Leftmost and rightmost s-t paths as edge lists.
    pub fn boundary_paths(&self) -> (Vec<usize>, Vec<usize>) {
        let walk = |pick_first: bool| {
            let mut v = self.s;
            let mut es = Vec::new();
            while v != self.t {
                let outs = &self.out_lr[v];
                let e = if pick_first { outs[0] } else { *outs.last().unwrap() };
                es.push(e);
                v = self.g.edges[e].1;
            }
            es
        };
        (walk(true), walk(false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    /// Node ids: 0 = s*, 1..=F internal faces in face-id order, F+1 = t*.
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// Primal edge each dual edge crosses.
    pub primal: Vec<usize>,
    /// Primal face of each internal node; `None` for s* and t*.
    pub node_face: Vec<Option<usize>>,
    pub s_star: usize,
    pub t_star: usize,
}

impl DualGraph {
    pub fn face_node(&self, face: usize) -> Option<usize> {
        self.node_face.iter().position(|&f| f == Some(face))
    }

    pub fn digraph(&self) -> Digraph {
        Digraph::new(self.n, self.edges.clone())
    }

    /// Lexicographically least topological order of the internal faces.
    pub fn face_schedule(&self) -> Vec<usize> {
        let order = self.digraph().topological_order().expect("dual of a plane st-graph is acyclic");
        order.into_iter().filter_map(|x| self.node_face[x]).collect()
    }
}

pub fn dual_graph(p: &PlaneStGraph) -> DualGraph {
    let faces = p.faces();
    let mut node_of = vec![0usize; faces.faces.len()];
    let mut node_face = vec![None];
    for f in faces.internal() {
        node_of[f.id] = node_face.len();
        node_face.push(Some(f.id));
    }
    let t_star = node_face.len();
    node_face.push(None);
    let mut edges = Vec::new();
    let mut primal = Vec::new();
    for e in 0..p.m() {
        let (lf, rf) = (faces.left_face(e), faces.right_face(e));
        let a = if lf == faces.outer { 0 } else { node_of[lf] };
        let b = if rf == faces.outer { t_star } else { node_of[rf] };
        edges.push((a, b));
        primal.push(e);
    }
    DualGraph { n: t_star + 1, edges, primal, node_face, s_star: 0, t_star }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FaceKind {
    /// `side` names the boundary path that is the single transitive edge.
    GeneralizedTriangle { side: Side },
    Rhombus,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceClass {
    /// (face id, kind) for every internal face.
    pub kinds: Vec<(usize, FaceKind)>,
    pub has_forbidden_configuration: bool,
}

impl FaceClass {
    pub fn all_special(&self) -> bool {
        self.kinds.iter().all(|(_, k)| *k != FaceKind::Other)
    }
}

pub fn classify_faces(p: &PlaneStGraph) -> FaceClass {
    let faces = p.faces();
    let kinds = faces
        .internal()
        .map(|f| {
            let (l, r) = (f.left_edges.len(), f.right_edges.len());
            let k = if l == 1 {
                FaceKind::GeneralizedTriangle { side: Side::Left }
            } else if r == 1 {
                FaceKind::GeneralizedTriangle { side: Side::Right }
            } else if l == 2 && r == 2 {
                FaceKind::Rhombus
            } else {
                FaceKind::Other
            };
            (f.id, k)
        })
        .collect();
    let forbidden = (0..p.m()).any(|e| {
        let (u, v) = p.g.edges[e];
        let (a, b) = (faces.left_face(e), faces.right_face(e));
        a != faces.outer
            && b != faces.outer
            && [a, b].iter().all(|&f| faces.faces[f].s_f == u && faces.faces[f].t_f == v)
    });
    FaceClass { kinds, has_forbidden_configuration: forbidden }
}

/// Incremental construction of a plane st-graph through its left-to-right
/// orders.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub out_lr: Vec<Vec<usize>>,
    pub in_lr: Vec<Vec<usize>>,
}

impl Builder {
    pub fn new(n: usize) -> Self {
        Builder { n, edges: Vec::new(), out_lr: vec![Vec::new(); n], in_lr: vec![Vec::new(); n] }
    }

    pub fn from_plane(p: &PlaneStGraph) -> Self {
        Builder { n: p.g.n, edges: p.g.edges.clone(), out_lr: p.out_lr.clone(), in_lr: p.in_lr.clone() }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.out_lr.push(Vec::new());
        self.in_lr.push(Vec::new());
        self.n - 1
    }

    /// Adds (u,v) at index `oi` of out_lr[u] and index `ii` of in_lr[v].
    pub fn add_edge_at(&mut self, u: usize, v: usize, oi: usize, ii: usize) -> usize {
        let e = self.edges.len();
        self.edges.push((u, v));
        self.out_lr[u].insert(oi, e);
        self.in_lr[v].insert(ii, e);
        e
    }

    /// Adds (u,v) as the rightmost out-edge of u and the rightmost in-edge of v.
    pub fn push_edge(&mut self, u: usize, v: usize) -> usize {
        let (oi, ii) = (self.out_lr[u].len(), self.in_lr[v].len());
        self.add_edge_at(u, v, oi, ii)
    }

    /// Adds a directed path u -> (k new vertices) -> v to the right of
    /// everything currently incident to u and v. Returns the new vertices.
    pub fn push_path(&mut self, u: usize, v: usize, k: usize) -> Vec<usize> {
        let mut prev = u;
        let mut fresh = Vec::new();
        for _ in 0..k {
            let w = self.add_vertex();
            self.push_edge(prev, w);
            fresh.push(w);
            prev = w;
        }
        self.push_edge(prev, v);
        fresh
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn build(&self) -> Result<PlaneStGraph, ValidationReport> {
        PlaneStGraph::from_lr(
            Digraph::new(self.n, self.edges.clone()),
            self.out_lr.clone(),
            self.in_lr.clone(),
        )
    }

    /// Current rightmost s-t path as a vertex list.
    pub fn right_boundary(&self, s: usize, t: usize) -> Vec<usize> {
        let mut v = s;
        let mut path = vec![s];
        while v != t {
            let e = *self.out_lr[v].last().expect("path reaches t");
            v = self.edges[e].1;
            path.push(v);
        }
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn k2_single_outer_face() {
        let k2 = fixtures::k2();
        let f = k2.faces();
        assert_eq!(f.faces.len(), 1);
        assert_eq!(f.faces[0].left_path, vec![0, 1]);
        assert_eq!(f.faces[0].right_path, vec![0, 1]);
    }

    #[test]
    fn diamond_face() {
        let d = fixtures::diamond();
        let f = d.faces();
        let inner: Vec<&Face> = f.internal().collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].left_path, vec![0, 1, 3]);
        assert_eq!(inner[0].right_path, vec![0, 2, 3]);
        assert_eq!((inner[0].s_f, inner[0].t_f), (0, 3));
    }

    #[test]
    fn two_sinks_reported() {
        let g = Digraph::new(3, vec![(0, 1), (0, 2)]);
        let rep = validate_plane_st_graph(&EmbeddedDigraph {
            g,
            rotation: vec![vec![0, 1], vec![0], vec![1]],
            outer: OuterSpec::Auto,
        });
        assert!(rep.violations.iter().any(|v| v == "2 sinks"));
    }

    #[test]
    fn nonplanar_rotation_rejected() {
        let mut emb = fixtures::fc().to_embedded();
        emb.rotation[0].swap(0, 1);
        assert!(!validate_plane_st_graph(&emb).is_valid());
    }

    #[test]
    fn t3_dual() {
        let t3 = fixtures::t3();
        let d = dual_graph(&t3);
        assert_eq!(d.n, 3);
        let mut es = d.edges.clone();
        es.sort();
        assert_eq!(es, vec![(0, 1), (0, 1), (1, 2)]);
    }

    #[test]
    fn classify_examples() {
        let c = classify_faces(&fixtures::diamond());
        assert_eq!(c.kinds.len(), 1);
        assert_eq!(c.kinds[0].1, FaceKind::Rhombus);
        assert!(!c.has_forbidden_configuration);
        let c = classify_faces(&fixtures::t3());
        assert!(matches!(c.kinds[0].1, FaceKind::GeneralizedTriangle { side: Side::Right }));
        assert!(classify_faces(&fixtures::fc()).has_forbidden_configuration);
    }

    #[test]
    fn reversal_swaps_paths() {
        let t3 = fixtures::t3();
        let r = t3.reversed();
        let f = r.faces();
        let inner = f.internal().next().unwrap();
        assert_eq!(inner.left_edges.len(), 1);
        assert_eq!(inner.right_edges.len(), 2);
    }
}
