//! Book embeddings: verification, the induced planar embedding of a 2-page
//! layout, and the correspondence between 2UBEs and HP-completions.

use crate::graph::{Builder, Digraph, PlaneStGraph};
use crate::Error;
use serde::{Deserialize, Serialize};

/// Spine order plus page assignment. `order[i]` is the vertex at spine
/// position i (bottom to top); `sigma[e]` is the page of edge e, in 1..=k.
/// Page 1 is the left half-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BookEmbedding {
    pub k: usize,
    pub order: Vec<usize>,
    pub sigma: Vec<usize>,
}

impl BookEmbedding {
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Puts every edge between spine neighbours on page 1. Such edges never
    /// conflict, and for two pages the move does not change the induced
    /// embedding.
    pub fn normalize_consecutive(&self, g: &Digraph) -> BookEmbedding {
        let pos = self.positions();
        let sigma = g
            .edges
            .iter()
            .zip(&self.sigma)
            .map(|(&(u, v), &p)| if pos[v] == pos[u] + 1 { 1 } else { p })
            .collect();
        BookEmbedding { k: self.k, order: self.order.clone(), sigma }
    }

    /// Swaps pages 1 and 2 (a 2UBE seen from behind the spine).
    pub fn swap_pages(&self) -> BookEmbedding {
        BookEmbedding { k: self.k, order: self.order.clone(), sigma: self.sigma.iter().map(|&p| 3 - p).collect() }
    }
}

/// Strict interleaving of (u,v) and (w,z) along the spine.
pub fn edges_conflict(pos: &[usize], e1: (usize, usize), e2: (usize, usize)) -> bool {
    let (a, b, c, d) = (pos[e1.0], pos[e1.1], pos[e2.0], pos[e2.1]);
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotAPermutation,
    NotUpward { edge: usize },
    BadPage { edge: usize },
    Conflict { e1: usize, e2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KubeReport {
    pub valid: bool,
    pub violation: Option<Violation>,
}

pub fn verify_kube(g: &Digraph, be: &BookEmbedding) -> KubeReport {
    let bad = |v| KubeReport { valid: false, violation: Some(v) };
    if be.order.len() != g.n || be.sigma.len() != g.m() {
        return bad(Violation::NotAPermutation);
    }
    let mut seen = vec![false; g.n];
    for &v in &be.order {
        if v >= g.n || seen[v] {
            return bad(Violation::NotAPermutation);
        }
        seen[v] = true;
    }
    let pos = be.positions();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if pos[u] >= pos[v] {
            return bad(Violation::NotUpward { edge: e });
        }
        if be.sigma[e] == 0 || be.sigma[e] > be.k {
            return bad(Violation::BadPage { edge: e });
        }
    }
    for e1 in 0..g.m() {
        for e2 in e1 + 1..g.m() {
            if be.sigma[e1] == be.sigma[e2] && edges_conflict(&pos, g.edges[e1], g.edges[e2]) {
                return bad(Violation::Conflict { e1, e2 });
            }
        }
    }
    KubeReport { valid: true, violation: None }
}

/// Left-to-right edge orders of the canonical drawing of a valid 2UBE: at each
/// vertex the left-page arcs come first (outermost first), then the right-page
/// arcs (innermost first).
pub fn induced_lr(g: &Digraph, be: &BookEmbedding) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let pos = be.positions();
    let mut out_lr = vec![Vec::new(); g.n];
    let mut in_lr = vec![Vec::new(); g.n];
    for v in 0..g.n {
        let mut outs: Vec<usize> = (0..g.m()).filter(|&e| g.edges[e].0 == v).collect();
        outs.sort_by_key(|&e| {
            let h = pos[g.edges[e].1] as i64;
            if be.sigma[e] == 1 {
                (0, -h)
            } else {
                (1, h)
            }
        });
        let mut ins: Vec<usize> = (0..g.m()).filter(|&e| g.edges[e].1 == v).collect();
        ins.sort_by_key(|&e| {
            let t = pos[g.edges[e].0] as i64;
            if be.sigma[e] == 1 {
                (0, t)
            } else {
                (1, -t)
            }
        });
        out_lr[v] = outs;
        in_lr[v] = ins;
    }
    (out_lr, in_lr)
}

pub fn induced_embedding(g: &Digraph, be: &BookEmbedding) -> Result<PlaneStGraph, Error> {
    if be.k > 2 || be.sigma.iter().any(|&p| p > 2) {
        return Err(Error::Precondition("induced embedding needs at most 2 pages".into()));
    }
    let rep = verify_kube(g, be);
    if !rep.valid {
        return Err(Error::Invalid(format!("not a valid book embedding: {:?}", rep.violation)));
    }
    let (out_lr, in_lr) = induced_lr(g, be);
    PlaneStGraph::from_lr(g.clone(), out_lr, in_lr).map_err(|r| Error::Invalid(r.to_string()))
}

/// True iff `be` is a valid 2UBE whose canonical drawing has the embedding of p.
pub fn is_embedding_preserving(p: &PlaneStGraph, be: &BookEmbedding) -> bool {
    if !verify_kube(&p.g, be).valid || be.sigma.iter().any(|&x| x > 2) {
        return false;
    }
    let (out_lr, in_lr) = induced_lr(&p.g, be);
    out_lr == p.out_lr && in_lr == p.in_lr
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpCompletion {
    /// The completed graph; its first m edges are those of the input graph.
    pub gbar: PlaneStGraph,
    pub path: Vec<usize>,
    pub dummies: Vec<usize>,
}

pub fn two_ube_to_hp_completion(p: &PlaneStGraph, be: &BookEmbedding) -> Result<HpCompletion, Error> {
    let rep = verify_kube(&p.g, be);
    if !rep.valid || be.sigma.iter().any(|&x| x > 2) {
        return Err(Error::Invalid("not a valid 2UBE".into()));
    }
    let mut g = p.g.clone();
    let mut sigma = be.sigma.clone();
    let mut dummies = Vec::new();
    for w in be.order.windows(2) {
        if g.find_edge(w[0], w[1]).is_none() {
            dummies.push(g.m());
            g.edges.push((w[0], w[1]));
            sigma.push(1);
        }
    }
    let bbar = BookEmbedding { k: 2, order: be.order.clone(), sigma };
    let gbar = induced_embedding(&g, &bbar)?;
    Ok(HpCompletion { gbar, path: be.order.clone(), dummies })
}

/// Reads a 2UBE off an HP-completion: spine order along P, and each edge of g
/// on page 1 iff it leaves its tail to the left of P (edges of P on page 1).
pub fn hp_completion_to_2ube(g: &Digraph, gbar: &PlaneStGraph, path: &[usize]) -> Result<BookEmbedding, Error> {
    let n = gbar.n();
    if path.len() != n || g.n != n {
        return Err(Error::Invalid("path is not Hamiltonian".into()));
    }
    let mut seen = vec![false; n];
    for &v in path {
        if v >= n || seen[v] {
            return Err(Error::Invalid("path is not Hamiltonian".into()));
        }
        seen[v] = true;
    }
    let mut next_edge = vec![usize::MAX; n];
    for w in path.windows(2) {
        next_edge[w[0]] = gbar
            .g
            .find_edge(w[0], w[1])
            .ok_or_else(|| Error::Invalid(format!("path step ({},{}) is not an edge", w[0], w[1])))?;
    }
    let mut sigma = Vec::with_capacity(g.m());
    for &(u, v) in &g.edges {
        let e = gbar
            .g
            .find_edge(u, v)
            .ok_or_else(|| Error::Invalid(format!("edge ({u},{v}) missing from the completion")))?;
        let f = next_edge[u];
        if f == usize::MAX {
            return Err(Error::Invalid("edge leaves the last path vertex".into()));
        }
        let outs = &gbar.out_lr[u];
        let (ie, ifp) = (
            outs.iter().position(|&x| x == e).unwrap(),
            outs.iter().position(|&x| x == f).unwrap(),
        );
        sigma.push(if ie <= ifp { 1 } else { 2 });
    }
    let be = BookEmbedding { k: 2, order: path.to_vec(), sigma };
    let rep = verify_kube(g, &be);
    if !rep.valid {
        return Err(Error::Invalid(format!("completion does not give a 2UBE: {:?}", rep.violation)));
    }
    Ok(be)
}

/// Checks that `path` is a directed Hamiltonian s-t path of `gbar`.
pub fn is_hamiltonian_path(gbar: &PlaneStGraph, path: &[usize]) -> bool {
    let n = gbar.n();
    if path.len() != n || path.first() != Some(&gbar.s) || path.last() != Some(&gbar.t) {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in path {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    path.windows(2).all(|w| gbar.g.find_edge(w[0], w[1]).is_some())
}

/// Builder view of an HP-completion, used by the constructive algorithms.
pub fn completion_from_builder(b: &Builder, m: usize, path: Vec<usize>) -> Result<HpCompletion, Error> {
    let gbar = b.build().map_err(|r| Error::Invalid(r.to_string()))?;
    Ok(HpCompletion { gbar, path, dummies: (m..b.edges.len()).collect() })
}
