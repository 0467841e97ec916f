//! Fixed-parameter test for 2-page upward book embeddings.
//!
//! Types are computed bottom-up over the SPQR-tree: single edges admit LLL
//! and RRR, S-nodes compose their two parts, P-nodes fold (fixed order) or
//! search all orders with flow networks, R-nodes run a dynamic program over a
//! sphere-cut decomposition of their skeleton. The graph admits a 2UBE iff the
//! child of the root admits some type.

pub mod flow;
pub mod pnode;
pub mod rnode;
pub mod types;

pub use rnode::EmbMode;
pub use types::{classify_embedding_type, EmbType, KeySet, TypeSet};

use crate::decomp::spqr::{build_spqr, NodeKind, RigidSkeleton, SpqrStats, SpqrTree};
use crate::decomp::sphere::build_sphere_cut;
use crate::graph::{Builder, Digraph, PlaneStGraph};
use crate::solver::{enumerate_kube, Mode};
use crate::Error;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize)]
pub struct NodeTypes {
    pub node: usize,
    pub kind: NodeKind,
    pub poles: (usize, usize),
    pub types: TypeSet,
    /// Sphere-cut width (R-nodes).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FptResult {
    pub answer: bool,
    pub per_node_types: Vec<NodeTypes>,
    pub spqr_stats: SpqrStats,
    pub widths: Vec<usize>,
    /// Whether (s,t) was added to the input.
    pub added_st: bool,
}

/// The graph with (s,t) present (added as the rightmost edge if missing).
pub fn with_st_edge(p: &PlaneStGraph) -> Result<(PlaneStGraph, bool), Error> {
    if p.g.find_edge(p.s, p.t).is_some() {
        return Ok((p.clone(), false));
    }
    let mut b = Builder::from_plane(p);
    b.push_edge(p.s, p.t);
    let q = b.build().map_err(|r| Error::Invalid(r.to_string()))?;
    Ok((q, true))
}

/// Types of every node of an SPQR-tree.
pub fn node_types(tree: &SpqrTree, mode: EmbMode) -> Result<Vec<NodeTypes>, Error> {
    let mut keys: Vec<KeySet> = vec![KeySet::default(); tree.nodes.len()];
    let mut out: Vec<Option<NodeTypes>> = vec![None; tree.nodes.len()];
    for mu in tree.post_order() {
        let n = &tree.nodes[mu];
        let child = |i: usize| keys[n.children[i]];
        let mut width = None;
        let types = if mu == tree.root {
            TypeSet::single(types::LLL).union(TypeSet::single(types::RRR))
        } else {
            match n.kind {
                NodeKind::Q => TypeSet::single(types::LLL).union(TypeSet::single(types::RRR)),
                NodeKind::S => types::s_node_compose(child(0).types(), child(1).types()),
                NodeKind::P => {
                    let ch: Vec<KeySet> = (0..n.children.len()).map(child).collect();
                    match mode {
                        EmbMode::Fixed => pnode::p_node_types_fixed(&ch),
                        EmbMode::Variable => pnode::p_node_types_variable(&ch),
                    }
                }
                NodeKind::R => {
                    let rigid = n.rigid.as_ref().expect("R-node skeleton");
                    let ch: Vec<KeySet> = (0..n.children.len()).map(child).collect();
                    let (types, w) = r_node_cached(rigid, ch, mode)?;
                    width = Some(w);
                    types
                }
            }
        };
        keys[mu] = if n.kind == NodeKind::Q { pnode::child_keys(types, true) } else { KeySet::of_types(types) };
        out[mu] = Some(NodeTypes { node: mu, kind: n.kind, poles: n.poles, types, width });
    }
    Ok(out.into_iter().map(|x| x.expect("every node visited")).collect())
}

type RKey = (PlaneStGraph, Vec<KeySet>, EmbMode);

thread_local! {
    static R_CACHE: RefCell<HashMap<RKey, (TypeSet, usize)>> = RefCell::new(HashMap::new());
}
const R_CACHE_CAP: usize = 50_000;

/// R-node types and sphere-cut width. The result depends only on the
/// skeleton, the options of its edges and the mode, so it is memoized per
/// thread (small skeletons recur constantly across a sweep).
fn r_node_cached(rigid: &RigidSkeleton, keys: Vec<KeySet>, mode: EmbMode) -> Result<(TypeSet, usize), Error> {
    let key = (rigid.plus.clone(), keys, mode);
    if let Some(hit) = R_CACHE.with(|c| c.borrow().get(&key).copied()) {
        return Ok(hit);
    }
    let sc = build_sphere_cut(&rigid.plus, rigid.reference_edge())?;
    let rep = rnode::r_node_types(rigid, &key.1, &sc, mode)?;
    let val = (rep.types, rep.width);
    R_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= R_CACHE_CAP {
            c.clear();
        }
        c.insert(key, val);
    });
    Ok(val)
}

/// Decides whether `p` admits a 2UBE (fixed: one inducing the embedding of
/// `p`).
pub fn test_2ube_fpt(p: &PlaneStGraph, mode: EmbMode) -> Result<FptResult, Error> {
    let (q, added) = with_st_edge(p)?;
    let tree = build_spqr(&q)?;
    let per_node_types = node_types(&tree, mode)?;
    let root = &tree.nodes[tree.root];
    let mut answer = root.children.first().map_or(true, |&c| !per_node_types[c].types.is_empty());
    if mode == EmbMode::Fixed && !added {
        // (s,t) spans the whole spine, so it must be outermost at s
        let outs = &q.out_lr[q.s];
        if outs.first() != Some(&tree.st_edge) && outs.last() != Some(&tree.st_edge) {
            answer = false;
        }
    }
    let widths = per_node_types.iter().filter_map(|n| n.width).collect();
    Ok(FptResult { answer, per_node_types, spqr_stats: tree.stats(), widths, added_st: added })
}

/// Types of all 2UBEs of a uv-graph by enumeration (fixed: only those
/// inducing the given embedding). Exponential; the test oracle.
pub fn types_brute(g: &Digraph, fixed: Option<&PlaneStGraph>) -> Result<TypeSet, Error> {
    let mode = match fixed {
        Some(p) => Mode::Fixed(p),
        None => Mode::Variable,
    };
    let mut out = TypeSet::EMPTY;
    let mut err = None;
    enumerate_kube(g, 2, mode, u64::MAX, true, |be| {
        match classify_embedding_type(g, be) {
            Ok(t) => out.insert(t),
            Err(e) => err = Some(e),
        }
        err.is_none()
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Brute-force types of the pertinent graph of every non-root node.
pub fn node_types_brute(p: &PlaneStGraph, tree: &SpqrTree, mode: EmbMode) -> Result<Vec<Option<TypeSet>>, Error> {
    let mut out = vec![None; tree.nodes.len()];
    for (mu, n) in tree.nodes.iter().enumerate() {
        if mu == tree.root {
            continue;
        }
        let t = match mode {
            EmbMode::Variable => types_brute(&p.g.edge_subgraph(&n.edges).0, None)?,
            EmbMode::Fixed => {
                let (r, _) = p
                    .restrict(&n.edges)
                    .ok_or_else(|| Error::Invalid(format!("node {mu}: pertinent graph is not a plane st-graph")))?;
                types_brute(&r.g, Some(&r))?
            }
        };
        out[mu] = Some(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::solve_kube_brute;

    #[test]
    fn small_fixtures() {
        assert!(test_2ube_fpt(&fixtures::diamond(), EmbMode::Variable).unwrap().answer);
        assert!(!test_2ube_fpt(&fixtures::fc(), EmbMode::Fixed).unwrap().answer);
        assert!(test_2ube_fpt(&fixtures::fc(), EmbMode::Variable).unwrap().answer);
        assert!(test_2ube_fpt(&fixtures::k2(), EmbMode::Fixed).unwrap().answer);
        let k4 = test_2ube_fpt(&fixtures::k4(), EmbMode::Variable).unwrap();
        assert_eq!(k4.spqr_stats.r, 1);
        assert_eq!(k4.widths, vec![3]);
    }

    fn check_nodes(p: &PlaneStGraph, mode: EmbMode) {
        let (q, _) = with_st_edge(p).unwrap();
        let tree = build_spqr(&q).unwrap();
        let got = node_types(&tree, mode).unwrap();
        let want = node_types_brute(&q, &tree, mode).unwrap();
        for (mu, w) in want.iter().enumerate() {
            if let Some(w) = w {
                assert_eq!(got[mu].types, *w, "node {mu} ({:?}) of {:?} in {mode:?}", tree.nodes[mu].kind, q);
            }
        }
    }

    #[test]
    fn node_types_match_enumeration() {
        for p in crate::gen::all_plane_st_graphs(5) {
            check_nodes(&p, EmbMode::Variable);
            check_nodes(&p, EmbMode::Fixed);
        }
        check_nodes(&fixtures::k4(), EmbMode::Variable);
        check_nodes(&fixtures::k4(), EmbMode::Fixed);
    }

    #[test]
    fn agrees_with_search_on_small_graphs() {
        for p in crate::gen::all_plane_st_graphs(5) {
            for (mode, m) in [(EmbMode::Variable, Mode::Variable), (EmbMode::Fixed, Mode::Fixed(&p))] {
                let fpt = test_2ube_fpt(&p, mode).unwrap().answer;
                let brute = solve_kube_brute(&p.g, 2, m, u64::MAX).unwrap().is_found();
                assert_eq!(fpt, brute, "{:?} {mode:?}", p);
            }
        }
    }
}
