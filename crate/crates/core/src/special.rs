//! Tester for plane st-graphs whose internal faces are generalized triangles
//! or rhombi. Each rhombus contributes one undirected edge between its two
//! side vertices; the graph has an embedding-preserving 2UBE iff those edges
//! can be oriented so that the result has a Hamiltonian path.

use crate::book::{hp_completion_to_2ube, BookEmbedding};
use crate::construct::add_face_chords;
use crate::graph::{classify_faces, Digraph, FaceKind, PlaneStGraph};
use crate::Error;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedGraph {
    pub directed: Digraph,
    /// One undirected edge {left side vertex, right side vertex} per rhombus.
    pub undirected: Vec<(usize, usize)>,
    /// The rhombus face of each undirected edge.
    pub faces: Vec<usize>,
}

impl MixedGraph {
    /// The digraph with `orient[i]` choosing `undirected[i]` as given (false)
    /// or reversed (true).
    pub fn oriented(&self, orient: &[bool]) -> Digraph {
        let mut g = self.directed.clone();
        for (&(a, b), &rev) in self.undirected.iter().zip(orient) {
            g.edges.push(if rev { (b, a) } else { (a, b) });
        }
        g
    }
}

pub fn build_mixed_graph(p: &PlaneStGraph) -> Result<MixedGraph, Error> {
    let class = classify_faces(p);
    if let Some((id, _)) = class.kinds.iter().find(|(_, k)| *k == FaceKind::Other) {
        return Err(Error::Precondition(format!("face {id} is neither a generalized triangle nor a rhombus")));
    }
    let faces = p.faces();
    let mut undirected = Vec::new();
    let mut ids = Vec::new();
    for (id, k) in &class.kinds {
        if *k == FaceKind::Rhombus {
            let f = &faces.faces[*id];
            undirected.push((f.left_path[1], f.right_path[1]));
            ids.push(*id);
        }
    }
    Ok(MixedGraph { directed: p.g.clone(), undirected, faces: ids })
}

/// Orientation (one flag per undirected edge, true = reversed) under which
/// the mixed graph has a directed Hamiltonian path, with that path.
/// Backtracking: the path is grown from the unique source, a vertex may be
/// appended only once all its directed predecessors are on the path, and an
/// undirected edge is oriented when the path uses it. Unused undirected edges
/// are oriented along the path too.
pub fn orient_unilateral(m: &MixedGraph) -> Option<(Vec<bool>, Vec<usize>)> {
    let g = &m.directed;
    let n = g.n;
    let sources = g.sources();
    if sources.len() != 1 {
        return None;
    }
    let mut missing = vec![0usize; n];
    for &(_, v) in &g.edges {
        missing[v] += 1;
    }
    let out = g.out_edges();
    let mut und = vec![Vec::new(); n];
    for (i, &(a, b)) in m.undirected.iter().enumerate() {
        und[a].push((b, i, false));
        und[b].push((a, i, true));
    }
    let mut orient = vec![false; m.undirected.len()];
    let mut on = vec![false; n];
    let mut path = vec![sources[0]];
    on[sources[0]] = true;
    for &e in &out[sources[0]] {
        missing[g.edges[e].1] -= 1;
    }
    fn rec(
        g: &Digraph,
        out: &[Vec<usize>],
        und: &[Vec<(usize, usize, bool)>],
        missing: &mut Vec<usize>,
        on: &mut Vec<bool>,
        path: &mut Vec<usize>,
        orient: &mut Vec<bool>,
    ) -> bool {
        if path.len() == g.n {
            return true;
        }
        let v = *path.last().unwrap();
        let mut cands: Vec<(usize, Option<(usize, bool)>)> = Vec::new();
        for &e in &out[v] {
            cands.push((g.edges[e].1, None));
        }
        for &(w, i, rev) in &und[v] {
            cands.push((w, Some((i, rev))));
        }
        cands.sort();
        for (w, via) in cands {
            if on[w] || missing[w] != 0 {
                continue;
            }
            if let Some((i, rev)) = via {
                orient[i] = rev;
            }
            on[w] = true;
            path.push(w);
            for &e in &out[w] {
                missing[g.edges[e].1] -= 1;
            }
            if rec(g, out, und, missing, on, path, orient) {
                return true;
            }
            for &e in &out[w] {
                missing[g.edges[e].1] += 1;
            }
            path.pop();
            on[w] = false;
            if let Some((i, _)) = via {
                orient[i] = false;
            }
        }
        false
    }
    if !rec(g, &out, &und, &mut missing, &mut on, &mut path, &mut orient) {
        return None;
    }
    let mut pos = vec![0; n];
    for (i, &v) in path.iter().enumerate() {
        pos[v] = i;
    }
    let orient = m.undirected.iter().map(|&(a, b)| pos[a] > pos[b]).collect();
    Some((orient, path))
}

/// Embedding-preserving 2UBE for graphs whose faces are generalized
/// triangles or rhombi, or `None` if there is none.
pub fn test_2ube_special_faces(p: &PlaneStGraph) -> Result<Option<BookEmbedding>, Error> {
    let m = build_mixed_graph(p)?;
    let Some((orient, path)) = orient_unilateral(&m) else { return Ok(None) };
    let mut next = vec![usize::MAX; p.n()];
    for w in path.windows(2) {
        next[w[0]] = w[1];
    }
    // only chords on the path are drawn; the tail of (left, right) is on the
    // left path of its rhombus
    let chords: Vec<(usize, usize, bool)> = m
        .undirected
        .iter()
        .zip(&orient)
        .filter_map(|(&(a, b), &rev)| {
            let (t, h) = if rev { (b, a) } else { (a, b) };
            (next[t] == h).then_some((t, h, !rev))
        })
        .collect();
    let gbar = add_face_chords(p, &chords)?;
    hp_completion_to_2ube(&p.g, &gbar, &path).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{is_embedding_preserving, verify_kube};
    use crate::fixtures;
    use crate::gen;

    #[test]
    fn mixed_graph_examples() {
        assert_eq!(build_mixed_graph(&fixtures::diamond()).unwrap().undirected, vec![(1, 2)]);
        assert!(build_mixed_graph(&fixtures::t3()).unwrap().undirected.is_empty());
        assert_eq!(build_mixed_graph(&gen::rhombus_grid(2, 1).unwrap()).unwrap().undirected.len(), 2);
    }

    #[test]
    fn orientation_examples() {
        let d = build_mixed_graph(&fixtures::diamond()).unwrap();
        let (orient, path) = orient_unilateral(&d).unwrap();
        assert_eq!((orient, path), (vec![false], vec![0, 1, 2, 3]));
        // no undirected edges: path3 has a Hamiltonian path, fc does not
        let p3 = build_mixed_graph(&fixtures::path3()).unwrap();
        assert_eq!(orient_unilateral(&p3).unwrap().0, Vec::<bool>::new());
        let fc = build_mixed_graph(&fixtures::fc()).unwrap();
        assert!(orient_unilateral(&fc).is_none());
    }

    #[test]
    fn tester_examples() {
        for p in [fixtures::diamond(), gen::rhombus_grid(2, 2).unwrap(), fixtures::t3()] {
            let be = test_2ube_special_faces(&p).unwrap().unwrap();
            assert!(verify_kube(&p.g, &be).valid);
            assert!(is_embedding_preserving(&p, &be));
        }
        assert_eq!(test_2ube_special_faces(&fixtures::fc()).unwrap(), None);
    }
}
