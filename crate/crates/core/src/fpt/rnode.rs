//! Types of R-nodes by dynamic programming over a sphere-cut decomposition
//! of the skeleton.
//!
//! For every arc `a` of the decomposition the table holds the distinct
//! boundary drawings of the outer face of 2UBEs of `pert_a` (the graph made
//! of the pertinent graphs of the skeleton edges below `a`). A boundary
//! drawing keeps only the vertices and arcs on the outer face; vertices of
//! the middle set keep their skeleton name, all others are anonymous.
//! Everything the rest of the graph can touch lies in that outer face, so two
//! tables are merged by interleaving their spines and checking crossings on
//! the boundary alone.
//!
//! Each virtual edge is replaced by a small drawing of the same embedding
//! type; a real edge is a single arc on either page.

use super::types::*;
use crate::decomp::sphere::SphereCut;
use crate::decomp::spqr::RigidSkeleton;
use crate::Error;
use serde::Serialize;
use std::collections::HashSet;

pub const ANON: u32 = u32::MAX;
const NOLABEL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FArc {
    pub lo: u16,
    pub hi: u16,
    /// 1 = left, 2 = right.
    pub page: u8,
    /// Skeleton edge of an arc leaving the pole s (fixed mode only).
    pub label: u32,
}

/// A 2-page drawing: spine tokens bottom to top (skeleton vertex or `ANON`)
/// and arcs between token positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frag {
    pub tokens: Vec<u32>,
    pub arcs: Vec<FArc>,
}

struct FaceInfo {
    dart_face: Vec<usize>,
    /// Face containing the spine just above each token.
    upface: Vec<usize>,
    outer: usize,
}

impl Frag {
    fn faces(&self) -> FaceInfo {
        let n = self.tokens.len();
        let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, r) in rot.iter_mut().enumerate() {
            let v = v as u16;
            let mut ru: Vec<(u16, usize)> = Vec::new();
            let mut rd = Vec::new();
            let mut ld = Vec::new();
            let mut lu = Vec::new();
            for (e, a) in self.arcs.iter().enumerate() {
                match (a.page, a.lo == v, a.hi == v) {
                    (2, true, _) => ru.push((a.hi, 2 * e)),
                    (2, _, true) => rd.push((a.lo, 2 * e + 1)),
                    (1, _, true) => ld.push((a.lo, 2 * e + 1)),
                    (1, true, _) => lu.push((a.hi, 2 * e)),
                    _ => {}
                }
            }
            ru.sort();
            rd.sort();
            ld.sort_by(|a, b| b.cmp(a));
            lu.sort_by(|a, b| b.cmp(a));
            r.extend(ru.into_iter().chain(rd).chain(ld).chain(lu).map(|x| x.1));
        }
        let nd = 2 * self.arcs.len();
        let mut at = vec![0usize; nd];
        for r in &rot {
            for (i, &d) in r.iter().enumerate() {
                at[d] = i;
            }
        }
        let head = |d: usize| {
            let a = self.arcs[d / 2];
            (if d % 2 == 0 { a.hi } else { a.lo }) as usize
        };
        let mut dart_face = vec![usize::MAX; nd];
        let mut nf = 0;
        for d0 in 0..nd {
            if dart_face[d0] != usize::MAX {
                continue;
            }
            let mut d = d0;
            while dart_face[d] == usize::MAX {
                dart_face[d] = nf;
                let h = head(d);
                let r = &rot[h];
                d = r[(at[d ^ 1] + 1) % r.len()];
            }
            nf += 1;
        }
        let upface: Vec<usize> =
            rot.iter().map(|r| r.first().map_or(usize::MAX, |&d| dart_face[d])).collect();
        let outer = *upface.last().unwrap_or(&usize::MAX);
        FaceInfo { dart_face, upface, outer }
    }

    /// Gap labels bottom to top (see `types`).
    pub fn gap_labels(&self) -> Vec<u8> {
        let n = self.tokens.len();
        let mut cover = vec![[false; 2]; n.saturating_sub(1)];
        for a in &self.arcs {
            for c in &mut cover[a.lo as usize..a.hi as usize] {
                c[a.page as usize - 1] = true;
            }
        }
        cover
            .iter()
            .map(|c| match c {
                [true, true] => b'n',
                [true, false] => b'r',
                _ => b'l',
            })
            .collect()
    }

    /// Keeps the outer face boundary. `None` if a named token is not on it.
    /// Labels survive only on arcs leaving the token named `pole`.
    fn compress(&self, pole: u32) -> Option<Frag> {
        let fi = self.faces();
        let keep: Vec<bool> = (0..self.arcs.len())
            .map(|e| fi.dart_face[2 * e] == fi.outer || fi.dart_face[2 * e + 1] == fi.outer)
            .collect();
        let mut used = vec![false; self.tokens.len()];
        for (e, a) in self.arcs.iter().enumerate() {
            if keep[e] {
                used[a.lo as usize] = true;
                used[a.hi as usize] = true;
            }
        }
        let mut new_id = vec![u16::MAX; self.tokens.len()];
        let mut tokens = Vec::new();
        for (i, &t) in self.tokens.iter().enumerate() {
            if used[i] {
                new_id[i] = tokens.len() as u16;
                tokens.push(t);
            } else if t != ANON {
                return None;
            }
        }
        let mut arcs: Vec<FArc> = self
            .arcs
            .iter()
            .zip(&keep)
            .filter(|x| *x.1)
            .map(|(a, _)| FArc {
                lo: new_id[a.lo as usize],
                hi: new_id[a.hi as usize],
                page: a.page,
                label: if pole != ANON && self.tokens[a.lo as usize] == pole { a.label } else { NOLABEL },
            })
            .collect();
        arcs.sort();
        Some(Frag { tokens, arcs })
    }

    /// Leftmost arc leaving the bottom token.
    fn leftmost_out(&self) -> Option<FArc> {
        let left = self.arcs.iter().filter(|a| a.lo == 0 && a.page == 1).max_by_key(|a| a.hi);
        left.or_else(|| self.arcs.iter().filter(|a| a.lo == 0 && a.page == 2).min_by_key(|a| a.hi)).copied()
    }
}

/// Smallest drawings of each type (on 3 to 5 vertices, from an exhaustive
/// search), as arcs (lo, hi, page) over spine positions.
pub fn representative_drawing(t: EmbType) -> (usize, &'static [(u16, u16, u8)]) {
    match t.to_string().as_str() {
        "LLL" => (3, &[(0, 1, 2), (1, 2, 2)]),
        "LLN" => (3, &[(0, 1, 2), (0, 2, 2), (1, 2, 1)]),
        "LBL" => (4, &[(0, 1, 2), (1, 2, 1), (2, 3, 2)]),
        "LBR" => (3, &[(0, 1, 2), (1, 2, 1)]),
        "LBN" => (4, &[(0, 1, 2), (1, 2, 1), (1, 3, 1), (2, 3, 2)]),
        "RRR" => (3, &[(0, 1, 1), (1, 2, 1)]),
        "RRN" => (3, &[(0, 1, 1), (0, 2, 1), (1, 2, 2)]),
        "RBL" => (3, &[(0, 1, 1), (1, 2, 2)]),
        "RBR" => (4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1)]),
        "RBN" => (4, &[(0, 1, 1), (1, 2, 2), (1, 3, 2), (2, 3, 1)]),
        "NLL" => (3, &[(0, 1, 1), (0, 2, 2), (1, 2, 2)]),
        "NLN" => (4, &[(0, 1, 1), (0, 3, 2), (1, 2, 2), (2, 3, 1)]),
        "NRR" => (3, &[(0, 1, 2), (0, 2, 1), (1, 2, 1)]),
        "NRN" => (4, &[(0, 1, 2), (0, 3, 1), (1, 2, 1), (2, 3, 2)]),
        "NBL" => (4, &[(0, 1, 2), (0, 2, 1), (1, 2, 1), (2, 3, 2)]),
        "NBR" => (4, &[(0, 1, 1), (0, 2, 2), (1, 2, 2), (2, 3, 1)]),
        "NBN" => (5, &[(0, 1, 1), (0, 2, 2), (1, 2, 2), (2, 3, 1), (2, 4, 1), (3, 4, 2)]),
        "NNN" => (3, &[(0, 1, 1), (0, 2, 2), (1, 2, 1)]),
        _ => unreachable!("18 types"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    pub u_vis: bool,
    pub spine_vis: bool,
    pub v_vis: bool,
}

/// Triples of the left and right outer path of a uv-graph drawn with the
/// given type.
pub fn leaf_triples(t: EmbType) -> (Triple, Triple) {
    let left = Triple { u_vis: t.s == Vis::L, spine_vis: matches!(t.spine, Spine::L | Spine::B), v_vis: t.t == Vis::L };
    let right = Triple { u_vis: t.s == Vis::R, spine_vis: matches!(t.spine, Spine::R | Spine::B), v_vis: t.t == Vis::R };
    (left, right)
}

pub fn type_of_triples(left: Triple, right: Triple) -> EmbType {
    let vis = |l: bool, r: bool| match (l, r) {
        (true, _) => Vis::L,
        (false, true) => Vis::R,
        _ => Vis::N,
    };
    let spine = match (left.spine_vis, right.spine_vis) {
        (true, true) => Spine::B,
        (true, false) => Spine::L,
        (false, true) => Spine::R,
        _ => Spine::N,
    };
    EmbType::new(vis(left.u_vis, right.u_vis), spine, vis(left.v_vis, right.v_vis))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EmbMode {
    Fixed,
    Variable,
}

#[derive(Clone, Debug, Serialize)]
pub struct RNodeReport {
    pub types: TypeSet,
    pub width: usize,
    /// Table size per decomposition node (the root leaf has none).
    pub table_sizes: Vec<usize>,
    /// Left and right outer-path triples of the root tables.
    pub root_triples: Vec<(Triple, Triple)>,
}

struct Merger<'a> {
    a: &'a Frag,
    b: &'a Frag,
    /// partner index in the other fragment of each shared token
    pa: Vec<Option<usize>>,
    pb: Vec<Option<usize>>,
    a_out: Vec<bool>,
    b_out: Vec<bool>,
    a_end: Vec<Vec<usize>>,
    b_end: Vec<Vec<usize>>,
    pos_a: Vec<usize>,
    pos_b: Vec<usize>,
    tokens: Vec<u32>,
    out: Vec<Frag>,
}

const UNSET: usize = usize::MAX;

impl<'a> Merger<'a> {
    fn new(a: &'a Frag, b: &'a Frag, fa: &FaceInfo, fb: &FaceInfo) -> Option<Self> {
        let find = |f: &Frag, t: u32| f.tokens.iter().position(|&x| x == t);
        let pa: Vec<Option<usize>> = a.tokens.iter().map(|&t| if t == ANON { None } else { find(b, t) }).collect();
        let pb: Vec<Option<usize>> = b.tokens.iter().map(|&t| if t == ANON { None } else { find(a, t) }).collect();
        let order: Vec<usize> = pa.iter().flatten().copied().collect();
        if order.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        let ends = |f: &Frag| {
            let mut e = vec![Vec::new(); f.tokens.len()];
            for (i, x) in f.arcs.iter().enumerate() {
                e[x.hi as usize].push(i);
            }
            e
        };
        let gap_out = |f: &Frag, fi: &FaceInfo| (0..f.tokens.len()).map(|i| fi.upface[i] == fi.outer).collect();
        Some(Merger {
            a,
            b,
            pa,
            pb,
            a_out: gap_out(a, fa),
            b_out: gap_out(b, fb),
            a_end: ends(a),
            b_end: ends(b),
            pos_a: vec![UNSET; a.tokens.len()],
            pos_b: vec![UNSET; b.tokens.len()],
            tokens: Vec::new(),
            out: Vec::new(),
        })
    }

    /// Arcs of `x` ending at token `i` against the arcs of `y`.
    fn crosses(x: &Frag, ends: &[usize], px: &[usize], y: &Frag, py: &[usize], p: usize) -> bool {
        for &e in ends {
            let ea = x.arcs[e];
            let lo = px[ea.lo as usize];
            for f in &y.arcs {
                if f.page != ea.page {
                    continue;
                }
                let fl = py[f.lo as usize];
                if fl != UNSET && fl > lo && fl < p && py[f.hi as usize] == UNSET {
                    return true;
                }
            }
        }
        false
    }

    fn place(&mut self, i: Option<usize>, j: Option<usize>) {
        let p = self.tokens.len();
        self.tokens.push(match (i, j) {
            (Some(i), _) => self.a.tokens[i],
            (None, Some(j)) => self.b.tokens[j],
            _ => unreachable!(),
        });
        if let Some(i) = i {
            self.pos_a[i] = p;
        }
        if let Some(j) = j {
            self.pos_b[j] = p;
        }
        let bad = i.is_some_and(|i| Self::crosses(self.a, &self.a_end[i], &self.pos_a, self.b, &self.pos_b, p))
            || j.is_some_and(|j| Self::crosses(self.b, &self.b_end[j], &self.pos_b, self.a, &self.pos_a, p));
        if !bad {
            let (ni, nj) = (i.map_or(self.next_a(), |i| i + 1), j.map_or(self.next_b(), |j| j + 1));
            self.rec(ni, nj);
        }
        if let Some(i) = i {
            self.pos_a[i] = UNSET;
        }
        if let Some(j) = j {
            self.pos_b[j] = UNSET;
        }
        self.tokens.pop();
    }

    fn next_a(&self) -> usize {
        self.pos_a.iter().position(|&p| p == UNSET).unwrap_or(self.pos_a.len())
    }
    fn next_b(&self) -> usize {
        self.pos_b.iter().position(|&p| p == UNSET).unwrap_or(self.pos_b.len())
    }

    fn rec(&mut self, i: usize, j: usize) {
        let (na, nb) = (self.a.tokens.len(), self.b.tokens.len());
        if i == na && j == nb {
            self.finish();
            return;
        }
        if i < na && j < nb && self.pa[i] == Some(j) {
            self.place(Some(i), Some(j));
            return;
        }
        if i < na && self.pa[i].is_none() && (j == 0 || j == nb || self.b_out[j - 1]) {
            self.place(Some(i), None);
        }
        if j < nb && self.pb[j].is_none() && (i == 0 || i == na || self.a_out[i - 1]) {
            self.place(None, Some(j));
        }
    }

    /// Arcs of `x` between two shared tokens must run through the outer face
    /// of `y`.
    fn in_outer(x: &Frag, px: &[Option<usize>], y: &Frag, fy: &FaceInfo) -> bool {
        for f in &x.arcs {
            let (Some(lo), Some(hi)) = (px[f.lo as usize], px[f.hi as usize]) else { continue };
            let inner = y
                .arcs
                .iter()
                .enumerate()
                .filter(|(_, g)| g.page == f.page && (g.lo as usize) <= lo && (g.hi as usize) >= hi)
                .filter(|(_, g)| (g.lo as usize, g.hi as usize) != (lo, hi))
                .min_by_key(|(_, g)| g.hi - g.lo);
            if let Some((e, g)) = inner {
                let d = if g.page == 1 { 2 * e + 1 } else { 2 * e };
                if fy.dart_face[d] != fy.outer {
                    return false;
                }
            }
        }
        true
    }

    fn finish(&mut self) {
        let map = |f: &Frag, pos: &[usize]| -> Vec<FArc> {
            f.arcs
                .iter()
                .map(|a| FArc { lo: pos[a.lo as usize] as u16, hi: pos[a.hi as usize] as u16, ..*a })
                .collect()
        };
        let mut arcs = map(self.a, &self.pos_a);
        arcs.extend(map(self.b, &self.pos_b));
        arcs.sort();
        self.out.push(Frag { tokens: self.tokens.clone(), arcs });
    }
}

/// All drawings of the union of two boundary drawings that share exactly
/// their common named tokens, with each part in the outer face of the other.
fn merge(a: &Frag, fa: &FaceInfo, b: &Frag, fb: &FaceInfo) -> Vec<Frag> {
    let Some(mut m) = Merger::new(a, b, fa, fb) else { return Vec::new() };
    if !Merger::in_outer(a, &m.pa, b, fb) || !Merger::in_outer(b, &m.pb, a, fa) {
        return Vec::new();
    }
    m.rec(0, 0);
    m.out
}

fn seeds(rigid: &RigidSkeleton, e: usize, keys: KeySet, fixed: bool) -> Vec<Frag> {
    let (x, y) = rigid.plus.g.edges[e];
    let label = if fixed { e as u32 } else { NOLABEL };
    let mut out = Vec::new();
    if keys.is_q() {
        for (k, page) in [(Q_RRR, 1u8), (Q_LLL, 2u8)] {
            if keys.0 >> k & 1 == 1 {
                out.push(Frag { tokens: vec![x as u32, y as u32], arcs: vec![FArc { lo: 0, hi: 1, page, label }] });
            }
        }
        return out;
    }
    for t in keys.types().iter() {
        let (n, arcs) = representative_drawing(t);
        let mut tokens = vec![ANON; n];
        tokens[0] = x as u32;
        tokens[n - 1] = y as u32;
        let mut arcs: Vec<FArc> = arcs.iter().map(|&(lo, hi, page)| FArc { lo, hi, page, label }).collect();
        arcs.sort();
        out.push(Frag { tokens, arcs });
    }
    out
}

/// Types of the pertinent graph of an R-node. `child_keys[e]` gives the
/// options of skeleton edge `e` (single edges use `KeySet::Q`); `sc` must be
/// a sphere-cut decomposition of `rigid.plus` rooted at its reference edge.
pub fn r_node_types(
    rigid: &RigidSkeleton,
    child_keys_per_edge: &[KeySet],
    sc: &SphereCut,
    mode: EmbMode,
) -> Result<RNodeReport, Error> {
    let plus = &rigid.plus;
    let r = rigid.reference_edge();
    if sc.root_edge != r || sc.nodes[sc.root].edge != Some(r) {
        return Err(Error::Invalid("decomposition is not rooted at the reference edge".into()));
    }
    if child_keys_per_edge.len() != r {
        return Err(Error::Invalid("one key set per skeleton edge expected".into()));
    }
    let fixed = mode == EmbMode::Fixed;
    let (pole_s, pole_t) = plus.g.edges[r];
    let pole = if fixed { pole_s as u32 } else { ANON };
    let mut tables: Vec<Vec<Frag>> = vec![Vec::new(); sc.nodes.len()];
    for v in sc.post_order() {
        let node = &sc.nodes[v];
        let named: HashSet<u32> = node.mid.iter().map(|&x| x as u32).collect();
        let raw: Vec<Frag> = if node.children.is_empty() {
            let e = node.edge.expect("leaf edge");
            seeds(rigid, e, child_keys_per_edge[e], fixed)
        } else {
            let (c1, c2) = (node.children[0], node.children[1]);
            let fb: Vec<FaceInfo> = tables[c2].iter().map(Frag::faces).collect();
            let mut all = Vec::new();
            for a in &tables[c1] {
                let fa = a.faces();
                for (b, fb) in tables[c2].iter().zip(&fb) {
                    all.extend(merge(a, &fa, b, fb));
                }
            }
            all
        };
        let mut seen = HashSet::new();
        let mut table = Vec::new();
        for mut f in raw {
            for t in &mut f.tokens {
                if *t != ANON && !named.contains(t) {
                    *t = ANON;
                }
            }
            if let Some(c) = f.compress(pole) {
                if seen.insert(c.clone()) {
                    table.push(c);
                }
            }
        }
        table.sort();
        tables[v] = table;
        if tables[v].is_empty() {
            break;
        }
    }
    let top = sc.nodes[sc.root].children[0];
    let want = plus.out_lr[pole_s][0] as u32;
    let mut types = TypeSet::EMPTY;
    let mut triples = HashSet::new();
    for f in &tables[top] {
        if f.tokens.first() != Some(&(pole_s as u32)) || f.tokens.last() != Some(&(pole_t as u32)) {
            continue;
        }
        if fixed && f.leftmost_out().map(|a| a.label) != Some(want) {
            continue;
        }
        let ty = seq_type(&f.gap_labels());
        types.insert(ty);
        triples.insert(leaf_triples(ty));
    }
    let mut root_triples: Vec<(Triple, Triple)> = triples.into_iter().collect();
    root_triples.sort_by_key(|(a, b)| (a.u_vis, a.spine_vis, a.v_vis, b.u_vis, b.spine_vis, b.v_vis));
    Ok(RNodeReport {
        types,
        width: sc.width(),
        table_sizes: (0..sc.nodes.len()).filter(|&i| i != sc.root).map(|i| tables[i].len()).collect(),
        root_triples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{verify_kube, BookEmbedding};
    use crate::graph::Digraph;

    #[test]
    fn representatives_have_their_type() {
        for &t in all_types() {
            let (n, arcs) = representative_drawing(t);
            let g = Digraph::new(n, arcs.iter().map(|&(a, b, _)| (a as usize, b as usize)).collect());
            let be = BookEmbedding { k: 2, order: (0..n).collect(), sigma: arcs.iter().map(|a| a.2 as usize).collect() };
            assert!(verify_kube(&g, &be).valid);
            assert_eq!(g.sources(), vec![0]);
            assert_eq!(g.sinks(), vec![n - 1]);
            assert_eq!(classify_embedding_type(&g, &be).unwrap(), t);
        }
    }

    fn frag(n: usize, arcs: &[(u16, u16, u8)]) -> Frag {
        Frag {
            tokens: (0..n as u32).collect(),
            arcs: arcs.iter().map(|&(lo, hi, page)| FArc { lo, hi, page, label: NOLABEL }).collect(),
        }
    }

    #[test]
    fn face_under_an_arc() {
        // left arc 0-2 over a left arc 0-1 and a right arc 1-2
        let f = frag(3, &[(0, 2, 1), (0, 1, 1), (1, 2, 2)]);
        let fi = f.faces();
        // the gap between 0 and 1 is open to the right, so it is outer
        assert_eq!(fi.upface[0], fi.outer);
        assert_eq!(fi.dart_face[2 * 1 + 1], fi.outer);
        // the gap between 1 and 2 is under the left arc 0-2 and left of the right arc 1-2
        assert_eq!(fi.upface[1], fi.dart_face[2 * 0 + 1]);
        assert_eq!(fi.upface[1], fi.dart_face[2 * 2]);
        assert_eq!(fi.upface[1], fi.dart_face[2 * 1]);
        assert_eq!(fi.outer, fi.dart_face[0]);
        assert_ne!(fi.upface[1], fi.outer);
        let g = frag(2, &[(0, 1, 2)]);
        let gi = g.faces();
        assert_eq!(gi.dart_face[0], gi.dart_face[1]);
    }

    #[test]
    fn compression_drops_inner_parts() {
        // right arcs 0-3 over 1-2, left arcs 0-1, 1-2, 2-3: vertex 1 and 2 stay on the outer face from the left
        let f = frag(4, &[(0, 3, 2), (1, 2, 2), (0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let c = f.compress(ANON).unwrap();
        // the arc 1-2 on the right is enclosed by 0-3 and the left path
        assert_eq!(c.arcs.len(), 4);
        let mut g = f.clone();
        g.tokens = vec![0, ANON, ANON, 3];
        assert!(g.compress(ANON).is_some());
    }

    #[test]
    fn merge_rejects_crossings() {
        // a: 0 -> 2 on the left; b: 1 -> 3 with 1, 3 anonymous to a
        let a = Frag { tokens: vec![0, ANON, 2], arcs: vec![FArc { lo: 0, hi: 2, page: 1, label: NOLABEL }, FArc { lo: 0, hi: 1, page: 2, label: NOLABEL }, FArc { lo: 1, hi: 2, page: 2, label: NOLABEL }] };
        let b = Frag { tokens: vec![0, 2], arcs: vec![FArc { lo: 0, hi: 1, page: 2, label: NOLABEL }] };
        // b's arc 0-2 on the right encloses a's right path: allowed, as a's
        // right path is on a's outer face
        let m = merge(&a, &a.faces(), &b, &b.faces());
        assert!(!m.is_empty());
        let c = Frag { tokens: vec![ANON, 2, ANON], arcs: vec![FArc { lo: 0, hi: 2, page: 1, label: NOLABEL }, FArc { lo: 0, hi: 1, page: 2, label: NOLABEL }, FArc { lo: 1, hi: 2, page: 2, label: NOLABEL }] };
        for f in merge(&a, &a.faces(), &c, &c.faces()) {
            // the anonymous bottom of c never sits between 0 and 2 on the left arc
            let p0 = f.tokens.iter().position(|&t| t == 0).unwrap();
            let p2 = f.tokens.iter().position(|&t| t == 2).unwrap();
            for x in &f.arcs {
                for y in &f.arcs {
                    if x.page == y.page {
                        let cross = x.lo < y.lo && y.lo < x.hi && x.hi < y.hi;
                        assert!(!cross, "{f:?}");
                    }
                }
            }
            assert!(p0 < p2);
        }
    }

    #[test]
    fn triples_of_a_leaf() {
        let (l, r) = leaf_triples(EmbType::parse("LBR").unwrap());
        assert_eq!(l, Triple { u_vis: true, spine_vis: true, v_vis: false });
        assert_eq!(r, Triple { u_vis: false, spine_vis: true, v_vis: true });
        for &t in all_types() {
            let (l, r) = leaf_triples(t);
            assert_eq!(type_of_triples(l, r), t);
            for x in [l, r] {
                assert!(!(x.u_vis || x.v_vis) || x.spine_vis);
            }
        }
    }
}
