//! Constructive embedding-preserving HP-completions: faces are added in
//! dual topological order, each new right path is threaded into the current
//! Hamiltonian path with at most two dummy edges drawn inside the face.
//!
//! Invariant kept after every face: of any two consecutive edges on the right
//! boundary, at least one is on the path.

use crate::book::HpCompletion;
use crate::graph::{dual_graph, Digraph, Face, PlaneStGraph};
use crate::Error;
use serde::Serialize;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub face: usize,
    /// 1..=4 for long right paths; for rhombi 1 = (s_f,u_1) bypassed,
    /// 2 = (u_1,t_f) bypassed.
    pub case: u8,
    /// Dummy edges as (tail, head).
    pub dummies: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub completion: HpCompletion,
    pub steps: Vec<Step>,
}

/// A dummy edge inside face f: its endpoint on f's left path gets it as the
/// rightmost edge, the one on the right path as the leftmost.
#[derive(Clone)]
struct Dummy {
    tail: usize,
    head: usize,
    tail_on_left: bool,
}

#[derive(Clone)]
struct State {
    next: Vec<usize>,
    boundary: Vec<usize>,
    dummies: Vec<Dummy>,
    steps: Vec<Step>,
}

impl State {
    fn new(p: &PlaneStGraph) -> Self {
        let (left, _) = p.boundary_paths();
        let mut next = vec![NONE; p.n()];
        let mut boundary = vec![p.s];
        for &e in &left {
            let (u, v) = p.g.edges[e];
            next[u] = v;
            boundary.push(v);
        }
        State { next, boundary, dummies: Vec::new(), steps: Vec::new() }
    }

    fn empty() -> Self {
        State { next: Vec::new(), boundary: Vec::new(), dummies: Vec::new(), steps: Vec::new() }
    }

    fn on_path(&self, u: usize, v: usize) -> bool {
        self.next[u] == v
    }

    /// Replaces path step (a,b) by a, via.., b.
    fn bypass(&mut self, a: usize, via: &[usize], b: usize) {
        debug_assert_eq!(self.next[a], b);
        let mut cur = a;
        for &x in via {
            self.next[cur] = x;
            cur = x;
        }
        self.next[cur] = b;
    }

    fn dummy(&mut self, g: &Digraph, tail: usize, head: usize, tail_on_left: bool, step: &mut Step) {
        // a dummy parallel to a real edge is that edge
        if g.find_edge(tail, head).is_none() {
            self.dummies.push(Dummy { tail, head, tail_on_left });
            step.dummies.push((tail, head));
        }
    }

    /// Swaps f's left path for its right path on the boundary; returns the
    /// boundary neighbours (u_{-1}, u_{h+1}) if they exist.
    fn advance(&mut self, f: &Face) -> Result<(Option<usize>, Option<usize>), Error> {
        let i = self.boundary.iter().position(|&v| v == f.s_f).ok_or_else(|| bad(f))?;
        let j = i + f.left_path.len() - 1;
        if self.boundary.get(i..=j) != Some(&f.left_path[..]) {
            return Err(bad(f));
        }
        let before = (i > 0).then(|| self.boundary[i - 1]);
        let after = self.boundary.get(j + 1).copied();
        self.boundary.splice(i..=j, f.right_path.iter().copied());
        Ok((before, after))
    }

    fn check_invariant(&self) -> bool {
        self.boundary.windows(3).all(|w| self.on_path(w[0], w[1]) || self.on_path(w[1], w[2]))
    }

    fn finish(self, p: &PlaneStGraph) -> Result<Construction, Error> {
        let m = p.m();
        let ds: Vec<(usize, usize, bool)> = self.dummies.iter().map(|d| (d.tail, d.head, d.tail_on_left)).collect();
        let gbar = add_face_chords(p, &ds)?;
        let mut path = vec![p.s];
        let mut v = p.s;
        while self.next[v] != NONE {
            v = self.next[v];
            path.push(v);
        }
        if path.len() != p.n() || v != p.t {
            return Err(Error::Invalid("construction left vertices off the path".into()));
        }
        Ok(Construction {
            completion: HpCompletion { gbar, path, dummies: (m..m + self.dummies.len()).collect() },
            steps: self.steps,
        })
    }
}

/// Adds edges drawn inside faces, each as (tail, head, tail on the face's
/// left path). The endpoint on the left path gets the new edge as its
/// rightmost one, the endpoint on the right path as its leftmost one. Chords
/// of one face must not cross.
pub fn add_face_chords(p: &PlaneStGraph, chords: &[(usize, usize, bool)]) -> Result<PlaneStGraph, Error> {
    let mut edges = p.g.edges.clone();
    let mut out_lr = p.out_lr.clone();
    let mut in_lr = p.in_lr.clone();
    for &(tail, head, tail_on_left) in chords {
        let e = edges.len();
        edges.push((tail, head));
        if tail_on_left {
            out_lr[tail].push(e);
            in_lr[head].insert(0, e);
        } else {
            out_lr[tail].insert(0, e);
            in_lr[head].push(e);
        }
    }
    PlaneStGraph::from_lr(Digraph::new(p.n(), edges), out_lr, in_lr)
        .map_err(|r| Error::Invalid(format!("completion is not a plane st-graph: {r}")))
}

fn bad(f: &Face) -> Error {
    Error::Invalid(format!("face {} is not on the right boundary when scheduled", f.id))
}

fn scheduled_faces(p: &PlaneStGraph) -> Vec<Face> {
    let faces = p.faces();
    dual_graph(p).face_schedule().into_iter().map(|id| faces.faces[id].clone()).collect()
}

/// HP-completion for graphs whose internal faces have left paths of at least
/// two edges and right paths of at least three.
pub fn hp_complete_long_right(p: &PlaneStGraph) -> Result<Construction, Error> {
    let faces = scheduled_faces(p);
    for f in &faces {
        if f.left_edges.len() < 2 || f.right_edges.len() < 3 {
            return Err(Error::Precondition(format!(
                "face {} (s_f = {}, t_f = {}) has {} left and {} right edges; need >= 2 and >= 3",
                f.id,
                f.s_f,
                f.t_f,
                f.left_edges.len(),
                f.right_edges.len()
            )));
        }
    }
    let mut st = State::new(p);
    for f in &faces {
        let (u, v) = (&f.left_path, &f.right_path);
        let (h, k) = (u.len() - 1, v.len() - 1);
        let (before, after) = st.advance(f)?;
        let in_ok = before.map_or(true, |b| st.on_path(b, f.s_f));
        let out_ok = after.map_or(true, |a| st.on_path(f.t_f, a));
        let mut step = Step { face: f.id, case: 0, dummies: Vec::new() };
        match (in_ok, out_ok) {
            (true, true) => {
                step.case = 1;
                let j = (0..h).find(|&j| st.on_path(u[j], u[j + 1])).ok_or_else(|| invariant(f))?;
                st.dummy(&p.g, u[j], v[1], true, &mut step);
                st.dummy(&p.g, v[k - 1], u[j + 1], false, &mut step);
                st.bypass(u[j], &v[1..k], u[j + 1]);
            }
            (true, false) => {
                step.case = 2;
                if !st.on_path(u[h - 1], f.t_f) {
                    return Err(invariant(f));
                }
                st.dummy(&p.g, u[h - 1], v[1], true, &mut step);
                st.bypass(u[h - 1], &v[1..k], f.t_f);
            }
            (false, true) => {
                step.case = 3;
                if !st.on_path(f.s_f, u[1]) {
                    return Err(invariant(f));
                }
                st.dummy(&p.g, v[k - 1], u[1], false, &mut step);
                st.bypass(f.s_f, &v[1..k], u[1]);
            }
            (false, false) => {
                step.case = 4;
                if !st.on_path(f.s_f, u[1]) || !st.on_path(u[h - 1], f.t_f) {
                    return Err(invariant(f));
                }
                st.dummy(&p.g, v[k - 2], u[1], false, &mut step);
                st.dummy(&p.g, u[h - 1], v[k - 1], true, &mut step);
                st.bypass(f.s_f, &v[1..k - 1], u[1]);
                st.bypass(u[h - 1], &[v[k - 1]], f.t_f);
            }
        }
        if !st.check_invariant() {
            return Err(invariant(f));
        }
        st.steps.push(step);
    }
    st.finish(p)
}

fn invariant(f: &Face) -> Error {
    Error::Invalid(format!("boundary invariant broken at face {}", f.id))
}

/// HP-completion for graphs whose internal faces are all rhombi: one dummy
/// per face between its two side vertices. The dummy direction follows which
/// left-path edge is on P; when both are, the choice that keeps the boundary
/// invariant is taken, backtracking if a later face gets stuck.
pub fn hp_complete_rhombi(p: &PlaneStGraph) -> Result<Construction, Error> {
    let faces = scheduled_faces(p);
    if let Some(f) = faces.iter().find(|f| f.left_edges.len() != 2 || f.right_edges.len() != 2) {
        return Err(Error::Precondition(format!("face {} (s_f = {}, t_f = {}) is not a rhombus", f.id, f.s_f, f.t_f)));
    }
    let st = State::new(p);
    let mut nodes = 0u64;
    match rhombi_from(p, &faces, st, &mut nodes)? {
        Some(st) => st.finish(p),
        None => Err(Error::Invalid("no choice of dummy directions keeps the boundary invariant".into())),
    }
}

const RHOMBI_BUDGET: u64 = 1_000_000;

fn rhombi_from(p: &PlaneStGraph, faces: &[Face], mut st: State, nodes: &mut u64) -> Result<Option<State>, Error> {
    let Some(f) = faces.first() else { return Ok(Some(st)) };
    *nodes += 1;
    if *nodes > RHOMBI_BUDGET {
        return Err(Error::Invalid("rhombus construction exceeded its search budget".into()));
    }
    let (u1, v1) = (f.left_path[1], f.right_path[1]);
    st.advance(f)?;
    let first = st.on_path(f.s_f, u1);
    let second = st.on_path(u1, f.t_f);
    let mut options = Vec::new();
    if first {
        options.push(1u8);
    }
    if second {
        options.push(2u8);
    }
    let last = options.len();
    for (i, case) in options.into_iter().enumerate() {
        let mut next = if i + 1 == last { std::mem::replace(&mut st, State::empty()) } else { st.clone() };
        let mut step = Step { face: f.id, case, dummies: Vec::new() };
        if case == 1 {
            next.dummy(&p.g, v1, u1, false, &mut step);
            next.bypass(f.s_f, &[v1], u1);
        } else {
            next.dummy(&p.g, u1, v1, true, &mut step);
            next.bypass(u1, &[v1], f.t_f);
        }
        if !next.check_invariant() {
            continue;
        }
        next.steps.push(step);
        if let Some(done) = rhombi_from(p, &faces[1..], next, nodes)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}
