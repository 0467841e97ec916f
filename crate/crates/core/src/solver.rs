//! Exact kUBE search: depth-first extension of a topological order (smallest
//! eligible vertex first) with page constraints checked as edges close.
//!
//! For two pages the constraints are parities, kept in a union-find with
//! rollback; a complete order is feasible iff no odd cycle appeared. For other
//! k, pages are branched on when an edge closes, with forward checking of the
//! pages still allowed for every open edge.

use crate::book::BookEmbedding;
use crate::graph::{Digraph, PlaneStGraph};
use crate::Error;
use std::collections::HashSet;

const MEMO_CAP: usize = 4_000_000;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    Variable,
    /// Only 2UBEs whose induced embedding equals this one (k = 2 only).
    Fixed(&'a PlaneStGraph),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(BookEmbedding),
    None,
    /// Budget exhausted before the search space was.
    Unknown,
}

impl Outcome {
    pub fn found(&self) -> Option<&BookEmbedding> {
        match self {
            Outcome::Found(b) => Some(b),
            _ => None,
        }
    }
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    Exhausted,
    Stopped,
    BudgetExceeded,
}

/// Union-find with parity and an undo log (no path compression).
struct ParityUf {
    parent: Vec<usize>,
    parity: Vec<u8>,
    rank: Vec<u8>,
    log: Vec<(usize, bool)>,
}

impl ParityUf {
    fn new(n: usize) -> Self {
        ParityUf { parent: (0..n).collect(), parity: vec![0; n], rank: vec![0; n], log: Vec::new() }
    }
    fn find(&self, mut x: usize) -> (usize, u8) {
        let mut p = 0;
        while self.parent[x] != x {
            p ^= self.parity[x];
            x = self.parent[x];
        }
        (x, p)
    }
    /// Requires parity(a) ^ parity(b) == diff. Returns false on contradiction.
    fn union(&mut self, a: usize, b: usize, diff: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == diff;
        }
        let (ra, rb) = if self.rank[ra] < self.rank[rb] { (rb, ra) } else { (ra, rb) };
        let bump = self.rank[ra] == self.rank[rb];
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ diff;
        if bump {
            self.rank[ra] += 1;
        }
        self.log.push((rb, bump));
        true
    }
    fn mark(&self) -> usize {
        self.log.len()
    }
    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (rb, bump) = self.log.pop().unwrap();
            let ra = self.parent[rb];
            self.parent[rb] = rb;
            self.parity[rb] = 0;
            if bump {
                self.rank[ra] -= 1;
            }
        }
    }
}

struct Search<'a, F: FnMut(&BookEmbedding) -> bool> {
    g: &'a Digraph,
    k: usize,
    fixed: Option<&'a PlaneStGraph>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    pos: Vec<usize>,
    order: Vec<usize>,
    missing: Vec<usize>,
    budget: u64,
    nodes: u64,
    visit: F,
    all_colorings: bool,
    // k = 2
    uf: ParityUf,
    // k != 2
    page: Vec<usize>,
    forbid: Vec<u32>,
    undo: Vec<(usize, u32)>,
    symmetry: bool,
    prefix: &'a [usize],
    used: usize,
    /// Prefix states (k != 2) already shown to have no completion.
    dead_states: HashSet<Vec<u64>>,
    solutions: u64,
    stop: bool,
    over: bool,
}

const UNPLACED: usize = usize::MAX;

impl<'a, F: FnMut(&BookEmbedding) -> bool> Search<'a, F> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.over = true;
        }
        !self.over
    }

    fn place(&mut self) {
        if self.stop || self.over {
            return;
        }
        if self.order.len() == self.g.n {
            self.complete();
            return;
        }
        let key = if self.k != 2 { Some(self.state_key()) } else { None };
        if let Some(key) = &key {
            if self.dead_states.contains(key) {
                return;
            }
        }
        let before = self.solutions;
        self.extend();
        if let Some(key) = key {
            if !self.stop && !self.over && self.solutions == before && self.dead_states.len() < MEMO_CAP {
                self.dead_states.insert(key);
            }
        }
    }

    /// Everything about the prefix that can still matter: which vertices are
    /// placed, the open edges grouped by tail in spine order, their forbidden
    /// pages, and how many pages are in use.
    fn state_key(&self) -> Vec<u64> {
        let n = self.g.n;
        let mut key = vec![0u64; n.div_ceil(64)];
        for &v in &self.order {
            key[v / 64] |= 1 << (v % 64);
        }
        key.push(self.used as u64);
        for &v in &self.order {
            let mut any = false;
            for &f in &self.out[v] {
                if self.pos[self.g.edges[f].1] == UNPLACED {
                    if !any {
                        key.push(u64::MAX - v as u64);
                        any = true;
                    }
                    key.push(((f as u64) << 32) | self.forbid[f] as u64);
                }
            }
        }
        key
    }

    fn extend(&mut self) {
        for v in 0..self.g.n {
            if self.pos[v] != UNPLACED || self.missing[v] != 0 {
                continue;
            }
            if self.order.len() < self.prefix.len() && self.prefix[self.order.len()] != v {
                continue;
            }
            if !self.tick() {
                return;
            }
            self.pos[v] = self.order.len();
            self.order.push(v);
            for &e in &self.out[v] {
                self.missing[self.g.edges[e].1] -= 1;
            }
            if self.k == 2 {
                let mark = self.uf.mark();
                if self.constrain2(v) {
                    self.place();
                }
                self.uf.rollback(mark);
            } else {
                self.close_in(v, 0);
            }
            for &e in &self.out[v] {
                self.missing[self.g.edges[e].1] += 1;
            }
            self.order.pop();
            self.pos[v] = UNPLACED;
            if self.stop || self.over {
                return;
            }
        }
    }

    /// Parity constraints created by placing v.
    fn constrain2(&mut self, v: usize) -> bool {
        let left = self.g.m();
        let pv = self.pos[v];
        for i in 0..self.inc[v].len() {
            let e = self.inc[v][i];
            let pu = self.pos[self.g.edges[e].0];
            for p in pu + 1..pv {
                let w = self.order[p];
                for j in 0..self.out[w].len() {
                    let f = self.out[w][j];
                    if self.pos[self.g.edges[f].1] == UNPLACED && !self.uf.union(e, f, 1) {
                        return false;
                    }
                }
            }
        }
        let Some(p) = self.fixed else { return true };
        // in-edges of v: tails ascending on page 1, then descending on page 2
        let ins = &p.in_lr[v];
        for w in ins.windows(2) {
            let (t0, t1) = (self.pos[self.g.edges[w[0]].0], self.pos[self.g.edges[w[1]].0]);
            let ok = if t0 < t1 { self.uf.union(w[0], left, 0) } else { self.uf.union(w[1], left, 1) };
            if !ok {
                return false;
            }
        }
        // out-edge pairs whose later head is v
        for i in 0..self.inc[v].len() {
            let e = self.inc[v][i];
            let u = self.g.edges[e].0;
            let outs = &p.out_lr[u];
            let j = outs.iter().position(|&x| x == e).unwrap();
            let mut pairs = Vec::with_capacity(2);
            if j > 0 {
                pairs.push((outs[j - 1], e));
            }
            if j + 1 < outs.len() {
                pairs.push((e, outs[j + 1]));
            }
            for (a, b) in pairs {
                let (ha, hb) = (self.pos[self.g.edges[a].1], self.pos[self.g.edges[b].1]);
                if ha == UNPLACED || hb == UNPLACED {
                    continue;
                }
                let ok = if ha > hb { self.uf.union(a, left, 0) } else { self.uf.union(b, left, 1) };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn close_in(&mut self, v: usize, idx: usize) {
        if self.stop || self.over {
            return;
        }
        if idx == self.inc[v].len() {
            self.place();
            return;
        }
        let e = self.inc[v][idx];
        let pu = self.pos[self.g.edges[e].0];
        let pv = self.pos[v];
        let used = if self.symmetry { self.used } else { self.k };
        let full: u32 = (1u32 << (self.k + 1)) - 2;
        for pg in 1..=self.k.min(used + 1) {
            if self.forbid[e] & (1 << pg) != 0 {
                continue;
            }
            if !self.tick() {
                return;
            }
            let mark = self.undo.len();
            let mut dead = false;
            'outer: for p in pu + 1..pv {
                let w = self.order[p];
                for j in 0..self.out[w].len() {
                    let f = self.out[w][j];
                    let h = self.g.edges[f].1;
                    if h == v || self.pos[h] != UNPLACED {
                        continue;
                    }
                    let old = self.forbid[f];
                    if old & (1 << pg) == 0 {
                        self.undo.push((f, old));
                        self.forbid[f] = old | (1 << pg);
                        if self.forbid[f] & full == full {
                            dead = true;
                            break 'outer;
                        }
                    }
                }
            }
            if !dead {
                self.page[e] = pg;
                let prev = self.used;
                self.used = self.used.max(pg);
                self.close_in(v, idx + 1);
                self.used = prev;
                self.page[e] = 0;
            }
            while self.undo.len() > mark {
                let (f, old) = self.undo.pop().unwrap();
                self.forbid[f] = old;
            }
            if self.stop || self.over {
                return;
            }
        }
    }

    fn complete(&mut self) {
        self.solutions += 1;
        let m = self.g.m();
        if self.k != 2 {
            let be = BookEmbedding { k: self.k, order: self.order.clone(), sigma: self.page.clone() };
            if !(self.visit)(&be) {
                self.stop = true;
            }
            return;
        }
        let (lroot, lpar) = self.uf.find(m);
        // roots in order of their smallest edge
        let mut roots: Vec<usize> = Vec::new();
        let mut root_of = vec![(0, 0u8); m];
        for e in 0..m {
            let (r, p) = self.uf.find(e);
            root_of[e] = (r, p);
            if r != lroot && !roots.contains(&r) {
                roots.push(r);
            }
        }
        let free = roots.len();
        let count: u64 = if self.all_colorings { 1u64 << free.min(40) } else { 1 };
        for mask in 0..count {
            let sigma: Vec<usize> = (0..m)
                .map(|e| {
                    let (r, p) = root_of[e];
                    let bit = if r == lroot {
                        p ^ lpar
                    } else {
                        let i = roots.iter().position(|&x| x == r).unwrap();
                        // canonical colouring: the smallest edge of each component on page 1
                        let first = (0..m).find(|&x| root_of[x].0 == r).unwrap();
                        p ^ root_of[first].1 ^ ((mask >> i) & 1) as u8
                    };
                    bit as usize + 1
                })
                .collect();
            let be = BookEmbedding { k: 2, order: self.order.clone(), sigma };
            if !(self.visit)(&be) {
                self.stop = true;
                return;
            }
        }
    }
}

fn run<F: FnMut(&BookEmbedding) -> bool>(
    g: &Digraph,
    k: usize,
    mode: Mode,
    budget: u64,
    all_colorings: bool,
    symmetry: bool,
    prefix: &[usize],
    visit: F,
) -> Result<(Completion, u64), Error> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if k > 30 {
        return Err(Error::Precondition("k must be at most 30".into()));
    }
    let fixed = match mode {
        Mode::Variable => None,
        Mode::Fixed(p) => {
            if k != 2 {
                return Err(Error::Precondition("fixed-embedding search needs k = 2".into()));
            }
            if p.g != *g {
                return Err(Error::Precondition("embedding belongs to a different graph".into()));
            }
            Some(p)
        }
    };
    if !g.is_acyclic() {
        return Ok((Completion::Exhausted, 0));
    }
    let mut missing = vec![0; g.n];
    for &(_, v) in &g.edges {
        missing[v] += 1;
    }
    let mut s = Search {
        g,
        k,
        fixed,
        out: g.out_edges(),
        inc: g.in_edges(),
        pos: vec![UNPLACED; g.n],
        order: Vec::with_capacity(g.n),
        missing,
        budget,
        nodes: 0,
        visit,
        all_colorings,
        uf: ParityUf::new(g.m() + 1),
        page: vec![0; g.m()],
        forbid: vec![0; g.m()],
        undo: Vec::new(),
        symmetry: symmetry && fixed.is_none(),
        prefix,
        used: 0,
        dead_states: HashSet::new(),
        solutions: 0,
        stop: false,
        over: false,
    };
    s.place();
    let c = if s.stop {
        Completion::Stopped
    } else if s.over {
        Completion::BudgetExceeded
    } else {
        Completion::Exhausted
    };
    Ok((c, s.nodes))
}

/// The lexicographically first kUBE (smallest eligible vertex first, then
/// pages 1..k). `budget` counts search-tree nodes.
pub fn solve_kube_brute(g: &Digraph, k: usize, mode: Mode, budget: u64) -> Result<Outcome, Error> {
    let mut found = None;
    let (c, _) = run(g, k, mode, budget, false, true, &[], |be| {
        found = Some(be.clone());
        false
    })?;
    Ok(match (found, c) {
        (Some(be), _) => Outcome::Found(be),
        (None, Completion::BudgetExceeded) => Outcome::Unknown,
        _ => Outcome::None,
    })
}

/// Same search, also reporting the number of nodes used.
pub fn solve_with_stats(g: &Digraph, k: usize, mode: Mode, budget: u64) -> Result<(Outcome, u64), Error> {
    let mut found = None;
    let (c, nodes) = run(g, k, mode, budget, false, true, &[], |be| {
        found = Some(be.clone());
        false
    })?;
    let out = match (found, c) {
        (Some(be), _) => Outcome::Found(be),
        (None, Completion::BudgetExceeded) => Outcome::Unknown,
        _ => Outcome::None,
    };
    Ok((out, nodes))
}

/// Visits kUBEs until `visit` returns false. For k = 2 every page assignment
/// of every order is produced; for other k, page permutations are broken by
/// symmetry unless `all_pages` is set.
pub fn enumerate_kube<F: FnMut(&BookEmbedding) -> bool>(
    g: &Digraph,
    k: usize,
    mode: Mode,
    budget: u64,
    all_pages: bool,
    visit: F,
) -> Result<Completion, Error> {
    Ok(run(g, k, mode, budget, true, !all_pages, &[], visit)?.0)
}

/// Visits every spine order that admits a kUBE, once, with one page
/// assignment each, in lexicographic order. Each prefix is kept only if the
/// search can complete it, so the walk never enters a dead branch. `budget`
/// bounds the total node count over all the searches.
pub fn enumerate_orders<F: FnMut(&BookEmbedding) -> bool>(
    g: &Digraph,
    k: usize,
    budget: u64,
    mut visit: F,
) -> Result<Completion, Error> {
    let mut spent = 0u64;
    let mut prefix = Vec::with_capacity(g.n);
    let mut missing = vec![0; g.n];
    for &(_, v) in &g.edges {
        missing[v] += 1;
    }
    let out = g.out_edges();
    fn rec<F: FnMut(&BookEmbedding) -> bool>(
        g: &Digraph,
        k: usize,
        budget: u64,
        spent: &mut u64,
        prefix: &mut Vec<usize>,
        missing: &mut Vec<usize>,
        out: &[Vec<usize>],
        visit: &mut F,
    ) -> Result<Completion, Error> {
        for v in 0..g.n {
            if missing[v] != 0 || prefix.contains(&v) {
                continue;
            }
            prefix.push(v);
            let mut found = None;
            let (c, nodes) = run(g, k, Mode::Variable, budget.saturating_sub(*spent), false, true, prefix, |be| {
                found = Some(be.clone());
                false
            })?;
            *spent += nodes;
            if c == Completion::BudgetExceeded {
                return Ok(c);
            }
            if let Some(be) = found {
                if prefix.len() == g.n {
                    if !visit(&be) {
                        return Ok(Completion::Stopped);
                    }
                } else {
                    for &e in &out[v] {
                        missing[g.edges[e].1] -= 1;
                    }
                    let c = rec(g, k, budget, spent, prefix, missing, out, visit)?;
                    for &e in &out[v] {
                        missing[g.edges[e].1] += 1;
                    }
                    if c != Completion::Exhausted {
                        return Ok(c);
                    }
                }
            }
            prefix.pop();
        }
        Ok(Completion::Exhausted)
    }
    if g.n == 0 {
        return Ok(Completion::Exhausted);
    }
    rec(g, k, budget, &mut spent, &mut prefix, &mut missing, &out, &mut visit)
}

/// Page assignment for a fixed spine order: DSATUR-ordered backtracking over
/// the conflict graph. `pre[e]` fixes the page of e when nonzero. Returns
/// `None` when no assignment exists or the node budget runs out.
pub fn color_fixed_order(g: &Digraph, order: &[usize], k: usize, pre: &[usize], budget: u64) -> Option<Vec<usize>> {
    color_constrained(g, order, k, &PageConstraints { pre: pre.to_vec(), ..Default::default() }, budget)
}

/// Extra requirements for [`color_constrained`].
#[derive(Clone, Debug, Default)]
pub struct PageConstraints {
    /// Fixed page per edge, 0 = free.
    pub pre: Vec<usize>,
    /// Pairs that must get different pages.
    pub differ: Vec<(usize, usize)>,
    /// Pairs that must share a page.
    pub same: Vec<(usize, usize)>,
}

pub fn color_constrained(g: &Digraph, order: &[usize], k: usize, c: &PageConstraints, budget: u64) -> Option<Vec<usize>> {
    let m = g.m();
    let mut pos = vec![usize::MAX; g.n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    if order.len() != g.n || pos.contains(&usize::MAX) || g.edges.iter().any(|&(u, v)| pos[u] >= pos[v]) {
        return None;
    }
    let mut adj = vec![Vec::new(); m];
    for a in 0..m {
        for b in a + 1..m {
            if crate::book::edges_conflict(&pos, g.edges[a], g.edges[b]) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    for &(a, b) in &c.differ {
        if !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut same = vec![Vec::new(); m];
    for &(a, b) in &c.same {
        same[a].push(b);
        same[b].push(a);
    }
    let mut page = c.pre.clone();
    page.resize(m, 0);
    for a in 0..m {
        if page[a] != 0
            && (adj[a].iter().any(|&b| page[b] == page[a]) || same[a].iter().any(|&b| page[b] != 0 && page[b] != page[a]))
        {
            return None;
        }
    }
    struct Ctx<'a> {
        adj: &'a [Vec<usize>],
        same: &'a [Vec<usize>],
        k: usize,
        nodes: u64,
        budget: u64,
    }
    fn allowed(cx: &Ctx, page: &[usize], e: usize) -> u32 {
        let mut ok: u32 = ((1u32 << (cx.k + 1)) - 2) as u32;
        for &f in &cx.adj[e] {
            ok &= !(1 << page[f]);
        }
        for &f in &cx.same[e] {
            if page[f] != 0 {
                ok &= 1 << page[f];
            }
        }
        ok
    }
    fn rec(cx: &mut Ctx, page: &mut Vec<usize>) -> bool {
        cx.nodes += 1;
        if cx.nodes > cx.budget {
            return false;
        }
        let mut best = None;
        let mut best_key = (0usize, 0usize);
        for e in 0..page.len() {
            if page[e] != 0 {
                continue;
            }
            let free = allowed(cx, page, e).count_ones() as usize;
            let key = (cx.k + 1 - free, cx.adj[e].len() + cx.same[e].len());
            if best.is_none() || key > best_key {
                best = Some(e);
                best_key = key;
            }
        }
        let Some(e) = best else { return true };
        let ok = allowed(cx, page, e);
        for p in 1..=cx.k {
            if ok & (1 << p) == 0 {
                continue;
            }
            page[e] = p;
            if rec(cx, page) {
                return true;
            }
            page[e] = 0;
            if cx.nodes > cx.budget {
                return false;
            }
        }
        false
    }
    let mut cx = Ctx { adj: &adj, same: &same, k, nodes: 0, budget };
    rec(&mut cx, &mut page).then_some(page)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{is_embedding_preserving, verify_kube};
    use crate::fixtures;

    #[test]
    fn diamond_two_pages() {
        let d = fixtures::diamond();
        let out = solve_kube_brute(&d.g, 2, Mode::Variable, DEFAULT_BUDGET).unwrap();
        let be = out.found().unwrap();
        assert!(verify_kube(&d.g, be).valid);
        assert_eq!(be.order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn diamond_one_page() {
        let d = fixtures::diamond();
        assert_eq!(solve_kube_brute(&d.g, 1, Mode::Variable, DEFAULT_BUDGET).unwrap(), Outcome::None);
    }

    #[test]
    fn fc_fixed_none_variable_some() {
        let fc = fixtures::fc();
        assert_eq!(solve_kube_brute(&fc.g, 2, Mode::Fixed(&fc), DEFAULT_BUDGET).unwrap(), Outcome::None);
        assert!(solve_kube_brute(&fc.g, 2, Mode::Variable, DEFAULT_BUDGET).unwrap().is_found());
    }

    #[test]
    fn fixed_witness_preserves() {
        for p in [fixtures::diamond(), fixtures::diamond().mirror(), fixtures::t3(), fixtures::k4()] {
            let be = solve_kube_brute(&p.g, 2, Mode::Fixed(&p), DEFAULT_BUDGET).unwrap();
            assert!(is_embedding_preserving(&p, be.found().unwrap()));
        }
    }

    #[test]
    fn budget_gives_unknown() {
        let d = fixtures::diamond();
        assert_eq!(solve_kube_brute(&d.g, 1, Mode::Variable, 2).unwrap(), Outcome::Unknown);
    }

    #[test]
    fn enumerate_counts_diamond() {
        // orders s,a,b,t and s,b,a,t; each has one conflicting pair and two
        // free spine-neighbour edges -> 2 * 2^3 assignments per order
        let d = fixtures::diamond();
        let mut n = 0;
        enumerate_kube(&d.g, 2, Mode::Variable, DEFAULT_BUDGET, true, |_| {
            n += 1;
            true
        })
        .unwrap();
        assert_eq!(n, 16);
    }
}
