//! Flow networks with lower and upper bounds on the arcs.
//!
//! Feasibility uses the textbook reduction: every lower bound is moved into
//! node demands, a return arc sink -> source closes the circulation, and a
//! super source and super sink carry the demands. A feasible flow exists iff
//! the maximum super flow saturates every demand arc. Augmenting paths are
//! found by breadth-first search (Edmonds-Karp).

use num_traits::PrimInt;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc<C> {
    pub from: usize,
    pub to: usize,
    pub lo: C,
    pub hi: C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork<C> {
    pub n: usize,
    pub source: usize,
    pub sink: usize,
    pub arcs: Vec<Arc<C>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow<C> {
    /// Net flow out of the source.
    pub value: C,
    /// Flow on every arc, in arc order.
    pub on_arc: Vec<C>,
}

struct Residual<C> {
    head: Vec<usize>,
    cap: Vec<C>,
    adj: Vec<Vec<usize>>,
}

impl<C: PrimInt> Residual<C> {
    fn new(n: usize) -> Self {
        Residual { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, u: usize, v: usize, c: C) -> usize {
        let id = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.adj[u].push(id);
        self.head.push(u);
        self.cap.push(C::zero());
        self.adj[v].push(id + 1);
        id
    }

    fn max_flow(&mut self, s: usize, t: usize) -> C {
        let mut total = C::zero();
        loop {
            let mut via = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.head[a];
                    if !seen[v] && self.cap[a] > C::zero() {
                        seen[v] = true;
                        via[v] = a;
                        q.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = C::max_value();
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] = self.cap[a] - push;
                self.cap[a ^ 1] = self.cap[a ^ 1] + push;
                v = self.head[a ^ 1];
            }
            total = total + push;
        }
    }
}

impl<C: PrimInt> FlowNetwork<C> {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { n, source, sink, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, lo: C, hi: C) -> usize {
        self.arcs.push(Arc { from, to, lo, hi });
        self.arcs.len() - 1
    }

    /// A feasible flow, or `None`. Malformed arcs (lo > hi, endpoints out of
    /// range) make the network infeasible.
    pub fn feasible_flow(&self) -> Option<Flow<C>> {
        let (ss, tt) = (self.n, self.n + 1);
        let mut r = Residual::new(self.n + 2);
        let mut demand = vec![C::zero(); self.n];
        let mut supply = vec![C::zero(); self.n];
        let mut ids = Vec::with_capacity(self.arcs.len());
        let mut big = C::zero();
        for a in &self.arcs {
            if a.lo > a.hi || a.lo < C::zero() || a.from >= self.n || a.to >= self.n {
                return None;
            }
            ids.push(r.add(a.from, a.to, a.hi - a.lo));
            supply[a.to] = supply[a.to] + a.lo;
            demand[a.from] = demand[a.from] + a.lo;
            big = big.saturating_add(a.hi);
        }
        let ret = r.add(self.sink, self.source, big);
        let mut need = C::zero();
        for v in 0..self.n {
            if supply[v] > demand[v] {
                r.add(ss, v, supply[v] - demand[v]);
                need = need + (supply[v] - demand[v]);
            } else if demand[v] > supply[v] {
                r.add(v, tt, demand[v] - supply[v]);
            }
        }
        if r.max_flow(ss, tt) != need {
            return None;
        }
        let on_arc: Vec<C> = self
            .arcs
            .iter()
            .zip(&ids)
            .map(|(a, &id)| a.lo + (a.hi - a.lo - r.cap[id]))
            .collect();
        let value = big - r.cap[ret];
        Some(Flow { value, on_arc })
    }
}
