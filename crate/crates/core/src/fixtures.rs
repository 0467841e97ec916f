//! Small named graphs used throughout the tests and docs.

use crate::graph::{Builder, PlaneStGraph};

/// s -> t.
pub fn k2() -> PlaneStGraph {
    let mut b = Builder::new(2);
    b.push_edge(0, 1);
    b.build().unwrap()
}

/// s -> a -> t.
pub fn path3() -> PlaneStGraph {
    let mut b = Builder::new(3);
    b.push_edge(0, 1);
    b.push_edge(1, 2);
    b.build().unwrap()
}

/// s=0, a=1 (left), b=2 (right), t=3.
pub fn diamond() -> PlaneStGraph {
    let mut b = Builder::new(4);
    b.push_edge(0, 1);
    b.push_edge(0, 2);
    b.push_edge(1, 3);
    b.push_edge(2, 3);
    b.build().unwrap()
}

/// Transitive triangle s=0, a=1, t=2 with (s,t) on the right.
pub fn t3() -> PlaneStGraph {
    let mut b = Builder::new(3);
    b.push_edge(0, 1);
    b.push_edge(1, 2);
    b.push_edge(0, 2);
    b.build().unwrap()
}

/// Two generalized triangles sharing the transitive edge (u,v):
/// u=0, a=1, v=2, b=3; u -> a -> v on the left, u -> b -> v on the right.
pub fn fc() -> PlaneStGraph {
    let mut b = Builder::new(4);
    b.push_edge(0, 1);
    b.push_edge(1, 2);
    b.push_edge(0, 2);
    b.push_edge(0, 3);
    b.push_edge(3, 2);
    b.build().unwrap()
}

/// Diamond plus the edge (s,t) on the right.
pub fn diamond_st() -> PlaneStGraph {
    let mut b = Builder::from_plane(&diamond());
    b.push_edge(0, 3);
    b.build().unwrap()
}

/// K4 as an st-graph: s=0, a=1, b=2, t=3 with a on the left, b in the middle
/// and (s,t) on the right.
pub fn k4() -> PlaneStGraph {
    let mut b = Builder::new(4);
    b.push_edge(0, 1);
    b.push_edge(1, 3);
    b.push_edge(1, 2);
    b.push_edge(0, 2);
    b.push_edge(2, 3);
    b.push_edge(0, 3);
    b.build().unwrap()
}
