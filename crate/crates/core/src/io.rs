//! `.stg` text format, its JSON mirror, and `.ube` book embedding files.
//!
//! ```text
//! # diamond
//! 4 4
//! 0 1
//! 0 2
//! 1 3
//! 2 3
//! ROTATION
//! 0: 0 1
//! 1: 2 0
//! 2: 3 1
//! 3: 3 2
//! OUTER 0 1 3 2
//! ```
//! Rotation lines list the incident edge indices of a vertex clockwise; the
//! `v:` prefix is optional (lines are then taken in vertex order). `OUTER`
//! gives the vertex walk of the outer face.

use crate::book::BookEmbedding;
use crate::graph::{Digraph, EmbeddedDigraph, OuterSpec, PlaneStGraph};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StgFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Vec<usize>>,
}

impl StgFile {
    pub fn digraph(&self) -> Digraph {
        Digraph::new(self.n, self.edges.clone())
    }

    pub fn embedded(&self) -> Result<EmbeddedDigraph, Error> {
        let rotation = self
            .rotation
            .clone()
            .ok_or_else(|| Error::Invalid("no ROTATION section; an embedding is required".into()))?;
        let outer = match &self.outer {
            Some(w) => OuterSpec::Walk(w.clone()),
            None => OuterSpec::Auto,
        };
        Ok(EmbeddedDigraph { g: self.digraph(), rotation, outer })
    }

    pub fn plane(&self) -> Result<PlaneStGraph, Error> {
        PlaneStGraph::from_embedded(&self.embedded()?).map_err(|r| Error::Invalid(r.to_string()))
    }

    pub fn from_plane(p: &PlaneStGraph) -> Self {
        StgFile {
            n: p.n(),
            edges: p.g.edges.clone(),
            rotation: Some(p.rotation()),
            outer: Some(outer_walk(p)),
        }
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        StgFile { n: g.n, edges: g.edges.clone(), rotation: None, outer: None }
    }
}

/// Vertex walk of the outer face starting at s: up the leftmost path, down the
/// rightmost one.
pub fn outer_walk(p: &PlaneStGraph) -> Vec<usize> {
    let (left, right) = p.boundary_paths();
    let mut walk = vec![p.s];
    walk.extend(left.iter().map(|&e| p.g.edges[e].1));
    let mut down: Vec<usize> = right.iter().map(|&e| p.g.edges[e].0).collect();
    down.remove(0);
    down.reverse();
    walk.extend(down);
    walk
}

fn nums(line: &str, lineno: usize) -> Result<Vec<usize>, Error> {
    line.split_whitespace()
        .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("line {lineno}: bad number '{x}'"))))
        .collect()
}

pub fn parse_stg(text: &str) -> Result<StgFile, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let h = nums(header, ln)?;
    if h.len() != 2 {
        return Err(Error::Parse(format!("line {ln}: header must be 'n m'")));
    }
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = lines.next().ok_or_else(|| Error::Parse("fewer edge lines than m".into()))?;
        let x = nums(l, ln)?;
        if x.len() != 2 {
            return Err(Error::Parse(format!("line {ln}: edge must be 'tail head'")));
        }
        edges.push((x[0], x[1]));
    }
    let mut rotation = None;
    let mut outer = None;
    while let Some((ln, l)) = lines.next() {
        if l == "ROTATION" {
            let mut rot = vec![Vec::new(); n];
            let mut filled = vec![false; n];
            for idx in 0..n {
                let (ln, l) = lines.next().ok_or_else(|| Error::Parse("ROTATION section is short".into()))?;
                let (v, rest) = match l.split_once(':') {
                    Some((a, b)) => {
                        let v = a.trim().parse::<usize>().map_err(|_| Error::Parse(format!("line {ln}: bad vertex")))?;
                        (v, b)
                    }
                    None => (idx, l),
                };
                if v >= n || filled[v] {
                    return Err(Error::Parse(format!("line {ln}: bad or repeated rotation vertex {v}")));
                }
                filled[v] = true;
                rot[v] = nums(rest, ln)?;
            }
            rotation = Some(rot);
        } else if let Some(rest) = l.strip_prefix("OUTER") {
            outer = Some(nums(rest, ln)?);
        } else {
            return Err(Error::Parse(format!("line {ln}: unexpected '{l}'")));
        }
    }
    Ok(StgFile { n, edges, rotation, outer })
}

pub fn write_stg(f: &StgFile) -> String {
    let mut s = format!("{} {}\n", f.n, f.edges.len());
    for &(u, v) in &f.edges {
        s += &format!("{u} {v}\n");
    }
    if let Some(rot) = &f.rotation {
        s += "ROTATION\n";
        for (v, r) in rot.iter().enumerate() {
            let items: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            s += &format!("{v}: {}\n", items.join(" "));
        }
    }
    if let Some(w) = &f.outer {
        let items: Vec<String> = w.iter().map(|e| e.to_string()).collect();
        s += &format!("OUTER {}\n", items.join(" "));
    }
    s
}

/// Reads `.stg` text or its JSON mirror (detected by a leading `{`).
pub fn read_graph(text: &str) -> Result<StgFile, Error> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    } else {
        parse_stg(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UbeFile {
    pub k: usize,
    pub pi: Vec<usize>,
    pub sigma: BTreeMap<usize, usize>,
}

impl From<&BookEmbedding> for UbeFile {
    fn from(be: &BookEmbedding) -> Self {
        UbeFile { k: be.k, pi: be.order.clone(), sigma: be.sigma.iter().copied().enumerate().collect() }
    }
}

impl UbeFile {
    pub fn to_embedding(&self, m: usize) -> Result<BookEmbedding, Error> {
        let mut sigma = vec![0; m];
        for e in 0..m {
            sigma[e] = *self
                .sigma
                .get(&e)
                .ok_or_else(|| Error::Invalid(format!("sigma misses edge {e}")))?;
        }
        if self.sigma.len() != m {
            return Err(Error::Invalid("sigma names edges that do not exist".into()));
        }
        Ok(BookEmbedding { k: self.k, order: self.pi.clone(), sigma })
    }
}

pub fn write_ube(be: &BookEmbedding) -> String {
    serde_json::to_string_pretty(&UbeFile::from(be)).expect("serializable")
}

pub fn read_ube(text: &str, m: usize) -> Result<BookEmbedding, Error> {
    let f: UbeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    f.to_embedding(m)
}
