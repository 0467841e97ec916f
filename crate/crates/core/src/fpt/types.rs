//! Embedding types of uv-graphs and their composition.
//!
//! A 2UBE of a uv-graph leaves every spine gap (between consecutive spine
//! vertices) covered by arcs of one page or both. A gap is labelled `l` when
//! only right-page arcs cover it (so it is visible from the left), `r` when
//! only left-page arcs cover it, and `n` when both do. The embedding type is
//! read off the label sequence: the first gap, which labels occur, the last
//! gap.

use crate::book::{verify_kube, BookEmbedding};
use crate::graph::Digraph;
use crate::Error;
use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vis {
    L,
    R,
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spine {
    L,
    R,
    B,
    N,
}

impl Vis {
    fn char(self) -> char {
        match self {
            Vis::L => 'L',
            Vis::R => 'R',
            Vis::N => 'N',
        }
    }
    fn flip(self) -> Vis {
        match self {
            Vis::L => Vis::R,
            Vis::R => Vis::L,
            Vis::N => Vis::N,
        }
    }
    fn from_label(c: u8) -> Vis {
        match c {
            b'l' => Vis::L,
            b'r' => Vis::R,
            _ => Vis::N,
        }
    }
}

impl Spine {
    fn char(self) -> char {
        match self {
            Spine::L => 'L',
            Spine::R => 'R',
            Spine::B => 'B',
            Spine::N => 'N',
        }
    }
    fn flip(self) -> Spine {
        match self {
            Spine::L => Spine::R,
            Spine::R => Spine::L,
            s => s,
        }
    }
    fn from_presence(l: bool, r: bool) -> Spine {
        match (l, r) {
            (true, true) => Spine::B,
            (true, false) => Spine::L,
            (false, true) => Spine::R,
            (false, false) => Spine::N,
        }
    }
    fn has_l(self) -> bool {
        matches!(self, Spine::L | Spine::B)
    }
    fn has_r(self) -> bool {
        matches!(self, Spine::R | Spine::B)
    }
}

/// ⟨s_vis, spine_vis, t_vis⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbType {
    pub s: Vis,
    pub spine: Spine,
    pub t: Vis,
}

impl EmbType {
    pub const fn new(s: Vis, spine: Spine, t: Vis) -> Self {
        EmbType { s, spine, t }
    }

    pub fn admissible(self) -> bool {
        let has = |v: Vis| self.s == v || self.t == v;
        match self.spine {
            Spine::L => !has(Vis::R),
            Spine::R => !has(Vis::L),
            Spine::N => self.s == Vis::N && self.t == Vis::N,
            Spine::B => true,
        }
    }

    /// Left and right exchanged.
    pub fn hmirror(self) -> Self {
        EmbType::new(self.s.flip(), self.spine.flip(), self.t.flip())
    }

    /// s and t exchanged.
    pub fn vmirror(self) -> Self {
        EmbType::new(self.t, self.spine, self.s)
    }

    pub fn index(self) -> usize {
        all_types().iter().position(|&t| t == self).expect("admissible type")
    }

    pub fn parse(s: &str) -> Option<Self> {
        let c: Vec<char> = s.trim_matches(|c| c == '<' || c == '>' || c == '⟨' || c == '⟩').chars().filter(|c| c.is_alphabetic()).collect();
        if c.len() != 3 {
            return None;
        }
        let vis = |c: char| match c {
            'L' => Some(Vis::L),
            'R' => Some(Vis::R),
            'N' => Some(Vis::N),
            _ => None,
        };
        let spine = match c[1] {
            'L' => Spine::L,
            'R' => Spine::R,
            'B' => Spine::B,
            'N' => Spine::N,
            _ => return None,
        };
        let t = EmbType::new(vis(c[0])?, spine, vis(c[2])?);
        t.admissible().then_some(t)
    }
}

impl fmt::Display for EmbType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.s.char(), self.spine.char(), self.t.char())
    }
}

impl Serialize for EmbType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub const NUM_TYPES: usize = 18;

/// The 18 admissible types, sorted.
pub fn all_types() -> &'static [EmbType; NUM_TYPES] {
    static ALL: OnceLock<[EmbType; NUM_TYPES]> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut v = Vec::new();
        for s in [Vis::L, Vis::R, Vis::N] {
            for spine in [Spine::L, Spine::R, Spine::B, Spine::N] {
                for t in [Vis::L, Vis::R, Vis::N] {
                    let ty = EmbType::new(s, spine, t);
                    if ty.admissible() {
                        v.push(ty);
                    }
                }
            }
        }
        v.sort();
        v.try_into().expect("18 admissible types")
    })
}

pub const LLL: EmbType = EmbType::new(Vis::L, Spine::L, Vis::L);
pub const RRR: EmbType = EmbType::new(Vis::R, Spine::R, Vis::R);

/// Set of types as a bitmask over `all_types()` indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSet(pub u32);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    pub fn all() -> TypeSet {
        TypeSet((1 << NUM_TYPES) - 1)
    }
    pub fn single(t: EmbType) -> TypeSet {
        TypeSet(1 << t.index())
    }
    pub fn insert(&mut self, t: EmbType) {
        self.0 |= 1 << t.index();
    }
    pub fn contains(self, t: EmbType) -> bool {
        self.0 >> t.index() & 1 == 1
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn union(self, o: TypeSet) -> TypeSet {
        TypeSet(self.0 | o.0)
    }
    pub fn iter(self) -> impl Iterator<Item = EmbType> {
        (0..NUM_TYPES).filter(move |i| self.0 >> i & 1 == 1).map(|i| all_types()[i])
    }
    pub fn hmirror(self) -> TypeSet {
        self.iter().map(EmbType::hmirror).collect()
    }
    pub fn vmirror(self) -> TypeSet {
        self.iter().map(EmbType::vmirror).collect()
    }
}

impl FromIterator<EmbType> for TypeSet {
    fn from_iter<I: IntoIterator<Item = EmbType>>(it: I) -> Self {
        let mut s = TypeSet::EMPTY;
        for t in it {
            s.insert(t);
        }
        s
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

impl Serialize for TypeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|t| t.to_string()))
    }
}

/// Composition keys: a type (index 0..18) or one of the two drawings of a
/// single edge, which compose differently from longer graphs of the same
/// type.
pub type Key = usize;
pub const NUM_KEYS: usize = NUM_TYPES + 2;
/// The edge (u,v) on the right page.
pub const Q_LLL: Key = NUM_TYPES;
/// The edge (u,v) on the left page.
pub const Q_RRR: Key = NUM_TYPES + 1;

pub fn key_type(k: Key) -> EmbType {
    match k {
        Q_LLL => LLL,
        Q_RRR => RRR,
        i => all_types()[i],
    }
}

pub fn key_name(k: Key) -> String {
    match k {
        Q_LLL => "Q-LLL".into(),
        Q_RRR => "Q-RRR".into(),
        i => all_types()[i].to_string(),
    }
}

/// A child's options as a mask over the 20 keys.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeySet(pub u32);

impl KeySet {
    /// A child that is a single edge.
    pub const Q: KeySet = KeySet(1 << Q_LLL | 1 << Q_RRR);

    pub fn of_types(t: TypeSet) -> KeySet {
        KeySet(t.0)
    }
    pub fn keys(self) -> impl Iterator<Item = Key> {
        (0..NUM_KEYS).filter(move |i| self.0 >> i & 1 == 1)
    }
    pub fn types(self) -> TypeSet {
        self.keys().map(key_type).collect()
    }
    pub fn is_q(self) -> bool {
        self.0 & KeySet::Q.0 != 0
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

pub fn seq_type(labels: &[u8]) -> EmbType {
    let has_l = labels.contains(&b'l');
    let has_r = labels.contains(&b'r');
    EmbType::new(
        Vis::from_label(labels[0]),
        Spine::from_presence(has_l, has_r),
        Vis::from_label(*labels.last().unwrap()),
    )
}

/// Gap labels of a 2UBE of a uv-graph, bottom to top.
pub fn gap_labels(g: &Digraph, be: &BookEmbedding) -> Result<Vec<u8>, Error> {
    let rep = verify_kube(g, be);
    if !rep.valid || be.k != 2 {
        return Err(Error::Invalid("not a valid 2UBE".into()));
    }
    if g.n < 2 {
        return Err(Error::Invalid("a uv-graph has at least two vertices".into()));
    }
    let pos = be.positions();
    let mut cover = vec![[false; 2]; g.n - 1];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        for c in &mut cover[pos[u]..pos[v]] {
            c[be.sigma[e] - 1] = true;
        }
    }
    cover
        .iter()
        .map(|c| match c {
            [true, true] => Ok(b'n'),
            [true, false] => Ok(b'r'),
            [false, true] => Ok(b'l'),
            _ => Err(Error::Invalid("a spine gap is not covered (not a uv-graph)".into())),
        })
        .collect()
}

pub fn classify_embedding_type(g: &Digraph, be: &BookEmbedding) -> Result<EmbType, Error> {
    Ok(seq_type(&gap_labels(g, be)?))
}

/// Types of the series composition: the first part below the second.
pub fn s_node_compose(a: TypeSet, b: TypeSet) -> TypeSet {
    let mut out = TypeSet::EMPTY;
    for x in a.iter() {
        for y in b.iter() {
            let l = x.spine.has_l() || y.spine.has_l();
            let r = x.spine.has_r() || y.spine.has_r();
            out.insert(EmbType::new(x.s, Spine::from_presence(l, r), y.t));
        }
    }
    out
}

fn meet(a: u8, b: u8) -> u8 {
    if a == b && a != b'n' {
        a
    } else {
        b'n'
    }
}

/// Gap sequences of all drawings with `a` to the left of `b` sharing both
/// poles. A vertex of one side can only sit in a gap of the other side that
/// is visible from its direction.
pub fn merges(a: &[u8], b: &[u8]) -> Vec<Vec<u8>> {
    fn rec(a: &[u8], b: &[u8], i: usize, j: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        cur.push(meet(a[i], b[j]));
        if i + 1 == a.len() && j + 1 == b.len() {
            out.push(cur.clone());
        }
        if i + 1 < a.len() && b[j] == b'l' {
            rec(a, b, i + 1, j, cur, out);
        }
        if j + 1 < b.len() && a[i] == b'r' {
            rec(a, b, i, j + 1, cur, out);
        }
        cur.pop();
    }
    let mut out = Vec::new();
    rec(a, b, 0, 0, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Shortest label sequence (then lexicographically first in l < r < n) of
/// each key; single labels stand for single edges.
pub fn representative(k: Key) -> &'static [u8] {
    static REPS: OnceLock<Vec<Vec<u8>>> = OnceLock::new();
    &REPS.get_or_init(|| {
        let mut reps: Vec<Option<Vec<u8>>> = vec![None; NUM_KEYS];
        reps[Q_LLL] = Some(b"l".to_vec());
        reps[Q_RRR] = Some(b"r".to_vec());
        for len in 2..=4 {
            let mut seqs: Vec<Vec<u8>> = vec![Vec::new()];
            for _ in 0..len {
                seqs = seqs
                    .into_iter()
                    .flat_map(|s| {
                        b"lrn".iter().map(move |&c| {
                            let mut t = s.clone();
                            t.push(c);
                            t
                        })
                    })
                    .collect();
            }
            for s in seqs {
                let i = seq_type(&s).index();
                if reps[i].is_none() {
                    reps[i] = Some(s);
                }
            }
        }
        reps.into_iter().map(|r| r.expect("every key has a representative")).collect()
    })[k]
}

/// Types obtainable by putting a drawing with key `a` to the left of one
/// with key `b`.
pub fn compose(a: Key, b: Key) -> TypeSet {
    static TABLE: OnceLock<Vec<TypeSet>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![TypeSet::EMPTY; NUM_KEYS * NUM_KEYS];
        for x in 0..NUM_KEYS {
            for y in 0..NUM_KEYS {
                t[x * NUM_KEYS + y] =
                    merges(representative(x), representative(y)).iter().map(|s| seq_type(s)).collect();
            }
        }
        t
    })[a * NUM_KEYS + b]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::{enumerate_kube, Mode};

    fn t(s: &str) -> EmbType {
        EmbType::parse(s).unwrap()
    }

    #[test]
    fn eighteen_types() {
        let all = all_types();
        assert_eq!(all.len(), 18);
        let count = |sp: Spine| all.iter().filter(|t| t.spine == sp).count();
        assert_eq!((count(Spine::L), count(Spine::R), count(Spine::B), count(Spine::N)), (4, 4, 9, 1));
        for &x in all {
            assert!(x.hmirror().admissible() && x.vmirror().admissible());
            assert_eq!(x.hmirror().hmirror(), x);
            assert_eq!(x.vmirror().vmirror(), x);
            assert_eq!(EmbType::parse(&x.to_string()), Some(x));
        }
    }

    #[test]
    fn single_edge_and_small_drawings() {
        let g = fixtures::k2().g;
        let be = |order: Vec<usize>, sigma: Vec<usize>| BookEmbedding { k: 2, order, sigma };
        assert_eq!(classify_embedding_type(&g, &be(vec![0, 1], vec![2])).unwrap(), t("LLL"));
        assert_eq!(classify_embedding_type(&g, &be(vec![0, 1], vec![1])).unwrap(), t("RRR"));
        let d = fixtures::diamond().g;
        // a on the left, b on the right, a below b
        assert_eq!(classify_embedding_type(&d, &be(vec![0, 1, 2, 3], vec![1, 2, 1, 2])).unwrap(), t("NNN"));
        let p = fixtures::path3().g;
        assert_eq!(classify_embedding_type(&p, &be(vec![0, 1, 2], vec![1, 1])).unwrap(), t("RRR"));
        assert!(classify_embedding_type(&p, &be(vec![1, 0, 2], vec![1, 1])).is_err());
    }

    #[test]
    fn classification_lands_in_the_list() {
        for p in crate::gen::all_plane_st_graphs(5) {
            enumerate_kube(&p.g, 2, Mode::Variable, u64::MAX, true, |be| {
                let ty = classify_embedding_type(&p.g, be).unwrap();
                assert!(ty.admissible());
                true
            })
            .unwrap();
        }
    }

    #[test]
    fn series_composition() {
        let s = |x: &str| TypeSet::single(t(x));
        assert_eq!(s_node_compose(s("RRR"), s("RRR")), s("RRR"));
        assert_eq!(s_node_compose(s("LLL"), s("RRR")), s("LBR"));
        assert_eq!(s_node_compose(s("NNN"), s("NNN")), s("NNN"));
    }

    #[test]
    fn representatives() {
        for k in 0..NUM_KEYS {
            let r = representative(k);
            assert_eq!(seq_type(r), key_type(k));
            assert_eq!(r.len() == 1, k >= NUM_TYPES);
        }
        assert_eq!(representative(t("NBN").index()), b"nlrn");
    }

    /// The composition must not depend on which drawing represents a key:
    /// every pair of label sequences up to length 5 composes like the
    /// representatives of their keys.
    #[test]
    fn composition_is_representative_free() {
        let mut seqs: Vec<Vec<u8>> = vec![b"l".to_vec(), b"r".to_vec()];
        let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
        for len in 1..=5 {
            layer = layer.into_iter().flat_map(|s| b"lrn".iter().map(move |&c| [s.clone(), vec![c]].concat())).collect();
            if len >= 2 {
                seqs.extend(layer.iter().cloned());
            }
        }
        let key = |s: &[u8]| match s {
            b"l" => Q_LLL,
            b"r" => Q_RRR,
            _ => seq_type(s).index(),
        };
        for a in seqs.iter().step_by(3) {
            for b in seqs.iter().step_by(2) {
                let got: TypeSet = merges(a, b).iter().map(|m| seq_type(m)).collect();
                assert_eq!(got, compose(key(a), key(b)), "{:?} {:?}", a, b);
            }
        }
    }

    #[test]
    fn compose_examples() {
        // the edge (u,v) on the left page covers everything to its right
        assert_eq!(compose(Q_RRR, t("RBR").index()), TypeSet::single(t("RRR")));
        assert_eq!(compose(t("RRR").index(), t("RBR").index()), TypeSet::single(t("RRR")));
        assert_eq!(compose(t("RRR").index(), t("RRR").index()), TypeSet::EMPTY);
        assert_eq!(compose(Q_RRR, Q_LLL), TypeSet::single(t("NNN")));
    }
}
