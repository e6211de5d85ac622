//! Crossing-level planar diagrams of tangles and links.
//!
//! A diagram is a set of half-edges joined in pairs by arcs. Crossing `i` owns
//! half-edges `4i..4i+4`, listed counterclockwise starting from one end of the
//! under-strand, so slots 0 and 2 are the under-strand and slots 1 and 3 the
//! over-strand (the planar-diagram convention of knot tables). A tangle also
//! owns four boundary half-edges `4n..4n+4` in the order NW, NE, SW, SE.
//! Crossingless closed circles are only counted.
//!
//! The tangle `1` has its over-strand from NW to SE and its under-strand from
//! SW to NE; its A-smoothing (weight `t`) joins slots (0,1) and (2,3), which is
//! the `0` smoothing NW-NE / SW-SE.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bracket::{BracketPair, Sign};
use crate::expr::{Closure, Node, TangleExpr};
use crate::laurent::LaurentPoly;

pub const NW: usize = 0;
pub const NE: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;

/// Default largest crossing count the state-sum oracle will enumerate.
pub const DEFAULT_STATE_SUM_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("{crossings} crossings exceeds cap {cap}")]
    CapExceeded { crossings: usize, cap: usize },
    #[error("tangle is not left-right orientable: NW is joined to SW")]
    NotLeftRightOrientable,
    #[error("left-right orientation needs a 4-ended tangle")]
    LeftRightOnLink,
    #[error("no components")]
    NoComponents,
    #[error("smoothing joins NW to SE; the diagram is not planar")]
    NonPlanarState,
    #[error("PD parse error on line {line}: {message}")]
    PdParse { line: usize, message: String },
    #[error("invalid PD code: {0}")]
    PdValidation(String),
}

/// How the four ends of a tangle are joined, plus closed components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Pairing {
    /// NW-NE and SW-SE.
    ZeroType,
    /// NW-SW and NE-SE.
    InfType,
    /// NW-SE and NE-SW.
    CrossType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Connectivity {
    pub pairing: Pairing,
    pub loops: u64,
}

impl Connectivity {
    fn new(pairing: Pairing, loops: u64) -> Self {
        Connectivity { pairing, loops }
    }

    /// Composition table for the horizontal sum.
    pub fn hsum(self, other: Connectivity) -> Connectivity {
        use Pairing::*;
        let (pairing, extra) = match (self.pairing, other.pairing) {
            (ZeroType, p) => (p, 0),
            (InfType, InfType) => (InfType, 1),
            (InfType, _) => (InfType, 0),
            (CrossType, ZeroType) => (CrossType, 0),
            (CrossType, InfType) => (InfType, 0),
            (CrossType, CrossType) => (ZeroType, 0),
        };
        Connectivity::new(pairing, self.loops + other.loops + extra)
    }

    /// Composition table for the vertical sum.
    pub fn vsum(self, other: Connectivity) -> Connectivity {
        use Pairing::*;
        let (pairing, extra) = match (self.pairing, other.pairing) {
            (InfType, p) => (p, 0),
            (ZeroType, ZeroType) => (ZeroType, 1),
            (ZeroType, _) => (ZeroType, 0),
            (CrossType, InfType) => (CrossType, 0),
            (CrossType, ZeroType) => (ZeroType, 0),
            (CrossType, CrossType) => (InfType, 0),
        };
        Connectivity::new(pairing, self.loops + other.loops + extra)
    }

    /// Components of the closed diagram.
    pub fn closure_components(self, closure: Closure) -> u64 {
        let strands = match (closure, self.pairing) {
            (Closure::Den, Pairing::InfType) | (Closure::Num, Pairing::ZeroType) => 2,
            _ => 1,
        };
        strands + self.loops
    }
}

/// Connectivity of an expression from the composition tables alone.
pub fn connectivity(e: &TangleExpr) -> Connectivity {
    e.fold(|node: Node<Connectivity>| match node {
        Node::Zero => Connectivity::new(Pairing::ZeroType, 0),
        Node::Infinity => Connectivity::new(Pairing::InfType, 0),
        Node::Twist(k) if k % 2 == 0 => Connectivity::new(Pairing::ZeroType, 0),
        Node::VTwist(k) if k % 2 == 0 => Connectivity::new(Pairing::InfType, 0),
        Node::Twist(_) | Node::VTwist(_) => Connectivity::new(Pairing::CrossType, 0),
        Node::Sum(a, b) => a.hsum(b),
        Node::Star(a, b) => a.vsum(b),
        Node::Mirror(a) => a,
    })
}

/// One crossing: half-edge ids counterclockwise from an end of the under-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub ends: [usize; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Both strands of a tangle run from the west ends to the east ends.
    LeftRight,
    /// Each component is oriented from the first under-strand slot it meets,
    /// in crossing order; for PD input this is the orientation of the labels.
    FirstStrand,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    /// Crossing signs, +1 or -1, in crossing order.
    pub signs: Vec<i8>,
    pub writhe: i64,
}

/// Shared representation of tangle and link diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Planar {
    crossings: usize,
    mate: Vec<usize>,
    free_loops: usize,
}

impl Planar {
    fn is_port(&self, h: usize) -> bool {
        h < 4 * self.crossings
    }

    /// The other end of the strand through the crossing.
    fn across(h: usize) -> usize {
        (h & !3) | ((h + 2) & 3)
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.mate.len())
            .filter(|&h| h < self.mate[h])
            .map(|h| (h, self.mate[h]))
            .collect()
    }

    /// Union-find over strands: arcs plus the straight-through pairs.
    fn strand_classes(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.mate.len());
        for (a, b) in self.arcs() {
            uf.union(a, b);
        }
        for i in 0..self.crossings {
            uf.union(4 * i, 4 * i + 2);
            uf.union(4 * i + 1, 4 * i + 3);
        }
        uf
    }

    /// Closed components that pass through at least one crossing.
    fn closed_through_crossings(&self, terminals: &[usize]) -> usize {
        let mut uf = self.strand_classes();
        let open: Vec<usize> = terminals.iter().map(|&t| uf.find(t)).collect();
        let mut roots: Vec<usize> = (0..4 * self.crossings)
            .map(|h| uf.find(h))
            .filter(|r| !open.contains(r))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Walks a strand entering a crossing at `start`, recording which
    /// half-edges are traversed inward. Returns the half-edge where the walk
    /// left the crossings (a boundary half-edge) or `None` on closing up.
    fn walk(&self, start: usize, incoming: &mut [Option<bool>]) -> Option<usize> {
        let mut p = start;
        loop {
            incoming[p] = Some(true);
            let q = Self::across(p);
            incoming[q] = Some(false);
            let next = self.mate[q];
            if !self.is_port(next) {
                incoming[next] = Some(true);
                return Some(next);
            }
            if next == start {
                return None;
            }
            p = next;
        }
    }

    /// Walks every unoriented closed component, calling `visit` with each
    /// starting half-edge. Under-strands go first, from slot 0 of each
    /// crossing; strands that only pass over start at the first free slot
    /// counterclockwise from the incoming under end, which is the order
    /// `pd_write` lists them in.
    fn walk_closed(&self, incoming: &mut [Option<bool>], mut visit: impl FnMut(usize)) {
        for i in 0..self.crossings {
            if incoming[4 * i].is_none() {
                self.walk(4 * i, incoming);
                visit(4 * i);
            }
        }
        for i in 0..self.crossings {
            let a = if incoming[4 * i] == Some(true) { 0 } else { 2 };
            for k in 0..4 {
                let h = 4 * i + (a + k) % 4;
                if incoming[h].is_none() {
                    self.walk(h, incoming);
                    visit(h);
                }
            }
        }
    }

    /// Orients from the boundary half-edges in `sources` first, then every
    /// remaining closed component.
    fn orient(&self, sources: &[usize]) -> Orientation {
        let mut incoming: Vec<Option<bool>> = vec![None; self.mate.len()];
        for &s in sources {
            if incoming[s].is_some() {
                continue;
            }
            incoming[s] = Some(false);
            let first = self.mate[s];
            if self.is_port(first) {
                self.walk(first, &mut incoming);
            } else {
                incoming[first] = Some(true);
            }
        }
        self.walk_closed(&mut incoming, |_| {});
        let signs: Vec<i8> = (0..self.crossings)
            .map(|i| {
                let a = if incoming[4 * i] == Some(true) { 0 } else { 2 };
                let d = 4 * i + (a + 3) % 4;
                if incoming[d] == Some(true) {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let writhe = signs.iter().map(|&s| i64::from(s)).sum();
        Orientation { signs, writhe }
    }

    /// Euler characteristic check for closed diagrams: every connected piece
    /// with `n` crossings bounds `n + 2` faces of the sphere.
    fn is_planar(&self) -> bool {
        let h = 4 * self.crossings;
        debug_assert_eq!(self.mate.len(), h);
        let mut pieces = UnionFind::new(self.crossings);
        for (a, b) in self.arcs() {
            pieces.union(a / 4, b / 4);
        }
        let piece_count = (0..self.crossings).filter(|&i| pieces.find(i) == i).count();
        let mut seen = vec![false; h];
        let mut faces = 0;
        for start in 0..h {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                let m = self.mate[x];
                x = (m & !3) | ((m + 1) & 3);
            }
        }
        faces == self.crossings + 2 * piece_count
    }

    /// Arc index of every half-edge, and the arc count.
    fn arc_index(&self) -> (Vec<u32>, usize) {
        let mut index = vec![u32::MAX; self.mate.len()];
        let mut count = 0u32;
        for h in 0..self.mate.len() {
            if index[h] == u32::MAX {
                index[h] = count;
                index[self.mate[h]] = count;
                count += 1;
            }
        }
        (index, count as usize)
    }

    /// Histogram of smoothing states by (A-smoothing count, circle count,
    /// terminal class). Bit `i` of a state set means crossing `i` takes its
    /// B-smoothing. `terminals` are NW, NE, SW (tangles only).
    fn state_histogram(
        &self,
        terminals: Option<[usize; 3]>,
    ) -> Result<StateHistogram, DiagramError> {
        let n = self.crossings;
        let (arc_of, arcs) = self.arc_index();
        let ports: Vec<[u32; 4]> = (0..n)
            .map(|i| [0, 1, 2, 3].map(|k| arc_of[4 * i + k]))
            .collect();
        let term = terminals.map(|t| t.map(|h| arc_of[h]));
        let open_arcs = if terminals.is_some() { 2 } else { 0 };
        let shape = HistShape {
            n,
            circles: arcs + 1,
        };
        let total: u64 = 1u64 << n;
        let chunk_bits = n.min(12);
        let chunks = total >> chunk_bits;

        let run_chunk = |chunk: u64| -> Result<Vec<u64>, DiagramError> {
            let mut hist = vec![0u64; shape.len()];
            let mut parent = vec![0u32; arcs];
            let lo = chunk << chunk_bits;
            for state in lo..lo + (1u64 << chunk_bits) {
                for (k, p) in parent.iter_mut().enumerate() {
                    *p = k as u32;
                }
                let mut merges = 0usize;
                for (i, e) in ports.iter().enumerate() {
                    let pairs = if state >> i & 1 == 0 {
                        [(e[0], e[1]), (e[2], e[3])]
                    } else {
                        [(e[0], e[3]), (e[1], e[2])]
                    };
                    for (x, y) in pairs {
                        if uf_union(&mut parent, x, y) {
                            merges += 1;
                        }
                    }
                }
                let classes = arcs - merges;
                let a_count = n - state.count_ones() as usize;
                let kind = match term {
                    None => 0,
                    Some([nw, ne, sw]) => {
                        let r = uf_find(&mut parent, nw);
                        if r == uf_find(&mut parent, ne) {
                            0
                        } else if r == uf_find(&mut parent, sw) {
                            1
                        } else {
                            return Err(DiagramError::NonPlanarState);
                        }
                    }
                };
                hist[shape.index(a_count, classes - open_arcs, kind)] += 1;
            }
            Ok(hist)
        };

        let merge = |mut a: Vec<u64>, b: Vec<u64>| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        };
        let counts = if chunks > 1 {
            (0..chunks)
                .into_par_iter()
                .map(run_chunk)
                .try_reduce(|| vec![0u64; shape.len()], |a, b| Ok(merge(a, b)))?
        } else {
            run_chunk(0)?
        };
        Ok(StateHistogram { shape, counts })
    }
}

#[derive(Debug, Clone, Copy)]
struct HistShape {
    n: usize,
    circles: usize,
}

impl HistShape {
    fn len(&self) -> usize {
        (self.n + 1) * self.circles * 2
    }

    fn index(&self, a: usize, c: usize, kind: usize) -> usize {
        (kind * (self.n + 1) + a) * self.circles + c
    }
}

struct StateHistogram {
    shape: HistShape,
    counts: Vec<u64>,
}

impl StateHistogram {
    /// `sum count * t^(a - b) * delta^(circles + extra_loops)` over states of
    /// the given terminal class. `extra_loops` may be -1 for closed diagrams.
    fn polynomial(&self, kind: usize, extra_loops: i64) -> LaurentPoly {
        let HistShape { n, circles } = self.shape;
        let delta = LaurentPoly::delta();
        let mut total = LaurentPoly::zero();
        let mut delta_pow = LaurentPoly::one();
        let mut power = 0i64;
        for c in 0..circles {
            let weight: Vec<(i64, u64)> = (0..=n)
                .map(|a| {
                    (
                        2 * a as i64 - n as i64,
                        self.counts[self.shape.index(a, c, kind)],
                    )
                })
                .filter(|(_, k)| *k > 0)
                .collect();
            if weight.is_empty() {
                continue;
            }
            let target = c as i64 + extra_loops;
            assert!(target >= 0, "negative loop power in state sum");
            while power < target {
                delta_pow = &delta_pow * &delta;
                power += 1;
            }
            total += &(LaurentPoly::from_terms(weight) * &delta_pow);
        }
        total
    }
}

fn uf_find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

fn uf_union(parent: &mut [u32], x: u32, y: u32) -> bool {
    let (rx, ry) = (uf_find(parent, x), uf_find(parent, y));
    if rx == ry {
        return false;
    }
    parent[rx.max(ry) as usize] = rx.min(ry);
    true
}

/// Union-find with path compression.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A tangle diagram with four boundary ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleDiagram {
    inner: Planar,
}

/// A closed link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    inner: Planar,
}

fn crossings_of(p: &Planar) -> Vec<Crossing> {
    (0..p.crossings)
        .map(|i| Crossing {
            ends: [4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3],
        })
        .collect()
}

impl TangleDiagram {
    pub fn crossing_count(&self) -> usize {
        self.inner.crossings
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        crossings_of(&self.inner)
    }

    /// Boundary half-edges in the order NW, NE, SW, SE.
    pub fn boundary(&self) -> [usize; 4] {
        let b = 4 * self.inner.crossings;
        [b, b + 1, b + 2, b + 3]
    }

    /// Arcs as half-edge pairs `(a, b)` with `a < b`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs()
    }

    pub fn free_loops(&self) -> usize {
        self.inner.free_loops
    }

    /// The half-edge joined to `h` by an arc.
    pub fn mate(&self, h: usize) -> usize {
        self.inner.mate[h]
    }

    /// Connectivity traced through the diagram.
    pub fn connectivity(&self) -> Connectivity {
        let [nw, ne, sw, se] = self.boundary();
        let mut uf = self.inner.strand_classes();
        let r = uf.find(nw);
        let pairing = if r == uf.find(ne) {
            Pairing::ZeroType
        } else if r == uf.find(sw) {
            Pairing::InfType
        } else {
            debug_assert_eq!(r, uf.find(se));
            Pairing::CrossType
        };
        let loops = self.inner.closed_through_crossings(&[nw, ne, sw, se]) + self.inner.free_loops;
        Connectivity::new(pairing, loops as u64)
    }

    pub fn orient(&self, convention: Convention) -> Result<Orientation, DiagramError> {
        let [nw, ne, sw, se] = self.boundary();
        match convention {
            Convention::LeftRight => {
                if self.connectivity().pairing == Pairing::InfType {
                    return Err(DiagramError::NotLeftRightOrientable);
                }
                Ok(self.inner.orient(&[nw, sw]))
            }
            Convention::FirstStrand => Ok(self.inner.orient(&[nw, ne, sw, se])),
        }
    }

    pub fn writhe(&self, convention: Convention) -> Result<i64, DiagramError> {
        Ok(self.orient(convention)?.writhe)
    }

    pub fn close(&self, closure: Closure) -> LinkDiagram {
        let [nw, ne, sw, se] = self.boundary();
        let mut b = Builder {
            mate: self.inner.mate.clone(),
            ends: Vec::new(),
            free_loops: self.inner.free_loops,
        };
        match closure {
            Closure::Den => {
                b.glue(nw, sw);
                b.glue(ne, se);
            }
            Closure::Num => {
                b.glue(nw, ne);
                b.glue(sw, se);
            }
        }
        let n = self.inner.crossings;
        b.mate.truncate(4 * n);
        LinkDiagram {
            inner: Planar {
                crossings: n,
                mate: b.mate,
                free_loops: b.free_loops,
            },
        }
    }

    /// Bracket pair by enumerating all `2^n` smoothings.
    pub fn state_sum_pair(&self, cap: usize) -> Result<BracketPair, DiagramError> {
        let n = self.inner.crossings;
        if n > cap || n > 62 {
            return Err(DiagramError::CapExceeded { crossings: n, cap });
        }
        let [nw, ne, sw, _] = self.boundary();
        let hist = self.inner.state_histogram(Some([nw, ne, sw]))?;
        let free = self.inner.free_loops as i64;
        Ok(BracketPair::new(
            hist.polynomial(0, free),
            hist.polynomial(1, free),
        ))
    }
}

impl LinkDiagram {
    pub fn crossing_count(&self) -> usize {
        self.inner.crossings
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        crossings_of(&self.inner)
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs()
    }

    pub fn free_loops(&self) -> usize {
        self.inner.free_loops
    }

    pub fn mate(&self, h: usize) -> usize {
        self.inner.mate[h]
    }

    pub fn component_count(&self) -> usize {
        self.inner.closed_through_crossings(&[]) + self.inner.free_loops
    }

    /// Whether the crossing data can be drawn on the sphere. PD input is not
    /// checked on reading; this is the check.
    pub fn is_planar(&self) -> bool {
        self.inner.is_planar()
    }

    pub fn orient(&self, convention: Convention) -> Result<Orientation, DiagramError> {
        match convention {
            Convention::LeftRight => Err(DiagramError::LeftRightOnLink),
            Convention::FirstStrand => Ok(self.inner.orient(&[])),
        }
    }

    pub fn writhe(&self) -> i64 {
        self.inner.orient(&[]).writhe
    }

    /// Kauffman bracket by enumerating all `2^n` smoothings.
    pub fn state_sum_bracket(&self, cap: usize) -> Result<LaurentPoly, DiagramError> {
        let n = self.inner.crossings;
        if n > cap || n > 62 {
            return Err(DiagramError::CapExceeded { crossings: n, cap });
        }
        if n == 0 && self.inner.free_loops == 0 {
            return Err(DiagramError::NoComponents);
        }
        let hist = self.inner.state_histogram(None)?;
        Ok(hist.polynomial(0, self.inner.free_loops as i64 - 1))
    }
}

/// Expansion workspace: half-edges are allocated freely and compacted at the end.
struct Builder {
    mate: Vec<usize>,
    /// Crossing half-edges, counterclockwise from an under end.
    ends: Vec<[usize; 4]>,
    free_loops: usize,
}

const DEAD: usize = usize::MAX;

impl Builder {
    fn alloc(&mut self) -> usize {
        self.mate.push(DEAD);
        self.mate.len() - 1
    }

    fn join(&mut self, a: usize, b: usize) {
        self.mate[a] = b;
        self.mate[b] = a;
    }

    /// Joins two boundary half-edges, removing both.
    fn glue(&mut self, p: usize, q: usize) {
        let (a, b) = (self.mate[p], self.mate[q]);
        if a == q {
            self.free_loops += 1;
        } else {
            self.join(a, b);
        }
        self.mate[p] = DEAD;
        self.mate[q] = DEAD;
    }

    fn crossing(&mut self, sign: Sign) -> [usize; 4] {
        let port = [self.alloc(), self.alloc(), self.alloc(), self.alloc()];
        let ends = match sign {
            // over NW-SE, under SW-NE
            Sign::Positive => [port[SW], port[SE], port[NE], port[NW]],
            // over SW-NE, under NW-SE
            Sign::Negative => [port[NW], port[SW], port[SE], port[NE]],
        };
        self.ends.push(ends);
        let boundary = [self.alloc(), self.alloc(), self.alloc(), self.alloc()];
        for k in 0..4 {
            self.join(port[k], boundary[k]);
        }
        boundary
    }

    fn crossingless(&mut self, pairing: Pairing) -> [usize; 4] {
        let b = [self.alloc(), self.alloc(), self.alloc(), self.alloc()];
        match pairing {
            Pairing::ZeroType => {
                self.join(b[NW], b[NE]);
                self.join(b[SW], b[SE]);
            }
            Pairing::InfType => {
                self.join(b[NW], b[SW]);
                self.join(b[NE], b[SE]);
            }
            Pairing::CrossType => unreachable!("no crossingless cross-type tangle"),
        }
        b
    }

    fn hsum(&mut self, l: [usize; 4], r: [usize; 4]) -> [usize; 4] {
        self.glue(l[NE], r[NW]);
        self.glue(l[SE], r[SW]);
        [l[NW], r[NE], l[SW], r[SE]]
    }

    fn vsum(&mut self, top: [usize; 4], bottom: [usize; 4]) -> [usize; 4] {
        self.glue(top[SW], bottom[NW]);
        self.glue(top[SE], bottom[NE]);
        [top[NW], top[NE], bottom[SW], bottom[SE]]
    }

    fn twist(&mut self, k: i64, vertical: bool) -> [usize; 4] {
        let sign = Sign::of(k);
        let mut acc = self.crossing(sign);
        for _ in 1..k.unsigned_abs() {
            let next = self.crossing(sign);
            acc = if vertical {
                self.vsum(acc, next)
            } else {
                self.hsum(acc, next)
            };
        }
        acc
    }

    fn build(&mut self, e: &TangleExpr) -> [usize; 4] {
        match e {
            TangleExpr::Zero => self.crossingless(Pairing::ZeroType),
            TangleExpr::Infinity => self.crossingless(Pairing::InfType),
            TangleExpr::Twist(k) => self.twist(*k, false),
            TangleExpr::VTwist(k) => self.twist(*k, true),
            TangleExpr::Sum(a, b) => {
                let l = self.build(a);
                let r = self.build(b);
                self.hsum(l, r)
            }
            TangleExpr::Star(a, b) => {
                let t = self.build(a);
                let u = self.build(b);
                self.vsum(t, u)
            }
            TangleExpr::Mirror(a) => {
                let first = self.ends.len();
                let boundary = self.build(a);
                for ends in &mut self.ends[first..] {
                    ends.rotate_left(1);
                }
                boundary
            }
        }
    }

    fn finish(self, boundary: [usize; 4]) -> TangleDiagram {
        let n = self.ends.len();
        let mut new_id = vec![DEAD; self.mate.len()];
        for (i, ends) in self.ends.iter().enumerate() {
            for (k, &h) in ends.iter().enumerate() {
                new_id[h] = 4 * i + k;
            }
        }
        for (k, &h) in boundary.iter().enumerate() {
            new_id[h] = 4 * n + k;
        }
        let mut mate = vec![DEAD; 4 * n + 4];
        for (old, &m) in self.mate.iter().enumerate() {
            if m != DEAD {
                mate[new_id[old]] = new_id[m];
            }
        }
        debug_assert!(mate.iter().all(|&m| m != DEAD));
        TangleDiagram {
            inner: Planar {
                crossings: n,
                mate,
                free_loops: self.free_loops,
            },
        }
    }
}

/// Expands an expression into an explicit diagram with one crossing per
/// elementary crossing of the expression.
pub fn expand(e: &TangleExpr) -> TangleDiagram {
    let mut b = Builder {
        mate: Vec::new(),
        ends: Vec::new(),
        free_loops: 0,
    };
    let boundary = b.build(e);
    b.finish(boundary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PdItem {
    X([u64; 4]),
    Loop(u64),
}

/// Scans `X[a,b,c,d]` and `Loop[k]` items on one line, tolerating a `PD[...]`
/// wrapper and separating commas.
fn scan_items(line: &str, line_no: usize) -> Result<Vec<PdItem>, DiagramError> {
    let err = |message: String| DiagramError::PdParse {
        line: line_no,
        message,
    };
    let mut items = Vec::new();
    let mut rest = line.trim();
    let mut wrappers = 0usize;
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        if let Some(r) = rest.strip_prefix("PD[") {
            wrappers += 1;
            rest = r;
            continue;
        }
        if let Some(r) = rest.strip_prefix(']') {
            if wrappers == 0 {
                return Err(err("unbalanced ']'".into()));
            }
            wrappers -= 1;
            rest = r;
            continue;
        }
        let (is_loop, body) = if let Some(r) = rest.strip_prefix("X[") {
            (false, r)
        } else if let Some(r) = rest.strip_prefix("Loop[") {
            (true, r)
        } else {
            return Err(err(format!("expected X[...] or Loop[...], found {rest:?}")));
        };
        let close = body.find(']').ok_or_else(|| err("missing ']'".into()))?;
        let labels = body[..close]
            .split(',')
            .map(|s| match s.trim().parse::<u64>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(err(format!(
                    "edge label {:?} is not a positive integer",
                    s.trim()
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        items.push(match (is_loop, labels.as_slice()) {
            (false, &[a, b, c, d]) => PdItem::X([a, b, c, d]),
            (true, &[k]) => PdItem::Loop(k),
            (false, _) => return Err(err(format!("X[...] needs 4 labels, got {}", labels.len()))),
            (true, _) => {
                return Err(err(format!(
                    "Loop[...] needs 1 label, got {}",
                    labels.len()
                )))
            }
        });
        rest = &body[close + 1..];
    }
    if wrappers != 0 {
        return Err(err("unclosed 'PD['".into()));
    }
    Ok(items)
}

fn diagram_from_items(items: &[PdItem]) -> Result<LinkDiagram, DiagramError> {
    use std::collections::HashMap;
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut loops = Vec::new();
    let mut n = 0;
    for item in items {
        match *item {
            PdItem::X(labels) => {
                for (k, l) in labels.into_iter().enumerate() {
                    seen.entry(l).or_default().push(4 * n + k);
                }
                n += 1;
            }
            PdItem::Loop(l) => loops.push(l),
        }
    }
    if n == 0 && loops.is_empty() {
        return Err(DiagramError::NoComponents);
    }
    let mut mate = vec![DEAD; 4 * n];
    let mut labels: Vec<_> = seen.into_iter().collect();
    labels.sort_unstable();
    for (label, at) in labels {
        match at.as_slice() {
            &[a, b] => {
                mate[a] = b;
                mate[b] = a;
            }
            _ => {
                return Err(DiagramError::PdValidation(format!(
                    "edge label {label} occurs {} times, expected exactly 2",
                    at.len()
                )))
            }
        }
    }
    loops.sort_unstable();
    for w in loops.windows(2) {
        if w[0] == w[1] {
            return Err(DiagramError::PdValidation(format!(
                "loop label {} repeated",
                w[0]
            )));
        }
    }
    if let Some(&l) = loops.iter().find(|&&l| {
        items
            .iter()
            .any(|i| matches!(i, PdItem::X(x) if x.contains(&l)))
    }) {
        return Err(DiagramError::PdValidation(format!(
            "loop label {l} also labels a crossing edge"
        )));
    }
    Ok(LinkDiagram {
        inner: Planar {
            crossings: n,
            mate,
            free_loops: loops.len(),
        },
    })
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Reads a planar-diagram code: `X[a,b,c,d]` crossings (counterclockwise
/// from the incoming under-edge) and `Loop[k]` crossingless components, one
/// or more per line. Blank lines and `#` comments are ignored.
pub fn pd_read(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        items.extend(scan_items(strip_comment(line), i + 1)?);
    }
    diagram_from_items(&items)
}

/// A labelled diagram from a multi-record PD file.
#[derive(Debug, Clone)]
pub struct PdRecord {
    pub line: usize,
    pub label: String,
    pub diagram: LinkDiagram,
}

/// Reads one diagram per non-blank line: an optional label followed by the
/// crossings, e.g. `3_1 PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]`.
pub fn pd_read_records(text: &str) -> Result<Vec<PdRecord>, (usize, DiagramError)> {
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let record = records.len();
        let start = ["PD[", "X[", "Loop["]
            .iter()
            .filter_map(|p| line.find(p))
            .min()
            .unwrap_or(line.len());
        let label = line[..start].trim().to_string();
        let items = scan_items(&line[start..], i + 1).map_err(|e| (record, e))?;
        let diagram = diagram_from_items(&items).map_err(|e| (record, e))?;
        records.push(PdRecord {
            line: i + 1,
            label,
            diagram,
        });
    }
    Ok(records)
}

impl LinkDiagram {
    /// Edge labels along the first-strand orientation: each component's edges
    /// are numbered consecutively, crossings are written from the incoming
    /// under-edge.
    fn pd_items(&self) -> Vec<PdItem> {
        let p = &self.inner;
        let n = p.crossings;
        let mut incoming: Vec<Option<bool>> = vec![None; p.mate.len()];
        let mut label = vec![0u64; p.mate.len()];
        let mut next = 1u64;
        let mut starts = Vec::new();
        p.walk_closed(&mut incoming, |h| starts.push(h));
        for start in starts {
            // Exit half-edges in traversal order; the last one leads back to `start`.
            let mut exits = Vec::new();
            let mut h = start;
            loop {
                let q = Planar::across(h);
                exits.push(q);
                h = p.mate[q];
                if h == start {
                    break;
                }
            }
            exits.rotate_right(1);
            for q in exits {
                label[q] = next;
                label[p.mate[q]] = next;
                next += 1;
            }
        }
        let mut items: Vec<PdItem> = (0..n)
            .map(|i| {
                let a = if incoming[4 * i] == Some(true) { 0 } else { 2 };
                PdItem::X([0, 1, 2, 3].map(|k| label[4 * i + (a + k) % 4]))
            })
            .collect();
        for _ in 0..p.free_loops {
            items.push(PdItem::Loop(next));
            next += 1;
        }
        items
    }
}

/// Writes one item per line with labels `1..` along the orientation.
pub fn pd_write(l: &LinkDiagram) -> String {
    let mut out = String::new();
    for item in l.pd_items() {
        match item {
            PdItem::X([a, b, c, d]) => writeln!(out, "X[{a},{b},{c},{d}]"),
            PdItem::Loop(k) => writeln!(out, "Loop[{k}]"),
        }
        .expect("writing to a String");
    }
    out
}
