//! Normal curves on the boundary of a single tetrahedron.
//!
//! A normal curve system is determined by its six edge weights. Curves are
//! realized with the canonical arrangement: in every face, arcs cutting a
//! corner are concentric toward that corner, so tracing is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("inadmissible weights on face {face}: {reason}")]
    Inadmissible { face: Face, reason: &'static str },
    #[error("traced loop with weights {0} is not a triangle, quadrilateral or long loop")]
    Unclassifiable(EdgeWeights),
    #[error("invalid long loop: {0}")]
    InvalidLong(String),
    #[error("unknown opposite edge pair `{0}`")]
    UnknownPair(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
}

/// An edge of the tetrahedron, indexed in the fixed order `01, 02, 03, 12, 13, 23`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(u8);

const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl Edge {
    pub const ALL: [Edge; 6] = [Edge(0), Edge(1), Edge(2), Edge(3), Edge(4), Edge(5)];

    pub fn new(u: u8, v: u8) -> Option<Edge> {
        let key = if u < v { (u, v) } else { (v, u) };
        EDGE_VERTICES.iter().position(|&e| e == key).map(|i| Edge(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Endpoints with the smaller vertex first.
    pub fn endpoints(self) -> (u8, u8) {
        EDGE_VERTICES[self.index()]
    }

    pub fn contains(self, v: u8) -> bool {
        let (a, b) = self.endpoints();
        a == v || b == v
    }

    pub fn opposite(self) -> Edge {
        Edge(5 - self.0)
    }

    pub fn pair(self) -> OppositePair {
        OppositePair(self.0.min(5 - self.0))
    }

    /// The two faces containing this edge, the one with the smaller third
    /// vertex first. The first is the left face, the second the right face.
    pub fn faces(self) -> [Face; 2] {
        let (u, v) = self.endpoints();
        let mut others = (0..4u8).filter(|&x| x != u && x != v);
        let x = others.next().unwrap();
        let y = others.next().unwrap();
        // A face is named by the vertex it omits.
        [Face(y), Face(x)]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.endpoints();
        write!(f, "{u}{v}")
    }
}

impl FromStr for Edge {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits: Vec<u8> = s.trim().chars().filter_map(|c| c.to_digit(10).map(|d| d as u8)).collect();
        match digits.as_slice() {
            [u, v] if *u < 4 && *v < 4 && u != v => Ok(Edge::new(*u, *v).unwrap()),
            _ => Err(CurveError::UnknownEdge(s.to_string())),
        }
    }
}

/// One of the three pairs of opposite edges: `01-23`, `02-13`, `03-12`.
///
/// The index order of the pairs is the fixed total order used to break ties
/// between the short and medium roles of a long loop with `a = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OppositePair(u8);

impl OppositePair {
    pub const ALL: [OppositePair; 3] = [OppositePair(0), OppositePair(1), OppositePair(2)];

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn edges(self) -> [Edge; 2] {
        [Edge(self.0), Edge(5 - self.0)]
    }

    fn others(self) -> [OppositePair; 2] {
        let mut it = OppositePair::ALL.into_iter().filter(|&p| p != self);
        [it.next().unwrap(), it.next().unwrap()]
    }
}

impl fmt::Display for OppositePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [e, e2] = self.edges();
        write!(f, "{e}-{e2}")
    }
}

impl FromStr for OppositePair {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (first, second) = s.split_once('-').ok_or_else(|| CurveError::UnknownPair(s.to_string()))?;
        let e: Edge = first.parse().map_err(|_| CurveError::UnknownPair(s.to_string()))?;
        let e2: Edge = second.parse().map_err(|_| CurveError::UnknownPair(s.to_string()))?;
        if e.opposite() != e2 {
            return Err(CurveError::UnknownPair(s.to_string()));
        }
        Ok(e.pair())
    }
}

impl TryFrom<String> for OppositePair {
    type Error = CurveError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<OppositePair> for String {
    fn from(p: OppositePair) -> String {
        p.to_string()
    }
}

/// A face of the tetrahedron, named by the vertex it omits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(u8);

impl Face {
    pub const ALL: [Face; 4] = [Face(0), Face(1), Face(2), Face(3)];

    pub fn omitted(self) -> u8 {
        self.0
    }

    pub fn vertices(self) -> [u8; 3] {
        let mut it = (0..4u8).filter(|&v| v != self.0);
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    }

    pub fn edges(self) -> [Edge; 3] {
        let [u, v, w] = self.vertices();
        [Edge::new(u, v).unwrap(), Edge::new(u, w).unwrap(), Edge::new(v, w).unwrap()]
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v, w] = self.vertices();
        write!(f, "{u}{v}{w}")
    }
}

/// Intersection counts of a curve system with the six edges, in the order
/// `[01, 02, 03, 12, 13, 23]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeWeights(pub [u32; 6]);

impl EdgeWeights {
    pub const ZERO: EdgeWeights = EdgeWeights([0; 6]);

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_weight(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn pair_weights(&self, pair: OppositePair) -> (u32, u32) {
        let [e, e2] = pair.edges();
        (self[e], self[e2])
    }
}

impl Index<Edge> for EdgeWeights {
    type Output = u32;
    fn index(&self, e: Edge) -> &u32 {
        &self.0[e.index()]
    }
}

impl IndexMut<Edge> for EdgeWeights {
    fn index_mut(&mut self, e: Edge) -> &mut u32 {
        &mut self.0[e.index()]
    }
}

impl Add for EdgeWeights {
    type Output = EdgeWeights;
    fn add(mut self, rhs: EdgeWeights) -> EdgeWeights {
        for i in 0..6 {
            self.0[i] += rhs.0[i];
        }
        self
    }
}

impl std::iter::Sum for EdgeWeights {
    fn sum<I: Iterator<Item = EdgeWeights>>(iter: I) -> EdgeWeights {
        iter.fold(EdgeWeights::ZERO, |acc, w| acc + w)
    }
}

impl fmt::Display for EdgeWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.0;
        write!(f, "[{}, {}, {}, {}, {}, {}]", w[0], w[1], w[2], w[3], w[4], w[5])
    }
}

/// Normal arc counts per face corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcCoordinates {
    // [face][corner vertex]; the omitted vertex of each face stays zero.
    t: [[u32; 4]; 4],
}

impl ArcCoordinates {
    /// Number of arcs in `face` cutting off the corner at `corner`.
    pub fn get(&self, face: Face, corner: u8) -> u32 {
        assert_ne!(face.omitted(), corner, "vertex {corner} is not a corner of face {face}");
        self.t[face.0 as usize][corner as usize]
    }
}

fn check_face(w: &EdgeWeights, face: Face) -> Result<(), CurveError> {
    let [e1, e2, e3] = face.edges();
    let (a, b, c) = (w[e1], w[e2], w[e3]);
    if (a + b + c) % 2 != 0 {
        return Err(CurveError::Inadmissible { face, reason: "odd weight sum" });
    }
    if a > b + c || b > a + c || c > a + b {
        return Err(CurveError::Inadmissible { face, reason: "triangle inequality fails" });
    }
    Ok(())
}

pub fn is_admissible(w: &EdgeWeights) -> bool {
    Face::ALL.iter().all(|&f| check_face(w, f).is_ok())
}

pub fn arc_coordinates(w: &EdgeWeights) -> Result<ArcCoordinates, CurveError> {
    let mut t = [[0u32; 4]; 4];
    for face in Face::ALL {
        check_face(w, face)?;
        let [u, v, x] = face.vertices();
        for (corner, p, q) in [(u, v, x), (v, u, x), (x, u, v)] {
            let near1 = w[Edge::new(corner, p).unwrap()];
            let near2 = w[Edge::new(corner, q).unwrap()];
            let far = w[Edge::new(p, q).unwrap()];
            t[face.0 as usize][corner as usize] = (near1 + near2 - far) / 2;
        }
    }
    Ok(ArcCoordinates { t })
}

/// A connected normal loop, up to normal isotopy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "LoopRecord", into = "LoopRecord")]
pub enum LoopKind {
    /// Vertex link.
    Triangle { vertex: u8 },
    /// Quadrilateral missing both edges of `axis`.
    Quad { axis: OppositePair },
    /// Weight `a` on the short pair, `b` on the medium pair and `a + b` on the
    /// long pair, with `1 <= a <= b` and `gcd(a, b) = 1`.
    Long { long: OppositePair, short: OppositePair, a: u32, b: u32 },
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LoopKind {
    /// Builds a long loop, canonicalizing the short pair when `a = b`.
    pub fn long(long: OppositePair, short: OppositePair, a: u32, b: u32) -> Result<LoopKind, CurveError> {
        if long == short {
            return Err(CurveError::InvalidLong("long and short pairs coincide".into()));
        }
        if a == 0 || a > b {
            return Err(CurveError::InvalidLong(format!("need 1 <= a <= b, got a={a}, b={b}")));
        }
        if gcd(a, b) != 1 {
            return Err(CurveError::InvalidLong(format!(
                "gcd({a}, {b}) > 1 describes parallel copies, not one loop"
            )));
        }
        let short = if a == b { long.others()[0] } else { short };
        Ok(LoopKind::Long { long, short, a, b })
    }

    pub fn length(&self) -> u32 {
        loop_length(self)
    }

    pub fn weights(&self) -> EdgeWeights {
        weights_of(self)
    }

    pub fn is_triangle(&self) -> bool {
        matches!(self, LoopKind::Triangle { .. })
    }

    pub fn is_long(&self) -> bool {
        matches!(self, LoopKind::Long { .. })
    }

    /// The medium pair of a long loop.
    pub fn medium(&self) -> Option<OppositePair> {
        match *self {
            LoopKind::Long { long, short, .. } => {
                OppositePair::ALL.into_iter().find(|&p| p != long && p != short)
            }
            _ => None,
        }
    }
}

impl fmt::Display for LoopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopKind::Triangle { vertex } => write!(f, "triangle({vertex})"),
            LoopKind::Quad { axis } => write!(f, "quad({axis})"),
            LoopKind::Long { long, short, a, b } => {
                write!(f, "long(long={long}, short={short}, a={a}, b={b})")
            }
        }
    }
}

/// Wire form of a [`LoopKind`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum LoopRecord {
    Triangle { vertex: u8 },
    Quad { axis: OppositePair },
    Long { long_pair: OppositePair, short_pair: OppositePair, a: u32, b: u32 },
}

impl TryFrom<LoopRecord> for LoopKind {
    type Error = CurveError;

    fn try_from(r: LoopRecord) -> Result<Self, Self::Error> {
        match r {
            LoopRecord::Triangle { vertex } if vertex < 4 => Ok(LoopKind::Triangle { vertex }),
            LoopRecord::Triangle { vertex } => {
                Err(CurveError::InvalidLong(format!("vertex {vertex} out of range")))
            }
            LoopRecord::Quad { axis } => Ok(LoopKind::Quad { axis }),
            LoopRecord::Long { long_pair, short_pair, a, b } => LoopKind::long(long_pair, short_pair, a, b),
        }
    }
}

impl From<LoopKind> for LoopRecord {
    fn from(k: LoopKind) -> Self {
        match k {
            LoopKind::Triangle { vertex } => LoopRecord::Triangle { vertex },
            LoopKind::Quad { axis } => LoopRecord::Quad { axis },
            LoopKind::Long { long, short, a, b } => {
                LoopRecord::Long { long_pair: long, short_pair: short, a, b }
            }
        }
    }
}

pub fn weights_of(k: &LoopKind) -> EdgeWeights {
    let mut w = EdgeWeights::ZERO;
    match *k {
        LoopKind::Triangle { vertex } => {
            for e in Edge::ALL.into_iter().filter(|e| e.contains(vertex)) {
                w[e] = 1;
            }
        }
        LoopKind::Quad { axis } => {
            for e in Edge::ALL.into_iter().filter(|e| e.pair() != axis) {
                w[e] = 1;
            }
        }
        LoopKind::Long { long, short, a, b } => {
            for e in Edge::ALL {
                w[e] = if e.pair() == long {
                    a + b
                } else if e.pair() == short {
                    a
                } else {
                    b
                };
            }
        }
    }
    w
}

pub fn loop_length(k: &LoopKind) -> u32 {
    match *k {
        LoopKind::Triangle { .. } => 3,
        LoopKind::Quad { .. } => 4,
        LoopKind::Long { a, b, .. } => 4 * (a + b),
    }
}

/// Recognizes the weight vector of a single connected loop.
pub fn classify(w: &EdgeWeights) -> Result<LoopKind, CurveError> {
    let unclassified = || CurveError::Unclassifiable(*w);
    for vertex in 0..4u8 {
        if Edge::ALL.iter().all(|e| w[*e] == u32::from(e.contains(vertex))) {
            return Ok(LoopKind::Triangle { vertex });
        }
    }
    let mut pair_weight = [0u32; 3];
    for pair in OppositePair::ALL {
        let (x, y) = w.pair_weights(pair);
        if x != y {
            return Err(unclassified());
        }
        pair_weight[pair.index()] = x;
    }
    let mut order = OppositePair::ALL;
    order.sort_by_key(|p| (pair_weight[p.index()], p.index()));
    let [short, medium, long] = order.map(|p| pair_weight[p.index()]);
    if short == 0 && medium == 1 && long == 1 {
        return Ok(LoopKind::Quad { axis: order[0] });
    }
    if short >= 1 && long == short + medium && gcd(short, medium) == 1 {
        return LoopKind::long(order[2], order[0], short, medium);
    }
    Err(unclassified())
}

/// Canonical realization of an admissible weight vector: for every face and
/// every point on each of its edges, the corner cut by the arc through it.
struct Realization {
    weights: EdgeWeights,
    // (face, edge) -> corner vertex of each point on the edge, ordered from
    // the smaller endpoint.
    corners: BTreeMap<(Face, Edge), Vec<u8>>,
}

impl Realization {
    fn new(w: &EdgeWeights) -> Result<Self, CurveError> {
        let arcs = arc_coordinates(w)?;
        let mut corners = BTreeMap::new();
        for face in Face::ALL {
            for edge in face.edges() {
                let (u, v) = edge.endpoints();
                let near_u = arcs.get(face, u) as usize;
                let near_v = arcs.get(face, v) as usize;
                let mut seq = vec![u; near_u];
                seq.extend(std::iter::repeat_n(v, near_v));
                debug_assert_eq!(seq.len() as u32, w[edge]);
                corners.insert((face, edge), seq);
            }
        }
        Ok(Realization { weights: *w, corners })
    }

    fn corner_sequence(&self, face: Face, edge: Edge) -> &[u8] {
        &self.corners[&(face, edge)]
    }

    /// Position of the `k`-th point from vertex `from` on `edge`.
    fn point_from(&self, edge: Edge, from: u8, k: usize) -> usize {
        let (u, _) = edge.endpoints();
        if from == u {
            k
        } else {
            self.weights[edge] as usize - 1 - k
        }
    }

    /// Traces the closed loops, returning the weight vector of each.
    fn trace(&self) -> Vec<EdgeWeights> {
        let offset: Vec<usize> = Edge::ALL
            .iter()
            .scan(0usize, |acc, e| {
                let start = *acc;
                *acc += self.weights[*e] as usize;
                Some(start)
            })
            .collect();
        let node = |e: Edge, j: usize| offset[e.index()] + j;
        let n_points = self.weights.total() as usize;
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n_points];
        let mut edge_of = vec![Edge(0); n_points];
        for e in Edge::ALL {
            for j in 0..self.weights[e] as usize {
                edge_of[node(e, j)] = e;
            }
        }

        for face in Face::ALL {
            for corner in face.vertices() {
                let sides: Vec<Edge> = face.edges().into_iter().filter(|e| e.contains(corner)).collect();
                let (e1, e2) = (sides[0], sides[1]);
                let count = self.corner_sequence(face, e1).iter().filter(|&&c| c == corner).count();
                for k in 0..count {
                    let p = node(e1, self.point_from(e1, corner, k));
                    let q = node(e2, self.point_from(e2, corner, k));
                    nbrs[p].push(q);
                    nbrs[q].push(p);
                }
            }
        }

        let mut seen = vec![false; n_points];
        let mut loops = Vec::new();
        for start in 0..n_points {
            if seen[start] {
                continue;
            }
            let mut w = EdgeWeights::ZERO;
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                seen[cur] = true;
                w[edge_of[cur]] += 1;
                let next = if nbrs[cur][0] != prev || nbrs[cur][0] == nbrs[cur][1] {
                    nbrs[cur][0]
                } else {
                    nbrs[cur][1]
                };
                prev = cur;
                cur = next;
                if cur == start {
                    break;
                }
            }
            loops.push(w);
        }
        loops
    }
}

/// Splits the curve system with weights `w` into its connected loops, sorted.
pub fn decompose_loops(w: &EdgeWeights) -> Result<Vec<LoopKind>, CurveError> {
    let realization = Realization::new(w)?;
    let mut kinds = realization.trace().iter().map(classify).collect::<Result<Vec<_>, _>>()?;
    kinds.sort();
    Ok(kinds)
}

/// All canonical loop kinds of length at most `max_len`, ordered by length
/// then by kind.
pub fn enumerate_loop_types(max_len: u32) -> Vec<LoopKind> {
    let mut out = Vec::new();
    if max_len >= 3 {
        out.extend((0..4).map(|vertex| LoopKind::Triangle { vertex }));
    }
    if max_len >= 4 {
        out.extend(OppositePair::ALL.map(|axis| LoopKind::Quad { axis }));
    }
    let mut c = 2;
    while 4 * c <= max_len {
        for a in 1..=c / 2 {
            let b = c - a;
            if gcd(a, b) != 1 {
                continue;
            }
            for long in OppositePair::ALL {
                let shorts: Vec<OppositePair> =
                    if a == b { vec![long.others()[0]] } else { long.others().to_vec() };
                for short in shorts {
                    out.push(LoopKind::long(long, short, a, b).expect("valid by construction"));
                }
            }
        }
        c += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Counts switches of `edge` on `side`: consecutive strands at the edge whose
/// arcs in the adjacent face are not parallel.
pub fn count_switches(w: &EdgeWeights, edge: Edge, side: Side) -> Result<u32, CurveError> {
    let realization = Realization::new(w)?;
    let [left, right] = edge.faces();
    let face = match side {
        Side::Left => left,
        Side::Right => right,
    };
    let seq = realization.corner_sequence(face, edge);
    Ok(seq.windows(2).filter(|pair| pair[0] != pair[1]).count() as u32)
}
