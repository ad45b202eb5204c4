//! Euler characteristic and boundary-length bookkeeping for compressions and
//! edge-compressions of abstract surfaces in a tetrahedron.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Edge, LoopKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("piece {0} does not exist")]
    NoSuchPiece(usize),
    #[error("piece has no boundary")]
    ClosedPiece,
    #[error("infeasible configuration: {triangles} triangle loops exceed index {index}")]
    Infeasible { index: u32, triangles: u32 },
}

fn invalid(msg: impl Into<String>) -> SurgeryError {
    SurgeryError::InvalidMove(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryCurve {
    pub length: u32,
    #[serde(default, rename = "normal", skip_serializing_if = "Option::is_none")]
    pub normal_kind: Option<LoopKind>,
}

impl BoundaryCurve {
    pub fn normal(kind: LoopKind) -> Self {
        BoundaryCurve { length: kind.length(), normal_kind: Some(kind) }
    }

    pub fn plain(length: u32) -> Self {
        BoundaryCurve { length, normal_kind: None }
    }

    /// Number of strands this curve has on `edge`, when it is known.
    fn strands_on(&self, edge: Edge) -> Option<u32> {
        self.normal_kind.map(|k| k.weights()[edge])
    }

    fn check(&self) -> Result<(), SurgeryError> {
        match self.normal_kind {
            Some(k) if k.length() != self.length => {
                Err(invalid(format!("curve length {} disagrees with its normal kind {k}", self.length)))
            }
            _ => Ok(()),
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfacePiece {
    pub genus: u32,
    #[serde(default = "default_true")]
    pub orientable: bool,
    pub boundary: Vec<BoundaryCurve>,
}

impl SurfacePiece {
    pub fn new(genus: u32, boundary: Vec<BoundaryCurve>) -> Self {
        SurfacePiece { genus, orientable: true, boundary }
    }

    pub fn disk(length: u32) -> Self {
        Self::new(0, vec![BoundaryCurve::plain(length)])
    }

    pub fn annulus(l1: u32, l2: u32) -> Self {
        Self::new(0, vec![BoundaryCurve::plain(l1), BoundaryCurve::plain(l2)])
    }

    pub fn from_loops(genus: u32, loops: &[LoopKind]) -> Self {
        Self::new(genus, loops.iter().copied().map(BoundaryCurve::normal).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let k = self.boundary.len() as i64;
        let g = i64::from(self.genus);
        if self.orientable {
            2 - 2 * g - k
        } else {
            2 - g - k
        }
    }

    /// `1 - χ`, the piece's contribution to the index budget.
    pub fn complexity(&self) -> i64 {
        1 - self.euler_characteristic()
    }

    pub fn boundary_length(&self) -> u32 {
        self.boundary.iter().map(|c| c.length).sum()
    }

    pub fn is_disk(&self) -> bool {
        self.euler_characteristic() == 1 && self.boundary.len() == 1
    }

    pub fn lengths(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.boundary.iter().map(|c| c.length).collect();
        v.sort_unstable();
        v
    }

    fn validate(&self) -> Result<(), SurgeryError> {
        if !self.orientable && self.genus == 0 {
            return Err(invalid("a non-orientable piece needs at least one crosscap"));
        }
        self.boundary.iter().try_for_each(BoundaryCurve::check)
    }
}

/// Which side of a separating surgery keeps which data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSplit {
    /// Indices (into the original boundary) of curves going to the first piece.
    pub first_curves: Vec<usize>,
    pub first_genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EdgeCompressEnds {
    /// Both endpoints of the arc on one boundary curve, which splits into two
    /// curves of the given lengths. With `split` set the piece itself splits;
    /// the first new curve goes to the first piece.
    SameCurve {
        curve: usize,
        lengths: (u32, u32),
        #[serde(default, skip_serializing_if = "Option::is_none")]
        split: Option<PieceSplit>,
    },
    /// The arc joins two distinct boundary curves, which merge into one.
    TwoCurves { curves: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurgeryMove {
    Compress {
        separating: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        partition: Option<PieceSplit>,
    },
    EdgeCompress {
        #[serde(with = "edge_str")]
        edge: Edge,
        ends: EdgeCompressEnds,
    },
}

mod edge_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::curve::Edge;

    pub fn serialize<S: Serializer>(e: &Edge, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(e)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Edge, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn split_piece(
    piece: &SurfacePiece,
    split: &PieceSplit,
    excluded: &[usize],
    first_extra: Option<BoundaryCurve>,
    second_extra: Option<BoundaryCurve>,
    genus_total: u32,
) -> Result<(SurfacePiece, SurfacePiece), SurgeryError> {
    let chosen: BTreeSet<usize> = split.first_curves.iter().copied().collect();
    if chosen.len() != split.first_curves.len() {
        return Err(invalid("partition lists a curve twice"));
    }
    if let Some(&bad) = chosen.iter().find(|&&i| i >= piece.boundary.len() || excluded.contains(&i)) {
        return Err(invalid(format!("partition names unavailable curve {bad}")));
    }
    if split.first_genus > genus_total {
        return Err(invalid(format!(
            "partition genus {} exceeds available genus {genus_total}",
            split.first_genus
        )));
    }
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (i, c) in piece.boundary.iter().enumerate() {
        if excluded.contains(&i) {
            continue;
        }
        if chosen.contains(&i) {
            first.push(c.clone());
        } else {
            second.push(c.clone());
        }
    }
    first.extend(first_extra);
    second.extend(second_extra);
    Ok((
        SurfacePiece { genus: split.first_genus, orientable: piece.orientable, boundary: first },
        SurfacePiece {
            genus: genus_total - split.first_genus,
            orientable: piece.orientable,
            boundary: second,
        },
    ))
}

fn replace(pieces: &[SurfacePiece], target: usize, with: Vec<SurfacePiece>) -> Vec<SurfacePiece> {
    let mut out = Vec::with_capacity(pieces.len() + 1);
    out.extend_from_slice(&pieces[..target]);
    out.extend(with);
    out.extend_from_slice(&pieces[target + 1..]);
    out
}

fn target_piece(pieces: &[SurfacePiece], target: usize) -> Result<&SurfacePiece, SurgeryError> {
    let piece = pieces.get(target).ok_or(SurgeryError::NoSuchPiece(target))?;
    piece.validate()?;
    Ok(piece)
}

/// Surgers `pieces[target]` along a compressing disk.
pub fn apply_compression(
    pieces: &[SurfacePiece],
    target: usize,
    mv: &SurgeryMove,
) -> Result<Vec<SurfacePiece>, SurgeryError> {
    let piece = target_piece(pieces, target)?;
    let SurgeryMove::Compress { separating, partition } = mv else {
        return Err(invalid("expected a compression"));
    };
    if !separating {
        // A non-separating loop needs a handle (or two crosscaps to keep the
        // crosscap count consistent for the non-orientable case).
        let cost = if piece.orientable { 1 } else { 2 };
        if piece.genus < cost {
            return Err(invalid(format!("genus {} piece has no non-separating essential loop", piece.genus)));
        }
        let mut out = piece.clone();
        out.genus -= cost;
        return Ok(replace(pieces, target, vec![out]));
    }
    let split = partition.as_ref().ok_or_else(|| invalid("separating compression needs a partition"))?;
    let (a, b) = split_piece(piece, split, &[], None, None, piece.genus)?;
    for side in [&a, &b] {
        if side.boundary.is_empty() && side.genus == 0 {
            return Err(invalid("partition leaves a side bounded by an inessential loop"));
        }
    }
    Ok(replace(pieces, target, vec![a, b]))
}

/// Surgers `pieces[target]` along an edge-compressing disk.
pub fn apply_edge_compression(
    pieces: &[SurfacePiece],
    target: usize,
    mv: &SurgeryMove,
) -> Result<Vec<SurfacePiece>, SurgeryError> {
    let piece = target_piece(pieces, target)?;
    let SurgeryMove::EdgeCompress { edge, ends } = mv else {
        return Err(invalid("expected an edge-compression"));
    };
    let curve_at =
        |i: usize| piece.boundary.get(i).ok_or_else(|| invalid(format!("piece has no boundary curve {i}")));
    match ends {
        EdgeCompressEnds::SameCurve { curve, lengths, split } => {
            let c = curve_at(*curve)?;
            if c.strands_on(*edge).is_some_and(|s| s < 2) || c.length < 2 {
                return Err(invalid(format!("curve {curve} has fewer than two strands on edge {edge}")));
            }
            let (l1, l2) = *lengths;
            if l1 == 0 || l2 == 0 || l1 + l2 + 2 != c.length {
                return Err(invalid(format!(
                    "split lengths ({l1}, {l2}) do not account for length {} minus 2",
                    c.length
                )));
            }
            let (n1, n2) = (BoundaryCurve::plain(l1), BoundaryCurve::plain(l2));
            match split {
                Some(split) => {
                    let (a, b) = split_piece(piece, split, &[*curve], Some(n1), Some(n2), piece.genus)?;
                    Ok(replace(pieces, target, vec![a, b]))
                }
                None => {
                    let cost = if piece.orientable { 1 } else { 2 };
                    if piece.genus < cost {
                        return Err(invalid("a non-splitting same-curve arc needs genus on the piece"));
                    }
                    let mut out = piece.clone();
                    out.genus -= cost;
                    out.boundary.remove(*curve);
                    out.boundary.insert(*curve, n2);
                    out.boundary.insert(*curve, n1);
                    Ok(replace(pieces, target, vec![out]))
                }
            }
        }
        EdgeCompressEnds::TwoCurves { curves: (i, j) } => {
            if i == j {
                return Err(invalid("two-curve move names the same curve twice"));
            }
            let (ci, cj) = (curve_at(*i)?, curve_at(*j)?);
            for (idx, c) in [(i, ci), (j, cj)] {
                if c.strands_on(*edge) == Some(0) {
                    return Err(invalid(format!("curve {idx} does not meet edge {edge}")));
                }
            }
            let merged = BoundaryCurve::plain(ci.length + cj.length - 2);
            let mut out = piece.clone();
            let (lo, hi) = if i < j { (*i, *j) } else { (*j, *i) };
            out.boundary.remove(hi);
            out.boundary[lo] = merged;
            Ok(replace(pieces, target, vec![out]))
        }
    }
}

/// Dispatches on the move kind.
pub fn apply_move(
    pieces: &[SurfacePiece],
    target: usize,
    mv: &SurgeryMove,
) -> Result<Vec<SurfacePiece>, SurgeryError> {
    match mv {
        SurgeryMove::Compress { .. } => apply_compression(pieces, target, mv),
        SurgeryMove::EdgeCompress { .. } => apply_edge_compression(pieces, target, mv),
    }
}

/// Number of edge-compressions needed to reduce a piece with boundary to disks.
pub fn min_edge_compressions_to_disks(p: &SurfacePiece) -> Result<u32, SurgeryError> {
    if p.boundary.is_empty() {
        return Err(SurgeryError::ClosedPiece);
    }
    Ok(p.complexity() as u32)
}

/// Topological type of an orientable piece: (genus, boundary count).
pub type Shape = (u32, u32);

/// Every shape reachable from `shape` by one abstract edge-compression:
/// merging two boundary curves, cutting a handle, or splitting the piece.
pub fn edge_compression_successors(shape: Shape) -> Vec<Vec<Shape>> {
    let (g, k) = shape;
    let mut out = Vec::new();
    if k >= 2 {
        out.push(vec![(g, k - 1)]);
    }
    if g >= 1 {
        out.push(vec![(g - 1, k + 1)]);
    }
    // Splitting: the cut curve becomes one new curve on each side; the other
    // k - 1 curves and the genus are distributed.
    for g1 in 0..=g {
        for k1 in 0..k {
            out.push(vec![(g1, k1 + 1), (g - g1, k - 1 - k1 + 1)]);
        }
    }
    out
}

/// Shortest number of abstract edge-compressions taking a connected
/// orientable piece to a collection of disks, by breadth-first search over
/// multisets of shapes. Returns `None` if not reached within `max_depth`.
pub fn bfs_min_edge_compressions(start: Shape, max_depth: u32) -> Option<u32> {
    let all_disks = |state: &Vec<Shape>| state.iter().all(|&s| s == (0, 1));
    let start = vec![start];
    let mut dist: HashMap<Vec<Shape>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        let d = dist[&state];
        if all_disks(&state) {
            return Some(d);
        }
        if d >= max_depth {
            continue;
        }
        for (i, &shape) in state.iter().enumerate() {
            for replacement in edge_compression_successors(shape) {
                let mut next: Vec<Shape> = state
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &s)| s)
                    .chain(replacement)
                    .collect();
                next.sort_unstable();
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// Bounds after pinching off `triangles` triangle loops from an index-`index`
/// surface: the residual index is at most `index - triangles` and the total
/// boundary length at most `4(index - triangles + 1) + 3 * triangles`.
pub fn pinch_bound(index: u32, triangles: u32) -> Result<(u32, u32), SurgeryError> {
    if triangles > index {
        return Err(SurgeryError::Infeasible { index, triangles });
    }
    let residual = index - triangles;
    let length = 4 * (residual + 1) + 3 * triangles;
    debug_assert!(length <= 4 * (index + 1));
    Ok((residual, length))
}

/// One step of a replayable move log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedMove {
    pub target: usize,
    #[serde(flatten)]
    pub mv: SurgeryMove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveLog {
    pub pieces: Vec<SurfacePiece>,
    pub moves: Vec<LoggedMove>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub step: usize,
    pub euler_characteristic: i64,
    pub boundary_length: u32,
    pub pieces: Vec<SurfacePiece>,
}

pub fn total_euler(pieces: &[SurfacePiece]) -> i64 {
    pieces.iter().map(SurfacePiece::euler_characteristic).sum()
}

pub fn total_length(pieces: &[SurfacePiece]) -> u32 {
    pieces.iter().map(SurfacePiece::boundary_length).sum()
}

/// Replays a move log, checking the Euler and length accounting after each
/// move.
pub fn replay(log: &MoveLog) -> Result<Vec<ReplayStep>, SurgeryError> {
    let mut pieces = log.pieces.clone();
    for p in &pieces {
        p.validate()?;
    }
    let mut steps = vec![ReplayStep {
        step: 0,
        euler_characteristic: total_euler(&pieces),
        boundary_length: total_length(&pieces),
        pieces: pieces.clone(),
    }];
    for (i, logged) in log.moves.iter().enumerate() {
        let next = apply_move(&pieces, logged.target, &logged.mv)?;
        let (dchi, dlen) = match logged.mv {
            SurgeryMove::Compress { .. } => (2, 0),
            SurgeryMove::EdgeCompress { .. } => (1, 2),
        };
        let (chi, len) = (total_euler(&next), total_length(&next));
        let prev = steps.last().unwrap();
        if chi != prev.euler_characteristic + dchi || len + dlen != prev.boundary_length {
            return Err(invalid(format!("move {} breaks Euler or length accounting", i + 1)));
        }
        pieces = next;
        steps.push(ReplayStep {
            step: i + 1,
            euler_characteristic: chi,
            boundary_length: len,
            pieces: pieces.clone(),
        });
    }
    Ok(steps)
}
