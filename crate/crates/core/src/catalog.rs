//! Finite catalogs of candidate surfaces in a tetrahedron with a given local
//! index.
//!
//! A connected candidate at index `n` is an orientable piece whose boundary
//! is a realizable system of normal loops and which satisfies:
//!
//! * `1 - χ <= n`;
//! * total boundary length `<= 4(n + 1)`;
//! * when triangle loops sit together with loops of length at least 8, the
//!   long part alone fits in `4(n - m + 1)` where `m` counts the triangles;
//! * a disk at `n >= 1` has boundary length exactly `4(n + 1)`;
//! * shapes with a pinned base index only appear at that index.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::curve::{decompose_loops, enumerate_loop_types, EdgeWeights, LoopKind};
use crate::surgery::{pinch_bound, SurfacePiece};

pub const SCHEMA: &str = "tmcat/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// Permitted by the constraints but absent from the reference index-2 list.
    NotInPaperList,
    /// The tighter non-helical bound was applied.
    NonHelical,
    /// Closed component, only produced on request.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogOptions {
    /// Emit closed components (genus >= 1, no boundary). Off by default.
    pub include_closed: bool,
    /// Apply the `|∂H| <= 2n + 4` refinement, treating candidates as
    /// non-helical. Off by default.
    pub non_helical: bool,
    /// Flag candidates absent from the reference list at index 2.
    pub flag_extras: bool,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions { include_closed: false, non_helical: false, flag_extras: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectedCandidate {
    pub genus: u32,
    /// Sorted boundary loops.
    pub boundary: Vec<LoopKind>,
    pub index: u32,
    pub flags: Vec<Flag>,
}

impl ConnectedCandidate {
    pub fn piece(&self) -> SurfacePiece {
        SurfacePiece::from_loops(self.genus, &self.boundary)
    }

    pub fn lengths(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.boundary.iter().map(LoopKind::length).collect();
        v.sort_unstable();
        v
    }

    pub fn boundary_length(&self) -> u32 {
        self.boundary.iter().map(LoopKind::length).sum()
    }

    pub fn complexity(&self) -> i64 {
        self.piece().complexity()
    }

    pub fn triangle_count(&self) -> u32 {
        self.boundary.iter().filter(|k| k.is_triangle()).count() as u32
    }

    pub fn weights(&self) -> EdgeWeights {
        self.boundary.iter().map(LoopKind::weights).sum()
    }

    pub fn shape(&self) -> CandidateType {
        CandidateType { genus: self.genus, lengths: self.lengths() }
    }
}

/// Topological type: genus and boundary length multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateType {
    pub genus: u32,
    pub lengths: Vec<u32>,
}

impl CandidateType {
    pub fn new(genus: u32, lengths: &[u32]) -> Self {
        let mut lengths = lengths.to_vec();
        lengths.sort_unstable();
        CandidateType { genus, lengths }
    }

    pub fn name(&self) -> String {
        let ls = self.lengths.iter().join(",");
        match (self.genus, self.lengths.len()) {
            (0, 1) => format!("disk({ls})"),
            (0, 2) => format!("annulus({ls})"),
            (0, 3) => format!("pair-of-pants({ls})"),
            (1, 1) => format!("punctured-torus({ls})"),
            (0, _) => format!("planar({ls})"),
            (g, _) => format!("genus-{g}({ls})"),
        }
    }
}

/// Pinned index of a shape, when it is known: normal disks have index 0, a
/// disk of length `4c` index `c - 1`, an annulus between two normal disk
/// boundaries index 1.
pub fn base_index(genus: u32, lengths: &[u32]) -> Option<u32> {
    let short = |l: &u32| *l == 3 || *l == 4;
    match (genus, lengths) {
        (0, [l]) if short(l) => Some(0),
        (0, [l]) if *l >= 8 && l % 4 == 0 => Some(l / 4 - 1),
        (0, [a, b]) if short(a) && short(b) => Some(1),
        _ => None,
    }
}

pub fn base_index_of(piece: &SurfacePiece) -> Option<u32> {
    if !piece.orientable || piece.boundary.iter().any(|c| c.normal_kind.is_none()) {
        return None;
    }
    base_index(piece.genus, &piece.lengths())
}

/// Whether the combined weights of `loops` trace back to exactly `loops`.
pub fn realizable(loops: &[LoopKind]) -> bool {
    let w: EdgeWeights = loops.iter().map(LoopKind::weights).sum();
    let mut sorted = loops.to_vec();
    sorted.sort();
    decompose_loops(&w).is_ok_and(|d| d == sorted)
}

pub fn compatible(k1: &LoopKind, k2: &LoopKind) -> bool {
    realizable(&[*k1, *k2])
}

/// The reference index-2 list: 12-gon, pair of pants of normal loops,
/// octagon tubed to a triangle, and octagon or 12-gon tubed to itself.
pub fn in_reference_list(index: u32, shape: &CandidateType) -> Option<bool> {
    if index != 2 {
        return None;
    }
    let short = |l: &u32| *l == 3 || *l == 4;
    let listed = match (shape.genus, shape.lengths.as_slice()) {
        (0, [12]) => true,
        (0, [a, b, c]) => short(a) && short(b) && short(c),
        (0, [3, 8]) => true,
        (1, [8]) | (1, [12]) => true,
        _ => false,
    };
    Some(listed)
}

/// Checks every per-component constraint at index `index`; returns the list
/// of failed rule names.
fn candidate_failures(
    genus: u32,
    loops: &[LoopKind],
    index: u32,
    opts: &CatalogOptions,
) -> Vec<&'static str> {
    let mut failures = Vec::new();
    let piece = SurfacePiece::from_loops(genus, loops);
    let lengths = piece.lengths();
    let total = piece.boundary_length();
    if piece.complexity() > i64::from(index) {
        failures.push("euler-budget");
    }
    if total > 4 * (index + 1) {
        failures.push("length-bound");
    }
    if opts.non_helical && total > 2 * index + 4 {
        failures.push("non-helical-bound");
    }
    let triangles = loops.iter().filter(|k| k.is_triangle()).count() as u32;
    let long_len: u32 = loops.iter().filter(|k| k.is_long()).map(LoopKind::length).sum();
    if triangles > 0 && long_len > 0 {
        match pinch_bound(index, triangles) {
            Ok((residual, _)) if long_len <= 4 * (residual + 1) => {}
            _ => failures.push("pinch-bound"),
        }
    }
    if genus == 0 && loops.len() == 1 && index >= 1 && total != 4 * (index + 1) {
        failures.push("disk-length");
    }
    if base_index(genus, &lengths).is_some_and(|b| b != index) {
        failures.push("base-index");
    }
    failures
}

fn candidate_flags(index: u32, genus: u32, loops: &[LoopKind], opts: &CatalogOptions) -> Vec<Flag> {
    let mut flags = Vec::new();
    let shape = CandidateType::new(genus, &loops.iter().map(LoopKind::length).collect_vec());
    if opts.flag_extras && in_reference_list(index, &shape) == Some(false) {
        flags.push(Flag::NotInPaperList);
    }
    if opts.non_helical {
        flags.push(Flag::NonHelical);
    }
    if loops.is_empty() {
        flags.push(Flag::Closed);
    }
    flags
}

/// All labeled connected candidates with assigned index `n`.
pub fn enumerate_connected(n: u32, opts: &CatalogOptions) -> Vec<ConnectedCandidate> {
    let max_len = 4 * (n + 1);
    let types = enumerate_loop_types(max_len);
    let mut out = Vec::new();

    // 1 - χ = 2g + k - 1 <= n bounds both the genus and the boundary count.
    for k in 0..=(n + 1) as usize {
        if k == 0 && !opts.include_closed {
            continue;
        }
        let mut multisets: Vec<Vec<LoopKind>> = Vec::new();
        collect_multisets(&types, k, max_len, &mut Vec::new(), 0, &mut multisets);
        for loops in multisets {
            if !realizable(&loops) {
                continue;
            }
            for genus in 0.. {
                if 2 * genus + k as i64 - 1 > i64::from(n) {
                    break;
                }
                let genus = genus as u32;
                if k == 0 && genus == 0 {
                    continue;
                }
                if !candidate_failures(genus, &loops, n, opts).is_empty() {
                    continue;
                }
                out.push(ConnectedCandidate {
                    genus,
                    flags: candidate_flags(n, genus, &loops, opts),
                    boundary: loops.clone(),
                    index: n,
                });
            }
        }
    }
    out.sort_by_cached_key(|c| (c.complexity(), c.genus, c.lengths(), c.boundary.clone()));
    out.dedup();
    out
}

/// Non-decreasing selections (as multisets) of `k` loops from `types` with
/// total length at most `budget`, pruned by pairwise compatibility.
fn collect_multisets(
    types: &[LoopKind],
    k: usize,
    budget: u32,
    current: &mut Vec<LoopKind>,
    start: usize,
    out: &mut Vec<Vec<LoopKind>>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for (i, t) in types.iter().enumerate().skip(start) {
        if t.length() > budget {
            continue;
        }
        if !current.iter().all(|c| compatible(c, t)) {
            continue;
        }
        current.push(*t);
        collect_multisets(types, k, budget - t.length(), current, i, out);
        current.pop();
    }
}

/// Type-level summary of a labeled list, preserving order of first
/// appearance. Each entry keeps its first labeled representative.
pub fn group_types(candidates: &[ConnectedCandidate]) -> Vec<(CandidateType, usize, &ConnectedCandidate)> {
    let mut groups: Vec<(CandidateType, usize, &ConnectedCandidate)> = Vec::new();
    let mut position: BTreeMap<CandidateType, usize> = BTreeMap::new();
    for c in candidates {
        let shape = c.shape();
        match position.get(&shape) {
            Some(&i) => groups[i].1 += 1,
            None => {
                position.insert(shape.clone(), groups.len());
                groups.push((shape, 1, c));
            }
        }
    }
    groups
}

/// A multiset of connected components with assigned indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub components: Vec<ConnectedCandidate>,
}

impl Configuration {
    pub fn total_index(&self) -> u32 {
        self.components.iter().map(|c| c.index).sum()
    }

    pub fn boundary_loops(&self) -> Vec<LoopKind> {
        let mut v: Vec<LoopKind> = self.components.iter().flat_map(|c| c.boundary.clone()).collect();
        v.sort();
        v
    }

    pub fn weights(&self) -> EdgeWeights {
        self.components.iter().map(ConnectedCandidate::weights).sum()
    }

    pub fn total_boundary_length(&self) -> u32 {
        self.components.iter().map(ConnectedCandidate::boundary_length).sum()
    }
}

fn partitions(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn normal_disk(kind: LoopKind) -> ConnectedCandidate {
    ConnectedCandidate { genus: 0, boundary: vec![kind], index: 0, flags: vec![] }
}

/// Configurations at total index `n`: one candidate per part of a partition
/// of `n`, plus any family of normal disks whose combined weight stays within
/// `disk_cap` on every edge. Only configurations whose summed weights trace
/// back to exactly their boundary loops are kept. The empty surface is not
/// listed.
pub fn enumerate_configurations(n: u32, disk_cap: u32, opts: &CatalogOptions) -> Vec<Configuration> {
    let by_index: Vec<Vec<ConnectedCandidate>> = (1..=n).map(|i| enumerate_connected(i, opts)).collect();
    let mut cores: Vec<Vec<ConnectedCandidate>> = Vec::new();
    for parts in partitions(n, n) {
        let mut partial: Vec<Vec<ConnectedCandidate>> = vec![vec![]];
        for (pos, &part) in parts.iter().enumerate() {
            let choices = &by_index[part as usize - 1];
            let mut next = Vec::new();
            for base in &partial {
                // Equal parts take non-decreasing choices to avoid repeats.
                let min_choice = match (pos > 0 && parts[pos - 1] == part, base.last()) {
                    (true, Some(prev)) => choices.iter().position(|c| c == prev).unwrap_or(0),
                    _ => 0,
                };
                for c in &choices[min_choice..] {
                    let mut loops: Vec<LoopKind> = base.iter().flat_map(|b| b.boundary.clone()).collect();
                    loops.extend(c.boundary.iter().copied());
                    if realizable(&loops) {
                        let mut b = base.clone();
                        b.push(c.clone());
                        next.push(b);
                    }
                }
            }
            partial = next;
        }
        cores.extend(partial);
    }

    let disks: Vec<LoopKind> = enumerate_loop_types(4);
    let mut out = Vec::new();
    for core in cores {
        let core_loops: Vec<LoopKind> = core.iter().flat_map(|c| c.boundary.clone()).collect();
        let mut families = Vec::new();
        disk_families(&disks, 0, disk_cap, EdgeWeights::ZERO, &mut Vec::new(), &mut families);
        for family in families {
            if core.is_empty() && family.is_empty() {
                continue;
            }
            let mut loops = core_loops.clone();
            loops.extend(family.iter().copied());
            if !realizable(&loops) {
                continue;
            }
            let mut components = core.clone();
            components.extend(family.into_iter().map(normal_disk));
            components.sort();
            out.push(Configuration { components });
        }
    }
    out.sort();
    out.dedup();
    out
}

fn disk_families(
    disks: &[LoopKind],
    start: usize,
    cap: u32,
    weight: EdgeWeights,
    current: &mut Vec<LoopKind>,
    out: &mut Vec<Vec<LoopKind>>,
) {
    out.push(current.clone());
    for (i, d) in disks.iter().enumerate().skip(start) {
        let next = weight + d.weights();
        if next.max_weight() > cap {
            continue;
        }
        if current.iter().any(|c| !compatible(c, d)) {
            continue;
        }
        current.push(*d);
        disk_families(disks, i, cap, next, current, out);
        current.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Pass,
    Fail,
    RepresentedNotVerified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub clause: String,
    pub status: ClauseStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub index: u32,
    pub clauses: Vec<ClauseResult>,
    pub pass: bool,
}

impl ConstraintReport {
    pub fn clause(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.clauses.iter().filter(|c| c.status == ClauseStatus::Fail).map(|c| c.clause.as_str()).collect()
    }
}

/// Evaluates the checkable constraints for a configuration claimed to have
/// local index `n`.
pub fn verify_constraints(c: &Configuration, n: u32) -> ConstraintReport {
    let mut clauses = Vec::new();
    let mut push = |clause: &str, ok: bool, detail: String| {
        clauses.push(ClauseResult {
            clause: clause.to_string(),
            status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
            detail,
        })
    };

    let budget: i64 = c.components.iter().map(ConnectedCandidate::complexity).sum();
    push("clause-2", budget <= i64::from(n), format!("sum of 1 - chi is {budget}, index {n}"));

    let total = c.total_index();
    push("clause-3", total == n, format!("component indices sum to {total}, index {n}"));

    let over: Vec<String> = c
        .components
        .iter()
        .filter(|p| p.boundary_length() > 4 * (p.index + 1))
        .map(|p| format!("{} > {}", p.boundary_length(), 4 * (p.index + 1)))
        .collect();
    push(
        "clause-4",
        over.is_empty(),
        if over.is_empty() { "all component lengths within 4(n'+1)".into() } else { over.join("; ") },
    );

    let pinch: Vec<String> = c
        .components
        .iter()
        .filter(|p| {
            let m = p.triangle_count();
            let long: u32 = p.boundary.iter().filter(|k| k.is_long()).map(LoopKind::length).sum();
            m > 0 && long > 0 && !matches!(pinch_bound(p.index, m), Ok((r, _)) if long <= 4 * (r + 1))
        })
        .map(|p| p.shape().name())
        .collect();
    push(
        "pinch-bound",
        pinch.is_empty(),
        if pinch.is_empty() {
            "mixed triangle/long boundaries within bound".into()
        } else {
            pinch.join("; ")
        },
    );

    let disks: Vec<String> = c
        .components
        .iter()
        .filter(|p| p.genus == 0 && p.boundary.len() == 1 && p.index >= 1)
        .filter(|p| p.boundary_length() != 4 * (p.index + 1))
        .map(|p| format!("disk of length {} at index {}", p.boundary_length(), p.index))
        .collect();
    push(
        "disk-length",
        disks.is_empty(),
        if disks.is_empty() { "index-n disks have length 4(n+1)".into() } else { disks.join("; ") },
    );

    let base: Vec<String> = c
        .components
        .iter()
        .filter_map(|p| {
            base_index(p.genus, &p.lengths())
                .filter(|&b| b != p.index)
                .map(|b| format!("{} has index {b}, assigned {}", p.shape().name(), p.index))
        })
        .collect();
    push(
        "base-index",
        base.is_empty(),
        if base.is_empty() { "assigned indices agree with pinned ones".into() } else { base.join("; ") },
    );

    let spectrum_ok = c
        .components
        .iter()
        .flat_map(|p| p.boundary.iter())
        .all(|k| matches!(k.length(), 3 | 4) || (k.length() >= 8 && k.length() % 4 == 0));
    push("length-spectrum", spectrum_ok, "loop lengths in {3, 4} or 4c with c >= 2".into());

    let realized = realizable(&c.boundary_loops());
    push(
        "realizable",
        realized,
        format!("combined weights {} trace back to the boundary loops", c.weights()),
    );

    let orientable_ok = c.components.iter().all(|p| p.complexity() >= 0);
    push("components", orientable_ok && !c.components.is_empty(), "nonempty, no closed spheres".into());

    clauses.push(ClauseResult {
        clause: "clause-1".into(),
        status: ClauseStatus::RepresentedNotVerified,
        detail: "unknottedness and non-nesting are not checked".into(),
    });

    let pass = clauses.iter().all(|c| c.status != ClauseStatus::Fail);
    ConstraintReport { index: n, clauses, pass }
}

// Wire records.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub genus: u32,
    pub boundary: Vec<LoopKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_index: Option<u32>,
    #[serde(default)]
    pub flags: Vec<Flag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variants: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRecord {
    pub schema: String,
    pub index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub components: Vec<ComponentRecord>,
    pub total_boundary_length: u32,
}

impl CatalogRecord {
    pub fn from_candidate(c: &ConnectedCandidate, variants: Option<usize>) -> Self {
        CatalogRecord {
            schema: SCHEMA.into(),
            index: c.index,
            name: Some(c.shape().name()),
            components: vec![ComponentRecord {
                genus: c.genus,
                boundary: c.boundary.clone(),
                piece_index: Some(c.index),
                flags: c.flags.clone(),
                variants,
            }],
            total_boundary_length: c.boundary_length(),
        }
    }

    pub fn from_configuration(c: &Configuration, index: u32) -> Self {
        CatalogRecord {
            schema: SCHEMA.into(),
            index,
            name: None,
            components: c
                .components
                .iter()
                .map(|p| ComponentRecord {
                    genus: p.genus,
                    boundary: p.boundary.clone(),
                    piece_index: Some(p.index),
                    flags: p.flags.clone(),
                    variants: None,
                })
                .collect(),
            total_boundary_length: c.total_boundary_length(),
        }
    }

    /// Rebuilds the configuration. Components without a `piece_index` take
    /// their pinned base index, or else the share of `index` left over.
    pub fn to_configuration(&self) -> Configuration {
        let mut components: Vec<ConnectedCandidate> = self
            .components
            .iter()
            .map(|r| {
                let mut boundary = r.boundary.clone();
                boundary.sort();
                let lengths = boundary.iter().map(LoopKind::length).collect_vec();
                let shape = CandidateType::new(r.genus, &lengths);
                ConnectedCandidate {
                    genus: r.genus,
                    index: r
                        .piece_index
                        .or_else(|| base_index(shape.genus, &shape.lengths))
                        .unwrap_or(u32::MAX),
                    boundary,
                    flags: r.flags.clone(),
                }
            })
            .collect();
        let assigned: u32 = components.iter().filter(|c| c.index != u32::MAX).map(|c| c.index).sum();
        let mut residual = self.index.saturating_sub(assigned);
        for c in components.iter_mut().filter(|c| c.index == u32::MAX) {
            c.index = residual;
            residual = 0;
        }
        Configuration { components }
    }
}
