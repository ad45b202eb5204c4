//! Abstract finite simplicial complexes, joins, cones, reduced homology and
//! the homology index.
//!
//! The homology index stands in for the homotopy-based local index: it is the
//! smallest `n >= 1` with nonzero reduced homology in degree `n - 1`, or 0 for
//! the empty complex. Over a field this agrees with the homotopy definition
//! for disconnected and for simply connected complexes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_SIMPLEX_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex has more than {cap} simplices")]
    TooLarge { cap: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Vertex = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    // Maximal faces, each sorted.
    facets: BTreeSet<Vec<Vertex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point() -> Self {
        Self::from_faces([vec![0]])
    }

    /// Builds a complex from any generating faces; non-maximal ones are
    /// dropped.
    pub fn from_faces<I, F>(faces: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let mut all: Vec<Vec<Vertex>> = faces
            .into_iter()
            .map(|f| {
                let s: BTreeSet<Vertex> = f.into_iter().collect();
                s.into_iter().collect::<Vec<_>>()
            })
            .filter(|f| !f.is_empty())
            .collect();
        all.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut facets: Vec<Vec<Vertex>> = Vec::new();
        for f in all {
            if !facets.iter().any(|g| is_subset(&f, g)) {
                facets.push(f);
            }
        }
        SimplicialComplex { facets: facets.into_iter().collect() }
    }

    /// `k` isolated points.
    pub fn discrete(k: u32) -> Self {
        Self::from_faces((0..k).map(|v| vec![v]))
    }

    /// Boundary of the `dim + 1`-simplex, a `dim`-sphere.
    pub fn sphere(dim: u32) -> Self {
        let verts: Vec<Vertex> = (0..dim + 2).collect();
        Self::from_faces((0..verts.len()).map(|skip| {
            verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect::<Vec<_>>()
        }))
    }

    pub fn cycle(len: u32) -> Self {
        assert!(len >= 3);
        Self::from_faces((0..len).map(|i| vec![i, (i + 1) % len]))
    }

    pub fn octahedron() -> Self {
        let s0 = Self::discrete(2);
        join(&join(&s0, &s0), &s0)
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facets(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.facets.iter()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.facets.iter().flatten().copied().collect()
    }

    /// Dimension, or -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.facets.iter().map(|f| f.len() as i64 - 1).max().unwrap_or(-1)
    }

    /// Disjoint union, renaming the second complex's vertices.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let other = other.shifted(self.next_vertex());
        let mut facets = self.facets.clone();
        facets.extend(other.facets);
        SimplicialComplex { facets }
    }

    fn next_vertex(&self) -> Vertex {
        self.vertices().last().map_or(0, |v| v + 1)
    }

    fn shifted(&self, by: Vertex) -> Self {
        SimplicialComplex { facets: self.facets.iter().map(|f| f.iter().map(|v| v + by).collect()).collect() }
    }

    /// Every nonempty face, grouped by dimension.
    pub fn faces_by_dim(&self, cap: usize) -> Result<Vec<Vec<Vec<Vertex>>>, ComplexError> {
        let mut seen: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        for f in &self.facets {
            if f.len() >= 63 || (1usize << f.len()) - 1 > cap {
                return Err(ComplexError::TooLarge { cap });
            }
            for mask in 1u64..(1u64 << f.len()) {
                let face: Vec<Vertex> =
                    f.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                seen.insert(face);
            }
            if seen.len() > cap {
                return Err(ComplexError::TooLarge { cap });
            }
        }
        let top = self.dim().max(-1);
        let mut by_dim: Vec<Vec<Vec<Vertex>>> = vec![Vec::new(); (top + 1) as usize];
        for f in seen {
            by_dim[f.len() - 1].push(f);
        }
        Ok(by_dim)
    }

    pub fn simplex_count(&self) -> Result<usize, ComplexError> {
        Ok(self.faces_by_dim(usize::MAX >> 1)?.iter().map(Vec::len).sum())
    }

    /// Link of a face: faces disjoint from it whose union with it is a face.
    pub fn link(&self, face: &[Vertex]) -> Self {
        let mut sigma: Vec<Vertex> = face.to_vec();
        sigma.sort_unstable();
        sigma.dedup();
        let faces: Vec<Vec<Vertex>> = self
            .facets
            .iter()
            .filter(|f| is_subset(&sigma, f))
            .map(|f| f.iter().copied().filter(|v| !sigma.contains(v)).collect())
            .collect();
        Self::from_faces(faces)
    }

    /// Parses the text format: one maximal face per line, whitespace separated
    /// vertex tokens, `#` comments. Tokens are numbered by first appearance.
    pub fn parse(text: &str) -> Result<Self, ComplexError> {
        let mut ids: BTreeMap<String, Vertex> = BTreeMap::new();
        let mut faces = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut face = Vec::new();
            for tok in line.split_whitespace() {
                let next = ids.len() as Vertex;
                let id = *ids.entry(tok.to_string()).or_insert(next);
                if face.contains(&id) {
                    return Err(ComplexError::Parse {
                        line: lineno + 1,
                        reason: format!("vertex `{tok}` repeated in a face"),
                    });
                }
                face.push(id);
            }
            faces.push(face);
        }
        Ok(Self::from_faces(faces))
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for facet in &self.facets {
            let line: Vec<String> = facet.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Join: facets are unions of one facet from each factor. Vertices of `l`
/// are renamed past those of `k`.
pub fn join(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    if k.is_empty() {
        return l.clone();
    }
    if l.is_empty() {
        return k.clone();
    }
    let l = l.shifted(k.next_vertex());
    let mut facets = BTreeSet::new();
    for a in &k.facets {
        for b in &l.facets {
            let mut f = a.clone();
            f.extend(b.iter().copied());
            f.sort_unstable();
            facets.insert(f);
        }
    }
    SimplicialComplex { facets }
}

pub fn cone(k: &SimplicialComplex) -> SimplicialComplex {
    join(k, &SimplicialComplex::point())
}

pub fn suspension(k: &SimplicialComplex) -> SimplicialComplex {
    join(k, &SimplicialComplex::discrete(2))
}

/// Reduced homology ranks by degree, starting at degree -1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    /// `ranks[i]` is the rank in degree `i - 1`.
    pub ranks: Vec<usize>,
    /// Torsion coefficients by degree (index as in `ranks`), present only for
    /// integral computations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<Vec<u64>>>,
}

impl HomologyProfile {
    pub fn rank(&self, degree: i64) -> usize {
        usize::try_from(degree + 1).ok().and_then(|i| self.ranks.get(i).copied()).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// Alternating sum of reduced ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if (i as i64 - 1) % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Gf2,
    Integers,
}

/// Reduced Euler characteristic from face counts: `-1 + f0 - f1 + ...`.
pub fn reduced_euler_from_faces(k: &SimplicialComplex, cap: usize) -> Result<i64, ComplexError> {
    let faces = k.faces_by_dim(cap)?;
    Ok(faces
        .iter()
        .enumerate()
        .map(|(d, fs)| if d % 2 == 0 { fs.len() as i64 } else { -(fs.len() as i64) })
        .sum::<i64>()
        - 1)
}

/// Augmented chain complex: `cells[i]` are the simplices of degree `i - 1`.
fn chain_cells(k: &SimplicialComplex, cap: usize) -> Result<Vec<Vec<Vec<Vertex>>>, ComplexError> {
    let mut cells = vec![vec![Vec::new()]];
    cells.extend(k.faces_by_dim(cap)?);
    Ok(cells)
}

/// Boundary of each cell in `cells[i]` as (row index in `cells[i-1]`, sign).
fn boundary_columns(cells: &[Vec<Vec<Vertex>>], i: usize) -> Vec<Vec<(usize, i64)>> {
    let lower: BTreeMap<&Vec<Vertex>, usize> = cells[i - 1].iter().enumerate().map(|(j, f)| (f, j)).collect();
    cells[i]
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|drop| {
                    let face: Vec<Vertex> =
                        s.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &v)| v).collect();
                    let sign = if drop % 2 == 0 { 1 } else { -1 };
                    (lower[&face], sign)
                })
                .collect()
        })
        .collect()
}

fn rank_gf2(columns: &[Vec<(usize, i64)>], rows: usize) -> usize {
    let words = rows.div_ceil(64).max(1);
    let mut pivots: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut rank = 0;
    for col in columns {
        let mut v = vec![0u64; words];
        for &(r, _) in col {
            v[r / 64] ^= 1 << (r % 64);
        }
        while let Some(lead) = highest_bit(&v) {
            match pivots.get(&lead) {
                Some(p) => {
                    for (a, b) in v.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots.insert(lead, v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Nonzero diagonal entries of the Smith normal form of an integer matrix
/// given as sparse columns.
#[allow(clippy::needless_range_loop)]
fn smith_diagonal(columns: &[Vec<(usize, i64)>], rows: usize) -> Vec<u64> {
    let cols = columns.len();
    let mut m = vec![vec![0i128; cols]; rows];
    for (c, col) in columns.iter().enumerate() {
        for &(r, s) in col {
            m[r][c] += i128::from(s);
        }
    }
    let mut diag = Vec::new();
    let mut top = 0;
    while top < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(top) {
            for (c, &x) in row.iter().enumerate().skip(top) {
                if x != 0 && best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap(top, pr);
        for row in m.iter_mut() {
            row.swap(top, pc);
        }
        loop {
            let p = m[top][top];
            let mut clean = true;
            for r in top + 1..rows {
                let q = m[r][top] / p;
                if q != 0 {
                    for c in top..cols {
                        m[r][c] -= q * m[top][c];
                    }
                }
                if m[r][top] != 0 {
                    clean = false;
                }
            }
            for c in top + 1..cols {
                let q = m[top][c] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(top) {
                        row[c] -= q * row[top];
                    }
                }
                if m[top][c] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Divisibility of the remaining block by the pivot.
                let bad = (top + 1..rows)
                    .flat_map(|r| (top + 1..cols).map(move |c| (r, c)))
                    .find(|&(r, c)| m[r][c] % p != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in top..cols {
                            m[top][c] += m[r][c];
                        }
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of row/column top to the pivot.
            let mut best = (top, top);
            for r in top..rows {
                if m[r][top] != 0 && m[r][top].abs() < m[best.0][best.1].abs() {
                    best = (r, top);
                }
            }
            for c in top..cols {
                if m[top][c] != 0 && m[top][c].abs() < m[best.0][best.1].abs() {
                    best = (top, c);
                }
            }
            m.swap(top, best.0);
            for row in m.iter_mut() {
                row.swap(top, best.1);
            }
        }
        diag.push(m[top][top].unsigned_abs() as u64);
        top += 1;
    }
    diag
}

pub fn reduced_homology(k: &SimplicialComplex) -> Result<HomologyProfile, ComplexError> {
    reduced_homology_with(k, Coefficients::Gf2, DEFAULT_SIMPLEX_CAP)
}

pub fn reduced_homology_with(
    k: &SimplicialComplex,
    coefficients: Coefficients,
    cap: usize,
) -> Result<HomologyProfile, ComplexError> {
    let cells = chain_cells(k, cap)?;
    let n = cells.len();
    // boundary_rank[i] is the rank of the map out of cells[i]; zero for i = 0.
    let mut boundary_rank = vec![0usize; n + 1];
    let mut torsion = vec![Vec::new(); n];
    for i in 1..n {
        let cols = boundary_columns(&cells, i);
        match coefficients {
            Coefficients::Gf2 => boundary_rank[i] = rank_gf2(&cols, cells[i - 1].len()),
            Coefficients::Integers => {
                let diag = smith_diagonal(&cols, cells[i - 1].len());
                boundary_rank[i] = diag.len();
                torsion[i - 1] = diag.into_iter().filter(|&d| d > 1).collect();
            }
        }
    }
    let ranks = (0..n).map(|i| cells[i].len() - boundary_rank[i] - boundary_rank[i + 1]).collect();
    Ok(HomologyProfile { ranks, torsion: matches!(coefficients, Coefficients::Integers).then_some(torsion) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomologyIndex {
    Detected(u32),
    Undetected,
}

impl fmt::Display for HomologyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyIndex::Detected(n) => write!(f, "{n}"),
            HomologyIndex::Undetected => write!(f, "undetected"),
        }
    }
}

pub fn index_from_profile(profile: &HomologyProfile) -> HomologyIndex {
    if profile.rank(-1) > 0 {
        return HomologyIndex::Detected(0);
    }
    profile
        .ranks
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &r)| r > 0)
        .map_or(HomologyIndex::Undetected, |(i, _)| HomologyIndex::Detected(i as u32))
}

pub fn homology_index(k: &SimplicialComplex) -> Result<HomologyIndex, ComplexError> {
    Ok(index_from_profile(&reduced_homology(k)?))
}
