//! Slopes on a torus and distances in the Farey graph.
//!
//! Distances are computed by moving the first slope to `1/0` with a unimodular
//! map and searching the ladder of convergents of the image of the second
//! slope. Every geodesic between two Farey vertices stays inside the ladder of
//! triangles crossed by the hyperbolic geodesic joining them, and fan vertices
//! other than the convergents can always be bypassed through the fan's pivot.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_DISTANCE_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("cannot parse slope `{0}`")]
    BadSlope(String),
    #[error("0/0 is not a slope")]
    Zero,
    #[error("cannot parse matrix `{0}`, expected `a,b;c,d`")]
    BadMatrix(String),
    #[error("matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("empty slope set")]
    EmptySet,
}

/// A reduced fraction `p/q` with `q > 0`, or `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Slope, SlopeError> {
        if p == 0 && q == 0 {
            return Err(SlopeError::Zero);
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            (p, q) = (-p, -q);
        }
        Ok(Slope { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SlopeError::BadSlope(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (t.parse().map_err(|_| bad())?, 1),
        };
        Slope::new(p, q)
    }
}

impl TryFrom<String> for Slope {
    type Error = SlopeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

pub fn parse_slope_set(s: &str) -> Result<Vec<Slope>, SlopeError> {
    let set: Vec<Slope> =
        s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    if set.is_empty() {
        return Err(SlopeError::EmptySet);
    }
    Ok(set)
}

pub fn is_farey_edge(s1: Slope, s2: Slope) -> bool {
    (s1.p * s2.q - s2.p * s1.q).abs() == 1
}

/// A unimodular integer matrix `[[a, b], [c, d]]` acting on column vectors
/// `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TorusMap {
    m: [[i64; 2]; 2],
}

impl TorusMap {
    pub const IDENTITY: TorusMap = TorusMap { m: [[1, 0], [0, 1]] };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<TorusMap, SlopeError> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(SlopeError::NotUnimodular(det));
        }
        Ok(TorusMap { m: [[a, b], [c, d]] })
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> i64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Orientation preserving with `|trace| > 2`.
    pub fn is_anosov(&self) -> bool {
        self.det() == 1 && self.trace().abs() > 2
    }

    pub fn compose(&self, other: &TorusMap) -> TorusMap {
        let (a, b) = (self.m, other.m);
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TorusMap { m }
    }

    pub fn inverse(&self) -> TorusMap {
        let [[a, b], [c, d]] = self.m;
        let det = self.det();
        TorusMap { m: [[d * det, -b * det], [-c * det, a * det]] }
    }

    pub fn power(&self, exp: u32) -> TorusMap {
        (0..exp).fold(TorusMap::IDENTITY, |acc, _| acc.compose(self))
    }
}

impl fmt::Display for TorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.m;
        write!(f, "{a},{b};{c},{d}")
    }
}

impl FromStr for TorusMap {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SlopeError::BadMatrix(s.to_string());
        let nums: Vec<i64> = s
            .split(';')
            .flat_map(|row| row.split(','))
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if s.split(';').count() != 2 || nums.len() != 4 {
            return Err(bad());
        }
        TorusMap::new(nums[0], nums[1], nums[2], nums[3])
    }
}

impl TryFrom<String> for TorusMap {
    type Error = SlopeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TorusMap> for String {
    fn from(m: TorusMap) -> String {
        m.to_string()
    }
}

pub fn apply_torus_map(m: &TorusMap, s: Slope) -> Slope {
    let [[a, b], [c, d]] = m.m;
    Slope::new(a * s.p + b * s.q, c * s.p + d * s.q).expect("unimodular maps are injective")
}

/// A unimodular map sending `s` to `1/0`.
fn normalizing_map(s: Slope) -> TorusMap {
    // Find x, y with p*y - q*x = 1.
    let (_, y, negx) = ext_gcd(s.p, s.q);
    let x = -negx;
    TorusMap { m: [[y, -x], [-s.q, s.p]] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distance {
    Exact(u32),
    ExceedsCap,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::ExceedsCap => write!(f, "exceeds cap"),
        }
    }
}

/// Convergents of `p/q` (`q > 0`) from the continued fraction with floor
/// partial quotients, preceded by `1/0`.
fn convergent_ladder(p: i64, q: i64) -> Vec<Slope> {
    let mut out = vec![Slope::INFINITY];
    let (mut h0, mut k0) = (1i64, 0i64);
    let (mut h1, mut k1) = (0i64, 1i64);
    let (mut num, mut den) = (p, q);
    while den != 0 {
        let a = num.div_euclid(den);
        (num, den) = (den, num.rem_euclid(den));
        let (h, k) = (a * h0 + h1, a * k0 + k1);
        (h1, k1, h0, k0) = (h0, k0, h, k);
        out.push(Slope { p: h, q: k });
    }
    out
}

pub fn farey_distance(s1: Slope, s2: Slope, cap: u32) -> Distance {
    if s1 == s2 {
        return Distance::Exact(0);
    }
    let target = apply_torus_map(&normalizing_map(s1), s2);
    debug_assert!(!target.is_infinite());
    let ladder = convergent_ladder(target.p, target.q);
    let n = ladder.len();
    let mut dist = vec![u32::MAX; n];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if i == n - 1 {
            break;
        }
        for j in 0..n {
            if dist[j] == u32::MAX && is_farey_edge(ladder[i], ladder[j]) {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    match dist[n - 1] {
        d if d <= cap => Distance::Exact(d),
        _ => Distance::ExceedsCap,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierVerdict {
    pub holds: bool,
    pub threshold: u32,
    pub min_distance: Distance,
    /// Pair (from Ω_Y, image of Ω_X) realizing the minimum.
    pub witness: Option<(Slope, Slope)>,
    pub anosov: bool,
}

/// Compares `min d(Ω_Y, M(Ω_X))` against `2n + 1`. When every pair exceeds
/// the cap the barrier holds only if the cap itself reaches `2n`.
pub fn barrier_check(
    omega_x: &[Slope],
    omega_y: &[Slope],
    m: &TorusMap,
    n: u32,
    cap: u32,
) -> Result<BarrierVerdict, SlopeError> {
    if omega_x.is_empty() || omega_y.is_empty() {
        return Err(SlopeError::EmptySet);
    }
    let threshold = 2 * n + 1;
    let mut best: Option<(u32, Slope, Slope)> = None;
    for &x in omega_x {
        let image = apply_torus_map(m, x);
        for &y in omega_y {
            if let Distance::Exact(d) = farey_distance(y, image, cap) {
                if best.is_none_or(|(b, _, _)| d < b) {
                    best = Some((d, y, image));
                }
            }
        }
    }
    let (holds, min_distance, witness) = match best {
        Some((d, y, img)) => (d >= threshold, Distance::Exact(d), Some((y, img))),
        None => (cap >= 2 * n, Distance::ExceedsCap, None),
    };
    Ok(BarrierVerdict { holds, threshold, min_distance, witness, anosov: m.is_anosov() })
}
