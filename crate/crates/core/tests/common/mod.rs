//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;
use tmcat::complex::SimplicialComplex;
use tmcat::surgery::{
    apply_edge_compression, BoundaryCurve, EdgeCompressEnds, PieceSplit, SurfacePiece, SurgeryMove,
};
use tmcat::{Edge, EdgeWeights};

const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_id(u: u8, v: u8) -> usize {
    let key = (u.min(v), u.max(v));
    EDGES.iter().position(|&e| e == key).unwrap()
}

/// Every weight vector with entries in `0..=max`.
pub fn all_weight_vectors(max: u32) -> impl Iterator<Item = [u32; 6]> {
    let base = max + 1;
    (0..base.pow(6)).map(move |mut code| {
        let mut w = [0u32; 6];
        for x in w.iter_mut() {
            *x = code % base;
            code /= base;
        }
        w
    })
}

/// Arc counts at the corners (u, v, x) of face uvx, found by trying every
/// split of the weight on uv.
pub fn arc_oracle(w: &[u32; 6], face: [u8; 3]) -> Option<[u32; 3]> {
    let [u, v, x] = face;
    let (uv, vx, ux) = (w[edge_id(u, v)], w[edge_id(v, x)], w[edge_id(u, x)]);
    let mut found = None;
    for tu in 0..=uv {
        let tv = uv - tu;
        if tv > vx {
            continue;
        }
        let tx = vx - tv;
        if tu + tx == ux {
            assert!(found.is_none(), "arc placement not unique");
            found = Some([tu, tv, tx]);
        }
    }
    found
}

/// All non-crossing perfect matchings of points `lo..hi` on a circle.
fn noncrossing_matchings(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if lo >= hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut k = lo + 1;
    while k < hi {
        for inner in noncrossing_matchings(lo + 1, k) {
            for outer in noncrossing_matchings(k + 1, hi) {
                let mut m = vec![(lo, k)];
                m.extend(inner.iter().copied());
                m.extend(outer.iter().copied());
                out.push(m);
            }
        }
        k += 2;
    }
    out
}

/// Traces a normal curve system by brute force: in each face, searches all
/// non-crossing matchings of the points around the face boundary for the
/// unique one with no arc returning to its own edge, then glues faces with a
/// union-find. Returns the weight vector of every component, sorted, or
/// `None` when some face has no valid matching.
pub fn trace_oracle(w: &[u32; 6]) -> Option<Vec<[u32; 6]>> {
    // Global point ids: (edge, position from the smaller vertex).
    let mut offset = [0usize; 6];
    let mut total = 0usize;
    for e in 0..6 {
        offset[e] = total;
        total += w[e] as usize;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }

    for omit in 0..4u8 {
        let verts: Vec<u8> = (0..4).filter(|&v| v != omit).collect();
        let (a, b, c) = (verts[0], verts[1], verts[2]);
        // Walk the face boundary a -> b -> c -> a.
        let mut cycle: Vec<(usize, usize)> = Vec::new(); // (edge, global id)
        for (s, t) in [(a, b), (b, c), (c, a)] {
            let e = edge_id(s, t);
            let n = w[e] as usize;
            let from_small = s < t;
            for k in 0..n {
                let pos = if from_small { k } else { n - 1 - k };
                cycle.push((e, offset[e] + pos));
            }
        }
        if cycle.len() % 2 == 1 {
            return None;
        }
        let valid: Vec<Vec<(usize, usize)>> = noncrossing_matchings(0, cycle.len())
            .into_iter()
            .filter(|m| m.iter().all(|&(i, j)| cycle[i].0 != cycle[j].0))
            .collect();
        if valid.len() != 1 {
            assert!(valid.is_empty(), "normal arc system is not unique");
            return None;
        }
        for &(i, j) in &valid[0] {
            let (ri, rj) = (find(&mut parent, cycle[i].1), find(&mut parent, cycle[j].1));
            parent[ri] = rj;
        }
    }

    let mut comps: BTreeMap<usize, [u32; 6]> = BTreeMap::new();
    for e in 0..6 {
        for k in 0..w[e] as usize {
            let r = find(&mut parent, offset[e] + k);
            comps.entry(r).or_insert([0; 6])[e] += 1;
        }
    }
    let mut out: Vec<[u32; 6]> = comps.into_values().collect();
    out.sort();
    Some(out)
}

/// Recognizes a single loop's weight vector from its pattern alone.
pub fn loop_pattern_ok(w: &[u32; 6]) -> bool {
    let vertex_link = (0..4u8).any(|v| (0..6).all(|e| w[e] == u32::from(EDGES[e].0 == v || EDGES[e].1 == v)));
    if vertex_link {
        return true;
    }
    let pairs = [(0, 5), (1, 4), (2, 3)];
    if pairs.iter().any(|&(x, y)| w[x] != w[y]) {
        return false;
    }
    let mut p: Vec<u32> = pairs.iter().map(|&(x, _)| w[x]).collect();
    p.sort();
    (p == [0, 1, 1]) || (p[0] >= 1 && p[2] == p[0] + p[1])
}

pub fn to_edge_weights(w: &[u32; 6]) -> EdgeWeights {
    EdgeWeights(*w)
}

pub fn edge(s: &str) -> Edge {
    s.parse().unwrap()
}

// Farey graph restricted to a box.

pub fn box_slopes(bound: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for q in 1..=bound {
        for p in -bound..=bound {
            if num_gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn num_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All-pairs distances in the Farey graph induced on `slopes`.
pub fn box_distances(slopes: &[(i64, i64)]) -> Vec<Vec<u32>> {
    let n = slopes.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (slopes[i], slopes[j]);
            if (a.0 * b.1 - a.1 * b.0).abs() == 1 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    (0..n)
        .map(|s| {
            let mut d = vec![u32::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if d[y] == u32::MAX {
                        d[y] = d[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            d
        })
        .collect()
}

// Surgery: shortest all-disk sequences by applying concrete edge-compressions.

fn long_piece(genus: u32, k: usize) -> SurfacePiece {
    SurfacePiece::new(genus, (0..k).map(|_| BoundaryCurve::plain(1024)).collect())
}

/// Every edge-compression of `piece` up to the resulting shapes, built as
/// concrete moves.
pub fn concrete_edge_moves(piece: &SurfacePiece) -> Vec<SurgeryMove> {
    let e = edge("01");
    let k = piece.boundary.len();
    let mut moves = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            moves.push(SurgeryMove::EdgeCompress {
                edge: e,
                ends: EdgeCompressEnds::TwoCurves { curves: (i, j) },
            });
        }
    }
    for c in 0..k {
        let len = piece.boundary[c].length;
        if len < 4 {
            continue;
        }
        let lengths = ((len - 2) / 2, len - 2 - (len - 2) / 2);
        moves.push(SurgeryMove::EdgeCompress {
            edge: e,
            ends: EdgeCompressEnds::SameCurve { curve: c, lengths, split: None },
        });
        let others: Vec<usize> = (0..k).filter(|&x| x != c).collect();
        for mask in 0u32..(1 << others.len()) {
            let first: Vec<usize> =
                others.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x).collect();
            for g1 in 0..=piece.genus {
                moves.push(SurgeryMove::EdgeCompress {
                    edge: e,
                    ends: EdgeCompressEnds::SameCurve {
                        curve: c,
                        lengths,
                        split: Some(PieceSplit { first_curves: first.clone(), first_genus: g1 }),
                    },
                });
            }
        }
    }
    moves
}

fn shape_key(pieces: &[SurfacePiece]) -> Vec<(u32, usize)> {
    let mut v: Vec<(u32, usize)> = pieces.iter().map(|p| (p.genus, p.boundary.len())).collect();
    v.sort();
    v
}

/// Breadth-first search over concrete edge-compression sequences from a
/// connected piece until every piece is a disk.
pub fn surgery_bfs(genus: u32, boundary: usize) -> Option<u32> {
    let start = vec![long_piece(genus, boundary)];
    let mut seen: HashMap<Vec<(u32, usize)>, u32> = HashMap::from([(shape_key(&start), 0)]);
    let mut queue = VecDeque::from([(start, 0u32)]);
    while let Some((pieces, d)) = queue.pop_front() {
        if pieces.iter().all(|p| p.genus == 0 && p.boundary.len() == 1) {
            return Some(d);
        }
        for (t, p) in pieces.iter().enumerate() {
            for mv in concrete_edge_moves(p) {
                let Ok(next) = apply_edge_compression(&pieces, t, &mv) else { continue };
                let key = shape_key(&next);
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(key) {
                    slot.insert(d + 1);
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    None
}

// Complexes.

pub fn random_complex<R: Rng>(
    rng: &mut R,
    max_vertices: u32,
    max_facets: usize,
    max_facet_size: usize,
) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices);
    let facets = rng.gen_range(1..=max_facets);
    let mut faces: Vec<Vec<u32>> = (0..facets)
        .map(|_| {
            let size = rng.gen_range(1..=max_facet_size.min(n as usize));
            let mut f: Vec<u32> = Vec::new();
            while f.len() < size {
                let v = rng.gen_range(0..n);
                if !f.contains(&v) {
                    f.push(v);
                }
            }
            f
        })
        .collect();
    // Keep every sampled vertex present.
    for v in 0..n {
        if !faces.iter().any(|f| f.contains(&v)) {
            faces.push(vec![v]);
        }
    }
    SimplicialComplex::from_faces(faces)
}

/// Spheres of dimension 0..=2, their disjoint unions, and a few fixed shapes.
pub fn complex_family() -> Vec<SimplicialComplex> {
    let s0 = SimplicialComplex::discrete(2);
    let s1 = SimplicialComplex::cycle(4);
    let s2 = SimplicialComplex::sphere(2);
    vec![
        SimplicialComplex::empty(),
        s0.clone(),
        SimplicialComplex::discrete(3),
        s1.clone(),
        SimplicialComplex::cycle(5),
        s2.clone(),
        SimplicialComplex::octahedron(),
        s0.disjoint_union(&s1),
        s1.disjoint_union(&s1),
        s1.disjoint_union(&s2),
        SimplicialComplex::point().disjoint_union(&s2),
    ]
}
