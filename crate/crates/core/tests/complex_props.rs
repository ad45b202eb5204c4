mod common;

use common::{complex_family, random_complex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmcat::complex::{
    index_from_profile, reduced_euler_from_faces, reduced_homology_with, suspension, Coefficients,
    DEFAULT_SIMPLEX_CAP,
};
use tmcat::*;

fn family() -> Vec<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = complex_family();
    out.extend((0..30).map(|_| random_complex(&mut rng, 7, 5, 4)));
    out
}

fn shift(i: HomologyIndex, by: u32) -> HomologyIndex {
    match i {
        HomologyIndex::Detected(n) => HomologyIndex::Detected(n + by),
        HomologyIndex::Undetected => HomologyIndex::Undetected,
    }
}

#[test]
fn cones_are_acyclic() {
    for k in family() {
        let h = reduced_homology(&cone(&k)).unwrap();
        assert!(h.is_zero(), "{k}");
        assert_eq!(homology_index(&cone(&k)).unwrap(), HomologyIndex::Undetected);
    }
}

#[test]
fn euler_characteristic_from_ranks_and_faces_agree() {
    for k in family() {
        for coeff in [Coefficients::Gf2, Coefficients::Integers] {
            let h = reduced_homology_with(&k, coeff, DEFAULT_SIMPLEX_CAP).unwrap();
            assert_eq!(h.euler_characteristic(), reduced_euler_from_faces(&k, DEFAULT_SIMPLEX_CAP).unwrap());
        }
    }
}

#[test]
fn join_adds_indices() {
    let fam = family();
    let mut pairs = 0;
    for k in &fam {
        for l in &fam {
            let (HomologyIndex::Detected(a), HomologyIndex::Detected(b)) =
                (homology_index(k).unwrap(), homology_index(l).unwrap())
            else {
                continue;
            };
            let Ok(joined) = homology_index(&join(k, l)) else { continue };
            assert_eq!(joined, HomologyIndex::Detected(a + b), "{k} * {l}");
            pairs += 1;
        }
    }
    assert!(pairs >= 100, "{pairs}");
}

#[test]
fn suspension_shifts_the_index() {
    for k in family() {
        let base = homology_index(&k).unwrap();
        let s = suspension(&k);
        assert_eq!(homology_index(&s).unwrap(), shift(base, 1), "{k}");
        let hk = reduced_homology(&k).unwrap();
        let hs = reduced_homology(&s).unwrap();
        for d in -1..=4 {
            assert_eq!(hs.rank(d + 1), hk.rank(d), "{k} degree {d}");
        }
    }
}

#[test]
fn spheres_and_known_spaces() {
    for d in 0..=3u32 {
        assert_eq!(homology_index(&SimplicialComplex::sphere(d)).unwrap(), HomologyIndex::Detected(d + 1));
    }
    assert_eq!(homology_index(&SimplicialComplex::empty()).unwrap(), HomologyIndex::Detected(0));
    assert_eq!(homology_index(&SimplicialComplex::point()).unwrap(), HomologyIndex::Undetected);
    assert_eq!(homology_index(&SimplicialComplex::discrete(3)).unwrap(), HomologyIndex::Detected(1));
    assert_eq!(homology_index(&SimplicialComplex::octahedron()).unwrap(), HomologyIndex::Detected(3));
}

#[test]
fn oversized_input_is_refused() {
    let big = SimplicialComplex::from_faces([(0..14).collect::<Vec<u32>>()]);
    assert!(reduced_homology(&big).is_err());
}

#[test]
fn text_format_roundtrip() {
    for k in family() {
        let back = SimplicialComplex::parse(&k.to_string()).unwrap();
        assert_eq!(reduced_homology(&back).unwrap(), reduced_homology(&k).unwrap());
        assert_eq!(back.facets().count(), k.facets().count());
        let again = SimplicialComplex::parse(&back.to_string()).unwrap();
        assert_eq!(SimplicialComplex::parse(&again.to_string()).unwrap(), again);
    }
}

proptest! {
    #[test]
    fn field_and_integer_ranks_agree_on_small_flag_free_complexes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 6, 4, 3);
        let gf2 = reduced_homology_with(&k, Coefficients::Gf2, DEFAULT_SIMPLEX_CAP).unwrap();
        let z = reduced_homology_with(&k, Coefficients::Integers, DEFAULT_SIMPLEX_CAP).unwrap();
        // Graph-like complexes have free homology, so the two must agree.
        if k.dim() <= 1 {
            prop_assert_eq!(&gf2.ranks, &z.ranks);
        }
        prop_assert_eq!(index_from_profile(&gf2), homology_index(&k).unwrap());
    }
}
