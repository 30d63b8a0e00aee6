mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use epiloc::complex::{cone, is_quasi_iso, QuasiIso};
use epiloc::derived::random_free_complex;
use epiloc::{AComplex, ChainMap, FpMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(p: u32, r: usize, c: usize, rng: &mut ChaCha8Rng) -> FpMatrix {
    FpMatrix::from_data(p, r, c, (0..r * c).map(|_| rng.gen_range(0..p)).collect())
}

/// A complex of vector spaces in degrees `0..=len` with `d^2 = 0` by
/// construction: each new differential lands in the kernel of the last.
fn random_field_complex(p: u32, len: usize, rng: &mut ChaCha8Rng) -> (AComplex, Vec<usize>, Vec<FpMatrix>) {
    let dims: Vec<usize> = (0..=len).map(|_| rng.gen_range(0..5)).collect();
    let mut diffs = vec![FpMatrix::zeros(p, 0, dims[0])];
    for k in 1..=len {
        let d = if k == 1 {
            random_matrix(p, dims[0], dims[1], rng)
        } else {
            let ker = diffs[k - 1].nullspace();
            ker.mul(&random_matrix(p, ker.cols(), dims[k], rng))
        };
        diffs.push(d);
    }
    (AComplex::over_field(p, 0, diffs.clone()).unwrap(), dims, diffs)
}

/// `λ id + h d + d h` for a random degree-one map `h`.
fn homotopic_to_scalar(p: u32, lambda: u32, dims: &[usize], diffs: &[FpMatrix], rng: &mut ChaCha8Rng) -> BTreeMap<i64, FpMatrix> {
    let n = dims.len();
    let h: Vec<FpMatrix> = (0..n).map(|k| random_matrix(p, if k + 1 < n { dims[k + 1] } else { 0 }, dims[k], rng)).collect();
    (0..n)
        .map(|k| {
            let mut f = FpMatrix::identity(p, dims[k]).scale(lambda);
            if k + 1 < n {
                f = f.add(&diffs[k + 1].mul(&h[k]));
            }
            if k >= 1 {
                f = f.add(&h[k - 1].mul(&diffs[k]));
            }
            (k as i64, f)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn euler_characteristic_matches_homology(p in common::prime(), len in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _, _) = random_field_complex(p, len, &mut rng);
        let h = c.homology_dims(0, len as i64).unwrap();
        let chi: i64 = h.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        prop_assert_eq!(c.euler_characteristic(), chi);
    }

    #[test]
    fn cone_rank_bound_and_homotopy_invariance(p in common::prime(), len in 0usize..5, lambda in 0u32..7, seed in any::<u64>()) {
        let lambda = lambda % p;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, dims, diffs) = random_field_complex(p, len, &mut rng);
        let c = Arc::new(c);
        let comps = homotopic_to_scalar(p, lambda, &dims, &diffs, &mut rng);
        let f = ChainMap::new(c.clone(), c.clone(), 0, comps).unwrap();
        prop_assert!(f.verify().is_ok());
        let k = cone(&f).unwrap();
        let hc = c.homology_dims(-1, len as i64 + 1).unwrap();
        let hk = k.homology_dims(0, len as i64 + 1).unwrap();
        for n in 0..=len + 1 {
            // H_n(cone) <= H_n(target) + H_(n-1)(source)
            prop_assert!(hk[n] <= hc[n + 1] + hc[n]);
            if lambda == 0 {
                prop_assert_eq!(hk[n], hc[n + 1] + hc[n]);
            } else {
                prop_assert_eq!(hk[n], 0);
            }
        }
        if lambda != 0 {
            prop_assert_eq!(is_quasi_iso(&f, len as i64).unwrap(), QuasiIso::Yes { up_to: len as i64 });
        }
    }

    #[test]
    fn realized_free_complexes_are_module_complexes(seed in any::<u64>(), g in prop::sample::select(vec![("C2", 2u32), ("C3", 3), ("S3", 3), ("S3", 2), ("C4", 2)])) {
        let a = common::group_algebra(g.0, g.1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pc = random_free_complex(&a, &mut rng, 3, 2).unwrap();
        let c = pc.realize().unwrap().complex;
        prop_assert!(c.verify().is_ok());
        let h = c.homology_dims(0, 3).unwrap();
        let chi: i64 = h.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        prop_assert_eq!(c.euler_characteristic(), chi);
    }
}

#[test]
fn non_chain_maps_are_rejected() {
    let p = 3;
    let c = Arc::new(AComplex::over_field(p, 0, vec![FpMatrix::zeros(p, 0, 1), FpMatrix::identity(p, 1)]).unwrap());
    let comps: BTreeMap<i64, FpMatrix> = [(0, FpMatrix::identity(p, 1)), (1, FpMatrix::zeros(p, 1, 1))].into_iter().collect();
    assert!(ChainMap::new(c.clone(), c, 0, comps).is_err());
}
