mod common;

use std::sync::Arc;

use epiloc::battery::small_algebras;
use epiloc::idempotent::trivial_idempotent;
use epiloc::resolution::{
    bar_complex, bar_resolution, is_minimal, minimal_projective_resolution, sparse_bar_complex, squeezed_resolution, z_map, BarBase,
    BarData, Caps,
};
use epiloc::{Algebra, Bimodule, Module};
use proptest::prelude::*;

/// An algebra of dimension at most 6 over a small prime, with one of its test modules.
fn case() -> impl Strategy<Value = (Arc<Algebra>, Module)> {
    (prop::sample::select(vec![2u32, 3]), 0usize..19, 0usize..8).prop_map(|(p, i, j)| {
        let algebras = small_algebras(p).unwrap();
        let a = algebras[i % algebras.len()].clone();
        let mods = common::test_modules(&a);
        let m = mods[j % mods.len()].clone();
        (a, m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn minimal_resolutions_are_exact_and_minimal((a, m) in case()) {
        let res = minimal_projective_resolution(&a, &m, 5).unwrap();
        prop_assert!(res.check_exact(m.dim()).is_ok());
        prop_assert!(is_minimal(&res).unwrap());
    }

    #[test]
    fn bar_resolutions_are_exact((a, m) in case()) {
        let res = bar_resolution(&a, &m, 3).unwrap();
        prop_assert!(res.check_exact(m.dim()).is_ok());
    }

    #[test]
    fn sparse_bar_homology_matches_dense((a, m) in case()) {
        let n = Bimodule::regular(a.clone());
        let data = BarData::new(&a, BarBase::Split).unwrap();
        let caps = Caps::default();
        let Ok(dense) = bar_complex(&data, &n, &m, 3, &caps, false) else {
            // too big to hold densely; nothing to compare against
            return Ok(());
        };
        let sparse = sparse_bar_complex(&data, &n, &m, 3, &caps).unwrap();
        prop_assert_eq!(dense.dims(), &sparse.dims[..]);
        prop_assert_eq!(dense.homology_dims(0, 2).unwrap(), sparse.homology_dims(a.p()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn z_maps_compose_for_conjugate_idempotents(seed in any::<u64>(), m in 2usize..5, n in 2usize..5) {
        let a = common::group_algebra("S3", 3);
        let e = trivial_idempotent(&a).unwrap();
        let u = unit(&a, seed);
        let e = e.conjugate(&u).unwrap();
        let res = squeezed_resolution(&a, &e, m + n + 2).unwrap();
        prop_assert!(res.complex.verify().is_ok());
        let (zm, zn, zmn) = (z_map(&res, m).unwrap(), z_map(&res, n).unwrap(), z_map(&res, m + n).unwrap());
        let comp = zn.proj.then(&a, &zm.proj).unwrap();
        prop_assert_eq!(comp.shift, zmn.proj.shift);
        prop_assert_eq!(comp.components, zmn.proj.components);
    }
}

fn unit(a: &Algebra, seed: u64) -> Vec<u32> {
    let p = a.p() as u64;
    (0u64..)
        .map(|k| (0..a.dim()).map(|i| ((seed.wrapping_add(k).wrapping_mul(6364136223846793005) >> (i * 5 % 60)) % p) as u32).collect::<Vec<_>>())
        .find(|x| a.is_unit(x))
        .unwrap()
}
