mod common;

use std::sync::Arc;

use epiloc::battery::{epi_battery, run_instance, small_algebras};
use epiloc::derived::{
    b_over_a, disguise, identity_cone, is_homological_epi, nakayama_check, random_free_complex, tor_dims, tor_dims_left_resolved,
    NakayamaVerdict, TorMethod,
};
use epiloc::resolution::Caps;
use epiloc::{Algebra, Bimodule, Module};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEGREE: usize = 4;

fn case() -> impl Strategy<Value = (Arc<Algebra>, Module)> {
    (prop::sample::select(vec![2u32, 3, 5]), 0usize..19, 0usize..8).prop_map(|(p, i, j)| {
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
    fn tor_is_resolution_independent((a, m) in case()) {
        let caps = Caps::default();
        let sides = std::iter::once(Bimodule::regular(a.clone())).chain(Bimodule::trivial_right(a.clone()).ok());
        for n in sides {
            let bar = tor_dims(&n, &m, DEGREE, TorMethod::Bar, &caps).unwrap();
            let min = tor_dims(&n, &m, DEGREE, TorMethod::Minimal, &caps).unwrap();
            prop_assert_eq!(bar, min);
        }
    }

    #[test]
    fn tor_is_balanced((a, m) in case()) {
        prop_assume!(a.augmentation().is_some());
        let n = Bimodule::trivial_right(a.clone()).unwrap();
        let right_resolved = tor_dims(&n, &m, DEGREE, TorMethod::Minimal, &Caps::default()).unwrap();
        prop_assert_eq!(tor_dims_left_resolved(&n, &m, DEGREE).unwrap(), right_resolved);
    }

    #[test]
    fn epimorphism_notions_agree(seed in any::<u64>(), i in any::<prop::sample::Index>()) {
        let battery = epi_battery(seed).unwrap();
        let inst = &battery[i.index(battery.len())];
        let r = run_instance(inst, 4, DEGREE).unwrap();
        prop_assert!(r.omega_matches_cone, "{}: {:?}", r.name, r.detail);
        prop_assert_ne!(r.agree, Some(false), "{} disagrees", r.name);
    }

    #[test]
    fn homological_epis_fix_modules_of_the_target(seed in any::<u64>(), i in any::<prop::sample::Index>()) {
        let battery = epi_battery(seed).unwrap();
        let f = &battery[i.index(battery.len())].map;
        let report = is_homological_epi(f, DEGREE).unwrap();
        prop_assume!(report.verdict.is_yes());
        // B ⊗^L_A M ≃ M for every B-module M
        let n = b_over_a(f).unwrap();
        for m in common::test_modules(&f.target) {
            let restricted = m.restrict(f).unwrap();
            let dims = tor_dims(&n, &restricted, DEGREE, TorMethod::Minimal, &Caps::default()).unwrap();
            let mut want = vec![0; DEGREE + 1];
            want[0] = m.dim();
            prop_assert_eq!(dims, want);
        }
    }

    #[test]
    fn nakayama_on_local_algebras(seed in any::<u64>(), g in prop::sample::select(vec![("C2", 2u32), ("C3", 3), ("C4", 2), ("C9", 3), ("D2", 2)])) {
        let a = common::group_algebra(g.0, g.1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_free_complex(&a, &mut rng, 3, 3).unwrap();
        let c = if seed % 2 == 0 { disguise(&identity_cone(&c).unwrap(), &mut rng).unwrap() } else { c };
        let v = nakayama_check(&a, &c).unwrap();
        prop_assert!(!matches!(v, NakayamaVerdict::Violated { .. }), "{:?}", v);
        if seed % 2 == 0 {
            prop_assert_eq!(v, NakayamaVerdict::Holds);
        }
    }
}
