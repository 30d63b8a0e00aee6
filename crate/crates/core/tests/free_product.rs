use epiloc::battery::free_product_instances;
use epiloc::freeprod::all_filtration_quotients;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn filtration_matches_formula_and_is_multiplicative(seed in any::<u64>()) {
        let instances = free_product_instances(seed, 3, 300).unwrap();
        prop_assert_eq!(instances.len(), 3);
        for inst in &instances {
            let fp = &inst.product;
            for q in all_filtration_quotients(fp).unwrap() {
                prop_assert!(q.agree, "{}: k={} direct {} formula {}", inst.name, q.k, q.direct, q.formula);
            }
            prop_assert!(fp.check_multiplicativity(20, seed).is_ok(), "{}", inst.name);
            prop_assert!(fp.check_associativity(10, seed).is_ok(), "{}", inst.name);
        }
    }

    #[test]
    fn filtration_exhausts_words(seed in any::<u64>()) {
        for inst in free_product_instances(seed, 2, 200).unwrap() {
            let fp = &inst.product;
            let dims = fp.filtration_dims(6, false).unwrap();
            for (k, &d) in dims.iter().enumerate() {
                // F_k is spanned by the normal words of length at most k
                prop_assert_eq!(d, fp.words_up_to(k), "{}", inst.name);
            }
        }
    }
}
