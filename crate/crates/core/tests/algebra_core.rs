mod common;

use std::sync::Arc;

use common::group_algebra;
use epiloc::algebra::AlgebraMap;
use epiloc::idempotent::{trivial_idempotent, Corner};
use epiloc::structure::{is_nilpotent, jacobson_radical, radical_bruteforce};
use epiloc::{Algebra, GroupTable};
use proptest::prelude::*;

const GROUPS: [&str; 16] =
    ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "S3", "D2", "D3", "D4", "D5", "CpxCq(5,2)", "CpxCq(7,3)"];

fn case() -> impl Strategy<Value = (&'static str, u32)> {
    (prop::sample::select(GROUPS.to_vec()), common::prime())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_algebra_axioms((g, p) in case()) {
        let a = group_algebra(g, p);
        prop_assert!(a.check_associative().is_ok());
        prop_assert!(a.check_unit().is_ok());
        // the augmentation is a unital algebra map
        prop_assert!(AlgebraMap::augmentation(a.clone()).is_ok());
    }

    #[test]
    fn radical_is_nilpotent_and_quotient_semisimple((g, p) in case()) {
        let a = group_algebra(g, p);
        let j = jacobson_radical(&a).unwrap();
        prop_assert!(is_nilpotent(&a, &j));
        let (q, _) = a.quotient(&j);
        prop_assert_eq!(jacobson_radical(&q).unwrap().dim(), 0);
        if (p as u64).pow(a.dim() as u32) <= 1 << 20 {
            prop_assert_eq!(radical_bruteforce(&a).unwrap(), j);
        }
    }

    #[test]
    fn trivial_idempotent_certificates((g, p) in case()) {
        let a = group_algebra(g, p);
        let e = trivial_idempotent(&a).unwrap();
        let x = e.element();
        prop_assert!(a.is_idempotent(x));
        prop_assert_eq!(a.augment(x), Some(1));
        prop_assert!(e.is_unit() || e.certificate().passed());
        let order = a.group().unwrap().order;
        if order % p as usize != 0 {
            prop_assert_eq!(jacobson_radical(&a).unwrap().dim(), 0);
            prop_assert!(a.is_central(x));
        }
    }

    #[test]
    fn peirce_dimensions((g, p) in case()) {
        let a = group_algebra(g, p);
        let e = trivial_idempotent(&a).unwrap();
        let (x, f) = (e.element().to_vec(), e.complement());
        let ae = a.right_matrix(&x).rank();
        let af = a.right_matrix(&f).rank();
        prop_assert_eq!(ae + af, a.dim());
        let pieces = [(&x, &x), (&x, &f), (&f, &x), (&f, &f)].iter().map(|(u, v)| a.corner_space(u, v).dim()).sum::<usize>();
        prop_assert_eq!(pieces, a.dim());
        let corner = Corner::new(&a, &x);
        prop_assert!(corner.algebra.check_associative().is_ok());
        prop_assert!(corner.algebra.check_unit().is_ok());
    }

    #[test]
    fn relabelled_table_gives_isomorphic_algebra(p in common::prime(), n in 2usize..8) {
        let g = GroupTable::cyclic(n).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let h = GroupTable::from_json(&text).unwrap();
        let (a, b) = (Algebra::group_algebra(&g, p).unwrap(), Algebra::group_algebra(&h, p).unwrap());
        prop_assert_eq!(a.structure_constants(), b.structure_constants());
        let a = Arc::new(a);
        prop_assert_eq!(common::top_two(&a).dim(), common::top_two(&Arc::new(b)).dim());
    }
}

#[test]
fn malformed_tables_are_rejected() {
    let not_assoc = r#"{"name": "x", "order": 3, "elements": ["1", "a", "b"], "table": [[0,1,2],[1,0,0],[2,0,1]]}"#;
    assert!(GroupTable::from_json(not_assoc).is_err());
    let bad_identity = r#"{"name": "x", "order": 2, "elements": ["a", "1"], "table": [[1,0],[0,1]]}"#;
    assert!(GroupTable::from_json(bad_identity).is_err());
}
