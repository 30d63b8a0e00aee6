mod common;

use common::matrix;
use epiloc::fp::{self, sparse_rank};
use epiloc::{FpMatrix, Subspace};
use proptest::prelude::*;

fn sparse_columns(m: &FpMatrix) -> Vec<Vec<(usize, u32)>> {
    (0..m.cols()).map(|c| (0..m.rows()).filter(|&r| m.get(r, c) != 0).map(|r| (r, m.get(r, c))).collect()).collect()
}

/// Two matrices with the same prime and row count.
fn pair(rows: usize, cols: usize) -> impl Strategy<Value = (FpMatrix, FpMatrix)> {
    (common::prime(), 0..=rows, 0..=cols, 0..=cols).prop_flat_map(|(p, r, c1, c2)| {
        (prop::collection::vec(0..p, r * c1), prop::collection::vec(0..p, r * c2))
            .prop_map(move |(x, y)| (FpMatrix::from_data(p, r, c1, x), FpMatrix::from_data(p, r, c2, y)))
    })
}

fn square(n: usize) -> impl Strategy<Value = FpMatrix> {
    (common::prime(), 0..=n)
        .prop_flat_map(|(p, n)| prop::collection::vec(0..p, n * n).prop_map(move |d| FpMatrix::from_data(p, n, n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_nullity(m in matrix(7, 7)) {
        let k = m.nullspace();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn row_reduce_is_idempotent(m in matrix(6, 8)) {
        let r = m.row_reduce();
        let again = r.rref.row_reduce();
        prop_assert_eq!(&again.rref, &r.rref);
        prop_assert_eq!(again.pivots, r.pivots);
    }

    #[test]
    fn solve_is_exact(m in matrix(6, 6), seed in any::<u64>()) {
        let p = m.p();
        let x: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i % 60)) as u32) % p).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap().expect("b lies in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn unsolvable_systems_are_refused(m in matrix(5, 3)) {
        let comp = m.column_space().complement_indices();
        if let Some(&i) = comp.first() {
            let mut b = vec![0; m.rows()];
            b[i] = 1;
            prop_assert!(m.solve(&b).unwrap().is_none());
        }
    }

    #[test]
    fn sparse_rank_agrees_with_dense(m in matrix(9, 9)) {
        prop_assert_eq!(sparse_rank(m.p(), &sparse_columns(&m)), m.rank());
    }

    #[test]
    fn subspace_dimension_formula((m, n) in pair(6, 4)) {
        let (u, v) = (Subspace::from_columns(&m), Subspace::from_columns(&n));
        prop_assert_eq!(u.sum(&v).dim() + u.intersect(&v).dim(), u.dim() + v.dim());
    }

    #[test]
    fn inverse_is_two_sided(m in square(5)) {
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(m.mul(&inv), FpMatrix::identity(m.p(), m.rows()));
            prop_assert_eq!(inv.mul(&m), FpMatrix::identity(m.p(), m.rows()));
        } else {
            prop_assert!(m.rank() < m.rows());
        }
    }

    #[test]
    fn field_inverse(p in common::prime(), a in 1u32..1000) {
        let a = a % p;
        prop_assume!(a != 0);
        prop_assert_eq!(fp::mul(a, fp::inv(a, p), p), 1);
    }
}
