#![allow(dead_code)]

use std::sync::Arc;

use epiloc::{Algebra, FpMatrix, GroupTable, Module, Subspace};
use proptest::prelude::*;

pub const PRIMES: [u32; 4] = [2, 3, 5, 7];

pub fn group_algebra(name: &str, p: u32) -> Arc<Algebra> {
    Arc::new(Algebra::group_algebra(&GroupTable::from_name(name).unwrap(), p).unwrap())
}

pub fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(PRIMES.to_vec())
}

/// A matrix with entries reduced mod `p`.
pub fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = FpMatrix> {
    (prime(), 0..=max_rows, 0..=max_cols).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |data| FpMatrix::from_data(p, r, c, data))
    })
}

/// `A/J^2` as a left module.
pub fn top_two(a: &Arc<Algebra>) -> Module {
    let st = a.structure().unwrap();
    let j = st.radical.vectors();
    let j2: Vec<Vec<u32>> = j.iter().flat_map(|x| j.iter().map(|y| a.mul(x, y))).collect();
    Module::regular(a.clone()).quotient(&Subspace::span(a.p(), a.dim(), &j2)).unwrap().0
}

/// Simple modules, the regular module and `A/J^2`.
pub fn test_modules(a: &Arc<Algebra>) -> Vec<Module> {
    let st = a.structure().unwrap();
    let mut out: Vec<Module> = st.simples().into_iter().cloned().collect();
    out.push(Module::regular(a.clone()));
    out.push(top_two(a));
    out
}
