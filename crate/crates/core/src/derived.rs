//! Derived tensor products, Tor, relative differentials `Ω^L`, the
//! homological-epimorphism test and the Nakayama check.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{same, Algebra, AlgebraMap};
use crate::complex::{cone, AComplex, ChainMap};
use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use crate::module::{Bimodule, Module};
use crate::proj::{ElemMatrix, ProjComplex, ProjMap};
use crate::resolution::{bar_complex, minimal_projective_resolution, minimal_projective_resolution_with, sparse_bar_complex, BarBase, BarData, Caps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorMethod {
    Bar,
    Minimal,
}

/// `N ⊗^L_A M` for a `(K, A)`-bimodule `N` and a left module `M`, trusted
/// through `up_to`.
pub fn derived_tensor(n: &Bimodule, m: &Module, up_to: usize, method: TorMethod, caps: &Caps) -> Result<AComplex> {
    let a = m.algebra();
    if !same(n.right(), a) {
        return Err(Error::InvalidInput("derived tensor over mismatched algebras".into()));
    }
    match method {
        TorMethod::Bar => {
            let data = BarData::new(a, BarBase::Split)?;
            bar_complex(&data, n, m, up_to + 1, caps, false)
        }
        TorMethod::Minimal => {
            let res = minimal_projective_resolution_with(a, m, up_to + 1, caps)?;
            let proj = res.proj.as_ref().ok_or_else(|| Error::Internal("minimal resolution without terms".into()))?;
            Ok(proj.tensor_with(n)?.complex)
        }
    }
}

/// `dim Tor_k(N, M)` for `0 <= k <= up_to`.
pub fn tor_dims(n: &Bimodule, m: &Module, up_to: usize, method: TorMethod, caps: &Caps) -> Result<Vec<usize>> {
    if method == TorMethod::Bar {
        let a = m.algebra();
        if !same(n.right(), a) {
            return Err(Error::InvalidInput("derived tensor over mismatched algebras".into()));
        }
        let data = BarData::new(a, BarBase::Split)?;
        let bar = sparse_bar_complex(&data, n, m, up_to + 1, caps)?;
        return Ok(bar.homology_dims(a.p()));
    }
    let c = derived_tensor(n, m, up_to, method, caps)?;
    c.homology_dims(0, up_to as i64)
}

/// `dim Tor_k(N, M)` computed by both methods, which must agree.
pub fn tor(n: &Bimodule, m: &Module, degree: usize) -> Result<usize> {
    let caps = Caps::default();
    let b = tor_dims(n, m, degree, TorMethod::Bar, &caps)?;
    let p = tor_dims(n, m, degree, TorMethod::Minimal, &caps)?;
    if b != p {
        return Err(Error::Internal(format!("Tor via bar {b:?} differs from Tor via minimal resolution {p:?}")));
    }
    Ok(p[degree])
}

/// A right `A`-module viewed as a left module over `A^op`.
pub fn right_as_opposite_module(n: &Bimodule, aop: &Arc<Algebra>) -> Result<Module> {
    if aop.dim() != n.right().dim() {
        return Err(Error::InvalidInput("opposite algebra dimension differs".into()));
    }
    Module::new(aop.clone(), n.dim(), n.right_action().to_vec())
}

/// `Tor` dimensions from a minimal resolution of the right argument, i.e.
/// `P(N) ⊗_A M`. Requires `N` to be a right module over F_p.
pub fn tor_dims_left_resolved(n: &Bimodule, m: &Module, up_to: usize) -> Result<Vec<usize>> {
    let a = m.algebra();
    let aop = Arc::new(a.opposite());
    let nop = right_as_opposite_module(n, &aop)?;
    let res = minimal_projective_resolution(&aop, &nop, up_to + 1)?;
    let mr = m.as_right_over_opposite(aop.clone())?;
    let proj = res.proj.as_ref().ok_or_else(|| Error::Internal("minimal resolution without terms".into()))?;
    proj.tensor_with(&mr)?.complex.homology_dims(0, up_to as i64)
}

// ---------------------------------------------------------------------------
// Relative differentials and homological epimorphisms

/// `B` as a left `A`-module through `f`.
pub fn restrict_regular(f: &AlgebraMap) -> Result<Module> {
    let b = &f.target;
    let action = (0..f.source.dim()).map(|i| b.left_matrix(&f.apply(&f.source.basis(i)))).collect();
    Module::new(f.source.clone(), b.dim(), action)
}

/// `B` as a `(B, A)`-bimodule through `f`.
pub fn b_over_a(f: &AlgebraMap) -> Result<Bimodule> {
    let b = &f.target;
    let right = (0..f.source.dim()).map(|i| b.right_matrix(&f.apply(&f.source.basis(i)))).collect();
    Bimodule::new(b.clone(), f.source.clone(), b.dim(), b.left_regular().to_vec(), right)
}

/// Complexes attached to `f: A -> B` through degree `up_to`.
#[derive(Clone, Debug)]
pub struct DerivedMultiplication {
    pub up_to: usize,
    /// `B ⊗^L_A B`.
    pub tensor: AComplex,
    /// Cone of the multiplication map `B ⊗^L_A B -> B`.
    pub multiplication_cone: AComplex,
    /// `Ω^L_A(B)`: cone of `B = B ⊗_A A -> B ⊗^L_A B`, a splitting of the
    /// fibre of the multiplication map.
    pub omega: AComplex,
}

pub fn derived_multiplication(f: &AlgebraMap, up_to: usize) -> Result<DerivedMultiplication> {
    let a = f.source.clone();
    let b = f.target.clone();
    let p = a.p();
    let bm = restrict_regular(f)?;
    let res = minimal_projective_resolution(&a, &bm, up_to + 2)?;
    let proj = res.proj.as_ref().ok_or_else(|| Error::Internal("minimal resolution without terms".into()))?;
    let aug = res.augmentation.as_ref().ok_or_else(|| Error::Internal("resolution without augmentation".into()))?;
    let bba = b_over_a(f)?;
    let t = proj.tensor_with(&bba)?;

    // μ on degree zero: v ⊗ ε_s -> v · g_s.
    let mut mu = FpMatrix::zeros(p, b.dim(), t.complex.dim(0));
    let mut col = 0;
    for (s, g) in t.summands[0].iter().zip(&res.generators) {
        for v in s.vectors() {
            let img = b.mul(&v, g);
            for (r, &c) in img.iter().enumerate() {
                mu.set(r, col, c);
            }
            col += 1;
        }
    }
    let tensor = Arc::new(t.complex.clone());
    let breg = Arc::new(AComplex::concentrated(&Module::regular(b.clone()), 0));
    let mut comps = BTreeMap::new();
    comps.insert(0, mu);
    let mu_map = ChainMap::new(tensor.clone(), breg, 0, comps)?;
    let multiplication_cone = cone(&mu_map)?;

    // Section A -> P(B) through a lift p_1 of the unit of B.
    let x = aug
        .solve(b.unit())?
        .ok_or_else(|| Error::Internal("resolution does not reach the unit of B".into()))?;
    let real = proj.realize()?;
    let p1 = real.split(0, &x);
    let free = ProjComplex::new(a.clone(), vec![vec![a.unit().to_vec()]], Vec::new())?;
    let mut sc = BTreeMap::new();
    sc.insert(0, ElemMatrix::from_rows(vec![p1], proj.rank(0))?);
    let section = ProjMap { shift: 0, components: sc };
    section.verify(&free, proj)?;
    let free_t = free.tensor_with(&bba)?;
    let s_map = section.realize(&bba, &free_t, &t)?;
    let omega = cone(&s_map)?;
    Ok(DerivedMultiplication { up_to, tensor: t.complex, multiplication_cone, omega })
}

/// `Ω^L_A(B)` trusted through `up_to`.
pub fn relative_differentials(f: &AlgebraMap, up_to: usize) -> Result<AComplex> {
    Ok(derived_multiplication(f, up_to)?.omega)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EpiVerdict {
    YesUpTo { up_to: usize },
    NoAtDegree { degree: usize },
}

impl EpiVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, EpiVerdict::YesUpTo { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologicalEpiReport {
    pub verdict: EpiVerdict,
    /// `dim H_n(Ω^L)` for `n <= up_to`.
    pub omega_dims: Vec<usize>,
    /// `dim H_n` of the cone of multiplication for `n <= up_to + 1`.
    pub multiplication_cone_dims: Vec<usize>,
    /// `dim H_n(B ⊗^L_A B)` for `n <= up_to`.
    pub tensor_dims: Vec<usize>,
}

/// Decide whether `B ⊗^L_A B -> B` is a quasi-isomorphism through `up_to`,
/// from both the cone of multiplication and `Ω^L`. A disagreement between
/// the two is reported as an internal error.
pub fn is_homological_epi(f: &AlgebraMap, up_to: usize) -> Result<HomologicalEpiReport> {
    let dm = derived_multiplication(f, up_to)?;
    let n = up_to as i64;
    let omega_dims = dm.omega.homology_dims(0, n)?;
    let multiplication_cone_dims = dm.multiplication_cone.homology_dims(0, n + 1)?;
    let tensor_dims = dm.tensor.homology_dims(0, n)?;
    let by_omega = omega_dims.iter().position(|&d| d != 0);
    // H_{k+1} of the cone is H_k of the fibre.
    let by_cone = multiplication_cone_dims.iter().position(|&d| d != 0).map(|k| k.saturating_sub(1));
    if multiplication_cone_dims[0] != 0 || by_omega != by_cone {
        return Err(Error::Internal(format!(
            "Ω^L acyclicity ({by_omega:?}) and the multiplication map ({by_cone:?}) disagree"
        )));
    }
    let verdict = match by_omega {
        Some(degree) => EpiVerdict::NoAtDegree { degree },
        None => EpiVerdict::YesUpTo { up_to },
    };
    Ok(HomologicalEpiReport { verdict, omega_dims, multiplication_cone_dims, tensor_dims })
}

// ---------------------------------------------------------------------------
// Nakayama

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NakayamaVerdict {
    /// `F_p ⊗ c` has homology in this degree, so there is nothing to check.
    HypothesisEmpty { degree: i64 },
    /// `F_p ⊗ c` and `c` are both acyclic.
    Holds,
    /// `F_p ⊗ c` is acyclic but `c` is not.
    Violated { degree: i64 },
}

/// For a bounded complex of free modules over a local augmented algebra:
/// acyclicity of `F_p ⊗_A c` forces acyclicity of `c`.
pub fn nakayama_check(a: &Arc<Algebra>, c: &ProjComplex) -> Result<NakayamaVerdict> {
    if !same(c.algebra(), a) {
        return Err(Error::InvalidInput("complex over a different algebra".into()));
    }
    if !a.structure()?.is_local() || a.augmentation().is_none() {
        return Err(Error::Precondition("Nakayama check needs a local augmented algebra".into()));
    }
    if c.trusted_to() != crate::complex::UNBOUNDED {
        return Err(Error::Precondition("Nakayama check needs a complete bounded complex".into()));
    }
    if (0..c.len()).any(|k| c.term(k).iter().any(|e| e != a.unit())) {
        return Err(Error::Precondition("Nakayama check needs free terms".into()));
    }
    let k = Bimodule::trivial_right(a.clone())?;
    let reduced = c.tensor_with(&k)?.complex;
    let hi = c.max_deg();
    for n in 0..=hi {
        if reduced.homology_dim(n)? != 0 {
            return Ok(NakayamaVerdict::HypothesisEmpty { degree: n });
        }
    }
    let full = c.realize()?.complex;
    for n in 0..=hi {
        if full.homology_dim(n)? != 0 {
            return Ok(NakayamaVerdict::Violated { degree: n });
        }
    }
    Ok(NakayamaVerdict::Holds)
}

fn random_element<R: Rng>(a: &Algebra, rng: &mut R) -> Vec<u32> {
    (0..a.dim()).map(|_| rng.gen_range(0..a.p())).collect()
}

/// Row tuples `x` with `x · d = 0`, as a basis of `A^{rows}`-vectors.
fn left_kernel(a: &Algebra, d: &ElemMatrix) -> Vec<Vec<Vec<u32>>> {
    let n = a.dim();
    let (r, c) = (d.rows(), d.cols());
    let mut m = FpMatrix::zeros(a.p(), c * n, r * n);
    for t in 0..r {
        for i in 0..n {
            let e = a.basis(i);
            for u in 0..c {
                let img = a.mul(&e, d.get(t, u));
                for (k, &v) in img.iter().enumerate() {
                    m.set(u * n + k, t * n + i, v);
                }
            }
        }
    }
    m.nullspace().columns().into_iter().map(|v| v.chunks(n).map(|x| x.to_vec()).collect()).collect()
}

/// A random bounded complex of free modules of ranks `1..=max_rank` in
/// degrees `0..=len`, with `d^2 = 0` by construction.
pub fn random_free_complex<R: Rng>(a: &Arc<Algebra>, rng: &mut R, len: usize, max_rank: usize) -> Result<ProjComplex> {
    let one = a.unit().to_vec();
    let ranks: Vec<usize> = (0..=len).map(|_| rng.gen_range(1..=max_rank)).collect();
    let mut diffs: Vec<ElemMatrix> = Vec::new();
    for k in 1..=len {
        let (r, c) = (ranks[k], ranks[k - 1]);
        let d = if k == 1 {
            let rows = (0..r).map(|_| (0..c).map(|_| random_element(a, rng)).collect()).collect();
            ElemMatrix::from_rows(rows, c)?
        } else {
            let ker = left_kernel(a, &diffs[k - 2]);
            let rows = (0..r)
                .map(|_| {
                    let mut row = vec![a.zero(); c];
                    for v in &ker {
                        let s = rng.gen_range(0..a.p());
                        if s != 0 {
                            for (x, y) in row.iter_mut().zip(v) {
                                *x = a.add(x, &a.scale(y, s));
                            }
                        }
                    }
                    row
                })
                .collect();
            ElemMatrix::from_rows(rows, c)?
        };
        diffs.push(d);
    }
    let terms = ranks.iter().map(|&r| vec![one.clone(); r]).collect();
    ProjComplex::new(a.clone(), terms, diffs)
}

/// Cone of the identity of `c`, with `d(x, y) = (x d + y, -y d)`.
pub fn identity_cone(c: &ProjComplex) -> Result<ProjComplex> {
    let a = c.algebra().clone();
    let one = a.unit().to_vec();
    let len = c.len();
    let rank = |k: i64| if k < 0 || k as usize >= len { 0 } else { c.rank(k as usize) };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in 0..=len as i64 {
        terms.push(vec![one.clone(); rank(n) + rank(n - 1)]);
        if n == 0 {
            continue;
        }
        let (r0, r1) = (rank(n), rank(n - 1));
        let (c0, c1) = (rank(n - 1), rank(n - 2));
        let mut d = ElemMatrix::zeros(&a, r0 + r1, c0 + c1);
        if r0 > 0 && c0 > 0 {
            let dn = c.d(n as usize);
            for i in 0..r0 {
                for j in 0..c0 {
                    d.set(i, j, dn.get(i, j).to_vec());
                }
            }
        }
        for i in 0..r1 {
            d.set(r0 + i, i, one.clone());
        }
        if r1 > 0 && c1 > 0 {
            let dm = c.d(n as usize - 1);
            for i in 0..r1 {
                for j in 0..c1 {
                    d.set(r0 + i, c0 + j, a.scale(dm.get(i, j), a.p() - 1));
                }
            }
        }
        diffs.push(d);
    }
    ProjComplex::new(a, terms, diffs)
}

/// A random invertible matrix over `A` of the given rank: a product of
/// elementary row operations and unit scalings.
fn random_automorphism<R: Rng>(a: &Algebra, rng: &mut R, r: usize) -> ElemMatrix {
    let mut u = ElemMatrix::zeros(a, r, r);
    for i in 0..r {
        u.set(i, i, a.unit().to_vec());
    }
    for _ in 0..2 * r {
        let i = rng.gen_range(0..r);
        let j = rng.gen_range(0..r);
        if i == j {
            continue;
        }
        let x = random_element(a, rng);
        let mut e = ElemMatrix::zeros(a, r, r);
        for k in 0..r {
            e.set(k, k, a.unit().to_vec());
        }
        e.set(i, j, x);
        u = e.mul(a, &u).expect("square");
    }
    u
}

/// Conjugate the differentials of a free complex by random automorphisms
/// of its terms; the result is isomorphic to the input.
pub fn disguise<R: Rng>(c: &ProjComplex, rng: &mut R) -> Result<ProjComplex> {
    let a = c.algebra().clone();
    let mut us = Vec::new();
    let mut inv = Vec::new();
    for k in 0..c.len() {
        let r = c.rank(k);
        let u = random_automorphism(&a, rng, r);
        let ui = invert(&a, &u)?;
        us.push(u);
        inv.push(ui);
    }
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in 0..c.len() {
        terms.push(c.term(k).to_vec());
        if k > 0 {
            // new basis x -> x U_k, so d' = U_k d U_{k-1}^{-1}
            diffs.push(us[k].mul(&a, c.d(k))?.mul(&a, &inv[k - 1])?);
        }
    }
    ProjComplex::new(a, terms, diffs)
}

/// Inverse of an element matrix, via the regular representation.
fn invert(a: &Algebra, u: &ElemMatrix) -> Result<ElemMatrix> {
    let n = a.dim();
    let r = u.rows();
    let mut m = FpMatrix::zeros(a.p(), r * n, r * n);
    // column (t, i) is the image of e_i in slot t under x -> x U
    for t in 0..r {
        for i in 0..n {
            let e = a.basis(i);
            for s in 0..r {
                let img = a.mul(&e, u.get(t, s));
                for (k, &v) in img.iter().enumerate() {
                    m.set(s * n + k, t * n + i, v);
                }
            }
        }
    }
    let mi = m.inverse().ok_or_else(|| Error::Internal("automorphism is not invertible".into()))?;
    let mut out = ElemMatrix::zeros(a, r, r);
    // row t of the inverse is the preimage of the unit in slot t
    for t in 0..r {
        let mut v = vec![0u32; r * n];
        v[t * n..(t + 1) * n].copy_from_slice(a.unit());
        let x = mi.mul_vec(&v);
        for s in 0..r {
            out.set(t, s, x[s * n..(s + 1) * n].to_vec());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group(name: &str, p: u32) -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::from_name(name).unwrap(), p).unwrap())
    }

    #[test]
    fn tor_c3_is_one_everywhere() {
        let a = group("C3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let kr = Bimodule::trivial_right(a.clone()).unwrap();
        let caps = Caps::default();
        assert_eq!(tor_dims(&kr, &k, 8, TorMethod::Bar, &caps).unwrap(), vec![1; 9]);
        assert_eq!(tor_dims(&kr, &k, 8, TorMethod::Minimal, &caps).unwrap(), vec![1; 9]);
        assert_eq!(tor_dims_left_resolved(&kr, &k, 8).unwrap(), vec![1; 9]);
        assert_eq!(tor(&kr, &k, 4).unwrap(), 1);
    }

    #[test]
    fn tor_with_free_module_vanishes_above_zero() {
        let a = group("S3", 3);
        let kr = Bimodule::trivial_right(a.clone()).unwrap();
        let reg = Module::regular(a.clone());
        let caps = Caps::default();
        assert_eq!(tor_dims(&kr, &reg, 4, TorMethod::Minimal, &caps).unwrap(), vec![1, 0, 0, 0, 0]);
        assert_eq!(tor_dims(&kr, &reg, 4, TorMethod::Bar, &caps).unwrap(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn tor_s3_trivial() {
        // H_*(S_3, F_3) has ranks 1, 0, 0, 1, 1, 0, 0, 1, 1.
        let a = group("S3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let kr = Bimodule::trivial_right(a.clone()).unwrap();
        let caps = Caps::default();
        let want = vec![1, 0, 0, 1, 1, 0, 0, 1, 1];
        assert_eq!(tor_dims(&kr, &k, 8, TorMethod::Minimal, &caps).unwrap(), want);
        assert_eq!(tor_dims(&kr, &k, 8, TorMethod::Bar, &caps).unwrap(), want);
    }

    #[test]
    fn identity_is_homological_epi() {
        let a = group("C3", 3);
        let r = is_homological_epi(&AlgebraMap::identity(a), 5).unwrap();
        assert_eq!(r.verdict, EpiVerdict::YesUpTo { up_to: 5 });
    }

    #[test]
    fn augmentation_is_not_homological_epi() {
        let a = group("C3", 3);
        let r = is_homological_epi(&AlgebraMap::augmentation(a).unwrap(), 5).unwrap();
        assert_eq!(r.verdict, EpiVerdict::NoAtDegree { degree: 1 });
    }

    #[test]
    fn projection_from_product_is_homological_epi() {
        let a = group("C3", 3);
        let aa = Arc::new(a.product(&a).unwrap());
        let n = a.dim();
        let images: Vec<Vec<u32>> = (0..2 * n).map(|i| if i < n { a.basis(i) } else { a.zero() }).collect();
        let f = AlgebraMap::from_images(aa, a, &images).unwrap();
        let r = is_homological_epi(&f, 4).unwrap();
        assert!(r.verdict.is_yes());
    }

    #[test]
    fn nakayama_on_cone_and_free() {
        let a = group("C3", 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_free_complex(&a, &mut rng, 2, 2).unwrap();
        let z = disguise(&identity_cone(&c).unwrap(), &mut rng).unwrap();
        assert_eq!(nakayama_check(&a, &z).unwrap(), NakayamaVerdict::Holds);
        let single = ProjComplex::new(a.clone(), vec![vec![a.unit().to_vec()]], Vec::new()).unwrap();
        assert_eq!(nakayama_check(&a, &single).unwrap(), NakayamaVerdict::HypothesisEmpty { degree: 0 });
    }

    #[test]
    fn nakayama_needs_local() {
        let a = group("S3", 3);
        let single = ProjComplex::new(a.clone(), vec![vec![a.unit().to_vec()]], Vec::new()).unwrap();
        assert!(matches!(nakayama_check(&a, &single), Err(Error::Precondition(_))));
    }
}
