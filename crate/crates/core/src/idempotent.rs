//! The primitive idempotent of the trivial block, its certificates, and the
//! corner algebras and bimodules cut out by an idempotent.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Subspace};
use crate::module::Bimodule;
use crate::structure;

/// Every check run on a candidate idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentCertificate {
    pub squares_to_itself: bool,
    pub augmentation_is_one: bool,
    pub kills_nontrivial_simples: bool,
    /// `eAe` is local with residue field F_p.
    pub primitive: bool,
    pub corner_dim: usize,
    pub corner_radical_dim: usize,
    /// Rank of right multiplication by `e`, i.e. `dim Ae`.
    pub rank_ae: usize,
    pub nontrivial_simples: usize,
}

impl IdempotentCertificate {
    pub fn passed(&self) -> bool {
        self.squares_to_itself && self.augmentation_is_one && self.kills_nontrivial_simples && self.primitive
    }
}

#[derive(Clone, Debug)]
pub struct Idempotent {
    algebra: Arc<Algebra>,
    element: Vec<u32>,
    certificate: IdempotentCertificate,
}

impl Idempotent {
    /// Run all certificates on `element`; the result records whether they passed.
    pub fn check(a: &Arc<Algebra>, element: Vec<u32>) -> Result<Self> {
        if element.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: element.len() });
        }
        let eps = a.augmentation().ok_or(Error::NoAugmentation)?;
        let st = a.structure()?;
        let squares = a.is_idempotent(&element);
        let aug = eps.iter().zip(&element).fold(0, |s, (&x, &y)| crate::fp::add(s, crate::fp::mul(x, y, a.p()), a.p()));
        let nontrivial: Vec<_> = st.blocks.iter().filter(|b| !b.is_trivial).collect();
        let kills = nontrivial.iter().all(|b| b.simple.act(&element).is_zero());
        let (corner_dim, corner_radical_dim, primitive) = if squares && !crate::fp::is_zero_vec(&element) {
            let c = Corner::new(a, &element);
            let rad = structure::jacobson_radical(&c.algebra)?;
            (c.algebra.dim(), rad.dim(), c.algebra.dim() == rad.dim() + 1)
        } else {
            (0, 0, false)
        };
        let certificate = IdempotentCertificate {
            squares_to_itself: squares,
            augmentation_is_one: aug == 1 % a.p(),
            kills_nontrivial_simples: kills,
            primitive,
            corner_dim,
            corner_radical_dim,
            rank_ae: a.right_matrix(&element).rank(),
            nontrivial_simples: nontrivial.len(),
        };
        Ok(Idempotent { algebra: a.clone(), element, certificate })
    }

    /// Like [`Idempotent::check`], but fails unless every certificate passes.
    pub fn verified(a: &Arc<Algebra>, element: Vec<u32>) -> Result<Self> {
        let e = Self::check(a, element)?;
        if !e.is_verified() {
            return Err(Error::InvalidInput(format!(
                "{} is not the trivial-block primitive idempotent: {:?}",
                a.format_element(&e.element),
                e.certificate
            )));
        }
        Ok(e)
    }

    /// The unit, accepted without the trivial-block checks; used for `e = 1`.
    pub fn unit(a: &Arc<Algebra>) -> Self {
        let certificate = IdempotentCertificate {
            squares_to_itself: true,
            augmentation_is_one: a.augmentation().is_some(),
            kills_nontrivial_simples: false,
            primitive: false,
            corner_dim: a.dim(),
            corner_radical_dim: 0,
            rank_ae: a.dim(),
            nontrivial_simples: 0,
        };
        Idempotent { algebra: a.clone(), element: a.unit().to_vec(), certificate }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn element(&self) -> &[u32] {
        &self.element
    }

    pub fn complement(&self) -> Vec<u32> {
        self.algebra.sub(self.algebra.unit(), &self.element)
    }

    pub fn certificate(&self) -> &IdempotentCertificate {
        &self.certificate
    }

    pub fn is_verified(&self) -> bool {
        self.certificate.passed() || self.is_unit()
    }

    pub fn is_unit(&self) -> bool {
        self.element == self.algebra.unit()
    }

    /// `u e u^{-1}` as a new checked idempotent.
    pub fn conjugate(&self, u: &[u32]) -> Result<Self> {
        let a = &self.algebra;
        let ui = a.inverse(u).ok_or_else(|| Error::InvalidInput("conjugating element is not a unit".into()))?;
        let x = a.mul(&a.mul(u, &self.element), &ui);
        if a.is_idempotent(&x) && x == a.unit() {
            return Ok(Self::unit(a));
        }
        Self::check(a, x)
    }
}

/// The primitive idempotent acting as the identity on the trivial module and
/// as zero on every other simple module.
pub fn trivial_idempotent(a: &Arc<Algebra>) -> Result<Idempotent> {
    if a.augmentation().is_none() {
        return Err(Error::NoAugmentation);
    }
    let st = a.structure()?;
    let block = st
        .trivial_block()
        .ok_or_else(|| Error::Internal("augmentation does not define a simple module".into()))?;
    if st.blocks.len() == 1 {
        return Ok(Idempotent::unit(a));
    }
    Idempotent::verified(a, block.idempotent.clone())
}

/// A corner `x A x` with its own unit `x`, and its inclusion into `A`.
#[derive(Clone, Debug)]
pub struct Corner {
    pub algebra: Arc<Algebra>,
    pub space: Subspace,
    /// Columns are the corner basis written in `A`.
    pub embedding: FpMatrix,
}

impl Corner {
    pub fn new(a: &Algebra, x: &[u32]) -> Self {
        let space = a.corner_space(x, x);
        let name = format!("corner of {}", a.name());
        let mut alg = a.subalgebra(&space, x, name);
        if let Some(eps) = a.augmentation() {
            let restricted: Vec<u32> = space
                .vectors()
                .iter()
                .map(|v| v.iter().zip(eps).fold(0, |s, (&c, &w)| crate::fp::add(s, crate::fp::mul(c, w, a.p()), a.p())))
                .collect();
            if let Ok(aug) = alg.clone().with_augmentation(restricted) {
                alg = aug;
            }
        }
        let embedding = space.basis().clone();
        Corner { algebra: Arc::new(alg), space, embedding }
    }

    /// Element of `A` for corner coordinates.
    pub fn include(&self, c: &[u32]) -> Vec<u32> {
        self.embedding.mul_vec(c)
    }
}

/// Restrict a linear endomorphism of the ambient space to an invariant subspace.
pub(crate) fn restrict_to(s: &Subspace, m: &FpMatrix) -> FpMatrix {
    m.mul(s.basis()).select_rows(s.pivots())
}

/// Corners and corner bimodules of `A` at `e` and `1 - e`.
#[derive(Clone, Debug)]
pub struct CornerData {
    pub e: Vec<u32>,
    pub f: Vec<u32>,
    pub ee: Corner,
    pub ff: Corner,
    /// `Ae` as an `(A, eAe)`-bimodule.
    pub ae: Bimodule,
    /// `eA` as an `(eAe, A)`-bimodule.
    pub ea: Bimodule,
    /// `A(1-e)` as an `(A, (1-e)A(1-e))`-bimodule.
    pub af: Bimodule,
    /// `(1-e)A` as a `((1-e)A(1-e), A)`-bimodule.
    pub fa: Bimodule,
}

fn left_corner_bimodule(a: &Arc<Algebra>, x: &[u32], corner: &Corner) -> Result<Bimodule> {
    let s = a.left_ideal(x);
    let left = a.left_regular().iter().map(|m| restrict_to(&s, m)).collect();
    let right = corner.embedding.columns().iter().map(|c| restrict_to(&s, &a.right_matrix(c))).collect();
    Bimodule::new(a.clone(), corner.algebra.clone(), s.dim(), left, right)
}

fn right_corner_bimodule(a: &Arc<Algebra>, x: &[u32], corner: &Corner) -> Result<Bimodule> {
    let s = Subspace::from_columns(&a.left_matrix(x));
    let left = corner.embedding.columns().iter().map(|c| restrict_to(&s, &a.left_matrix(c))).collect();
    let right = a.right_regular().iter().map(|m| restrict_to(&s, m)).collect();
    Bimodule::new(corner.algebra.clone(), a.clone(), s.dim(), left, right)
}

pub fn corner_data(a: &Arc<Algebra>, e: &Idempotent) -> Result<CornerData> {
    if !e.is_verified() || !a.is_idempotent(e.element()) {
        return Err(Error::InvalidInput("corner data needs a verified idempotent".into()));
    }
    let ev = e.element().to_vec();
    let fv = e.complement();
    let ee = Corner::new(a, &ev);
    let ff = Corner::new(a, &fv);
    let ae = left_corner_bimodule(a, &ev, &ee)?;
    let ea = right_corner_bimodule(a, &ev, &ee)?;
    let af = left_corner_bimodule(a, &fv, &ff)?;
    let fa = right_corner_bimodule(a, &fv, &ff)?;
    Ok(CornerData { e: ev, f: fv, ee, ff, ae, ea, af, fa })
}

const CONJUGACY_ATTEMPTS: usize = 400;

/// A unit `u` with `u^{-1} e u = f`, found from isomorphisms `Ae ≅ Af` and
/// `A(1-e) ≅ A(1-f)` given by right multiplication.
pub fn conjugating_unit(a: &Algebra, e: &[u32], f: &[u32], seed: u64) -> Option<Vec<u32>> {
    let one = a.unit();
    let e1 = a.sub(one, e);
    let f1 = a.sub(one, f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = bijective_corner_element(a, e, f, &mut rng)?;
    let y = bijective_corner_element(a, &e1, &f1, &mut rng)?;
    let u = a.add(&x, &y);
    let ui = a.inverse(&u)?;
    (a.mul(&a.mul(&ui, e), &u) == f).then_some(u)
}

/// Some `x` in `eAf` whose right multiplication maps `Ae` onto `Af`.
fn bijective_corner_element(a: &Algebra, e: &[u32], f: &[u32], rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
    let src = a.left_ideal(e);
    let dst = a.left_ideal(f);
    if src.dim() != dst.dim() {
        return None;
    }
    if src.dim() == 0 {
        return Some(a.zero());
    }
    let space = a.corner_space(e, f).vectors();
    if space.is_empty() {
        return None;
    }
    for _ in 0..CONJUGACY_ATTEMPTS {
        let mut x = a.zero();
        for v in &space {
            x = a.add(&x, &a.scale(v, rng.gen_range(0..a.p())));
        }
        if a.right_matrix(&x).mul(src.basis()).rank() == dst.dim() {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn s3() -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::symmetric3(), 3).unwrap())
    }

    #[test]
    fn listed_s3_idempotents_pass() {
        let a = s3();
        for t in ["(12)", "(13)", "(23)"] {
            let x = a.parse_element(&format!("-{t}-1")).unwrap();
            let e = Idempotent::check(&a, x).unwrap();
            assert!(e.is_verified(), "{t}: {:?}", e.certificate());
            assert_eq!(e.certificate().rank_ae, 3);
        }
    }

    #[test]
    fn computed_s3_idempotent_is_conjugate_to_listed_one() {
        let a = s3();
        let e = trivial_idempotent(&a).unwrap();
        let listed = a.parse_element("-(12)-1").unwrap();
        let u = conjugating_unit(&a, e.element(), &listed, 7).expect("conjugate");
        assert!(a.is_unit(&u));
    }

    #[test]
    fn c2_mod_3_idempotent_is_minus_one_minus_g() {
        let a = Arc::new(Algebra::group_algebra(&GroupTable::cyclic(2).unwrap(), 3).unwrap());
        let e = trivial_idempotent(&a).unwrap();
        assert_eq!(e.element(), &[2, 2]);
        // Exhaustive: the idempotents with augmentation one.
        let mut found = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                let v = vec![x, y];
                if a.is_idempotent(&v) && (x + y) % 3 == 1 {
                    found.push(v);
                }
            }
        }
        assert_eq!(found, vec![vec![1, 0], vec![2, 2]]);
    }

    #[test]
    fn p_group_gives_unit() {
        let a = Arc::new(Algebra::group_algebra(&GroupTable::cyclic(9).unwrap(), 3).unwrap());
        assert!(trivial_idempotent(&a).unwrap().is_unit());
    }

    #[test]
    fn corner_dimensions() {
        let a = s3();
        let e = Idempotent::verified(&a, a.parse_element("-(12)-1").unwrap()).unwrap();
        let c = corner_data(&a, &e).unwrap();
        assert_eq!(c.ae.dim(), 3);
        assert_eq!(c.af.dim(), 3);
        let ef = a.corner_space(&c.e, &c.f).dim();
        let fe = a.corner_space(&c.f, &c.e).dim();
        assert_eq!(c.ee.algebra.dim() + ef + fe + c.ff.algebra.dim(), 6);
        c.ee.algebra.check_associative().unwrap();
        c.ff.algebra.check_associative().unwrap();
        let unit = Idempotent::unit(&a);
        let cu = corner_data(&a, &unit).unwrap();
        assert_eq!(cu.ee.algebra.dim(), 6);
        assert_eq!(cu.af.dim(), 0);
    }

    #[test]
    fn semisimple_c2_corners_are_fields() {
        let a = Arc::new(Algebra::group_algebra(&GroupTable::cyclic(2).unwrap(), 3).unwrap());
        let e = trivial_idempotent(&a).unwrap();
        let c = corner_data(&a, &e).unwrap();
        assert_eq!(c.ee.algebra.dim(), 1);
        assert_eq!(c.ff.algebra.dim(), 1);
        assert!(a.is_central(e.element()));
    }
}
