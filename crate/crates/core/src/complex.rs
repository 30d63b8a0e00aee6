//! Bounded chain complexes of F_p-spaces carrying a left module action, chain
//! maps, homology, cones and truncation with trusted-degree bookkeeping.
//!
//! Grading is homological: `d_n` maps degree `n` to degree `n - 1`. Chain
//! maps commute with differentials without signs, `d f = f d`, and a map of
//! shift `s` sends source degree `k` to target degree `k - s`. Cones use the
//! block differential `[[d, f], [0, -d]]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{same, Algebra};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Subspace};
use crate::module::Module;

/// Trust bound of a complex whose homology is exact in every degree.
pub const UNBOUNDED: i64 = i64::MAX;

/// Per-degree action matrices, indexed `[degree][basis element]`.
pub type Action = Vec<Vec<FpMatrix>>;

#[derive(Clone, Debug)]
pub struct AComplex {
    algebra: Arc<Algebra>,
    min_deg: i64,
    dims: Vec<usize>,
    /// `diffs[k]` is `d_{min_deg + k}`; `diffs[0]` has zero rows.
    diffs: Vec<FpMatrix>,
    left: Option<Action>,
    right: Option<(Arc<Algebra>, Action)>,
    trusted_to: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub degree: i64,
    pub dim: usize,
    /// Cycles representing a basis of homology, as columns.
    pub basis: FpMatrix,
}

impl AComplex {
    /// Complex with differentials `diffs[k] = d_{min_deg + k}`; `d^2 = 0` and
    /// the module-map condition are verified.
    pub fn new(algebra: Arc<Algebra>, min_deg: i64, diffs: Vec<FpMatrix>, left: Option<Action>) -> Result<Self> {
        let c = Self::new_unchecked(algebra, min_deg, diffs, left)?;
        c.verify()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        algebra: Arc<Algebra>,
        min_deg: i64,
        diffs: Vec<FpMatrix>,
        left: Option<Action>,
    ) -> Result<Self> {
        let p = algebra.p();
        let dims: Vec<usize> = diffs.iter().map(|d| d.cols()).collect();
        for (k, d) in diffs.iter().enumerate() {
            let below = if k == 0 { 0 } else { dims[k - 1] };
            if d.rows() != below || d.p() != p {
                return Err(Error::DimensionMismatch { expected: below, found: d.rows() });
            }
        }
        if let Some(act) = &left {
            if act.len() != dims.len() {
                return Err(Error::DimensionMismatch { expected: dims.len(), found: act.len() });
            }
            for (k, mats) in act.iter().enumerate() {
                if mats.len() != algebra.dim() || mats.iter().any(|m| m.rows() != dims[k] || m.cols() != dims[k]) {
                    return Err(Error::InvalidInput(format!("action matrices in degree {} have the wrong shape", min_deg + k as i64)));
                }
            }
        }
        Ok(AComplex { algebra, min_deg, dims, diffs, left, right: None, trusted_to: UNBOUNDED })
    }

    /// Complex of plain vector spaces over F_p.
    pub fn over_field(p: u32, min_deg: i64, diffs: Vec<FpMatrix>) -> Result<Self> {
        Self::new(Arc::new(Algebra::ground(p)), min_deg, diffs, None)
    }

    /// A module placed in a single degree.
    pub fn concentrated(m: &Module, degree: i64) -> Self {
        let d = FpMatrix::zeros(m.p(), 0, m.dim());
        AComplex {
            algebra: m.algebra().clone(),
            min_deg: degree,
            dims: vec![m.dim()],
            diffs: vec![d],
            left: Some(vec![m.action().to_vec()]),
            right: None,
            trusted_to: UNBOUNDED,
        }
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        AComplex { algebra, min_deg: 0, dims: vec![], diffs: vec![], left: Some(vec![]), right: None, trusted_to: UNBOUNDED }
    }

    pub fn with_trusted(mut self, trusted_to: i64) -> Self {
        self.trusted_to = self.trusted_to.min(trusted_to);
        self
    }

    /// Attach a right action (checked against the differentials).
    pub fn with_right(mut self, algebra: Arc<Algebra>, action: Action) -> Result<Self> {
        if action.len() != self.dims.len() {
            return Err(Error::DimensionMismatch { expected: self.dims.len(), found: action.len() });
        }
        self.right = Some((algebra, action));
        self.verify()?;
        Ok(self)
    }

    /// `d^2 = 0`, and each differential commutes with the actions of the
    /// algebra generators.
    pub fn verify(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let sq = self.diffs[k - 1].mul(&self.diffs[k]);
            if !sq.is_zero() {
                return Err(Error::Internal(format!("d^2 != 0 at degree {}", self.min_deg + k as i64)));
            }
        }
        if let Some(act) = &self.left {
            for g in self.algebra.generator_indices() {
                for k in 1..self.diffs.len() {
                    let lhs = self.diffs[k].mul(&act[k][g]);
                    let rhs = act[k - 1][g].mul(&self.diffs[k]);
                    if lhs != rhs {
                        return Err(Error::Internal(format!(
                            "differential in degree {} is not a left module map",
                            self.min_deg + k as i64
                        )));
                    }
                }
            }
        }
        if let Some((b, act)) = &self.right {
            for g in b.generator_indices() {
                for k in 1..self.diffs.len() {
                    if self.diffs[k].mul(&act[k][g]) != act[k - 1][g].mul(&self.diffs[k]) {
                        return Err(Error::Internal(format!(
                            "differential in degree {} is not a right module map",
                            self.min_deg + k as i64
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Top degree; below `min_deg` for the zero complex.
    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.dims.len() as i64 - 1
    }

    pub fn trusted_to(&self) -> i64 {
        self.trusted_to
    }

    pub fn has_left_action(&self) -> bool {
        self.left.is_some()
    }

    pub fn left_action(&self, n: i64) -> Option<&[FpMatrix]> {
        let k = self.index(n)?;
        self.left.as_ref().map(|a| a[k].as_slice())
    }

    pub fn right_action(&self, n: i64) -> Option<&[FpMatrix]> {
        let k = self.index(n)?;
        self.right.as_ref().map(|(_, a)| a[k].as_slice())
    }

    pub fn right_algebra(&self) -> Option<&Arc<Algebra>> {
        self.right.as_ref().map(|(b, _)| b)
    }

    fn index(&self, n: i64) -> Option<usize> {
        if n < self.min_deg || n > self.max_deg() {
            None
        } else {
            Some((n - self.min_deg) as usize)
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.index(n).map_or(0, |k| self.dims[k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_n`, as a `dim(n-1) x dim(n)` matrix (zero outside the range).
    pub fn d(&self, n: i64) -> FpMatrix {
        match self.index(n) {
            Some(k) => self.diffs[k].clone(),
            None => FpMatrix::zeros(self.p(), self.dim(n - 1), self.dim(n)),
        }
    }

    pub(crate) fn d_ref(&self, n: i64) -> Option<&FpMatrix> {
        self.index(n).map(|k| &self.diffs[k])
    }

    fn check_trusted(&self, n: i64) -> Result<()> {
        if n > self.trusted_to {
            Err(Error::UntrustedDegree { degree: n, trusted_to: self.trusted_to })
        } else {
            Ok(())
        }
    }

    fn rank_d(&self, n: i64) -> usize {
        self.d_ref(n).map_or(0, |d| if d.rows() == 0 || d.cols() == 0 { 0 } else { d.rank() })
    }

    /// `dim H_n = dim ker d_n - rank d_{n+1}`.
    pub fn homology_dim(&self, n: i64) -> Result<usize> {
        self.check_trusted(n)?;
        let c = self.dim(n);
        if c == 0 {
            return Ok(0);
        }
        Ok(c - self.rank_d(n) - self.rank_d(n + 1))
    }

    /// Homology with canonical representatives: the rref basis of the cycles,
    /// keeping the vectors independent modulo the boundaries.
    pub fn homology(&self, n: i64) -> Result<Homology> {
        self.check_trusted(n)?;
        let p = self.p();
        let c = self.dim(n);
        if c == 0 {
            return Ok(Homology { degree: n, dim: 0, basis: FpMatrix::zeros(p, 0, 0) });
        }
        let cycles = Subspace::from_columns(&self.d(n).nullspace());
        let boundaries = Subspace::from_columns(&self.d(n + 1));
        let cands = cycles.vectors();
        let picked = boundaries.extend_indices(&cands);
        let cols: Vec<Vec<u32>> = picked.iter().map(|&i| cands[i].clone()).collect();
        Ok(Homology { degree: n, dim: cols.len(), basis: FpMatrix::from_columns(p, c, &cols) })
    }

    /// Homology dimensions for degrees `lo..=hi`.
    pub fn homology_dims(&self, lo: i64, hi: i64) -> Result<Vec<usize>> {
        (lo..=hi).map(|n| self.homology_dim(n)).collect()
    }

    /// Cycles of degree `n` as a subspace.
    pub fn cycles(&self, n: i64) -> Subspace {
        Subspace::from_columns(&self.d(n).nullspace())
    }

    pub fn boundaries(&self, n: i64) -> Subspace {
        Subspace::from_columns(&self.d(n + 1))
    }

    /// `Σ (-1)^n dim C_n`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if (self.min_deg + k as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Keep degrees `<= n`; homology is then trusted only below `n`.
    pub fn truncate(&self, n: i64) -> AComplex {
        if n >= self.max_deg() {
            return self.clone();
        }
        let keep = (n - self.min_deg + 1).max(0) as usize;
        let mut out = self.clone();
        out.dims.truncate(keep);
        out.diffs.truncate(keep);
        if let Some(a) = out.left.as_mut() {
            a.truncate(keep);
        }
        if let Some((_, a)) = out.right.as_mut() {
            a.truncate(keep);
        }
        out.trusted_to = self.trusted_to.min(n - 1);
        out
    }

    /// Same spaces and differentials with every degree raised by `offset`.
    pub fn regrade(&self, offset: i64) -> AComplex {
        let mut out = self.clone();
        out.min_deg += offset;
        if out.trusted_to != UNBOUNDED {
            out.trusted_to += offset;
        }
        out
    }

    /// Forget the module structure.
    pub fn underlying(&self) -> AComplex {
        AComplex {
            algebra: Arc::new(Algebra::ground(self.p())),
            min_deg: self.min_deg,
            dims: self.dims.clone(),
            diffs: self.diffs.clone(),
            left: None,
            right: None,
            trusted_to: self.trusted_to,
        }
    }
}

/// A degreewise linear map of complexes; component `k` maps source degree
/// `k` to target degree `k - shift`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Arc<AComplex>,
    pub target: Arc<AComplex>,
    pub shift: i64,
    components: BTreeMap<i64, FpMatrix>,
}

impl ChainMap {
    /// Map with the given components (missing ones are zero); commutation
    /// with the differentials is verified.
    pub fn new(source: Arc<AComplex>, target: Arc<AComplex>, shift: i64, components: BTreeMap<i64, FpMatrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, shift, components)?;
        f.verify()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<AComplex>,
        target: Arc<AComplex>,
        shift: i64,
        components: BTreeMap<i64, FpMatrix>,
    ) -> Result<Self> {
        if source.p() != target.p() {
            return Err(Error::InvalidInput("complexes over different fields".into()));
        }
        for (&k, m) in &components {
            if m.cols() != source.dim(k) || m.rows() != target.dim(k - shift) {
                return Err(Error::InvalidInput(format!("chain map component {k} has the wrong shape")));
            }
        }
        Ok(ChainMap { source, target, shift, components })
    }

    pub fn identity(c: Arc<AComplex>) -> Self {
        let components = (c.min_deg()..=c.max_deg()).map(|n| (n, FpMatrix::identity(c.p(), c.dim(n)))).collect();
        ChainMap { source: c.clone(), target: c, shift: 0, components }
    }

    pub fn zero(source: Arc<AComplex>, target: Arc<AComplex>, shift: i64) -> Self {
        ChainMap { source, target, shift, components: BTreeMap::new() }
    }

    /// Component at source degree `k`.
    pub fn component(&self, k: i64) -> FpMatrix {
        self.components
            .get(&k)
            .cloned()
            .unwrap_or_else(|| FpMatrix::zeros(self.source.p(), self.target.dim(k - self.shift), self.source.dim(k)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    /// `d f_k = f_{k-1} d` wherever both sides are defined. Above the top of
    /// a truncated target nothing is checked.
    pub fn verify(&self) -> Result<()> {
        let lo = self.source.min_deg();
        let mut hi = self.source.max_deg();
        if self.target.trusted_to() != UNBOUNDED {
            hi = hi.min(self.target.max_deg() + self.shift);
        }
        for k in lo..=hi {
            let lhs = self.target.d(k - self.shift).mul(&self.component(k));
            let rhs = self.component(k - 1).mul(&self.source.d(k));
            if lhs != rhs {
                return Err(Error::Internal(format!("chain map does not commute with d at degree {k}")));
            }
        }
        Ok(())
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &ChainMap) -> Result<ChainMap> {
        if !Arc::ptr_eq(&self.target, &after.source) && !same_shape(&self.target, &after.source) {
            return Err(Error::InvalidInput("chain maps are not composable".into()));
        }
        let mut components = BTreeMap::new();
        for (&k, f) in &self.components {
            let g = after.component(k - self.shift);
            components.insert(k, g.mul(f));
        }
        Ok(ChainMap {
            source: self.source.clone(),
            target: after.target.clone(),
            shift: self.shift + after.shift,
            components,
        })
    }

    /// Induced map `H_k(source) -> H_{k-shift}(target)`, in the canonical
    /// homology bases.
    pub fn on_homology(&self, k: i64) -> Result<FpMatrix> {
        let hs = self.source.homology(k)?;
        let ht = self.target.homology(k - self.shift)?;
        let p = self.source.p();
        let n = self.target.dim(k - self.shift);
        let bounds = self.target.boundaries(k - self.shift);
        let mut basis_cols = bounds.vectors();
        basis_cols.extend(ht.basis.columns());
        let m = FpMatrix::from_columns(p, n, &basis_cols);
        let img = self.component(k).mul(&hs.basis);
        let sol = m
            .solve_matrix(&img)?
            .ok_or_else(|| Error::Internal("image of a cycle is not a cycle".into()))?;
        Ok(sol.block(bounds.dim(), 0, ht.dim, hs.dim))
    }
}

fn same_shape(a: &AComplex, b: &AComplex) -> bool {
    a.min_deg == b.min_deg && a.dims == b.dims && a.diffs == b.diffs
}

/// Cone of a shift-zero map: `target_n ⊕ source_{n-1}` with `[[d, f], [0, -d]]`.
pub fn cone(f: &ChainMap) -> Result<AComplex> {
    if f.shift != 0 {
        return Err(Error::InvalidInput("cone needs a map of shift zero".into()));
    }
    let (s, t) = (&f.source, &f.target);
    let p = s.p();
    let keep_action = s.has_left_action() && t.has_left_action() && same(s.algebra(), t.algebra());
    let empty_s = s.dims.is_empty();
    let empty_t = t.dims.is_empty();
    let lo = match (empty_s, empty_t) {
        (true, true) => return Ok(AComplex::zero(t.algebra().clone())),
        (true, false) => t.min_deg(),
        (false, true) => s.min_deg() + 1,
        (false, false) => t.min_deg().min(s.min_deg() + 1),
    };
    let hi = t.max_deg().max(s.max_deg() + 1);
    let mut diffs = Vec::new();
    let mut left: Action = Vec::new();
    for n in lo..=hi {
        let (tn, sn) = (t.dim(n), s.dim(n - 1));
        let (tb, sb) = (t.dim(n - 1), s.dim(n - 2));
        let mut d = FpMatrix::zeros(p, if n == lo { 0 } else { tb + sb }, tn + sn);
        if n > lo {
            d.set_block(0, 0, &t.d(n));
            d.set_block(0, tn, &f.component(n - 1));
            d.set_block(tb, tn, &s.d(n - 1).neg());
        }
        diffs.push(d);
        if keep_action {
            let alg = t.algebra();
            let mats = (0..alg.dim())
                .map(|i| {
                    let mut m = FpMatrix::zeros(p, tn + sn, tn + sn);
                    if let Some(a) = t.left_action(n) {
                        m.set_block(0, 0, &a[i]);
                    }
                    if let Some(a) = s.left_action(n - 1) {
                        m.set_block(tn, tn, &a[i]);
                    }
                    m
                })
                .collect();
            left.push(mats);
        }
    }
    let algebra = if keep_action { t.algebra().clone() } else { Arc::new(Algebra::ground(p)) };
    let mut c = AComplex::new_unchecked(algebra, lo, diffs, keep_action.then_some(left))?;
    c.verify()?;
    let ts = if s.trusted_to == UNBOUNDED { UNBOUNDED } else { s.trusted_to + 1 };
    c.trusted_to = t.trusted_to.min(ts);
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QuasiIso {
    Yes { up_to: i64 },
    No { degree: i64 },
    UntrustedAbove { trusted_to: i64 },
}

/// Does `f` induce isomorphisms on homology through degree `up_to`? Decided
/// by acyclicity of the cone in degrees `<= up_to`.
pub fn is_quasi_iso(f: &ChainMap, up_to: i64) -> Result<QuasiIso> {
    let c = cone(f)?;
    if c.trusted_to() < up_to {
        return Ok(QuasiIso::UntrustedAbove { trusted_to: c.trusted_to() });
    }
    for n in c.min_deg()..=up_to.min(c.max_deg()) {
        if c.homology_dim(n)? != 0 {
            return Ok(QuasiIso::No { degree: n });
        }
    }
    Ok(QuasiIso::Yes { up_to })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[Vec<i64>]) -> FpMatrix {
        FpMatrix::from_rows(p, rows)
    }

    fn contractible() -> AComplex {
        // 0 -> F_3 --id--> F_3 -> 0 in degrees 1, 0.
        AComplex::over_field(3, 0, vec![FpMatrix::zeros(3, 0, 1), m(3, &[vec![1]])]).unwrap()
    }

    #[test]
    fn contractible_has_no_homology() {
        let c = contractible();
        assert_eq!(c.homology_dims(-1, 2).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn zero_differentials_give_the_spaces() {
        let c = AComplex::over_field(5, 0, vec![FpMatrix::zeros(5, 0, 2), FpMatrix::zeros(5, 2, 3)]).unwrap();
        assert_eq!(c.homology_dims(0, 1).unwrap(), vec![2, 3]);
        assert_eq!(c.euler_characteristic(), -1);
    }

    #[test]
    fn d_squared_nonzero_rejected() {
        let bad = AComplex::over_field(
            3,
            0,
            vec![FpMatrix::zeros(3, 0, 1), m(3, &[vec![1]]), m(3, &[vec![1]])],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_of_zero_splits() {
        let c = Arc::new(
            AComplex::over_field(3, 0, vec![FpMatrix::zeros(3, 0, 2), m(3, &[vec![1, 0], vec![0, 0]])]).unwrap(),
        );
        let id = ChainMap::identity(c.clone());
        let k = cone(&id).unwrap();
        assert!(k.homology_dims(-1, 3).unwrap().iter().all(|&d| d == 0));
        assert_eq!(is_quasi_iso(&id, 5).unwrap(), QuasiIso::Yes { up_to: 5 });
        let z = ChainMap::zero(c.clone(), c.clone(), 0);
        let k = cone(&z).unwrap();
        for n in 0..3 {
            let expect = c.homology_dim(n).unwrap() + c.homology_dim(n - 1).unwrap();
            assert_eq!(k.homology_dim(n).unwrap(), expect);
        }
        assert_eq!(is_quasi_iso(&z, 5).unwrap(), QuasiIso::No { degree: 0 });
    }

    #[test]
    fn truncation_tracks_trust() {
        let c = AComplex::over_field(
            3,
            0,
            vec![FpMatrix::zeros(3, 0, 1), m(3, &[vec![0]]), m(3, &[vec![1]])],
        )
        .unwrap();
        assert_eq!(c.homology_dim(1).unwrap(), 0);
        let t = c.truncate(1);
        assert_eq!(t.trusted_to(), 0);
        assert!(matches!(t.homology_dim(1), Err(Error::UntrustedDegree { .. })));
        assert_eq!(c.truncate(5).trusted_to(), UNBOUNDED);
        assert_eq!(c.truncate(0).dims(), &[1]);
    }

    #[test]
    fn induced_map_on_homology() {
        let c = Arc::new(AComplex::over_field(3, 0, vec![FpMatrix::zeros(3, 0, 2)]).unwrap());
        let mut comps = BTreeMap::new();
        comps.insert(0, m(3, &[vec![0, 1], vec![1, 0]]));
        let f = ChainMap::new(c.clone(), c, 0, comps).unwrap();
        assert_eq!(f.on_homology(0).unwrap(), m(3, &[vec![0, 1], vec![1, 0]]));
    }
}
