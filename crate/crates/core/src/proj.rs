//! Complexes of projective modules `⊕_s A ε_s` for idempotents `ε_s`.
//!
//! A map `⊕_s A ε_s -> ⊕_t A ε'_t` is a matrix of algebra elements with
//! `m[s][t] ∈ ε_s A ε'_t`, acting on row tuples by right multiplication
//! `x -> x · M`. Composition "first `F` then `G`" is the product `F · G`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{same, Algebra};
use crate::complex::{AComplex, ChainMap, UNBOUNDED};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Subspace};
use crate::idempotent::restrict_to;
use crate::module::Bimodule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl ElemMatrix {
    pub fn zeros(a: &Algebra, rows: usize, cols: usize) -> Self {
        ElemMatrix { rows, cols, entries: vec![a.zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Vec<u32>>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(ElemMatrix { rows: r, cols, entries })
    }

    pub fn scalar(x: Vec<u32>) -> Self {
        ElemMatrix { rows: 1, cols: 1, entries: vec![x] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &[u32] {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Vec<u32>) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<Vec<u32>> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.iter().all(|&c| c == 0))
    }

    /// `self · other`.
    pub fn mul(&self, a: &Algebra, other: &ElemMatrix) -> Result<ElemMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = ElemMatrix::zeros(a, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if x.iter().all(|&c| c == 0) {
                    continue;
                }
                for k in 0..other.cols {
                    let y = other.get(j, k);
                    if y.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let s = a.add(out.get(i, k), &a.mul(x, y));
                    out.set(i, k, s);
                }
            }
        }
        Ok(out)
    }

    /// Image of a row tuple.
    pub fn apply(&self, a: &Algebra, x: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut out = vec![a.zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.iter().all(|&c| c == 0) {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = a.add(o, &a.mul(xi, self.get(i, k)));
            }
        }
        out
    }
}

/// Bounded-below complex `P_0 <- P_1 <- ...` of projectives `⊕ A ε`.
#[derive(Clone, Debug)]
pub struct ProjComplex {
    algebra: Arc<Algebra>,
    terms: Vec<Vec<Vec<u32>>>,
    /// `diffs[k]` is `d_k: P_k -> P_{k-1}`; `diffs[0]` has no columns.
    diffs: Vec<ElemMatrix>,
    trusted_to: i64,
}

impl ProjComplex {
    /// Built from idempotents per degree and differentials `d_1, d_2, ...`;
    /// entries must lie in the right corners and `d^2 = 0`.
    pub fn new(algebra: Arc<Algebra>, terms: Vec<Vec<Vec<u32>>>, diffs: Vec<ElemMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(algebra, terms, diffs)?;
        c.verify()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, terms: Vec<Vec<Vec<u32>>>, mut diffs: Vec<ElemMatrix>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("a projective complex needs a degree-zero term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::DimensionMismatch { expected: terms.len() - 1, found: diffs.len() });
        }
        diffs.insert(0, ElemMatrix::zeros(&algebra, terms[0].len(), 0));
        for k in 1..terms.len() {
            let d = &diffs[k];
            if d.rows != terms[k].len() || d.cols != terms[k - 1].len() {
                return Err(Error::DimensionMismatch { expected: terms[k].len(), found: d.rows });
            }
        }
        Ok(ProjComplex { algebra, terms, diffs, trusted_to: UNBOUNDED })
    }

    pub fn verify(&self) -> Result<()> {
        let a = &self.algebra;
        for (k, t) in self.terms.iter().enumerate() {
            for e in t {
                if !a.is_idempotent(e) {
                    return Err(Error::InvalidInput(format!("summand in degree {k} is not an idempotent")));
                }
            }
        }
        for k in 1..self.terms.len() {
            let d = &self.diffs[k];
            for i in 0..d.rows {
                for j in 0..d.cols {
                    let x = d.get(i, j);
                    let y = a.mul(&a.mul(&self.terms[k][i], x), &self.terms[k - 1][j]);
                    if y != x {
                        return Err(Error::InvalidInput(format!("entry ({i}, {j}) of d_{k} is not in the corner")));
                    }
                }
            }
            if k >= 2 && !d.mul(a, &self.diffs[k - 1])?.is_zero() {
                return Err(Error::Internal(format!("d^2 != 0 at degree {k}")));
            }
        }
        Ok(())
    }

    pub fn with_trusted(mut self, trusted_to: i64) -> Self {
        self.trusted_to = self.trusted_to.min(trusted_to);
        self
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_deg(&self) -> i64 {
        self.terms.len() as i64 - 1
    }

    pub fn trusted_to(&self) -> i64 {
        self.trusted_to
    }

    pub fn term(&self, k: usize) -> &[Vec<u32>] {
        self.terms.get(k).map(|t| t.as_slice()).unwrap_or(&[])
    }

    pub fn rank(&self, k: usize) -> usize {
        self.term(k).len()
    }

    pub fn d(&self, k: usize) -> &ElemMatrix {
        &self.diffs[k]
    }

    /// Dimension of `P_k` over F_p.
    pub fn term_dim(&self, k: usize) -> usize {
        self.term(k).iter().map(|e| self.algebra.left_ideal(e).dim()).sum()
    }

    /// First `n + 1` terms.
    pub fn truncate(&self, n: usize) -> ProjComplex {
        if n + 1 >= self.terms.len() {
            return self.clone();
        }
        ProjComplex {
            algebra: self.algebra.clone(),
            terms: self.terms[..=n].to_vec(),
            diffs: self.diffs[..=n].to_vec(),
            trusted_to: self.trusted_to.min(n as i64 - 1),
        }
    }

    /// `N ⊗_A P` for an `(K, A)`-bimodule `N`: the term for `A ε` is `N ε`.
    pub fn tensor_with(&self, n: &Bimodule) -> Result<Realization> {
        if !same(n.right(), &self.algebra) {
            return Err(Error::InvalidInput("tensor over a different algebra".into()));
        }
        let p = n.p();
        let summands: Vec<Vec<Subspace>> = self
            .terms
            .iter()
            .map(|t| t.iter().map(|e| Subspace::from_columns(&n.right_act(e))).collect())
            .collect();
        let dims: Vec<usize> = summands.iter().map(|s| s.iter().map(|x| x.dim()).sum()).collect();
        let mut mats = Vec::with_capacity(self.terms.len());
        for k in 0..self.terms.len() {
            let below = if k == 0 { 0 } else { dims[k - 1] };
            let mut m = FpMatrix::zeros(p, below, dims[k]);
            if k > 0 {
                let d = &self.diffs[k];
                let mut c0 = 0;
                for (i, src) in summands[k].iter().enumerate() {
                    let mut r0 = 0;
                    for (j, dst) in summands[k - 1].iter().enumerate() {
                        let x = d.get(i, j);
                        if src.dim() > 0 && dst.dim() > 0 && x.iter().any(|&c| c != 0) {
                            let img = n.right_act(x).mul(src.basis());
                            m.set_block(r0, c0, &dst.coord_matrix().mul(&img));
                        }
                        r0 += dst.dim();
                    }
                    c0 += src.dim();
                }
            }
            mats.push(m);
        }
        let mut left = Vec::with_capacity(self.terms.len());
        for (k, ss) in summands.iter().enumerate() {
            let per: Vec<FpMatrix> = n
                .left_action()
                .iter()
                .map(|g| {
                    let mut m = FpMatrix::zeros(p, dims[k], dims[k]);
                    let mut o = 0;
                    for s in ss {
                        if s.dim() > 0 {
                            m.set_block(o, o, &restrict_to(s, g));
                        }
                        o += s.dim();
                    }
                    m
                })
                .collect();
            left.push(per);
        }
        let complex = AComplex::new_unchecked(n.left().clone(), 0, mats, Some(left))?.with_trusted(self.trusted_to);
        Ok(Realization { complex, summands })
    }

    /// The complex of left `A`-modules itself.
    pub fn realize(&self) -> Result<Realization> {
        self.tensor_with(&Bimodule::regular(self.algebra.clone()))
    }
}

/// An F_p complex obtained from a projective complex, remembering the
/// summand subspaces so vectors can be translated back to tuples.
#[derive(Clone, Debug)]
pub struct Realization {
    pub complex: AComplex,
    pub summands: Vec<Vec<Subspace>>,
}

impl Realization {
    /// Split a degree-`k` vector into ambient vectors, one per summand.
    pub fn split(&self, k: usize, v: &[u32]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut o = 0;
        for s in &self.summands[k] {
            out.push(s.basis().mul_vec(&v[o..o + s.dim()]));
            o += s.dim();
        }
        out
    }

    /// Inverse of [`split`](Self::split) for tuples with entries in the summands.
    pub fn join(&self, k: usize, parts: &[Vec<u32>]) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for (s, x) in self.summands[k].iter().zip(parts) {
            let c = s.try_coords(x).ok_or_else(|| Error::Internal("vector outside its summand".into()))?;
            out.extend(c);
        }
        Ok(out)
    }
}

/// Map of projective complexes of shift `s` (degree `k` to `k - s`).
#[derive(Clone, Debug)]
pub struct ProjMap {
    pub shift: i64,
    pub components: BTreeMap<usize, ElemMatrix>,
}

impl ProjMap {
    /// `d f_k = f_{k-1} d` for all source degrees whose target lies within
    /// the target's range.
    pub fn verify(&self, source: &ProjComplex, target: &ProjComplex) -> Result<()> {
        let a = &source.algebra;
        for (&k, f) in &self.components {
            let tk = k as i64 - self.shift;
            if tk < 1 || tk > target.max_deg() {
                continue;
            }
            let lhs = f.mul(a, target.d(tk as usize))?;
            let rhs = match k.checked_sub(1).and_then(|j| self.components.get(&j)) {
                Some(g) => source.d(k).mul(a, g)?,
                _ => ElemMatrix::zeros(a, source.rank(k), target.rank(tk as usize - 1)),
            };
            if lhs != rhs {
                return Err(Error::Internal(format!("not a chain map at source degree {k}")));
            }
        }
        Ok(())
    }

    pub fn then(&self, a: &Algebra, after: &ProjMap) -> Result<ProjMap> {
        let mut components = BTreeMap::new();
        for (&k, f) in &self.components {
            let tk = k as i64 - self.shift;
            if tk < 0 {
                continue;
            }
            if let Some(g) = after.components.get(&(tk as usize)) {
                components.insert(k, f.mul(a, g)?);
            }
        }
        Ok(ProjMap { shift: self.shift + after.shift, components })
    }

    /// `N ⊗ f` between realizations of source and target.
    pub fn realize(&self, n: &Bimodule, src: &Realization, tgt: &Realization) -> Result<ChainMap> {
        let p = n.p();
        let mut comps = BTreeMap::new();
        for (&k, f) in &self.components {
            let tk = k as i64 - self.shift;
            if tk < 0 || tk as usize >= tgt.summands.len() || k >= src.summands.len() {
                continue;
            }
            let ss = &src.summands[k];
            let ts = &tgt.summands[tk as usize];
            let rows: usize = ts.iter().map(|s| s.dim()).sum();
            let cols: usize = ss.iter().map(|s| s.dim()).sum();
            let mut m = FpMatrix::zeros(p, rows, cols);
            let mut c0 = 0;
            for (i, s) in ss.iter().enumerate() {
                let mut r0 = 0;
                for (j, t) in ts.iter().enumerate() {
                    let x = f.get(i, j);
                    if s.dim() > 0 && t.dim() > 0 && x.iter().any(|&c| c != 0) {
                        m.set_block(r0, c0, &t.coord_matrix().mul(&n.right_act(x).mul(s.basis())));
                    }
                    r0 += t.dim();
                }
                c0 += s.dim();
            }
            comps.insert(k as i64, m);
        }
        ChainMap::new(Arc::new(src.complex.clone()), Arc::new(tgt.complex.clone()), self.shift, comps)
    }
}

/// Solve `w · D = target` for a row tuple `w` with entry `t` in `ε A ε_t`,
/// where `D` has rows indexed by the summands `ε_t`.
pub fn solve_row(a: &Algebra, eps: &[u32], summands: &[Vec<u32>], d: &ElemMatrix, target: &[Vec<u32>]) -> Result<Option<Vec<Vec<u32>>>> {
    let n = a.dim();
    let cols_out = d.cols();
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    for (t, et) in summands.iter().enumerate() {
        for v in a.corner_space(eps, et).vectors() {
            basis.push((t, v));
        }
    }
    let mut m = FpMatrix::zeros(a.p(), n * cols_out, basis.len());
    for (c, (t, v)) in basis.iter().enumerate() {
        for u in 0..cols_out {
            let img = a.mul(v, d.get(*t, u));
            for (r, &x) in img.iter().enumerate() {
                if x != 0 {
                    m.set(u * n + r, c, x);
                }
            }
        }
    }
    let rhs: Vec<u32> = target.iter().flat_map(|x| x.iter().copied()).collect();
    let Some(sol) = m.solve(&rhs)? else {
        return Ok(None);
    };
    let mut w = vec![a.zero(); summands.len()];
    for (c, (t, v)) in basis.iter().enumerate() {
        if sol[c] != 0 {
            w[*t] = a.add(&w[*t], &a.scale(v, sol[c]));
        }
    }
    Ok(Some(w))
}

/// Extend a chain map from given low components through source degree `upto`,
/// solving `f_k(ε) · d = f_{k-1}(d ε)` summand by summand.
pub fn extend_map(source: &ProjComplex, target: &ProjComplex, mut map: ProjMap, upto: usize) -> Result<ProjMap> {
    let a = source.algebra.clone();
    let start = map.components.keys().next_back().map(|k| k + 1).unwrap_or(0);
    for k in start..=upto.min(source.max_deg() as usize) {
        let tk = k as i64 - map.shift;
        if tk < 0 {
            continue;
        }
        let tk = tk as usize;
        if tk > target.max_deg() as usize {
            break;
        }
        let prev = map
            .components
            .get(&(k - 1))
            .ok_or_else(|| Error::Internal("chain map extension needs consecutive components".into()))?;
        let want = source.d(k).mul(&a, prev)?;
        let mut rows = Vec::with_capacity(source.rank(k));
        for (i, eps) in source.term(k).iter().enumerate() {
            let target_row = want.row(i);
            let w = if tk == 0 {
                if target_row.iter().any(|x| x.iter().any(|&c| c != 0)) {
                    None
                } else {
                    Some(vec![a.zero(); target.rank(0)])
                }
            } else {
                solve_row(&a, eps, target.term(tk), target.d(tk), &target_row)?
            };
            let w = w.ok_or(Error::UntrustedDegree { degree: k as i64, trusted_to: target.trusted_to() })?;
            rows.push(w);
        }
        map.components.insert(k, ElemMatrix::from_rows(rows, target.rank(tk))?);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn c3() -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::cyclic(3).unwrap(), 3).unwrap())
    }

    /// Periodic resolution of the trivial module over F_3[C_3]:
    /// `A <-(g-1)- A <-N- A <-(g-1)- A`.
    fn periodic(a: &Arc<Algebra>, len: usize) -> ProjComplex {
        let one = a.unit().to_vec();
        let g = a.basis(1);
        let gm = a.sub(&g, &one);
        let norm = a.add(&a.add(&one, &g), &a.basis(2));
        let diffs = (1..=len).map(|k| ElemMatrix::scalar(if k % 2 == 1 { gm.clone() } else { norm.clone() })).collect();
        ProjComplex::new(a.clone(), vec![vec![one]; len + 1], diffs).unwrap().with_trusted(len as i64 - 1)
    }

    #[test]
    fn periodic_resolution_is_acyclic_above_zero() {
        let a = c3();
        let p = periodic(&a, 6);
        let r = p.realize().unwrap();
        assert_eq!(r.complex.homology_dims(0, 5).unwrap(), vec![1, 0, 0, 0, 0, 0]);
        let k = Bimodule::trivial_right(a.clone()).unwrap();
        let t = p.tensor_with(&k).unwrap();
        assert_eq!(t.complex.homology_dims(0, 5).unwrap(), vec![1; 6]);
    }

    #[test]
    fn bad_square_rejected() {
        let a = c3();
        let one = a.unit().to_vec();
        let gm = a.sub(&a.basis(1), &one);
        let r = ProjComplex::new(a.clone(), vec![vec![one.clone()]; 3], vec![ElemMatrix::scalar(gm.clone()), ElemMatrix::scalar(gm)]);
        assert!(r.is_err());
    }

    #[test]
    fn identity_extends_and_realizes() {
        let a = c3();
        let p = periodic(&a, 5);
        let mut comps = BTreeMap::new();
        comps.insert(0, ElemMatrix::scalar(a.unit().to_vec()));
        let f = extend_map(&p, &p, ProjMap { shift: 0, components: comps }, 5).unwrap();
        f.verify(&p, &p).unwrap();
        let r = p.realize().unwrap();
        let cm = f.realize(&Bimodule::regular(a.clone()), &r, &r).unwrap();
        assert_eq!(cm.on_homology(0).unwrap().rank(), 1);
    }

    #[test]
    fn periodicity_map_lifts() {
        let a = c3();
        let p = periodic(&a, 7);
        // degree k -> k - 2, starting from the identity on P_2 -> P_0
        let mut comps = BTreeMap::new();
        comps.insert(2, ElemMatrix::scalar(a.unit().to_vec()));
        let start = ProjMap { shift: 2, components: comps };
        let g = extend_map(&p, &p, start, 7).unwrap();
        g.verify(&p, &p).unwrap();
        assert_eq!(g.components.keys().copied().collect::<Vec<_>>(), vec![2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn split_join_roundtrip() {
        let a = c3();
        let p = periodic(&a, 2);
        let r = p.realize().unwrap();
        let v = vec![1, 2, 0];
        let parts = r.split(1, &v);
        assert_eq!(r.join(1, &parts).unwrap(), v);
    }
}
