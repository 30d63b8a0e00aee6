//! Finite-dimensional left modules and bimodules given by action matrices.
//!
//! Vectors are columns; the action of a basis element `e_i` is the matrix
//! `action[i]`, so `e_i · v = action[i] * v` and `v · e_i = right[i] * v`.

use std::sync::Arc;

use crate::algebra::{combine, same, Algebra, AlgebraMap};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Quotient, Subspace};

#[derive(Clone, Debug)]
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<FpMatrix>,
}

impl Module {
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(algebra, dim, action)?;
        m.verify()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: action.len() });
        }
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidInput("action matrices must be square of the module dimension".into()));
        }
        Ok(Module { algebra, dim, action })
    }

    /// Check that the action is a unital representation.
    pub fn verify(&self) -> Result<()> {
        let a = &self.algebra;
        if self.act(a.unit()) != FpMatrix::identity(a.p(), self.dim) {
            return Err(Error::InvalidInput("unit does not act as the identity".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = self.act(a.product_of_basis(i, j));
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!("action is not multiplicative on ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn regular(a: Arc<Algebra>) -> Self {
        let action = a.left_regular().to_vec();
        let d = a.dim();
        Module { algebra: a, dim: d, action }
    }

    /// The one-dimensional module on which `a` acts through its augmentation.
    pub fn trivial(a: Arc<Algebra>) -> Result<Self> {
        let eps = a.augmentation().ok_or(Error::NoAugmentation)?.to_vec();
        let p = a.p();
        let action = eps.iter().map(|&c| FpMatrix::from_data(p, 1, 1, vec![c])).collect();
        Ok(Module { algebra: a, dim: 1, action })
    }

    pub fn zero(a: Arc<Algebra>) -> Self {
        let p = a.p();
        let action = (0..a.dim()).map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        Module { algebra: a, dim: 0, action }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }

    pub fn act(&self, x: &[u32]) -> FpMatrix {
        combine(self.p(), self.dim, self.dim, &self.action, x)
    }

    pub fn act_vec(&self, x: &[u32], v: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.dim];
        for (m, &c) in self.action.iter().zip(x) {
            if c != 0 {
                crate::fp::axpy(&mut out, c, &m.mul_vec(v), self.p());
            }
        }
        out
    }

    /// Submodule generated by the given vectors.
    pub fn generated(&self, vectors: &[Vec<u32>]) -> Subspace {
        let mut all = Vec::with_capacity(vectors.len() * self.action.len());
        for v in vectors {
            for m in &self.action {
                all.push(m.mul_vec(v));
            }
        }
        Subspace::span(self.p(), self.dim, &all)
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        self.action.iter().all(|m| s.contains_subspace(&s.image(m)))
    }

    /// Restriction of the action to an invariant subspace, in its canonical coordinates.
    pub fn submodule(&self, s: &Subspace) -> Result<Module> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidInput("subspace is not invariant".into()));
        }
        let c = s.coord_matrix();
        let action = self.action.iter().map(|m| c.mul(&m.mul(s.basis()))).collect();
        Module::new_unchecked(self.algebra.clone(), s.dim(), action)
    }

    pub fn quotient(&self, s: &Subspace) -> Result<(Module, Quotient)> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidInput("subspace is not invariant".into()));
        }
        let q = Quotient::new(s.clone());
        let action = self.action.iter().map(|m| q.proj.mul(&m.mul(&q.section))).collect();
        Ok((Module::new_unchecked(self.algebra.clone(), q.dim(), action)?, q))
    }

    /// Restriction of scalars along `f: B -> A`.
    pub fn restrict(&self, f: &AlgebraMap) -> Result<Module> {
        if !same(&f.target, &self.algebra) {
            return Err(Error::InvalidInput("map target differs from the module's algebra".into()));
        }
        let action = f.matrix.columns().iter().map(|x| self.act(x)).collect();
        Module::new_unchecked(f.source.clone(), self.dim, action)
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        if !same(&self.algebra, &other.algebra) {
            return Err(Error::InvalidInput("modules over different algebras".into()));
        }
        let p = self.p();
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                let mut m = FpMatrix::zeros(p, d, d);
                m.set_block(0, 0, x);
                m.set_block(self.dim, self.dim, y);
                m
            })
            .collect();
        Module::new_unchecked(self.algebra.clone(), d, action)
    }

    /// Same vector space viewed as a right module over the opposite algebra.
    pub fn as_right_over_opposite(&self, opposite: Arc<Algebra>) -> Result<Bimodule> {
        if opposite.dim() != self.algebra.dim() {
            return Err(Error::InvalidInput("opposite algebra dimension differs".into()));
        }
        let k = Arc::new(Algebra::ground(self.p()));
        Bimodule::new_unchecked(k, opposite, self.dim, vec![FpMatrix::identity(self.p(), self.dim)], self.action.clone())
    }
}

/// A `(left, right)`-bimodule.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    dim: usize,
    left_action: Vec<FpMatrix>,
    right_action: Vec<FpMatrix>,
}

impl Bimodule {
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_action: Vec<FpMatrix>,
        right_action: Vec<FpMatrix>,
    ) -> Result<Self> {
        let b = Self::new_unchecked(left, right, dim, left_action, right_action)?;
        b.verify()?;
        Ok(b)
    }

    pub(crate) fn new_unchecked(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_action: Vec<FpMatrix>,
        right_action: Vec<FpMatrix>,
    ) -> Result<Self> {
        if left_action.len() != left.dim() || right_action.len() != right.dim() {
            return Err(Error::InvalidInput("action lists do not match the algebra dimensions".into()));
        }
        if left_action.iter().chain(&right_action).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidInput("action matrices must be square of the bimodule dimension".into()));
        }
        Ok(Bimodule { left, right, dim, left_action, right_action })
    }

    pub fn verify(&self) -> Result<()> {
        self.left_module().verify()?;
        let p = self.p();
        let r = &self.right;
        if self.right_act(r.unit()) != FpMatrix::identity(p, self.dim) {
            return Err(Error::InvalidInput("right unit does not act as the identity".into()));
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                // v (e_i e_j) = (v e_i) e_j
                let lhs = self.right_act(r.product_of_basis(i, j));
                let rhs = self.right_action[j].mul(&self.right_action[i]);
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!("right action is not multiplicative on ({i}, {j})")));
                }
            }
        }
        for l in &self.left_action {
            for m in &self.right_action {
                if l.mul(m) != m.mul(l) {
                    return Err(Error::InvalidInput("left and right actions do not commute".into()));
                }
            }
        }
        Ok(())
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: Arc<Algebra>) -> Self {
        let l = a.left_regular().to_vec();
        let r = a.right_regular().to_vec();
        let d = a.dim();
        Bimodule { left: a.clone(), right: a, dim: d, left_action: l, right_action: r }
    }

    /// A left module viewed as a `(A, F_p)`-bimodule.
    pub fn from_left(m: &Module) -> Self {
        let k = Arc::new(Algebra::ground(m.p()));
        Bimodule {
            left: m.algebra().clone(),
            right: k,
            dim: m.dim(),
            left_action: m.action().to_vec(),
            right_action: vec![FpMatrix::identity(m.p(), m.dim())],
        }
    }

    /// `F_p` as a right module through the augmentation.
    pub fn trivial_right(a: Arc<Algebra>) -> Result<Self> {
        let t = Module::trivial(a.clone())?;
        let k = Arc::new(Algebra::ground(a.p()));
        Ok(Bimodule {
            left: k,
            right: a,
            dim: 1,
            left_action: vec![FpMatrix::identity(t.p(), 1)],
            right_action: t.action().to_vec(),
        })
    }

    pub fn left(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.left.p()
    }

    pub fn left_action(&self) -> &[FpMatrix] {
        &self.left_action
    }

    pub fn right_action(&self) -> &[FpMatrix] {
        &self.right_action
    }

    pub fn left_act(&self, x: &[u32]) -> FpMatrix {
        combine(self.p(), self.dim, self.dim, &self.left_action, x)
    }

    pub fn right_act(&self, x: &[u32]) -> FpMatrix {
        combine(self.p(), self.dim, self.dim, &self.right_action, x)
    }

    pub fn left_module(&self) -> Module {
        Module { algebra: self.left.clone(), dim: self.dim, action: self.left_action.clone() }
    }

    /// The right action viewed as a left module over the opposite algebra.
    pub fn right_as_left_opposite(&self, opposite: Arc<Algebra>) -> Module {
        assert_eq!(opposite.dim(), self.right.dim());
        Module { algebra: opposite, dim: self.dim, action: self.right_action.clone() }
    }

    /// Restrict the right action along `f: C -> right`.
    pub fn restrict_right(&self, f: &AlgebraMap) -> Result<Bimodule> {
        if !same(&f.target, &self.right) {
            return Err(Error::InvalidInput("map target differs from the right algebra".into()));
        }
        let ra = f.matrix.columns().iter().map(|x| self.right_act(x)).collect();
        Bimodule::new_unchecked(self.left.clone(), f.source.clone(), self.dim, self.left_action.clone(), ra)
    }

    /// Restrict the left action along `f: C -> left`.
    pub fn restrict_left(&self, f: &AlgebraMap) -> Result<Bimodule> {
        if !same(&f.target, &self.left) {
            return Err(Error::InvalidInput("map target differs from the left algebra".into()));
        }
        let la = f.matrix.columns().iter().map(|x| self.left_act(x)).collect();
        Bimodule::new_unchecked(f.source.clone(), self.right.clone(), self.dim, la, self.right_action.clone())
    }

    /// Restriction to a sub-bimodule, in canonical coordinates.
    pub fn sub_bimodule(&self, s: &Subspace) -> Result<Bimodule> {
        let inv = |ms: &[FpMatrix]| ms.iter().all(|m| s.contains_subspace(&s.image(m)));
        if !inv(&self.left_action) || !inv(&self.right_action) {
            return Err(Error::InvalidInput("subspace is not a sub-bimodule".into()));
        }
        let c = s.coord_matrix();
        let restrict = |ms: &[FpMatrix]| ms.iter().map(|m| c.mul(&m.mul(s.basis()))).collect::<Vec<_>>();
        Bimodule::new_unchecked(
            self.left.clone(),
            self.right.clone(),
            s.dim(),
            restrict(&self.left_action),
            restrict(&self.right_action),
        )
    }

    pub fn quotient(&self, s: &Subspace) -> Result<(Bimodule, Quotient)> {
        let inv = |ms: &[FpMatrix]| ms.iter().all(|m| s.contains_subspace(&s.image(m)));
        if !inv(&self.left_action) || !inv(&self.right_action) {
            return Err(Error::InvalidInput("subspace is not a sub-bimodule".into()));
        }
        let q = Quotient::new(s.clone());
        let push = |ms: &[FpMatrix]| ms.iter().map(|m| q.proj.mul(&m.mul(&q.section))).collect::<Vec<_>>();
        let b = Bimodule::new_unchecked(
            self.left.clone(),
            self.right.clone(),
            q.dim(),
            push(&self.left_action),
            push(&self.right_action),
        )?;
        Ok((b, q))
    }

    /// `self ⊗_R other` where `R` is the right algebra of `self` and the left
    /// algebra of `other`. Basis of the underlying `X ⊗ Y` is `x_i ⊗ y_j` at
    /// `i * dim(Y) + j`; the result is the quotient by the balancing relations.
    pub fn tensor(&self, other: &Bimodule) -> Result<(Bimodule, Quotient)> {
        if !same(&self.right, &other.left) {
            return Err(Error::InvalidInput("tensor over mismatched algebras".into()));
        }
        let p = self.p();
        let (dx, dy) = (self.dim, other.dim);
        let n = dx * dy;
        let rel = if self.right.dim() == 1 {
            Subspace::zero(p, n)
        } else {
            let mut cols = Vec::new();
            for g in self.right.generator_indices() {
                let rx = &self.right_action[g];
                let ly = &other.left_action[g];
                for i in 0..dx {
                    for j in 0..dy {
                        let mut v = vec![0u32; n];
                        for k in 0..dx {
                            let c = rx.get(k, i);
                            if c != 0 {
                                v[k * dy + j] = crate::fp::add(v[k * dy + j], c, p);
                            }
                        }
                        for l in 0..dy {
                            let c = ly.get(l, j);
                            if c != 0 {
                                v[i * dy + l] = crate::fp::sub(v[i * dy + l], c, p);
                            }
                        }
                        if v.iter().any(|&x| x != 0) {
                            cols.push(v);
                        }
                    }
                }
            }
            Subspace::span(p, n, &cols)
        };
        let q = Quotient::new(rel);
        let qd = q.dim();
        let comp = q.complement.clone();
        // Induced actions: image of each complement basis vector, then project.
        let induce_left = |m: &FpMatrix| {
            let mut img = FpMatrix::zeros(p, n, qd);
            for (c, &idx) in comp.iter().enumerate() {
                let (i, j) = (idx / dy, idx % dy);
                for k in 0..dx {
                    let v = m.get(k, i);
                    if v != 0 {
                        img.set(k * dy + j, c, v);
                    }
                }
            }
            q.proj.mul(&img)
        };
        let induce_right = |m: &FpMatrix| {
            let mut img = FpMatrix::zeros(p, n, qd);
            for (c, &idx) in comp.iter().enumerate() {
                let (i, j) = (idx / dy, idx % dy);
                for l in 0..dy {
                    let v = m.get(l, j);
                    if v != 0 {
                        img.set(i * dy + l, c, v);
                    }
                }
            }
            q.proj.mul(&img)
        };
        let la = self.left_action.iter().map(induce_left).collect();
        let ra = other.right_action.iter().map(induce_right).collect();
        let b = Bimodule::new_unchecked(self.left.clone(), other.right.clone(), qd, la, ra)?;
        Ok((b, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn fc(n: usize, p: u32) -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::cyclic(n).unwrap(), p).unwrap())
    }

    #[test]
    fn regular_and_trivial_are_modules() {
        let a = fc(3, 3);
        Module::regular(a.clone()).verify().unwrap();
        Module::trivial(a.clone()).unwrap().verify().unwrap();
        Bimodule::regular(a).verify().unwrap();
    }

    #[test]
    fn tensor_with_regular_is_identity() {
        let a = fc(3, 3);
        let k = Bimodule::trivial_right(a.clone()).unwrap();
        let (t, _) = k.tensor(&Bimodule::regular(a.clone())).unwrap();
        assert_eq!(t.dim(), 1);
        t.verify().unwrap();
        let triv = Bimodule::from_left(&Module::trivial(a.clone()).unwrap());
        let (kk, _) = k.tensor(&triv).unwrap();
        assert_eq!(kk.dim(), 1);
    }

    #[test]
    fn tensor_over_c2_semisimple_splits() {
        // F3 ⊗_{F3[C2]} F3_sign = 0.
        let a = fc(2, 3);
        let k = Bimodule::trivial_right(a.clone()).unwrap();
        let sign = Module::new(
            a.clone(),
            1,
            vec![FpMatrix::identity(3, 1), FpMatrix::from_data(3, 1, 1, vec![2])],
        )
        .unwrap();
        let (t, _) = k.tensor(&Bimodule::from_left(&sign)).unwrap();
        assert_eq!(t.dim(), 0);
    }

    #[test]
    fn submodule_quotient_dims() {
        let a = fc(3, 3);
        let m = Module::regular(a.clone());
        let aug: Vec<Vec<u32>> = vec![vec![1, 2, 0], vec![1, 0, 2]];
        let s = m.generated(&aug);
        assert_eq!(s.dim(), 2);
        let sub = m.submodule(&s).unwrap();
        sub.verify().unwrap();
        let (q, _) = m.quotient(&s).unwrap();
        assert_eq!(q.dim(), 1);
        q.verify().unwrap();
    }
}
