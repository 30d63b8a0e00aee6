//! Jacobson radical, semisimple quotient, simple modules and primitive
//! idempotents of a finite-dimensional algebra.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::fp::{self, FpMatrix, Quotient, Subspace};
use crate::module::Module;

/// One block of `A/J` together with a simple module and a lifted primitive idempotent.
#[derive(Clone, Debug)]
pub struct Block {
    /// Central primitive idempotent of `A/J`, in quotient coordinates.
    pub central: Vec<u32>,
    /// Primitive idempotent of `A` lifting a primitive idempotent of the block.
    pub idempotent: Vec<u32>,
    /// The simple module of the block, as an `A`-module.
    pub simple: Module,
    /// Dimension over F_p of the center of the block.
    pub center_dim: usize,
    pub is_trivial: bool,
}

#[derive(Clone, Debug)]
pub struct Structure {
    pub radical: Subspace,
    pub semisimple: Arc<Algebra>,
    pub quotient: Quotient,
    pub blocks: Vec<Block>,
}

const SPLIT_SEED: u64 = 0x5eed_1dea;
const SPLIT_ATTEMPTS: usize = 2000;

impl Structure {
    pub fn compute(a: &Algebra) -> Result<Self> {
        let radical = jacobson_radical(a)?;
        let (semi, quotient) = a.quotient(&radical);
        let semi = Arc::new(semi);
        let centrals = central_idempotents(&semi)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut blocks = Vec::with_capacity(centrals.len());
        let proj_actions: Vec<Vec<u32>> = (0..a.dim()).map(|i| quotient.proj.column(i)).collect();
        for eps in centrals {
            let center_dim = center(&semi).image(&semi.left_matrix(&eps)).dim();
            let f = primitive_in_block(&semi, &eps, center_dim, &mut rng)?;
            let left = semi.left_ideal(&f);
            let c = left.coord_matrix();
            let action: Vec<FpMatrix> =
                proj_actions.iter().map(|x| c.mul(&semi.left_matrix(x).mul(left.basis()))).collect();
            let simple = Module::new_unchecked(Arc::new(a.clone()), left.dim(), action)?;
            let idempotent = lift_idempotent(a, &quotient.lift(&f))?;
            let is_trivial = match a.augmentation() {
                Some(e) => simple.dim() == 1 && (0..a.dim()).all(|i| simple.action()[i].get(0, 0) == e[i]),
                None => false,
            };
            blocks.push(Block { central: eps, idempotent, simple, center_dim, is_trivial });
        }
        Ok(Structure { radical, semisimple: semi, quotient, blocks })
    }

    pub fn simples(&self) -> Vec<&Module> {
        self.blocks.iter().map(|b| &b.simple).collect()
    }

    pub fn trivial_block(&self) -> Option<&Block> {
        self.blocks.iter().find(|b| b.is_trivial)
    }

    pub fn is_local(&self) -> bool {
        self.blocks.len() == 1 && self.semisimple.dim() == 1
    }

    /// `J · M` for a module over the same algebra.
    pub fn radical_of_module(&self, m: &Module) -> Subspace {
        let mut cols = Vec::new();
        for j in self.radical.vectors() {
            let act = m.act(&j);
            cols.extend(act.columns());
        }
        Subspace::span(m.p(), m.dim(), &cols)
    }

    /// When `A/J ≅ F_p^r`, a complete set of orthogonal primitive idempotents
    /// of `A` (one per block, in block order).
    pub fn split_basic_idempotents(&self, a: &Algebra) -> Result<Option<Vec<Vec<u32>>>> {
        if self.blocks.iter().any(|b| b.simple.dim() != 1 || b.center_dim != 1) {
            return Ok(None);
        }
        let mut out: Vec<Vec<u32>> = Vec::new();
        let r = self.blocks.len();
        for (k, b) in self.blocks.iter().enumerate() {
            let mut rest = a.unit().to_vec();
            for e in &out {
                rest = a.sub(&rest, e);
            }
            if k + 1 == r {
                out.push(rest);
                break;
            }
            let x = self.quotient.lift(&b.central);
            let x = a.mul(&a.mul(&rest, &x), &rest);
            out.push(lift_idempotent(a, &x)?);
        }
        for (i, e) in out.iter().enumerate() {
            for (j, f) in out.iter().enumerate() {
                let prod = a.mul(e, f);
                let expect = if i == j { e.clone() } else { a.zero() };
                if prod != expect {
                    return Err(Error::Internal("lifted idempotents are not orthogonal".into()));
                }
            }
        }
        Ok(Some(out))
    }
}

/// `g_i(x) = (Tr(L̂(x)^{p^i}) mod p^{i+1}) / p^i` on the integer lift of the left regular matrix.
fn trace_form(a: &Algebra, x: &[u32], i: u32) -> Result<u32> {
    let p = a.p() as u64;
    let m = a.left_matrix(x);
    let n = a.dim();
    let modulus = p.pow(i + 1);
    let mut base: Vec<u64> = m.data().iter().map(|&v| v as u64).collect();
    let mut acc: Vec<u64> = (0..n * n).map(|k| u64::from(k % (n + 1) == 0)).collect();
    let mut e = p.pow(i);
    let mulm = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let v = x[r * n + k];
                if v == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] = (out[r * n + c] + v * y[k * n + c]) % modulus;
                }
            }
        }
        out
    };
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mulm(&base, &base);
        }
    }
    let tr = (0..n).map(|k| acc[k * n + k]).sum::<u64>() % modulus;
    let pi = p.pow(i);
    if tr % pi != 0 {
        return Err(Error::Internal(format!("trace form g_{i} is not divisible by p^{i}")));
    }
    Ok(((tr / pi) % p) as u32)
}

/// Radical by layered trace forms: `I_i = {x in I_{i-1} : g_i(x b) = 0 for all b}`
/// for `i = 0..floor(log_p dim)`.
pub fn jacobson_radical(a: &Algebra) -> Result<Subspace> {
    let p = a.p();
    let n = a.dim();
    let mut layers = 0u32;
    while (p as u64).pow(layers + 1) <= n as u64 {
        layers += 1;
    }
    let mut ideal = Subspace::full(p, n);
    for i in 0..=layers {
        if ideal.dim() == 0 {
            break;
        }
        let vs = ideal.vectors();
        let g: Vec<u32> = vs.iter().map(|v| trace_form(a, v, i)).collect::<Result<_>>()?;
        let mut rows = FpMatrix::zeros(p, n, vs.len());
        for j in 0..n {
            let b = a.basis(j);
            for (k, v) in vs.iter().enumerate() {
                let prod = a.mul(v, &b);
                let c = ideal
                    .try_coords(&prod)
                    .ok_or_else(|| Error::Internal("trace-form layer is not a right ideal".into()))?;
                let val = c.iter().zip(&g).fold(0, |s, (&x, &y)| fp::add(s, fp::mul(x, y, p), p));
                rows.set(j, k, val);
            }
        }
        let ker = rows.nullspace();
        ideal = Subspace::from_columns(&ideal.basis().mul(&ker));
    }
    if !is_nilpotent(a, &ideal) {
        return Err(Error::Internal("computed radical is not nilpotent".into()));
    }
    Ok(ideal)
}

/// Powers `S, S^2, ...` of a subspace under multiplication reach zero.
pub fn is_nilpotent(a: &Algebra, s: &Subspace) -> bool {
    let p = a.p();
    let gens = s.vectors();
    let mut power = s.clone();
    for _ in 0..=a.dim() {
        if power.dim() == 0 {
            return true;
        }
        let mut prods = Vec::new();
        for x in power.vectors() {
            for y in &gens {
                prods.push(a.mul(&x, y));
            }
        }
        let next = Subspace::span(p, a.dim(), &prods);
        if next == power {
            return false;
        }
        power = next;
    }
    power.dim() == 0
}

/// Oracle: all `x` whose left ideal `A x` is nilpotent, by enumeration.
pub fn radical_bruteforce(a: &Algebra) -> Result<Subspace> {
    let p = a.p() as u64;
    let n = a.dim();
    let total = p.checked_pow(n as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| {
        Error::Precondition(format!("brute-force radical needs p^dim <= 2^20, got p={p}, dim={n}"))
    })?;
    let mut members = Vec::new();
    for code in 0..total {
        let mut x = vec![0u32; n];
        let mut c = code;
        for v in x.iter_mut() {
            *v = (c % p) as u32;
            c /= p;
        }
        if is_nilpotent(a, &a.left_ideal(&x)) {
            members.push(x);
        }
    }
    let span = Subspace::span(a.p(), n, &members);
    if (members.len() as u64) != p.pow(span.dim() as u32) {
        return Err(Error::Internal("nilpotent left ideals do not form a subspace".into()));
    }
    Ok(span)
}

pub fn center(a: &Algebra) -> Subspace {
    let n = a.dim();
    let p = a.p();
    let gens = a.generator_indices();
    let parts: Vec<FpMatrix> = gens.iter().map(|&g| a.right_regular()[g].sub(&a.left_regular()[g])).collect();
    let refs: Vec<&FpMatrix> = parts.iter().collect();
    let stacked = FpMatrix::vstack(p, n, &refs);
    Subspace::from_columns(&stacked.nullspace())
}

/// Idempotents `u_λ = ε - ε (z - λ)^{p-1}` cutting `ε` along the values of `z`.
fn split_by(a: &Algebra, eps: &[u32], z: &[u32]) -> Vec<Vec<u32>> {
    let p = a.p();
    let mut parts = Vec::new();
    for lambda in 0..p {
        let shifted = a.sub(z, &a.scale(eps, lambda));
        let powered = a.mul(eps, &a.pow(&shifted, (p - 1) as u64));
        let u = a.sub(eps, &powered);
        if !fp::is_zero_vec(&u) {
            parts.push(u);
        }
    }
    parts
}

/// Frobenius-fixed part of a commutative subalgebra spanned by `basis`.
fn frobenius_fixed(a: &Algebra, basis: &Subspace) -> Subspace {
    let p = a.p();
    let d = basis.dim();
    let mut frob = FpMatrix::zeros(p, d, d);
    for (k, v) in basis.vectors().iter().enumerate() {
        let c = basis.coords(&a.pow(v, p as u64));
        for (r, &x) in c.iter().enumerate() {
            frob.set(r, k, x);
        }
    }
    let fixed = frob.sub(&FpMatrix::identity(p, d)).nullspace();
    Subspace::from_columns(&basis.basis().mul(&fixed))
}

/// Central primitive idempotents of a semisimple algebra.
pub fn central_idempotents(a: &Algebra) -> Result<Vec<Vec<u32>>> {
    let z = center(a);
    let fixed = frobenius_fixed(a, &z);
    let mut idems = vec![a.unit().to_vec()];
    for v in fixed.vectors() {
        let mut next = Vec::new();
        for e in &idems {
            next.extend(split_by(a, e, &a.mul(e, &v)));
        }
        idems = next;
    }
    if idems.len() != fixed.dim() {
        return Err(Error::Internal("central idempotent count differs from the fixed-space dimension".into()));
    }
    Ok(idems)
}

/// A primitive idempotent `f` inside the block `A ε`, found by splitting with
/// seeded random elements until `f A f` is the center-sized division algebra.
fn primitive_in_block(a: &Algebra, eps: &[u32], center_dim: usize, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
    let p = a.p();
    let mut f = eps.to_vec();
    let mut attempts = 0;
    loop {
        let corner = a.corner_space(&f, &f);
        if corner.dim() == center_dim {
            return Ok(f);
        }
        attempts += 1;
        if attempts > SPLIT_ATTEMPTS {
            return Err(Error::Internal("failed to split a simple block".into()));
        }
        let mut y = a.zero();
        for v in corner.vectors() {
            let c = rng.gen_range(0..p);
            y = a.add(&y, &a.scale(&v, c));
        }
        // F_p[y] with unit f.
        let mut powers = vec![f.clone()];
        let mut ech = fp::Echelon::new(p, a.dim());
        ech.insert(&f);
        let mut cur = f.clone();
        loop {
            cur = a.mul(&cur, &y);
            if !ech.insert(&cur) {
                break;
            }
            powers.push(cur.clone());
        }
        let sub = Subspace::span(p, a.dim(), &powers);
        let fixed = frobenius_fixed(a, &sub);
        if fixed.dim() < 2 {
            continue;
        }
        let Some(z) = fixed.vectors().into_iter().find(|v| Subspace::span(p, a.dim(), &[f.clone()]).try_coords(v).is_none())
        else {
            continue;
        };
        let parts = split_by(a, &f, &z);
        if parts.len() < 2 {
            continue;
        }
        f = parts
            .into_iter()
            .min_by_key(|u| a.corner_space(u, u).dim())
            .expect("nonempty split");
    }
}

/// Lift an idempotent modulo a nilpotent ideal by `e <- 3e^2 - 2e^3`.
pub fn lift_idempotent(a: &Algebra, approx: &[u32]) -> Result<Vec<u32>> {
    let mut e = approx.to_vec();
    for _ in 0..(2 * a.dim() + 8) {
        let e2 = a.mul(&e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = a.mul(&e2, &e);
        e = a.sub(&a.scale(&e2, 3), &a.scale(&e3, 2));
    }
    Err(Error::Construction("idempotent lifting did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn ga(g: GroupTable, p: u32) -> Algebra {
        Algebra::group_algebra(&g, p).unwrap()
    }

    #[test]
    fn radical_dimensions() {
        assert_eq!(jacobson_radical(&ga(GroupTable::cyclic(2).unwrap(), 3)).unwrap().dim(), 0);
        assert_eq!(jacobson_radical(&ga(GroupTable::cyclic(3).unwrap(), 3)).unwrap().dim(), 2);
        assert_eq!(jacobson_radical(&ga(GroupTable::symmetric3(), 3)).unwrap().dim(), 4);
        assert_eq!(jacobson_radical(&ga(GroupTable::symmetric3(), 2)).unwrap().dim(), 1);
        assert_eq!(jacobson_radical(&ga(GroupTable::cyclic(4).unwrap(), 2)).unwrap().dim(), 3);
    }

    #[test]
    fn trace_radical_matches_bruteforce() {
        let cases = [
            ga(GroupTable::cyclic(3).unwrap(), 3),
            ga(GroupTable::symmetric3(), 3),
            ga(GroupTable::symmetric3(), 2),
            ga(GroupTable::cyclic(4).unwrap(), 2),
            ga(GroupTable::dihedral(4).unwrap(), 2),
            Algebra::upper_triangular(3, 2).unwrap(),
            Algebra::truncated_polynomial(5, 4).unwrap(),
            Algebra::matrix_algebra(2, 2).unwrap(),
        ];
        for a in &cases {
            assert_eq!(jacobson_radical(a).unwrap(), radical_bruteforce(a).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn augmentation_ideal_cubes_to_zero() {
        let a = ga(GroupTable::cyclic(3).unwrap(), 3);
        let x = a.sub(&a.basis(1), a.unit());
        assert_eq!(a.pow(&x, 3), a.zero());
        assert!(jacobson_radical(&a).unwrap().contains(&x));
    }

    #[test]
    fn simples_of_small_group_algebras() {
        let s = ga(GroupTable::cyclic(3).unwrap(), 3).structure().unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert!(s.blocks[0].is_trivial);
        let s = ga(GroupTable::symmetric3(), 3).structure().unwrap();
        let dims: Vec<usize> = s.simples().iter().map(|m| m.dim()).collect();
        assert_eq!(dims, vec![1, 1]);
        assert_eq!(s.blocks.iter().filter(|b| b.is_trivial).count(), 1);
        let s = ga(GroupTable::cyclic(2).unwrap(), 3).structure().unwrap();
        assert_eq!(s.blocks.len(), 2);
        // S3 mod 2: trivial plus a 2-dim simple.
        let s = ga(GroupTable::symmetric3(), 2).structure().unwrap();
        let mut dims: Vec<usize> = s.simples().iter().map(|m| m.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        for m in s.simples() {
            m.verify().unwrap();
        }
    }

    #[test]
    fn non_split_simple_over_small_field() {
        // F2[C3] = F2 x F4: two simples of dims 1 and 2, the second with a 2-dim center.
        let a = ga(GroupTable::cyclic(3).unwrap(), 2);
        let s = a.structure().unwrap();
        let mut info: Vec<(usize, usize)> = s.blocks.iter().map(|b| (b.simple.dim(), b.center_dim)).collect();
        info.sort();
        assert_eq!(info, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn matrix_algebra_has_one_simple_of_dim_n() {
        let a = Algebra::matrix_algebra(3, 3).unwrap();
        let s = a.structure().unwrap();
        assert_eq!(s.radical.dim(), 0);
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].simple.dim(), 3);
        let e = &s.blocks[0].idempotent;
        assert!(a.is_idempotent(e));
        assert_eq!(a.corner_space(e, e).dim(), 1);
    }

    #[test]
    fn split_basic_idempotents_are_complete() {
        let a = ga(GroupTable::symmetric3(), 3);
        let s = a.structure().unwrap();
        let es = s.split_basic_idempotents(&a).unwrap().unwrap();
        assert_eq!(es.len(), 2);
        let sum = a.add(&es[0], &es[1]);
        assert_eq!(sum, a.unit());
        let b = ga(GroupTable::symmetric3(), 2);
        assert!(b.structure().unwrap().split_basic_idempotents(&b).unwrap().is_none());
    }
}
