//! Truncated free products `B *_A C` of algebras under `A`, their word
//! filtration and the homotopy-epimorphism test.
//!
//! Admissibility asks for injective unit maps and `B/A`, `C/A` free as left
//! `A`-modules. A free basis `β_i` of `B/A` lifts to `B = A ⊕ ⊕ A β_i`, and
//! similarly `C = A ⊕ ⊕ A γ_j`. Normal words are `b γ_j β_i γ_j' ...` with
//! `b` running over a basis of `B`, so the words of length `k` span a
//! complement of `F_{k-1}` in `F_k`. Right multiplication by an element of
//! either factor is computed by straightening the last letter.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{same, Algebra, AlgebraMap};
use crate::derived::{b_over_a, restrict_regular};
use crate::error::{Error, Result};
use crate::fp::{self, Echelon, FpMatrix, Subspace};
use crate::module::Bimodule;

/// Default word-length bound.
pub const DEFAULT_MAX_WORD: usize = 6;
/// Largest number of normal words `free_product` indexes.
pub const DEFAULT_MAX_WORDS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    B,
    C,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::B => Side::C,
            Side::C => Side::B,
        }
    }
}

/// Evidence that `X/A` is free over `A`: generators whose `A`-multiples
/// together with `A` give a basis of `X`.
#[derive(Clone, Debug, Serialize)]
pub struct FreenessCertificate {
    pub rank: usize,
    pub generators: Vec<Vec<u32>>,
}

/// An algebra under `A` with a certified splitting `X = A ⊕ ⊕ A g_k`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub unit: AlgebraMap,
    pub certificate: FreenessCertificate,
    /// Inverse of the matrix with columns `f(a_i) g_k` (with `g_0 = 1`).
    decompose: FpMatrix,
}

impl Factor {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.unit.target
    }

    pub fn rank(&self) -> usize {
        self.certificate.rank
    }

    /// `x = f(a_0) + Σ f(a_k) g_k`, returned as `[a_0, a_1, ...]`.
    fn split(&self, x: &[u32]) -> Vec<Vec<u32>> {
        let n = self.unit.source.dim();
        let c = self.decompose.mul_vec(x);
        c.chunks(n).map(|s| s.to_vec()).collect()
    }
}

/// Why an input is not admissible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inadmissible {
    pub reason: String,
}

/// Certify that `f: A -> X` is injective with `X/f(A)` free over `A`;
/// `Ok(Err(_))` records the failed certificate.
pub fn certify_free(f: &AlgebraMap, seed: u64) -> Result<std::result::Result<Factor, Inadmissible>> {
    let refuse = |reason: String| Ok(Err(Inadmissible { reason }));
    if !f.is_injective() {
        return refuse("unit map is not injective".into());
    }
    let a = &f.source;
    let x = &f.target;
    let p = a.p();
    let m = restrict_regular(f)?;
    let image = Subspace::from_columns(&f.matrix);
    let (bar, q) = m.quotient(&image)?;
    if bar.dim() % a.dim() != 0 {
        return refuse(format!("dim X/A = {} is not a multiple of dim A = {}", bar.dim(), a.dim()));
    }
    let rank = bar.dim() / a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<Vec<u32>> = (0..bar.dim()).map(|i| {
        let mut v = vec![0; bar.dim()];
        v[i] = 1;
        v
    }).collect();
    let orbit = |v: &[u32]| -> Vec<Vec<u32>> { (0..a.dim()).map(|i| bar.act_vec(&a.basis(i), v)).collect() };
    let mut found: Option<Vec<Vec<u32>>> = None;
    'attempts: for attempt in 0..64 {
        let mut ech = Echelon::new(p, bar.dim());
        let mut gens = Vec::new();
        let mut candidates = if attempt == 0 { basis.clone() } else { Vec::new() };
        candidates.extend((0..4 * rank + 4).map(|_| (0..bar.dim()).map(|_| rng.gen_range(0..p)).collect::<Vec<u32>>()));
        for v in candidates {
            if gens.len() == rank {
                break;
            }
            let mut trial = ech.clone();
            if orbit(&v).iter().all(|w| trial.insert(w)) {
                ech = trial;
                gens.push(v);
            }
        }
        if gens.len() == rank {
            found = Some(gens);
            break 'attempts;
        }
    }
    let Some(gens) = found else {
        return refuse(format!("no free A-basis of X/A of rank {rank} found"));
    };
    let lifts: Vec<Vec<u32>> = gens.iter().map(|g| q.lift(g)).collect();
    let mut cols = Vec::with_capacity(x.dim());
    for k in 0..=rank {
        for i in 0..a.dim() {
            let fa = f.apply(&a.basis(i));
            cols.push(if k == 0 { fa } else { x.mul(&fa, &lifts[k - 1]) });
        }
    }
    let d = FpMatrix::from_columns(p, x.dim(), &cols);
    let decompose = d.inverse().ok_or_else(|| Error::Internal("free generators do not split X".into()))?;
    Ok(Ok(Factor { unit: f.clone(), certificate: FreenessCertificate { rank, generators: lifts }, decompose }))
}

/// A normal word: a basis index of `B`, then alternating generator indices
/// for `C/A` and `B/A`.
pub type Word = Vec<usize>;

/// An element as a sparse combination of normal words.
pub type Element = HashMap<Word, u32>;

fn add_into(acc: &mut Element, src: &Element, c: u32, p: u32) {
    if c == 0 {
        return;
    }
    for (w, &v) in src {
        let e = acc.entry(w.clone()).or_insert(0);
        *e = fp::add(*e, fp::mul(v, c, p), p);
        if *e == 0 {
            acc.remove(w);
        }
    }
}

/// `B *_A C` with words up to `max_word` letters.
#[derive(Debug)]
pub struct TruncatedFreeProduct {
    pub base: Arc<Algebra>,
    pub b: Factor,
    pub c: Factor,
    pub max_word: usize,
    /// `offsets[k]` is the number of normal words of length at most `k`.
    offsets: Vec<usize>,
    cache: RefCell<HashMap<(Word, Side, usize), Element>>,
}

/// Build `B *_A C` from unit maps `A -> B`, `A -> C`. Inadmissible inputs
/// are refused with the failed certificate.
pub fn free_product(fb: &AlgebraMap, fc: &AlgebraMap, max_word: usize) -> Result<std::result::Result<TruncatedFreeProduct, Inadmissible>> {
    if !same(&fb.source, &fc.source) {
        return Err(Error::InvalidInput("factors lie under different base algebras".into()));
    }
    if max_word == 0 {
        return Err(Error::InvalidInput("word bound must be positive".into()));
    }
    let b = match certify_free(fb, 0)? {
        Ok(f) => f,
        Err(r) => return Ok(Err(Inadmissible { reason: format!("B: {}", r.reason) })),
    };
    let c = match certify_free(fc, 0)? {
        Ok(f) => f,
        Err(r) => return Ok(Err(Inadmissible { reason: format!("C: {}", r.reason) })),
    };
    let mut offsets = vec![0usize];
    for k in 1..=max_word {
        let n = word_count(b.algebra().dim(), c.rank(), b.rank(), k);
        let total = offsets[k - 1].saturating_add(n);
        if total > DEFAULT_MAX_WORDS {
            return Err(Error::ResourceCap { cap: DEFAULT_MAX_WORDS, degree: k as i64, reached: k as i64 - 1 });
        }
        offsets.push(total);
    }
    Ok(Ok(TruncatedFreeProduct { base: fb.source.clone(), b, c, max_word, offsets, cache: RefCell::new(HashMap::new()) }))
}

/// Number of normal words with exactly `k` letters.
pub fn word_count(dim_b: usize, rank_c: usize, rank_b: usize, k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let gens = k - 1;
    let nc = gens.div_ceil(2);
    let nb = gens / 2;
    dim_b * rank_c.pow(nc as u32) * rank_b.pow(nb as u32)
}

impl TruncatedFreeProduct {
    pub fn p(&self) -> u32 {
        self.base.p()
    }

    fn factor(&self, s: Side) -> &Factor {
        match s {
            Side::B => &self.b,
            Side::C => &self.c,
        }
    }

    /// Number of normal words with at most `k` letters.
    pub fn words_up_to(&self, k: usize) -> usize {
        self.offsets[k.min(self.max_word)]
    }

    /// Position of a normal word among all words by length.
    pub fn index(&self, w: &[usize]) -> usize {
        let mut idx = 0;
        let mut radix = 1;
        for (i, &l) in w.iter().enumerate() {
            idx += l * radix;
            radix *= self.radix(i);
        }
        self.offsets[w.len() - 1] + idx
    }

    fn radix(&self, position: usize) -> usize {
        match position {
            0 => self.b.algebra().dim(),
            i if i % 2 == 1 => self.c.rank(),
            _ => self.b.rank(),
        }
    }

    /// All normal words with exactly `k` letters, in index order.
    pub fn words(&self, k: usize) -> Vec<Word> {
        let radices: Vec<usize> = (0..k).map(|i| self.radix(i)).collect();
        let n: usize = radices.iter().product();
        (0..n)
            .map(|mut x| {
                radices.iter().map(|&r| {
                    let d = x % r;
                    x /= r;
                    d
                }).collect()
            })
            .collect()
    }

    fn last_side(w: &[usize]) -> Side {
        if w.len() % 2 == 1 {
            Side::B
        } else {
            Side::C
        }
    }

    fn letter_value(&self, w: &[usize]) -> Vec<u32> {
        let l = *w.last().expect("nonempty word");
        if w.len() == 1 {
            self.b.algebra().basis(l)
        } else {
            self.factor(Self::last_side(w)).certificate.generators[l].clone()
        }
    }

    pub fn one(&self) -> Element {
        self.embed(Side::B, self.b.algebra().unit())
    }

    /// Image of an element of `B` or `C`.
    pub fn embed(&self, side: Side, x: &[u32]) -> Element {
        match side {
            Side::B => x.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (vec![i], c)).collect(),
            Side::C => self.rmul(&self.one(), x, Side::C),
        }
    }

    /// `u · x` for `x` in the factor `side`.
    pub fn rmul(&self, u: &Element, x: &[u32], side: Side) -> Element {
        let p = self.p();
        let mut out = Element::new();
        for (w, &c) in u {
            let prod = self.rmul_word(w, x, side);
            add_into(&mut out, &prod, c, p);
        }
        out
    }

    fn rmul_word(&self, w: &[usize], x: &[u32], side: Side) -> Element {
        let p = self.p();
        let mut out = Element::new();
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                let prod = self.rmul_basis(w, i, side);
                add_into(&mut out, &prod, c, p);
            }
        }
        out
    }

    fn rmul_basis(&self, w: &[usize], i: usize, side: Side) -> Element {
        let key = (w.to_vec(), side, i);
        if let Some(e) = self.cache.borrow().get(&key) {
            return e.clone();
        }
        let x = self.factor(side).algebra().basis(i);
        let out = if Self::last_side(w) == side {
            let y = self.factor(side).algebra().mul(&self.letter_value(w), &x);
            if w.len() == 1 {
                self.embed(Side::B, &y)
            } else {
                self.insert(&w[..w.len() - 1], &y, side)
            }
        } else {
            self.insert(w, &x, side)
        };
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    /// `w · x` where the last letter of `w` lies in the other factor.
    fn insert(&self, w: &[usize], x: &[u32], side: Side) -> Element {
        let p = self.p();
        let z = side.other();
        let fz = &self.factor(z).unit;
        let parts = self.factor(side).split(x);
        let mut out = self.rmul_word(w, &fz.apply(&parts[0]), z);
        for (k, a) in parts.iter().enumerate().skip(1) {
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            let head = self.rmul_word(w, &fz.apply(a), z);
            let tail = self.append(&head, k - 1, side);
            add_into(&mut out, &tail, 1, p);
        }
        out
    }

    /// Right multiplication by the generator `g_k` of `side`.
    fn append(&self, u: &Element, k: usize, side: Side) -> Element {
        let p = self.p();
        let mut out = Element::new();
        for (w, &c) in u {
            if Self::last_side(w) != side {
                let mut v = w.clone();
                v.push(k);
                add_into(&mut out, &HashMap::from([(v, 1)]), c, p);
            } else {
                let g = self.factor(side).certificate.generators[k].clone();
                let prod = self.rmul_word(w, &g, side);
                add_into(&mut out, &prod, c, p);
            }
        }
        out
    }

    /// The element a normal word names.
    pub fn word_element(&self, w: &[usize]) -> Element {
        HashMap::from([(w.to_vec(), 1)])
    }

    /// `u · v`, expanding `v` into its letters.
    pub fn mul(&self, u: &Element, v: &Element) -> Element {
        let p = self.p();
        let mut out = Element::new();
        for (w, &c) in v {
            let mut acc = self.rmul(u, &self.b.algebra().basis(w[0]), Side::B);
            for (pos, &g) in w.iter().enumerate().skip(1) {
                let side = if pos % 2 == 1 { Side::C } else { Side::B };
                acc = self.rmul(&acc, &self.factor(side).certificate.generators[g].clone(), side);
            }
            add_into(&mut out, &acc, c, p);
        }
        out
    }

    /// Longest word in the support; 0 for zero.
    pub fn length(u: &Element) -> usize {
        u.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn to_dense(&self, u: &Element, ambient: usize) -> Option<Vec<u32>> {
        let mut v = vec![0u32; ambient];
        for (w, &c) in u {
            let i = self.index(w);
            if i >= ambient {
                return None;
            }
            v[i] = c;
        }
        Some(v)
    }

    /// `dim F_k` for `k <= up_to`, spanning `F_k = F_{k-1} · X_k` from the
    /// products themselves; `X_k` is `B` for odd `k` and `C` for even `k`.
    /// Stops early after the first `k >= 2` with `F_k ≠ F_{k-1}` when
    /// `stop_at_growth` is set.
    pub fn filtration_dims(&self, up_to: usize, stop_at_growth: bool) -> Result<Vec<usize>> {
        let p = self.p();
        let up_to = up_to.min(self.max_word);
        if up_to == 0 {
            return Ok(vec![0]);
        }
        let mut dims = vec![0];
        let ambient = self.words_up_to(up_to);
        let mut ech = Echelon::new(p, ambient);
        let mut fresh = Vec::new();
        for j in 0..self.b.algebra().dim() {
            let e = self.embed(Side::B, &self.b.algebra().basis(j));
            if ech.insert(&self.to_dense(&e, ambient).expect("length one")) {
                fresh.push(e);
            }
        }
        dims.push(ech.dim());
        for k in 2..=up_to {
            let side = if k % 2 == 0 { Side::C } else { Side::B };
            let x = self.factor(side).algebra().clone();
            let mut next = Vec::new();
            for u in &fresh {
                for i in 0..x.dim() {
                    let prod = self.rmul(u, &x.basis(i), side);
                    let dense = self.to_dense(&prod, ambient).ok_or_else(|| Error::Internal("product longer than its factors".into()))?;
                    if ech.insert(&dense) {
                        next.push(prod);
                    }
                }
            }
            fresh = next;
            dims.push(ech.dim());
            if stop_at_growth && dims[k] != dims[k - 1] {
                break;
            }
        }
        Ok(dims)
    }

    /// `dim B ⊗_A W_1 ⊗_A ... ⊗_A W_{k-1}` with `W` alternating `C/A` and
    /// `B/A`, from iterated bimodule tensor products.
    pub fn formula_dim(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Ok(0);
        }
        let db = self.b.algebra().dim();
        if self.base.dim() == 1 {
            let bar_b = db - 1;
            let bar_c = self.c.algebra().dim() - 1;
            let gens = k - 1;
            return Ok(db * bar_c.pow(gens.div_ceil(2) as u32) * bar_b.pow((gens / 2) as u32));
        }
        let bar_b = bar_bimodule(&self.b.unit)?;
        let bar_c = bar_bimodule(&self.c.unit)?;
        let mut acc = b_over_a(&self.b.unit)?;
        for i in 1..k {
            let w = if i % 2 == 1 { &bar_c } else { &bar_b };
            acc = acc.tensor(w)?.0;
            if acc.dim() == 0 {
                break;
            }
        }
        Ok(acc.dim())
    }

    /// Sampled check of `F_n F_k ⊆ F_{n+k}`: products of random normal words
    /// of lengths `n`, `k` with `n + k <= max_word`. Returns the number of
    /// products checked, or the first offending pair.
    pub fn check_multiplicativity(&self, samples: usize, seed: u64) -> std::result::Result<usize, (Word, Word)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        for _ in 0..samples {
            let Some((u, v)) = self.random_pair(&mut rng, self.max_word) else { break };
            let prod = self.mul(&self.word_element(&u), &self.word_element(&v));
            if Self::length(&prod) > u.len() + v.len() {
                return Err((u, v));
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// Sampled associativity on triples of normal words with total length
    /// at most `max_word`.
    pub fn check_associativity(&self, samples: usize, seed: u64) -> std::result::Result<usize, (Word, Word, Word)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        for _ in 0..samples {
            if self.max_word < 3 {
                break;
            }
            let Some((u, v)) = self.random_pair(&mut rng, self.max_word - 1) else { break };
            let rest = self.max_word - u.len() - v.len();
            if rest == 0 {
                continue;
            }
            let l = rng.gen_range(1..=rest);
            let ws = self.words(l);
            if ws.is_empty() {
                continue;
            }
            let w = ws[rng.gen_range(0..ws.len())].clone();
            let (eu, ev, ew) = (self.word_element(&u), self.word_element(&v), self.word_element(&w));
            let left = self.mul(&self.mul(&eu, &ev), &ew);
            let right = self.mul(&eu, &self.mul(&ev, &ew));
            if left != right {
                return Err((u, v, w));
            }
            checked += 1;
        }
        Ok(checked)
    }

    fn random_pair(&self, rng: &mut ChaCha8Rng, total: usize) -> Option<(Word, Word)> {
        if total < 2 {
            return None;
        }
        let n = rng.gen_range(1..total);
        let k = rng.gen_range(1..=total - n);
        let (a, b) = (self.words(n), self.words(k));
        if a.is_empty() || b.is_empty() {
            return None;
        }
        Some((a[rng.gen_range(0..a.len())].clone(), b[rng.gen_range(0..b.len())].clone()))
    }
}

/// `X/A` as an `(A, A)`-bimodule.
fn bar_bimodule(f: &AlgebraMap) -> Result<Bimodule> {
    let a = &f.source;
    let x = &f.target;
    let left = (0..a.dim()).map(|i| x.left_matrix(&f.apply(&a.basis(i)))).collect();
    let right = (0..a.dim()).map(|i| x.right_matrix(&f.apply(&a.basis(i)))).collect();
    let whole = Bimodule::new(a.clone(), a.clone(), x.dim(), left, right)?;
    Ok(whole.quotient(&Subspace::from_columns(&f.matrix))?.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientComparison {
    pub k: usize,
    pub direct: usize,
    pub formula: usize,
    pub agree: bool,
}

/// `dim F_k/F_{k-1}` directly and from the tensor formula for
/// `k = 2n+1, 2n+2`.
pub fn filtration_quotients(fp: &TruncatedFreeProduct, n: usize) -> Result<Vec<QuotientComparison>> {
    let top = 2 * n + 2;
    if top > fp.max_word {
        return Err(Error::UntrustedDegree { degree: top as i64, trusted_to: fp.max_word as i64 });
    }
    let dims = fp.filtration_dims(top, false)?;
    (2 * n + 1..=top)
        .map(|k| {
            let direct = dims[k] - dims[k - 1];
            let formula = fp.formula_dim(k)?;
            Ok(QuotientComparison { k, direct, formula, agree: direct == formula })
        })
        .collect()
}

/// Every quotient `F_k/F_{k-1}` for `1 <= k <= fp.max_word`, both ways.
pub fn all_filtration_quotients(fp: &TruncatedFreeProduct) -> Result<Vec<QuotientComparison>> {
    let dims = fp.filtration_dims(fp.max_word, false)?;
    (1..=fp.max_word)
        .map(|k| {
            let direct = dims[k] - dims[k - 1];
            let formula = fp.formula_dim(k)?;
            Ok(QuotientComparison { k, direct, formula, agree: direct == formula })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomotopyEpiVerdict {
    YesUpTo { max_word: usize },
    No { word_length: usize, quotient_dim: usize },
    Inadmissible { reason: String },
}

impl HomotopyEpiVerdict {
    pub fn is_yes(&self) -> Option<bool> {
        match self {
            HomotopyEpiVerdict::YesUpTo { .. } => Some(true),
            HomotopyEpiVerdict::No { .. } => Some(false),
            HomotopyEpiVerdict::Inadmissible { .. } => None,
        }
    }
}

/// Whether `B *_A B -> B` is an isomorphism through words of length
/// `max_word`: every quotient `F_k/F_{k-1}` with `k >= 2` must vanish.
pub fn is_homotopy_epi(f: &AlgebraMap, max_word: usize) -> Result<HomotopyEpiVerdict> {
    let fp = match free_product(f, f, max_word.max(1))? {
        Ok(fp) => fp,
        Err(r) => return Ok(HomotopyEpiVerdict::Inadmissible { reason: r.reason }),
    };
    if max_word < 2 {
        return Ok(HomotopyEpiVerdict::YesUpTo { max_word });
    }
    let dims = fp.filtration_dims(max_word, true)?;
    for k in 2..dims.len() {
        if dims[k] != dims[k - 1] {
            return Ok(HomotopyEpiVerdict::No { word_length: k, quotient_dim: dims[k] - dims[k - 1] });
        }
    }
    Ok(HomotopyEpiVerdict::YesUpTo { max_word })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn ga(name: &str, p: u32) -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::from_name(name).unwrap(), p).unwrap())
    }

    fn from_ground(b: &Arc<Algebra>) -> AlgebraMap {
        let k = Arc::new(Algebra::ground(b.p()));
        AlgebraMap::from_images(k, b.clone(), &[b.unit().to_vec()]).unwrap()
    }

    #[test]
    fn infinite_dihedral_words() {
        let b = ga("C2", 3);
        let f = from_ground(&b);
        let fp = free_product(&f, &f, 4).unwrap().unwrap();
        assert_eq!(fp.filtration_dims(4, false).unwrap(), vec![0, 2, 4, 6, 8]);
        let q = filtration_quotients(&fp, 0).unwrap();
        assert!(q.iter().all(|c| c.agree));
        assert_eq!((q[0].direct, q[1].direct), (2, 2));
        assert_eq!(fp.check_associativity(50, 1), Ok(50));
    }

    #[test]
    fn cyclic_three_quotients() {
        let b = ga("C3", 3);
        let f = from_ground(&b);
        let fp = free_product(&f, &f, 5).unwrap().unwrap();
        let q = all_filtration_quotients(&fp).unwrap();
        let direct: Vec<usize> = q.iter().map(|c| c.direct).collect();
        assert_eq!(direct, vec![3, 6, 12, 24, 48]);
        assert!(q.iter().all(|c| c.agree));
        assert!(fp.check_multiplicativity(60, 2).is_ok());
        assert!(fp.check_associativity(40, 3).is_ok());
    }

    #[test]
    fn base_equal_to_factor() {
        let a = ga("C2", 3);
        let id = AlgebraMap::identity(a.clone());
        let c = Arc::new(a.tensor(&Algebra::truncated_polynomial(3, 2).unwrap()).unwrap());
        let images: Vec<Vec<u32>> = (0..2).map(|i| {
            let mut v = vec![0; 4];
            v[2 * i] = 1;
            v
        }).collect();
        let fc = AlgebraMap::from_images(a.clone(), c.clone(), &images).unwrap();
        let fp = free_product(&id, &fc, 4).unwrap().unwrap();
        assert_eq!(fp.filtration_dims(4, false).unwrap(), vec![0, 2, 4, 4, 4]);
        assert!(all_filtration_quotients(&fp).unwrap().iter().all(|c| c.agree));
        assert!(fp.check_associativity(40, 4).is_ok());
    }

    #[test]
    fn noncommutative_base() {
        // A = F_3[C_2] inside B = F_3[S_3] and C = A ⊗ F_3[x]/x^2.
        let a = ga("C2", 3);
        let s3 = ga("S3", 3);
        let t = s3.parse_element("(12)").unwrap();
        let fb = AlgebraMap::from_images(a.clone(), s3.clone(), &[s3.unit().to_vec(), t]).unwrap();
        let c = Arc::new(a.tensor(&Algebra::truncated_polynomial(3, 2).unwrap()).unwrap());
        let fc = AlgebraMap::from_images(a.clone(), c, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let fp = free_product(&fb, &fc, 5).unwrap().unwrap();
        assert_eq!((fp.b.rank(), fp.c.rank()), (2, 1));
        let q = all_filtration_quotients(&fp).unwrap();
        assert!(q.iter().all(|c| c.agree), "{q:?}");
        assert!(fp.check_associativity(60, 5).is_ok());
        assert!(fp.check_multiplicativity(60, 6).is_ok());
        // a ∈ A is the same element from either side
        let x = a.basis(1);
        assert_eq!(fp.embed(Side::B, &fb.apply(&x)), fp.embed(Side::C, &fp.c.unit.apply(&x)));
    }

    #[test]
    fn homotopy_epi_verdicts() {
        let a = ga("C3", 3);
        assert_eq!(is_homotopy_epi(&AlgebraMap::identity(a.clone()), 6).unwrap(), HomotopyEpiVerdict::YesUpTo { max_word: 6 });
        let b = ga("C2", 3);
        assert_eq!(is_homotopy_epi(&from_ground(&b), 6).unwrap(), HomotopyEpiVerdict::No { word_length: 2, quotient_dim: 2 });
        let aug = AlgebraMap::augmentation(a).unwrap();
        assert!(matches!(is_homotopy_epi(&aug, 6).unwrap(), HomotopyEpiVerdict::Inadmissible { .. }));
    }

    #[test]
    fn non_free_quotient_is_refused() {
        // F_3[x]/x^3 over F_3[x]/x^2 via x -> x^2: dimension 3 is odd.
        let a = Arc::new(Algebra::truncated_polynomial(3, 2).unwrap());
        let b = Arc::new(Algebra::truncated_polynomial(3, 3).unwrap());
        let f = AlgebraMap::from_images(a, b, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert!(certify_free(&f, 0).unwrap().is_err());
    }
}
