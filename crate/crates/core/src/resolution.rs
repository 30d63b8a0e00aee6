//! Bar, minimal projective and squeezed resolutions, and the `z`-maps of a
//! squeezed resolution.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{same, Algebra};
use crate::complex::{AComplex, ChainMap, UNBOUNDED};
use crate::error::{Error, Result};
use crate::fp::{self, Echelon, FpMatrix, Subspace};
use crate::idempotent::Idempotent;
use crate::module::{Bimodule, Module};
use crate::proj::{ElemMatrix, ProjComplex, ProjMap, Realization};

/// Largest allowed term dimension.
pub const DEFAULT_MAX_DIM: usize = 20_000;
/// Largest allowed number of entries in one differential matrix.
pub const DEFAULT_MAX_SPARSE_DIM: usize = 2_000_000;
pub const DEFAULT_MAX_ENTRIES: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest dense term.
    pub max_dim: usize,
    /// Largest dense differential, or the most stored nonzeros of a sparse one.
    pub max_entries: usize,
    /// Largest term of a sparse bar complex.
    pub max_sparse_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_dim: DEFAULT_MAX_DIM, max_entries: DEFAULT_MAX_ENTRIES, max_sparse_dim: DEFAULT_MAX_SPARSE_DIM }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionKind {
    Bar,
    MinimalProjective,
    Squeezed,
}

/// Ground ring of a normalized bar construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BarBase {
    /// Over F_p with `Ā = A / F_p`.
    Ground,
    /// Over the span `S` of a complete set of orthogonal primitive
    /// idempotents when `A = S ⊕ J`, with `W = J`. Falls back to `Ground`
    /// when `A/J` is not a product of copies of F_p.
    Split,
}

/// Data specific to a squeezed resolution.
#[derive(Clone, Debug)]
pub struct Squeeze {
    pub e: Vec<u32>,
    /// `α ∈ eA(1-e)`, acting `Ae -> A(1-e)`.
    pub alpha: Vec<u32>,
    /// `β ∈ (1-e)Ae`, acting `A(1-e) -> Ae`.
    pub beta: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub kind: ResolutionKind,
    /// The complex of left `A`-modules.
    pub complex: AComplex,
    pub proj: Option<ProjComplex>,
    pub realization: Option<Realization>,
    /// `P_0 -> M` in realized coordinates (bar and minimal).
    pub augmentation: Option<FpMatrix>,
    /// Images in `M` of the degree-zero generators (minimal).
    pub generators: Vec<Vec<u32>>,
    pub augments_to: String,
    pub trusted_length: usize,
    pub squeeze: Option<Squeeze>,
}

impl Resolution {
    /// `dim H_0` matches the module and `H_1 .. H_{trusted_length-1}` vanish.
    pub fn check_exact(&self, module_dim: usize) -> Result<()> {
        let h0 = self.complex.homology_dim(0)?;
        if h0 != module_dim {
            return Err(Error::Internal(format!("H_0 has dimension {h0}, expected {module_dim}")));
        }
        let top = (self.trusted_length as i64 - 1).min(self.complex.max_deg());
        for n in 1..=top {
            let h = self.complex.homology_dim(n)?;
            if h != 0 {
                return Err(Error::Internal(format!("resolution not exact in degree {n}")));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Bar construction

/// Decomposition of `A = S ⊕ W` used by the normalized bar construction.
#[derive(Clone, Debug)]
pub struct BarData {
    pub base: BarBase,
    pub idempotents: Vec<Vec<u32>>,
    /// `W` basis elements with their source and target idempotent indices.
    pub w: Vec<(usize, usize, Vec<u32>)>,
    blocks: Vec<Vec<Subspace>>,
    pivot: Option<usize>,
}

impl BarData {
    pub fn new(a: &Algebra, base: BarBase) -> Result<Self> {
        if base == BarBase::Split {
            let st = a.structure()?;
            if let Some(idems) = st.split_basic_idempotents(a)? {
                let j = &st.radical;
                let r = idems.len();
                let mut blocks = vec![Vec::with_capacity(r); r];
                let mut w = Vec::new();
                for (i, ei) in idems.iter().enumerate() {
                    for (k, ek) in idems.iter().enumerate() {
                        let b = a.corner_space(ei, ek).intersect(j);
                        for v in b.vectors() {
                            w.push((i, k, v));
                        }
                        blocks[i].push(b);
                    }
                }
                return Ok(BarData { base, idempotents: idems, w, blocks, pivot: None });
            }
        }
        let unit = a.unit();
        let piv = unit.iter().position(|&c| c != 0).ok_or_else(|| Error::InvalidAlgebra("zero unit".into()))?;
        let cols: Vec<Vec<u32>> = (0..a.dim()).filter(|&k| k != piv).map(|k| a.basis(k)).collect();
        let sub = Subspace::span(a.p(), a.dim(), &cols);
        let w = cols.into_iter().map(|v| (0, 0, v)).collect();
        Ok(BarData { base: BarBase::Ground, idempotents: vec![unit.to_vec()], w, blocks: vec![vec![sub]], pivot: Some(piv) })
    }

    /// W-coordinates of a product of two W elements, in block `(i, k)`.
    fn reduce_product(&self, a: &Algebra, i: usize, k: usize, x: &[u32]) -> Result<Vec<u32>> {
        let mut y = x.to_vec();
        if let Some(piv) = self.pivot {
            let u = a.unit();
            let c = fp::mul(y[piv], fp::inv(u[piv], a.p()), a.p());
            y = a.sub(&y, &a.scale(u, c));
        }
        self.blocks[i][k].try_coords(&y).ok_or_else(|| Error::Internal("bar product left the radical block".into()))
    }

    fn block_offset(&self, i: usize, k: usize) -> usize {
        self.w.iter().position(|&(s, t, _)| s == i && t == k).unwrap_or(self.w.len())
    }
}

fn sparse(v: &[u32]) -> Vec<(usize, u32)> {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
}

/// Number of basis tuples of `N ⊗_S W^{⊗n} ⊗_S M` per degree.
fn bar_counts(data: &BarData, nd: &[usize], md: &[usize], length: usize) -> Vec<u128> {
    let r = data.idempotents.len();
    // tails[j] = number of `(w_1, .., w_n, m)` starting at idempotent j
    let mut tails: Vec<u128> = md.iter().map(|&d| d as u128).collect();
    let mut out = Vec::with_capacity(length + 1);
    for n in 0..=length {
        out.push((0..r).map(|j| nd[j] as u128 * tails[j]).sum());
        let mut next = vec![0u128; r];
        for &(s, t, _) in &data.w {
            next[s] = next[s].saturating_add(tails[t]);
        }
        if n < length {
            tails = next;
        }
    }
    out
}

/// Term dimensions of the normalized bar complex `N ⊗_S W^{⊗n} ⊗_S M`.
pub fn bar_term_dims(data: &BarData, n: &Bimodule, m: &Module, length: usize) -> Vec<u128> {
    let nd: Vec<usize> = data.idempotents.iter().map(|e| n.right_act(e).rank()).collect();
    let md: Vec<usize> = data.idempotents.iter().map(|e| m.act(e).rank()).collect();
    bar_counts(data, &nd, &md, length)
}

/// Check the term and matrix caps for a bar complex through `length`.
/// On failure the error names the first offending degree and the highest
/// degree through which homology is still computable.
pub fn check_bar_caps(dims: &[u128], caps: &Caps) -> Result<()> {
    for (k, &d) in dims.iter().enumerate() {
        let entries = if k == 0 { 0 } else { d.saturating_mul(dims[k - 1]) };
        if d > caps.max_dim as u128 || entries > caps.max_entries as u128 {
            let cap = if d > caps.max_dim as u128 { caps.max_dim } else { caps.max_entries };
            return Err(Error::ResourceCap { cap, degree: k as i64, reached: k as i64 - 2 });
        }
    }
    Ok(())
}

/// The normalized bar complex `N ⊗_S W^{⊗n} ⊗_S M` for a `(K, A)`-bimodule
/// `N` and a left module `M`, in degrees `0..=length`. The left action of
/// `K` is attached when `with_action` is set.
pub fn bar_complex(
    data: &BarData,
    n: &Bimodule,
    m: &Module,
    length: usize,
    caps: &Caps,
    with_action: bool,
) -> Result<AComplex> {
    match bar_build(data, n, m, length, caps, Some(with_action))? {
        BarBuild::Dense(c) => Ok(c),
        BarBuild::Sparse(_) => Err(Error::Internal("dense bar build returned sparse data".into())),
    }
}

/// Sparse differentials of a bar complex: `columns[k][c]` lists the
/// nonzero `(row, value)` entries of column `c` of `d_k`, rows increasing.
#[derive(Clone, Debug)]
pub struct SparseBar {
    pub dims: Vec<usize>,
    pub columns: Vec<Vec<Vec<(usize, u32)>>>,
}

impl SparseBar {
    /// `dim H_k` for `0 <= k < length`; the top degree is untrusted.
    pub fn homology_dims(&self, p: u32) -> Vec<usize> {
        let len = self.dims.len();
        let ranks: Vec<usize> = (0..len)
            .map(|k| if k == 0 { 0 } else { fp::sparse_rank(p, &self.columns[k]) })
            .collect();
        (0..len.saturating_sub(1)).map(|k| self.dims[k] - ranks[k] - ranks[k + 1]).collect()
    }
}

/// The bar complex as sparse columns, capped by `max_sparse_dim` per term
/// and `max_entries` stored nonzeros per differential.
pub fn sparse_bar_complex(data: &BarData, n: &Bimodule, m: &Module, length: usize, caps: &Caps) -> Result<SparseBar> {
    match bar_build(data, n, m, length, caps, None)? {
        BarBuild::Sparse(s) => Ok(s),
        BarBuild::Dense(_) => Err(Error::Internal("sparse bar build returned dense data".into())),
    }
}

enum BarBuild {
    Dense(AComplex),
    Sparse(SparseBar),
}

/// `with_action`: `Some(_)` builds the dense complex, `None` sparse columns.
fn bar_build(data: &BarData, n: &Bimodule, m: &Module, length: usize, caps: &Caps, with_action: Option<bool>) -> Result<BarBuild> {
    let a = m.algebra().clone();
    if !same(n.right(), &a) {
        return Err(Error::InvalidInput("bar complex over mismatched algebras".into()));
    }
    let p = a.p();
    let r = data.idempotents.len();
    let nsub: Vec<Subspace> = data.idempotents.iter().map(|e| Subspace::from_columns(&n.right_act(e))).collect();
    let msub: Vec<Subspace> = data.idempotents.iter().map(|e| Subspace::from_columns(&m.act(e))).collect();
    let nd: Vec<usize> = nsub.iter().map(|s| s.dim()).collect();
    let md: Vec<usize> = msub.iter().map(|s| s.dim()).collect();
    let dims = bar_counts(data, &nd, &md, length);
    match with_action {
        Some(_) => check_bar_caps(&dims, caps)?,
        None => {
            if let Some(k) = dims.iter().position(|&d| d > caps.max_sparse_dim as u128) {
                return Err(Error::ResourceCap { cap: caps.max_sparse_dim, degree: k as i64, reached: k as i64 - 2 });
            }
        }
    }

    // Global M indices: (idempotent, index within ε_j M).
    let mut m_off = vec![0usize; r + 1];
    for j in 0..r {
        m_off[j + 1] = m_off[j] + md[j];
    }
    let m_owner = |g: usize| (0..r).find(|&j| g < m_off[j + 1]).unwrap_or(0);
    let nw = data.w.len();

    // Products.
    let mut ww: Vec<Vec<Vec<(usize, u32)>>> = vec![vec![Vec::new(); nw]; nw];
    for (x, (s, t, wx)) in data.w.iter().enumerate() {
        for (y, (s2, t2, wy)) in data.w.iter().enumerate() {
            if t != s2 {
                continue;
            }
            let prod = a.mul(wx, wy);
            let c = data.reduce_product(&a, *s, *t2, &prod)?;
            let off = data.block_offset(*s, *t2);
            ww[x][y] = sparse(&c).into_iter().map(|(i, v)| (off + i, v)).collect();
        }
    }
    // w · m.
    let mut wm: Vec<Vec<Vec<(usize, u32)>>> = vec![vec![Vec::new(); m_off[r]]; nw];
    for (x, (s, t, wx)) in data.w.iter().enumerate() {
        let act = m.act(wx);
        for k in 0..md[*t] {
            let img = act.mul_vec(&msub[*t].vector(k));
            let c = msub[*s].try_coords(&img).ok_or_else(|| Error::Internal("w·m outside its summand".into()))?;
            wm[x][m_off[*t] + k] = sparse(&c).into_iter().map(|(i, v)| (m_off[*s] + i, v)).collect();
        }
    }
    // ν · w.
    let mut nwv: Vec<Vec<Vec<(usize, u32)>>> = vec![Vec::new(); nw];
    for (x, (s, t, wx)) in data.w.iter().enumerate() {
        let act = n.right_act(wx);
        nwv[x] = (0..nd[*s])
            .map(|k| {
                let img = act.mul_vec(&nsub[*s].vector(k));
                nsub[*t].try_coords(&img).map(|c| sparse(&c)).ok_or_else(|| Error::Internal("n·w outside its summand".into()))
            })
            .collect::<Result<_>>()?;
    }

    // Tails per degree and start idempotent.
    let mut tails: Vec<Vec<Vec<Vec<u32>>>> = Vec::with_capacity(length + 1);
    let t0: Vec<Vec<Vec<u32>>> = (0..r).map(|j| (m_off[j]..m_off[j + 1]).map(|g| vec![g as u32]).collect()).collect();
    tails.push(t0);
    for k in 1..=length {
        let prev = &tails[k - 1];
        let mut cur: Vec<Vec<Vec<u32>>> = vec![Vec::new(); r];
        for (x, &(s, t, _)) in data.w.iter().enumerate() {
            for tail in &prev[t] {
                let mut v = Vec::with_capacity(tail.len() + 1);
                v.push(x as u32);
                v.extend_from_slice(tail);
                cur[s].push(v);
            }
        }
        tails.push(cur);
    }
    let index: Vec<Vec<HashMap<Vec<u32>, usize>>> = tails
        .iter()
        .map(|per| per.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect())
        .collect();
    let offsets: Vec<Vec<usize>> = tails
        .iter()
        .map(|per| {
            let mut o = vec![0usize; r + 1];
            for j in 0..r {
                o[j + 1] = o[j] + nd[j] * per[j].len();
            }
            o
        })
        .collect();
    let pos = |k: usize, j: usize, nu: usize, tail: &[u32]| -> usize {
        offsets[k][j] + nu * tails[k][j].len() + index[k][j][tail]
    };

    let mut columns: Vec<Vec<Vec<(usize, u32)>>> = Vec::with_capacity(length + 1);
    columns.push(vec![Vec::new(); offsets[0][r]]);
    for k in 1..=length {
        let mut d: Vec<Vec<(usize, u32)>> = vec![Vec::new(); offsets[k][r]];
        let mut stored = 0usize;
        for j in 0..r {
            for nu in 0..nd[j] {
                for tail in &tails[k][j] {
                    let col = pos(k, j, nu, tail);
                    let w1 = tail[0] as usize;
                    let t1 = data.w[w1].1;
                    for &(nu2, c) in &nwv[w1][nu] {
                        let row = pos(k - 1, t1, nu2, &tail[1..]);
                        d[col].push((row, c));
                    }
                    let mut buf: Vec<u32> = Vec::with_capacity(tail.len());
                    for i in 1..k {
                        let sign_neg = i % 2 == 1;
                        let (x, y) = (tail[i - 1] as usize, tail[i] as usize);
                        for &(z, c) in &ww[x][y] {
                            buf.clear();
                            buf.extend_from_slice(&tail[..i - 1]);
                            buf.push(z as u32);
                            buf.extend_from_slice(&tail[i + 1..]);
                            let row = pos(k - 1, j, nu, &buf);
                            let c = if sign_neg { fp::neg(c, p) } else { c };
                            d[col].push((row, c));
                        }
                    }
                    let (x, mg) = (tail[k - 1] as usize, tail[k] as usize);
                    for &(m2, c) in &wm[x][mg] {
                        buf.clear();
                        buf.extend_from_slice(&tail[..k - 1]);
                        buf.push(m2 as u32);
                        let start = if k == 1 { m_owner(m2) } else { j };
                        let row = pos(k - 1, start, nu, &buf);
                        let c = if k % 2 == 1 { fp::neg(c, p) } else { c };
                        d[col].push((row, c));
                    }
                    fp::normalize_sparse(&mut d[col], p);
                    stored += d[col].len();
                }
            }
            if with_action.is_none() && stored > caps.max_entries {
                return Err(Error::ResourceCap { cap: caps.max_entries, degree: k as i64, reached: k as i64 - 2 });
            }
        }
        columns.push(d);
    }
    let Some(with_action) = with_action else {
        let dims = offsets.iter().map(|o| o[r]).collect();
        return Ok(BarBuild::Sparse(SparseBar { dims, columns }));
    };
    let mut diffs = Vec::with_capacity(length + 1);
    for (k, cols) in columns.iter().enumerate() {
        let rows = if k == 0 { 0 } else { offsets[k - 1][r] };
        let mut d = FpMatrix::zeros(p, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for &(row, v) in col {
                d.set(row, c, v);
            }
        }
        diffs.push(d);
    }

    let left = if with_action {
        let mut act = Vec::with_capacity(length + 1);
        for k in 0..=length {
            let total = offsets[k][r];
            let per: Vec<FpMatrix> = n
                .left_action()
                .iter()
                .map(|g| {
                    let mut mat = FpMatrix::zeros(p, total, total);
                    for j in 0..r {
                        if nd[j] == 0 {
                            continue;
                        }
                        let rj = crate::idempotent::restrict_to(&nsub[j], g);
                        let len = tails[k][j].len();
                        for a_ in 0..nd[j] {
                            for b_ in 0..nd[j] {
                                let c = rj.get(a_, b_);
                                if c == 0 {
                                    continue;
                                }
                                for t in 0..len {
                                    mat.set(offsets[k][j] + a_ * len + t, offsets[k][j] + b_ * len + t, c);
                                }
                            }
                        }
                    }
                    mat
                })
                .collect();
            act.push(per);
        }
        Some(act)
    } else {
        None
    };
    let c = AComplex::new_unchecked(n.left().clone(), 0, diffs, left)?.with_trusted(length as i64 - 1);
    Ok(BarBuild::Dense(c))
}

/// Normalized bar resolution `A ⊗ Ā^{⊗n} ⊗ M` in degrees `0..=length`.
pub fn bar_resolution(a: &Arc<Algebra>, m: &Module, length: usize) -> Result<Resolution> {
    bar_resolution_with(a, m, length, BarBase::Ground, &Caps::default())
}

pub fn bar_resolution_with(a: &Arc<Algebra>, m: &Module, length: usize, base: BarBase, caps: &Caps) -> Result<Resolution> {
    if length < 1 {
        return Err(Error::InvalidInput("resolution length must be at least 1".into()));
    }
    if !same(m.algebra(), a) {
        return Err(Error::InvalidInput("module over a different algebra".into()));
    }
    let data = BarData::new(a, base)?;
    let reg = Bimodule::regular(a.clone());
    let complex = bar_complex(&data, &reg, m, length, caps, true)?;
    // Augmentation a ⊗ m -> a m on the degree-zero term ⊕_j A ε_j ⊗ ε_j M.
    let p = a.p();
    let mut aug = FpMatrix::zeros(p, m.dim(), complex.dim(0));
    let mut col = 0;
    for e in &data.idempotents {
        let ns = a.left_ideal(e);
        let ms = Subspace::from_columns(&m.act(e));
        for x in ns.vectors() {
            let ax = m.act(&x);
            for mv in ms.vectors() {
                let img = ax.mul_vec(&mv);
                for (r, &c) in img.iter().enumerate() {
                    aug.set(r, col, c);
                }
                col += 1;
            }
        }
    }
    let res = Resolution {
        kind: ResolutionKind::Bar,
        complex,
        proj: None,
        realization: None,
        augmentation: Some(aug),
        generators: Vec::new(),
        augments_to: format!("module of dimension {}", m.dim()),
        trusted_length: length,
        squeeze: None,
    };
    Ok(res)
}

// ---------------------------------------------------------------------------
// Minimal projective resolution

/// Ambient space for syzygies: either `M` itself or `A^r` flattened.
enum Ambient<'a> {
    Module(&'a Module),
    Free(usize),
}

impl Ambient<'_> {
    fn dim(&self, a: &Algebra) -> usize {
        match self {
            Ambient::Module(m) => m.dim(),
            Ambient::Free(r) => r * a.dim(),
        }
    }

    fn act(&self, a: &Algebra, x: &[u32], v: &[u32]) -> Vec<u32> {
        match self {
            Ambient::Module(m) => m.act_vec(x, v),
            Ambient::Free(_) => {
                let n = a.dim();
                v.chunks(n).flat_map(|c| a.mul(x, c)).collect()
            }
        }
    }
}

/// Minimal generators `m_j ∈ f_{b_j} Z` of a submodule `Z`, with their blocks.
fn cover(a: &Algebra, amb: &Ambient, z: &Subspace, blocks: &[Vec<u32>], radical: &[Vec<u32>]) -> Result<Vec<(usize, Vec<u32>)>> {
    let p = a.p();
    let n = amb.dim(a);
    let zb = z.vectors();
    let mut span = Echelon::new(p, n);
    for j in radical {
        for v in &zb {
            span.insert(&amb.act(a, j, v));
        }
    }
    let mut gens = Vec::new();
    let basis: Vec<Vec<u32>> = (0..a.dim()).map(|i| a.basis(i)).collect();
    for (b, f) in blocks.iter().enumerate() {
        if span.dim() == z.dim() {
            break;
        }
        for v in &zb {
            let c = amb.act(a, f, v);
            if span.contains(&c) {
                continue;
            }
            for x in &basis {
                span.insert(&amb.act(a, x, &c));
            }
            gens.push((b, c));
            if span.dim() == z.dim() {
                break;
            }
        }
    }
    if span.dim() != z.dim() {
        return Err(Error::Internal("projective cover does not generate".into()));
    }
    Ok(gens)
}

pub fn minimal_projective_resolution(a: &Arc<Algebra>, m: &Module, length: usize) -> Result<Resolution> {
    minimal_projective_resolution_with(a, m, length, &Caps::default())
}

pub fn minimal_projective_resolution_with(a: &Arc<Algebra>, m: &Module, length: usize, caps: &Caps) -> Result<Resolution> {
    if !same(m.algebra(), a) {
        return Err(Error::InvalidInput("module over a different algebra".into()));
    }
    let st = a.structure()?;
    let blocks: Vec<Vec<u32>> = st.blocks.iter().map(|b| b.idempotent.clone()).collect();
    let radical = st.radical.vectors();
    let p = a.p();
    let nd = a.dim();

    let mut terms: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut diffs: Vec<ElemMatrix> = Vec::new();
    let mut generators = Vec::new();
    let mut z = Subspace::full(p, m.dim());
    let mut amb_rank: Option<usize> = None;
    let mut finite = false;
    for k in 0..=length {
        let amb = match amb_rank {
            None => Ambient::Module(m),
            Some(r) => Ambient::Free(r),
        };
        if z.dim() == 0 {
            finite = true;
            break;
        }
        let gens = cover(a, &amb, &z, &blocks, &radical)?;
        let idems: Vec<Vec<u32>> = gens.iter().map(|(b, _)| blocks[*b].clone()).collect();
        let summands: Vec<Subspace> = idems.iter().map(|e| a.left_ideal(e)).collect();
        let dim_k: usize = summands.iter().map(|s| s.dim()).sum();
        if dim_k > caps.max_dim {
            return Err(Error::ResourceCap { cap: caps.max_dim, degree: k as i64, reached: k as i64 - 1 });
        }
        // φ: P_k -> ambient, x ε_g -> x · m_g.
        let mut phi = FpMatrix::zeros(p, amb.dim(a), dim_k);
        let mut col = 0;
        for ((_, g), s) in gens.iter().zip(&summands) {
            for x in s.vectors() {
                let img = amb.act(a, &x, g);
                for (r, &c) in img.iter().enumerate() {
                    phi.set(r, col, c);
                }
                col += 1;
            }
        }
        let ker = phi.nullspace();
        let mut kvecs = Vec::with_capacity(ker.cols());
        for c in ker.columns() {
            let mut v = vec![0u32; gens.len() * nd];
            let mut o = 0;
            for (g, s) in summands.iter().enumerate() {
                let part = s.basis().mul_vec(&c[o..o + s.dim()]);
                v[g * nd..(g + 1) * nd].copy_from_slice(&part);
                o += s.dim();
            }
            kvecs.push(v);
        }
        if k == 0 {
            generators = gens.iter().map(|(_, g)| g.clone()).collect();
        } else {
            let r_prev = amb_rank.unwrap_or(0);
            let rows: Vec<Vec<Vec<u32>>> = gens.iter().map(|(_, g)| (0..r_prev).map(|t| g[t * nd..(t + 1) * nd].to_vec()).collect()).collect();
            diffs.push(ElemMatrix::from_rows(rows, r_prev)?);
        }
        terms.push(idems);
        z = Subspace::span(p, gens.len() * nd, &kvecs);
        amb_rank = Some(gens.len());
        if k == length && z.dim() == 0 {
            finite = true;
        }
    }
    if terms.is_empty() {
        // M = 0
        terms.push(Vec::new());
    }
    let trusted = if finite { UNBOUNDED } else { length as i64 - 1 };
    let proj = ProjComplex::new(a.clone(), terms, diffs)?.with_trusted(trusted);
    let real = proj.realize()?;
    // augmentation in realized coordinates
    let mut aug = FpMatrix::zeros(p, m.dim(), real.complex.dim(0));
    let mut col = 0;
    for (s, g) in real.summands[0].iter().zip(&generators) {
        for x in s.vectors() {
            let img = m.act_vec(&x, g);
            for (r, &c) in img.iter().enumerate() {
                aug.set(r, col, c);
            }
            col += 1;
        }
    }
    Ok(Resolution {
        kind: ResolutionKind::MinimalProjective,
        complex: real.complex.clone(),
        proj: Some(proj),
        realization: Some(real),
        augmentation: Some(aug),
        generators,
        augments_to: format!("module of dimension {}", m.dim()),
        trusted_length: if finite { usize::MAX } else { length },
        squeeze: None,
    })
}

/// All differential entries lie in the radical.
pub fn is_minimal(res: &Resolution) -> Result<bool> {
    let Some(proj) = &res.proj else {
        return Ok(false);
    };
    let st = proj.algebra().structure()?;
    for k in 1..proj.len() {
        let d = proj.d(k);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if !st.radical.contains(d.get(i, j)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Squeezed resolution

/// `P_0 = Ae`, `P_i = A(1-e)`, `d_1 = β`, `d_i = α∘β` for `i > 1`, over
/// degrees `0..=length`.
pub fn squeezed_resolution(a: &Arc<Algebra>, e: &Idempotent, length: usize) -> Result<Resolution> {
    if !same(e.algebra(), a) {
        return Err(Error::InvalidInput("idempotent of a different algebra".into()));
    }
    let ev = e.element().to_vec();
    let f = e.complement();
    if f.iter().all(|&c| c == 0) {
        let proj = ProjComplex::new(a.clone(), vec![vec![ev.clone()]], Vec::new())?;
        return finish_squeezed(proj, Squeeze { e: ev, alpha: a.zero(), beta: a.zero() }, usize::MAX);
    }
    let alphas = a.corner_space(&ev, &f).vectors();
    let betas = a.corner_space(&f, &ev).vectors();
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::Construction("no squeezed resolution with this recipe".into()));
    }
    let mut chosen = None;
    'outer: for b in &betas {
        for al in &alphas {
            let bab = a.mul(&a.mul(b, al), b);
            if bab.iter().all(|&c| c == 0) {
                chosen = Some((al.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    let (alpha, beta) = chosen.ok_or_else(|| Error::Construction("d^2 != 0 for every candidate pair α, β".into()))?;
    let ba = a.mul(&beta, &alpha);
    let mut terms = vec![vec![ev.clone()]];
    let mut diffs = Vec::with_capacity(length);
    for i in 1..=length {
        terms.push(vec![f.clone()]);
        diffs.push(ElemMatrix::scalar(if i == 1 { beta.clone() } else { ba.clone() }));
    }
    let proj = ProjComplex::new(a.clone(), terms, diffs)?.with_trusted(length as i64 - 1);
    finish_squeezed(proj, Squeeze { e: ev, alpha, beta }, length)
}

fn finish_squeezed(proj: ProjComplex, sq: Squeeze, length: usize) -> Result<Resolution> {
    let real = proj.realize()?;
    Ok(Resolution {
        kind: ResolutionKind::Squeezed,
        complex: real.complex.clone(),
        proj: Some(proj),
        realization: Some(real),
        augmentation: None,
        generators: Vec::new(),
        augments_to: "squeezed".into(),
        trusted_length: length,
        squeeze: Some(sq),
    })
}

/// `z(n)` on a squeezed complex as a projective map and its realization.
#[derive(Clone, Debug)]
pub struct ZMap {
    pub n: usize,
    pub proj: ProjMap,
    pub chain: ChainMap,
}

/// The map of shift `-n` that is `α` on `P_0 -> P_n` and the identity on
/// `P_i -> P_{i+n}` for `i > 0`.
pub fn z_map(res: &Resolution, n: usize) -> Result<ZMap> {
    if n < 2 {
        return Err(Error::InvalidInput("z(n) is defined for n >= 2".into()));
    }
    let (Some(sq), Some(proj), Some(real)) = (&res.squeeze, &res.proj, &res.realization) else {
        return Err(Error::InvalidInput("z(n) needs a squeezed resolution".into()));
    };
    let a = proj.algebra();
    if proj.len() <= n {
        return Err(Error::InvalidInput(format!("squeezed resolution too short for z({n})")));
    }
    let f = a.sub(a.unit(), &sq.e);
    let mut components = BTreeMap::new();
    components.insert(0, ElemMatrix::scalar(sq.alpha.clone()));
    for i in 1..proj.len() - n {
        components.insert(i, ElemMatrix::scalar(f.clone()));
    }
    let map = ProjMap { shift: -(n as i64), components };
    map.verify(proj, proj).map_err(|_| Error::Construction(format!("z({n}) does not commute with the differentials")))?;
    let chain = map.realize(&Bimodule::regular(a.clone()), real, real)?;
    Ok(ZMap { n, proj: map, chain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn group(name: &str, p: u32) -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::from_name(name).unwrap(), p).unwrap())
    }

    #[test]
    fn bar_dims_c3_trivial() {
        let a = group("C3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let r = bar_resolution(&a, &k, 5).unwrap();
        let dims: Vec<usize> = (0..=5).map(|n| r.complex.dim(n)).collect();
        assert_eq!(dims, vec![3, 6, 12, 24, 48, 96]);
        r.check_exact(1).unwrap();
        r.complex.verify().unwrap();
    }

    #[test]
    fn bar_dims_s3_ground() {
        let a = group("S3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let r = bar_resolution(&a, &k, 3).unwrap();
        let dims: Vec<usize> = (0..=3).map(|n| r.complex.dim(n)).collect();
        assert_eq!(dims, vec![6, 30, 150, 750]);
        r.check_exact(1).unwrap();
    }

    #[test]
    fn bar_split_s3_exact() {
        let a = group("S3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let r = bar_resolution_with(&a, &k, 6, BarBase::Split, &Caps::default()).unwrap();
        r.check_exact(1).unwrap();
        r.complex.verify().unwrap();
    }

    #[test]
    fn bar_over_field_is_concentrated() {
        let a = Arc::new(Algebra::ground(3));
        let k = Module::trivial(a.clone()).unwrap();
        let r = bar_resolution(&a, &k, 3).unwrap();
        assert_eq!(r.complex.dim(0), 1);
        assert!((1..=3).all(|n| r.complex.dim(n) == 0));
    }

    #[test]
    fn bar_cap_reports_degree() {
        let a = group("S3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let caps = Caps { max_dim: 1000, max_entries: usize::MAX, max_sparse_dim: 1000 };
        match bar_resolution_with(&a, &k, 6, BarBase::Ground, &caps) {
            Err(Error::ResourceCap { cap: 1000, degree: 4, reached: 2 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_c3_periodic() {
        let a = group("C3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let r = minimal_projective_resolution(&a, &k, 6).unwrap();
        assert!((0..=6).all(|n| r.complex.dim(n) == 3));
        r.check_exact(1).unwrap();
        assert!(is_minimal(&r).unwrap());
    }

    #[test]
    fn minimal_s3_pims() {
        let a = group("S3", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let r = minimal_projective_resolution(&a, &k, 6).unwrap();
        assert!((0..=6).all(|n| r.complex.dim(n) == 3));
        r.check_exact(1).unwrap();
        assert!(is_minimal(&r).unwrap());
    }

    #[test]
    fn minimal_semisimple_has_length_zero() {
        let a = group("C2", 3);
        let k = Module::trivial(a.clone()).unwrap();
        let r = minimal_projective_resolution(&a, &k, 4).unwrap();
        assert_eq!(r.proj.as_ref().unwrap().len(), 1);
        assert_eq!(r.complex.trusted_to(), UNBOUNDED);
    }

    #[test]
    fn minimal_resolution_of_free_module() {
        let a = group("S3", 3);
        let r = minimal_projective_resolution(&a, &Module::regular(a.clone()), 3).unwrap();
        assert_eq!(r.proj.as_ref().unwrap().len(), 1);
        assert_eq!(r.complex.dim(0), 6);
    }

    #[test]
    fn squeezed_s3() {
        let a = group("S3", 3);
        let x = a.parse_element("-(12)-1").unwrap();
        let e = Idempotent::verified(&a, x).unwrap();
        let r = squeezed_resolution(&a, &e, 8).unwrap();
        assert!((0..=8).all(|n| r.complex.dim(n) == 3));
        let z2 = z_map(&r, 2).unwrap();
        let z3 = z_map(&r, 3).unwrap();
        let z5 = z_map(&r, 5).unwrap();
        let comp = z3.proj.then(&a, &z2.proj).unwrap();
        for (k, c) in &z5.proj.components {
            assert_eq!(comp.components.get(k), Some(c));
        }
        assert!(z_map(&r, 1).is_err());
    }

    #[test]
    fn squeezed_unit_is_degenerate() {
        let a = group("S3", 3);
        let e = Idempotent::unit(&a);
        let r = squeezed_resolution(&a, &e, 4).unwrap();
        assert_eq!(r.complex.dim(0), 6);
        assert_eq!(r.proj.unwrap().len(), 1);
    }
}
