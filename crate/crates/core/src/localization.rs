//! Derived localization `L_e A` at an idempotent: an `e`-local replacement
//! `P` of `Ae`, the homology ring of its endomorphisms, the cellularization
//! `A(1-e) ⊗^L (1-e)A`, and checks of the cofibre and five-term sequences.
//!
//! `P` has `P_0 = Ae` and is built from cells `A ε` with `ε ≤ 1 - e`, so the
//! cofibre of `Ae -> P` is `A(1-e)`-cellular; locality means that `(1-e)P`
//! is acyclic. Then `H_n(L_e A) = H_n(eP)`. A class `y` of degree `m` is
//! represented by the chain map `f_y: P -> P` lowering degree by `m` with
//! `f_y(e) = c_y`, and the product is `x · y = [f_y(c_x)]`. At `e = 1` this
//! is the multiplication of `A`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{same, Algebra};
use crate::complex::AComplex;
use crate::derived::{derived_tensor, TorMethod};
use crate::error::{Error, Result};
use crate::fp::{Echelon, FpMatrix, Subspace};
use crate::idempotent::{corner_data, restrict_to, Corner, CornerData, Idempotent};
use crate::module::{Bimodule, Module};
use crate::proj::{extend_map, ElemMatrix, ProjComplex, ProjMap, Realization};
use crate::resolution::{squeezed_resolution, Caps, Squeeze};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplacementKind {
    /// The squeezed resolution, verified to be local.
    Squeezed,
    /// Cells attached degree by degree to kill `(1-e)H_*`.
    Tower,
}

#[derive(Clone, Debug)]
pub struct LocalReplacement {
    pub kind: ReplacementKind,
    pub proj: ProjComplex,
    pub squeeze: Option<Squeeze>,
    /// Why the squeezed resolution was not used, when it was not.
    pub squeeze_rejected: Option<String>,
}

fn combine_action(mats: &[FpMatrix], x: &[u32], n: usize, p: u32) -> FpMatrix {
    crate::algebra::combine(p, n, n, mats, x)
}

/// Idempotents summing to `f` used as cells: primitive ones from the corner
/// `fAf` when it is split basic, otherwise `f` itself.
pub fn cell_idempotents(a: &Algebra, f: &[u32]) -> Result<Vec<Vec<u32>>> {
    let corner = Corner::new(a, f);
    let st = corner.algebra.structure()?;
    match st.split_basic_idempotents(&corner.algebra)? {
        Some(list) => Ok(list.iter().map(|c| corner.include(c)).collect()),
        None => Ok(vec![f.to_vec()]),
    }
}

/// `dim H_n((1-e)P)` for `0 <= n <= up_to`.
pub fn locality_defect(cd: &CornerData, proj: &ProjComplex, up_to: i64) -> Result<Vec<usize>> {
    let c = proj.tensor_with(&cd.fa)?.complex;
    c.homology_dims(0, up_to.min(c.trusted_to()))
}

/// The cellular tower through degree `length`, trusted to `length - 1`.
pub fn local_tower(a: &Arc<Algebra>, e: &Idempotent, length: usize) -> Result<ProjComplex> {
    let p = a.p();
    let ev = e.element().to_vec();
    let f = e.complement();
    let mut terms: Vec<Vec<Vec<u32>>> = vec![vec![ev.clone()]];
    let mut diffs: Vec<ElemMatrix> = Vec::new();
    if f.iter().all(|&c| c == 0) {
        return ProjComplex::new(a.clone(), terms, diffs);
    }
    let cells = cell_idempotents(a, &f)?;
    let radical = a.structure()?.radical.vectors();
    let basis: Vec<Vec<u32>> = (0..a.dim()).map(|i| a.basis(i)).collect();
    for k in 0..length {
        let proj = ProjComplex::new_unchecked(a.clone(), terms.clone(), diffs.clone())?;
        let real = proj.realize()?;
        let c = &real.complex;
        let k_i = k as i64;
        let dim_k = c.dim(k_i);
        let mats = c.left_action(k_i).ok_or_else(|| Error::Internal("tower lost its action".into()))?;
        let act = |x: &[u32]| combine_action(mats, x, dim_k, p);
        let z = c.cycles(k_i);
        // T = A (1-e) Z_k
        let fz = act(&f);
        let mut t = Echelon::new(p, dim_k);
        for v in z.vectors() {
            let w = fz.mul_vec(&v);
            for x in &basis {
                t.insert(&act(x).mul_vec(&w));
            }
        }
        let t = t.to_subspace();
        let mut span = Echelon::new(p, dim_k);
        for j in &radical {
            let aj = act(j);
            for v in t.vectors() {
                span.insert(&aj.mul_vec(&v));
            }
        }
        let mut new_terms = Vec::new();
        let mut rows = Vec::new();
        'cells: for eps in &cells {
            let ae = act(eps);
            for v in t.vectors() {
                if span.dim() == t.dim() {
                    break 'cells;
                }
                let cand = ae.mul_vec(&v);
                if span.contains(&cand) {
                    continue;
                }
                for x in &basis {
                    span.insert(&act(x).mul_vec(&cand));
                }
                new_terms.push(eps.clone());
                rows.push(real.split(k, &cand));
            }
        }
        if span.dim() != t.dim() {
            return Err(Error::Internal("cells do not kill (1-e)-homology".into()));
        }
        if new_terms.is_empty() {
            return ProjComplex::new(a.clone(), terms, diffs);
        }
        let cols = terms[k].len();
        terms.push(new_terms);
        diffs.push(ElemMatrix::from_rows(rows, cols)?);
    }
    Ok(ProjComplex::new(a.clone(), terms, diffs)?.with_trusted(length as i64 - 1))
}

/// Local replacement of `Ae` through degree `length`: the squeezed
/// resolution when it exists and is local, otherwise the cellular tower.
pub fn local_replacement(a: &Arc<Algebra>, e: &Idempotent, length: usize) -> Result<LocalReplacement> {
    if !same(e.algebra(), a) {
        return Err(Error::InvalidInput("idempotent of a different algebra".into()));
    }
    if !e.is_verified() {
        return Err(Error::InvalidInput("localization needs a verified idempotent".into()));
    }
    if e.is_unit() {
        let proj = ProjComplex::new(a.clone(), vec![vec![a.unit().to_vec()]], Vec::new())?;
        return Ok(LocalReplacement { kind: ReplacementKind::Squeezed, proj, squeeze: None, squeeze_rejected: None });
    }
    let cd = corner_data(a, e)?;
    let rejected = match squeezed_resolution(a, e, length) {
        Ok(res) => {
            let proj = res.proj.clone().ok_or_else(|| Error::Internal("squeezed resolution without terms".into()))?;
            let defect = locality_defect(&cd, &proj, length as i64 - 1)?;
            match defect.iter().position(|&d| d != 0) {
                None => {
                    return Ok(LocalReplacement { kind: ReplacementKind::Squeezed, proj, squeeze: res.squeeze, squeeze_rejected: None })
                }
                Some(n) => format!("(1-e)P has homology in degree {n}"),
            }
        }
        Err(err) => err.to_string(),
    };
    let proj = local_tower(a, e, length)?;
    let defect = locality_defect(&cd, &proj, length as i64 - 1)?;
    if let Some(n) = defect.iter().position(|&d| d != 0) {
        return Err(Error::Internal(format!("cellular tower is not local in degree {n}")));
    }
    Ok(LocalReplacement { kind: ReplacementKind::Tower, proj, squeeze: None, squeeze_rejected: Some(rejected) })
}

// ---------------------------------------------------------------------------
// Graded ring

/// Graded ring with a fixed basis in each degree and structure constants
/// for all products of total degree at most `trusted_to`.
#[derive(Clone, Debug, Serialize)]
pub struct GradedRing {
    pub p: u32,
    pub dims: Vec<usize>,
    pub basis_labels: Vec<Vec<String>>,
    /// `mult_table[d1][d2][i][j]` is the product of basis element `i` of
    /// degree `d1` and `j` of degree `d2`, in the basis of degree `d1 + d2`.
    pub mult_table: Vec<Vec<Vec<Vec<Vec<u32>>>>>,
    pub trusted_to: usize,
}

impl GradedRing {
    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    /// Product of homogeneous elements, `None` beyond the table.
    pub fn mul(&self, d1: usize, x: &[u32], d2: usize, y: &[u32]) -> Option<Vec<u32>> {
        let d = d1 + d2;
        if d > self.trusted_to || d >= self.dims.len() {
            return None;
        }
        let mut out = vec![0u32; self.dims[d]];
        let table = &self.mult_table[d1][d2];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = crate::fp::mul(xi, yj, self.p);
                crate::fp::axpy(&mut out, c, &table[i][j], self.p);
            }
        }
        Some(out)
    }

    fn basis_vec(&self, d: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dims[d]];
        v[i] = 1;
        v
    }

    /// The first degree-0 basis element acts as a two-sided unit.
    pub fn check_unital(&self) -> bool {
        if self.dim(0) == 0 {
            return self.dims.iter().all(|&d| d == 0);
        }
        let one = self.basis_vec(0, 0);
        (0..self.dims.len().min(self.trusted_to + 1)).all(|d| {
            (0..self.dims[d]).all(|i| {
                let b = self.basis_vec(d, i);
                self.mul(0, &one, d, &b) == Some(b.clone()) && self.mul(d, &b, 0, &one) == Some(b)
            })
        })
    }

    /// Associativity on basis triples of total degree at most `trusted_to`.
    pub fn check_associative(&self) -> bool {
        let top = self.top().min(self.trusted_to);
        for d1 in 0..=top {
            for d2 in 0..=top - d1 {
                for d3 in 0..=top - d1 - d2 {
                    for i in 0..self.dim(d1) {
                        for j in 0..self.dim(d2) {
                            for k in 0..self.dim(d3) {
                                let (x, y, z) = (self.basis_vec(d1, i), self.basis_vec(d2, j), self.basis_vec(d3, k));
                                let xy = self.mul(d1, &x, d2, &y).expect("in range");
                                let yz = self.mul(d2, &y, d3, &z).expect("in range");
                                if self.mul(d1 + d2, &xy, d3, &z) != self.mul(d1, &x, d2 + d3, &yz) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Homology basis of one degree with coordinates modulo boundaries.
struct ClassBasis {
    reps: Vec<Vec<u32>>,
    solver: FpMatrix,
    boundaries: usize,
}

impl ClassBasis {
    fn new(c: &AComplex, n: i64, preferred: &[Vec<u32>]) -> Result<Self> {
        let p = c.p();
        let dim = c.dim(n);
        let b = c.boundaries(n);
        let z = c.cycles(n);
        let mut ech = Echelon::from_subspace(&b);
        let mut reps = Vec::new();
        for v in preferred.iter().chain(z.vectors().iter()) {
            if z.contains(v) && ech.insert(v) {
                reps.push(v.clone());
            }
        }
        let mut cols = reps.clone();
        cols.extend(b.vectors());
        let solver = FpMatrix::from_columns(p, dim, &cols);
        Ok(ClassBasis { reps, solver, boundaries: b.dim() })
    }

    fn coords(&self, v: &[u32]) -> Result<Vec<u32>> {
        let _ = self.boundaries;
        let x = self.solver.solve(v)?.ok_or_else(|| Error::Internal("vector is not a cycle".into()))?;
        Ok(x[..self.reps.len()].to_vec())
    }
}

/// Homology ring of `L_e A` through degree `up_to`, with the replacement used.
#[derive(Clone, Debug)]
pub struct Localization {
    pub ring: GradedRing,
    pub replacement: LocalReplacement,
    /// Cycle representatives in `eP`, one list per degree.
    pub representatives: Vec<Vec<Vec<Vec<u32>>>>,
}

pub fn localization_homology(a: &Arc<Algebra>, e: &Idempotent, up_to: usize) -> Result<GradedRing> {
    Ok(localize(a, e, up_to)?.ring)
}

pub fn localize(a: &Arc<Algebra>, e: &Idempotent, up_to: usize) -> Result<Localization> {
    let length = up_to + 2;
    let rep = local_replacement(a, e, length)?;
    let proj = &rep.proj;
    let ep: Realization = if e.is_unit() {
        proj.realize()?
    } else {
        proj.tensor_with(&corner_data(a, e)?.ea)?
    };
    let c = &ep.complex;
    let trusted = c.trusted_to().min(up_to as i64);
    if trusted < up_to as i64 {
        return Err(Error::UntrustedDegree { degree: up_to as i64, trusted_to: trusted });
    }
    let p = a.p();
    let ev = e.element().to_vec();
    // eP has entries in eA coordinates; chain maps act on algebra elements.
    let s_ea = Subspace::from_columns(&a.left_matrix(&ev));
    let to_alg = |x: &Vec<u32>| if e.is_unit() { x.clone() } else { s_ea.basis().mul_vec(x) };
    let to_ea = |x: &Vec<u32>| -> Result<Vec<u32>> {
        if e.is_unit() {
            return Ok(x.clone());
        }
        s_ea.try_coords(x).ok_or_else(|| Error::Internal("element outside eA".into()))
    };
    let join = |n: usize, parts: &[Vec<u32>]| -> Result<Vec<u32>> {
        let conv: Vec<Vec<u32>> = parts.iter().map(&to_ea).collect::<Result<_>>()?;
        ep.join(n, &conv)
    };
    let mut bases = Vec::with_capacity(up_to + 1);
    let mut reps_tuples = Vec::with_capacity(up_to + 1);
    for n in 0..=up_to {
        let mut preferred = Vec::new();
        if n as i64 <= proj.max_deg() {
            if n == 0 {
                preferred.push(join(0, &[ev.clone()])?);
            } else if let Some(sq) = &rep.squeeze {
                if n >= 2 {
                    preferred.push(join(n, &[sq.alpha.clone()])?);
                }
            }
        }
        let cb = ClassBasis::new(c, n as i64, &preferred)?;
        let tuples: Vec<Vec<Vec<u32>>> = cb.reps.iter().map(|v| ep.split(n, v).iter().map(&to_alg).collect()).collect();
        reps_tuples.push(tuples);
        bases.push(cb);
    }
    let dims: Vec<usize> = bases.iter().map(|b| b.reps.len()).collect();

    // Chain maps f_y and the multiplication table.
    let mut table: Vec<Vec<Vec<Vec<Vec<u32>>>>> = vec![vec![Vec::new(); up_to + 1]; up_to + 1];
    for d2 in 0..=up_to {
        for (j, cy) in reps_tuples[d2].iter().enumerate() {
            let mut comps = BTreeMap::new();
            comps.insert(0, ElemMatrix::from_rows(vec![cy.clone()], proj.rank(d2))?);
            let start = ProjMap { shift: -(d2 as i64), components: comps };
            let fy = extend_map(proj, proj, start, up_to - d2)?;
            for d1 in 0..=up_to - d2 {
                if table[d1][d2].is_empty() {
                    table[d1][d2] = vec![vec![Vec::new(); dims[d2]]; dims[d1]];
                }
                let comp = fy.components.get(&d1);
                for (i, cx) in reps_tuples[d1].iter().enumerate() {
                    let img = match comp {
                        Some(m) => m.apply(a, cx),
                        None => vec![a.zero(); proj.rank(d1 + d2)],
                    };
                    let v = join(d1 + d2, &img)?;
                    table[d1][d2][i][j] = bases[d1 + d2].coords(&v)?;
                }
            }
        }
    }
    for d1 in 0..=up_to {
        for d2 in 0..=up_to - d1 {
            if table[d1][d2].is_empty() {
                table[d1][d2] = vec![vec![Vec::new(); dims[d2]]; dims[d1]];
            }
        }
    }
    let labels = dims
        .iter()
        .enumerate()
        .map(|(d, &n)| (0..n).map(|i| if n == 1 { format!("h{d}") } else { format!("h{d}_{i}") }).collect())
        .collect();
    let ring = GradedRing { p, dims, basis_labels: labels, mult_table: table, trusted_to: up_to };
    Ok(Localization { ring, replacement: rep, representatives: reps_tuples })
}

// ---------------------------------------------------------------------------
// Presentations

#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub name: char,
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    /// Relations `lhs=rhs` between monomials like `x^3`, `xy`, `1` or `0`.
    pub relations: Vec<String>,
}

impl Presentation {
    pub fn new(generators: &[(char, usize)], relations: &[&str]) -> Self {
        Presentation {
            generators: generators.iter().map(|&(name, degree)| Generator { name, degree }).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub relations: Vec<RelationCheck>,
    pub generates: bool,
    /// Degrees where the monomials fail to span.
    pub ungenerated_degrees: Vec<usize>,
    pub failures: Vec<String>,
    pub checked_to: usize,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.generates && self.relations.iter().all(|r| r.holds)
    }
}

/// A homogeneous element, or zero of unknown degree.
enum Value {
    Zero,
    Hom(usize, Vec<u32>),
}

fn eval_monomial(r: &GradedRing, gens: &BTreeMap<char, (usize, Vec<u32>)>, text: &str) -> std::result::Result<Value, String> {
    let t = text.trim();
    if t == "0" {
        return Ok(Value::Zero);
    }
    let mut acc = Value::Hom(0, one(r).ok_or("ring has no unit")?);
    if t == "1" {
        return Ok(acc);
    }
    let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (deg, v) = gens.get(&c).ok_or_else(|| format!("unknown generator '{c}'"))?.clone();
        i += 1;
        let mut power = 1usize;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            power = chars[start..i].iter().collect::<String>().parse().map_err(|_| format!("bad exponent in '{t}'"))?;
        }
        for _ in 0..power {
            acc = match acc {
                Value::Zero => Value::Zero,
                Value::Hom(d, x) => {
                    let prod = r.mul(d, &x, deg, &v).ok_or_else(|| format!("'{t}' exceeds the trusted degree"))?;
                    Value::Hom(d + deg, prod)
                }
            };
        }
    }
    Ok(acc)
}

fn one(r: &GradedRing) -> Option<Vec<u32>> {
    (r.dim(0) > 0).then(|| {
        let mut v = vec![0u32; r.dim(0)];
        v[0] = 1;
        v
    })
}

/// Check relations exactly and that the generators span every degree
/// through `trusted_to`. Generators take the first basis element of their
/// degree.
pub fn verify_presentation(r: &GradedRing, spec: &Presentation) -> PresentationReport {
    let mut failures = Vec::new();
    let mut gens = BTreeMap::new();
    for g in &spec.generators {
        if r.dim(g.degree) == 0 {
            failures.push(format!("generator {} has empty degree {}", g.name, g.degree));
            continue;
        }
        let mut v = vec![0u32; r.dim(g.degree)];
        v[0] = 1;
        gens.insert(g.name, (g.degree, v));
    }
    let mut relations = Vec::new();
    for rel in &spec.relations {
        let Some((lhs, rhs)) = rel.split_once('=') else {
            failures.push(format!("relation '{rel}' has no '='"));
            continue;
        };
        let check = match (eval_monomial(r, &gens, lhs), eval_monomial(r, &gens, rhs)) {
            (Ok(x), Ok(y)) => {
                let is_zero = |v: &Value| match v {
                    Value::Zero => true,
                    Value::Hom(_, x) => x.iter().all(|&c| c == 0),
                };
                let holds = match (&x, &y) {
                    (Value::Hom(d1, a), Value::Hom(d2, b)) => (d1 == d2 && a == b) || (is_zero(&x) && is_zero(&y)),
                    _ => is_zero(&x) && is_zero(&y),
                };
                let show = |v: &Value| match v {
                    Value::Zero => "0".to_string(),
                    Value::Hom(d, x) => format!("{x:?} in degree {d}"),
                };
                RelationCheck { relation: rel.clone(), holds, detail: format!("{} vs {}", show(&x), show(&y)) }
            }
            (Err(m), _) | (_, Err(m)) => RelationCheck { relation: rel.clone(), holds: false, detail: m },
        };
        relations.push(check);
    }
    // Spanning: S_d = sum over generators g of S_{d - |g|} · g.
    let top = r.top().min(r.trusted_to);
    let mut spans: Vec<Subspace> = Vec::with_capacity(top + 1);
    let mut ungenerated = Vec::new();
    for d in 0..=top {
        let mut vecs = Vec::new();
        if d == 0 {
            vecs.extend(one(r));
        }
        for (deg, v) in gens.values() {
            if *deg == 0 {
                continue;
            }
            if *deg <= d {
                for x in spans[d - deg].vectors() {
                    if let Some(y) = r.mul(d - deg, &x, *deg, v) {
                        vecs.push(y);
                    }
                }
            }
        }
        // degree-zero generators act on the same degree
        let mut s = Subspace::span(r.p, r.dim(d), &vecs);
        for (deg, v) in gens.values() {
            if *deg == 0 {
                loop {
                    let more: Vec<Vec<u32>> = s.vectors().iter().filter_map(|x| r.mul(d, x, 0, v)).collect();
                    let t = s.sum(&Subspace::span(r.p, r.dim(d), &more));
                    if t.dim() == s.dim() {
                        break;
                    }
                    s = t;
                }
            }
        }
        if s.dim() != r.dim(d) {
            ungenerated.push(d);
        }
        spans.push(s);
    }
    PresentationReport { relations, generates: ungenerated.is_empty(), ungenerated_degrees: ungenerated, failures, checked_to: top }
}

// ---------------------------------------------------------------------------
// Cellularization and the exact sequences

/// `A(1-e) ⊗^L_{(1-e)A(1-e)} (1-e)A` trusted through `up_to`, as a complex
/// of left `A`-modules.
pub fn cellularization(a: &Arc<Algebra>, e: &Idempotent, up_to: usize) -> Result<AComplex> {
    cellularization_with(a, e, up_to, TorMethod::Minimal, &Caps::default())
}

pub fn cellularization_with(a: &Arc<Algebra>, e: &Idempotent, up_to: usize, method: TorMethod, caps: &Caps) -> Result<AComplex> {
    if e.is_unit() {
        return Ok(AComplex::zero(a.clone()));
    }
    let cd = corner_data(a, e)?;
    derived_tensor(&cd.af, &cd.fa.left_module(), up_to, method, caps)
}

#[derive(Clone, Debug, Serialize)]
pub struct CofibreReport {
    pub localization_dims: Vec<usize>,
    pub cellularization_dims: Vec<usize>,
    pub algebra_dim: usize,
    /// `dim H_1(L_e) - dim H_0(L^e) + dim A - dim H_0(L_e)`.
    pub low_degree_sum: i64,
    pub failures: Vec<String>,
}

impl CofibreReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rank bookkeeping for the long exact sequence of `L^e A -> A -> L_e A`.
pub fn cofibre_check(a: &Arc<Algebra>, e: &Idempotent, up_to: usize) -> Result<CofibreReport> {
    let loc = localization_homology(a, e, up_to)?;
    let cell = cellularization(a, e, up_to)?;
    let cd: Vec<usize> = if e.is_unit() { vec![0; up_to + 1] } else { cell.homology_dims(0, up_to as i64)? };
    let ld = loc.dims.clone();
    let mut failures = Vec::new();
    for n in 2..=up_to {
        if ld[n] != cd[n - 1] {
            failures.push(format!("degree {n}: dim H_n(L_e A) = {} but dim H_(n-1)(L^e A) = {}", ld[n], cd[n - 1]));
        }
    }
    let h1 = if up_to >= 1 { ld[1] } else { 0 };
    let sum = h1 as i64 - cd[0] as i64 + a.dim() as i64 - ld[0] as i64;
    if up_to >= 1 && sum != 0 {
        failures.push(format!("degrees 0 and 1: alternating sum {sum} is not zero"));
    }
    Ok(CofibreReport { localization_dims: ld, cellularization_dims: cd, algebra_dim: a.dim(), low_degree_sum: sum, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct BensonReport {
    pub h1_dim: usize,
    pub middle_dim: usize,
    pub algebra_dim: usize,
    pub quotient_dim: usize,
    pub p_perfect_order: usize,
    pub kernel_of_multiplication: usize,
    pub image_is_kernel: bool,
    pub quotient_surjective: bool,
    pub alternating_sum: i64,
    pub failures: Vec<String>,
}

impl BensonReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exactness of `0 -> H_1(L_e A) -> A(1-e) ⊗_{(1-e)A(1-e)} (1-e)A -> A ->
/// F_p[H / O^p(H)] -> 0`, with `O^p(H)` the largest p-perfect subgroup.
pub fn benson_sequence_check(a: &Arc<Algebra>, e: &Idempotent) -> Result<BensonReport> {
    let g = a.group().ok_or_else(|| Error::InvalidInput("the five-term sequence needs a group algebra".into()))?;
    let p = a.p();
    let perfect = g.max_p_perfect_subgroup(p);
    let (q, coset) = g.quotient(&perfect)?;
    // A -> F_p[H/P]: basis g -> coset(g).
    let mut to_q = FpMatrix::zeros(p, q.order, a.dim());
    for (i, &c) in coset.iter().enumerate() {
        to_q.set(c, i, 1);
    }
    let ker_q = Subspace::from_columns(&to_q.nullspace());
    let quotient_surjective = to_q.rank() == q.order;

    let loc = localization_homology(a, e, 1)?;
    let h1 = loc.dim(1);
    let (middle_dim, kernel, image) = if e.is_unit() {
        (0, 0, Subspace::zero(p, a.dim()))
    } else {
        let cd = corner_data(a, e)?;
        let (m, quot) = cd.af.tensor(&cd.fa)?;
        let s_af = a.left_ideal(&cd.f);
        let s_fa = Subspace::from_columns(&a.left_matrix(&cd.f));
        let dy = cd.fa.dim();
        let mut mu = FpMatrix::zeros(p, a.dim(), m.dim());
        for (c, &idx) in quot.complement.iter().enumerate() {
            let (i, j) = (idx / dy, idx % dy);
            let prod = a.mul(&s_af.vector(i), &s_fa.vector(j));
            for (r, &v) in prod.iter().enumerate() {
                mu.set(r, c, v);
            }
        }
        let image = Subspace::from_columns(&mu);
        (m.dim(), m.dim() - mu.rank(), image)
    };
    let image_is_kernel = image == ker_q;
    let sum = h1 as i64 - middle_dim as i64 + a.dim() as i64 - q.order as i64;
    let mut failures = Vec::new();
    if kernel != h1 {
        failures.push(format!("kernel of multiplication has dimension {kernel}, H_1(L_e A) has {h1}"));
    }
    if !image_is_kernel {
        failures.push("image of multiplication differs from the kernel of A -> F_p[H/O^p(H)]".into());
    }
    if !quotient_surjective {
        failures.push("A -> F_p[H/O^p(H)] is not surjective".into());
    }
    if sum != 0 {
        failures.push(format!("alternating sum {sum} is not zero"));
    }
    Ok(BensonReport {
        h1_dim: h1,
        middle_dim,
        algebra_dim: a.dim(),
        quotient_dim: q.order,
        p_perfect_order: perfect.len(),
        kernel_of_multiplication: kernel,
        image_is_kernel,
        quotient_surjective,
        alternating_sum: sum,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertReport {
    pub p: u32,
    pub q: u32,
    pub x_degree: usize,
    pub y_degree: usize,
    pub predicted: Vec<usize>,
    pub computed: Vec<usize>,
    /// Degrees where prediction and computation differ.
    pub mismatches: Vec<usize>,
}

impl HilbertReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `#{(i, j) : i(2q-2) + j(2q-1) = n, j ∈ {0, 1}}`.
pub fn predicted_hilbert(q: u32, up_to: usize) -> Vec<usize> {
    let (x, y) = (2 * q as usize - 2, 2 * q as usize - 1);
    (0..=up_to).map(|n| (0..=1).filter(|&j| n >= j * y && (n - j * y) % x == 0).count()).collect()
}

/// Compare `dim H_n(L_e A)` with the Hilbert series of the free graded
/// commutative algebra on `x` of degree `2q-2` and `y` of degree `2q-1`.
pub fn hilbert_series_check(a: &Arc<Algebra>, e: &Idempotent, q: u32, up_to: usize) -> Result<HilbertReport> {
    let g = a.group().ok_or_else(|| Error::InvalidInput("the Hilbert check needs a group algebra".into()))?;
    let p = a.p();
    if q < 2 || (p - 1) % q != 0 || g.order != (p * q) as usize || g.is_abelian() {
        return Err(Error::InvalidInput(format!("group is not of the shape C_{p} ⋊ C_{q}")));
    }
    let computed = localization_homology(a, e, up_to)?.dims;
    let predicted = predicted_hilbert(q, up_to);
    let mismatches = (0..=up_to).filter(|&n| computed[n] != predicted[n]).collect();
    Ok(HilbertReport { p, q, x_degree: 2 * q as usize - 2, y_degree: 2 * q as usize - 1, predicted, computed, mismatches })
}

/// `eA(1-e)` as an `(eAe, Γ)`-bimodule and `(1-e)Ae` as a left
/// `Γ`-module, `Γ = (1-e)A(1-e)`: the inputs of the Tor formula
/// `H_n(L_e A) = Tor^Γ_{n-1}(eA(1-e), (1-e)Ae)` for `n >= 2`.
pub fn corner_tor_inputs(a: &Arc<Algebra>, e: &Idempotent) -> Result<(Bimodule, Module)> {
    let cd = corner_data(a, e)?;
    let n = a.corner_space(&cd.e, &cd.f);
    let left = cd.ee.embedding.columns().iter().map(|c| restrict_to(&n, &a.left_matrix(c))).collect();
    let gamma: Vec<Vec<u32>> = cd.ff.embedding.columns();
    let right = gamma.iter().map(|c| restrict_to(&n, &a.right_matrix(c))).collect();
    let nb = Bimodule::new(cd.ee.algebra.clone(), cd.ff.algebra.clone(), n.dim(), left, right)?;
    let m = a.corner_space(&cd.f, &cd.e);
    let action = gamma.iter().map(|c| restrict_to(&m, &a.left_matrix(c))).collect();
    let mm = Module::new(cd.ff.algebra.clone(), m.dim(), action)?;
    Ok((nb, mm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;
    use crate::idempotent::trivial_idempotent;

    fn group(name: &str, p: u32) -> Arc<Algebra> {
        Arc::new(Algebra::group_algebra(&GroupTable::from_name(name).unwrap(), p).unwrap())
    }

    fn s3_e(a: &Arc<Algebra>, t: &str) -> Idempotent {
        Idempotent::verified(a, a.parse_element(&format!("-{t}-1")).unwrap()).unwrap()
    }

    #[test]
    fn s3_uses_squeezed_and_has_presentation() {
        let a = group("S3", 3);
        let e = s3_e(&a, "(12)");
        let loc = localize(&a, &e, 12).unwrap();
        assert_eq!(loc.replacement.kind, ReplacementKind::Squeezed);
        assert_eq!(loc.ring.dims, vec![1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let pres = Presentation::new(&[('x', 2), ('y', 3)], &["xy=yx", "x^3=y^2"]);
        let rep = verify_presentation(&loc.ring, &pres);
        assert!(rep.passed(), "{rep:?}");
        assert!(loc.ring.check_associative());
        assert!(loc.ring.check_unital());
        let bad = Presentation::new(&[('x', 2), ('y', 3)], &["x^3=0"]);
        assert!(!verify_presentation(&loc.ring, &bad).passed());
    }

    #[test]
    fn tower_agrees_with_squeezed_dims() {
        let a = group("S3", 3);
        let e = s3_e(&a, "(13)");
        let t = local_tower(&a, &e, 8).unwrap();
        let cd = corner_data(&a, &e).unwrap();
        assert!(locality_defect(&cd, &t, 7).unwrap().iter().all(|&d| d == 0));
        let h = t.tensor_with(&cd.ea).unwrap().complex.homology_dims(0, 7).unwrap();
        assert_eq!(h, vec![1, 0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn unit_idempotent_gives_the_algebra() {
        let a = group("C3", 3);
        let e = Idempotent::unit(&a);
        let r = localization_homology(&a, &e, 4).unwrap();
        assert_eq!(r.dims, vec![3, 0, 0, 0, 0]);
        assert!(r.check_associative());
        let c = cellularization(&a, &e, 3).unwrap();
        assert_eq!(c.dims().iter().sum::<usize>(), 0);
    }

    #[test]
    fn semisimple_localization_is_corner() {
        let a = group("C2", 3);
        let e = trivial_idempotent(&a).unwrap();
        let r = localization_homology(&a, &e, 5).unwrap();
        assert_eq!(r.dims, vec![1, 0, 0, 0, 0, 0]);
        let c = cellularization(&a, &e, 4).unwrap();
        assert_eq!(c.homology_dims(0, 4).unwrap(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn s3_cofibre_and_benson() {
        let a = group("S3", 3);
        let e = s3_e(&a, "(23)");
        let c = cofibre_check(&a, &e, 8).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.cellularization_dims[..4], [5, 1, 1, 1]);
        let b = benson_sequence_check(&a, &e).unwrap();
        assert!(b.passed(), "{b:?}");
        assert_eq!(b.middle_dim, 5);
        let (n, m) = corner_tor_inputs(&a, &e).unwrap();
        let caps = Caps::default();
        let bar = crate::derived::tor_dims(&n, &m, 6, TorMethod::Bar, &caps).unwrap();
        let min = crate::derived::tor_dims(&n, &m, 6, TorMethod::Minimal, &caps).unwrap();
        assert_eq!(bar, min);
        assert_eq!(&c.localization_dims[2..8], &min[1..7]);
    }

    #[test]
    fn hilbert_prediction() {
        assert_eq!(predicted_hilbert(2, 6), vec![1, 0, 1, 1, 1, 1, 1]);
        let p73 = predicted_hilbert(3, 12);
        let nonzero: Vec<usize> = (0..=12).filter(|&n| p73[n] > 0).collect();
        assert_eq!(nonzero, vec![0, 4, 5, 8, 9, 12]);
    }
}

#[cfg(test)]
mod order21 {
    use super::*;
    use crate::group::GroupTable;
    use crate::idempotent::trivial_idempotent;

    #[test]
    fn metacyclic_21_at_7() {
        let a = Arc::new(Algebra::group_algebra(&GroupTable::from_name("CpxCq(7,3)").unwrap(), 7).unwrap());
        let e = trivial_idempotent(&a).unwrap();
        let loc = localize(&a, &e, 12).unwrap();
        assert_eq!(loc.replacement.kind, ReplacementKind::Tower);
        assert!(hilbert_series_check(&a, &e, 3, 12).unwrap().passed());
        let pres = Presentation::new(&[('x', 4), ('y', 5)], &["xy=yx", "y^2=0"]);
        let rep = verify_presentation(&loc.ring, &pres);
        assert!(rep.passed(), "{rep:?}");
        let b = benson_sequence_check(&a, &e).unwrap();
        assert!(b.passed(), "{b:?}");
        assert_eq!((b.middle_dim, b.quotient_dim), (20, 1));
        assert!(cofibre_check(&a, &e, 10).unwrap().passed());
    }
}
