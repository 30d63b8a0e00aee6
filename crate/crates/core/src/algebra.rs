//! Finite-dimensional associative unital algebras over F_p given by structure
//! constants, and algebra maps between them.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fp::{self, check_prime, FpMatrix, Quotient, Subspace};
use crate::group::GroupTable;
use crate::structure::Structure;

/// `table[(i * dim + j) * dim + k]` is the coefficient of `e_k` in `e_i e_j`.
#[derive(Clone)]
pub struct Algebra {
    p: u32,
    dim: usize,
    table: Vec<u32>,
    unit: Vec<u32>,
    augmentation: Option<Vec<u32>>,
    labels: Option<Vec<String>>,
    group: Option<GroupTable>,
    name: String,
    left: OnceLock<Vec<FpMatrix>>,
    right: OnceLock<Vec<FpMatrix>>,
    structure: OnceLock<Arc<Structure>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, p={}, dim={})", self.name, self.p, self.dim)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.dim == other.dim && self.unit == other.unit && self.table == other.table
    }
}

impl Eq for Algebra {}

/// Same algebra up to pointer or structure-constant identity.
pub fn same(a: &Algebra, b: &Algebra) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl Algebra {
    fn raw(p: u32, dim: usize, table: Vec<u32>, unit: Vec<u32>, name: String) -> Self {
        Algebra {
            p,
            dim,
            table,
            unit,
            augmentation: None,
            labels: None,
            group: None,
            name,
            left: OnceLock::new(),
            right: OnceLock::new(),
            structure: OnceLock::new(),
        }
    }

    /// Algebra from structure constants; associativity, the unit and the
    /// augmentation are all verified.
    pub fn from_constants(
        p: u32,
        dim: usize,
        table: Vec<u32>,
        unit: Vec<u32>,
        augmentation: Option<Vec<u32>>,
    ) -> Result<Self> {
        check_prime(p)?;
        if table.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: table.len() });
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: unit.len() });
        }
        if table.iter().chain(&unit).any(|&x| x >= p) {
            return Err(Error::InvalidAlgebra("entries must be reduced mod p".into()));
        }
        let mut a = Self::raw(p, dim, table, unit, "custom".into());
        a.check_associative()?;
        a.check_unit()?;
        if let Some(eps) = augmentation {
            a = a.with_augmentation(eps)?;
        }
        Ok(a)
    }

    /// Construction used for algebras derived from verified ones; the axioms
    /// are inherited and only checked in debug builds.
    pub(crate) fn derived(p: u32, dim: usize, table: Vec<u32>, unit: Vec<u32>, name: String) -> Self {
        let a = Self::raw(p, dim, table, unit, name);
        debug_assert!(a.check_associative().is_ok(), "derived algebra not associative");
        debug_assert!(a.check_unit().is_ok(), "derived algebra unit failure");
        a
    }

    pub fn with_augmentation(mut self, eps: Vec<u32>) -> Result<Self> {
        if eps.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: eps.len() });
        }
        let p = self.p;
        let apply = |x: &[u32]| -> u32 { x.iter().zip(&eps).fold(0, |s, (&a, &b)| fp::add(s, fp::mul(a, b, p), p)) };
        if apply(&self.unit) != 1 % p {
            return Err(Error::InvalidAlgebra("augmentation does not send 1 to 1".into()));
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                if apply(self.product_of_basis(i, j)) != fp::mul(eps[i], eps[j], p) {
                    return Err(Error::InvalidAlgebra(format!("augmentation not multiplicative on ({i}, {j})")));
                }
            }
        }
        self.augmentation = Some(eps);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    pub fn check_associative(&self) -> Result<()> {
        let n = self.dim;
        let p = self.p as u64;
        let mut lhs = vec![0u64; n];
        let mut rhs = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                let eij = self.product_of_basis(i, j);
                for k in 0..n {
                    lhs.iter_mut().for_each(|x| *x = 0);
                    rhs.iter_mut().for_each(|x| *x = 0);
                    for (l, &c) in eij.iter().enumerate() {
                        if c != 0 {
                            for (x, &d) in lhs.iter_mut().zip(self.product_of_basis(l, k)) {
                                *x += c as u64 * d as u64;
                            }
                        }
                    }
                    for (l, &c) in self.product_of_basis(j, k).iter().enumerate() {
                        if c != 0 {
                            for (x, &d) in rhs.iter_mut().zip(self.product_of_basis(i, l)) {
                                *x += c as u64 * d as u64;
                            }
                        }
                    }
                    if lhs.iter().zip(&rhs).any(|(a, b)| a % p != b % p) {
                        return Err(Error::InvalidAlgebra(format!("not associative on basis triple ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::InvalidAlgebra(format!("unit fails on basis element {i}")));
            }
        }
        Ok(())
    }

    pub fn ground(p: u32) -> Self {
        Self::derived(p, 1, vec![1], vec![1], format!("F{p}"))
            .with_augmentation(vec![1])
            .expect("ground field")
    }

    pub fn group_algebra(g: &GroupTable, p: u32) -> Result<Self> {
        check_prime(p)?;
        g.validate()?;
        let n = g.order;
        let mut table = vec![0u32; n * n * n];
        for i in 0..n {
            for j in 0..n {
                table[(i * n + j) * n + g.mul(i, j)] = 1;
            }
        }
        let mut unit = vec![0; n];
        unit[0] = 1;
        let mut a = Self::raw(p, n, table, unit, format!("F{p}[{}]", g.name));
        a.augmentation = Some(vec![1; n]);
        a.labels = Some(g.elements.clone());
        a.group = Some(g.clone());
        Ok(a)
    }

    /// `F_p[x]/(x^k)` on the basis `1, x, ..., x^{k-1}`, augmented by `x -> 0`.
    pub fn truncated_polynomial(p: u32, k: usize) -> Result<Self> {
        check_prime(p)?;
        if k == 0 {
            return Err(Error::InvalidInput("truncation degree must be positive".into()));
        }
        let mut table = vec![0; k * k * k];
        for i in 0..k {
            for j in 0..k - i {
                table[(i * k + j) * k + i + j] = 1;
            }
        }
        let mut unit = vec![0; k];
        unit[0] = 1;
        let mut eps = vec![0; k];
        eps[0] = 1;
        Self::derived(p, k, table, unit, format!("F{p}[x]/x^{k}")).with_augmentation(eps)
    }

    /// Upper triangular `n x n` matrices on the basis `E_ij`, `i <= j`, in
    /// row-major order; augmented by the `E_11` coefficient.
    pub fn upper_triangular(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        let basis: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let d = basis.len();
        let index = |i: usize, j: usize| basis.iter().position(|&b| b == (i, j)).unwrap();
        let mut table = vec![0; d * d * d];
        for (a, &(i, j)) in basis.iter().enumerate() {
            for (b, &(k, l)) in basis.iter().enumerate() {
                if j == k {
                    table[(a * d + b) * d + index(i, l)] = 1;
                }
            }
        }
        let mut unit = vec![0; d];
        for i in 0..n {
            unit[index(i, i)] = 1;
        }
        let mut eps = vec![0; d];
        eps[index(0, 0)] = 1;
        Self::derived(p, d, table, unit, format!("T{n}(F{p})")).with_augmentation(eps)
    }

    pub fn matrix_algebra(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        let d = n * n;
        let mut table = vec![0; d * d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[((i * n + j) * d + j * n + l) * d + i * n + l] = 1;
                }
            }
        }
        let mut unit = vec![0; d];
        for i in 0..n {
            unit[i * n + i] = 1;
        }
        Ok(Self::derived(p, d, table, unit, format!("M{n}(F{p})")))
    }

    /// Direct product, basis of `self` first; augmented through `self` if possible.
    pub fn product(&self, other: &Algebra) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::InvalidInput("characteristics differ".into()));
        }
        let (m, n) = (self.dim, other.dim);
        let d = m + n;
        let mut table = vec![0; d * d * d];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    table[(i * d + j) * d + k] = self.table[(i * m + j) * m + k];
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table[((m + i) * d + m + j) * d + m + k] = other.table[(i * n + j) * n + k];
                }
            }
        }
        let mut unit = self.unit.clone();
        unit.extend_from_slice(&other.unit);
        let a = Self::derived(self.p, d, table, unit, format!("{}x{}", self.name, other.name));
        match &self.augmentation {
            Some(eps) => {
                let mut e = eps.clone();
                e.extend(std::iter::repeat(0).take(n));
                a.with_augmentation(e)
            }
            None => Ok(a),
        }
    }

    /// Tensor product over F_p; basis `e_i ⊗ f_j` at index `i * other.dim + j`.
    pub fn tensor(&self, other: &Algebra) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::InvalidInput("characteristics differ".into()));
        }
        let p = self.p;
        let (m, n) = (self.dim, other.dim);
        let d = m * n;
        let mut table = vec![0; d * d * d];
        for i in 0..m {
            for k in 0..m {
                let x = self.product_of_basis(i, k);
                for j in 0..n {
                    for l in 0..n {
                        let y = other.product_of_basis(j, l);
                        let base = ((i * n + j) * d + k * n + l) * d;
                        for (a, &xa) in x.iter().enumerate() {
                            if xa == 0 {
                                continue;
                            }
                            for (b, &yb) in y.iter().enumerate() {
                                if yb != 0 {
                                    table[base + a * n + b] = fp::mul(xa, yb, p);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![0; d];
        for (i, &u) in self.unit.iter().enumerate() {
            for (j, &v) in other.unit.iter().enumerate() {
                unit[i * n + j] = fp::mul(u, v, p);
            }
        }
        let a = Self::derived(p, d, table, unit, format!("{}⊗{}", self.name, other.name));
        match (&self.augmentation, &other.augmentation) {
            (Some(e1), Some(e2)) => {
                let eps = (0..d).map(|x| fp::mul(e1[x / n], e2[x % n], p)).collect();
                a.with_augmentation(eps)
            }
            _ => Ok(a),
        }
    }

    pub fn opposite(&self) -> Self {
        let n = self.dim;
        let mut table = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(self.product_of_basis(j, i));
            }
        }
        let mut a = Self::derived(self.p, n, table, self.unit.clone(), format!("{}^op", self.name));
        a.augmentation = self.augmentation.clone();
        a.labels = self.labels.clone();
        a
    }

    /// The same algebra on the basis given by the columns of the invertible `t`.
    pub fn change_basis(&self, t: &FpMatrix) -> Result<Self> {
        let n = self.dim;
        if t.rows() != n || t.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: t.rows() });
        }
        let ti = t.inverse().ok_or_else(|| Error::InvalidInput("basis change is singular".into()))?;
        let cols = t.columns();
        let mut table = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let c = ti.mul_vec(&self.mul(&cols[i], &cols[j]));
                table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&c);
            }
        }
        let unit = ti.mul_vec(&self.unit);
        let a = Self::derived(self.p, n, table, unit, format!("{}'", self.name));
        match &self.augmentation {
            Some(_) => {
                let eps = cols.iter().map(|c| self.augment(c).unwrap()).collect();
                a.with_augmentation(eps)
            }
            None => Ok(a),
        }
    }

    /// Subalgebra with its own unit, spanned by `sub` (used for corners).
    pub(crate) fn subalgebra(&self, sub: &Subspace, unit: &[u32], name: String) -> Self {
        let vs = sub.vectors();
        let d = vs.len();
        let mut table = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let c = sub.coords(&self.mul(&vs[i], &vs[j]));
                table[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&c);
            }
        }
        Self::derived(self.p, d, table, sub.coords(unit), name)
    }

    /// Quotient by a two-sided ideal, with the projection data.
    pub fn quotient(&self, ideal: &Subspace) -> (Self, Quotient) {
        let q = Quotient::new(ideal.clone());
        let d = q.dim();
        let lifts: Vec<Vec<u32>> = (0..d).map(|k| q.section.column(k)).collect();
        let mut table = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let c = q.project(&self.mul(&lifts[i], &lifts[j]));
                table[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&c);
            }
        }
        let unit = q.project(&self.unit);
        (Self::derived(self.p, d, table, unit, format!("{}/I", self.name)), q)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    pub fn augmentation(&self) -> Option<&[u32]> {
        self.augmentation.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn group(&self) -> Option<&GroupTable> {
        self.group.as_ref()
    }

    pub fn structure_constants(&self) -> &[u32] {
        &self.table
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.dim]
    }

    pub fn basis(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1 % self.p;
        v
    }

    #[inline]
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[u32] {
        let n = self.dim;
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let n = self.dim;
        let p = self.p as u64;
        let mut acc = vec![0u64; n];
        if let Some(g) = &self.group {
            for (i, &a) in x.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in y.iter().enumerate() {
                    if b != 0 {
                        acc[g.mul(i, j)] += a as u64 * b as u64;
                    }
                }
            }
        } else {
            for (i, &a) in x.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in y.iter().enumerate() {
                    if b == 0 {
                        continue;
                    }
                    let f = a as u64 * b as u64 % p;
                    for (s, &c) in acc.iter_mut().zip(self.product_of_basis(i, j)) {
                        *s += f * c as u64;
                    }
                }
            }
        }
        acc.into_iter().map(|s| (s % p) as u32).collect()
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        fp::add_vec(x, y, self.p)
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        fp::sub_vec(x, y, self.p)
    }

    pub fn scale(&self, x: &[u32], f: u32) -> Vec<u32> {
        fp::scale_vec(x, f % self.p, self.p)
    }

    pub fn pow(&self, x: &[u32], mut e: u64) -> Vec<u32> {
        let mut r = self.unit.clone();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn augment(&self, x: &[u32]) -> Option<u32> {
        let eps = self.augmentation.as_ref()?;
        Some(x.iter().zip(eps).fold(0, |s, (&a, &b)| fp::add(s, fp::mul(a, b, self.p), self.p)))
    }

    /// Left regular matrices: column `j` of `L_i` is `e_i e_j`.
    pub fn left_regular(&self) -> &[FpMatrix] {
        self.left.get_or_init(|| {
            let n = self.dim;
            (0..n)
                .map(|i| {
                    let mut m = FpMatrix::zeros(self.p, n, n);
                    for j in 0..n {
                        for (k, &c) in self.product_of_basis(i, j).iter().enumerate() {
                            if c != 0 {
                                m.set(k, j, c);
                            }
                        }
                    }
                    m
                })
                .collect()
        })
    }

    /// Right regular matrices: column `j` of `R_i` is `e_j e_i`.
    pub fn right_regular(&self) -> &[FpMatrix] {
        self.right.get_or_init(|| {
            let n = self.dim;
            (0..n)
                .map(|i| {
                    let mut m = FpMatrix::zeros(self.p, n, n);
                    for j in 0..n {
                        for (k, &c) in self.product_of_basis(j, i).iter().enumerate() {
                            if c != 0 {
                                m.set(k, j, c);
                            }
                        }
                    }
                    m
                })
                .collect()
        })
    }

    /// Matrix of `y -> x y`.
    pub fn left_matrix(&self, x: &[u32]) -> FpMatrix {
        combine(self.p, self.dim, self.dim, self.left_regular(), x)
    }

    /// Matrix of `y -> y x`.
    pub fn right_matrix(&self, x: &[u32]) -> FpMatrix {
        combine(self.p, self.dim, self.dim, self.right_regular(), x)
    }

    /// Basis indices generating the algebra: group generators when known,
    /// otherwise the whole basis.
    pub fn generator_indices(&self) -> Vec<usize> {
        match &self.group {
            Some(g) => g.generators(),
            None => (0..self.dim).collect(),
        }
    }

    /// Left ideal `A x`.
    pub fn left_ideal(&self, x: &[u32]) -> Subspace {
        Subspace::from_columns(&self.right_matrix(x))
    }

    /// Corner `x A y` as a subspace.
    pub fn corner_space(&self, x: &[u32], y: &[u32]) -> Subspace {
        Subspace::from_columns(&self.left_matrix(x).mul(&self.right_matrix(y)))
    }

    pub fn is_idempotent(&self, e: &[u32]) -> bool {
        self.mul(e, e) == e
    }

    pub fn is_central(&self, z: &[u32]) -> bool {
        (0..self.dim).all(|i| {
            let b = self.basis(i);
            self.mul(z, &b) == self.mul(&b, z)
        })
    }

    pub fn is_unit(&self, x: &[u32]) -> bool {
        self.left_matrix(x).rank() == self.dim
    }

    /// Two-sided inverse if `x` is a unit.
    pub fn inverse(&self, x: &[u32]) -> Option<Vec<u32>> {
        let y = self.left_matrix(x).solve(&self.unit).ok()??;
        (self.mul(&y, x) == self.unit).then_some(y)
    }

    /// Radical, semisimple quotient, simple modules and primitive idempotents.
    pub fn structure(&self) -> Result<Arc<Structure>> {
        if let Some(s) = self.structure.get() {
            return Ok(s.clone());
        }
        let s = Arc::new(Structure::compute(self)?);
        let _ = self.structure.set(s.clone());
        Ok(s)
    }

    /// Parse an element written as a signed sum of basis labels with integer
    /// coefficients, such as `-(12)-1` or `2*(123)+1`. A bare integer `k`
    /// stands for `k` times the unit.
    pub fn parse_element(&self, text: &str) -> Result<Vec<u32>> {
        let p = self.p;
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let labels = self.label_list();
        let mut out = self.zero();
        let mut i = 0;
        while i < s.len() {
            let mut sign = 1i64;
            let mut signed = false;
            while i < s.len() && (s[i] == '+' || s[i] == '-') {
                if s[i] == '-' {
                    sign = -sign;
                }
                signed = true;
                i += 1;
            }
            if i > 0 && !signed {
                return Err(Error::Parse(format!("expected + or - before `{}`", s[i..].iter().collect::<String>())));
            }
            let start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<i64> = if i > start {
                let digits: String = s[start..i].iter().collect();
                Some(digits.parse().map_err(|_| Error::Parse(format!("bad coefficient `{digits}`")))?)
            } else {
                None
            };
            let starred = coeff.is_some() && i < s.len() && s[i] == '*';
            if starred {
                i += 1;
            }
            let rest: String = s[i..].iter().collect();
            let label = labels
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.is_empty() && rest.starts_with(l.as_str()))
                .max_by_key(|(_, l)| l.len());
            let c = fp::reduce(sign * coeff.unwrap_or(1), p);
            match label {
                Some((k, l)) => {
                    out[k] = fp::add(out[k], c, p);
                    i += l.chars().count();
                }
                None if coeff.is_some() && !starred => {
                    out = fp::add_vec(&out, &fp::scale_vec(&self.unit, c, p), p);
                }
                None => return Err(Error::Parse(format!("unknown term at `{rest}`"))),
            }
        }
        Ok(out)
    }

    fn label_list(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| (0..self.dim).map(|k| format!("e{k}")).collect())
    }

    /// Human-readable form using basis labels.
    pub fn format_element(&self, x: &[u32]) -> String {
        let labels = self.label_list();
        let half = self.p / 2;
        let mut parts = Vec::new();
        for (k, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (neg, m) = if c > half { (true, self.p - c) } else { (false, c) };
            let coeff = if m == 1 { String::new() } else { format!("{m}*") };
            let sgn = if neg { "-" } else { "+" };
            parts.push(format!("{sgn}{coeff}{}", labels[k]));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let s = parts.concat();
        s.strip_prefix('+').map(str::to_string).unwrap_or(s)
    }
}

/// `Σ x_i M_i` for a list of `rows x cols` matrices.
pub(crate) fn combine(p: u32, rows: usize, cols: usize, mats: &[FpMatrix], x: &[u32]) -> FpMatrix {
    let mut out = FpMatrix::zeros(p, rows, cols);
    for (m, &c) in mats.iter().zip(x) {
        if c != 0 {
            out.add_scaled(c, m);
        }
    }
    out
}

/// A unital algebra map, given by the images of the source basis as the
/// columns of `matrix`.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub matrix: FpMatrix,
}

impl AlgebraMap {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: FpMatrix) -> Result<Self> {
        if source.p() != target.p() {
            return Err(Error::InvalidInput("characteristics differ".into()));
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim() * source.dim(), found: matrix.rows() * matrix.cols() });
        }
        let f = AlgebraMap { source, target, matrix };
        if f.apply(f.source.unit()) != f.target.unit() {
            return Err(Error::InvalidInput("map is not unital".into()));
        }
        let cols = f.matrix.columns();
        for i in 0..f.source.dim() {
            for j in 0..f.source.dim() {
                let lhs = f.apply(f.source.product_of_basis(i, j));
                let rhs = f.target.mul(&cols[i], &cols[j]);
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!("map is not multiplicative on ({i}, {j})")));
                }
            }
        }
        Ok(f)
    }

    /// Map given by the rows `images[i] = f(e_i)`.
    pub fn from_images(source: Arc<Algebra>, target: Arc<Algebra>, images: &[Vec<u32>]) -> Result<Self> {
        if images.len() != source.dim() || images.iter().any(|v| v.len() != target.dim()) {
            return Err(Error::InvalidInput("image list does not match the algebra dimensions".into()));
        }
        let m = FpMatrix::from_columns(source.p(), target.dim(), images);
        Self::new(source, target, m)
    }

    pub fn identity(a: Arc<Algebra>) -> Self {
        let m = FpMatrix::identity(a.p(), a.dim());
        AlgebraMap { source: a.clone(), target: a, matrix: m }
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        self.matrix.mul_vec(x)
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }

    pub fn compose(&self, after: &AlgebraMap) -> Result<AlgebraMap> {
        if !same(&self.target, &after.source) {
            return Err(Error::InvalidInput("maps are not composable".into()));
        }
        Ok(AlgebraMap { source: self.source.clone(), target: after.target.clone(), matrix: after.matrix.mul(&self.matrix) })
    }

    /// Augmentation `A -> F_p`.
    pub fn augmentation(a: Arc<Algebra>) -> Result<Self> {
        let eps = a.augmentation().ok_or(Error::NoAugmentation)?.to_vec();
        let k = Arc::new(Algebra::ground(a.p()));
        let m = FpMatrix::from_data(a.p(), 1, eps.len(), eps);
        Self::new(a, k, m)
    }
}
