//! Dense linear algebra over the prime field F_p.
//!
//! Entries are stored row-major as residues in `[0, p)`. Row reduction breaks
//! ties by leftmost column and topmost row, so every basis produced here is the
//! canonical reduced row-echelon one.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported modulus; keeps `(p - 1)^2 + p` inside `u32`.
pub const MAX_PRIME: u32 = 65_521;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) && p <= MAX_PRIME {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Multiplicative inverse; `a` must be nonzero mod `p`.
pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero");
    pow(a, (p - 2) as u64, p)
}

/// Reduce a signed integer into `[0, p)`.
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

/// `dst += f * src` elementwise, with `f` already reduced.
#[inline]
pub fn axpy(dst: &mut [u32], f: u32, src: &[u32], p: u32) {
    if f == 0 {
        return;
    }
    if p <= 1024 && dst.len() >= 64 {
        let lut: Vec<u32> = (0..p).map(|b| (f * b) % p).collect();
        for (d, &s) in dst.iter_mut().zip(src) {
            let v = *d + lut[s as usize];
            *d = if v >= p { v - p } else { v };
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = (*d + f * s) % p;
        }
    }
}

pub fn scale_in_place(v: &mut [u32], f: u32, p: u32) {
    for x in v.iter_mut() {
        *x = mul(*x, f, p);
    }
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn add_vec(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| add(x, y, p)).collect()
}

pub fn sub_vec(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| sub(x, y, p)).collect()
}

pub fn scale_vec(a: &[u32], f: u32, p: u32) -> Vec<u32> {
    a.iter().map(|&x| mul(x, f, p)).collect()
}

/// Sorts a sparse vector by index, merges repeats and drops zeros.
pub fn normalize_sparse(v: &mut Vec<(usize, u32)>, p: u32) {
    v.sort_unstable_by_key(|&(i, _)| i);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(v.len());
    for &(i, c) in v.iter() {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = add(last.1, c, p),
            _ => out.push((i, c % p)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    *v = out;
}

/// `a - f b` for sparse vectors sorted by index.
fn sparse_axpy(a: &[(usize, u32)], f: u32, b: &[(usize, u32)], p: u32) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, neg(mul(f, b[j].1, p), p)));
            j += 1;
        } else {
            let c = sub(a[i].1, mul(f, b[j].1, p), p);
            if c != 0 {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a matrix given by sparse columns sorted by row, by column
/// reduction on the lowest nonzero entry.
pub fn sparse_rank(p: u32, columns: &[Vec<(usize, u32)>]) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u32)>> = std::collections::HashMap::new();
    for col in columns {
        let mut v = col.clone();
        while let Some(&(low, c)) = v.last() {
            match pivots.get(&low) {
                Some(q) => v = sparse_axpy(&v, c, q, p),
                None => {
                    let f = inv(c, p);
                    for e in v.iter_mut() {
                        e.1 = mul(e.1, f, p);
                    }
                    pivots.insert(low, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rref: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows.min(24) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Build from row-major data that is already reduced.
    pub fn from_data(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        debug_assert!(data.iter().all(|&x| x < p));
        FpMatrix { p, rows, cols, data }
    }

    /// Build from signed integer rows, reducing mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| reduce(x, p)));
        }
        FpMatrix { p, rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert_eq!(self.p, other.p);
        let p = self.p as u64;
        let n = other.cols;
        let mut out = Self::zeros(self.p, self.rows, n);
        if n == 0 {
            return out;
        }
        // u64 accumulation is exact for up to 2^32 terms of size < p^2.
        let mut acc = vec![0u64; n];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            let arow = self.row(i);
            for (k, &a) in arow.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                for (x, &b) in acc.iter_mut().zip(other.row(k)) {
                    *x += a * b as u64;
                }
            }
            for (o, &x) in out.row_mut(i).iter_mut().zip(&acc) {
                *o = (x % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = add_vec(&self.data, &other.data, self.p);
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = sub_vec(&self.data, &other.data, self.p);
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: u32) -> FpMatrix {
        let data = scale_vec(&self.data, f % self.p, self.p);
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> FpMatrix {
        self.scale(self.p - 1)
    }

    /// `self += f * other`.
    pub fn add_scaled(&mut self, f: u32, other: &FpMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        axpy(&mut self.data, f % self.p, &other.data, self.p);
    }

    pub fn kron(&self, other: &FpMatrix) -> FpMatrix {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(self.p, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.data[(i * r2 + k) * (c1 * c2) + j * c2 + l] = mul(a, b, self.p);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(p: u32, rows: usize, parts: &[&FpMatrix]) -> FpMatrix {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(p: u32, cols: usize, parts: &[&FpMatrix]) -> FpMatrix {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
        }
        FpMatrix { p, rows, cols, data }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FpMatrix {
        let mut out = Self::zeros(self.p, rows, cols);
        for r in 0..rows {
            out.row_mut(r).copy_from_slice(&self.row(r0 + r)[c0..c0 + cols]);
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &FpMatrix) {
        for r in 0..m.rows {
            let cols = self.cols;
            self.data[(r0 + r) * cols + c0..(r0 + r) * cols + c0 + m.cols].copy_from_slice(m.row(r));
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        FpMatrix { p: self.p, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> FpMatrix {
        let mut out = Self::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// In-place Gauss–Jordan elimination. Returns the pivot columns. With
    /// `full = false` only rows below each pivot are cleared (echelon form).
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for k in c..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let iv = inv(self.data[r * cols + c], p);
            if iv != 1 {
                scale_in_place(&mut self.data[r * cols + c..(r + 1) * cols], iv, p);
            }
            let start = if full { 0 } else { r + 1 };
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (prow, rest) = tail.split_at_mut(cols);
            let prow = &prow[c..];
            for i in start..rows {
                if i == r {
                    continue;
                }
                let row = if i < r {
                    &mut head[i * cols..(i + 1) * cols]
                } else {
                    &mut rest[(i - r - 1) * cols..(i - r) * cols]
                };
                let v = row[c];
                if v != 0 {
                    axpy(&mut row[c..], p - v, prow, p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn row_reduce(&self) -> RowReduction {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        RowReduction { rref: m, rank: pivots.len(), pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            let mut t = self.transpose();
            t.eliminate(false).len()
        } else {
            let mut m = self.clone();
            m.eliminate(false).len()
        }
    }

    /// Columns form the canonical basis of `{v : self * v = 0}` (one basis
    /// vector per free column, with a 1 in that column).
    pub fn nullspace(&self) -> FpMatrix {
        let red = self.row_reduce();
        let p = self.p;
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &c in &red.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut out = Self::zeros(p, n, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.data[f * free.len() + j] = 1 % p;
            for (i, &pc) in red.pivots.iter().enumerate() {
                let v = red.rref.get(i, f);
                if v != 0 {
                    out.data[pc * free.len() + j] = neg(v, p);
                }
            }
        }
        out
    }

    /// Some `x` with `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let p = self.p;
        let mut aug = Self::zeros(p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % p;
        }
        let pivots = aug.eliminate(true);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Solve `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &FpMatrix) -> Result<Option<FpMatrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.rows });
        }
        let p = self.p;
        let w = self.cols + b.cols;
        let mut aug = Self::zeros(p, self.rows, w);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            aug.row_mut(r)[self.cols..].copy_from_slice(b.row(r));
        }
        let pivots = aug.eliminate(true);
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(p, self.cols, b.cols);
        for (i, &c) in pivots.iter().enumerate() {
            x.row_mut(c).copy_from_slice(&aug.row(i)[self.cols..]);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_matrix(&Self::identity(self.p, self.rows)).ok()??;
        Some(x)
    }

    /// Canonical basis (as columns) of the column space.
    pub fn column_space(&self) -> Subspace {
        Subspace::from_columns(self)
    }
}

/// A subspace of F_p^n with its canonical basis: the columns of `basis` are the
/// nonzero rows of the rref of any spanning set, so column `j` has a 1 in row
/// `pivots[j]` and zeros in the other pivot rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace { basis: FpMatrix::zeros(p, n, 0), pivots: Vec::new() }
    }

    pub fn full(p: u32, n: usize) -> Self {
        Subspace { basis: FpMatrix::identity(p, n), pivots: (0..n).collect() }
    }

    /// Span of the columns of `m`.
    pub fn from_columns(m: &FpMatrix) -> Self {
        Self::from_rows_matrix(&m.transpose(), m.rows)
    }

    /// Span of the given vectors of length `n`.
    pub fn span(p: u32, n: usize, vectors: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * n);
        for v in vectors {
            assert_eq!(v.len(), n);
            data.extend_from_slice(v);
        }
        Self::from_rows_matrix(&FpMatrix::from_data(p, vectors.len(), n, data), n)
    }

    fn from_rows_matrix(rows: &FpMatrix, n: usize) -> Self {
        let red = rows.row_reduce();
        let basis = red.rref.block(0, 0, red.rank, n).transpose();
        Subspace { basis, pivots: red.pivots }
    }

    pub fn p(&self) -> u32 {
        self.basis.p()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Basis vectors as matrix columns.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vector(&self, j: usize) -> Vec<u32> {
        self.basis.column(j)
    }

    pub fn vectors(&self) -> Vec<Vec<u32>> {
        self.basis.columns()
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&i| v[i]).collect()
    }

    /// Coordinates if `v` lies in the subspace.
    pub fn try_coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        let c = self.coords(v);
        if self.basis.mul_vec(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    /// Matrix taking ambient vectors in the subspace to their coordinates.
    pub fn coord_matrix(&self) -> FpMatrix {
        let p = self.p();
        let mut m = FpMatrix::zeros(p, self.dim(), self.ambient());
        for (j, &i) in self.pivots.iter().enumerate() {
            m.set(j, i, 1);
        }
        m
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.try_coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|j| self.contains(&other.vector(j)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let m = FpMatrix::hstack(self.p(), self.ambient(), &[&self.basis, &other.basis]);
        Subspace::from_columns(&m)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let p = self.p();
        let n = self.ambient();
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(p, n);
        }
        let m = FpMatrix::hstack(p, n, &[&self.basis, &other.basis.neg()]);
        let ker = m.nullspace();
        let coeffs = ker.block(0, 0, self.dim(), ker.cols());
        Subspace::from_columns(&self.basis.mul(&coeffs))
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, m: &FpMatrix) -> Subspace {
        Subspace::from_columns(&m.mul(&self.basis))
    }

    /// Reduce `v` modulo the subspace so that it vanishes on every pivot row.
    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.p();
        for (j, &i) in self.pivots.iter().enumerate() {
            let c = v[i];
            if c != 0 {
                let col = self.basis.column(j);
                axpy(v, p - c, &col, p);
            }
        }
    }

    /// Indices of the ambient coordinates complementary to the pivots.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut mark = vec![false; self.ambient()];
        for &i in &self.pivots {
            mark[i] = true;
        }
        (0..self.ambient()).filter(|&i| !mark[i]).collect()
    }

    /// Greedily pick, in order, the vectors that are independent modulo the
    /// subspace; returns their indices.
    pub fn extend_indices(&self, candidates: &[Vec<u32>]) -> Vec<usize> {
        let mut acc = Echelon::from_subspace(self);
        let mut picked = Vec::new();
        for (k, v) in candidates.iter().enumerate() {
            if acc.insert(v) {
                picked.push(k);
            }
        }
        picked
    }
}

/// Projection onto `V / W` using the coordinates complementary to the pivots of W.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub sub: Subspace,
    pub complement: Vec<usize>,
    /// `dim(V/W) x dim V`.
    pub proj: FpMatrix,
    /// `dim V x dim(V/W)`: unit vectors on the complement coordinates.
    pub section: FpMatrix,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let p = sub.p();
        let n = sub.ambient();
        let complement = sub.complement_indices();
        let q = complement.len();
        let mut proj = FpMatrix::zeros(p, q, n);
        let mut pos = vec![usize::MAX; n];
        for (k, &i) in complement.iter().enumerate() {
            pos[i] = k;
            proj.set(k, i, 1);
        }
        // A pivot unit vector e_i reduces to -(rest of basis column).
        for (j, &i) in sub.pivots().iter().enumerate() {
            for r in 0..n {
                let v = sub.basis().get(r, j);
                if r != i && v != 0 {
                    proj.set(pos[r], i, neg(v, p));
                }
            }
        }
        let mut section = FpMatrix::zeros(p, n, q);
        for (k, &i) in complement.iter().enumerate() {
            section.set(i, k, 1);
        }
        Quotient { sub, complement, proj, section }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        self.proj.mul_vec(v)
    }

    pub fn lift(&self, q: &[u32]) -> Vec<u32> {
        self.section.mul_vec(q)
    }
}

/// Incrementally maintained reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, n: usize) -> Self {
        Echelon { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        Echelon { p: s.p(), n: s.ambient(), rows: s.vectors(), pivots: s.pivots().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [u32]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let x = v[c];
            if x != 0 {
                axpy(v, self.p - x, row, self.p);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vec(&w)
    }

    /// Insert `v`; returns `true` when it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let iv = inv(w[c], self.p);
        scale_in_place(&mut w, iv, self.p);
        for row in self.rows.iter_mut() {
            let x = row[c];
            if x != 0 {
                axpy(row, self.p - x, &w, self.p);
            }
        }
        self.rows.push(w);
        self.pivots.push(c);
        true
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::span(self.p, self.n, &self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_rank_matches_dense() {
        let m = FpMatrix::from_rows(3, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 0, 1, 1]]);
        let cols: Vec<Vec<(usize, u32)>> = (0..4)
            .map(|c| (0..3).filter(|&r| m.get(r, c) != 0).map(|r| (r, m.get(r, c))).collect())
            .collect();
        assert_eq!(sparse_rank(3, &cols), m.row_reduce().rank);
        let mut v = vec![(2, 1), (0, 2), (2, 2), (1, 0)];
        normalize_sparse(&mut v, 3);
        assert_eq!(v, vec![(0, 2)]);
    }

    #[test]
    fn identity_rank_and_pivots() {
        let r = FpMatrix::identity(3, 2).row_reduce();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn zero_matrix_has_no_pivots() {
        let r = FpMatrix::zeros(5, 3, 4).row_reduce();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rank_one_example() {
        let m = FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let r = m.row_reduce();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        let k = m.nullspace();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert_eq!(m.mul_vec(&v), vec![0, 0]);
        // Exhaustive oracle: exactly p nullvectors.
        let count = (0..25).filter(|&i| m.mul_vec(&[i % 5, i / 5]) == vec![0, 0]).count();
        assert_eq!(count, 5);
        assert_eq!(v, vec![3, 1]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = FpMatrix::identity(7, 3);
        assert_eq!(id.solve(&[1, 2, 3]).unwrap(), Some(vec![1, 2, 3]));
        let z = FpMatrix::zeros(7, 2, 2);
        assert_eq!(z.solve(&[0, 1]).unwrap(), None);
        assert!(matches!(id.solve(&[1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_round_trip() {
        let m = FpMatrix::from_rows(7, &[vec![2, 1], vec![5, 3]]);
        let i = m.inverse().unwrap();
        assert_eq!(m.mul(&i), FpMatrix::identity(7, 2));
        assert!(FpMatrix::from_rows(7, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn subspace_coords_and_quotient() {
        let s = Subspace::span(3, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 2, 1]));
        assert!(!s.contains(&[1, 0, 0]));
        let q = Quotient::new(s.clone());
        assert_eq!(q.dim(), 1);
        for v in s.vectors() {
            assert!(is_zero_vec(&q.project(&v)));
        }
        let e = vec![0, 0, 1];
        assert_eq!(q.project(&q.lift(&q.project(&e))), q.project(&e));
        assert!(!is_zero_vec(&q.project(&[1, 0, 0])));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(5, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(5, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[0, 1, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn echelon_matches_subspace() {
        let vs = vec![vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 1, 1, 0]];
        let mut e = Echelon::new(3, 4);
        let picked: Vec<bool> = vs.iter().map(|v| e.insert(v)).collect();
        assert_eq!(picked, vec![true, false, true]);
        assert_eq!(e.to_subspace(), Subspace::span(3, 4, &vs));
    }

    #[test]
    fn large_prime_arithmetic() {
        let p = MAX_PRIME;
        let m = FpMatrix::from_rows(p, &[vec![p as i64 - 1, 3], vec![7, p as i64 - 2]]);
        let i = m.inverse().unwrap();
        assert_eq!(m.mul(&i), FpMatrix::identity(p, 2));
    }
}
