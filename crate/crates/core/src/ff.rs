//! Exact linear algebra over GF(p): prime moduli, dense matrices, and
//! subspaces in canonical reduced row-echelon form.
//!
//! Every subspace in the crate is represented by its unique RREF basis, so
//! subspace equality is plain syntactic equality on the basis matrix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix dimension mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("mixed moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

/// An odd prime p < 2^31, so products of residues fit in u64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, FfError> {
        if p < 3 || p.is_multiple_of(2) || p >= (1 << 31) || !is_prime(p) {
            return Err(FfError::NotOddPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    /// Inverse of a nonzero residue, by Fermat's little theorem.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGF {
    p: PrimeModulus,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl MatrixGF {
    pub fn zero(p: PrimeModulus, rows: usize, cols: usize) -> Self {
        MatrixGF {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: PrimeModulus, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&x| x % p.get()));
        }
        MatrixGF {
            p,
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_rows_i64(p: PrimeModulus, rows: &[Vec<i64>]) -> Self {
        let reduced: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| p.reduce_i64(x)).collect())
            .collect();
        Self::from_rows(p, &reduced)
    }

    #[inline]
    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.p.get();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut t = MatrixGF::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product self * rhs.
    pub fn mul(&self, rhs: &MatrixGF) -> Result<MatrixGF, FfError> {
        if self.cols != rhs.rows {
            return Err(FfError::ShapeMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let p = self.p;
        let mut out = MatrixGF::zero(p, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, p.add(cur, p.mul(a, rhs.get(k, c))));
                }
            }
        }
        Ok(out)
    }

    /// Apply the matrix to a column vector.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>, FfError> {
        if v.len() != self.cols {
            return Err(FfError::ShapeMismatch(self.rows, self.cols, v.len(), 1));
        }
        let p = self.p;
        let mut out = vec![0u64; self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (c, &vc) in v.iter().enumerate() {
                acc = p.add(acc, p.mul(self.get(r, c), vc % p.get()));
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Stack two matrices vertically.
    pub fn vstack(&self, other: &MatrixGF) -> Result<MatrixGF, FfError> {
        if self.cols != other.cols {
            return Err(FfError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(MatrixGF {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Concatenate two matrices horizontally.
    pub fn hstack(&self, other: &MatrixGF) -> Result<MatrixGF, FfError> {
        if self.rows != other.rows {
            return Err(FfError::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let cols = self.cols + other.cols;
        let mut out = MatrixGF::zero(self.p, self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    /// In-place Gauss-Jordan reduction to reduced row-echelon form.
    /// Returns the pivot column of each nonzero row, in order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let mut sel = None;
            for r in pivot_row..self.rows {
                if self.get(r, col) != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != pivot_row {
                for c in 0..self.cols {
                    let a = self.get(sel, c);
                    let b = self.get(pivot_row, c);
                    self.set(sel, c, b);
                    self.set(pivot_row, c, a);
                }
            }
            let inv = p.inv(self.get(pivot_row, col));
            for c in col..self.cols {
                let v = p.mul(self.get(pivot_row, c), inv);
                self.set(pivot_row, c, v);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = p.sub(self.get(r, c), p.mul(factor, self.get(pivot_row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    /// Returns (rref, rank, pivot columns) without mutating self.
    pub fn rref(&self) -> (MatrixGF, usize, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        (m, rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the null space { x : M x = 0 }, one kernel vector per
    /// free column of the RREF.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let p = self.p;
        let (r, rank, pivots) = self.rref();
        let mut basis = Vec::with_capacity(self.cols - rank);
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = p.neg(r.get(row, free));
            }
            basis.push(v);
        }
        SubspaceBasis::from_spanning(p, self.cols, &basis)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Result<MatrixGF, FfError> {
        if self.rows != self.cols {
            return Err(FfError::Singular);
        }
        let n = self.rows;
        let mut aug = self.hstack(&MatrixGF::identity(self.p, n))?;
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(FfError::Singular);
        }
        let mut inv = MatrixGF::zero(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

/// A subspace of GF(p)^d, canonically represented by its RREF basis.
///
/// Two subspaces are equal iff their canonical forms are identical, so the
/// derived `PartialEq` decides subspace equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    basis: MatrixGF,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    /// The zero subspace of GF(p)^d.
    pub fn zero(p: PrimeModulus, ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            basis: MatrixGF::zero(p, 0, ambient),
            pivots: Vec::new(),
        }
    }

    /// The full space GF(p)^d.
    pub fn full(p: PrimeModulus, ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            basis: MatrixGF::identity(p, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors, canonicalized.
    pub fn from_spanning(p: PrimeModulus, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length != ambient dimension");
        }
        let m = MatrixGF::from_rows(p, vectors);
        Self::from_matrix_rows(p, ambient, m)
    }

    pub fn from_spanning_i64(p: PrimeModulus, ambient: usize, vectors: &[Vec<i64>]) -> Self {
        let reduced: Vec<Vec<u64>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| p.reduce_i64(x)).collect())
            .collect();
        Self::from_spanning(p, ambient, &reduced)
    }

    fn from_matrix_rows(p: PrimeModulus, ambient: usize, m: MatrixGF) -> Self {
        if m.rows() == 0 {
            return Self::zero(p, ambient);
        }
        let (r, rank, pivots) = m.rref();
        if rank == 0 {
            return Self::zero(p, ambient);
        }
        let rows: Vec<Vec<u64>> = (0..rank).map(|i| r.row(i).to_vec()).collect();
        SubspaceBasis {
            ambient,
            basis: MatrixGF::from_rows(p, &rows),
            pivots,
        }
    }

    /// Row span of a matrix, canonicalized.
    pub fn row_space(m: &MatrixGF) -> Self {
        Self::from_matrix_rows(m.p(), m.cols(), m.clone())
    }

    #[inline]
    pub fn p(&self) -> PrimeModulus {
        self.basis.p()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn basis(&self) -> &MatrixGF {
        &self.basis
    }

    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        self.basis.row_vecs()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_ambient(&self, other: &SubspaceBasis) -> Result<(), FfError> {
        if self.ambient != other.ambient {
            return Err(FfError::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.p() != other.p() {
            return Err(FfError::ModulusMismatch(self.p().get(), other.p().get()));
        }
        Ok(())
    }

    /// Smallest subspace containing both operands.
    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis, FfError> {
        self.check_ambient(other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(Self::from_matrix_rows(self.p(), self.ambient, stacked))
    }

    /// Intersection, via coefficient matching: x = a A = b B forces
    /// (a, b) in the kernel of [A^T | -B^T].
    pub fn intersect(&self, other: &SubspaceBasis) -> Result<SubspaceBasis, FfError> {
        self.check_ambient(other)?;
        let p = self.p();
        if self.is_zero() || other.is_zero() {
            return Ok(SubspaceBasis::zero(p, self.ambient));
        }
        let at = self.basis.transpose();
        let mut bt = other.basis.transpose();
        for r in 0..bt.rows() {
            for c in 0..bt.cols() {
                let v = bt.get(r, c);
                bt.set(r, c, p.neg(v));
            }
        }
        let sys = at.hstack(&bt)?;
        let ker = sys.kernel_basis();
        let mut vectors = Vec::with_capacity(ker.dim());
        for row in ker.basis_rows() {
            let a = &row[..self.dim()];
            let mut x = vec![0u64; self.ambient];
            for (i, &coef) in a.iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                for (c, slot) in x.iter_mut().enumerate() {
                    *slot = p.add(*slot, p.mul(coef, self.basis.get(i, c)));
                }
            }
            vectors.push(x);
        }
        Ok(SubspaceBasis::from_spanning(p, self.ambient, &vectors))
    }

    /// Annihilator basis: rows N with N x = 0 exactly for x in self.
    /// Over GF(p) the standard bilinear form is nondegenerate, so the
    /// double annihilator recovers the subspace.
    pub fn annihilator_matrix(&self) -> MatrixGF {
        if self.is_zero() {
            return MatrixGF::identity(self.p(), self.ambient);
        }
        let ker = self.basis.kernel_basis();
        if ker.is_zero() {
            return MatrixGF::zero(self.p(), 0, self.ambient);
        }
        ker.basis().clone()
    }

    /// Preimage { x : M x in self } of this subspace under the map M.
    pub fn preimage(&self, m: &MatrixGF) -> Result<SubspaceBasis, FfError> {
        if m.rows() != self.ambient {
            return Err(FfError::ShapeMismatch(m.rows(), m.cols(), self.ambient, 1));
        }
        let ann = self.annihilator_matrix();
        if ann.rows() == 0 {
            return Ok(SubspaceBasis::full(m.p(), m.cols()));
        }
        let comp = ann.mul(m)?;
        Ok(comp.kernel_basis())
    }

    /// Image { M x : x in self } under the map M.
    pub fn image(&self, m: &MatrixGF) -> Result<SubspaceBasis, FfError> {
        if m.cols() != self.ambient {
            return Err(FfError::ShapeMismatch(m.rows(), m.cols(), self.ambient, 1));
        }
        if self.is_zero() {
            return Ok(SubspaceBasis::zero(m.p(), m.rows()));
        }
        let img = m.mul(&self.basis.transpose())?.transpose();
        Ok(SubspaceBasis::row_space(&img))
    }

    /// Membership test by reduction against the RREF rows.
    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let p = self.p();
        let mut rem: Vec<u64> = v.iter().map(|&x| x % p.get()).collect();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let coef = rem[pc];
            if coef == 0 {
                continue;
            }
            for (c, slot) in rem.iter_mut().enumerate() {
                *slot = p.sub(*slot, p.mul(coef, self.basis.get(row, c)));
            }
        }
        rem.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        other.basis_rows().iter().all(|v| self.contains(v))
    }
}
