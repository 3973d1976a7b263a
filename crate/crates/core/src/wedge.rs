//! The spaces U(n), V(n), W(n) with their distinguished bases, the maps
//! psi_i : U -> V and phi_k : V -> W, the block map Phi : V^n -> W, its
//! explicit kernel basis, coordinate projections, and the GL(U)-induced
//! action on V.
//!
//! Basis conventions: V(n) has basis v_{ji} for 1 <= i < j <= n, columns
//! sorted by (i, j) ascending; W(n) has basis w_{jik} for 1 <= i < j <= n,
//! i <= k <= n, columns sorted by (i, j, k). External indices are 1-based
//! throughout; this module owns the conversion to 0-based columns.

use crate::ff::{FfError, MatrixGF, PrimeModulus, SubspaceBasis};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WedgeError {
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("indices ({0}, {1}, {2}) are not pairwise distinct")]
    NotDistinct(usize, usize, usize),
    #[error("matrix is not an invertible n x n matrix")]
    NotInvertible,
    #[error("generator subset must be strictly increasing indices in 1..=n")]
    BadGeneratorSubset,
    #[error("vector has support outside the chosen generator subset")]
    SupportOutsideSubset,
    #[error(transparent)]
    Ff(#[from] FfError),
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Bijections between the basis symbols v_{ji}, w_{jik} and column positions.
#[derive(Debug, Clone)]
pub struct WedgeIndexing {
    n: usize,
    v_pairs: Vec<(usize, usize)>,
    v_lookup: HashMap<(usize, usize), usize>,
    w_triples: Vec<(usize, usize, usize)>,
    w_lookup: HashMap<(usize, usize, usize), usize>,
}

impl WedgeIndexing {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two generators");
        let mut v_pairs = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                v_pairs.push((j, i));
            }
        }
        let v_lookup = v_pairs
            .iter()
            .enumerate()
            .map(|(idx, &ji)| (ji, idx))
            .collect();
        let mut w_triples = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                for k in i..=n {
                    w_triples.push((j, i, k));
                }
            }
        }
        let w_lookup = w_triples
            .iter()
            .enumerate()
            .map(|(idx, &jik)| (jik, idx))
            .collect();
        debug_assert_eq!(v_pairs.len(), binom(n, 2));
        debug_assert_eq!(w_triples.len(), 2 * binom(n + 1, 3));
        WedgeIndexing {
            n,
            v_pairs,
            v_lookup,
            w_triples,
            w_lookup,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim_v(&self) -> usize {
        self.v_pairs.len()
    }

    #[inline]
    pub fn dim_w(&self) -> usize {
        self.w_triples.len()
    }

    /// Column of v_{ji}, requires j > i.
    pub fn v_index(&self, j: usize, i: usize) -> usize {
        self.v_lookup[&(j, i)]
    }

    /// Column of w_{jik}, requires j > i, k >= i.
    pub fn w_index(&self, j: usize, i: usize, k: usize) -> usize {
        self.w_lookup[&(j, i, k)]
    }

    #[inline]
    pub fn v_pair(&self, col: usize) -> (usize, usize) {
        self.v_pairs[col]
    }

    #[inline]
    pub fn w_triple(&self, col: usize) -> (usize, usize, usize) {
        self.w_triples[col]
    }

    /// Column and sign for v_{ab} under the convention v_{ab} = -v_{ba},
    /// v_{aa} = 0. Returns None for a = b.
    pub fn v_signed(&self, a: usize, b: usize) -> Option<(usize, i64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => Some((self.v_index(a, b), 1)),
            std::cmp::Ordering::Less => Some((self.v_index(b, a), -1)),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Coefficient of v_{ab} in a V-vector, with the antisymmetry convention.
    pub fn v_coeff(&self, p: PrimeModulus, v: &[u64], a: usize, b: usize) -> u64 {
        match self.v_signed(a, b) {
            Some((col, 1)) => v[col],
            Some((col, _)) => p.neg(v[col]),
            None => 0,
        }
    }

    fn check_index(&self, i: usize) -> Result<(), WedgeError> {
        if i < 1 || i > self.n {
            Err(WedgeError::IndexOutOfRange(i, self.n))
        } else {
            Ok(())
        }
    }

    /// Matrix of psi_i : U -> V, psi_i(u_j) = v_{ji}.
    pub fn psi_matrix(&self, p: PrimeModulus, i: usize) -> Result<MatrixGF, WedgeError> {
        self.check_index(i)?;
        let mut m = MatrixGF::zero(p, self.dim_v(), self.n);
        for j in 1..=self.n {
            if let Some((row, sign)) = self.v_signed(j, i) {
                m.set(row, j - 1, if sign == 1 { 1 } else { p.neg(1) });
            }
        }
        Ok(m)
    }

    /// Matrix of phi_k : V -> W.
    ///
    /// phi_k(v_{ji}) = w_{jik} if k >= i, and w_{jki} - w_{ikj} if k < i.
    pub fn phi_matrix(&self, p: PrimeModulus, k: usize) -> Result<MatrixGF, WedgeError> {
        self.check_index(k)?;
        let mut m = MatrixGF::zero(p, self.dim_w(), self.dim_v());
        for (col, &(j, i)) in self.v_pairs.iter().enumerate() {
            if k >= i {
                m.set(self.w_index(j, i, k), col, 1);
            } else {
                m.set(self.w_index(j, k, i), col, 1);
                m.set(self.w_index(i, k, j), col, p.neg(1));
            }
        }
        Ok(m)
    }

    /// Block matrix [phi_1 | ... | phi_n] of Phi : V^n -> W.
    pub fn phi_block_matrix(&self, p: PrimeModulus) -> MatrixGF {
        let mut block = self.phi_matrix(p, 1).expect("index 1 valid");
        for k in 2..=self.n {
            let phi_k = self.phi_matrix(p, k).expect("index valid");
            block = block.hstack(&phi_k).expect("equal row counts");
        }
        block
    }

    /// Projection of a V-vector onto the coordinates v_{ab} with
    /// i in {a, b} (the image of Pi_i), returned in the same ambient.
    pub fn big_pi(&self, v: &[u64], i: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.dim_v()];
        for (col, &(a, b)) in self.v_pairs.iter().enumerate() {
            if a == i || b == i {
                out[col] = v[col];
            }
        }
        out
    }

    pub fn big_pi_is_zero(&self, v: &[u64], i: usize) -> bool {
        self.big_pi(v, i).iter().all(|&x| x == 0)
    }

    pub fn big_pi_of_subspace_is_zero(&self, x: &SubspaceBasis, i: usize) -> bool {
        x.basis_rows().iter().all(|v| self.big_pi_is_zero(v, i))
    }

    /// Projection of a W-vector onto the w_{jik} coordinate.
    pub fn pi3_coeff(&self, w: &[u64], j: usize, i: usize, k: usize) -> u64 {
        w[self.w_index(j, i, k)]
    }

    /// Coordinate subspace of V spanned by the v_{ji} with indices accepted
    /// by the predicate.
    pub fn coordinate_subspace<F>(&self, p: PrimeModulus, mut keep: F) -> SubspaceBasis
    where
        F: FnMut(usize, usize) -> bool,
    {
        let mut rows = Vec::new();
        for (col, &(j, i)) in self.v_pairs.iter().enumerate() {
            if keep(j, i) {
                let mut v = vec![0u64; self.dim_v()];
                v[col] = 1;
                rows.push(v);
            }
        }
        SubspaceBasis::from_spanning(p, self.dim_v(), &rows)
    }

    /// Build a V-vector from sparse 1-based (j, i, coefficient) triples;
    /// entries with j < i are folded in via v_{ij} = -v_{ji}.
    pub fn v_from_sparse(
        &self,
        p: PrimeModulus,
        triples: &[(usize, usize, i64)],
    ) -> Result<Vec<u64>, WedgeError> {
        let mut v = vec![0u64; self.dim_v()];
        for &(j, i, e) in triples {
            self.check_index(j)?;
            self.check_index(i)?;
            let Some((col, sign)) = self.v_signed(j, i) else {
                return Err(WedgeError::NotDistinct(j, i, i));
            };
            let coef = p.reduce_i64(e * sign);
            v[col] = p.add(v[col], coef);
        }
        Ok(v)
    }

    /// Sparse 1-based (j, i, coefficient) view of a V-vector.
    pub fn v_to_sparse(&self, v: &[u64]) -> Vec<(usize, usize, u64)> {
        self.v_pairs
            .iter()
            .enumerate()
            .filter(|&(col, _)| v[col] != 0)
            .map(|(col, &(j, i))| (j, i, v[col]))
            .collect()
    }

    /// The map V -> V induced by an invertible M : U -> U, sending
    /// v_{ji} to the expansion of (M u_j) ^ (M u_i).
    pub fn induced_wedge_map(&self, m: &MatrixGF) -> Result<MatrixGF, WedgeError> {
        let p = m.p();
        if m.rows() != self.n || m.cols() != self.n || m.rank() != self.n {
            return Err(WedgeError::NotInvertible);
        }
        let mut out = MatrixGF::zero(p, self.dim_v(), self.dim_v());
        for (col, &(j, i)) in self.v_pairs.iter().enumerate() {
            // (M u_j) ^ (M u_i) = sum_{a > b} (M_aj M_bi - M_bj M_ai) v_ab
            for (row, &(a, b)) in self.v_pairs.iter().enumerate() {
                let pos = p.mul(m.get(a - 1, j - 1), m.get(b - 1, i - 1));
                let neg = p.mul(m.get(b - 1, j - 1), m.get(a - 1, i - 1));
                out.set(row, col, p.sub(pos, neg));
            }
        }
        Ok(out)
    }

    /// Permutation of U-basis indices as a matrix on U; perm[i] is the
    /// 1-based image of generator i+1.
    pub fn permutation_matrix(&self, p: PrimeModulus, perm: &[usize]) -> MatrixGF {
        assert_eq!(perm.len(), self.n);
        let mut m = MatrixGF::zero(p, self.n, self.n);
        for (src, &dst) in perm.iter().enumerate() {
            m.set(dst - 1, src, 1);
        }
        m
    }
}

/// An element of V^n, interpreted as a candidate member of ker(Phi).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KerPhiElement {
    p: PrimeModulus,
    n: usize,
    components: Vec<Vec<u64>>,
}

impl KerPhiElement {
    pub fn new(p: PrimeModulus, n: usize, components: Vec<Vec<u64>>) -> Self {
        assert_eq!(components.len(), n);
        let dim_v = binom(n, 2);
        for c in &components {
            assert_eq!(c.len(), dim_v);
        }
        KerPhiElement { p, n, components }
    }

    pub fn from_flat(p: PrimeModulus, n: usize, flat: &[u64]) -> Self {
        let dim_v = binom(n, 2);
        assert_eq!(flat.len(), n * dim_v);
        let components = flat.chunks(dim_v).map(|c| c.to_vec()).collect();
        KerPhiElement { p, n, components }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn component(&self, k: usize) -> &[u64] {
        &self.components[k - 1]
    }

    pub fn components(&self) -> &[Vec<u64>] {
        &self.components
    }

    pub fn to_flat(&self) -> Vec<u64> {
        self.components.concat()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|&x| x == 0)
    }

    pub fn add(&self, other: &KerPhiElement) -> KerPhiElement {
        assert_eq!(self.n, other.n);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| self.p.add(x, y)).collect())
            .collect();
        KerPhiElement {
            p: self.p,
            n: self.n,
            components,
        }
    }

    /// Whether Phi maps this element to zero.
    pub fn in_kernel(&self, idx: &WedgeIndexing) -> bool {
        let block = idx.phi_block_matrix(self.p);
        block
            .apply(&self.to_flat())
            .map(|img| img.iter().all(|&x| x == 0))
            .unwrap_or(false)
    }

    /// Dimension of the span of the n components inside V.
    pub fn span_dim(&self) -> usize {
        MatrixGF::from_rows(self.p, &self.components).rank()
    }

    pub fn span(&self) -> SubspaceBasis {
        SubspaceBasis::from_spanning(self.p, binom(self.n, 2), &self.components)
    }
}

/// The kernel basis element v_{(abc)} for pairwise distinct a, b, c:
/// component a = v_{cb}, component b = -v_{ca}, component c = v_{ba},
/// all others zero. Non-increasing triples pick up the permutation sign.
pub fn v_abc(
    idx: &WedgeIndexing,
    p: PrimeModulus,
    a: usize,
    b: usize,
    c: usize,
) -> Result<KerPhiElement, WedgeError> {
    let n = idx.n();
    for &t in &[a, b, c] {
        if t < 1 || t > n {
            return Err(WedgeError::IndexOutOfRange(t, n));
        }
    }
    if a == b || b == c || a == c {
        return Err(WedgeError::NotDistinct(a, b, c));
    }
    let dim_v = idx.dim_v();
    let mut components = vec![vec![0u64; dim_v]; n];
    let mut put = |comp: usize, x: usize, y: usize, sign: i64| {
        let (col, s) = idx.v_signed(x, y).expect("distinct");
        components[comp - 1][col] = p.reduce_i64(sign * s);
    };
    put(a, c, b, 1);
    put(b, c, a, -1);
    put(c, b, a, 1);
    Ok(KerPhiElement::new(p, n, components))
}

/// The full kernel basis { v_{(abc)} : a < b < c }, of size C(n, 3).
pub fn ker_phi_basis(idx: &WedgeIndexing, p: PrimeModulus) -> Vec<KerPhiElement> {
    let n = idx.n();
    let mut out = Vec::with_capacity(binom(n, 3));
    for a in 1..=n {
        for b in (a + 1)..=n {
            for c in (b + 1)..=n {
                out.push(v_abc(idx, p, a, b, c).expect("valid triple"));
            }
        }
    }
    out
}

fn check_subset(
    small: &WedgeIndexing,
    big: &WedgeIndexing,
    kept: &[usize],
) -> Result<(), WedgeError> {
    if kept.len() != small.n()
        || kept.windows(2).any(|w| w[0] >= w[1])
        || kept.iter().any(|&t| t < 1 || t > big.n())
    {
        return Err(WedgeError::BadGeneratorSubset);
    }
    Ok(())
}

/// Push a subspace of V(m) into V(n) along an increasing list of m
/// generator indices: the small pair (j, i) lands on (kept[j-1], kept[i-1]).
pub fn embed_subspace(
    small: &WedgeIndexing,
    big: &WedgeIndexing,
    kept: &[usize],
    x: &SubspaceBasis,
) -> Result<SubspaceBasis, WedgeError> {
    check_subset(small, big, kept)?;
    let p = x.p();
    let rows: Vec<Vec<u64>> = x
        .basis_rows()
        .iter()
        .map(|v| {
            let mut out = vec![0u64; big.dim_v()];
            for (col, &val) in v.iter().enumerate() {
                if val != 0 {
                    let (j, i) = small.v_pair(col);
                    out[big.v_index(kept[j - 1], kept[i - 1])] = val;
                }
            }
            out
        })
        .collect();
    Ok(SubspaceBasis::from_spanning(p, big.dim_v(), &rows))
}

/// Pull a subspace of V(n) back to V(m) along an increasing list of m
/// generator indices. Fails if any basis vector touches a pair outside
/// the subset.
pub fn restrict_subspace(
    big: &WedgeIndexing,
    small: &WedgeIndexing,
    kept: &[usize],
    x: &SubspaceBasis,
) -> Result<SubspaceBasis, WedgeError> {
    check_subset(small, big, kept)?;
    let p = x.p();
    let mut position = vec![None; big.dim_v()];
    for col in 0..small.dim_v() {
        let (j, i) = small.v_pair(col);
        position[big.v_index(kept[j - 1], kept[i - 1])] = Some(col);
    }
    let mut rows = Vec::with_capacity(x.dim());
    for v in x.basis_rows() {
        let mut out = vec![0u64; small.dim_v()];
        for (col, &val) in v.iter().enumerate() {
            if val != 0 {
                match position[col] {
                    Some(c) => out[c] = val,
                    None => return Err(WedgeError::SupportOutsideSubset),
                }
            }
        }
        rows.push(out);
    }
    Ok(SubspaceBasis::from_spanning(p, small.dim_v(), &rows))
}
