//! Counting functions behind the dimension bounds: the triangular
//! decomposition m = C(T,2) + s, the overlap-level bound r(d), the
//! maximal-overlap function f(m), and the bound predicates built on them.

use crate::wedge::binom;

/// Canonical decomposition m = C(T,2) + s with 0 <= s < T (for m > 0).
/// The boundary s = T is normalized to (T+1, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangularDecomposition {
    pub m: usize,
    pub t: usize,
    pub s: usize,
}

impl TriangularDecomposition {
    pub fn of(m: usize) -> Self {
        if m == 0 {
            return TriangularDecomposition { m, t: 1, s: 0 };
        }
        // largest T with C(T,2) <= m
        let mut t = 1;
        while binom(t + 1, 2) <= m {
            t += 1;
        }
        let s = m - binom(t, 2);
        debug_assert!(s < t);
        TriangularDecomposition { m, t, s }
    }
}

/// Exact integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    // correct the float estimate in both directions
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

/// r(d): the largest r with r <= d and r <= C(d - r, 2). Closed form
/// d - ceil((sqrt(8d+1) - 1) / 2), evaluated exactly.
pub fn r_of(d: usize) -> usize {
    if d == 0 {
        return 0;
    }
    let x = 8 * d as u64 + 1;
    // smallest g with (2g+1)^2 >= 8d+1, i.e. g = ceil((sqrt(8d+1)-1)/2)
    let mut g = (isqrt(x) - 1) / 2;
    while (2 * g + 1) * (2 * g + 1) < x {
        g += 1;
    }
    d - g as usize
}

/// r(d) straight from the defining maximality, for cross-checking.
pub fn r_of_by_search(d: usize) -> usize {
    (0..=d).filter(|&r| r <= binom(d - r, 2)).max().unwrap_or(0)
}

/// Number of nontriangular integers strictly below d (a third
/// characterization of r).
pub fn r_of_by_nontriangular_count(d: usize) -> usize {
    (1..d).filter(|&k| !is_triangular(k)).count()
}

pub fn is_triangular(k: usize) -> bool {
    let x = 8 * k as u64 + 1;
    let s = isqrt(x);
    s * s == x
}

/// f(m) = C(T,3) + C(s,2): the maximal dimension of X^n intersect ker(Phi)
/// over all m-dimensional X.
pub fn f_of(m: usize) -> usize {
    let dec = TriangularDecomposition::of(m);
    binom(dec.t, 3) + binom(dec.s, 2)
}

/// Smallest positive s with r <= C(s,2); min_s(0) = 1.
pub fn min_s(r: usize) -> usize {
    let mut s = 1;
    while binom(s, 2) < r {
        s += 1;
    }
    s
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("dimension {m} exceeds dim V(n) = {max}")]
pub struct DimensionTooLarge {
    pub m: usize,
    pub max: usize,
}

/// Bounds on dim(X*) for dim(X) = m inside V(n):
/// n*m - f(m) <= dim(X*) <= min(n*m, 2*C(n+1,3)).
pub fn bounds_dim_star(n: usize, m: usize) -> Result<(usize, usize), DimensionTooLarge> {
    let max = binom(n, 2);
    if m > max {
        return Err(DimensionTooLarge { m, max });
    }
    let lower = n * m - f_of(m);
    let upper = (n * m).min(2 * binom(n + 1, 3));
    Ok((lower, upper))
}

/// The published reference values of f(m) for 3 <= m <= 50.
pub const F_TABLE: [(usize, usize); 48] = [
    (3, 1),
    (4, 1),
    (5, 2),
    (6, 4),
    (7, 4),
    (8, 5),
    (9, 7),
    (10, 10),
    (11, 10),
    (12, 11),
    (13, 13),
    (14, 16),
    (15, 20),
    (16, 20),
    (17, 21),
    (18, 23),
    (19, 26),
    (20, 30),
    (21, 35),
    (22, 35),
    (23, 36),
    (24, 38),
    (25, 41),
    (26, 45),
    (27, 50),
    (28, 56),
    (29, 56),
    (30, 57),
    (31, 59),
    (32, 62),
    (33, 66),
    (34, 71),
    (35, 77),
    (36, 84),
    (37, 84),
    (38, 85),
    (39, 87),
    (40, 90),
    (41, 94),
    (42, 99),
    (43, 105),
    (44, 112),
    (45, 120),
    (46, 120),
    (47, 121),
    (48, 123),
    (49, 126),
    (50, 130),
];
