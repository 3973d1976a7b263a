//! Group-facing decisions: presentations to subspaces, the capability
//! verdict via closedness, rank-based necessary/sufficient filters,
//! central-element detection and reduction, the Psi and Upsilon subspace
//! constructions, and the n = 4 classifier.

use crate::arith::f_of;
use crate::closure::{closure_report, is_closed, kernel_overlap, ClosureReport};
use crate::ff::{FfError, MatrixGF, PrimeModulus, SubspaceBasis};
use crate::wedge::{binom, KerPhiElement, WedgeError, WedgeIndexing};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapabilityError {
    #[error("projective point must be nonzero")]
    ZeroPoint,
    #[error("point has {0} coordinates, expected {1}")]
    PointLength(usize, usize),
    #[error("relator index ({j}, {i}) malformed for n = {n}")]
    BadRelator { j: usize, i: usize, n: usize },
    #[error("vector lies in Psi(p): the overlap witness degenerates to zero")]
    VectorInPsi,
    #[error("vector lies in Upsilon(q): all beta coordinates vanish")]
    VectorInUpsilon,
    #[error("Upsilon is only defined for n = 4, got n = {0}")]
    UpsilonWrongN(usize),
    #[error("classify_n4 needs a 5-dimensional subspace of V(4), got dim {0}")]
    WrongDimension(usize),
    #[error("classification routes disagree: psi={psi} upsilon={upsilon} overlap={overlap} closed={closed}")]
    RoutesDisagree {
        psi: bool,
        upsilon: bool,
        overlap: bool,
        closed: bool,
    },
    #[error(transparent)]
    Ff(#[from] FfError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

/// A point of P^{n-1} over GF(p), normalized so the first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    p: PrimeModulus,
    coords: Vec<u64>,
}

impl ProjectivePoint {
    pub fn new(p: PrimeModulus, coords: &[u64]) -> Result<Self, CapabilityError> {
        let mut c: Vec<u64> = coords.iter().map(|&x| x % p.get()).collect();
        let Some(first) = c.iter().position(|&x| x != 0) else {
            return Err(CapabilityError::ZeroPoint);
        };
        let inv = p.inv(c[first]);
        for x in &mut c {
            *x = p.mul(*x, inv);
        }
        Ok(ProjectivePoint { p, coords: c })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// All (p^n - 1)/(p - 1) points of P^{n-1} in canonical order: pivot
    /// position ascending, then the free tail counted in base p.
    pub fn enumerate(p: PrimeModulus, n: usize) -> Vec<ProjectivePoint> {
        let pv = p.get();
        let mut out = Vec::new();
        for pivot in 0..n {
            let free = n - pivot - 1;
            let mut counter = vec![0u64; free];
            loop {
                let mut coords = vec![0u64; n];
                coords[pivot] = 1;
                coords[pivot + 1..].copy_from_slice(&counter);
                out.push(ProjectivePoint { p, coords });
                // increment little-endian
                let mut carry = true;
                for d in counter.iter_mut() {
                    *d += 1;
                    if *d == pv {
                        *d = 0;
                    } else {
                        carry = false;
                        break;
                    }
                }
                if carry {
                    break;
                }
            }
        }
        out
    }
}

/// A class-2, exponent-p presentation: n generators and relators that are
/// formal products of commutator powers [g_j, g_i]^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub p: PrimeModulus,
    pub n: usize,
    pub relators: Vec<Vec<(usize, usize, i64)>>,
}

/// The subspace of V(n) spanned by one vector per relator.
pub fn presentation_to_subspace(
    idx: &WedgeIndexing,
    pres: &GroupPresentation,
) -> Result<SubspaceBasis, CapabilityError> {
    let p = pres.p;
    let mut rows = Vec::with_capacity(pres.relators.len());
    for relator in &pres.relators {
        for &(j, i, _) in relator {
            if i < 1 || j <= i || j > pres.n {
                return Err(CapabilityError::BadRelator { j, i, n: pres.n });
            }
        }
        rows.push(idx.v_from_sparse(p, relator)?);
    }
    Ok(SubspaceBasis::from_spanning(p, idx.dim_v(), &rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictReason {
    TrivialGroup,
    CyclicNontrivial,
    Closed,
    NotClosed,
}

impl VerdictReason {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictReason::TrivialGroup => "trivial-group",
            VerdictReason::CyclicNontrivial => "cyclic-nontrivial",
            VerdictReason::Closed => "closed",
            VerdictReason::NotClosed => "not-closed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CapabilityVerdict {
    pub capable: bool,
    pub reason: VerdictReason,
    pub report: Option<ClosureReport>,
    pub central_points: Vec<ProjectivePoint>,
    /// (n, X) pairs after successive central reductions, starting from the
    /// input instance.
    pub reduced_chain: Vec<(usize, SubspaceBasis)>,
}

/// Decide capability of the presented group. For n >= 2 this is exactly
/// closedness of the associated subspace; n = 1 is the non-capable cyclic
/// case and n = 0 the capable trivial group.
pub fn is_capable(pres: &GroupPresentation) -> Result<CapabilityVerdict, CapabilityError> {
    match pres.n {
        0 => Ok(CapabilityVerdict {
            capable: true,
            reason: VerdictReason::TrivialGroup,
            report: None,
            central_points: Vec::new(),
            reduced_chain: Vec::new(),
        }),
        1 => Ok(CapabilityVerdict {
            capable: false,
            reason: VerdictReason::CyclicNontrivial,
            report: None,
            central_points: Vec::new(),
            reduced_chain: Vec::new(),
        }),
        n => {
            let idx = WedgeIndexing::new(n);
            let x = presentation_to_subspace(&idx, pres)?;
            let report = closure_report(&idx, &x)?;
            let capable = report.closed;
            let central = central_points(&idx, &x)?;
            let mut chain = vec![(n, x.clone())];
            let (mut cur_n, mut cur_x) = (n, x);
            while cur_n > 2 {
                let cur_idx = WedgeIndexing::new(cur_n);
                match reduce_central(&cur_idx, &cur_x)? {
                    Some((n2, x2)) => {
                        chain.push((n2, x2.clone()));
                        cur_n = n2;
                        cur_x = x2;
                    }
                    None => break,
                }
            }
            Ok(CapabilityVerdict {
                capable,
                reason: if capable {
                    VerdictReason::Closed
                } else {
                    VerdictReason::NotClosed
                },
                report: Some(report),
                central_points: central,
                reduced_chain: chain,
            })
        }
    }
}

/// Necessary: a noncyclic capable class-2 exponent-p group with
/// rank(G/Z(G)) = n and rank([G,G]) = m satisfies n <= 2m + C(m,2).
pub fn necessary_rank_condition(n: usize, m: usize) -> bool {
    n <= 2 * m + binom(m, 2)
}

/// Sufficient: f(C(n,2) - m + 1) < n forces capability.
pub fn sufficient_rank_condition(n: usize, m: usize) -> bool {
    let dim_v = binom(n, 2);
    if m > dim_v {
        return false;
    }
    f_of(dim_v - m + 1) < n
}

/// Psi(pt) = (a_1 u_1 + ... + a_n u_n) ^ U: the span of the n vectors
/// v_i = sum_j a_j v_{ji}, of dimension n - 1.
pub fn psi_subspace(
    idx: &WedgeIndexing,
    pt: &ProjectivePoint,
) -> Result<SubspaceBasis, CapabilityError> {
    let n = idx.n();
    if pt.len() != n {
        return Err(CapabilityError::PointLength(pt.len(), n));
    }
    let p = pt.p();
    let rows = psi_generators(idx, pt);
    let sub = SubspaceBasis::from_spanning(p, idx.dim_v(), &rows);
    debug_assert_eq!(sub.dim(), n - 1);
    Ok(sub)
}

/// The n generating vectors v_1, ..., v_n of Psi(pt), including the
/// dependent one.
pub fn psi_generators(idx: &WedgeIndexing, pt: &ProjectivePoint) -> Vec<Vec<u64>> {
    let n = idx.n();
    let p = pt.p();
    let a = pt.coords();
    (1..=n)
        .map(|i| {
            let mut v = vec![0u64; idx.dim_v()];
            for j in 1..=n {
                if a[j - 1] == 0 {
                    continue;
                }
                if let Some((col, sign)) = idx.v_signed(j, i) {
                    let coef = if sign == 1 { a[j - 1] } else { p.neg(a[j - 1]) };
                    v[col] = p.add(v[col], coef);
                }
            }
            v
        })
        .collect()
}

/// All projective points u with Psi(u) contained in X, by exhaustive scan.
pub fn central_points(
    idx: &WedgeIndexing,
    x: &SubspaceBasis,
) -> Result<Vec<ProjectivePoint>, CapabilityError> {
    let p = x.p();
    let mut hits = Vec::new();
    for pt in ProjectivePoint::enumerate(p, idx.n()) {
        let psi = psi_subspace(idx, &pt)?;
        if x.contains_subspace(&psi) {
            hits.push(pt);
        }
    }
    Ok(hits)
}

/// Cancel one central element: if some projective point u has Psi(u)
/// contained in X, change basis so u becomes u_n, strip the v_{ni}
/// coordinates, and return the (n-1)-generator instance. Returns None when
/// no central point exists.
pub fn reduce_central(
    idx: &WedgeIndexing,
    x: &SubspaceBasis,
) -> Result<Option<(usize, SubspaceBasis)>, CapabilityError> {
    let n = idx.n();
    if n <= 2 {
        return Ok(None);
    }
    let p = x.p();
    let Some(u) = central_points(idx, x)?.into_iter().next() else {
        return Ok(None);
    };
    // B maps u_n to u; completing u to a basis with standard vectors
    // (skipping u's pivot coordinate) keeps B invertible.
    let pivot = u.coords().iter().position(|&c| c != 0).expect("nonzero");
    let mut b = MatrixGF::zero(p, n, n);
    let mut col = 0;
    for j in 0..n {
        if j == pivot {
            continue;
        }
        b.set(j, col, 1);
        col += 1;
    }
    for (r, &c) in u.coords().iter().enumerate() {
        b.set(r, n - 1, c);
    }
    let a = b.inverse()?;
    let induced = idx.induced_wedge_map(&a)?;
    let y = x.image(&induced)?;
    // sanity: the central Psi became <v_{ni} : i < n>
    let psi_n = idx.coordinate_subspace(p, |j, _| j == n);
    debug_assert!(y.contains_subspace(&psi_n));
    let small = WedgeIndexing::new(n - 1);
    let kept: Vec<usize> = (1..n).collect();
    let no_n = idx.coordinate_subspace(p, |j, _| j < n);
    let restricted = y.intersect(&no_n)?;
    let x_small = crate::wedge::restrict_subspace(idx, &small, &kept, &restricted)?;
    Ok(Some((n - 1, x_small)))
}

/// Upsilon(q) for q in P^3 indexed by the triples 123, 124, 134, 234:
/// the 3-dimensional component span of the kernel element with those
/// coefficients. Only defined at n = 4.
pub fn upsilon_subspace(
    idx: &WedgeIndexing,
    q: &ProjectivePoint,
) -> Result<SubspaceBasis, CapabilityError> {
    if idx.n() != 4 {
        return Err(CapabilityError::UpsilonWrongN(idx.n()));
    }
    if q.len() != 4 {
        return Err(CapabilityError::PointLength(q.len(), 4));
    }
    let rows = upsilon_generators(idx, q);
    let p = q.p();
    let sub = SubspaceBasis::from_spanning(p, idx.dim_v(), &rows);
    debug_assert_eq!(sub.dim(), 3);
    Ok(sub)
}

/// The four component vectors of the kernel element with coefficients
/// (a_123, a_124, a_134, a_234).
pub fn upsilon_generators(idx: &WedgeIndexing, q: &ProjectivePoint) -> Vec<Vec<u64>> {
    let p = q.p();
    let a123 = q.coords()[0];
    let a124 = q.coords()[1];
    let a134 = q.coords()[2];
    let a234 = q.coords()[3];
    let dim_v = idx.dim_v();
    let mut rows = vec![vec![0u64; dim_v]; 4];
    let mut add = |row: usize, j: usize, i: usize, coef: u64| {
        let col = idx.v_index(j, i);
        rows[row][col] = p.add(rows[row][col], coef);
    };
    // v_1 =  a123 v32 + a124 v42 + a134 v43
    add(0, 3, 2, a123);
    add(0, 4, 2, a124);
    add(0, 4, 3, a134);
    // v_2 = -a123 v31 - a124 v41 + a234 v43
    add(1, 3, 1, p.neg(a123));
    add(1, 4, 1, p.neg(a124));
    add(1, 4, 3, a234);
    // v_3 =  a123 v21 - a134 v41 - a234 v42
    add(2, 2, 1, a123);
    add(2, 4, 1, p.neg(a134));
    add(2, 4, 2, p.neg(a234));
    // v_4 =  a124 v21 + a134 v31 + a234 v32
    add(3, 2, 1, a124);
    add(3, 3, 1, a134);
    add(3, 3, 2, a234);
    rows
}

/// The kernel element whose component span is Upsilon(q).
pub fn upsilon_kernel_element(idx: &WedgeIndexing, q: &ProjectivePoint) -> KerPhiElement {
    KerPhiElement::new(q.p(), 4, upsilon_generators(idx, q))
}

/// Classify a 5-dimensional subspace of V(4) by three independent routes
/// (Psi scan, Upsilon scan, kernel overlap) and check they agree with
/// closedness. Returns whether X is closed.
pub fn classify_n4(idx: &WedgeIndexing, x: &SubspaceBasis) -> Result<bool, CapabilityError> {
    if idx.n() != 4 {
        return Err(CapabilityError::UpsilonWrongN(idx.n()));
    }
    if x.dim() != 5 || x.ambient_dim() != idx.dim_v() {
        return Err(CapabilityError::WrongDimension(x.dim()));
    }
    let p = x.p();
    let points = ProjectivePoint::enumerate(p, 4);
    let psi_route = points
        .iter()
        .any(|pt| x.contains_subspace(&psi_subspace(idx, pt).expect("valid point")));
    let upsilon_route = points
        .iter()
        .any(|q| x.contains_subspace(&upsilon_subspace(idx, q).expect("valid point")));
    let overlap_route = kernel_overlap(idx, x)?.0 > 0;
    let closed = is_closed(idx, x)?;
    if psi_route != closed || upsilon_route != closed || overlap_route != closed {
        return Err(CapabilityError::RoutesDisagree {
            psi: psi_route,
            upsilon: upsilon_route,
            overlap: overlap_route,
            closed,
        });
    }
    Ok(closed)
}

/// The explicit nonzero element of <Psi(pt), v>^n intersect ker(Phi):
/// component u is a_u v + sum_j a_{ju} v_j, where a_{ji} are the
/// coefficients of v and v_j the Psi generators.
pub fn overlap_witness(
    idx: &WedgeIndexing,
    pt: &ProjectivePoint,
    v: &[u64],
) -> Result<KerPhiElement, CapabilityError> {
    let n = idx.n();
    if pt.len() != n {
        return Err(CapabilityError::PointLength(pt.len(), n));
    }
    let p = pt.p();
    let a = pt.coords();
    let gens = psi_generators(idx, pt);
    let dim_v = idx.dim_v();
    let mut components = Vec::with_capacity(n);
    for u in 1..=n {
        let mut comp = vec![0u64; dim_v];
        let au = a[u - 1];
        if au != 0 {
            for c in 0..dim_v {
                comp[c] = p.add(comp[c], p.mul(au, v[c] % p.get()));
            }
        }
        for j in 1..=n {
            let coef = idx.v_coeff(p, v, j, u); // a_{ju}
            if coef == 0 {
                continue;
            }
            for c in 0..dim_v {
                comp[c] = p.add(comp[c], p.mul(coef, gens[j - 1][c]));
            }
        }
        components.push(comp);
    }
    let elem = KerPhiElement::new(p, n, components);
    if elem.is_zero() {
        return Err(CapabilityError::VectorInPsi);
    }
    Ok(elem)
}

/// The point p = [b_1 : b_2 : b_3 : b_4] with Psi(p) inside
/// <Upsilon(q), v>, via the explicit bilinear formulas in the kernel
/// coefficients of q and the coordinates of v.
pub fn converse_n4_point(
    idx: &WedgeIndexing,
    q: &ProjectivePoint,
    v: &[u64],
) -> Result<ProjectivePoint, CapabilityError> {
    if idx.n() != 4 {
        return Err(CapabilityError::UpsilonWrongN(idx.n()));
    }
    if q.len() != 4 {
        return Err(CapabilityError::PointLength(q.len(), 4));
    }
    let p = q.p();
    let a123 = q.coords()[0];
    let a124 = q.coords()[1];
    let a134 = q.coords()[2];
    let a234 = q.coords()[3];
    let c = |j: usize, i: usize| idx.v_coeff(p, v, j, i);
    let term = |x: u64, y: u64| p.mul(x, y);
    let b1 = p.add(
        p.sub(term(a123, c(4, 1)), term(a124, c(3, 1))),
        term(a134, c(2, 1)),
    );
    let b2 = p.add(
        p.sub(term(a123, c(4, 2)), term(a124, c(3, 2))),
        term(a234, c(2, 1)),
    );
    let b3 = p.add(
        p.sub(term(a123, c(4, 3)), term(a134, c(3, 2))),
        term(a234, c(3, 1)),
    );
    let b4 = p.add(
        p.sub(term(a124, c(4, 3)), term(a134, c(4, 2))),
        term(a234, c(4, 1)),
    );
    ProjectivePoint::new(p, &[b1, b2, b3, b4]).map_err(|_| CapabilityError::VectorInUpsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::random_subspace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    fn pt(p: PrimeModulus, coords: &[u64]) -> ProjectivePoint {
        ProjectivePoint::new(p, coords).unwrap()
    }

    #[test]
    fn projective_enumeration_count_and_canonicity() {
        let p = p3();
        let pts = ProjectivePoint::enumerate(p, 3);
        assert_eq!(pts.len(), 13); // (27 - 1) / 2
                                   // normalization: proportional tuples collapse
        assert_eq!(pt(p, &[2, 1, 0]), pt(p, &[1, 2, 0]));
        assert!(ProjectivePoint::new(p, &[0, 0, 0]).is_err());
        // all enumerated points distinct
        let mut sorted: Vec<Vec<u64>> = pts.iter().map(|q| q.coords().to_vec()).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 13);
    }

    #[test]
    fn presentation_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let pres = GroupPresentation {
            p,
            n: 4,
            relators: vec![vec![(2, 1, 1)]],
        };
        let x = presentation_to_subspace(&idx, &pres).unwrap();
        assert_eq!(x.dim(), 1);
        let mut v = vec![0u64; idx.dim_v()];
        v[idx.v_index(2, 1)] = 1;
        assert!(x.contains(&v));

        let pres2 = GroupPresentation {
            p,
            n: 4,
            relators: vec![vec![(2, 1, 1), (4, 3, -1)]],
        };
        let x2 = presentation_to_subspace(&idx, &pres2).unwrap();
        assert_eq!(x2.dim(), 1);
        let mut w = vec![0u64; idx.dim_v()];
        w[idx.v_index(2, 1)] = 1;
        w[idx.v_index(4, 3)] = 2;
        assert!(x2.contains(&w));

        let empty = GroupPresentation {
            p,
            n: 4,
            relators: vec![],
        };
        assert!(presentation_to_subspace(&idx, &empty).unwrap().is_zero());

        let bad = GroupPresentation {
            p,
            n: 4,
            relators: vec![vec![(5, 1, 1)]],
        };
        assert!(presentation_to_subspace(&idx, &bad).is_err());
    }

    #[test]
    fn capability_verdicts() {
        let p = p3();
        // free class-2 exponent-3 on two generators: X = 0, capable
        let free2 = GroupPresentation {
            p,
            n: 2,
            relators: vec![],
        };
        let v = is_capable(&free2).unwrap();
        assert!(v.capable);
        assert_eq!(v.reason, VerdictReason::Closed);

        // abelian C_p x C_p: X = V(2), capable
        let ab = GroupPresentation {
            p,
            n: 2,
            relators: vec![vec![(2, 1, 1)]],
        };
        assert!(is_capable(&ab).unwrap().capable);

        // cyclic
        let cyc = GroupPresentation {
            p,
            n: 1,
            relators: vec![],
        };
        let v = is_capable(&cyc).unwrap();
        assert!(!v.capable);
        assert_eq!(v.reason, VerdictReason::CyclicNontrivial);

        // extra-special of order p^5: not capable
        let es = GroupPresentation {
            p,
            n: 4,
            relators: vec![
                vec![(3, 1, 1)],
                vec![(4, 1, 1)],
                vec![(3, 2, 1)],
                vec![(4, 2, 1)],
                vec![(2, 1, 1), (4, 3, -1)],
            ],
        };
        let v = is_capable(&es).unwrap();
        assert!(!v.capable);
        assert_eq!(v.reason, VerdictReason::NotClosed);
        assert!(v.central_points.is_empty());
    }

    #[test]
    fn rank_conditions() {
        assert!(!necessary_rank_condition(4, 1));
        assert!(necessary_rank_condition(2, 1));
        assert!(!necessary_rank_condition(25, 2));
        assert!(sufficient_rank_condition(4, 3));
        assert!(!sufficient_rank_condition(4, 1));
        assert!(sufficient_rank_condition(3, 1));
    }

    #[test]
    fn psi_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(3);
        let psi = psi_subspace(&idx, &pt(p, &[1, 0, 0])).unwrap();
        let expect = idx.coordinate_subspace(p, |j, i| i == 1 && (j == 2 || j == 3));
        assert_eq!(psi, expect);
        // dimension n-1 at n=4 for a spread of points
        let idx4 = WedgeIndexing::new(4);
        for q in ProjectivePoint::enumerate(p, 4) {
            assert_eq!(psi_subspace(&idx4, &q).unwrap().dim(), 3);
        }
    }

    #[test]
    fn psi_injective_for_n_gt_2() {
        let p = p3();
        for n in [3usize, 4] {
            let idx = WedgeIndexing::new(n);
            let images: Vec<SubspaceBasis> = ProjectivePoint::enumerate(p, n)
                .iter()
                .map(|q| psi_subspace(&idx, q).unwrap())
                .collect();
            for (i, a) in images.iter().enumerate() {
                for b in &images[i + 1..] {
                    assert_ne!(a, b);
                }
            }
        }
    }

    #[test]
    fn central_point_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(3);
        let x = idx.coordinate_subspace(p, |_, i| i == 1);
        let hits = central_points(&idx, &x).unwrap();
        assert_eq!(hits, vec![pt(p, &[1, 0, 0])]);
        let small = idx.coordinate_subspace(p, |j, i| (j, i) == (2, 1));
        assert!(central_points(&idx, &small).unwrap().is_empty());
        let full = SubspaceBasis::full(p, idx.dim_v());
        assert_eq!(central_points(&idx, &full).unwrap().len(), 13);
    }

    #[test]
    fn reduce_central_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(3);
        // X = <v_31, v_32> = Psi(u_3): reduces to the zero subspace of V(2)
        let x = idx.coordinate_subspace(p, |j, _| j == 3);
        let (n2, x2) = reduce_central(&idx, &x).unwrap().unwrap();
        assert_eq!(n2, 2);
        assert!(x2.is_zero());
        // V(n) reduces to V(n-1)
        let full = SubspaceBasis::full(p, idx.dim_v());
        let (n2, x2) = reduce_central(&idx, &full).unwrap().unwrap();
        assert_eq!(n2, 2);
        assert_eq!(x2, SubspaceBasis::full(p, 1));
        // extra-special p^5 is irreducible
        let idx4 = WedgeIndexing::new(4);
        let mut rows = Vec::new();
        for (j, i) in [(3, 1), (4, 1), (3, 2), (4, 2)] {
            let mut v = vec![0u64; idx4.dim_v()];
            v[idx4.v_index(j, i)] = 1;
            rows.push(v);
        }
        let mut v = vec![0u64; idx4.dim_v()];
        v[idx4.v_index(2, 1)] = 1;
        v[idx4.v_index(4, 3)] = 2;
        rows.push(v);
        let es = SubspaceBasis::from_spanning(p, idx4.dim_v(), &rows);
        assert!(reduce_central(&idx4, &es).unwrap().is_none());
    }

    #[test]
    fn reduce_central_preserves_closedness() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [3usize, 4] {
            let idx = WedgeIndexing::new(n);
            for _ in 0..30 {
                let x = random_subspace(&idx, p, rng.gen_range(0..=idx.dim_v()), &mut rng);
                if let Some((n2, x2)) = reduce_central(&idx, &x).unwrap() {
                    let idx2 = WedgeIndexing::new(n2);
                    assert_eq!(x2.dim() + n - 1, x.dim());
                    assert_eq!(
                        crate::closure::is_closed(&idx, &x).unwrap(),
                        crate::closure::is_closed(&idx2, &x2).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn upsilon_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let u = upsilon_subspace(&idx, &pt(p, &[1, 0, 0, 0])).unwrap();
        let expect = idx.coordinate_subspace(p, |j, i| [(3, 2), (3, 1), (2, 1)].contains(&(j, i)));
        assert_eq!(u, expect);
        let u2 = upsilon_subspace(&idx, &pt(p, &[0, 0, 0, 1])).unwrap();
        let expect2 = idx.coordinate_subspace(p, |j, i| [(4, 3), (4, 2), (3, 2)].contains(&(j, i)));
        assert_eq!(u2, expect2);
        // every Upsilon element really is a kernel element
        for q in ProjectivePoint::enumerate(p, 4) {
            assert!(upsilon_kernel_element(&idx, &q).in_kernel(&idx));
        }
        // Upsilon refuses other n
        let idx3 = WedgeIndexing::new(3);
        assert!(upsilon_subspace(&idx3, &pt(p, &[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn psi_never_equals_upsilon() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let pts = ProjectivePoint::enumerate(p, 4);
        for a in &pts {
            let psi = psi_subspace(&idx, a).unwrap();
            for b in &pts {
                assert_ne!(psi, upsilon_subspace(&idx, b).unwrap());
            }
        }
    }

    #[test]
    fn overlap_witness_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(3);
        let mut v32 = vec![0u64; idx.dim_v()];
        v32[idx.v_index(3, 2)] = 1;
        let w = overlap_witness(&idx, &pt(p, &[1, 0, 0]), &v32).unwrap();
        let expect = crate::wedge::v_abc(&idx, p, 1, 2, 3).unwrap();
        assert_eq!(w, expect);
        // v in Psi(pt) -> degenerate
        let mut v21 = vec![0u64; idx.dim_v()];
        v21[idx.v_index(2, 1)] = 1;
        assert_eq!(
            overlap_witness(&idx, &pt(p, &[1, 0, 0]), &v21),
            Err(CapabilityError::VectorInPsi)
        );
        // n=4 case: nonzero, in kernel, components inside <Psi, v>
        let idx4 = WedgeIndexing::new(4);
        let mut v43 = vec![0u64; idx4.dim_v()];
        v43[idx4.v_index(4, 3)] = 1;
        let point = pt(p, &[1, 0, 0, 0]);
        let w = overlap_witness(&idx4, &point, &v43).unwrap();
        assert!(w.in_kernel(&idx4));
        let x = psi_subspace(&idx4, &point)
            .unwrap()
            .sum(&SubspaceBasis::from_spanning(p, idx4.dim_v(), &[v43]))
            .unwrap();
        for comp in w.components() {
            assert!(x.contains(comp));
        }
    }

    #[test]
    fn converse_n4_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        // q = [1:0:0:0], v = v_41 -> beta = [1:0:0:0]
        let q = pt(p, &[1, 0, 0, 0]);
        let mut v41 = vec![0u64; idx.dim_v()];
        v41[idx.v_index(4, 1)] = 1;
        let b = converse_n4_point(&idx, &q, &v41).unwrap();
        assert_eq!(b, pt(p, &[1, 0, 0, 0]));
        let ups_v = upsilon_subspace(&idx, &q)
            .unwrap()
            .sum(&SubspaceBasis::from_spanning(p, idx.dim_v(), &[v41]))
            .unwrap();
        assert!(ups_v.contains_subspace(&psi_subspace(&idx, &b).unwrap()));
        // q = [0:0:0:1], v = v_21 -> beta = [0:1:0:0]
        let q2 = pt(p, &[0, 0, 0, 1]);
        let mut v21 = vec![0u64; idx.dim_v()];
        v21[idx.v_index(2, 1)] = 1;
        let b2 = converse_n4_point(&idx, &q2, &v21).unwrap();
        assert_eq!(b2, pt(p, &[0, 1, 0, 0]));
        let ups_v2 = upsilon_subspace(&idx, &q2)
            .unwrap()
            .sum(&SubspaceBasis::from_spanning(p, idx.dim_v(), &[v21]))
            .unwrap();
        assert!(ups_v2.contains_subspace(&psi_subspace(&idx, &b2).unwrap()));
        // v in Upsilon(q): all beta vanish
        let inside = upsilon_generators(&idx, &q)[0].clone();
        assert_eq!(
            converse_n4_point(&idx, &q, &inside),
            Err(CapabilityError::VectorInUpsilon)
        );
    }

    #[test]
    fn classify_n4_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        // extra-special p^5 subspace: not closed
        let mut rows = Vec::new();
        for (j, i) in [(3, 1), (4, 1), (3, 2), (4, 2)] {
            let mut v = vec![0u64; idx.dim_v()];
            v[idx.v_index(j, i)] = 1;
            rows.push(v);
        }
        let mut v = vec![0u64; idx.dim_v()];
        v[idx.v_index(2, 1)] = 1;
        v[idx.v_index(4, 3)] = 2;
        rows.push(v);
        let es = SubspaceBasis::from_spanning(p, idx.dim_v(), &rows);
        assert!(!classify_n4(&idx, &es).unwrap());
        // coordinate 5-dim subspace: closed
        let coord = idx.coordinate_subspace(p, |j, i| (j, i) != (4, 3));
        assert_eq!(coord.dim(), 5);
        assert!(classify_n4(&idx, &coord).unwrap());
        // <Upsilon(q), v, one more> arranged so a Psi lands inside: closed
        let q = pt(p, &[1, 0, 0, 0]);
        let mut v41 = vec![0u64; idx.dim_v()];
        v41[idx.v_index(4, 1)] = 1;
        let b = converse_n4_point(&idx, &q, &v41).unwrap();
        let psi = psi_subspace(&idx, &b).unwrap();
        let x = upsilon_subspace(&idx, &q)
            .unwrap()
            .sum(&SubspaceBasis::from_spanning(p, idx.dim_v(), &[v41]))
            .unwrap()
            .sum(&psi)
            .unwrap();
        if x.dim() == 5 {
            assert!(classify_n4(&idx, &x).unwrap());
        }
        // wrong dimension rejected
        let small = idx.coordinate_subspace(p, |j, i| (j, i) == (2, 1));
        assert!(classify_n4(&idx, &small).is_err());
    }

    #[test]
    fn closedness_invariant_under_permutation() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let x = random_subspace(&idx, p, rng.gen_range(0..=6), &mut rng);
            let mut perm: Vec<usize> = (1..=4).collect();
            for i in (1..4).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let m = idx.permutation_matrix(p, &perm);
            let induced = idx.induced_wedge_map(&m).unwrap();
            let y = x.image(&induced).unwrap();
            assert_eq!(
                crate::closure::is_closed(&idx, &x).unwrap(),
                crate::closure::is_closed(&idx, &y).unwrap()
            );
        }
    }
}
