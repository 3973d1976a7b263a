//! The star operators X -> X* (up to W) and Y -> Y* (down to V), the
//! closure and interior operators they compose to, the kernel-overlap
//! computation X^n `intersect` ker(Phi), and the Z_i / d_i diagnostic
//! sequences.

use crate::ff::{FfError, MatrixGF, PrimeModulus, SubspaceBasis};
use crate::wedge::{KerPhiElement, WedgeIndexing};

/// All diagnostics from one closure pass over a subspace X of V(n).
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub input: SubspaceBasis,
    pub star: SubspaceBasis,
    pub closure: SubspaceBasis,
    pub closed: bool,
    pub overlap_dim: usize,
    pub z_dims: Vec<usize>,
    pub d_dims: Vec<usize>,
}

fn check_v_ambient(idx: &WedgeIndexing, x: &SubspaceBasis) -> Result<(), FfError> {
    if x.ambient_dim() != idx.dim_v() {
        return Err(FfError::AmbientMismatch(x.ambient_dim(), idx.dim_v()));
    }
    Ok(())
}

fn check_w_ambient(idx: &WedgeIndexing, y: &SubspaceBasis) -> Result<(), FfError> {
    if y.ambient_dim() != idx.dim_w() {
        return Err(FfError::AmbientMismatch(y.ambient_dim(), idx.dim_w()));
    }
    Ok(())
}

/// X* = < phi_1(X), ..., phi_n(X) >, a subspace of W.
pub fn star_up(idx: &WedgeIndexing, x: &SubspaceBasis) -> Result<SubspaceBasis, FfError> {
    check_v_ambient(idx, x)?;
    let p = x.p();
    let mut acc = SubspaceBasis::zero(p, idx.dim_w());
    for k in 1..=idx.n() {
        let phi = idx.phi_matrix(p, k).expect("valid index");
        acc = acc.sum(&x.image(&phi)?)?;
    }
    Ok(acc)
}

/// Y* = intersection of the pullbacks phi_k^{-1}(Y), a subspace of V.
pub fn star_down(idx: &WedgeIndexing, y: &SubspaceBasis) -> Result<SubspaceBasis, FfError> {
    check_w_ambient(idx, y)?;
    let p = y.p();
    let mut acc = SubspaceBasis::full(p, idx.dim_v());
    for k in 1..=idx.n() {
        let phi = idx.phi_matrix(p, k).expect("valid index");
        acc = acc.intersect(&y.preimage(&phi)?)?;
    }
    Ok(acc)
}

/// X** on subspaces of V. Idempotent, so one pass suffices.
pub fn closure(idx: &WedgeIndexing, x: &SubspaceBasis) -> Result<SubspaceBasis, FfError> {
    star_down(idx, &star_up(idx, x)?)
}

pub fn is_closed(idx: &WedgeIndexing, x: &SubspaceBasis) -> Result<bool, FfError> {
    Ok(closure(idx, x)? == *x)
}

/// Y** on subspaces of W (the interior operator).
pub fn interior(idx: &WedgeIndexing, y: &SubspaceBasis) -> Result<SubspaceBasis, FfError> {
    star_up(idx, &star_down(idx, y)?)
}

/// Basis of X^n `intersect` ker(Phi), computed as the kernel of the
/// restricted block matrix [phi_1 B^T | ... | phi_n B^T] where B is a basis
/// matrix of X. Coefficient tuples are mapped back into V^n.
pub fn kernel_overlap(
    idx: &WedgeIndexing,
    x: &SubspaceBasis,
) -> Result<(usize, Vec<KerPhiElement>), FfError> {
    check_v_ambient(idx, x)?;
    let p = x.p();
    let n = idx.n();
    let m = x.dim();
    if m == 0 {
        return Ok((0, Vec::new()));
    }
    let bt = x.basis().transpose(); // dim_v x m
    let mut block: Option<MatrixGF> = None;
    for k in 1..=n {
        let phi_b = idx.phi_matrix(p, k).expect("valid index").mul(&bt)?;
        block = Some(match block {
            None => phi_b,
            Some(acc) => acc.hstack(&phi_b)?,
        });
    }
    let coeff_kernel = block.expect("n >= 2").kernel_basis();
    let mut elements = Vec::with_capacity(coeff_kernel.dim());
    for row in coeff_kernel.basis_rows() {
        let mut components = Vec::with_capacity(n);
        for k in 0..n {
            let coefs = &row[k * m..(k + 1) * m];
            let mut v = vec![0u64; idx.dim_v()];
            for (i, &c) in coefs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (col, slot) in v.iter_mut().enumerate() {
                    *slot = p.add(*slot, p.mul(c, x.basis().get(i, col)));
                }
            }
            components.push(v);
        }
        elements.push(KerPhiElement::new(p, n, components));
    }
    Ok((elements.len(), elements))
}

/// The partial pullback spaces Z_i = X `intersect`
/// phi_i^{-1}(< phi_{i+1}(X), ..., phi_n(X) >) together with
/// d_i = dim(X `intersect` < v_{sr} : i <= r < s <= n >).
pub fn partial_z(
    idx: &WedgeIndexing,
    x: &SubspaceBasis,
) -> Result<Vec<(SubspaceBasis, usize)>, FfError> {
    check_v_ambient(idx, x)?;
    let p = x.p();
    let n = idx.n();
    // tail_stars[i] = < phi_{i+1}(X), ..., phi_n(X) >, built right to left
    let mut tail = vec![SubspaceBasis::zero(p, idx.dim_w()); n + 1];
    for i in (1..n).rev() {
        let phi = idx.phi_matrix(p, i + 1).expect("valid index");
        tail[i] = tail[i + 1].sum(&x.image(&phi)?)?;
    }
    let mut out = Vec::with_capacity(n);
    for (i, tail_i) in tail.iter().enumerate().skip(1) {
        let phi = idx.phi_matrix(p, i).expect("valid index");
        let z_i = x.intersect(&tail_i.preimage(&phi)?)?;
        let coord = idx.coordinate_subspace(p, |s, r| i <= r && s <= n);
        let d_i = x.intersect(&coord)?.dim();
        out.push((z_i, d_i));
    }
    Ok(out)
}

/// One pass over X: star, closure, kernel overlap, and the Z/d sequences.
pub fn closure_report(idx: &WedgeIndexing, x: &SubspaceBasis) -> Result<ClosureReport, FfError> {
    let star = star_up(idx, x)?;
    let closed_space = star_down(idx, &star)?;
    let closed = closed_space == *x;
    let (overlap_dim, _) = kernel_overlap(idx, x)?;
    let zd = partial_z(idx, x)?;
    let z_dims = zd.iter().map(|(z, _)| z.dim()).collect();
    let d_dims = zd.iter().map(|&(_, d)| d).collect();
    Ok(ClosureReport {
        input: x.clone(),
        star,
        closure: closed_space,
        closed,
        overlap_dim,
        z_dims,
        d_dims,
    })
}

/// Random subspace of V(n), for sampled property checks. The dimension of
/// the result is the rank of `rows` random vectors.
pub fn random_subspace<R: rand::Rng>(
    idx: &WedgeIndexing,
    p: PrimeModulus,
    rows: usize,
    rng: &mut R,
) -> SubspaceBasis {
    let dim_v = idx.dim_v();
    let vectors: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..dim_v).map(|_| rng.gen_range(0..p.get())).collect())
        .collect();
    SubspaceBasis::from_spanning(p, dim_v, &vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wedge::{ker_phi_basis, v_abc};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> PrimeModulus {
        PrimeModulus::new(3).unwrap()
    }

    fn coord(idx: &WedgeIndexing, p: PrimeModulus, pairs: &[(usize, usize)]) -> SubspaceBasis {
        idx.coordinate_subspace(p, |j, i| pairs.contains(&(j, i)))
    }

    #[test]
    fn star_up_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(2);
        // X = <v_21>, n=2: X* = <w_211, w_212>, dim 2
        let x = coord(&idx, p, &[(2, 1)]);
        let star = star_up(&idx, &x).unwrap();
        assert_eq!(star.dim(), 2);
        assert_eq!(star, SubspaceBasis::full(p, idx.dim_w()));
        // X = 0 -> 0
        let zero = SubspaceBasis::zero(p, idx.dim_v());
        assert!(star_up(&idx, &zero).unwrap().is_zero());
        // X = V(3) -> W(3), dim 8
        let idx3 = WedgeIndexing::new(3);
        let full = SubspaceBasis::full(p, idx3.dim_v());
        let star = star_up(&idx3, &full).unwrap();
        assert_eq!(star.dim(), 8);
        assert_eq!(star, SubspaceBasis::full(p, idx3.dim_w()));
    }

    #[test]
    fn star_down_examples() {
        let p = p3();
        let idx = WedgeIndexing::new(2);
        // Y = W -> V
        let full_w = SubspaceBasis::full(p, idx.dim_w());
        assert_eq!(
            star_down(&idx, &full_w).unwrap(),
            SubspaceBasis::full(p, idx.dim_v())
        );
        // Y = <w_211>: phi_2(v_21) = w_212 is not in Y, so Y* = 0
        let mut w211 = vec![0u64; idx.dim_w()];
        w211[idx.w_index(2, 1, 1)] = 1;
        let y = SubspaceBasis::from_spanning(p, idx.dim_w(), &[w211]);
        assert!(star_down(&idx, &y).unwrap().is_zero());
    }

    #[test]
    fn coordinate_subspaces_recovered_by_star_down() {
        let p = p3();
        let idx = WedgeIndexing::new(3);
        for pairs in [
            vec![(2usize, 1usize)],
            vec![(3, 1)],
            vec![(2, 1), (3, 2)],
            vec![(2, 1), (3, 1), (3, 2)],
        ] {
            let x = coord(&idx, p, &pairs);
            let up = star_up(&idx, &x).unwrap();
            assert_eq!(star_down(&idx, &up).unwrap(), x);
        }
    }

    #[test]
    fn extra_special_p5_not_closed() {
        // X = <v_31, v_41, v_32, v_42, v_21 - v_43> in V(4): closure is all of V
        let p = p3();
        let idx = WedgeIndexing::new(4);
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
        let x = SubspaceBasis::from_spanning(p, idx.dim_v(), &rows);
        assert_eq!(x.dim(), 5);
        let c = closure(&idx, &x).unwrap();
        assert!(!is_closed(&idx, &x).unwrap());
        assert_eq!(c, SubspaceBasis::full(p, idx.dim_v()));
    }

    #[test]
    fn single_line_closed_at_n3() {
        // X = <v_21 + v_32> in V(3) is closed
        let p = p3();
        let idx = WedgeIndexing::new(3);
        let mut v = vec![0u64; idx.dim_v()];
        v[idx.v_index(2, 1)] = 1;
        v[idx.v_index(3, 2)] = 1;
        let x = SubspaceBasis::from_spanning(p, idx.dim_v(), &[v]);
        assert!(is_closed(&idx, &x).unwrap());
    }

    #[test]
    fn kernel_overlap_examples() {
        let p = p3();
        // X = V(3): overlap dim 1, basis v_(123)
        let idx = WedgeIndexing::new(3);
        let full = SubspaceBasis::full(p, idx.dim_v());
        let (dim, basis) = kernel_overlap(&idx, &full).unwrap();
        assert_eq!(dim, 1);
        let expected = v_abc(&idx, p, 1, 2, 3).unwrap();
        let got = SubspaceBasis::from_spanning(p, 3 * idx.dim_v(), &[basis[0].to_flat()]);
        let want = SubspaceBasis::from_spanning(p, 3 * idx.dim_v(), &[expected.to_flat()]);
        assert_eq!(got, want);
        // dim X <= 2 -> overlap 0
        let small = coord(&idx, p, &[(2, 1), (3, 1)]);
        assert_eq!(kernel_overlap(&idx, &small).unwrap().0, 0);
    }

    #[test]
    fn kernel_overlap_agrees_with_intersection_route() {
        // cross-check against X^n intersect ker(Phi) computed directly
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_subspace(&idx, p, rng.gen_range(0..=6), &mut rng);
            let (dim, elems) = kernel_overlap(&idx, &x).unwrap();
            // direct route: X^n as product subspace, intersect with ker basis span
            let flat_dim = 4 * idx.dim_v();
            let mut prod_rows = Vec::new();
            for k in 0..4 {
                for row in x.basis_rows() {
                    let mut v = vec![0u64; flat_dim];
                    v[k * idx.dim_v()..(k + 1) * idx.dim_v()].copy_from_slice(&row);
                    prod_rows.push(v);
                }
            }
            let prod = SubspaceBasis::from_spanning(p, flat_dim, &prod_rows);
            let ker_flat: Vec<Vec<u64>> =
                ker_phi_basis(&idx, p).iter().map(|e| e.to_flat()).collect();
            let ker = SubspaceBasis::from_spanning(p, flat_dim, &ker_flat);
            let direct = prod.intersect(&ker).unwrap();
            assert_eq!(dim, direct.dim());
            for e in &elems {
                assert!(direct.contains(&e.to_flat()));
                assert!(e.in_kernel(&idx));
            }
        }
    }

    #[test]
    fn partial_z_examples() {
        let p = p3();
        // X = V(3): z_dims = (1, 0, 0), sum equals overlap
        let idx = WedgeIndexing::new(3);
        let full = SubspaceBasis::full(p, idx.dim_v());
        let zd = partial_z(&idx, &full).unwrap();
        let dims: Vec<usize> = zd.iter().map(|(z, _)| z.dim()).collect();
        assert_eq!(dims, vec![1, 0, 0]);
        // coordinate <v_21>: all trivial
        let x = coord(&idx, p, &[(2, 1)]);
        let zd = partial_z(&idx, &x).unwrap();
        assert!(zd.iter().all(|(z, _)| z.is_zero()));
        // X = V(4): z-sum is C(4,3) = 4
        let idx4 = WedgeIndexing::new(4);
        let full4 = SubspaceBasis::full(p, idx4.dim_v());
        let zd = partial_z(&idx4, &full4).unwrap();
        let total: usize = zd.iter().map(|(z, _)| z.dim()).sum();
        assert_eq!(total, 4);
        // Z_{n-1} and Z_n always trivial
        assert!(zd[2].0.is_zero() && zd[3].0.is_zero());
    }

    #[test]
    fn report_identities_on_samples() {
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3usize, 4] {
            let idx = WedgeIndexing::new(n);
            for _ in 0..25 {
                let x = random_subspace(&idx, p, rng.gen_range(0..=idx.dim_v()), &mut rng);
                let r = closure_report(&idx, &x).unwrap();
                assert_eq!(r.star.dim(), n * x.dim() - r.overlap_dim);
                assert_eq!(r.z_dims.iter().sum::<usize>(), r.overlap_dim);
                assert!(r.closure.contains_subspace(&x));
                assert_eq!(r.closed, r.closure == x);
                // closure idempotent; star invariant under closure
                let cc = closure(&idx, &r.closure).unwrap();
                assert_eq!(cc, r.closure);
                assert_eq!(star_up(&idx, &r.closure).unwrap(), r.star);
            }
        }
    }

    #[test]
    fn interior_laws_on_samples() {
        let p = p3();
        let idx = WedgeIndexing::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let dim_w = idx.dim_w();
            let rows = rng.gen_range(0..=dim_w);
            let vectors: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..dim_w).map(|_| rng.gen_range(0..3)).collect())
                .collect();
            let y = SubspaceBasis::from_spanning(p, dim_w, &vectors);
            let int = interior(&idx, &y).unwrap();
            assert!(y.contains_subspace(&int)); // decreasing
            assert_eq!(interior(&idx, &int).unwrap(), int); // idempotent
            assert_eq!(star_down(&idx, &int).unwrap(), star_down(&idx, &y).unwrap());
            // Y* = Y***
        }
    }

    #[test]
    fn pi_vanishing_implies_closed() {
        // Pi_i(X) = 0 for some i forces X closed
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            // sample inside the coordinate subspace avoiding index 4
            let sub = idx.coordinate_subspace(p, |j, _| j < 4);
            let rows = rng.gen_range(0..=sub.dim());
            let vectors: Vec<Vec<u64>> = (0..rows)
                .map(|_| {
                    let coefs: Vec<u64> = (0..sub.dim()).map(|_| rng.gen_range(0..3)).collect();
                    let mut v = vec![0u64; idx.dim_v()];
                    for (r, &c) in coefs.iter().enumerate() {
                        for (col, slot) in v.iter_mut().enumerate() {
                            *slot = p.add(*slot, p.mul(c, sub.basis().get(r, col)));
                        }
                    }
                    v
                })
                .collect();
            let x = SubspaceBasis::from_spanning(p, idx.dim_v(), &vectors);
            assert!(idx.big_pi_of_subspace_is_zero(&x, 4));
            assert!(is_closed(&idx, &x).unwrap());
        }
    }

    #[test]
    fn pi_ji_vanishing_preserved_by_closure() {
        let p = p3();
        let idx = WedgeIndexing::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let x = random_subspace(&idx, p, rng.gen_range(0..=4), &mut rng);
            let c = closure(&idx, &x).unwrap();
            for col in 0..idx.dim_v() {
                let x_zero = x.basis_rows().iter().all(|v| v[col] == 0);
                if x_zero {
                    assert!(c.basis_rows().iter().all(|v| v[col] == 0));
                }
            }
        }
    }
}
