//! Exact computational-algebra engine deciding capability of finite
//! class-2 groups of odd prime exponent, via a closure operator on
//! subspaces of the exterior square of GF(p)^n.
//!
//! Layered bottom-up:
//! - [`ff`]: exact GF(p) scalars, matrices, and canonical subspace bases;
//! - [`wedge`]: the spaces U, V, W, their indexed bases, and the maps
//!   between them, including the block map Phi and its explicit kernel;
//! - [`closure`]: the star operators, the closure/interior operators, and
//!   the kernel-overlap diagnostics;
//! - [`arith`]: the triangular-number counting functions r(d) and f(m)
//!   with the published reference table;
//! - [`capability`]: group presentations, the capability verdict, the
//!   Psi/Upsilon constructions, and the n = 4 classifier;
//! - [`verify`]: brute-force oracles (Grassmannian enumeration, empirical
//!   f, span searches) and the named verification suites.

pub mod arith;
pub mod capability;
pub mod closure;
pub mod ff;
pub mod verify;
pub mod wedge;

pub use arith::{bounds_dim_star, f_of, min_s, r_of, TriangularDecomposition, F_TABLE};
pub use capability::{
    classify_n4, is_capable, CapabilityError, CapabilityVerdict, GroupPresentation,
    ProjectivePoint, VerdictReason,
};
pub use closure::{closure, closure_report, is_closed, kernel_overlap, ClosureReport};
pub use ff::{FfError, MatrixGF, PrimeModulus, SubspaceBasis};
pub use verify::{
    empirical_f, gaussian_binomial, grassmannian_iter, span_dim_search, verify_suite, SuiteConfig,
    SuiteReport, VerifyError, SUITE_NAMES,
};
pub use wedge::{binom, ker_phi_basis, KerPhiElement, WedgeError, WedgeIndexing};
