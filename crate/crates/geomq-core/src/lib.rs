//! Geometric formulation of finite-level quantum mechanics.
//!
//! The Hilbert space ℂⁿ is treated as the real vector space ℝ²ⁿ carrying a
//! Kähler structure (metric `g`, symplectic form `ω`, complex structure `J`).
//! Observables become quadratic functions, dynamics become Hamiltonian and
//! gradient vector fields, and the momentum map carries everything onto the
//! dual of the unitary algebra, where density states, Kraus channels and
//! GKLS generators live.
//!
//! Modules follow that story bottom-up:
//!
//! * [`hermitian`] — complex matrix algebra, the two brackets, deformed
//!   Hermitian structures.
//! * [`kahler`] — the realified space, constant Kähler tensors, quadratic
//!   functions, linear Hamiltonian/gradient fields, Lie closures.
//! * [`projective`] — expectation functions, projectable tensors, nonlinear
//!   fields on rays, critical points as eigenvectors.
//! * [`flow`] — fixed-step RK4 integration, flow commutation, ray tests.
//! * [`coadjoint`] — the dual 𝔲*(ℋ), momentum maps, the R and Λ tensors,
//!   Bloch coordinates.
//! * [`density`] — the positive cone, rank strata, the trace-normalized
//!   GL action.
//! * [`kraus`] — Kraus families, the channel semigroup, Choi matrices.
//! * [`lindblad`] — GKLS generators in both standard forms, semigroup
//!   integration.
//! * [`gns`] — the GNS construction for Mₙ(ℂ) and its block decomposition.
//! * [`checks`] — seeded property suites over random samples (data-parallel
//!   with the `parallel` feature, sequential otherwise).

pub mod checks;
pub mod coadjoint;
pub mod density;
mod error;
pub mod flow;
pub mod gns;
pub mod hermitian;
pub mod kahler;
pub mod kraus;
pub mod lindblad;
pub mod projective;
pub mod sampling;

pub use error::{GeomError, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dynamically sized complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dynamically sized complex vector.
pub type CVec = nalgebra::DVector<C64>;
/// Dynamically sized real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
/// Dynamically sized real vector.
pub type RVec = nalgebra::DVector<f64>;

/// Absolute tolerance for Hermiticity validation at construction time.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance for approximate identity checks (K-unitarity, normalization).
pub const IDENTITY_TOL: f64 = 1e-10;
/// Eigenvalue threshold (relative to trace) separating rank strata.
pub const RANK_EIGENVALUE_TOL: f64 = 1e-8;
