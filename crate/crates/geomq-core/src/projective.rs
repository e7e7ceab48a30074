//! Expectation functions and the projectable tensors on rays.
//!
//! Rays are handled through homogeneous representatives in ℝ²ⁿ∖{0} plus a
//! collinearity test, never through charts. The expectation function
//! `e_A(ψ) = ⟨ψ|Aψ⟩ / (2⟨ψ|ψ⟩)` is homogeneous of degree zero and phase
//! invariant, so it descends to the projective space; its critical points
//! are the eigenvectors of `A` and its critical values are half the
//! eigenvalues.
//!
//! The projectable tensors are
//!
//! ```text
//! G_P(ψ) = ⟨ψ|ψ⟩ G - (Γ⊗Γ + Δ⊗Δ)(ψ)
//! Ω_P(ψ) = ⟨ψ|ψ⟩ Ω - (Γ⊗Δ - Δ⊗Γ)(ψ)
//! ```
//!
//! and contracting them with `de_A` gives the nonlinear fields
//! `𝒴_A = Y_{f_A} - 2e_A Δ` and `𝒳_A = X_{f_A} - 2e_A Γ`, which are tangent
//! to every sphere around the origin.
//!
//! On expectation values the two contractions evaluate to
//!
//! ```text
//! Ω_P(de_A, de_B) = e_{[A,B]}
//! G_P(de_A, de_B) = e_{A∘B} - 4 e_A e_B
//! ```
//!
//! the second being the symmetrized covariance of the trace-one state
//! `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩` (the factor 4 compensates the ½ in the definition of
//! `e`). Consequently the star product on expectation functions reads
//! `e_A ⋆ e_B = 2 e_A e_B + ½G_P(de_A, de_B) + (i/2)Ω_P(de_A, de_B)` and
//! reproduces `e_{AB}` exactly.

use crate::flow::{integrate, IntegratorConfig, StopReason};
use crate::hermitian::HermitianOperator;
use crate::kahler::{
    complexify_coords, quadratic_gradient, realify_op, KahlerTensors, RealifiedVector, VectorField,
};
use crate::{C64, CMat, GeomError, RVec, Result};

/// Expectation value `e_A(ψ) = ⟨ψ|Aψ⟩ / (2⟨ψ|ψ⟩)`.
pub fn expectation(a: &HermitianOperator, psi: &RealifiedVector) -> Result<f64> {
    expectation_at(a, psi.coords())
}

pub(crate) fn expectation_at(a: &HermitianOperator, x: &RVec) -> Result<f64> {
    if 2 * a.dim() != x.len() {
        return Err(GeomError::DimensionMismatch {
            left: 2 * a.dim(),
            right: x.len(),
        });
    }
    let n2 = x.norm_squared();
    if n2 == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let ar = realify_op(a.matrix());
    Ok(x.dot(&(ar * x)) / (2.0 * n2))
}

/// Euclidean gradient (covector) of `e_A` at `x`:
/// `∇e_A = A_ℝ x / ⟨x,x⟩ - 2 f_A x / ⟨x,x⟩²`.
pub fn expectation_gradient(a: &HermitianOperator, x: &RVec) -> RVec {
    let n2 = x.norm_squared();
    let grad_f = quadratic_gradient(a, x);
    let f = 0.5 * x.dot(&grad_f);
    grad_f / n2 - x * (2.0 * f / (n2 * n2))
}

/// `G_P(ψ)(α, β)` for arbitrary covectors.
pub fn g_p_contract(x: &RVec, alpha: &RVec, beta: &RVec) -> f64 {
    let n2 = x.norm_squared();
    let j = KahlerTensors::new(x.len() / 2).j();
    let jx = &j * x;
    n2 * alpha.dot(beta) - (alpha.dot(&jx) * beta.dot(&jx) + alpha.dot(x) * beta.dot(x))
}

/// `Ω_P(ψ)(α, β)` for arbitrary covectors. The slot pairing of the
/// `Γ`/`Δ` correction is fixed by requiring the duals `ĝ(Δ)`, `ĝ(Γ)` to lie
/// in the kernel while `Ω(α, β) = αᵀOβ` keeps `Ω(df_A, df_B) = f_{[A,B]}`.
pub fn omega_p_contract(x: &RVec, alpha: &RVec, beta: &RVec) -> f64 {
    let n = x.len() / 2;
    let t = KahlerTensors::new(n);
    let jx = t.j() * x;
    let omega = t.omega_bivector();
    alpha.dot(&(omega * beta)) * x.norm_squared()
        - (alpha.dot(x) * beta.dot(&jx) - alpha.dot(&jx) * beta.dot(x))
}

/// `G_P(de_A, de_B)(ψ)`; equals `e_{A∘B} - 4 e_A e_B`.
pub fn projected_metric(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<f64> {
    check_pair(a, b, psi)?;
    let x = psi.coords();
    if x.norm_squared() == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let da = expectation_gradient(a, x);
    let db = expectation_gradient(b, x);
    Ok(g_p_contract(x, &da, &db))
}

/// `Ω_P(de_A, de_B)(ψ)`; equals `e_{[A,B]}`.
pub fn projected_poisson(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<f64> {
    check_pair(a, b, psi)?;
    let x = psi.coords();
    if x.norm_squared() == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let da = expectation_gradient(a, x);
    let db = expectation_gradient(b, x);
    Ok(omega_p_contract(x, &da, &db))
}

fn check_pair(a: &HermitianOperator, b: &HermitianOperator, psi: &RealifiedVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if a.dim() != psi.n() {
        return Err(GeomError::DimensionMismatch {
            left: a.dim(),
            right: psi.n(),
        });
    }
    Ok(())
}

/// Which projectable field an operator induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectiveKind {
    Hamiltonian,
    Gradient,
}

/// Nonlinear vector field on ℝ²ⁿ∖{0} induced by `A` on rays:
/// `𝒴_A = Y_{f_A} - 2e_A Δ` (gradient) or `𝒳_A = X_{f_A} - 2e_A Γ`
/// (Hamiltonian). Both are tangent to spheres, so their flows preserve the
/// norm of the representative.
#[derive(Debug, Clone)]
pub struct ProjectiveField {
    a: HermitianOperator,
    kind: ProjectiveKind,
}

impl ProjectiveField {
    pub fn operator(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn kind(&self) -> ProjectiveKind {
        self.kind
    }
}

impl VectorField for ProjectiveField {
    fn n(&self) -> usize {
        self.a.dim()
    }

    fn value_at(&self, x: &RVec) -> RVec {
        let n2 = x.norm_squared();
        if n2 == 0.0 {
            return RVec::zeros(x.len());
        }
        let grad_f = quadratic_gradient(&self.a, x);
        let two_e = x.dot(&grad_f) / n2; // 2 e_A(x)
        match self.kind {
            ProjectiveKind::Gradient => grad_f - x * two_e,
            ProjectiveKind::Hamiltonian => {
                let j = KahlerTensors::new(self.a.dim()).j();
                &j * grad_f - (j * x) * two_e
            }
        }
    }

    fn describe(&self) -> String {
        match self.kind {
            ProjectiveKind::Gradient => "projective-gradient".into(),
            ProjectiveKind::Hamiltonian => "projective-hamiltonian".into(),
        }
    }
}

/// `𝒴_A = G_P(de_A, ·)`.
pub fn projective_gradient(a: &HermitianOperator) -> ProjectiveField {
    ProjectiveField {
        a: a.clone(),
        kind: ProjectiveKind::Gradient,
    }
}

/// `𝒳_A = Ω_P(de_A, ·)`.
pub fn projective_hamiltonian(a: &HermitianOperator) -> ProjectiveField {
    ProjectiveField {
        a: a.clone(),
        kind: ProjectiveKind::Hamiltonian,
    }
}

/// Star product on expectation functions:
/// `e_A ⋆ e_B = 2e_Ae_B + ½G_P(de_A, de_B) + (i/2)Ω_P(de_A, de_B) = e_{AB}`.
pub fn star_on_expectations(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<C64> {
    let ea = expectation(a, psi)?;
    let eb = expectation(b, psi)?;
    let sym = projected_metric(a, b, psi)?;
    let skew = projected_poisson(a, b, psi)?;
    Ok(C64::new(2.0 * ea * eb + 0.5 * sym, 0.5 * skew))
}

/// Expectation function of a general (not necessarily Hermitian) matrix,
/// `e_M(ψ) = ⟨ψ|Mψ⟩ / (2⟨ψ|ψ⟩)`. These complex-valued functions form the
/// C*-algebra on which GL acts by star-automorphisms.
#[derive(Debug, Clone)]
pub struct ExpectationFunction {
    op: CMat,
}

impl ExpectationFunction {
    pub fn new(op: CMat) -> Result<Self> {
        if op.nrows() != op.ncols() {
            return Err(GeomError::NotSquare {
                rows: op.nrows(),
                cols: op.ncols(),
            });
        }
        Ok(Self { op })
    }

    pub fn of(a: &HermitianOperator) -> Self {
        Self {
            op: a.matrix().clone(),
        }
    }

    pub fn operator(&self) -> &CMat {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.nrows()
    }

    pub fn value_at(&self, psi: &RealifiedVector) -> Result<C64> {
        let x = psi.coords();
        let n2 = x.norm_squared();
        if n2 == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        let z = complexify_coords(x);
        Ok((z.adjoint() * &self.op * &z)[(0, 0)] / C64::new(2.0 * n2, 0.0))
    }

    /// Hermitian/anti-Hermitian split `M = A + iB`.
    fn split(&self) -> (HermitianOperator, HermitianOperator) {
        let adj = self.op.adjoint();
        let a = HermitianOperator::symmetrized((&self.op + &adj) * C64::new(0.5, 0.0));
        let b = HermitianOperator::symmetrized((&self.op - &adj) * C64::new(0.0, -0.5));
        (a, b)
    }
}

/// Star product extended ℂ-bilinearly to general expectation functions;
/// still satisfies `e_M ⋆ e_N = e_{MN}`.
pub fn star_general(
    m: &ExpectationFunction,
    n: &ExpectationFunction,
    psi: &RealifiedVector,
) -> Result<C64> {
    if m.dim() != n.dim() {
        return Err(GeomError::DimensionMismatch {
            left: m.dim(),
            right: n.dim(),
        });
    }
    let (ma, mb) = m.split();
    let (na, nb) = n.split();
    let i = C64::new(0.0, 1.0);
    Ok(star_on_expectations(&ma, &na, psi)?
        + star_on_expectations(&ma, &nb, psi)? * i
        + star_on_expectations(&mb, &na, psi)? * i
        - star_on_expectations(&mb, &nb, psi)?)
}

/// The GL star-automorphism `Φ_T(e_M) = e_{T M T⁻¹}`.
pub fn gl_automorphism(t: &CMat, e: &ExpectationFunction) -> Result<ExpectationFunction> {
    if t.nrows() != t.ncols() {
        return Err(GeomError::NotSquare {
            rows: t.nrows(),
            cols: t.ncols(),
        });
    }
    if t.nrows() != e.dim() {
        return Err(GeomError::DimensionMismatch {
            left: t.nrows(),
            right: e.dim(),
        });
    }
    let t_inv = t.clone().try_inverse().ok_or(GeomError::Singular)?;
    ExpectationFunction::new(t * e.operator() * t_inv)
}

/// A converged critical point of an expectation function.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub psi: RealifiedVector,
    /// `e_A` at the critical point: half an eigenvalue of `A`.
    pub value: f64,
}

/// Runs the normalized gradient flow of `e_A` from each seed. A seed counts
/// as converged when the projective gradient norm falls below
/// `cfg.convergence_eps`; non-convergence within the step budget is reported
/// per seed.
pub fn critical_points(
    a: &HermitianOperator,
    seeds: &[RealifiedVector],
    cfg: &IntegratorConfig,
) -> Vec<Result<CriticalPoint>> {
    let field = projective_gradient(a);
    let mut run_cfg = cfg.clone();
    run_cfg.renormalize = true;
    seeds
        .iter()
        .map(|seed| {
            if seed.n() != a.dim() {
                return Err(GeomError::DimensionMismatch {
                    left: seed.n(),
                    right: a.dim(),
                });
            }
            if seed.coords().norm_squared() == 0.0 {
                return Err(GeomError::ZeroVector);
            }
            let traj = integrate(&field, seed, &run_cfg)?;
            if traj.stop != StopReason::Converged {
                return Err(GeomError::IntegrationFailure {
                    t: traj.final_time(),
                    reason: format!(
                        "gradient flow not converged: field norm {:.3e} above {:.1e}",
                        field.value_at(traj.final_point()).norm(),
                        run_cfg.convergence_eps
                    ),
                });
            }
            let psi = RealifiedVector::new(traj.final_point().clone())?;
            let value = expectation(a, &psi)?;
            Ok(CriticalPoint { psi, value })
        })
        .collect()
}

/// Full spectrum of `A` by repeated gradient-flow maximization with
/// deflation: each converged eigenvector is shifted far below the remaining
/// spectrum and the ascent is restarted from a fresh random seed. Returns
/// eigenvalues in descending order (multiplicities included).
pub fn spectrum_by_gradient_flow<R: rand::Rng>(
    a: &HermitianOperator,
    cfg: &IntegratorConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = a.dim();
    let shift = a.matrix().norm() + 1.0;
    let mut deflated = a.matrix().clone();
    let mut spectrum = Vec::with_capacity(n);
    for _ in 0..n {
        let current = HermitianOperator::symmetrized(deflated.clone());
        let seed = RealifiedVector::new(crate::sampling::random_unit_realified(rng, n))?;
        let mut results = critical_points(&current, &[seed], cfg);
        let cp = results.remove(0)?;
        let lambda = 2.0 * cp.value;
        spectrum.push(lambda);
        let v = {
            let z = complexify_coords(cp.psi.coords());
            let norm = z.norm();
            z / C64::new(norm, 0.0)
        };
        deflated -= (&v * v.adjoint()) * C64::new(lambda + shift, 0.0);
    }
    Ok(spectrum)
}
