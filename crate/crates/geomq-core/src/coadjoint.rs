//! The dual of the unitary algebra, momentum maps and Bloch coordinates.
//!
//! `𝔲*(ℋ)` is identified with Hermitian matrices. Two pairings coexist and
//! the factor bookkeeping matters:
//!
//! * the duality pairing with anti-Hermitians, `⟨ξ|T⟩ = (i/2)Tr(ξT)`;
//! * the scalar product `⟨ξ₁, ξ₂⟩ = ½Tr(ξ₁ξ₂)`, which makes the Pauli
//!   family orthonormal;
//! * **linear functions** on `𝔲*` use the plain trace, `F_A(ξ) = Tr(ξA)`.
//!
//! The last convention is what makes the pullback identities exact:
//! `F_A ∘ μ = f_A` and `F_A ∘ μ_P = e_A` for the momentum maps
//! `μ(ψ) = ½|ψ⟩⟨ψ|` and `μ_P(ψ) = |ψ⟩⟨ψ| / (2⟨ψ|ψ⟩)`. The physical
//! trace-one state is `ρ = 2μ_P(ψ)`; the conversion is always explicit.
//!
//! The tensors `R` and `Λ` encode the Jordan and Lie products through those
//! linear functions, and [`check_mu_related`] verifies that the Kähler
//! tensors upstairs and `R`, `Λ` downstairs are intertwined by both momentum
//! maps, including the covariance form of the projected metric
//! `G_P(de_A, de_B) = R∘μ_P - 4 e_A e_B` (the product correction is
//! `Tr(ρA)·Tr(ρB)` at the trace-one state `ρ = 2μ_P`).

use crate::hermitian::{bloch_basis, jordan_bracket, lie_bracket, max_abs, HermitianOperator};
use crate::kahler::{
    complexify_coords, gradient_field, hamiltonian_field, jordan_bracket_at, poisson_bracket_at,
    RealifiedVector,
};
use crate::projective::{projected_metric, projected_poisson};
use crate::{C64, CMat, GeomError, RVec, Result};

/// An element of `𝔲*(ℋ)` under the Hermitian identification.
#[derive(Debug, Clone, PartialEq)]
pub struct DualElement {
    xi: HermitianOperator,
}

impl DualElement {
    pub fn new(xi: HermitianOperator) -> Self {
        Self { xi }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.xi
    }

    pub fn matrix(&self) -> &CMat {
        self.xi.matrix()
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn trace(&self) -> f64 {
        self.xi.trace()
    }
}

/// Duality pairing `⟨ξ|T⟩ = (i/2)Tr(ξT)` between Hermitian `ξ` and
/// anti-Hermitian `T`; always real.
pub fn dual_pairing(xi: &DualElement, t: &CMat) -> Result<f64> {
    if t.nrows() != t.ncols() || t.nrows() != xi.dim() {
        return Err(GeomError::DimensionMismatch {
            left: xi.dim(),
            right: t.nrows(),
        });
    }
    let deviation = max_abs(&(t + t.adjoint()));
    if deviation > 1e-10 {
        return Err(GeomError::NotAntiHermitian { deviation });
    }
    let val = (xi.matrix() * t).trace() * C64::new(0.0, 0.5);
    Ok(val.re)
}

/// Lie bracket on the dual, `[ξ₁, ξ₂] = -i(ξ₁ξ₂ - ξ₂ξ₁)`.
pub fn dual_bracket(a: &DualElement, b: &DualElement) -> Result<DualElement> {
    Ok(DualElement::new(lie_bracket(&a.xi, &b.xi)?))
}

/// Scalar product `⟨ξ₁, ξ₂⟩ = ½Tr(ξ₁ξ₂)`; the Pauli family is orthonormal.
pub fn dual_scalar(a: &DualElement, b: &DualElement) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(0.5 * (a.matrix() * b.matrix()).trace().re)
}

/// The hat isomorphism `ξ ↦ -iξ` onto anti-Hermitian matrices; it
/// intertwines the dual bracket with the matrix commutator.
pub fn hat_map(xi: &DualElement) -> CMat {
    xi.matrix() * C64::new(0.0, -1.0)
}

/// Linear function `F_A(ξ) = Tr(ξA)` (plain trace).
pub fn linear_fn(xi: &DualElement, a: &HermitianOperator) -> f64 {
    (xi.matrix() * a.matrix()).trace().re
}

/// `R(ξ)(dÂ, dB̂) = F_{A∘B}(ξ)`: the Jordan structure as a symmetric tensor.
pub fn tensor_r(xi: &DualElement, a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    Ok(linear_fn(xi, &jordan_bracket(a, b)?))
}

/// `Λ(ξ)(dÂ, dB̂) = F_{[A,B]}(ξ)`: the Lie structure as a Poisson tensor.
pub fn tensor_lambda(
    xi: &DualElement,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<f64> {
    Ok(linear_fn(xi, &lie_bracket(a, b)?))
}

/// The Heisenberg vector field `X_Ĥ = Λ(dĤ, ·)` on `𝔲*`. Its value at `ξ`
/// is `i(Hξ - ξH)` and its flow is the coadjoint orbit motion
/// `ξ(t) = e^{iHt} ξ e^{-iHt}`, matching the sign of the Schrödinger flow
/// upstairs so the two are μ-related.
#[derive(Debug, Clone)]
pub struct HeisenbergField {
    h: HermitianOperator,
}

impl HeisenbergField {
    pub fn new(h: HermitianOperator) -> Self {
        Self { h }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn value_at(&self, xi: &DualElement) -> Result<HermitianOperator> {
        if xi.dim() != self.h.dim() {
            return Err(GeomError::DimensionMismatch {
                left: xi.dim(),
                right: self.h.dim(),
            });
        }
        let m = self.h.matrix() * xi.matrix() - xi.matrix() * self.h.matrix();
        Ok(HermitianOperator::symmetrized(m * C64::new(0.0, 1.0)))
    }

    /// RK4 integration of `ξ̇ = i[H, ξ]` with fixed step `h`.
    pub fn flow(&self, xi0: &DualElement, t: f64, h: f64) -> Result<DualElement> {
        if xi0.dim() != self.h.dim() {
            return Err(GeomError::DimensionMismatch {
                left: xi0.dim(),
                right: self.h.dim(),
            });
        }
        let rhs = |m: &CMat| -> CMat {
            (self.h.matrix() * m - m * self.h.matrix()) * C64::new(0.0, 1.0)
        };
        let mut x = xi0.matrix().clone();
        let mut remaining = t;
        while remaining > 1e-15 {
            let step = h.min(remaining);
            let k1 = rhs(&x);
            let k2 = rhs(&(&x + &k1 * C64::new(step / 2.0, 0.0)));
            let k3 = rhs(&(&x + &k2 * C64::new(step / 2.0, 0.0)));
            let k4 = rhs(&(&x + &k3 * C64::new(step, 0.0)));
            x += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
                * C64::new(step / 6.0, 0.0);
            remaining -= step;
        }
        Ok(DualElement::new(HermitianOperator::symmetrized(x)))
    }
}

/// Momentum map `μ(ψ) = ½|ψ⟩⟨ψ|`.
pub fn momentum_map(psi: &RealifiedVector) -> DualElement {
    let z = complexify_coords(psi.coords());
    let m = (&z * z.adjoint()) * C64::new(0.5, 0.0);
    DualElement::new(HermitianOperator::symmetrized(m))
}

/// Projective momentum map `μ_P(ψ) = |ψ⟩⟨ψ| / (2⟨ψ|ψ⟩)`: rank one, positive,
/// trace ½, constant on rays.
pub fn momentum_map_projective(psi: &RealifiedVector) -> Result<DualElement> {
    let z = complexify_coords(psi.coords());
    let n2 = z.norm_squared();
    if n2 == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let m = (&z * z.adjoint()) / C64::new(2.0 * n2, 0.0);
    Ok(DualElement::new(HermitianOperator::symmetrized(m)))
}

/// Tangent map of `μ` at `ψ` applied to a realified tangent vector:
/// `T_ψμ(v) = ½(|v⟩⟨ψ| + |ψ⟩⟨v|)`.
pub fn momentum_pushforward(psi: &RealifiedVector, v: &RVec) -> HermitianOperator {
    let z = complexify_coords(psi.coords());
    let w = complexify_coords(v);
    let m = (&w * z.adjoint() + &z * w.adjoint()) * C64::new(0.5, 0.0);
    HermitianOperator::symmetrized(m)
}

/// Residuals of the μ-relatedness identities at one sample `(A, B, ψ)`.
#[derive(Debug, Clone)]
pub struct MuRelatednessReport {
    /// `G(df_A, df_B) = R(dÂ, dB̂)∘μ`
    pub metric_vs_r: f64,
    /// `Ω(df_A, df_B) = Λ(dÂ, dB̂)∘μ`
    pub poisson_vs_lambda: f64,
    /// `Ω_P(de_A, de_B) = Λ∘μ_P`
    pub projective_poisson_vs_lambda: f64,
    /// `G_P(de_A, de_B) = R∘μ_P - Tr(ρA)Tr(ρB)` at `ρ = 2μ_P`
    pub projective_metric_vs_r: f64,
    /// `Tμ(X_{f_A}) = X_Â∘μ`
    pub hamiltonian_pushforward: f64,
    /// `Tμ(Y_{f_A}) = Y_Â∘μ` with `Y_Â(ξ) = A∘ξ`
    pub gradient_pushforward: f64,
    /// `Tμ(Δ) = 2Δ_{𝔲*}∘μ`
    pub dilation_pushforward: f64,
    /// `Tμ(Γ) = 0`
    pub phase_pushforward: f64,
}

impl MuRelatednessReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.metric_vs_r,
            self.poisson_vs_lambda,
            self.projective_poisson_vs_lambda,
            self.projective_metric_vs_r,
            self.hamiltonian_pushforward,
            self.gradient_pushforward,
            self.dilation_pushforward,
            self.phase_pushforward,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluates every μ-relatedness identity at `(A, B, ψ)`, computing both
/// sides independently and reporting residuals.
pub fn check_mu_related(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<MuRelatednessReport> {
    let mu = momentum_map(psi);
    let mu_p = momentum_map_projective(psi)?;

    let metric_vs_r = (jordan_bracket_at(a, b, psi)? - tensor_r(&mu, a, b)?).abs();
    let poisson_vs_lambda = (poisson_bracket_at(a, b, psi)? - tensor_lambda(&mu, a, b)?).abs();

    let projective_poisson_vs_lambda =
        (projected_poisson(a, b, psi)? - tensor_lambda(&mu_p, a, b)?).abs();

    // Covariance form at the physical trace-one state 2 μ_P.
    let rho_phys = DualElement::new(HermitianOperator::symmetrized(
        mu_p.matrix() * C64::new(2.0, 0.0),
    ));
    let correction = linear_fn(&rho_phys, a) * linear_fn(&rho_phys, b);
    let projective_metric_vs_r =
        (projected_metric(a, b, psi)? - (tensor_r(&mu_p, a, b)? - correction)).abs();

    // Pushforward identities.
    let x_val = hamiltonian_field(a).value_at(psi.coords());
    let push_x = momentum_pushforward(psi, &x_val);
    let heis = HeisenbergField::new(a.clone()).value_at(&mu)?;
    let hamiltonian_pushforward = max_abs(&(push_x.matrix() - heis.matrix()));

    let y_val = gradient_field(a).value_at(psi.coords());
    let push_y = momentum_pushforward(psi, &y_val);
    let grad_dual = jordan_bracket(a, mu.operator())?;
    let gradient_pushforward = max_abs(&(push_y.matrix() - grad_dual.matrix()));

    let push_delta = momentum_pushforward(psi, &psi.coords().clone());
    let dilation_pushforward =
        max_abs(&(push_delta.matrix() - mu.matrix() * C64::new(2.0, 0.0)));

    let gamma_val = crate::kahler::phase_field(psi.n()).value_at(psi.coords());
    let phase_pushforward = max_abs(momentum_pushforward(psi, &gamma_val).matrix());

    Ok(MuRelatednessReport {
        metric_vs_r,
        poisson_vs_lambda,
        projective_poisson_vs_lambda,
        projective_metric_vs_r,
        hamiltonian_pushforward,
        gradient_pushforward,
        dilation_pushforward,
        phase_pushforward,
    })
}

/// Coordinates of a dual element against the trace-orthonormal Hermitian
/// basis: `yᵏ = ½Tr(B_k ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochCoordinates {
    pub n: usize,
    pub y: Vec<f64>,
}

impl BlochCoordinates {
    /// Squared Euclidean length of the traceless part `(y¹, …)`.
    pub fn vector_norm_sq(&self) -> f64 {
        self.y[1..].iter().map(|v| v * v).sum()
    }
}

/// Expansion coefficients `yᵏ = ½Tr(B_k ρ)` over [`bloch_basis`]. For a
/// qubit this is the usual Bloch parametrization with `y⁰ = ½` on trace-one
/// states; positivity then bounds the vector part by `|y|² ≤ ¼`, a limit
/// enforced by the eigenvalue check in the tests rather than assumed.
pub fn bloch_coords(rho: &DualElement) -> BlochCoordinates {
    let n = rho.dim();
    let y = bloch_basis(n)
        .iter()
        .map(|b| 0.5 * (b.matrix() * rho.matrix()).trace().re)
        .collect();
    BlochCoordinates { n, y }
}

/// Inverse of [`bloch_coords`]: `ρ = Σ yᵏ B_k`.
pub fn bloch_inverse(coords: &BlochCoordinates) -> Result<DualElement> {
    let n = coords.n;
    if coords.y.len() != n * n {
        return Err(GeomError::DimensionMismatch {
            left: coords.y.len(),
            right: n * n,
        });
    }
    let mut m = CMat::zeros(n, n);
    for (yk, bk) in coords.y.iter().zip(bloch_basis(n)) {
        m += bk.matrix() * C64::new(*yk, 0.0);
    }
    Ok(DualElement::new(HermitianOperator::symmetrized(m)))
}
