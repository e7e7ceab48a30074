//! Fixed-step RK4 integration of vector fields on ℝ²ⁿ.
//!
//! Classical fourth-order Runge-Kutta with a constant step keeps trajectory
//! output reproducible; every field here is smooth and bounded on the sphere,
//! so adaptivity buys nothing at these dimensions. Convergence is detected on
//! the field norm, not point displacement, so slow approaches to degenerate
//! critical manifolds still terminate.

use crate::kahler::{complexify_coords, RealifiedVector, VectorField};
use crate::{C64, GeomError, RVec, Result};

/// Integration parameters.
#[derive(Debug, Clone)]
pub struct IntegratorConfig {
    /// Step size.
    pub h: f64,
    /// Time horizon.
    pub t_max: f64,
    /// Terminate once `‖field(ψ)‖` drops below this.
    pub convergence_eps: f64,
    /// Project back to the unit sphere after every step.
    pub renormalize: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            h: 1e-3,
            t_max: 10.0,
            convergence_eps: 1e-8,
            renormalize: false,
        }
    }
}

/// Why the integrator stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Field norm fell below `convergence_eps`.
    Converged,
    /// Ran to `t_max`.
    HorizonReached,
}

/// Sampled solution curve.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<RVec>,
    pub meta: TrajectoryMeta,
    pub stop: StopReason,
}

#[derive(Debug, Clone)]
pub struct TrajectoryMeta {
    pub field: String,
    pub h: f64,
    pub seed_point: RVec,
}

impl Trajectory {
    pub fn final_point(&self) -> &RVec {
        self.points.last().expect("trajectory has at least the seed")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has at least the seed")
    }
}

fn rk4_step<F: VectorField + ?Sized>(field: &F, x: &RVec, h: f64) -> RVec {
    let k1 = field.value_at(x);
    let k2 = field.value_at(&(x + &k1 * (h / 2.0)));
    let k3 = field.value_at(&(x + &k2 * (h / 2.0)));
    let k4 = field.value_at(&(x + &k3 * h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn check_finite(x: &RVec, t: f64) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(GeomError::IntegrationFailure {
            t,
            reason: "non-finite state (NaN or overflow)".into(),
        });
    }
    Ok(())
}

/// RK4 trajectory of `field` from `psi0`, recorded at every step.
pub fn integrate<F: VectorField + ?Sized>(
    field: &F,
    psi0: &RealifiedVector,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if field.n() != psi0.n() {
        return Err(GeomError::DimensionMismatch {
            left: field.n(),
            right: psi0.n(),
        });
    }
    if cfg.h.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || cfg.t_max.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
    {
        return Err(GeomError::InvalidSpec(
            "integrator requires h > 0 and t_max > 0".into(),
        ));
    }

    let mut x = psi0.coords().clone();
    if cfg.renormalize {
        let norm = x.norm();
        if norm == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        x /= norm;
    }
    let steps = (cfg.t_max / cfg.h).round() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(x.clone());

    let mut stop = StopReason::HorizonReached;
    for k in 0..steps {
        let t = k as f64 * cfg.h;
        if field.value_at(&x).norm() < cfg.convergence_eps {
            stop = StopReason::Converged;
            break;
        }
        x = rk4_step(field, &x, cfg.h);
        check_finite(&x, t + cfg.h)?;
        if cfg.renormalize {
            let norm = x.norm();
            if norm == 0.0 {
                return Err(GeomError::IntegrationFailure {
                    t: t + cfg.h,
                    reason: "state collapsed to zero under renormalization".into(),
                });
            }
            x /= norm;
        }
        times.push(t + cfg.h);
        points.push(x.clone());
    }

    Ok(Trajectory {
        times,
        points,
        meta: TrajectoryMeta {
            field: field.describe(),
            h: cfg.h,
            seed_point: psi0.coords().clone(),
        },
        stop,
    })
}

/// Endpoint-only RK4 run to time `t`, with a shortened final step so the
/// horizon is hit exactly.
pub fn integrate_to<F: VectorField + ?Sized>(
    field: &F,
    x0: &RVec,
    t: f64,
    h: f64,
) -> Result<RVec> {
    if t < 0.0 {
        return Err(GeomError::InvalidSpec("negative horizon".into()));
    }
    let mut x = x0.clone();
    let mut remaining = t;
    while remaining > 1e-15 {
        let step = h.min(remaining);
        x = rk4_step(field, &x, step);
        check_finite(&x, t - remaining + step)?;
        remaining -= step;
    }
    Ok(x)
}

/// Outcome of a flow-commutation probe.
#[derive(Debug, Clone)]
pub struct CommutationReport {
    /// Distance between the two compositions `Φ¹_s∘Φ²_t` and `Φ²_t∘Φ¹_s`.
    pub defect: f64,
    pub commutes: bool,
}

/// Compares `Φ^{f1}_s ∘ Φ^{f2}_t (ψ0)` against `Φ^{f2}_t ∘ Φ^{f1}_s (ψ0)`.
pub fn flows_commute<F1, F2>(
    f1: &F1,
    f2: &F2,
    psi0: &RealifiedVector,
    s: f64,
    t: f64,
    tol: f64,
    h: f64,
) -> Result<CommutationReport>
where
    F1: VectorField + ?Sized,
    F2: VectorField + ?Sized,
{
    if f1.n() != f2.n() || f1.n() != psi0.n() {
        return Err(GeomError::DimensionMismatch {
            left: f1.n(),
            right: psi0.n(),
        });
    }
    let a = integrate_to(f2, psi0.coords(), t, h)?;
    let ab = integrate_to(f1, &a, s, h)?;
    let b = integrate_to(f1, psi0.coords(), s, h)?;
    let ba = integrate_to(f2, &b, t, h)?;
    let defect = (ab - ba).norm();
    Ok(CommutationReport {
        defect,
        commutes: defect < tol,
    })
}

/// True iff the two points lie on the same complex ray. The defect is the
/// sine of the Hermitian angle, computed from the 2×2 Gram determinant of
/// the stacked vectors (a rank test that needs no normalization choices).
pub fn same_ray(psi1: &RealifiedVector, psi2: &RealifiedVector) -> Result<bool> {
    same_ray_with_tol(psi1, psi2, 1e-8)
}

pub fn same_ray_with_tol(
    psi1: &RealifiedVector,
    psi2: &RealifiedVector,
    tol: f64,
) -> Result<bool> {
    Ok(ray_defect(psi1, psi2)? < tol)
}

/// `sin` of the angle between the rays through the two points.
pub fn ray_defect(psi1: &RealifiedVector, psi2: &RealifiedVector) -> Result<f64> {
    if psi1.n() != psi2.n() {
        return Err(GeomError::DimensionMismatch {
            left: psi1.n(),
            right: psi2.n(),
        });
    }
    let z1 = complexify_coords(psi1.coords());
    let z2 = complexify_coords(psi2.coords());
    let n1 = z1.norm_squared();
    let n2 = z2.norm_squared();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let inner: C64 = (z1.adjoint() * &z2)[(0, 0)];
    let gram_det = (n1 * n2 - inner.norm_sqr()).max(0.0);
    Ok((gram_det / (n1 * n2)).sqrt())
}
