//! The positive cone, density states, rank strata and the GL action.
//!
//! Positive operators are factorized as `ω = RR†`; the left GL action
//! `ω ↦ gωg†` preserves the rank (the complex Sylvester law), so the cone
//! and the density states are stratified by rank. On trace-one states the
//! action is corrected by the trace, `ρ ↦ gρg† / Tr(gρg†)`, which is still
//! a group action and preserves every stratum. Rank-deficient density
//! matrices are admitted: the strata `𝒟ᵏ` with `k < n` are exactly the
//! boundary pieces, and `𝒟ⁿ` is the open stratum.

use crate::hermitian::HermitianOperator;
use crate::kahler::KahlerTensors;
use crate::{C64, CMat, GeomError, RMat, Result, RANK_EIGENVALUE_TOL};

/// A positive semidefinite Hermitian operator with cached rank. Eigenvalues
/// may dip to `-1e-10` to absorb roundoff; the rank counts eigenvalues above
/// [`RANK_EIGENVALUE_TOL`] relative to the trace.
#[derive(Debug, Clone)]
pub struct PositiveOperator {
    op: HermitianOperator,
    rank: usize,
}

impl PositiveOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let evs = op.eigenvalues();
        let min = evs.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(GeomError::NotPositive {
                min_eigenvalue: min,
            });
        }
        let scale = op.trace().abs().max(1.0);
        let rank = evs
            .iter()
            .filter(|&&l| l > RANK_EIGENVALUE_TOL * scale)
            .count();
        Ok(Self { op, rank })
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMat {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trace(&self) -> f64 {
        self.op.trace()
    }
}

/// A density matrix: positive semidefinite with unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    p: PositiveOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let p = PositiveOperator::new(op)?;
        let trace = p.trace();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(GeomError::NotUnitTrace { trace, tol: 1e-10 });
        }
        Ok(Self { p })
    }

    pub fn from_matrix(m: CMat) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    /// Maximally mixed state `𝕀/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let m = CMat::identity(n, n) / C64::new(n as f64, 0.0);
        Self::new(HermitianOperator::symmetrized(m)).expect("valid state")
    }

    pub fn positive(&self) -> &PositiveOperator {
        &self.p
    }

    pub fn operator(&self) -> &HermitianOperator {
        self.p.operator()
    }

    pub fn matrix(&self) -> &CMat {
        self.p.matrix()
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn rank(&self) -> usize {
        self.p.rank()
    }
}

/// Factorization `R ↦ RR†` onto the positive cone; the rank equals the rank
/// of `R`.
pub fn factorize_positive(r: &CMat) -> Result<PositiveOperator> {
    let m = r * r.adjoint();
    PositiveOperator::new(HermitianOperator::symmetrized(m))
}

/// Left GL action on the cone, `(g, ω) ↦ gωg†`. Rank preserved; trace not.
pub fn gl_action_cone(g: &CMat, omega: &PositiveOperator) -> Result<PositiveOperator> {
    check_invertible(g, omega.dim())?;
    let m = g * omega.matrix() * g.adjoint();
    PositiveOperator::new(HermitianOperator::symmetrized(m))
}

/// Trace-normalized GL action on density states,
/// `(g, ρ) ↦ gρg† / Tr(gρg†)`. A genuine group action preserving each rank
/// stratum.
pub fn gl_action_states(g: &CMat, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_invertible(g, rho.dim())?;
    let m = g * rho.matrix() * g.adjoint();
    let tr = m.trace().re;
    if tr <= 0.0 {
        return Err(GeomError::NotPositive { min_eigenvalue: tr });
    }
    DensityMatrix::new(HermitianOperator::symmetrized(m / C64::new(tr, 0.0)))
}

fn check_invertible(g: &CMat, dim: usize) -> Result<()> {
    if g.nrows() != g.ncols() {
        return Err(GeomError::NotSquare {
            rows: g.nrows(),
            cols: g.ncols(),
        });
    }
    if g.nrows() != dim {
        return Err(GeomError::DimensionMismatch {
            left: g.nrows(),
            right: dim,
        });
    }
    if g.determinant().norm() < 1e-12 {
        return Err(GeomError::Singular);
    }
    Ok(())
}

/// Stratum index of a positive operator: its rank.
pub fn stratum(omega: &PositiveOperator) -> usize {
    omega.rank()
}

/// Partition of a family by stratum index.
pub fn stratify(operators: &[PositiveOperator]) -> std::collections::BTreeMap<usize, Vec<usize>> {
    let mut map: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, op) in operators.iter().enumerate() {
        map.entry(op.rank()).or_default().push(i);
    }
    map
}

/// True iff the real linear map `φ` on ℝ²ⁿ belongs to GL(ℋ): invertible and
/// commuting with the complex structure `J` (complex-linearity). Linearity
/// already preserves the Liouville field `Δ`.
pub fn is_gl_member(phi: &RMat) -> bool {
    if phi.nrows() != phi.ncols() || !phi.nrows().is_multiple_of(2) {
        return false;
    }
    let n = phi.nrows() / 2;
    let j = KahlerTensors::new(n).j();
    let commutes = (phi * &j - j * phi).norm() < 1e-10 * (1.0 + phi.norm());
    let invertible = phi.determinant().abs() > 1e-12;
    commutes && invertible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::max_abs;
    use crate::kahler::{complexify_coords, realify, realify_op, RealifiedVector};
    use crate::sampling::{
        random_complex_matrix, random_density, random_invertible, random_unit_realified,
        random_unitary, seeded_rng,
    };
    use crate::CVec;

    fn diag(entries: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(
            entries.len(),
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    #[test]
    fn factorize_positive_examples() {
        let id = factorize_positive(&CMat::identity(2, 2)).unwrap();
        assert_eq!(id.rank(), 2);
        assert!(max_abs(&(id.matrix() - &CMat::identity(2, 2))) < 1e-15);

        let r = diag(&[1.0, 0.0]);
        let p = factorize_positive(&r).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(max_abs(&(p.matrix() - &diag(&[1.0, 0.0]))) < 1e-15);

        let mut rng = seeded_rng(91);
        for _ in 0..20 {
            let r = random_complex_matrix(&mut rng, 3, 3);
            let p = factorize_positive(&r).unwrap();
            assert!(p.operator().eigenvalues()[0] > -1e-10);
        }
    }

    #[test]
    fn cone_action_examples() {
        let omega = factorize_positive(&diag(&[1.0, 0.0])).unwrap();
        let idact = gl_action_cone(&CMat::identity(2, 2), &omega).unwrap();
        assert!(max_abs(&(idact.matrix() - omega.matrix())) < 1e-15);

        let g = diag(&[2.0, 1.0]);
        let moved = gl_action_cone(&g, &omega).unwrap();
        assert!(max_abs(&(moved.matrix() - &diag(&[4.0, 0.0]))) < 1e-15);
        assert_eq!(moved.rank(), 1);
        // The trace is generally not preserved on the cone.
        assert!((moved.trace() - omega.trace()).abs() > 0.5);
    }

    #[test]
    fn states_action_examples() {
        let mut rng = seeded_rng(92);

        // Unitary action is ordinary conjugation and preserves the spectrum.
        let rho = DensityMatrix::from_matrix(random_density(&mut rng, 3, 3)).unwrap();
        let u = random_unitary(&mut rng, 3);
        let moved = gl_action_states(&u, &rho).unwrap();
        let before = rho.operator().eigenvalues();
        let after = moved.operator().eigenvalues();
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-10);
        }

        // g = diag(2,1) on the maximally mixed qubit: diag(4/5, 1/5).
        let half = DensityMatrix::maximally_mixed(2);
        let g = diag(&[2.0, 1.0]);
        let moved = gl_action_states(&g, &half).unwrap();
        assert!(max_abs(&(moved.matrix() - &diag(&[0.8, 0.2]))) < 1e-14);

        // Non-unitary g changes the spectrum but keeps purity.
        let pure = DensityMatrix::from_matrix(random_density(&mut rng, 2, 1)).unwrap();
        let g = random_invertible(&mut rng, 2);
        let moved = gl_action_states(&g, &pure).unwrap();
        assert_eq!(moved.rank(), 1);
    }

    #[test]
    fn rank_preserved_across_cone_action() {
        let mut rng = seeded_rng(93);
        for _ in 0..50 {
            for n in [2, 3, 4] {
                for rank in 1..=n {
                    let r = random_complex_matrix(&mut rng, n, rank);
                    let omega = factorize_positive(&r).unwrap();
                    assert_eq!(omega.rank(), rank);
                    let g = random_invertible(&mut rng, n);
                    let moved = gl_action_cone(&g, &omega).unwrap();
                    assert_eq!(moved.rank(), rank, "rank broken at n={n} rank={rank}");
                }
            }
        }
    }

    #[test]
    fn states_action_is_group_action() {
        let mut rng = seeded_rng(94);
        for _ in 0..25 {
            let n = 3;
            let rho = DensityMatrix::from_matrix(random_density(&mut rng, n, 2)).unwrap();
            let g1 = random_invertible(&mut rng, n);
            let g2 = random_invertible(&mut rng, n);
            let nested = gl_action_states(&g1, &gl_action_states(&g2, &rho).unwrap()).unwrap();
            let joint = gl_action_states(&(&g1 * &g2), &rho).unwrap();
            assert!(max_abs(&(nested.matrix() - joint.matrix())) < 1e-10);
        }
    }

    #[test]
    fn pure_states_transform_as_projectivized_vectors() {
        // gl_action_states(g, 2 mu_P(psi)) = 2 mu_P(g psi): the GL action on
        // the rank-one stratum is the projectivized linear action.
        let mut rng = seeded_rng(95);
        for _ in 0..20 {
            let n = 2;
            let psi = RealifiedVector::new(random_unit_realified(&mut rng, n)).unwrap();
            let g = random_invertible(&mut rng, n);

            let mu_p = crate::coadjoint::momentum_map_projective(&psi).unwrap();
            let rho = DensityMatrix::from_matrix(mu_p.matrix() * C64::new(2.0, 0.0)).unwrap();
            let lhs = gl_action_states(&g, &rho).unwrap();

            let gz = realify(&(g.clone() * complexify_coords(psi.coords())));
            let rhs = crate::coadjoint::momentum_map_projective(&gz).unwrap();
            assert!(max_abs(&(lhs.matrix() - rhs.matrix() * C64::new(2.0, 0.0))) < 1e-10);
        }
    }

    #[test]
    fn stratum_examples_and_partition() {
        let pure =
            PositiveOperator::new(HermitianOperator::new(diag(&[1.0, 0.0])).unwrap()).unwrap();
        assert_eq!(stratum(&pure), 1);

        let mixed =
            PositiveOperator::new(HermitianOperator::new(diag(&[0.5, 0.5])).unwrap()).unwrap();
        assert_eq!(stratum(&mixed), 2);

        let boundary =
            PositiveOperator::new(HermitianOperator::new(diag(&[0.5, 0.5, 0.0])).unwrap())
                .unwrap();
        assert_eq!(stratum(&boundary), 2);

        let parts = stratify(&[pure, mixed, boundary]);
        assert_eq!(parts[&1], vec![0]);
        assert_eq!(parts[&2], vec![1, 2]);
    }

    #[test]
    fn gl_membership_on_realified_maps() {
        let n = 2;
        let j = KahlerTensors::new(n).j();
        // J itself is multiplication by i: complex-linear and invertible.
        assert!(is_gl_member(&j));

        // Complex conjugation (q, p) -> (q, -p) anticommutes with J.
        let mut conj = RMat::identity(2 * n, 2 * n);
        for k in 0..n {
            conj[(2 * k + 1, 2 * k + 1)] = -1.0;
        }
        assert!(!is_gl_member(&conj));

        // Any realified invertible complex matrix belongs by construction.
        let mut rng = seeded_rng(96);
        for _ in 0..10 {
            let g = random_invertible(&mut rng, n);
            assert!(is_gl_member(&realify_op(&g)));
        }

        // Singular maps are excluded.
        let zero = RMat::zeros(2 * n, 2 * n);
        assert!(!is_gl_member(&zero));
    }

    #[test]
    fn rank_threshold_boundary() {
        // The stratum threshold is 1e-8 relative to the trace: eigenvalues
        // just above it count toward the rank, just below they do not.
        let above = PositiveOperator::new(
            HermitianOperator::new(diag(&[1.0, 3e-8])).unwrap(),
        )
        .unwrap();
        assert_eq!(above.rank(), 2);

        let below = PositiveOperator::new(
            HermitianOperator::new(diag(&[1.0, 3e-9])).unwrap(),
        )
        .unwrap();
        assert_eq!(below.rank(), 1);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_matrix(diag(&[0.5, 0.7])).is_err()); // trace 1.2
        assert!(DensityMatrix::from_matrix(diag(&[1.5, -0.5])).is_err()); // negative
        let boundary = DensityMatrix::from_matrix(diag(&[1.0, 0.0])).unwrap();
        assert_eq!(boundary.rank(), 1);
    }
}
