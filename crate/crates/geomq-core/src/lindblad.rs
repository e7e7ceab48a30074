//! GKLS (Kossakowski-Lindblad) generators and Markovian semigroup
//! integration.
//!
//! Two equivalent presentations of the generator are kept side by side:
//!
//! * the Kossakowski form over a traceless orthonormal operator basis,
//!   `L(ρ) = -i[H,ρ] + ½ Σ c_ij ([F_i, ρF_j†] + [F_iρ, F_j†])`
//!   with `c` Hermitian positive semidefinite;
//! * the diagonal form
//!   `L(ρ) = -i[H,ρ] - ½[G,ρ]₊ + Σ V_α ρ V_α†`, `G = Σ V_α†V_α`,
//!   obtained by eigendecomposing `c = UλU†` and setting
//!   `V_α = √λ_α Σ_i U_iα F_i`.
//!
//! [`decompose_parts`] splits the diagonal form into its Hamiltonian,
//! gradient and Kraus pieces — the three transformation types generating
//! the GL action on density states. The commutators here are the plain
//! matrix ones.

use crate::density::DensityMatrix;
use crate::hermitian::{max_abs, HermitianOperator};
use crate::kraus::KrausFamily;
use crate::{C64, CMat, GeomError, Result};

/// Generator data in Kossakowski form `(H, c, F)`.
#[derive(Debug, Clone)]
pub struct GKLSSpec {
    h: HermitianOperator,
    c: CMat,
    f: Vec<CMat>,
}

impl GKLSSpec {
    /// Validates Hermiticity and positivity of `c` and the traceless
    /// orthonormality `Tr(F_i F_j†) = δ_ij` of the operator basis.
    pub fn new(h: HermitianOperator, c: CMat, f: Vec<CMat>) -> Result<Self> {
        let n = h.dim();
        let d = f.len();
        if c.nrows() != d || c.ncols() != d {
            return Err(GeomError::InvalidSpec(format!(
                "Kossakowski matrix is {}x{}, expected {d}x{d}",
                c.nrows(),
                c.ncols()
            )));
        }
        let c_defect = crate::hermitian::hermiticity_defect(&c);
        if c_defect > 1e-10 {
            return Err(GeomError::InvalidSpec(format!(
                "Kossakowski matrix not Hermitian (defect {c_defect:.3e})"
            )));
        }
        let min_ev = HermitianOperator::symmetrized(c.clone())
            .eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_ev < -1e-10 {
            return Err(GeomError::InvalidSpec(format!(
                "Kossakowski matrix not positive (min eigenvalue {min_ev:.3e})"
            )));
        }
        for (i, fi) in f.iter().enumerate() {
            if fi.nrows() != n || fi.ncols() != n {
                return Err(GeomError::DimensionMismatch {
                    left: fi.nrows(),
                    right: n,
                });
            }
            if fi.trace().norm() > 1e-10 {
                return Err(GeomError::InvalidSpec(format!(
                    "F_{i} is not traceless (|Tr| = {:.3e})",
                    fi.trace().norm()
                )));
            }
            for (j, fj) in f.iter().enumerate() {
                let ip = (fi * fj.adjoint()).trace();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (ip.re - expected).abs() > 1e-10 || ip.im.abs() > 1e-10 {
                    return Err(GeomError::InvalidSpec(format!(
                        "F basis not orthonormal at ({i}, {j}): Tr(F_i F_j†) = {ip}"
                    )));
                }
            }
        }
        Ok(Self { h, c, f })
    }

    /// Purely Hamiltonian generator (`c = 0` over the standard basis).
    pub fn hamiltonian_only(h: HermitianOperator) -> Self {
        let n = h.dim();
        let f: Vec<CMat> = crate::hermitian::gkls_basis(n)
            .into_iter()
            .map(|b| b.into_matrix())
            .collect();
        let d = f.len();
        Self {
            h,
            c: CMat::zeros(d, d),
            f,
        }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn kossakowski(&self) -> &CMat {
        &self.c
    }

    pub fn basis(&self) -> &[CMat] {
        &self.f
    }
}

/// Generator data in diagonal form `(H, {V_α})` with cached `G = ΣV†V`.
#[derive(Debug, Clone)]
pub struct DiagonalGKLS {
    h: HermitianOperator,
    v: Vec<CMat>,
    g: CMat,
}

impl DiagonalGKLS {
    pub fn new(h: HermitianOperator, v: Vec<CMat>) -> Result<Self> {
        let n = h.dim();
        for vk in &v {
            if vk.nrows() != n || vk.ncols() != n {
                return Err(GeomError::DimensionMismatch {
                    left: vk.nrows(),
                    right: n,
                });
            }
        }
        let mut g = CMat::zeros(n, n);
        for vk in &v {
            g += vk.adjoint() * vk;
        }
        Ok(Self { h, v, g })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn jump_operators(&self) -> &[CMat] {
        &self.v
    }

    /// `G = Σ V_α†V_α`.
    pub fn damping_operator(&self) -> &CMat {
        &self.g
    }

    /// The jump operators as a Kraus family (zero operators dropped).
    pub fn kraus_view(&self) -> Result<KrausFamily> {
        let ops: Vec<CMat> = self
            .v
            .iter()
            .filter(|v| max_abs(v) > 1e-14)
            .cloned()
            .collect();
        if ops.is_empty() {
            KrausFamily::new(vec![CMat::zeros(self.dim(), self.dim())])
        } else {
            KrausFamily::new(ops)
        }
    }
}

fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Evaluates the Kossakowski form on an arbitrary matrix argument.
pub fn apply_generator(spec: &GKLSSpec, rho: &CMat) -> Result<CMat> {
    let n = spec.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(GeomError::DimensionMismatch {
            left: rho.nrows(),
            right: n,
        });
    }
    let i = C64::new(0.0, 1.0);
    let mut out = commutator(spec.h.matrix(), rho) * (-i);
    let d = spec.f.len();
    for a in 0..d {
        for b in 0..d {
            let c_ab = spec.c[(a, b)];
            if c_ab.norm() == 0.0 {
                continue;
            }
            let fi = &spec.f[a];
            let fj_dag = spec.f[b].adjoint();
            let term = commutator(fi, &(rho * &fj_dag)) + commutator(&(fi * rho), &fj_dag);
            out += term * (c_ab * C64::new(0.5, 0.0));
        }
    }
    Ok(out)
}

/// Transforms a Kossakowski-form generator into diagonal form through the
/// eigendecomposition of `c`. Zero eigenvalues produce zero jump operators,
/// which are dropped.
pub fn diagonalize(spec: &GKLSSpec) -> Result<DiagonalGKLS> {
    let eig = HermitianOperator::symmetrized(spec.c.clone())
        .matrix()
        .clone()
        .symmetric_eigen();
    let mut v = Vec::new();
    for (alpha, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -1e-10 {
            return Err(GeomError::InvalidSpec(format!(
                "Kossakowski matrix has negative eigenvalue {lambda:.3e}"
            )));
        }
        if lambda <= 1e-14 {
            continue;
        }
        let mut va = CMat::zeros(spec.dim(), spec.dim());
        for (i, fi) in spec.f.iter().enumerate() {
            va += fi * (eig.eigenvectors[(i, alpha)] * C64::new(lambda.sqrt(), 0.0));
        }
        v.push(va);
    }
    DiagonalGKLS::new(spec.h.clone(), v)
}

/// Evaluates the diagonal form `-i[H,ρ] - ½[G,ρ]₊ + ΣV_αρV_α†`.
pub fn apply_diagonal(d: &DiagonalGKLS, rho: &CMat) -> Result<CMat> {
    let n = d.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(GeomError::DimensionMismatch {
            left: rho.nrows(),
            right: n,
        });
    }
    let (ham, grad, kraus) = decompose_parts(d, rho)?;
    Ok(ham + grad + kraus)
}

/// The three pieces of the diagonal form, in order: the Hamiltonian part
/// `-i[H,ρ]`, the gradient part `-½[G,ρ]₊`, and the Kraus part `ΣV ρ V†`.
/// They sum to [`apply_diagonal`].
pub fn decompose_parts(d: &DiagonalGKLS, rho: &CMat) -> Result<(CMat, CMat, CMat)> {
    let n = d.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(GeomError::DimensionMismatch {
            left: rho.nrows(),
            right: n,
        });
    }
    let i = C64::new(0.0, 1.0);
    let ham = commutator(d.h.matrix(), rho) * (-i);
    let grad = anticommutator(&d.g, rho) * C64::new(-0.5, 0.0);
    let mut kraus = CMat::zeros(n, n);
    for v in &d.v {
        kraus += v * rho * v.adjoint();
    }
    Ok((ham, grad, kraus))
}

/// A sampled solution of `ρ̇ = L(ρ)`.
#[derive(Debug, Clone)]
pub struct DensityTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMat>,
}

impl DensityTrajectory {
    pub fn final_state(&self) -> &CMat {
        self.states.last().expect("nonempty trajectory")
    }
}

/// RK4 integration of the semigroup from `rho0`. Every recorded sample is
/// checked for trace drift (tolerance `1e-8`) and positivity defect
/// (`min eigenvalue > -1e-6`); a violation aborts with an error rather than
/// being silently repaired. With `renormalize` the trace is rescaled to one
/// after each step for long runs.
pub fn evolve(
    d: &DiagonalGKLS,
    rho0: &DensityMatrix,
    t_max: f64,
    h: f64,
    renormalize: bool,
) -> Result<DensityTrajectory> {
    if d.dim() != rho0.dim() {
        return Err(GeomError::DimensionMismatch {
            left: d.dim(),
            right: rho0.dim(),
        });
    }
    if h.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || t_max.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || h > t_max
    {
        return Err(GeomError::InvalidSpec(
            "evolution requires 0 < h <= t_max".into(),
        ));
    }
    let steps = (t_max / h).round().max(1.0) as usize;
    let mut rho = rho0.matrix().clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(rho.clone());

    for k in 0..steps {
        let t = (k + 1) as f64 * h;
        let k1 = apply_diagonal(d, &rho)?;
        let k2 = apply_diagonal(d, &(&rho + &k1 * C64::new(h / 2.0, 0.0)))?;
        let k3 = apply_diagonal(d, &(&rho + &k2 * C64::new(h / 2.0, 0.0)))?;
        let k4 = apply_diagonal(d, &(&rho + &k3 * C64::new(h, 0.0)))?;
        rho += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
            * C64::new(h / 6.0, 0.0);

        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeomError::IntegrationFailure {
                t,
                reason: "non-finite density matrix".into(),
            });
        }
        let drift = (rho.trace().re - 1.0).abs();
        if renormalize {
            let tr = rho.trace().re;
            rho /= C64::new(tr, 0.0);
        } else if drift > 1e-8 {
            return Err(GeomError::TraceDrift { t, drift });
        }
        let min_ev = HermitianOperator::symmetrized(rho.clone())
            .eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_ev < -1e-6 {
            return Err(GeomError::IntegrationFailure {
                t,
                reason: format!("positivity lost (min eigenvalue {min_ev:.3e})"),
            });
        }
        times.push(t);
        states.push(rho.clone());
    }
    Ok(DensityTrajectory { times, states })
}

/// Independent evolutions from a batch of initial states. With the
/// `parallel` feature the batch fans out across threads.
pub fn evolve_batch(
    d: &DiagonalGKLS,
    initial: &[DensityMatrix],
    t_max: f64,
    h: f64,
    renormalize: bool,
) -> Vec<Result<DensityTrajectory>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        initial
            .par_iter()
            .map(|rho0| evolve(d, rho0, t_max, h, renormalize))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        initial
            .iter()
            .map(|rho0| evolve(d, rho0, t_max, h, renormalize))
            .collect()
    }
}

/// Choi matrix of the linearized step `ρ ↦ ρ + hL(ρ)`, assembled entrywise
/// on the matrix-unit basis. For a genuine GKLS generator this is positive
/// up to `O(h²)`.
pub fn small_time_choi(d: &DiagonalGKLS, h: f64) -> Result<CMat> {
    let n = d.dim();
    let mut choi = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e_ij = CMat::zeros(n, n);
            e_ij[(i, j)] = C64::new(1.0, 0.0);
            let image = &e_ij + apply_diagonal(d, &e_ij)? * C64::new(h, 0.0);
            // Choi = Σ_ij E_ij ⊗ Φ(E_ij).
            for r in 0..n {
                for c in 0..n {
                    choi[(i * n + r, j * n + c)] += image[(r, c)];
                }
            }
        }
    }
    Ok(choi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{gkls_basis, pauli};
    use crate::sampling::{random_density, random_hermitian, random_kossakowski, seeded_rng};
    use crate::CVec;

    fn diag(entries: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(
            entries.len(),
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    /// The decay operator moving population into the first basis state,
    /// normalized for the GKLS basis convention.
    fn lowering() -> CMat {
        let z = C64::new(0.0, 0.0);
        CMat::from_row_slice(2, 2, &[z, C64::new(1.0, 0.0), z, z])
    }

    fn random_spec<R: rand::Rng>(rng: &mut R, n: usize) -> GKLSSpec {
        let h = random_hermitian(rng, n);
        let c = random_kossakowski(rng, n);
        let f: Vec<CMat> = gkls_basis(n).into_iter().map(|b| b.into_matrix()).collect();
        GKLSSpec::new(h, c, f).unwrap()
    }

    #[test]
    fn zero_generator_annihilates() {
        let spec = GKLSSpec::hamiltonian_only(HermitianOperator::zero(2));
        let rho = diag(&[0.3, 0.7]);
        let out = apply_generator(&spec, &rho).unwrap();
        assert!(max_abs(&out) < 1e-15);
    }

    #[test]
    fn hamiltonian_only_is_commutator() {
        let spec = GKLSSpec::hamiltonian_only(pauli(3));
        let rho = (pauli(0).matrix() + pauli(1).matrix()) * C64::new(0.5, 0.0);
        let out = apply_generator(&spec, &rho).unwrap();
        let oracle =
            (pauli(3).matrix() * &rho - &rho * pauli(3).matrix()) * C64::new(0.0, -1.0);
        assert!(max_abs(&(out - oracle)) < 1e-14);
    }

    #[test]
    fn single_decay_channel_matches_diagonal_oracle() {
        // c = diag(gamma, 0, 0) with F_1 = lowering/1 (already unit norm
        // under Tr(F F†) = 1): the generator equals the diagonal form with
        // V = sqrt(gamma) * lowering.
        let gamma = 0.8;
        let f1 = lowering();
        // Complete to an orthonormal traceless triple with the other
        // normalized basis elements orthogonal to f1.
        let raising = f1.adjoint();
        let f3 = pauli(3).matrix() / C64::new(2.0_f64.sqrt(), 0.0);
        let f = vec![f1.clone(), raising, f3];
        let mut c = CMat::zeros(3, 3);
        c[(0, 0)] = C64::new(gamma, 0.0);
        let spec = GKLSSpec::new(HermitianOperator::zero(2), c, f).unwrap();

        let d = DiagonalGKLS::new(
            HermitianOperator::zero(2),
            vec![f1 * C64::new(gamma.sqrt(), 0.0)],
        )
        .unwrap();

        let rho = diag(&[0.0, 1.0]);
        let via_spec = apply_generator(&spec, &rho).unwrap();
        let via_diag = apply_diagonal(&d, &rho).unwrap();
        assert!(max_abs(&(via_spec.clone() - via_diag)) < 1e-13);
        // gamma * diag(1, -1) by direct 2x2 arithmetic.
        assert!(max_abs(&(via_spec - diag(&[gamma, -gamma]))) < 1e-13);
    }

    #[test]
    fn diagonalize_reproduces_the_generator() {
        let mut rng = seeded_rng(111);
        for n in [2, 3] {
            for _ in 0..10 {
                let spec = random_spec(&mut rng, n);
                let d = diagonalize(&spec).unwrap();
                // G is cached consistently.
                let mut g = CMat::zeros(n, n);
                for v in d.jump_operators() {
                    g += v.adjoint() * v;
                }
                assert!(max_abs(&(g - d.damping_operator().clone())) < 1e-12);

                for _ in 0..5 {
                    let rho = random_density(&mut rng, n, n);
                    let a = apply_generator(&spec, &rho).unwrap();
                    let b = apply_diagonal(&d, &rho).unwrap();
                    assert!(max_abs(&(a - b)) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn diagonalize_special_cases() {
        let n = 2;
        let f: Vec<CMat> = gkls_basis(n).into_iter().map(|b| b.into_matrix()).collect();

        // c already the identity: V_alpha recover the basis (up to the
        // eigenvector ordering of the identity, compare at apply level).
        let spec = GKLSSpec::new(
            HermitianOperator::zero(n),
            CMat::identity(3, 3),
            f.clone(),
        )
        .unwrap();
        let d = diagonalize(&spec).unwrap();
        assert_eq!(d.jump_operators().len(), 3);
        let mut rng = seeded_rng(112);
        let rho = random_density(&mut rng, n, n);
        let a = apply_generator(&spec, &rho).unwrap();
        let b = apply_diagonal(&d, &rho).unwrap();
        assert!(max_abs(&(a - b)) < 1e-12);

        // Rank-one c keeps a single jump operator sqrt(gamma) F_1.
        let gamma = 0.37;
        let mut c = CMat::zeros(3, 3);
        c[(0, 0)] = C64::new(gamma, 0.0);
        let spec = GKLSSpec::new(HermitianOperator::zero(n), c, f).unwrap();
        let d = diagonalize(&spec).unwrap();
        assert_eq!(d.jump_operators().len(), 1);
        let expected = spec.basis()[0].clone() * C64::new(gamma.sqrt(), 0.0);
        // Eigenvector phase freedom allows a global phase on V.
        let v = &d.jump_operators()[0];
        let overlap = (v.adjoint() * &expected).trace().norm();
        assert!((overlap - gamma).abs() < 1e-12);
    }

    #[test]
    fn invalid_specs_rejected() {
        let n = 2;
        let f: Vec<CMat> = gkls_basis(n).into_iter().map(|b| b.into_matrix()).collect();

        // Negative Kossakowski eigenvalue.
        let mut c = CMat::zeros(3, 3);
        c[(0, 0)] = C64::new(-0.2, 0.0);
        assert!(GKLSSpec::new(HermitianOperator::zero(n), c, f.clone()).is_err());

        // Non-traceless basis.
        let bad = vec![CMat::identity(2, 2), f[1].clone(), f[2].clone()];
        assert!(GKLSSpec::new(HermitianOperator::zero(n), CMat::zeros(3, 3), bad).is_err());

        // Wrong c dimensions.
        assert!(GKLSSpec::new(HermitianOperator::zero(n), CMat::zeros(2, 2), f).is_err());
    }

    #[test]
    fn generator_is_traceless_and_hermiticity_preserving() {
        let mut rng = seeded_rng(113);
        for _ in 0..20 {
            let spec = random_spec(&mut rng, 2);
            let rho = random_density(&mut rng, 2, 2);
            let out = apply_generator(&spec, &rho).unwrap();
            assert!(out.trace().norm() < 1e-12, "trace {}", out.trace());
            assert!(crate::hermitian::hermiticity_defect(&out) < 1e-12);
        }
    }

    #[test]
    fn decompose_parts_sums_and_special_cases() {
        let mut rng = seeded_rng(114);
        let spec = random_spec(&mut rng, 2);
        let d = diagonalize(&spec).unwrap();
        let rho = random_density(&mut rng, 2, 2);
        let (ham, grad, kraus) = decompose_parts(&d, &rho).unwrap();
        let total = apply_diagonal(&d, &rho).unwrap();
        assert!(max_abs(&(&ham + &grad + &kraus - total)) < 1e-12);

        // Kraus part agrees with the channel view of the jump operators.
        let channel = d.kraus_view().unwrap();
        let via_kraus = crate::kraus::apply_matrix(&channel, &rho).unwrap();
        assert!(max_abs(&(via_kraus - kraus)) < 1e-12);

        // Pure unitary spec: parts 2 and 3 vanish.
        let unitary = DiagonalGKLS::new(random_hermitian(&mut rng, 2), vec![]).unwrap();
        let (h1, g1, k1) = decompose_parts(&unitary, &rho).unwrap();
        assert!(max_abs(&g1) < 1e-15 && max_abs(&k1) < 1e-15);
        assert!(max_abs(&h1) > 0.0);

        // Pure decay on the maximally mixed state: no Hamiltonian part,
        // gradient part -½gamma {V†V, rho}, Kraus part the channel image.
        let gamma = 0.5_f64;
        let decay = DiagonalGKLS::new(
            HermitianOperator::zero(2),
            vec![lowering() * C64::new(gamma.sqrt(), 0.0)],
        )
        .unwrap();
        let half = diag(&[0.5, 0.5]);
        let (h2, g2, k2) = decompose_parts(&decay, &half).unwrap();
        assert!(max_abs(&h2) < 1e-15);
        assert!(max_abs(&(g2 - diag(&[0.0, -0.5 * gamma]))) < 1e-14);
        assert!(max_abs(&(k2 - diag(&[0.5 * gamma, 0.0]))) < 1e-14);
    }

    #[test]
    fn hamiltonian_part_matches_heisenberg_field() {
        // Consistency with the coadjoint module: the H-only generator is
        // the negative of the Heisenberg field (opposite flow orientation
        // between e^{+iHt} conjugation and the von Neumann sign here).
        let mut rng = seeded_rng(115);
        let h = random_hermitian(&mut rng, 2);
        let d = DiagonalGKLS::new(h.clone(), vec![]).unwrap();
        let rho_m = random_density(&mut rng, 2, 2);
        let out = apply_diagonal(&d, &rho_m).unwrap();
        let heis = crate::coadjoint::HeisenbergField::new(h)
            .value_at(&crate::coadjoint::DualElement::new(
                HermitianOperator::symmetrized(rho_m.clone()),
            ))
            .unwrap();
        assert!(max_abs(&(out + heis.matrix())) < 1e-12);
    }

    #[test]
    fn zero_generator_constant_trajectory() {
        let d = DiagonalGKLS::new(HermitianOperator::zero(2), vec![]).unwrap();
        let rho0 = DensityMatrix::from_matrix(diag(&[0.25, 0.75])).unwrap();
        let traj = evolve(&d, &rho0, 1.0, 1e-2, false).unwrap();
        assert!(max_abs(&(traj.final_state() - rho0.matrix())) < 1e-14);
    }

    #[test]
    fn pure_decay_matches_closed_form() {
        // With V = sqrt(gamma) * lowering, the excited population decays as
        // e^{-gamma t} and the ground population fills in.
        let gamma = 0.9_f64;
        let d = DiagonalGKLS::new(
            HermitianOperator::zero(2),
            vec![lowering() * C64::new(gamma.sqrt(), 0.0)],
        )
        .unwrap();
        let rho0 = DensityMatrix::from_matrix(diag(&[0.0, 1.0])).unwrap();
        let t_max = 2.0;
        let traj = evolve(&d, &rho0, t_max, 1e-3, false).unwrap();
        for (t, rho) in traj.times.iter().zip(traj.states.iter()).step_by(200) {
            let p_excited = rho[(1, 1)].re;
            let expected = (-gamma * t).exp();
            assert!(
                (p_excited - expected).abs() < 1e-6,
                "t={t} population {p_excited} vs {expected}"
            );
        }
        // Fixed point: the ground projector is stationary.
        let ground = diag(&[1.0, 0.0]);
        assert!(max_abs(&apply_diagonal(&d, &ground).unwrap()) < 1e-15);
    }

    #[test]
    fn unitary_evolution_keeps_spectrum() {
        let mut rng = seeded_rng(116);
        let d = DiagonalGKLS::new(random_hermitian(&mut rng, 2), vec![]).unwrap();
        let rho0 = DensityMatrix::from_matrix(random_density(&mut rng, 2, 2)).unwrap();
        let traj = evolve(&d, &rho0, 1.0, 1e-3, false).unwrap();
        let before = rho0.operator().eigenvalues();
        let after = HermitianOperator::symmetrized(traj.final_state().clone()).eigenvalues();
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn dissipative_evolution_changes_spectrum_keeps_trace() {
        let mut rng = seeded_rng(117);
        let spec = random_spec(&mut rng, 2);
        let d = diagonalize(&spec).unwrap();
        let rho0 = DensityMatrix::from_matrix(random_density(&mut rng, 2, 2)).unwrap();
        let traj = evolve(&d, &rho0, 1.0, 1e-3, false).unwrap();
        let final_rho = traj.final_state();
        assert!((final_rho.trace().re - 1.0).abs() < 1e-8);
        let before = rho0.operator().eigenvalues();
        let after = HermitianOperator::symmetrized(final_rho.clone()).eigenvalues();
        let moved = before
            .iter()
            .zip(after.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(moved > 1e-4, "spectrum did not move ({moved:.3e})");
    }

    #[test]
    fn small_time_choi_nearly_positive() {
        let mut rng = seeded_rng(118);
        let h = 1e-3;
        for _ in 0..10 {
            let spec = random_spec(&mut rng, 2);
            let d = diagonalize(&spec).unwrap();
            let choi = small_time_choi(&d, h).unwrap();
            let min_ev = HermitianOperator::symmetrized(choi)
                .eigenvalues()
                .first()
                .copied()
                .unwrap();
            assert!(min_ev > -10.0 * h * h, "Choi min eigenvalue {min_ev:.3e}");
        }
    }

    #[test]
    fn unstable_step_aborts_on_positivity_loss() {
        // A decay rate far outside the RK4 stability region makes the
        // excited population grow past one, driving the complementary
        // population negative; the integrator must abort, not continue.
        let gamma = 0.8_f64;
        let d = DiagonalGKLS::new(
            HermitianOperator::zero(2),
            vec![lowering() * C64::new(gamma.sqrt(), 0.0)],
        )
        .unwrap();
        let rho0 = DensityMatrix::from_matrix(diag(&[0.0, 1.0])).unwrap();
        let res = evolve(&d, &rho0, 40.0, 5.0, false);
        assert!(matches!(res, Err(GeomError::IntegrationFailure { .. })));
    }

    #[test]
    fn batch_evolution_matches_individual_runs() {
        let mut rng = seeded_rng(119);
        let spec = random_spec(&mut rng, 2);
        let d = diagonalize(&spec).unwrap();
        let states: Vec<DensityMatrix> = (0..4)
            .map(|_| DensityMatrix::from_matrix(random_density(&mut rng, 2, 2)).unwrap())
            .collect();
        let batch = evolve_batch(&d, &states, 0.5, 1e-3, false);
        for (rho0, result) in states.iter().zip(batch) {
            let single = evolve(&d, rho0, 0.5, 1e-3, false).unwrap();
            let from_batch = result.unwrap();
            assert!(max_abs(&(single.final_state() - from_batch.final_state())) < 1e-15);
        }
    }
}
