//! GNS construction for the matrix algebra Mₙ(ℂ).
//!
//! A state `ω(a) = Tr(ρ_ω a)` induces the positive pairing
//! `⟨a, b⟩_ω = ω(a†b)`, degenerate exactly on the Gelfand ideal
//! `{a : ω(a†a) = 0}` — the matrices annihilating the support of `ρ_ω`.
//! Quotienting and completing (a no-op in finite dimensions) yields a
//! Hilbert space of dimension `n · rank(ρ_ω)` on which the algebra acts by
//! left multiplication, `π(b)Ψ_a = Ψ_{ba}`; the class of the identity is a
//! cyclic vector recovering the state as `ω(a) = ⟨Ω|π(a)Ω⟩`.
//!
//! Representatives are matrix units `|u_i⟩⟨v_k|` over the eigenvectors
//! `v_k` in the support of `ρ_ω`, orthonormalized against the pairing
//! (division by `√λ_k`), which makes the Gram matrix the identity and the
//! block structure explicit: one `n`-dimensional invariant block per
//! support eigenvector, with weights `p_k = λ_k`. Mixed states therefore
//! decompose into irreducible blocks realizing `ω` as a convex combination
//! of pure states.
//!
//! Left multiplication is the homomorphism convention; the right action
//! `Ψ_a ↦ Ψ_{ab}` (an anti-homomorphism) is kept behind [`ActionSide`] for
//! comparison.

use crate::density::DensityMatrix;
use crate::{C64, CMat, CVec, GeomError, Result, RANK_EIGENVALUE_TOL};

/// A normalized positive linear functional on Mₙ(ℂ), represented by its
/// density matrix: `ω(a) = Tr(ρ_ω a)`.
#[derive(Debug, Clone)]
pub struct AlgebraState {
    rho: DensityMatrix,
}

impl AlgebraState {
    pub fn new(rho: DensityMatrix) -> Self {
        Self { rho }
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    /// `ω(a) = Tr(ρ_ω a)`.
    pub fn value(&self, a: &CMat) -> C64 {
        (self.rho.matrix() * a).trace()
    }

    /// Eigenpairs of `ρ_ω` above the rank threshold, descending.
    fn support(&self) -> Vec<(f64, CVec)> {
        let thr = RANK_EIGENVALUE_TOL * self.rho.operator().trace().abs().max(1.0);
        self.rho
            .operator()
            .eigenpairs()
            .into_iter()
            .filter(|(l, _)| *l > thr)
            .collect()
    }

    /// Null eigenvectors of `ρ_ω` (complement of the support).
    fn kernel(&self) -> Vec<CVec> {
        let thr = RANK_EIGENVALUE_TOL * self.rho.operator().trace().abs().max(1.0);
        self.rho
            .operator()
            .eigenpairs()
            .into_iter()
            .filter(|(l, _)| *l <= thr)
            .map(|(_, v)| v)
            .collect()
    }
}

/// Basis of the Gelfand ideal `{a : ω(a†a) = 0}`: the matrix units
/// `|u_i⟩⟨v_k|` over null eigenvectors `v_k` of `ρ_ω`. Complex dimension
/// `n·(n - rank ρ_ω)`.
pub fn gelfand_ideal(omega: &AlgebraState) -> Vec<CMat> {
    let n = omega.dim();
    let mut basis = Vec::new();
    for v in omega.kernel() {
        for i in 0..n {
            let mut unit = CVec::zeros(n);
            unit[i] = C64::new(1.0, 0.0);
            basis.push(&unit * v.adjoint());
        }
    }
    basis
}

/// Which side the algebra acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSide {
    /// `π(b)Ψ_a = Ψ_{ba}` — a homomorphism (the standard choice).
    Left,
    /// `π(b)Ψ_a = Ψ_{ab}` — an anti-homomorphism, kept for comparison.
    Right,
}

/// The GNS data built from a state: orthonormal quotient representatives,
/// the representation map, the cyclic vector, and the block structure.
#[derive(Debug, Clone)]
pub struct GnsRepresentation {
    n: usize,
    dim_h: usize,
    action: ActionSide,
    /// Quotient representatives `ê_(k,i) = |u_i⟩⟨v_k| / √λ_k`, grouped by
    /// support index `k` (block-contiguous).
    basis: Vec<CMat>,
    /// Support weights `λ_k` (block weights `p_k`).
    weights: Vec<f64>,
    /// Gram matrix of the representatives under `⟨a,b⟩_ω = ω(a†b)`.
    gram: CMat,
    /// Coordinates of the cyclic vector `Ω = Ψ_𝕀`.
    cyclic: CVec,
    state: AlgebraState,
}

/// Builds the GNS representation of `ω` with the given action side.
pub fn build_gns(omega: &AlgebraState, action: ActionSide) -> GnsRepresentation {
    let n = omega.dim();
    let support = omega.support();
    let rank = support.len();
    let dim_h = n * rank;

    let mut basis = Vec::with_capacity(dim_h);
    let mut weights = Vec::with_capacity(rank);
    for (lambda, v) in &support {
        weights.push(*lambda);
        for i in 0..n {
            let mut unit = CVec::zeros(n);
            unit[i] = C64::new(1.0, 0.0);
            basis.push((&unit * v.adjoint()) / C64::new(lambda.sqrt(), 0.0));
        }
    }

    let gram = CMat::from_fn(dim_h, dim_h, |r, c| {
        omega.value(&(basis[r].adjoint() * &basis[c]))
    });

    let cyclic = CVec::from_fn(dim_h, |m, _| omega.value(&basis[m].adjoint()));

    GnsRepresentation {
        n,
        dim_h,
        action,
        basis,
        weights,
        gram,
        cyclic,
        state: omega.clone(),
    }
}

impl GnsRepresentation {
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn action(&self) -> ActionSide {
        self.action
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cyclic_vector(&self) -> &CVec {
        &self.cyclic
    }

    /// Matrix of `π(b)` in the orthonormal representative basis.
    pub fn represent(&self, b: &CMat) -> Result<CMat> {
        if b.nrows() != self.n || b.ncols() != self.n {
            return Err(GeomError::DimensionMismatch {
                left: b.nrows(),
                right: self.n,
            });
        }
        let m = CMat::from_fn(self.dim_h, self.dim_h, |r, c| {
            let moved = match self.action {
                ActionSide::Left => b * &self.basis[c],
                ActionSide::Right => &self.basis[c] * b,
            };
            self.state.value(&(self.basis[r].adjoint() * moved))
        });
        Ok(m)
    }

    /// `⟨Ω|π(a)Ω⟩`, which recovers `ω(a)`.
    pub fn recover_state(&self, a: &CMat) -> Result<C64> {
        let pi_a = self.represent(a)?;
        Ok((self.cyclic.adjoint() * pi_a * &self.cyclic)[(0, 0)])
    }

    /// Dimension of the commutant `{X : [π(b), X] = 0 ∀b}`, computed as the
    /// null-space dimension of the stacked commutator equations over the
    /// matrix-unit generators. Equals 1 exactly when the representation is
    /// irreducible.
    pub fn commutant_dim(&self) -> Result<usize> {
        let d = self.dim_h;
        let id = CMat::identity(d, d);
        let mut rows: Vec<CMat> = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut e_ij = CMat::zeros(self.n, self.n);
                e_ij[(i, j)] = C64::new(1.0, 0.0);
                let m = self.represent(&e_ij)?;
                // vec(MX - XM) = (I ⊗ M - Mᵀ ⊗ I) vec(X).
                rows.push(id.kronecker(&m) - m.transpose().kronecker(&id));
            }
        }
        let mut stacked = CMat::zeros(self.n * self.n * d * d, d * d);
        for (g, block) in rows.iter().enumerate() {
            stacked.rows_mut(g * d * d, d * d).copy_from(block);
        }
        let svals = stacked.svd(false, false).singular_values;
        let max_sv = svals.iter().copied().fold(0.0, f64::max).max(1.0);
        Ok(svals.iter().filter(|&&s| s < 1e-9 * max_sv).count() + d * d - svals.len())
    }
}

/// True iff the orbit `{π(E_ij) ξ}` spans the representation space.
pub fn is_cyclic(rep: &GnsRepresentation, xi: &CVec) -> Result<bool> {
    if xi.len() != rep.dim_h() {
        return Err(GeomError::DimensionMismatch {
            left: xi.len(),
            right: rep.dim_h(),
        });
    }
    let n = rep.algebra_dim();
    let d = rep.dim_h();
    let mut orbit = CMat::zeros(d, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e_ij = CMat::zeros(n, n);
            e_ij[(i, j)] = C64::new(1.0, 0.0);
            let v = rep.represent(&e_ij)? * xi;
            orbit.column_mut(i * n + j).copy_from(&v);
        }
    }
    let svals = orbit.svd(false, false).singular_values;
    let max_sv = svals.iter().copied().fold(0.0, f64::max);
    if max_sv == 0.0 {
        return Ok(false);
    }
    let rank = svals.iter().filter(|&&s| s > 1e-9 * max_sv).count();
    Ok(rank == d)
}

/// One irreducible summand of a (generally reducible) GNS representation.
#[derive(Debug, Clone)]
pub struct GnsBlock {
    /// Weight `p_α = ⟨Ω_α|Ω_α⟩`.
    pub weight: f64,
    /// Dimension of the block (always the algebra dimension `n`).
    pub dim: usize,
    /// Coordinate range of the block inside the representation space.
    pub range: std::ops::Range<usize>,
    /// The component `Ω_α` of the cyclic vector in this block (embedded in
    /// the full space).
    pub omega_component: CVec,
}

impl GnsBlock {
    /// The pure state `ξ_α(a) = p_α⁻¹ ⟨Ω_α|π(a)Ω_α⟩`.
    pub fn pure_state(&self, rep: &GnsRepresentation, a: &CMat) -> Result<C64> {
        let pi_a = rep.represent(a)?;
        let val = (self.omega_component.adjoint() * pi_a * &self.omega_component)[(0, 0)];
        Ok(val / C64::new(self.weight, 0.0))
    }
}

/// Splits the representation into its invariant blocks (one per support
/// eigenvector of `ρ_ω`). The cyclic vector decomposes as `Ω = Σ_α Ω_α`
/// with `Σ p_α = 1`, and `ω = Σ p_α ξ_α` over the blocks' pure states.
pub fn decompose(rep: &GnsRepresentation) -> Vec<GnsBlock> {
    let n = rep.algebra_dim();
    rep.weights()
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let range = k * n..(k + 1) * n;
            let mut omega_component = CVec::zeros(rep.dim_h());
            for m in range.clone() {
                omega_component[m] = rep.cyclic_vector()[m];
            }
            GnsBlock {
                weight: p,
                dim: n,
                range,
                omega_component,
            }
        })
        .collect()
}

/// Convenience: a state from a density matrix given entrywise.
pub fn state_from_density(rho: DensityMatrix) -> AlgebraState {
    AlgebraState::new(rho)
}

/// Summary used by reporting front ends.
#[derive(Debug, Clone)]
pub struct GnsReport {
    pub dim_h: usize,
    pub ideal_dim: usize,
    pub blocks: Vec<(f64, usize)>,
    pub recovery_residual: f64,
}

/// Builds the representation and summarizes it: dimensions, ideal size,
/// block weights, and the worst recovery residual `|ω(a) - ⟨Ω|π(a)Ω⟩|`
/// over a deterministic probe set of matrix units.
pub fn gns_report(omega: &AlgebraState) -> Result<GnsReport> {
    let rep = build_gns(omega, ActionSide::Left);
    let ideal_dim = gelfand_ideal(omega).len();
    let blocks = decompose(&rep)
        .into_iter()
        .map(|b| (b.weight, b.dim))
        .collect();
    let n = omega.dim();
    let mut recovery_residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let mut e_ij = CMat::zeros(n, n);
            e_ij[(i, j)] = C64::new(1.0, 0.0);
            let resid = (rep.recover_state(&e_ij)? - omega.value(&e_ij)).norm();
            recovery_residual = recovery_residual.max(resid);
        }
    }
    Ok(GnsReport {
        dim_h: rep.dim_h(),
        ideal_dim,
        blocks,
        recovery_residual,
    })
}
