//! Kraus maps on density states and their Choi matrices.
//!
//! A family `{M_j}` acts as `ρ ↦ Σ M_j ρ M_j†`; composition concatenates
//! products pairwise and makes the channels a semigroup. Normalization
//! `ΣM_j†M_j = 𝕀` is exactly trace preservation. Stacking each operator by
//! columns embeds the family into the Hilbert space of matrices with
//! product `Tr(A†B)`, where the channel becomes `Σ|M_j⟩⟨M_j|` — the Choi
//! matrix, positive semidefinite with rank equal to the Kraus rank.
//!
//! The invertible channels inside the semigroup are exactly the rank-one
//! ones with invertible representative, `ρ ↦ MρM†` with `M ∈ GL`; when
//! normalized as well, `M` is unitary — the maximal subgroup sits inside
//! the normalized maps this way.

use crate::density::{DensityMatrix, PositiveOperator};
use crate::hermitian::HermitianOperator;
use crate::{C64, CMat, CVec, GeomError, Result, IDENTITY_TOL, RANK_EIGENVALUE_TOL};

/// Nonempty ordered list of same-dimension Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausFamily {
    ops: Vec<CMat>,
    dim: usize,
}

impl KrausFamily {
    pub fn new(ops: Vec<CMat>) -> Result<Self> {
        let first = ops.first().ok_or(GeomError::InvalidSpec(
            "Kraus family must be nonempty".into(),
        ))?;
        if first.nrows() != first.ncols() {
            return Err(GeomError::NotSquare {
                rows: first.nrows(),
                cols: first.ncols(),
            });
        }
        let dim = first.nrows();
        for op in &ops {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(GeomError::DimensionMismatch {
                    left: op.nrows(),
                    right: dim,
                });
            }
        }
        Ok(Self { ops, dim })
    }

    /// Single-operator channel `ρ ↦ MρM†`.
    pub fn single(m: CMat) -> Result<Self> {
        Self::new(vec![m])
    }

    /// Amplitude damping with decay probability `γ`: the channel moving
    /// excited population to the first basis state.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(GeomError::InvalidSpec(format!(
                "damping probability must lie in [0, 1], got {gamma}"
            )));
        }
        let z = C64::new(0.0, 0.0);
        let m1 = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                z,
                z,
                C64::new((1.0 - gamma).sqrt(), 0.0),
            ],
        );
        let m2 = CMat::from_row_slice(2, 2, &[z, C64::new(gamma.sqrt(), 0.0), z, z]);
        Self::new(vec![m1, m2])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Applies the channel to an arbitrary matrix: `Σ M_j X M_j†`.
pub fn apply_matrix(k: &KrausFamily, x: &CMat) -> Result<CMat> {
    if x.nrows() != k.dim() || x.ncols() != k.dim() {
        return Err(GeomError::DimensionMismatch {
            left: x.nrows(),
            right: k.dim(),
        });
    }
    let mut out = CMat::zeros(k.dim(), k.dim());
    for m in k.ops() {
        out += m * x * m.adjoint();
    }
    Ok(out)
}

/// Applies the channel to a positive operator; positivity is preserved.
pub fn apply(k: &KrausFamily, rho: &PositiveOperator) -> Result<PositiveOperator> {
    let out = apply_matrix(k, rho.matrix())?;
    PositiveOperator::new(HermitianOperator::symmetrized(out))
}

/// Applies a normalized channel to a density matrix; the trace is
/// preserved, so the output is again a state.
pub fn apply_density(k: &KrausFamily, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if !is_normalized(k) {
        return Err(GeomError::InvalidSpec(
            "channel is not normalized; apply it on the positive cone instead".into(),
        ));
    }
    let out = apply_matrix(k, rho.matrix())?;
    DensityMatrix::new(HermitianOperator::symmetrized(out))
}

/// True iff `Σ M_k†M_k = 𝕀` within [`IDENTITY_TOL`].
pub fn is_normalized(k: &KrausFamily) -> bool {
    let mut s = CMat::zeros(k.dim(), k.dim());
    for m in k.ops() {
        s += m.adjoint() * m;
    }
    crate::hermitian::max_abs(&(s - CMat::identity(k.dim(), k.dim()))) < IDENTITY_TOL
}

/// Semigroup composition: `(K ∘ K′)(ρ) = K(K′(ρ))`, realized by the family
/// of pairwise products `{M_j M′_k}`.
pub fn compose(k: &KrausFamily, kp: &KrausFamily) -> Result<KrausFamily> {
    if k.dim() != kp.dim() {
        return Err(GeomError::DimensionMismatch {
            left: k.dim(),
            right: kp.dim(),
        });
    }
    let mut ops = Vec::with_capacity(k.len() * kp.len());
    for m in k.ops() {
        for mp in kp.ops() {
            ops.push(m * mp);
        }
    }
    KrausFamily::new(ops)
}

/// Column-stacking vectorization.
pub fn vec_op(m: &CMat) -> CVec {
    let n = m.nrows();
    CVec::from_fn(n * n, |i, _| m[(i % n, i / n)])
}

/// Inverse of [`vec_op`].
pub fn unvec_op(v: &CVec, n: usize) -> CMat {
    CMat::from_fn(n, n, |r, c| v[c * n + r])
}

/// The Choi matrix `Σ_j vec(M_j) vec(M_j)†` in the matrix Hilbert space with
/// product `Tr(A†B)`. Positive semidefinite; its rank is the Kraus rank and
/// its trace is `Σ Tr(M_j†M_j)` (= `n` for normalized families).
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    matrix: CMat,
    dim: usize,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Hilbert-space dimension `n` of the underlying channel (the matrix is
    /// `n² × n²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        HermitianOperator::symmetrized(self.matrix.clone()).eigenvalues()
    }

    /// Number of eigenvalues above `1e-8 · trace`.
    pub fn kraus_rank(&self) -> usize {
        let thr = RANK_EIGENVALUE_TOL * self.trace().abs().max(1.0);
        self.eigenvalues().iter().filter(|&&l| l > thr).count()
    }

    /// A Kraus family reproducing this Choi matrix, from its
    /// eigendecomposition.
    pub fn to_kraus(&self) -> Result<KrausFamily> {
        let op = HermitianOperator::symmetrized(self.matrix.clone());
        let thr = RANK_EIGENVALUE_TOL * self.trace().abs().max(1.0);
        let ops: Vec<CMat> = op
            .eigenpairs()
            .into_iter()
            .filter(|(l, _)| *l > thr)
            .map(|(l, v)| unvec_op(&(v * C64::new(l.sqrt(), 0.0)), self.dim))
            .collect();
        KrausFamily::new(ops)
    }
}

/// Jamiolkowski-style sum representation of the channel.
pub fn choi(k: &KrausFamily) -> ChoiMatrix {
    let n2 = k.dim() * k.dim();
    let mut m = CMat::zeros(n2, n2);
    for op in k.ops() {
        let v = vec_op(op);
        m += &v * v.adjoint();
    }
    ChoiMatrix { matrix: m, dim: k.dim() }
}

/// Outcome of the invertibility probe.
#[derive(Debug, Clone)]
pub enum InvertOutcome {
    /// The channel is `ρ ↦ MρM†` with invertible `M`; the inverse channel
    /// is `ρ ↦ M⁻¹ρM⁻†`.
    Invertible(CMat),
    /// Not invertible inside the Kraus semigroup.
    NotInvertible { kraus_rank: usize },
}

/// A Kraus map is invertible inside the semigroup iff its Choi matrix has
/// rank one and the single representative is invertible. Normalized and
/// invertible together force `M†M = 𝕀`.
pub fn invert(k: &KrausFamily) -> InvertOutcome {
    let c = choi(k);
    let rank = c.kraus_rank();
    if rank != 1 {
        return InvertOutcome::NotInvertible { kraus_rank: rank };
    }
    let family = match c.to_kraus() {
        Ok(f) => f,
        Err(_) => return InvertOutcome::NotInvertible { kraus_rank: rank },
    };
    let m = family.ops()[0].clone();
    if m.clone().try_inverse().is_none() {
        return InvertOutcome::NotInvertible { kraus_rank: rank };
    }
    InvertOutcome::Invertible(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::max_abs;
    use crate::sampling::{
        random_complex_matrix, random_density, random_kraus_family, random_unitary, seeded_rng,
    };

    fn diag(entries: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(
            entries.len(),
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    fn pos(m: CMat) -> PositiveOperator {
        PositiveOperator::new(HermitianOperator::symmetrized(m)).unwrap()
    }

    #[test]
    fn identity_channel_is_identity() {
        let k = KrausFamily::single(CMat::identity(2, 2)).unwrap();
        let rho = pos(diag(&[0.3, 0.7]));
        let out = apply(&k, &rho).unwrap();
        assert!(max_abs(&(out.matrix() - rho.matrix())) < 1e-15);
        assert!(is_normalized(&k));
    }

    #[test]
    fn amplitude_damping_half_moves_population() {
        // Direct 2x2 arithmetic: on rho = diag(0, 1) the gamma = 1/2 channel
        // produces diag(1/2, 1/2).
        let k = KrausFamily::amplitude_damping(0.5).unwrap();
        assert!(is_normalized(&k));
        let rho = pos(diag(&[0.0, 1.0]));
        let out = apply(&k, &rho).unwrap();
        assert!(max_abs(&(out.matrix() - &diag(&[0.5, 0.5]))) < 1e-15);
    }

    #[test]
    fn unitary_channel_preserves_spectrum() {
        let mut rng = seeded_rng(101);
        let u = random_unitary(&mut rng, 3);
        let k = KrausFamily::single(u.clone()).unwrap();
        assert!(is_normalized(&k));
        let rho = pos(random_density(&mut rng, 3, 3));
        let out = apply(&k, &rho).unwrap();
        let before = rho.operator().eigenvalues();
        let after = out.operator().eigenvalues();
        for (x, y) in before.iter().zip(after.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_detects_scaling() {
        let k = KrausFamily::single(CMat::identity(2, 2) * C64::new(2.0, 0.0)).unwrap();
        assert!(!is_normalized(&k));
    }

    #[test]
    fn normalization_iff_trace_preserving() {
        let mut rng = seeded_rng(102);
        for _ in 0..20 {
            let fam = KrausFamily::new(random_kraus_family(&mut rng, 2, 3, true)).unwrap();
            assert!(is_normalized(&fam));
            let rho = pos(random_density(&mut rng, 2, 2));
            let out = apply(&fam, &rho).unwrap();
            assert!((out.trace() - 1.0).abs() < 1e-12);

            // An unnormalized family shows a matching trace defect.
            let raw = KrausFamily::new(random_kraus_family(&mut rng, 2, 3, false)).unwrap();
            let mut s = CMat::zeros(2, 2);
            for m in raw.ops() {
                s += m.adjoint() * m;
            }
            let defect = (apply(&raw, &rho).unwrap().trace()
                - (rho.matrix() * s).trace().re)
                .abs();
            assert!(defect < 1e-12);
        }
    }

    #[test]
    fn composition_is_semigroup() {
        let mut rng = seeded_rng(103);
        for _ in 0..10 {
            let a = KrausFamily::new(random_kraus_family(&mut rng, 2, 2, true)).unwrap();
            let b = KrausFamily::new(random_kraus_family(&mut rng, 2, 3, true)).unwrap();
            let c = KrausFamily::new(random_kraus_family(&mut rng, 2, 2, true)).unwrap();
            let rho = pos(random_density(&mut rng, 2, 2));

            // apply(compose(a, b)) = apply(a) ∘ apply(b).
            let nested = apply(&a, &apply(&b, &rho).unwrap()).unwrap();
            let joint = apply(&compose(&a, &b).unwrap(), &rho).unwrap();
            assert!(max_abs(&(nested.matrix() - joint.matrix())) < 1e-12);

            // Associativity at apply level.
            let left = apply(&compose(&compose(&a, &b).unwrap(), &c).unwrap(), &rho).unwrap();
            let right = apply(&compose(&a, &compose(&b, &c).unwrap()).unwrap(), &rho).unwrap();
            assert!(max_abs(&(left.matrix() - right.matrix())) < 1e-12);

            // Composition of normalized maps stays normalized.
            assert!(is_normalized(&compose(&a, &b).unwrap()));
        }

        // Identity composes trivially.
        let id = KrausFamily::single(CMat::identity(2, 2)).unwrap();
        let k = KrausFamily::amplitude_damping(0.3).unwrap();
        let rho = pos(diag(&[0.4, 0.6]));
        let lhs = apply(&compose(&id, &k).unwrap(), &rho).unwrap();
        let rhs = apply(&k, &rho).unwrap();
        assert!(max_abs(&(lhs.matrix() - rhs.matrix())) < 1e-15);
    }

    #[test]
    fn damping_composition_closed_form() {
        // Two dampings gamma1, gamma2 compose to 1 - gamma = (1-g1)(1-g2).
        let g1 = 0.3;
        let g2 = 0.45;
        let k1 = KrausFamily::amplitude_damping(g1).unwrap();
        let k2 = KrausFamily::amplitude_damping(g2).unwrap();
        let combined = compose(&k1, &k2).unwrap();
        let expected = KrausFamily::amplitude_damping(1.0 - (1.0 - g1) * (1.0 - g2)).unwrap();
        let mut rng = seeded_rng(104);
        for _ in 0..5 {
            let rho = pos(random_density(&mut rng, 2, 2));
            let a = apply(&combined, &rho).unwrap();
            let b = apply(&expected, &rho).unwrap();
            assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-12);
        }
    }

    #[test]
    fn choi_examples() {
        // Identity channel: rank 1, trace n.
        let id = KrausFamily::single(CMat::identity(2, 2)).unwrap();
        let c = choi(&id);
        assert_eq!(c.kraus_rank(), 1);
        assert!((c.trace() - 2.0).abs() < 1e-14);

        // Amplitude damping at gamma = 1/2 has two independent operators.
        let k = KrausFamily::amplitude_damping(0.5).unwrap();
        assert_eq!(choi(&k).kraus_rank(), 2);
    }

    #[test]
    fn choi_positive_and_reconstructs_channel() {
        let mut rng = seeded_rng(105);
        for _ in 0..20 {
            let fam = KrausFamily::new(random_kraus_family(&mut rng, 2, 3, false)).unwrap();
            let c = choi(&fam);
            let min_ev = c.eigenvalues()[0];
            assert!(min_ev > -1e-10, "Choi eigenvalue {min_ev}");

            // The reconstructed family acts identically on random states.
            let rebuilt = c.to_kraus().unwrap();
            let rho = pos(random_density(&mut rng, 2, 2));
            let a = apply(&fam, &rho).unwrap();
            let b = apply(&rebuilt, &rho).unwrap();
            assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-10);
        }
    }

    #[test]
    fn kraus_non_uniqueness_under_isometries() {
        // Mixing the family by an isometry V (V†V = I) leaves both the Choi
        // matrix and the channel action unchanged.
        let mut rng = seeded_rng(106);
        let fam = KrausFamily::new(random_kraus_family(&mut rng, 2, 2, true)).unwrap();
        let v = {
            // 3x2 isometry from a unitary's first two columns.
            let u = random_unitary(&mut rng, 3);
            u.columns(0, 2).into_owned()
        };
        let mixed: Vec<CMat> = (0..3)
            .map(|j| {
                let mut acc = CMat::zeros(2, 2);
                for (k, m) in fam.ops().iter().enumerate() {
                    acc += m * v[(j, k)];
                }
                acc
            })
            .collect();
        let mixed = KrausFamily::new(mixed).unwrap();

        assert!(max_abs(&(choi(&fam).matrix() - choi(&mixed).matrix())) < 1e-10);
        let rho = pos(random_density(&mut rng, 2, 2));
        let a = apply(&fam, &rho).unwrap();
        let b = apply(&mixed, &rho).unwrap();
        assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-10);
    }

    #[test]
    fn invertibility_classification() {
        let mut rng = seeded_rng(107);

        // Unitary: invertible with the representative itself.
        let u = random_unitary(&mut rng, 2);
        match invert(&KrausFamily::single(u.clone()).unwrap()) {
            InvertOutcome::Invertible(m) => {
                // Representative recovered up to phase; compare channels.
                let rho = pos(random_density(&mut rng, 2, 2));
                let a = apply(&KrausFamily::single(u).unwrap(), &rho).unwrap();
                let b = apply(&KrausFamily::single(m).unwrap(), &rho).unwrap();
                assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-10);
            }
            other => panic!("unitary channel must invert, got {other:?}"),
        }

        // Amplitude damping has Kraus rank 2: not invertible.
        match invert(&KrausFamily::amplitude_damping(0.5).unwrap()) {
            InvertOutcome::NotInvertible { kraus_rank } => assert_eq!(kraus_rank, 2),
            other => panic!("damping must not invert, got {other:?}"),
        }

        // An invertible unnormalized cone map still inverts.
        match invert(&KrausFamily::single(diag(&[2.0, 1.0])).unwrap()) {
            InvertOutcome::Invertible(m) => {
                assert!(m.try_inverse().is_some());
            }
            other => panic!("diag(2,1) must invert, got {other:?}"),
        }
    }

    #[test]
    fn normalized_invertible_is_unitary() {
        let mut rng = seeded_rng(108);
        for _ in 0..10 {
            let u = random_unitary(&mut rng, 3);
            let k = KrausFamily::single(u).unwrap();
            assert!(is_normalized(&k));
            if let InvertOutcome::Invertible(m) = invert(&k) {
                let defect = max_abs(&(m.adjoint() * &m - CMat::identity(3, 3)));
                assert!(defect < 1e-10);
            } else {
                panic!("normalized rank-one channel must invert");
            }
        }
    }

    #[test]
    fn vec_roundtrip() {
        let mut rng = seeded_rng(109);
        let m = random_complex_matrix(&mut rng, 3, 3);
        let back = unvec_op(&vec_op(&m), 3);
        assert!(max_abs(&(back - m)) < 1e-15);
    }

    #[test]
    fn empty_family_rejected() {
        assert!(KrausFamily::new(vec![]).is_err());
    }
}
