//! Complex matrix and Hermitian-operator algebra.
//!
//! Observables are Hermitian matrices. Two brackets live on them: the Lie
//! bracket `[A, B] = -i(AB - BA)` and the Jordan bracket `[A, B]₊ = AB + BA`.
//! Together they recover the associative product as
//! `AB = ½[A,B]₊ + (i/2)[A,B]`, which is what [`star_decompose`] checks.
//! Deformed Hermitian structures `⟨z, w⟩_K = z†Kw` with positive `K` give
//! alternative realizations of the unitary group, tested via
//! [`is_k_unitary`].

use crate::{C64, CMat, CVec, GeomError, Result, HERMITICITY_TOL, IDENTITY_TOL};

/// Largest entrywise deviation of `m` from its own adjoint.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `m`.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(GeomError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    Ok(m.nrows())
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(GeomError::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// A validated Hermitian matrix. `A = A†` is enforced entrywise, within
/// [`HERMITICITY_TOL`], at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    pub fn new(mat: CMat) -> Result<Self> {
        check_square(&mat)?;
        let deviation = hermiticity_defect(&mat);
        if deviation > HERMITICITY_TOL {
            return Err(GeomError::NotHermitian { deviation });
        }
        Ok(Self { mat })
    }

    /// Symmetrizes `(M + M†)/2` before validating. Convenient for results of
    /// long floating-point pipelines that are Hermitian up to roundoff.
    pub fn symmetrized(mat: CMat) -> Self {
        let adj = mat.adjoint();
        Self {
            mat: (mat + adj) * C64::new(0.5, 0.0),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMat::identity(n, n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            mat: CMat::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut evs: Vec<f64> = self
            .mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        evs.sort_by(|a, b| a.total_cmp(b));
        evs
    }

    /// Eigenvalue/eigenvector pairs sorted by descending eigenvalue, each
    /// eigenvector normalized with its largest-modulus component made real
    /// positive so the output is deterministic.
    pub fn eigenpairs(&self) -> Vec<(f64, CVec)> {
        let eig = self.mat.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, CVec)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &ev)| {
                let mut v: CVec = eig.eigenvectors.column(k).into_owned();
                v /= C64::new(v.norm(), 0.0);
                let lead = v
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                let phase = v[lead] / C64::new(v[lead].norm().max(f64::MIN_POSITIVE), 0.0);
                v /= phase;
                (ev, v)
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }
}

/// Lie bracket `[A, B] = -i(AB - BA)`; Hermitian for Hermitian inputs.
pub fn lie_bracket(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    check_same_dim(a.dim(), b.dim())?;
    let comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    Ok(HermitianOperator::symmetrized(comm * C64::new(0.0, -1.0)))
}

/// Jordan bracket `[A, B]₊ = AB + BA` (the bare anticommutator, no ½).
pub fn jordan_bracket(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    check_same_dim(a.dim(), b.dim())?;
    let anti = a.matrix() * b.matrix() + b.matrix() * a.matrix();
    Ok(HermitianOperator::symmetrized(anti))
}

/// Recombines the two brackets into the associative product:
/// `½[A,B]₊ + (i/2)[A,B]`, which equals the plain matrix product `AB`.
pub fn star_decompose(a: &HermitianOperator, b: &HermitianOperator) -> Result<CMat> {
    let jordan = jordan_bracket(a, b)?;
    let lie = lie_bracket(a, b)?;
    Ok(jordan.matrix() * C64::new(0.5, 0.0) + lie.matrix() * C64::new(0.0, 0.5))
}

/// Checks the two Lie-Jordan compatibility axioms on a triple:
///
/// 1. `[A, B∘C] = [A,B]∘C + B∘[A,C]` (Lie adjoints derive the Jordan product);
/// 2. `(A∘B)∘C - A∘(B∘C) = ħ²([[A,B],C] - [A,[B,C]])` (proportional
///    associators).
///
/// With the bracket normalizations of this module the constant is `ħ = 1`;
/// the parameter is exposed so other normalizations can be probed.
pub fn check_lie_jordan_axioms(
    a: &HermitianOperator,
    b: &HermitianOperator,
    c: &HermitianOperator,
    hbar: f64,
) -> Result<bool> {
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), c.dim())?;
    let tol = 1e-10;

    let leibniz_lhs = lie_bracket(a, &jordan_bracket(b, c)?)?;
    let leibniz_rhs = jordan_bracket(&lie_bracket(a, b)?, c)?.matrix()
        + jordan_bracket(b, &lie_bracket(a, c)?)?.matrix();
    let leibniz_defect = max_abs(&(leibniz_lhs.matrix() - leibniz_rhs));

    let assoc_jordan = jordan_bracket(&jordan_bracket(a, b)?, c)?.matrix()
        - jordan_bracket(a, &jordan_bracket(b, c)?)?.matrix();
    let assoc_lie = lie_bracket(&lie_bracket(a, b)?, c)?.matrix()
        - lie_bracket(a, &lie_bracket(b, c)?)?.matrix();
    let assoc_defect = max_abs(&(assoc_jordan - assoc_lie * C64::new(hbar * hbar, 0.0)));

    Ok(leibniz_defect < tol && assoc_defect < tol)
}

/// A positive-definite Hermitian matrix `K` defining the deformed scalar
/// product `⟨z, w⟩_K = z†Kw`.
#[derive(Debug, Clone)]
pub struct DeformedMetric {
    k: HermitianOperator,
}

impl DeformedMetric {
    pub fn new(k: HermitianOperator) -> Result<Self> {
        let min = k.eigenvalues().first().copied().unwrap_or(0.0);
        if min <= 0.0 {
            return Err(GeomError::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { k })
    }

    /// The standard structure, `K = 𝕀`.
    pub fn standard(n: usize) -> Self {
        Self {
            k: HermitianOperator::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn matrix(&self) -> &CMat {
        self.k.matrix()
    }

    /// Hermitian square root `K₀` with `K = K₀†K₀`. Conjugation
    /// `A ↦ K₀ A K₀⁻¹` carries K-unitaries onto standard unitaries.
    pub fn sqrt(&self) -> CMat {
        let eig = self.k.matrix().clone().symmetric_eigen();
        let d = CMat::from_diagonal(&eig.eigenvalues.map(|x| C64::new(x.max(0.0).sqrt(), 0.0)));
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }
}

/// Deformed scalar product `Σ_jk  z̄_j K_jk w_k`.
pub fn k_inner(z: &CVec, w: &CVec, k: &DeformedMetric) -> Result<C64> {
    check_same_dim(z.len(), w.len())?;
    check_same_dim(z.len(), k.dim())?;
    Ok((z.adjoint() * k.matrix() * w)[(0, 0)])
}

/// True iff `A†KA = K` within [`IDENTITY_TOL`]: `A` is an isometry of the
/// deformed structure.
pub fn is_k_unitary(a: &CMat, k: &DeformedMetric) -> Result<bool> {
    let n = check_square(a)?;
    check_same_dim(n, k.dim())?;
    let defect = max_abs(&(a.adjoint() * k.matrix() * a - k.matrix()));
    Ok(defect < IDENTITY_TOL)
}

/// The Pauli matrices `σ₀ = 𝕀, σ₁, σ₂, σ₃`.
pub fn pauli(k: usize) -> HermitianOperator {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mat = match k {
        0 => CMat::from_row_slice(2, 2, &[one, z, z, one]),
        1 => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        2 => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        3 => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => panic!("pauli index must be 0..=3, got {k}"),
    };
    HermitianOperator::new(mat).expect("pauli matrices are Hermitian")
}

/// Hermitian basis of Mₙ(ℂ), orthonormal under `½Tr(B_j B_k) = δ_jk`, with
/// `B₀ = √(2/n)·𝕀` followed by the generalized Gell-Mann matrices. For
/// `n = 2` this is exactly `σ₀..σ₃`.
pub fn bloch_basis(n: usize) -> Vec<HermitianOperator> {
    assert!(n >= 1, "basis needs n >= 1");
    let mut basis = Vec::with_capacity(n * n);
    let scale = (2.0 / n as f64).sqrt();
    basis.push(
        HermitianOperator::new(CMat::identity(n, n) * C64::new(scale, 0.0)).expect("hermitian"),
    );
    // Symmetric and antisymmetric off-diagonal pairs.
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = CMat::zeros(n, n);
            sym[(j, k)] = C64::new(1.0, 0.0);
            sym[(k, j)] = C64::new(1.0, 0.0);
            basis.push(HermitianOperator::new(sym).expect("hermitian"));
            let mut asym = CMat::zeros(n, n);
            asym[(j, k)] = C64::new(0.0, -1.0);
            asym[(k, j)] = C64::new(0.0, 1.0);
            basis.push(HermitianOperator::new(asym).expect("hermitian"));
        }
    }
    // Diagonal ladder.
    for l in 1..n {
        let norm = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut d = CMat::zeros(n, n);
        for j in 0..l {
            d[(j, j)] = C64::new(norm, 0.0);
        }
        d[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        basis.push(HermitianOperator::new(d).expect("hermitian"));
    }
    basis
}

/// Traceless Hermitian basis with `Tr(F_i F_j†) = δ_ij`: the non-identity
/// part of [`bloch_basis`] rescaled by `1/√2`. This is the normalization
/// required of the `F` operators in a GKLS generator.
pub fn gkls_basis(n: usize) -> Vec<HermitianOperator> {
    bloch_basis(n)
        .into_iter()
        .skip(1)
        .map(|b| {
            HermitianOperator::new(b.matrix() * C64::new(1.0 / 2.0_f64.sqrt(), 0.0))
                .expect("hermitian")
        })
        .collect()
}
