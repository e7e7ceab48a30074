//! The realified Hilbert space ℝ²ⁿ and its constant Kähler tensors.
//!
//! Coordinates interleave real and imaginary parts, `(q¹, p₁, q², p₂, …)`
//! with `zᵏ = qᵏ + i pₖ`. In this ordering:
//!
//! * the metric `g` is Euclidean and its bivector `G` is the identity;
//! * the symplectic bivector `Ω` is block-diagonal `[[0, 1], [-1, 0]]`;
//! * the complex structure `J` is block-diagonal `[[0, -1], [1, 0]]`
//!   (multiplication by `i`), and `g(X, Y) = ω(X, JY)`.
//!
//! A Hermitian operator `A` acts through its quadratic function
//! `f_A(ψ) = ½⟨ψ|Aψ⟩`; contracting `df_A` with `Ω` gives the Hamiltonian
//! field `X = J·A_ℝ` and with `G` the gradient field `Y = A_ℝ`, where `A_ℝ`
//! is the realified matrix of `A`. Both are linear, so each field is stored
//! as its `2n × 2n` matrix.

use crate::hermitian::{lie_bracket, HermitianOperator};
use crate::{C64, CMat, CVec, GeomError, RMat, RVec, Result};

/// A point of ℝ²ⁿ in interleaved coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RealifiedVector {
    v: RVec,
}

impl RealifiedVector {
    pub fn new(v: RVec) -> Result<Self> {
        if !v.len().is_multiple_of(2) || v.is_empty() {
            return Err(GeomError::DimensionMismatch {
                left: v.len(),
                right: v.len() + 1,
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(Self { v })
    }

    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        Self::new(RVec::from_row_slice(coords))
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.v.len() / 2
    }

    pub fn coords(&self) -> &RVec {
        &self.v
    }

    pub fn into_coords(self) -> RVec {
        self.v
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

/// ℂⁿ → ℝ²ⁿ, `zᵏ = qᵏ + i pₖ`.
pub fn realify(z: &CVec) -> RealifiedVector {
    let mut v = RVec::zeros(2 * z.len());
    for (k, zk) in z.iter().enumerate() {
        v[2 * k] = zk.re;
        v[2 * k + 1] = zk.im;
    }
    RealifiedVector { v }
}

/// ℝ²ⁿ → ℂⁿ, inverse of [`realify`].
pub fn complexify(psi: &RealifiedVector) -> CVec {
    complexify_coords(psi.coords())
}

/// [`complexify`] on raw coordinates.
pub fn complexify_coords(v: &RVec) -> CVec {
    CVec::from_fn(v.len() / 2, |k, _| C64::new(v[2 * k], v[2 * k + 1]))
}

/// Realified matrix of a complex-linear map: each entry `a + bi` becomes the
/// 2×2 block `[[a, -b], [b, a]]`.
pub fn realify_op(a: &CMat) -> RMat {
    let n = a.nrows();
    let mut m = RMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)];
            m[(2 * r, 2 * c)] = z.re;
            m[(2 * r, 2 * c + 1)] = -z.im;
            m[(2 * r + 1, 2 * c)] = z.im;
            m[(2 * r + 1, 2 * c + 1)] = z.re;
        }
    }
    m
}

/// The constant-coefficient Kähler tensors on ℝ²ⁿ.
#[derive(Debug, Clone, Copy)]
pub struct KahlerTensors {
    n: usize,
}

impl KahlerTensors {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Covariant metric `g` (Euclidean).
    pub fn g(&self) -> RMat {
        RMat::identity(2 * self.n, 2 * self.n)
    }

    /// Contravariant metric `G` (also the identity in these coordinates).
    pub fn g_bivector(&self) -> RMat {
        RMat::identity(2 * self.n, 2 * self.n)
    }

    /// Covariant symplectic form, `ω(X, Y) = Xᵀ W Y`.
    pub fn omega(&self) -> RMat {
        let mut w = RMat::zeros(2 * self.n, 2 * self.n);
        for k in 0..self.n {
            w[(2 * k, 2 * k + 1)] = 1.0;
            w[(2 * k + 1, 2 * k)] = -1.0;
        }
        w
    }

    /// Poisson bivector, `Ω(α, β) = αᵀ O β` on covectors. Numerically equal
    /// to [`Self::omega`] in these coordinates.
    pub fn omega_bivector(&self) -> RMat {
        self.omega()
    }

    /// Complex structure `J` (multiplication by `i`).
    pub fn j(&self) -> RMat {
        let mut j = RMat::zeros(2 * self.n, 2 * self.n);
        for k in 0..self.n {
            j[(2 * k, 2 * k + 1)] = -1.0;
            j[(2 * k + 1, 2 * k)] = 1.0;
        }
        j
    }
}

/// Quadratic function `f_A(ψ) = ½⟨ψ|Aψ⟩ = ½ ψᵀ A_ℝ ψ`.
pub fn quadratic_function(a: &HermitianOperator, psi: &RealifiedVector) -> Result<f64> {
    if a.dim() != psi.n() {
        return Err(GeomError::DimensionMismatch {
            left: a.dim(),
            right: psi.n(),
        });
    }
    let ar = realify_op(a.matrix());
    Ok(0.5 * psi.coords().dot(&(&ar * psi.coords())))
}

/// Gradient (covector) of `f_A` at `ψ`: `A_ℝ ψ`.
pub fn quadratic_gradient(a: &HermitianOperator, psi: &RVec) -> RVec {
    realify_op(a.matrix()) * psi
}

/// The operator realizing the Poisson bracket of quadratic functions:
/// `{f_A, f_B} = f_C` with `C = [A, B]`.
pub fn poisson_bracket(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    lie_bracket(a, b)
}

/// Pointwise `Ω(df_A, df_B)(ψ)`.
pub fn poisson_bracket_at(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<f64> {
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
    let da = quadratic_gradient(a, psi.coords());
    let db = quadratic_gradient(b, psi.coords());
    let omega = KahlerTensors::new(a.dim()).omega_bivector();
    Ok(da.dot(&(omega * db)))
}

/// Pointwise `G(df_A, df_B)(ψ)`; equals `f_{AB+BA}(ψ)`.
pub fn jordan_bracket_at(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<f64> {
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
    let da = quadratic_gradient(a, psi.coords());
    let db = quadratic_gradient(b, psi.coords());
    Ok(da.dot(&db))
}

/// Pointwise star product `½G(df_A, df_B) + (i/2)Ω(df_A, df_B)`; equals the
/// (generally complex) value `f_{AB}(ψ)`.
pub fn star_product_at(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<C64> {
    let sym = jordan_bracket_at(a, b, psi)?;
    let skew = poisson_bracket_at(a, b, psi)?;
    Ok(C64::new(0.5 * sym, 0.5 * skew))
}

/// What kind of linear field a matrix encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Hamiltonian,
    Gradient,
    Dilation,
    Phase,
    Other,
}

/// A linear vector field on ℝ²ⁿ, stored as its matrix: value at `ψ` is `Mψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearVectorField {
    n: usize,
    matrix: RMat,
    kind: FieldKind,
}

impl LinearVectorField {
    pub fn new(matrix: RMat, kind: FieldKind) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || !matrix.nrows().is_multiple_of(2) {
            return Err(GeomError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(Self {
            n: matrix.nrows() / 2,
            matrix,
            kind,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn value_at(&self, psi: &RVec) -> RVec {
        &self.matrix * psi
    }
}

/// Anything the flow engine can integrate.
pub trait VectorField {
    /// Complex dimension of the underlying Hilbert space.
    fn n(&self) -> usize;
    fn value_at(&self, psi: &RVec) -> RVec;
    /// Short descriptor used in trajectory metadata.
    fn describe(&self) -> String;
}

impl VectorField for LinearVectorField {
    fn n(&self) -> usize {
        self.n
    }

    fn value_at(&self, psi: &RVec) -> RVec {
        LinearVectorField::value_at(self, psi)
    }

    fn describe(&self) -> String {
        format!("linear:{:?}", self.kind)
    }
}

/// Hamiltonian field `X_{f_A} = Ω(df_A, ·)`, matrix `J·A_ℝ`. Its flow solves
/// `ż = +iAz` in complex form.
pub fn hamiltonian_field(a: &HermitianOperator) -> LinearVectorField {
    let t = KahlerTensors::new(a.dim());
    LinearVectorField {
        n: a.dim(),
        matrix: t.j() * realify_op(a.matrix()),
        kind: FieldKind::Hamiltonian,
    }
}

/// Same field with the opposite time orientation (`ż = -iAz`), for callers
/// who fix the Schrödinger sign the other way.
pub fn hamiltonian_field_conjugate(a: &HermitianOperator) -> LinearVectorField {
    let t = KahlerTensors::new(a.dim());
    LinearVectorField {
        n: a.dim(),
        matrix: -(t.j() * realify_op(a.matrix())),
        kind: FieldKind::Hamiltonian,
    }
}

/// Gradient field `Y_{f_A} = G(df_A, ·)`, matrix `A_ℝ`.
pub fn gradient_field(a: &HermitianOperator) -> LinearVectorField {
    LinearVectorField {
        n: a.dim(),
        matrix: realify_op(a.matrix()),
        kind: FieldKind::Gradient,
    }
}

/// Dilation field `Δ(ψ) = ψ`.
pub fn dilation_field(n: usize) -> LinearVectorField {
    LinearVectorField {
        n,
        matrix: RMat::identity(2 * n, 2 * n),
        kind: FieldKind::Dilation,
    }
}

/// Phase field `Γ = J(Δ)`, the global phase generator.
pub fn phase_field(n: usize) -> LinearVectorField {
    LinearVectorField {
        n,
        matrix: KahlerTensors::new(n).j(),
        kind: FieldKind::Phase,
    }
}

/// Result of saturating a family of linear fields under the commutator.
#[derive(Debug, Clone)]
pub struct LieClosure {
    /// Real dimension of the generated Lie algebra.
    pub dim: usize,
    /// Orthonormal basis (Frobenius inner product) of the closure.
    pub basis: Vec<RMat>,
}

/// Real Lie algebra generated by the fields' matrices under the matrix
/// commutator, computed by iterated bracketing with rank saturation.
pub fn lie_closure(fields: &[LinearVectorField]) -> Result<LieClosure> {
    if fields.is_empty() {
        return Err(GeomError::DimensionMismatch { left: 0, right: 1 });
    }
    let n = fields[0].n();
    for f in fields {
        if f.n() != n {
            return Err(GeomError::DimensionMismatch {
                left: f.n(),
                right: n,
            });
        }
    }

    let tol = 1e-9;
    let mut basis: Vec<RMat> = Vec::new();
    let insert = |m: &RMat, basis: &mut Vec<RMat>| -> bool {
        let mut r = m.clone();
        for b in basis.iter() {
            let coeff = r.dot(b);
            r -= b * coeff;
        }
        // Second orthogonalization pass for numerical robustness.
        for b in basis.iter() {
            let coeff = r.dot(b);
            r -= b * coeff;
        }
        let norm = r.norm();
        if norm > tol * (1.0 + m.norm()) {
            basis.push(r / norm);
            true
        } else {
            false
        }
    };

    for f in fields {
        insert(f.matrix(), &mut basis);
    }
    loop {
        let len = basis.len();
        let mut grew = false;
        'outer: for i in 0..len {
            for j in (i + 1)..len {
                let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                if insert(&comm, &mut basis) {
                    grew = true;
                    // Restart bracketing over the enlarged basis.
                    break 'outer;
                }
            }
        }
        if !grew {
            break;
        }
        if basis.len() > 4 * n * n {
            break; // cannot exceed gl(2n, R); guards against tolerance loops
        }
    }
    Ok(LieClosure {
        dim: basis.len(),
        basis,
    })
}
