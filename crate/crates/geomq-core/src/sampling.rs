//! Random generators for observables, states, vectors and channels.
//!
//! Everything is driven by a caller-supplied RNG so the property suites and
//! the CLI `check` command stay reproducible under a fixed seed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::hermitian::{DeformedMetric, HermitianOperator};
use crate::{C64, CMat, CVec, RVec};

/// Standard-normal complex entry.
fn gauss_c64<R: Rng>(rng: &mut R) -> C64 {
    // Box-Muller on two uniforms.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin())
}

/// Square matrix of iid complex Gaussians.
pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gauss_c64(rng))
}

/// GUE-style random Hermitian matrix, entries O(1).
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianOperator {
    let g = random_complex_matrix(rng, n, n);
    HermitianOperator::symmetrized(g)
}

/// Random complex vector of iid Gaussians.
pub fn random_complex_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| gauss_c64(rng))
}

/// Random point of ℝ²ⁿ with unit Euclidean norm.
pub fn random_unit_realified<R: Rng>(rng: &mut R, n: usize) -> RVec {
    loop {
        let v = RVec::from_fn(2 * n, |_, _| gauss_c64(rng).re);
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Haar-ish random unitary: the eigenvector matrix of a random Hermitian.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    random_hermitian(rng, n)
        .matrix()
        .clone()
        .symmetric_eigen()
        .eigenvectors
}

/// Random invertible matrix (Gaussian, resampled on tiny determinant).
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> CMat {
    loop {
        let g = random_complex_matrix(rng, n, n);
        if g.determinant().norm() > 1e-6 {
            return g;
        }
    }
}

/// Random isometry of the deformed structure: `K₀⁻¹ U K₀` for Haar-ish `U`.
pub fn random_k_unitary<R: Rng>(rng: &mut R, k: &DeformedMetric) -> CMat {
    let k0 = k.sqrt();
    let k0inv = k0.clone().try_inverse().expect("positive definite");
    let u = random_unitary(rng, k.dim());
    k0inv * u * k0
}

/// Random positive semidefinite matrix of the given rank, built as `RR†`.
pub fn random_positive<R: Rng>(rng: &mut R, n: usize, rank: usize) -> CMat {
    let r = random_complex_matrix(rng, n, rank);
    &r * r.adjoint()
}

/// Random density matrix (trace one) of the given rank.
pub fn random_density<R: Rng>(rng: &mut R, n: usize, rank: usize) -> CMat {
    let p = random_positive(rng, n, rank);
    let tr = p.trace().re;
    p / C64::new(tr, 0.0)
}

/// Hermitian inverse square root of a positive definite matrix.
pub fn inv_sqrt_hermitian(m: &CMat) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let d = CMat::from_diagonal(
        &eig.eigenvalues
            .map(|x| C64::new(1.0 / x.max(f64::MIN_POSITIVE).sqrt(), 0.0)),
    );
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Random Kraus family of `m` operators; when `normalized`, the family is
/// rescaled on the right by `(ΣM†M)^{-1/2}` so that `ΣM†M = 𝕀`.
pub fn random_kraus_family<R: Rng>(rng: &mut R, n: usize, m: usize, normalized: bool) -> Vec<CMat> {
    let ops: Vec<CMat> = (0..m).map(|_| random_complex_matrix(rng, n, n)).collect();
    if !normalized {
        return ops;
    }
    let mut s = CMat::zeros(n, n);
    for op in &ops {
        s += op.adjoint() * op;
    }
    let w = inv_sqrt_hermitian(&s);
    ops.into_iter().map(|op| op * &w).collect()
}

/// Random Hermitian positive semidefinite Kossakowski matrix of size
/// `(n²-1) × (n²-1)`, scaled to O(1) entries.
pub fn random_kossakowski<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let d = n * n - 1;
    let p = random_positive(rng, d, d);
    let tr = p.trace().re;
    p / C64::new(tr.max(1.0) / d as f64, 0.0)
}

/// Fresh deterministic RNG for the given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
