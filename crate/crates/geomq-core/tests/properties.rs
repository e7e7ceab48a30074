//! Property-based invariants across modules, driven by proptest-generated
//! inputs rather than a fixed RNG stream.

use geomq_core::coadjoint::{bloch_coords, bloch_inverse, DualElement};
use geomq_core::hermitian::{max_abs, star_decompose, HermitianOperator};
use geomq_core::kahler::{complexify, realify, RealifiedVector};
use geomq_core::kraus::{apply_matrix, choi, compose, KrausFamily};
use geomq_core::{C64, CMat, CVec};
use proptest::prelude::*;

const ENTRY: std::ops::Range<f64> = -3.0..3.0;

fn complex_matrix(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((ENTRY, ENTRY), n * n).prop_map(move |entries| {
        CMat::from_fn(n, n, |r, c| {
            let (re, im) = entries[r * n + c];
            C64::new(re, im)
        })
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = HermitianOperator> {
    complex_matrix(n).prop_map(HermitianOperator::symmetrized)
}

fn complex_vector(n: usize) -> impl Strategy<Value = CVec> {
    prop::collection::vec((ENTRY, ENTRY), n)
        .prop_map(move |entries| CVec::from_fn(n, |k, _| C64::new(entries[k].0, entries[k].1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_decomposition_recovers_the_product(
        a in hermitian(3),
        b in hermitian(3),
    ) {
        let star = star_decompose(&a, &b).unwrap();
        let prod = a.matrix() * b.matrix();
        prop_assert!(max_abs(&(star - prod)) < 1e-12);
    }

    #[test]
    fn realification_roundtrip(z in complex_vector(4)) {
        let psi = realify(&z);
        let back = complexify(&psi);
        prop_assert!((back - &z).norm() < 1e-14);
    }

    #[test]
    fn bloch_roundtrip(rho in hermitian(3)) {
        let dual = DualElement::new(rho.clone());
        let back = bloch_inverse(&bloch_coords(&dual)).unwrap();
        prop_assert!(max_abs(&(back.matrix() - rho.matrix())) < 1e-11);
    }

    #[test]
    fn channels_compose_and_stay_completely_positive(
        m1 in complex_matrix(2),
        m2 in complex_matrix(2),
        m3 in complex_matrix(2),
        state in hermitian(2),
    ) {
        let k1 = KrausFamily::new(vec![m1, m2]).unwrap();
        let k2 = KrausFamily::new(vec![m3]).unwrap();
        // Positive input stays positive under the channel.
        let rho = state.matrix() * state.matrix(); // Hermitian squared is PSD
        let nested = apply_matrix(&k1, &apply_matrix(&k2, &rho).unwrap()).unwrap();
        let joint = apply_matrix(&compose(&k1, &k2).unwrap(), &rho).unwrap();
        prop_assert!(max_abs(&(nested - &joint)) < 1e-9 * (1.0 + max_abs(&joint)));

        let min_choi = choi(&k1).eigenvalues()[0];
        prop_assert!(min_choi > -1e-9);

        let min_out = HermitianOperator::symmetrized(joint)
            .eigenvalues()
            .first()
            .copied()
            .unwrap();
        prop_assert!(min_out > -1e-9);
    }

    #[test]
    fn expectation_is_ray_invariant(
        a in hermitian(2),
        coords in prop::collection::vec(-2.0..2.0f64, 4),
        lambda in 0.1..5.0f64,
    ) {
        let norm2: f64 = coords.iter().map(|x| x * x).sum();
        prop_assume!(norm2 > 1e-4);
        let psi = RealifiedVector::from_coords(&coords).unwrap();
        let scaled = RealifiedVector::new(psi.coords() * lambda).unwrap();
        let e1 = geomq_core::projective::expectation(&a, &psi).unwrap();
        let e2 = geomq_core::projective::expectation(&a, &scaled).unwrap();
        prop_assert!((e1 - e2).abs() < 1e-9 * (1.0 + e1.abs()));
    }
}
