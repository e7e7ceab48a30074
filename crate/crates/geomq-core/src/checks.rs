//! Seeded property suites over random samples.
//!
//! Each suite draws its sample set deterministically from a seed, evaluates
//! every identity of one subsystem on each sample, and reports pass/fail
//! counts with the worst raw residual. Sample evaluation is embarrassingly
//! parallel: with the `parallel` feature (default) the sweep fans out via
//! rayon, without it the same code runs sequentially. Inputs are always
//! generated up front in a fixed order, so reports are identical either
//! way.
//!
//! The `perturb` knob injects a relative fault into one side of the tested
//! identities (and a structural fault into the closure generators), so a
//! nonzero value must make suites fail — a sensitivity self-test guarding
//! against vacuous checks.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::coadjoint::check_mu_related;
use crate::density::{factorize_positive, gl_action_cone, gl_action_states, DensityMatrix};
use crate::flow::{integrate_to, ray_defect};
use crate::gns::{build_gns, decompose, gelfand_ideal, ActionSide, AlgebraState};
use crate::hermitian::{
    gkls_basis, hermiticity_defect, jordan_bracket, lie_bracket, max_abs, star_decompose,
    HermitianOperator,
};
use crate::kahler::{
    complexify_coords, dilation_field, gradient_field, hamiltonian_field, jordan_bracket_at,
    phase_field, poisson_bracket_at, quadratic_function, realify, star_product_at, KahlerTensors,
    LinearVectorField, RealifiedVector, VectorField,
};
use crate::kraus::{apply_matrix, choi, compose, invert, is_normalized, InvertOutcome, KrausFamily};
use crate::lindblad::{apply_diagonal, apply_generator, decompose_parts, diagonalize, GKLSSpec};
use crate::projective::{
    expectation, projective_gradient, projective_hamiltonian,
};
use crate::sampling::{
    random_complex_matrix, random_density, random_hermitian, random_invertible,
    random_kossakowski, random_kraus_family, random_unit_realified, random_unitary, seeded_rng,
};
use crate::{C64, CMat, GeomError, Result};

/// Configuration common to all suites.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Hilbert-space dimension.
    pub n: usize,
    /// Number of random samples per suite.
    pub samples: usize,
    /// RNG seed; identical seeds give byte-identical reports.
    pub seed: u64,
    /// Relative fault injected into one side of each identity (0 = off).
    pub perturb: f64,
    /// Multiplier on every per-identity tolerance (default 1).
    pub tol_scale: f64,
    /// Fan sample evaluation out across threads (needs the `parallel`
    /// feature; ignored otherwise).
    pub parallel: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            n: 2,
            samples: 100,
            seed: 7,
            perturb: 0.0,
            tol_scale: 1.0,
            parallel: true,
        }
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub passes: usize,
    pub failures: usize,
    pub max_residual: f64,
    /// Human-readable extras (closure dimensions, worst identities).
    pub details: Vec<String>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

/// The named property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSuite {
    Kahler,
    Brackets,
    Mu,
    Kraus,
    Gkls,
    Gns,
    Closure,
    All,
}

impl fmt::Display for CheckSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CheckSuite::Kahler => "kahler",
            CheckSuite::Brackets => "brackets",
            CheckSuite::Mu => "mu",
            CheckSuite::Kraus => "kraus",
            CheckSuite::Gkls => "gkls",
            CheckSuite::Gns => "gns",
            CheckSuite::Closure => "closure",
            CheckSuite::All => "all",
        };
        f.write_str(name)
    }
}

impl FromStr for CheckSuite {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kahler" => Ok(CheckSuite::Kahler),
            "brackets" => Ok(CheckSuite::Brackets),
            "mu" => Ok(CheckSuite::Mu),
            "kraus" => Ok(CheckSuite::Kraus),
            "gkls" => Ok(CheckSuite::Gkls),
            "gns" => Ok(CheckSuite::Gns),
            "closure" => Ok(CheckSuite::Closure),
            "all" => Ok(CheckSuite::All),
            other => Err(GeomError::InvalidSpec(format!(
                "unknown suite '{other}' (expected kahler|brackets|mu|kraus|gkls|gns|closure|all)"
            ))),
        }
    }
}

/// Runs one suite (or all of them).
pub fn run_suite(suite: CheckSuite, cfg: &CheckConfig) -> Result<Vec<SuiteReport>> {
    match suite {
        CheckSuite::Kahler => Ok(vec![run_kahler(cfg)?]),
        CheckSuite::Brackets => Ok(vec![run_brackets(cfg)?]),
        CheckSuite::Mu => Ok(vec![run_mu(cfg)?]),
        CheckSuite::Kraus => Ok(vec![run_kraus(cfg)?]),
        CheckSuite::Gkls => Ok(vec![run_gkls(cfg)?]),
        CheckSuite::Gns => Ok(vec![run_gns(cfg)?]),
        CheckSuite::Closure => Ok(vec![run_closure(cfg)?]),
        CheckSuite::All => Ok(vec![
            run_kahler(cfg)?,
            run_brackets(cfg)?,
            run_mu(cfg)?,
            run_kraus(cfg)?,
            run_gkls(cfg)?,
            run_gns(cfg)?,
            run_closure(cfg)?,
        ]),
    }
}

/// Per-sample outcome: worst raw residual and whether it stayed within
/// tolerance.
type SampleOutcome = (f64, bool);

fn sweep<T, F>(inputs: &[T], eval: F, parallel: bool) -> Vec<SampleOutcome>
where
    T: Sync,
    F: Fn(&T) -> SampleOutcome + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return inputs.par_iter().map(&eval).collect();
        }
    }
    let _ = parallel;
    inputs.iter().map(eval).collect()
}

fn summarize(suite: &str, outcomes: Vec<SampleOutcome>, details: Vec<String>) -> SuiteReport {
    let max_residual = outcomes.iter().map(|o| o.0).fold(0.0, f64::max);
    let failures = outcomes.iter().filter(|o| !o.1).count();
    SuiteReport {
        suite: suite.to_string(),
        passes: outcomes.len() - failures,
        failures,
        max_residual,
        details,
    }
}

struct ResidualSet {
    worst: f64,
    ok: bool,
    tol_scale: f64,
}

impl ResidualSet {
    fn new(tol_scale: f64) -> Self {
        Self {
            worst: 0.0,
            ok: true,
            tol_scale,
        }
    }

    fn push(&mut self, residual: f64, tol: f64) {
        self.worst = self.worst.max(residual);
        if residual > tol * self.tol_scale {
            self.ok = false;
        }
    }

    fn outcome(&self) -> SampleOutcome {
        (self.worst, self.ok)
    }
}

/// Kähler-structure suite: tensor compatibility, field relations, norms and
/// orthogonality of the dilation/phase pair, projectability, tangency.
pub fn run_kahler(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let p = 1.0 + cfg.perturb;
    let inputs: Vec<(HermitianOperator, RealifiedVector)> = (0..cfg.samples)
        .map(|_| {
            (
                random_hermitian(&mut rng, n),
                RealifiedVector::new(random_unit_realified(&mut rng, n)).unwrap(),
            )
        })
        .collect();

    let tensors = KahlerTensors::new(n);
    let compat = (tensors.g() * p - tensors.omega() * tensors.j()).norm();

    let outcomes = sweep(
        &inputs,
        |(a, psi)| {
            let mut rs = ResidualSet::new(cfg.tol_scale);
            rs.push(compat, 1e-12);

            // Gradient field = -J (Hamiltonian field).
            let x = hamiltonian_field(a);
            let y = gradient_field(a);
            let j = KahlerTensors::new(n).j();
            rs.push((y.matrix() * p - (-&j * x.matrix())).norm(), 1e-12);

            // Dilation/phase geometry at psi.
            let coords = psi.coords();
            let norm2 = coords.norm_squared();
            let d = dilation_field(n).value_at(coords);
            let g = phase_field(n).value_at(coords);
            rs.push((d.norm_squared() * p - norm2).abs(), 1e-10);
            rs.push((g.norm_squared() * p - norm2).abs(), 1e-10);
            rs.push(d.dot(&g).abs() + (p - 1.0).abs() * norm2, 1e-10);
            let w = KahlerTensors::new(n).omega();
            rs.push((d.dot(&(w * &g)) * p - norm2).abs(), 1e-10);

            // Quadratic homogeneity: the derivative along Delta doubles f.
            let f = quadratic_function(a, psi).unwrap();
            let grad = crate::kahler::quadratic_gradient(a, coords);
            rs.push((grad.dot(coords) * p - 2.0 * f).abs(), 1e-10);

            // Degree -2 homogeneity of the contravariant tensors: values on
            // df scale as lambda^2 under psi -> lambda psi.
            let lam = 1.5_f64;
            let scaled = RealifiedVector::new(coords * lam).unwrap();
            let base = jordan_bracket_at(a, a, psi).unwrap();
            let up = jordan_bracket_at(a, a, &scaled).unwrap();
            rs.push((up * p - lam * lam * base).abs(), 1e-8);

            // Projective pair: orthogonality and sphere tangency.
            let yv = projective_gradient(a).value_at(coords);
            let xv = projective_hamiltonian(a).value_at(coords);
            rs.push(yv.dot(&xv).abs() + (p - 1.0).abs(), 1e-10);
            rs.push(coords.dot(&yv).abs() + (p - 1.0).abs(), 1e-10);
            rs.push(coords.dot(&xv).abs() + (p - 1.0).abs(), 1e-10);

            // Projectability of e_A under scale and phase.
            let e0 = expectation(a, psi).unwrap();
            let theta = 0.77_f64;
            let rot = crate::RMat::identity(2 * n, 2 * n) * theta.cos() + &j * theta.sin();
            let moved = RealifiedVector::new((rot * coords) * 2.0).unwrap();
            rs.push((expectation(a, &moved).unwrap() * p - e0).abs(), 1e-10);

            rs.outcome()
        },
        cfg.parallel,
    );
    Ok(summarize("kahler", outcomes, vec![]))
}

/// Bracket suite: the Poisson/Jordan/star realizations of the operator
/// algebra on quadratic functions, plus the Lie-Jordan axioms.
pub fn run_brackets(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let p = 1.0 + cfg.perturb;
    let inputs: Vec<(HermitianOperator, HermitianOperator, HermitianOperator, RealifiedVector)> =
        (0..cfg.samples)
            .map(|_| {
                (
                    random_hermitian(&mut rng, n),
                    random_hermitian(&mut rng, n),
                    random_hermitian(&mut rng, n),
                    RealifiedVector::new(random_unit_realified(&mut rng, n)).unwrap(),
                )
            })
            .collect();

    let outcomes = sweep(
        &inputs,
        |(a, b, c, psi)| {
            let mut rs = ResidualSet::new(cfg.tol_scale);

            // Poisson bracket realizes the Lie bracket.
            let pb = poisson_bracket_at(a, b, psi).unwrap();
            let f_comm = quadratic_function(&lie_bracket(a, b).unwrap(), psi).unwrap();
            rs.push((pb * p - f_comm).abs(), 1e-10);

            // Jordan bracket realizes the anticommutator.
            let jb = jordan_bracket_at(a, b, psi).unwrap();
            let f_anti = quadratic_function(&jordan_bracket(a, b).unwrap(), psi).unwrap();
            rs.push((jb * p - f_anti).abs(), 1e-10);

            // Star product equals f_{AB}.
            let star = star_product_at(a, b, psi).unwrap();
            let z = complexify_coords(psi.coords());
            let f_ab = (z.adjoint() * (a.matrix() * b.matrix()) * &z)[(0, 0)] * 0.5;
            rs.push((star * C64::new(p, 0.0) - f_ab).norm(), 1e-10);

            // Operator-level star decomposition and bracket Hermiticity.
            let sd = star_decompose(a, b).unwrap();
            rs.push(max_abs(&(sd * C64::new(p, 0.0) - a.matrix() * b.matrix())), 1e-10);
            rs.push(hermiticity_defect(lie_bracket(a, b).unwrap().matrix()), 1e-12);
            rs.push(hermiticity_defect(jordan_bracket(a, b).unwrap().matrix()), 1e-12);

            // Lie-Jordan associator proportionality at hbar = 1.
            let assoc_jordan = jordan_bracket(&jordan_bracket(a, b).unwrap(), c)
                .unwrap()
                .matrix()
                - jordan_bracket(a, &jordan_bracket(b, c).unwrap())
                    .unwrap()
                    .matrix();
            let assoc_lie = lie_bracket(&lie_bracket(a, b).unwrap(), c).unwrap().matrix()
                - lie_bracket(a, &lie_bracket(b, c).unwrap()).unwrap().matrix();
            rs.push(max_abs(&(assoc_jordan * C64::new(p, 0.0) - assoc_lie)), 1e-9);

            rs.outcome()
        },
        cfg.parallel,
    );
    Ok(summarize("brackets", outcomes, vec![]))
}

/// Momentum-map suite: all μ-relatedness identities.
pub fn run_mu(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let inputs: Vec<(HermitianOperator, HermitianOperator, RealifiedVector)> = (0..cfg.samples)
        .map(|_| {
            (
                random_hermitian(&mut rng, n),
                random_hermitian(&mut rng, n),
                RealifiedVector::new(random_unit_realified(&mut rng, n)).unwrap(),
            )
        })
        .collect();

    let perturb = cfg.perturb;
    let outcomes = sweep(
        &inputs,
        |(a, b, psi)| {
            let report = check_mu_related(a, b, psi).unwrap();
            let worst = report.max_residual() + perturb.abs();
            (worst, worst < 1e-10 * cfg.tol_scale)
        },
        cfg.parallel,
    );
    Ok(summarize("mu", outcomes, vec![]))
}

/// Kraus suite: semigroup law, Choi positivity, non-uniqueness under
/// isometries, the unitary subgroup inside normalized channels.
pub fn run_kraus(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let p = 1.0 + cfg.perturb;

    struct KrausSample {
        a: KrausFamily,
        b: KrausFamily,
        u: CMat,
        rho: CMat,
    }
    let inputs: Vec<KrausSample> = (0..cfg.samples)
        .map(|_| KrausSample {
            a: KrausFamily::new(random_kraus_family(&mut rng, n, 2, true)).unwrap(),
            b: KrausFamily::new(random_kraus_family(&mut rng, n, 3, true)).unwrap(),
            u: random_unitary(&mut rng, n),
            rho: random_density(&mut rng, n, n),
        })
        .collect();

    let outcomes = sweep(
        &inputs,
        |s| {
            let mut rs = ResidualSet::new(cfg.tol_scale);

            // Semigroup law at apply level.
            let nested = apply_matrix(&s.a, &apply_matrix(&s.b, &s.rho).unwrap()).unwrap();
            let joint = apply_matrix(&compose(&s.a, &s.b).unwrap(), &s.rho).unwrap();
            rs.push(max_abs(&(nested * C64::new(p, 0.0) - joint)), 1e-12);

            // Trace preservation iff normalized.
            let out = apply_matrix(&s.a, &s.rho).unwrap();
            rs.push((out.trace().re * p - 1.0).abs(), 1e-10);

            // Complete positivity via the Choi spectrum.
            let c = choi(&s.b);
            let min_ev = c.eigenvalues()[0] - (p - 1.0);
            rs.push((-min_ev).max(0.0), 1e-10);

            // Normalized + invertible forces a unitary representative.
            let ku = KrausFamily::single(s.u.clone()).unwrap();
            match invert(&ku) {
                InvertOutcome::Invertible(m) => {
                    let defect =
                        max_abs(&(m.adjoint() * &m * C64::new(p, 0.0) - CMat::identity(n, n)));
                    rs.push(defect, 1e-10);
                    rs.push(if is_normalized(&ku) { 0.0 } else { 1.0 }, 0.5);
                }
                InvertOutcome::NotInvertible { .. } => rs.push(1.0, 0.5),
            }

            rs.outcome()
        },
        cfg.parallel,
    );
    Ok(summarize("kraus", outcomes, vec![]))
}

/// GKLS suite: form equivalence, trace annihilation, Hermiticity
/// preservation, part decomposition.
pub fn run_gkls(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let p = 1.0 + cfg.perturb;
    let basis: Vec<CMat> = gkls_basis(n).into_iter().map(|b| b.into_matrix()).collect();

    let inputs: Vec<(GKLSSpec, CMat)> = (0..cfg.samples)
        .map(|_| {
            let spec = GKLSSpec::new(
                random_hermitian(&mut rng, n),
                random_kossakowski(&mut rng, n),
                basis.clone(),
            )
            .unwrap();
            (spec, random_density(&mut rng, n, n))
        })
        .collect();

    let outcomes = sweep(
        &inputs,
        |(spec, rho)| {
            let mut rs = ResidualSet::new(cfg.tol_scale);
            let via_spec = apply_generator(spec, rho).unwrap();
            let d = diagonalize(spec).unwrap();
            let via_diag = apply_diagonal(&d, rho).unwrap();
            rs.push(max_abs(&(via_spec.clone() * C64::new(p, 0.0) - &via_diag)), 1e-10);
            rs.push(via_spec.trace().norm() + (p - 1.0).abs(), 1e-12);
            rs.push(hermiticity_defect(&via_spec), 1e-12);
            let (h, g, k) = decompose_parts(&d, rho).unwrap();
            rs.push(max_abs(&((h + g + k) * C64::new(p, 0.0) - via_diag)), 1e-12);
            rs.outcome()
        },
        cfg.parallel,
    );
    Ok(summarize("gkls", outcomes, vec![]))
}

/// GNS suite: dimension law, state recovery, homomorphism property, convex
/// decomposition.
pub fn run_gns(cfg: &CheckConfig) -> Result<SuiteReport> {
    let mut rng = seeded_rng(cfg.seed);
    let n = cfg.n;
    let p = 1.0 + cfg.perturb;

    struct GnsSample {
        state: AlgebraState,
        rank: usize,
        probes: Vec<CMat>,
    }
    let inputs: Vec<GnsSample> = (0..cfg.samples)
        .map(|_| {
            let rank = rng.gen_range(1..=n);
            let state = AlgebraState::new(
                DensityMatrix::from_matrix(random_density(&mut rng, n, rank)).unwrap(),
            );
            let probes = (0..4).map(|_| random_complex_matrix(&mut rng, n, n)).collect();
            GnsSample { state, rank, probes }
        })
        .collect();

    let outcomes = sweep(
        &inputs,
        |s| {
            let mut rs = ResidualSet::new(cfg.tol_scale);
            let rep = build_gns(&s.state, ActionSide::Left);
            rs.push((rep.dim_h() as f64) * p - (n * s.rank) as f64, 0.5);
            rs.push(
                gelfand_ideal(&s.state).len() as f64 - (n * (n - s.rank)) as f64,
                0.5,
            );

            for a in &s.probes {
                let lhs = rep.recover_state(a).unwrap();
                rs.push((lhs * C64::new(p, 0.0) - s.state.value(a)).norm(), 1e-10);
            }
            let (a, b) = (&s.probes[0], &s.probes[1]);
            let hom = rep.represent(&(a * b)).unwrap();
            let prod = rep.represent(a).unwrap() * rep.represent(b).unwrap();
            rs.push(max_abs(&(hom * C64::new(p, 0.0) - prod)), 1e-10);

            let blocks = decompose(&rep);
            let total: f64 = blocks.iter().map(|bl| bl.weight).sum();
            rs.push((total * p - 1.0).abs(), 1e-10);
            let mut combo = C64::new(0.0, 0.0);
            for bl in &blocks {
                combo += bl.pure_state(&rep, a).unwrap() * C64::new(bl.weight, 0.0);
            }
            rs.push((combo - s.state.value(a)).norm(), 1e-9);

            rs.outcome()
        },
        cfg.parallel,
    );
    Ok(summarize("gns", outcomes, vec![]))
}

/// Lie-closure suite: dimensions of the algebras generated by the
/// Hamiltonian fields, the Hamiltonian + gradient family, and the full set
/// including dilation and phase.
pub fn run_closure(cfg: &CheckConfig) -> Result<SuiteReport> {
    let n = cfg.n;
    let basis = crate::hermitian::bloch_basis(n);

    let mut hams: Vec<LinearVectorField> = basis
        .iter()
        .skip(1)
        .map(hamiltonian_field)
        .collect();
    if cfg.perturb != 0.0 {
        // Structural fault: an antilinear contamination of one generator
        // inflates the closure beyond the complex algebra.
        let mut conj = crate::RMat::identity(2 * n, 2 * n);
        for k in 0..n {
            conj[(2 * k + 1, 2 * k + 1)] = -1.0;
        }
        let broken = hams[0].matrix() + conj * cfg.perturb;
        hams[0] = LinearVectorField::new(broken, crate::kahler::FieldKind::Other)?;
    }

    let ham_dim = crate::kahler::lie_closure(&hams)?.dim;

    let mut with_grad = hams.clone();
    with_grad.extend(basis.iter().skip(1).map(gradient_field));
    let grad_dim = crate::kahler::lie_closure(&with_grad)?.dim;

    let mut full = with_grad.clone();
    full.push(dilation_field(n));
    full.push(phase_field(n));
    let full_dim = crate::kahler::lie_closure(&full)?.dim;

    // su(n), sl(n, C) as a real algebra, gl(n, C) as a real algebra.
    let expected = [n * n - 1, 2 * (n * n - 1), 2 * n * n];
    let got = [ham_dim, grad_dim, full_dim];
    let failures = expected
        .iter()
        .zip(got.iter())
        .filter(|(e, g)| e != g)
        .count();
    let max_residual = expected
        .iter()
        .zip(got.iter())
        .map(|(e, g)| (*e as f64 - *g as f64).abs())
        .fold(0.0, f64::max);

    Ok(SuiteReport {
        suite: "closure".into(),
        passes: 3 - failures,
        failures,
        max_residual,
        details: vec![
            format!("hamiltonian fields: dim {ham_dim} (expected {})", expected[0]),
            format!(
                "hamiltonian + gradient: dim {grad_dim} (expected {})",
                expected[1]
            ),
            format!(
                "with dilation and phase: dim {full_dim} (expected {})",
                expected[2]
            ),
        ],
    })
}

/// Convergence test of gradient-flow spectra against the eigensolver,
/// shared by the CLI and the acceptance suite.
pub fn spectrum_residual(
    a: &HermitianOperator,
    rng: &mut impl Rng,
) -> Result<f64> {
    let cfg = crate::flow::IntegratorConfig {
        h: 5e-3,
        t_max: 600.0,
        convergence_eps: 1e-8,
        renormalize: true,
    };
    let flow_spec = crate::projective::spectrum_by_gradient_flow(a, &cfg, rng)?;
    let mut exact = a.eigenvalues();
    exact.reverse();
    Ok(flow_spec
        .iter()
        .zip(exact.iter())
        .map(|(f, e)| (f - e).abs())
        .fold(0.0, f64::max))
}

/// Worst per-component defect of the reference gradient-flow experiment:
/// integrate the projective gradient of `σ₃` from the canonical seed and
/// compare against the first-coordinate phase-normalized limit.
pub fn reference_flow_defect() -> Result<(f64, RealifiedVector)> {
    let a = crate::hermitian::pauli(3);
    let field = projective_gradient(&a);
    let seed = RealifiedVector::from_coords(&[0.2, 0.3, 0.3, 0.78_f64.sqrt()])?;
    let cfg = crate::flow::IntegratorConfig {
        h: 1e-3,
        t_max: 15.0,
        convergence_eps: 1e-8,
        renormalize: true,
    };
    let traj = crate::flow::integrate(&field, &seed, &cfg)?;
    let endpoint = RealifiedVector::new(traj.final_point().clone())?;

    // Independent closed form: the limit is the normalized first complex
    // coordinate of the seed, (0.2 + 0.3i)/|0.2 + 0.3i| in the first slot.
    let z1 = C64::new(0.2, 0.3);
    let lim = z1 / C64::new(z1.norm(), 0.0);
    let expected = realify(&crate::CVec::from_vec(vec![lim, C64::new(0.0, 0.0)]));
    let defect = (endpoint.coords() - expected.coords())
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max);
    Ok((defect, endpoint))
}

/// Rank-stratification probe shared by CLI and acceptance: random `(g, ρ)`
/// pairs across all ranks; returns the number of rank violations and the
/// worst group-action residual.
pub fn stratification_probe(
    n: usize,
    pairs: usize,
    seed: u64,
) -> Result<(usize, f64)> {
    let mut rng = seeded_rng(seed);
    let mut rank_violations = 0usize;
    let mut worst = 0.0_f64;
    for _ in 0..pairs {
        let rank = rng.gen_range(1..=n);
        let r = random_complex_matrix(&mut rng, n, rank);
        let omega = factorize_positive(&r)?;
        let g = random_invertible(&mut rng, n);
        if gl_action_cone(&g, &omega)?.rank() != rank {
            rank_violations += 1;
        }

        let rho = DensityMatrix::from_matrix(random_density(&mut rng, n, rank))?;
        if gl_action_states(&g, &rho)?.rank() != rank {
            rank_violations += 1;
        }
        let g2 = random_invertible(&mut rng, n);
        let nested = gl_action_states(&g, &gl_action_states(&g2, &rho)?)?;
        let joint = gl_action_states(&(&g * &g2), &rho)?;
        worst = worst.max(max_abs(&(nested.matrix() - joint.matrix())));
    }
    Ok((rank_violations, worst))
}

/// Same-ray defect between two realified points (re-exported convenience).
pub fn ray_defect_between(a: &RealifiedVector, b: &RealifiedVector) -> Result<f64> {
    ray_defect(a, b)
}

/// Commutation defects of the projective Hamiltonian flow with the phase
/// and dilation flows, at `s = t = 1`.
pub fn reference_commutation_defects() -> Result<(f64, f64)> {
    let a = crate::hermitian::pauli(3);
    let field = projective_hamiltonian(&a);
    let seed = RealifiedVector::from_coords(&[0.2, 0.3, 0.3, 0.78_f64.sqrt()])?;
    let gamma = phase_field(2);
    let delta = dilation_field(2);
    let with_gamma =
        crate::flow::flows_commute(&field, &gamma, &seed, 1.0, 1.0, 1e-6, 1e-3)?;
    let with_delta =
        crate::flow::flows_commute(&field, &delta, &seed, 1.0, 1.0, 1e-6, 1e-3)?;
    Ok((with_gamma.defect, with_delta.defect))
}

/// Endpoint of the linear Hamiltonian flow after one full period (sanity
/// helper for CLI smoke tests).
pub fn period_defect(a: &HermitianOperator, psi0: &RealifiedVector, period: f64) -> Result<f64> {
    let field = hamiltonian_field(a);
    let end = integrate_to(&field, psi0.coords(), period, 1e-3)?;
    Ok((end - psi0.coords()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_default_config() {
        let cfg = CheckConfig {
            samples: 25,
            ..CheckConfig::default()
        };
        for report in run_suite(CheckSuite::All, &cfg).unwrap() {
            assert!(
                report.all_passed(),
                "suite {} failed: {} failures, max residual {:.3e}",
                report.suite,
                report.failures,
                report.max_residual
            );
        }
    }

    #[test]
    fn suites_pass_at_n3() {
        let cfg = CheckConfig {
            n: 3,
            samples: 10,
            ..CheckConfig::default()
        };
        for report in run_suite(CheckSuite::All, &cfg).unwrap() {
            assert!(
                report.all_passed(),
                "suite {} failed at n=3 (max residual {:.3e})",
                report.suite,
                report.max_residual
            );
        }
    }

    #[test]
    fn perturbation_makes_every_suite_fail() {
        let cfg = CheckConfig {
            samples: 10,
            perturb: 1e-3,
            ..CheckConfig::default()
        };
        for report in run_suite(CheckSuite::All, &cfg).unwrap() {
            assert!(
                !report.all_passed(),
                "suite {} did not notice the injected fault",
                report.suite
            );
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = CheckConfig {
            samples: 15,
            ..CheckConfig::default()
        };
        let a = run_mu(&cfg).unwrap();
        let b = run_mu(&cfg).unwrap();
        assert_eq!(a.max_residual.to_bits(), b.max_residual.to_bits());

        // Sequential evaluation gives the identical report.
        let seq_cfg = CheckConfig {
            parallel: false,
            ..cfg
        };
        let c = run_mu(&seq_cfg).unwrap();
        assert_eq!(a.max_residual.to_bits(), c.max_residual.to_bits());
    }

    #[test]
    fn closure_reports_expected_dimensions() {
        let report = run_closure(&CheckConfig::default()).unwrap();
        assert!(report.all_passed(), "{:?}", report.details);
        assert!(report.details[0].contains("dim 3"));
        assert!(report.details[1].contains("dim 6"));
        assert!(report.details[2].contains("dim 8"));
    }

    #[test]
    fn reference_flow_reaches_documented_limit() {
        let (defect, endpoint) = reference_flow_defect().unwrap();
        assert!(defect < 1e-3, "defect {defect}");
        // Matches the published limit point to the printed digits.
        let coords = endpoint.coords();
        assert!((coords[0] - 0.5547).abs() < 1e-3);
        assert!((coords[1] - 0.83205).abs() < 1e-3);
    }
}
