//! `geomq` — flows, Markovian evolutions, property suites, GNS reports and
//! Bloch coordinates for finite-level quantum systems, on the command line.
//!
//! Exit codes: 0 success, 1 property-suite failure, 2 parse/input error,
//! 3 integration failure, 4 invalid generator spec.

mod formats;

use clap::{Args, Parser, Subcommand};
use geomq_core::checks::{CheckConfig, CheckSuite, SuiteReport};
use geomq_core::coadjoint::{bloch_coords, bloch_inverse, BlochCoordinates, DualElement};
use geomq_core::flow::{integrate, IntegratorConfig};
use geomq_core::gns::{gns_report, AlgebraState};
use geomq_core::hermitian::{pauli, HermitianOperator};
use geomq_core::kahler::{
    gradient_field, hamiltonian_field, phase_field, RealifiedVector, VectorField,
};
use geomq_core::lindblad::{diagonalize, DiagonalGKLS, GKLSSpec};
use geomq_core::projective::{projective_gradient, projective_hamiltonian};
use geomq_core::{GeomError, RVec};

const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_INTEGRATION: i32 = 3;
const EXIT_SPEC: i32 = 4;

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_PARSE,
            message: err.to_string(),
        }
    }

    fn of_geom(err: GeomError) -> Self {
        let code = match &err {
            GeomError::IntegrationFailure { .. } | GeomError::TraceDrift { .. } => {
                EXIT_INTEGRATION
            }
            GeomError::InvalidSpec(_) => EXIT_SPEC,
            _ => EXIT_PARSE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "geomq",
    about = "Geometric quantum mechanics toolkit: Kahler flows, GKLS evolutions, \
             property suites, GNS reports, Bloch coordinates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a Hamiltonian/gradient field (linear or projective) and
    /// write the trajectory as CSV.
    Flow(FlowArgs),
    /// Evolve a density matrix under a GKLS generator.
    Lindblad(LindbladArgs),
    /// Run a seeded property suite and print a JSON report.
    Check(CheckArgs),
    /// Build the GNS representation of a state and print its summary.
    Gns(GnsArgs),
    /// Convert a state to Bloch coordinates, or coordinates back to a state.
    Bloch(BlochArgs),
}

#[derive(Args)]
struct FlowArgs {
    /// Operator: sigma0..sigma3, gm<n>:<k>, or a JSON file.
    #[arg(long, default_value = "sigma3")]
    op: String,
    /// Field kind.
    #[arg(long, default_value = "projective-gradient")]
    kind: String,
    /// Initial point q1,p1,q2,p2,...
    #[arg(long)]
    seed: Option<String>,
    /// Step size.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// Time horizon.
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    /// Stop when the field norm falls below this.
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    /// Project back to the unit sphere after each step.
    #[arg(long)]
    renormalize: bool,
    /// Named preset (fig1, fig2, fig3, fig3b) bundling operator, kind,
    /// seed and horizon for the reference experiments.
    #[arg(long)]
    figure: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct LindbladArgs {
    /// Generator spec JSON: {dim, h, c, f} or {dim, h, v}.
    #[arg(long)]
    spec: String,
    /// Initial state JSON: {dim, rho} or {dim, psi}.
    #[arg(long)]
    rho0: String,
    /// Step size.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// Time horizon.
    #[arg(long, default_value_t = 5.0)]
    tmax: f64,
    /// Emit Bloch coordinates instead of matrix entries.
    #[arg(long)]
    bloch: bool,
    /// Rescale the trace to one after every step.
    #[arg(long)]
    renormalize: bool,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite: kahler|brackets|mu|kraus|gkls|gns|closure|all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Hilbert-space dimension.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Samples per suite.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// RNG seed (flag beats the GEOMQ_SEED variable, which beats the
    /// default of 7).
    #[arg(long)]
    seed: Option<u64>,
    /// Inject a relative fault of this size (sensitivity self-test).
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    /// Multiplier applied to every per-identity tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Evaluate samples sequentially even when the parallel feature is on.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct GnsArgs {
    /// State JSON file.
    #[arg(long)]
    state: String,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct BlochArgs {
    /// State JSON file to convert to coordinates.
    #[arg(long)]
    state: Option<String>,
    /// Coordinates y0,y1,... to convert back to a matrix.
    #[arg(long)]
    y: Option<String>,
    /// Hilbert-space dimension for --y (inferred as sqrt of the length).
    #[arg(long)]
    dim: Option<usize>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Flow(args) => cmd_flow(args),
        Command::Lindblad(args) => cmd_lindblad(args),
        Command::Check(args) => cmd_check(args),
        Command::Gns(args) => cmd_gns(args),
        Command::Bloch(args) => cmd_bloch(args),
    };
    if let Err(failure) = result {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

struct FlowPlan {
    op: HermitianOperator,
    kind: String,
    seed: RealifiedVector,
    h: f64,
    tmax: f64,
    eps: f64,
    renormalize: bool,
    /// Companion phase flow seed for the paired presets.
    companion: Option<RealifiedVector>,
}

fn figure_preset(name: &str) -> Result<FlowPlan, Failure> {
    let reference_seed = RealifiedVector::from_coords(&[0.2, 0.3, 0.3, 0.78_f64.sqrt()])
        .map_err(Failure::of_geom)?;
    let four_pi = 4.0 * std::f64::consts::PI;
    match name {
        // Gradient flow selecting the dominant eigenvector of sigma3.
        "fig1" => Ok(FlowPlan {
            op: pauli(3),
            kind: "projective-gradient".into(),
            seed: reference_seed,
            h: 1e-3,
            tmax: 15.0,
            eps: 1e-8,
            renormalize: true,
            companion: None,
        }),
        // Projective Hamiltonian flow: periodic, two frequencies.
        "fig2" => Ok(FlowPlan {
            op: pauli(3),
            kind: "projective-hamiltonian".into(),
            seed: reference_seed,
            h: 1e-3,
            tmax: four_pi,
            eps: 0.0,
            renormalize: false,
            companion: None,
        }),
        // Hamiltonian flow next to the phase flow from the same point.
        "fig3" => Ok(FlowPlan {
            op: pauli(3),
            kind: "projective-hamiltonian".into(),
            seed: reference_seed.clone(),
            h: 1e-3,
            tmax: four_pi,
            eps: 0.0,
            renormalize: false,
            companion: Some(reference_seed),
        }),
        // Gradient flow next to the phase flow through (1,0,0,0): both end
        // on the same ray.
        "fig3b" => Ok(FlowPlan {
            op: pauli(3),
            kind: "projective-gradient".into(),
            seed: reference_seed,
            h: 1e-3,
            tmax: 15.0,
            eps: 1e-8,
            renormalize: true,
            companion: Some(
                RealifiedVector::from_coords(&[1.0, 0.0, 0.0, 0.0]).map_err(Failure::of_geom)?,
            ),
        }),
        other => Err(Failure::parse(format!(
            "unknown figure preset '{other}' (fig1|fig2|fig3|fig3b)"
        ))),
    }
}

fn cmd_flow(args: FlowArgs) -> CmdResult {
    let plan = if let Some(figure) = &args.figure {
        figure_preset(figure)?
    } else {
        let op = formats::resolve_operator(&args.op).map_err(Failure::parse)?;
        let seed_arg = args
            .seed
            .as_deref()
            .ok_or_else(|| Failure::parse("--seed is required without --figure"))?;
        let seed = formats::parse_seed(seed_arg).map_err(Failure::parse)?;
        FlowPlan {
            op,
            kind: args.kind.clone(),
            seed,
            h: args.h,
            tmax: args.tmax,
            eps: args.eps,
            renormalize: args.renormalize,
            companion: None,
        }
    };

    let cfg = IntegratorConfig {
        h: plan.h,
        t_max: plan.tmax,
        convergence_eps: plan.eps,
        renormalize: plan.renormalize,
    };

    let field: Box<dyn VectorField> = match plan.kind.as_str() {
        "hamiltonian" => Box::new(hamiltonian_field(&plan.op)),
        "gradient" => Box::new(gradient_field(&plan.op)),
        "projective-hamiltonian" => Box::new(projective_hamiltonian(&plan.op)),
        "projective-gradient" => Box::new(projective_gradient(&plan.op)),
        other => {
            return Err(Failure::parse(format!(
                "unknown field kind '{other}' \
                 (hamiltonian|gradient|projective-hamiltonian|projective-gradient)"
            )))
        }
    };

    let traj = integrate(field.as_ref(), &plan.seed, &cfg).map_err(Failure::of_geom)?;

    let csv = if let Some(companion_seed) = plan.companion {
        // Phase flow on the same time grid as the primary trajectory.
        let gamma = phase_field(companion_seed.n());
        let mut secondary: Vec<RVec> = Vec::with_capacity(traj.points.len());
        let mut x = companion_seed.coords().clone();
        secondary.push(x.clone());
        for _ in 1..traj.points.len() {
            x = geomq_core::flow::integrate_to(&gamma, &x, plan.h, plan.h)
                .map_err(Failure::of_geom)?;
            secondary.push(x.clone());
        }
        formats::paired_flow_csv(&traj.times, &traj.points, &secondary)
    } else {
        formats::flow_csv(&traj.times, &traj.points)
    };

    eprintln!(
        "flow: {} steps, stop: {:?}, final point at t = {:.6}",
        traj.points.len() - 1,
        traj.stop,
        traj.final_time()
    );
    formats::emit(&args.out, &csv).map_err(Failure::parse)
}

fn parse_gkls(path: &str) -> Result<DiagonalGKLS, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {path}: {e}")))?;
    let file: formats::GklsFile = serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("cannot parse {path}: {e}")))?;
    let h = formats::entries_to_matrix(file.dim, &file.h)
        .and_then(|m| HermitianOperator::new(m).map_err(|e| anyhow::anyhow!("{e}")))
        .map_err(Failure::parse)?;

    match (&file.c, &file.f, &file.v) {
        (Some(c), Some(f), None) => {
            let c = formats::rect_entries_to_matrix(c).map_err(Failure::parse)?;
            let f: Vec<_> = f
                .iter()
                .map(|entries| formats::entries_to_matrix(file.dim, entries))
                .collect::<anyhow::Result<_>>()
                .map_err(Failure::parse)?;
            let spec = GKLSSpec::new(h, c, f).map_err(Failure::of_geom)?;
            diagonalize(&spec).map_err(Failure::of_geom)
        }
        (None, None, Some(v)) => {
            let v: Vec<_> = v
                .iter()
                .map(|entries| formats::entries_to_matrix(file.dim, entries))
                .collect::<anyhow::Result<_>>()
                .map_err(Failure::parse)?;
            DiagonalGKLS::new(h, v).map_err(Failure::of_geom)
        }
        _ => Err(Failure::parse(
            "generator spec must provide either (c, f) or v alongside h",
        )),
    }
}

fn cmd_lindblad(args: LindbladArgs) -> CmdResult {
    let generator = parse_gkls(&args.spec)?;
    let rho0 = formats::resolve_density(&args.rho0).map_err(Failure::parse)?;
    let traj =
        geomq_core::lindblad::evolve(&generator, &rho0, args.tmax, args.h, args.renormalize)
            .map_err(Failure::of_geom)?;

    let final_state = traj.final_state();
    let trace_defect = (final_state.trace().re - 1.0).abs();
    let min_ev = HermitianOperator::symmetrized(final_state.clone())
        .eigenvalues()
        .first()
        .copied()
        .unwrap_or(0.0);
    eprintln!(
        "lindblad: {} samples, final trace defect {trace_defect:.3e}, min eigenvalue {min_ev:.3e}",
        traj.states.len()
    );

    let csv = if args.bloch {
        formats::bloch_csv(&traj.times, &traj.states)
    } else {
        formats::density_csv(&traj.times, &traj.states)
    };
    formats::emit(&args.out, &csv).map_err(Failure::parse)
}

fn report_json(report: &SuiteReport) -> serde_json::Value {
    serde_json::json!({
        "suite": report.suite,
        "passes": report.passes,
        "failures": report.failures,
        "max_residual": report.max_residual,
        "details": report.details,
    })
}

fn cmd_check(args: CheckArgs) -> CmdResult {
    let suite: CheckSuite = args.suite.parse().map_err(Failure::of_geom)?;
    let seed = args
        .seed
        .or_else(|| {
            std::env::var("GEOMQ_SEED")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(7);
    let cfg = CheckConfig {
        n: args.n,
        samples: args.samples,
        seed,
        perturb: args.perturb,
        tol_scale: args.tol_scale,
        parallel: !args.sequential,
    };
    let reports = geomq_core::checks::run_suite(suite, &cfg).map_err(Failure::of_geom)?;
    let body = serde_json::json!({
        "n": cfg.n,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "perturb": cfg.perturb,
        "tol_scale": cfg.tol_scale,
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&body).expect("json"));
    if reports.iter().all(|r| r.all_passed()) {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CHECK_FAILED,
            message: "one or more property suites failed".into(),
        })
    }
}

fn cmd_gns(args: GnsArgs) -> CmdResult {
    let rho = formats::resolve_density(&args.state).map_err(Failure::parse)?;
    let report = gns_report(&AlgebraState::new(rho)).map_err(Failure::of_geom)?;
    let body = serde_json::json!({
        "dim_H": report.dim_h,
        "ideal_dim": report.ideal_dim,
        "blocks": report
            .blocks
            .iter()
            .map(|(p, dim)| serde_json::json!({"p_alpha": p, "dim": dim}))
            .collect::<Vec<_>>(),
        "recovery_residual": report.recovery_residual,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&body).expect("json"));
    formats::emit(&args.out, &text).map_err(Failure::parse)
}

fn cmd_bloch(args: BlochArgs) -> CmdResult {
    match (&args.state, &args.y) {
        (Some(path), None) => {
            let rho = formats::resolve_density(path).map_err(Failure::parse)?;
            let coords = bloch_coords(&DualElement::new(rho.operator().clone()));
            let body = serde_json::json!({
                "n": coords.n,
                "y": coords.y,
                "vector_norm_sq": coords.vector_norm_sq(),
            });
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            Ok(())
        }
        (None, Some(list)) => {
            let y: Vec<f64> = list
                .split(',')
                .map(|tok| tok.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(Failure::parse)?;
            let n = match args.dim {
                Some(n) => n,
                None => {
                    let n = (y.len() as f64).sqrt().round() as usize;
                    if n * n != y.len() {
                        return Err(Failure::parse(
                            "coordinate count must be a perfect square (or pass --dim)",
                        ));
                    }
                    n
                }
            };
            let rho = bloch_inverse(&BlochCoordinates { n, y }).map_err(Failure::of_geom)?;
            let entries: Vec<Vec<[f64; 2]>> = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            let z = rho.matrix()[(r, c)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect();
            let evs = rho.operator().eigenvalues();
            let body = serde_json::json!({
                "dim": n,
                "entries": entries,
                "trace": rho.trace(),
                "min_eigenvalue": evs.first().copied().unwrap_or(0.0),
            });
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            Ok(())
        }
        _ => Err(Failure::parse(
            "pass exactly one of --state <file> or --y <coords>",
        )),
    }
}
