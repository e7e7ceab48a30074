//! JSON operator/state files and the trajectory CSV format.
//!
//! Operators: `{ "dim": n, "entries": [[[re, im], ...], ...] }` (row-major).
//! States: `{ "dim": n, "rho": entries }` or `{ "dim": n, "psi": [[re, im], ...] }`.
//! Generator specs carry `h` plus either the Kossakowski pair `c`/`f` or the
//! jump operators `v`.
//!
//! Trajectories are CSV with header `t,q1,p1,q2,p2,...` (flow),
//! `t,y0,...` (Bloch mode) or `t,re00,im00,...` (density matrices), every
//! value printed with 17 significant digits so parsing reproduces the
//! doubles bit-exactly.

use anyhow::{anyhow, bail, Context};
use geomq_core::density::DensityMatrix;
use geomq_core::hermitian::{bloch_basis, pauli, HermitianOperator};
use geomq_core::kahler::RealifiedVector;
use geomq_core::{C64, CMat, CVec, RVec};
use serde::Deserialize;

type EntryRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
pub struct OperatorFile {
    pub dim: usize,
    pub entries: EntryRows,
}

#[derive(Debug, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    #[serde(default)]
    pub rho: Option<EntryRows>,
    #[serde(default)]
    pub psi: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
pub struct GklsFile {
    pub dim: usize,
    #[serde(alias = "H")]
    pub h: EntryRows,
    #[serde(default)]
    pub c: Option<EntryRows>,
    #[serde(default, alias = "F")]
    pub f: Option<Vec<EntryRows>>,
    #[serde(default, alias = "V")]
    pub v: Option<Vec<EntryRows>>,
}

pub fn entries_to_matrix(dim: usize, entries: &EntryRows) -> anyhow::Result<CMat> {
    if entries.len() != dim || entries.iter().any(|row| row.len() != dim) {
        bail!("entries array is not {dim}x{dim}");
    }
    let m = CMat::from_fn(dim, dim, |r, c| {
        C64::new(entries[r][c][0], entries[r][c][1])
    });
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        bail!("entries contain non-finite values");
    }
    Ok(m)
}

pub fn rect_entries_to_matrix(entries: &EntryRows) -> anyhow::Result<CMat> {
    let rows = entries.len();
    let cols = entries.first().map(|r| r.len()).unwrap_or(0);
    if rows == 0 || cols == 0 || entries.iter().any(|r| r.len() != cols) {
        bail!("malformed matrix entries");
    }
    Ok(CMat::from_fn(rows, cols, |r, c| {
        C64::new(entries[r][c][0], entries[r][c][1])
    }))
}

/// Resolves an operator argument: a JSON file path if one exists, otherwise
/// a built-in name (`sigma0..sigma3`, or `gm{n}:{k}` for the trace-
/// orthonormal Hermitian basis element `k` of dimension `n`; index 0 is the
/// scaled identity).
pub fn resolve_operator(arg: &str) -> anyhow::Result<HermitianOperator> {
    if std::path::Path::new(arg).exists() {
        let text = std::fs::read_to_string(arg)
            .with_context(|| format!("cannot read operator file {arg}"))?;
        let file: OperatorFile =
            serde_json::from_str(&text).with_context(|| format!("cannot parse {arg}"))?;
        let m = entries_to_matrix(file.dim, &file.entries)?;
        return HermitianOperator::new(m)
            .map_err(|e| anyhow!("operator in {arg} is invalid: {e}"));
    }
    named_operator(arg)
}

pub fn named_operator(name: &str) -> anyhow::Result<HermitianOperator> {
    match name {
        "sigma0" => Ok(pauli(0)),
        "sigma1" => Ok(pauli(1)),
        "sigma2" => Ok(pauli(2)),
        "sigma3" => Ok(pauli(3)),
        other => {
            if let Some(rest) = other.strip_prefix("gm") {
                let (n_str, k_str) = rest
                    .split_once(':')
                    .ok_or_else(|| anyhow!("expected gm<n>:<k>, got {other}"))?;
                let n: usize = n_str.parse().context("basis dimension")?;
                let k: usize = k_str.parse().context("basis index")?;
                let basis = bloch_basis(n);
                return basis
                    .into_iter()
                    .nth(k)
                    .ok_or_else(|| anyhow!("basis index {k} out of range for n={n}"));
            }
            bail!("unknown operator '{other}' (sigma0..sigma3 or gm<n>:<k> or a JSON file)")
        }
    }
}

/// Parses a state file into a density matrix; a `psi` entry becomes the
/// projector onto the (normalized) vector.
pub fn resolve_density(path: &str) -> anyhow::Result<DensityMatrix> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read state file {path}"))?;
    let file: StateFile =
        serde_json::from_str(&text).with_context(|| format!("cannot parse {path}"))?;
    match (&file.rho, &file.psi) {
        (Some(entries), None) => {
            let m = entries_to_matrix(file.dim, entries)?;
            DensityMatrix::from_matrix(m).map_err(|e| anyhow!("invalid density matrix: {e}"))
        }
        (None, Some(psi)) => {
            if psi.len() != file.dim {
                bail!("psi has {} entries, expected {}", psi.len(), file.dim);
            }
            let z = CVec::from_fn(file.dim, |k, _| C64::new(psi[k][0], psi[k][1]));
            let n2 = z.norm_squared();
            if n2 == 0.0 {
                bail!("psi is the zero vector");
            }
            let m = (&z * z.adjoint()) / C64::new(n2, 0.0);
            DensityMatrix::from_matrix(m).map_err(|e| anyhow!("invalid projector: {e}"))
        }
        _ => bail!("state file must contain exactly one of 'rho' or 'psi'"),
    }
}

/// Parses a comma-separated coordinate list `q1,p1,q2,p2,...`.
pub fn parse_seed(arg: &str) -> anyhow::Result<RealifiedVector> {
    let coords: Vec<f64> = arg
        .split(',')
        .map(|tok| tok.trim().parse::<f64>().context("seed coordinate"))
        .collect::<anyhow::Result<_>>()?;
    RealifiedVector::from_coords(&coords).map_err(|e| anyhow!("bad seed point: {e}"))
}

fn push_f64(buf: &mut String, value: f64) {
    use std::fmt::Write;
    write!(buf, ",{value:.16e}").expect("string write");
}

/// CSV for a flow trajectory: `t,q1,p1,...` rows at uniform step.
pub fn flow_csv(times: &[f64], points: &[RVec]) -> String {
    let n = points.first().map(|p| p.len() / 2).unwrap_or(0);
    let mut buf = String::from("t");
    for k in 1..=n {
        buf.push_str(&format!(",q{k},p{k}"));
    }
    buf.push('\n');
    for (t, p) in times.iter().zip(points.iter()) {
        buf.push_str(&format!("{t:.16e}"));
        for v in p.iter() {
            push_f64(&mut buf, *v);
        }
        buf.push('\n');
    }
    buf
}

/// CSV for two flows on a shared time grid; the second flow's columns are
/// prefixed `g_`.
pub fn paired_flow_csv(times: &[f64], primary: &[RVec], secondary: &[RVec]) -> String {
    let n = primary.first().map(|p| p.len() / 2).unwrap_or(0);
    let mut buf = String::from("t");
    for k in 1..=n {
        buf.push_str(&format!(",q{k},p{k}"));
    }
    for k in 1..=n {
        buf.push_str(&format!(",g_q{k},g_p{k}"));
    }
    buf.push('\n');
    for ((t, p), s) in times.iter().zip(primary.iter()).zip(secondary.iter()) {
        buf.push_str(&format!("{t:.16e}"));
        for v in p.iter().chain(s.iter()) {
            push_f64(&mut buf, *v);
        }
        buf.push('\n');
    }
    buf
}

/// CSV of Bloch coordinates along a density trajectory: `t,y0,...`.
pub fn bloch_csv(times: &[f64], states: &[CMat]) -> String {
    let n = states.first().map(|s| s.nrows()).unwrap_or(0);
    let basis = bloch_basis(n);
    let mut buf = String::from("t");
    for k in 0..n * n {
        buf.push_str(&format!(",y{k}"));
    }
    buf.push('\n');
    for (t, rho) in times.iter().zip(states.iter()) {
        buf.push_str(&format!("{t:.16e}"));
        for b in &basis {
            push_f64(&mut buf, 0.5 * (b.matrix() * rho).trace().re);
        }
        buf.push('\n');
    }
    buf
}

/// CSV of raw density-matrix entries: `t,re00,im00,re01,...` (row-major).
pub fn density_csv(times: &[f64], states: &[CMat]) -> String {
    let n = states.first().map(|s| s.nrows()).unwrap_or(0);
    let mut buf = String::from("t");
    for r in 0..n {
        for c in 0..n {
            buf.push_str(&format!(",re{r}{c},im{r}{c}"));
        }
    }
    buf.push('\n');
    for (t, rho) in times.iter().zip(states.iter()) {
        buf.push_str(&format!("{t:.16e}"));
        for r in 0..n {
            for c in 0..n {
                push_f64(&mut buf, rho[(r, c)].re);
                push_f64(&mut buf, rho[(r, c)].im);
            }
        }
        buf.push('\n');
    }
    buf
}

/// Writes to a file, or stdout when the target is `-`/absent.
pub fn emit(out: &Option<String>, content: &str) -> anyhow::Result<()> {
    match out.as_deref() {
        None | Some("-") => {
            use std::io::Write;
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("cannot write {path}"))
        }
    }
}
