//! Parameter sweeps of the complete-graph model over the `(μ, γ)` plane.
//!
//! [`run_sweep`] evaluates, for every grid point, the fidelities toward the
//! forward neighbours `(μ+δμ, γ)` and `(μ, γ+δγ)` and reports their minimum
//! together with the parity sector (`det T`) and the smallest single-particle
//! energy. [`first_order_boundary`] traces the locus where `det T` flips sign.
//!
//! Grid points are independent; work is spread over a dedicated thread pool
//! and gathered by index, so output does not depend on the worker count.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{fidelity_det, fidelity_det_signed};
use crate::fock::{build_fock_hamiltonian, fock_ground_state, fock_overlap, state_from_angles};
use crate::groundstate::canonical_ground_state;
use crate::models::{complete_graph, CompleteGraphParams};
use crate::quadform::logdet::log_abs_det_pivots;
use crate::quadform::polar::orthogonal_factor;
use crate::quadform::{log_abs_det, polar_decompose_with};

/// Evenly spaced samples `min, …, max` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let axis = GridAxis { min, max, steps };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("grid needs at least one step".into()));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        if self.max < self.min {
            return Err(Error::Config(format!("grid bounds reversed: {} > {}", self.min, self.max)));
        }
        Ok(())
    }

    /// Sample `i`; the end points are exact. Symmetric axes (`min = −max`)
    /// give exactly mirrored values.
    pub fn value(&self, i: usize) -> f64 {
        if i == 0 {
            return self.min;
        }
        if i + 1 >= self.steps {
            return self.max;
        }
        let last = (self.steps - 1) as f64;
        (self.min * (last - i as f64) + self.max * i as f64) / last
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.steps < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.steps - 1) as f64
        }
    }
}

impl FromStr for GridAxis {
    type Err = Error;

    /// Parses `min:max:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected min:max:steps, got `{s}`")));
        }
        let num = |p: &str| {
            p.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad bound `{p}`: {e}")))
        };
        let steps = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad step count `{}`: {e}", parts[2])))?;
        GridAxis::new(num(parts[0])?, num(parts[1])?, steps)
    }
}

impl fmt::Display for GridAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Number of modes `L`; even.
    pub size: usize,
    pub mu: GridAxis,
    pub gamma: GridAxis,
    pub delta_mu: f64,
    pub delta_gamma: f64,
    /// Absolute threshold on the smallest singular value of `Z`; `None`
    /// selects the relative default of the polar decomposition.
    pub tol_sing: Option<f64>,
    pub format: OutputFormat,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            size: 400,
            mu: GridAxis { min: -2.0, max: 4.0, steps: 61 },
            gamma: GridAxis { min: -2.5, max: 2.5, steps: 51 },
            delta_mu: 0.1,
            delta_gamma: 0.1,
            tol_sing: None,
            format: OutputFormat::Csv,
            output_path: None,
            workers: 1,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.size < 2 || !self.size.is_multiple_of(2) {
            return Err(Error::OddSize(self.size));
        }
        self.mu.validate()?;
        self.gamma.validate()?;
        for (name, d) in [("delta_mu", self.delta_mu), ("delta_gamma", self.delta_gamma)] {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::Config(format!("{name} must be finite and non-negative, got {d}")));
            }
        }
        if let Some(tol) = self.tol_sing {
            if !tol.is_finite() || tol < 0.0 {
                return Err(Error::Config(format!("tol_sing must be non-negative, got {tol}")));
            }
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        self.mu.steps * self.gamma.steps
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub mu: f64,
    pub gamma: f64,
    #[serde(rename = "F_dmu")]
    pub f_dmu: f64,
    #[serde(rename = "F_dgamma")]
    pub f_dgamma: f64,
    #[serde(rename = "F_min")]
    pub f_min: f64,
    /// Sign of `det T`: `−1` marks an odd-parity ground state.
    pub det_sign: i8,
    /// Smallest singular value of `Z`, the single-particle gap proxy.
    pub min_singular: f64,
    pub singular_flag: bool,
}

struct Factor {
    t: DMatrix<f64>,
    sign: i8,
    min_singular: f64,
    is_singular: bool,
}

fn factor_at(size: usize, mu: f64, gamma: f64, tol_sing: Option<f64>) -> Result<Factor> {
    let zc = complete_graph(&CompleteGraphParams::new(mu, gamma, size))?;
    let f = orthogonal_factor(&zc, tol_sing);
    Ok(Factor { sign: sign_of(&f.t), t: f.t, min_singular: f.min_singular, is_singular: f.is_singular })
}

fn sign_of(t: &DMatrix<f64>) -> i8 {
    match log_abs_det(t).sign {
        0 => 1,
        s => s,
    }
}

/// Evaluates a single grid point.
pub fn evaluate_point(
    size: usize,
    mu: f64,
    gamma: f64,
    delta_mu: f64,
    delta_gamma: f64,
    tol_sing: Option<f64>,
) -> Result<SweepRecord> {
    let base = factor_at(size, mu, gamma, tol_sing)?;
    let toward_mu = factor_at(size, mu + delta_mu, gamma, tol_sing)?;
    let toward_gamma = factor_at(size, mu, gamma + delta_gamma, tol_sing)?;
    let f_dmu = fidelity_det_signed(&base.t, base.sign, &toward_mu.t, toward_mu.sign).value;
    let f_dgamma = fidelity_det_signed(&base.t, base.sign, &toward_gamma.t, toward_gamma.sign).value;
    Ok(SweepRecord {
        mu,
        gamma,
        f_dmu,
        f_dgamma,
        f_min: f_dmu.min(f_dgamma),
        det_sign: base.sign,
        min_singular: base.min_singular,
        singular_flag: base.is_singular,
    })
}

fn grid_points(mu: &GridAxis, gamma: &GridAxis) -> Vec<(f64, f64)> {
    let mus = mu.values();
    gamma.values().into_iter().flat_map(|g| mus.iter().map(move |&m| (m, g))).collect()
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Sweeps the grid; records are in row-major order with `γ` outer and `μ`
/// inner.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let points = grid_points(&cfg.mu, &cfg.gamma);
    pool(cfg.workers)?.install(|| {
        points
            .par_iter()
            .map(|&(mu, gamma)| {
                evaluate_point(cfg.size, mu, gamma, cfg.delta_mu, cfg.delta_gamma, cfg.tol_sing)
            })
            .collect()
    })
}

/// Sign of `det T` on the grid (γ outer, μ inner). Taken from an LU of `Z`
/// where that is well conditioned, otherwise from the polar factor itself.
pub fn det_sign_grid(size: usize, mu: &GridAxis, gamma: &GridAxis, workers: usize) -> Result<Vec<i8>> {
    if size < 2 || !size.is_multiple_of(2) {
        return Err(Error::OddSize(size));
    }
    mu.validate()?;
    gamma.validate()?;
    let points = grid_points(mu, gamma);
    pool(workers.max(1))?.install(|| {
        points
            .par_iter()
            .map(|&(m, g)| {
                let zc = complete_graph(&CompleteGraphParams::new(m, g, size))?;
                let (ld, pivot_ratio) = log_abs_det_pivots(zc.z());
                if ld.sign == 0 || pivot_ratio < LU_TRUST {
                    Ok(sign_of(&orthogonal_factor(&zc, None).t))
                } else {
                    Ok(ld.sign)
                }
            })
            .collect()
    })
}

const LU_TRUST: f64 = 1e-8;

/// Sign-flip locus of `det T` for a fixed size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub size: usize,
    pub mu: GridAxis,
    pub gamma: GridAxis,
    /// `(μ, γ)` midpoints, sorted by polar angle around the origin.
    pub points: Vec<(f64, f64)>,
}

/// Midpoints between horizontally or vertically adjacent grid points whose
/// `det T` signs differ.
pub fn first_order_boundary(size: usize, mu: &GridAxis, gamma: &GridAxis, workers: usize) -> Result<BoundaryTrace> {
    let signs = det_sign_grid(size, mu, gamma, workers)?;
    let (nm, ng) = (mu.steps, gamma.steps);
    let at = |i: usize, j: usize| signs[j * nm + i];
    let mut points = Vec::new();
    for j in 0..ng {
        for i in 0..nm {
            if i + 1 < nm && at(i, j) != at(i + 1, j) {
                points.push((0.5 * (mu.value(i) + mu.value(i + 1)), gamma.value(j)));
            }
            if j + 1 < ng && at(i, j) != at(i, j + 1) {
                points.push((mu.value(i), 0.5 * (gamma.value(j) + gamma.value(j + 1))));
            }
        }
    }
    points.sort_by(|a, b| {
        let (ta, tb) = (a.1.atan2(a.0), b.1.atan2(b.0));
        ta.total_cmp(&tb).then((a.0.hypot(a.1)).total_cmp(&b.0.hypot(b.1)))
    });
    Ok(BoundaryTrace { size, mu: *mu, gamma: *gamma, points })
}

pub const CSV_HEADER: &str = "mu,gamma,F_dmu,F_dgamma,F_min,det_sign,min_singular,singular_flag";

fn sci(x: f64) -> String {
    format!("{x:.12e}")
}

/// Serializes records. CSV numbers carry 13 significant digits in scientific
/// notation; JSON uses shortest round-trip representations.
pub fn render_records(records: &[SweepRecord], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(128 * (records.len() + 1));
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in records {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    sci(r.mu),
                    sci(r.gamma),
                    sci(r.f_dmu),
                    sci(r.f_dgamma),
                    sci(r.f_min),
                    r.det_sign,
                    sci(r.min_singular),
                    r.singular_flag
                );
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(records).map_err(|e| Error::Parse(e.to_string()))?;
            out.push('\n');
            Ok(out)
        }
    }
}

fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Writes records to `path`, or to standard output when `path` is `None`.
pub fn emit_records(records: &[SweepRecord], format: OutputFormat, path: Option<&Path>) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("no records to emit".into()));
    }
    write_text(&render_records(records, format)?, path)
}

/// Inverse of [`render_records`].
pub fn parse_records(text: &str, format: OutputFormat) -> Result<Vec<SweepRecord>> {
    match format {
        OutputFormat::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            reader
                .deserialize()
                .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
                .collect()
        }
        OutputFormat::Json => serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string())),
    }
}

/// Serializes a boundary trace. CSV starts with a `# size=L` metadata line.
pub fn render_boundary(trace: &BoundaryTrace, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => {
            let mut out = format!("# size={} mu={} gamma={}\nmu,gamma\n", trace.size, trace.mu, trace.gamma);
            for &(m, g) in &trace.points {
                let _ = writeln!(out, "{},{}", sci(m), sci(g));
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(trace).map_err(|e| Error::Parse(e.to_string()))?;
            out.push('\n');
            Ok(out)
        }
    }
}

pub fn emit_boundary(trace: &BoundaryTrace, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    write_text(&render_boundary(trace, format)?, path)
}

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

const ORACLE_TOL: f64 = 1e-8;
const ORACLE_POINTS: [(f64, f64); 8] = [
    (-1.7, 0.3),
    (-0.4, 0.5),
    (0.3, -0.2),
    (0.6, 1.4),
    (1.3, -0.8),
    (2.5, 2.0),
    (-2.2, -1.6),
    (0.9, 0.05),
];

/// Compares the polar-factor pipeline with brute-force Fock-space
/// diagonalization on the complete graph for `L = 2, 4, …, max_size`
/// (`max_size ≤ 8`): fidelities toward shifted couplings and the canonical
/// paired ground state.
pub fn oracle_suite(max_size: usize, delta: f64) -> Result<OracleReport> {
    let mut report = OracleReport::default();
    for size in (2..=max_size.min(8)).step_by(2) {
        let mut worst_fid: f64 = 0.0;
        let mut worst_state: f64 = 0.0;
        let mut used = 0;
        for &(mu, gamma) in &ORACLE_POINTS {
            let zc = complete_graph(&CompleteGraphParams::new(mu, gamma, size))?;
            let zs = complete_graph(&CompleteGraphParams::new(mu + delta, gamma - delta, size))?;
            let (pa, pb) = (polar_decompose_with(&zc, None), polar_decompose_with(&zs, None));
            let (ga, gb) = (
                fock_ground_state(&build_fock_hamiltonian(&zc)?),
                fock_ground_state(&build_fock_hamiltonian(&zs)?),
            );
            if pa.min_singular < 1e-6 || pb.min_singular < 1e-6 || ga.degenerate || gb.degenerate {
                continue;
            }
            used += 1;
            let f = fidelity_det(&pa.t, &pb.t)?.value;
            let exact = fock_overlap(&ga.vector, &gb.vector)?;
            worst_fid = worst_fid.max((f - exact).abs());
            let canonical = state_from_angles(&canonical_ground_state(&zc)?)?;
            worst_state = worst_state.max(1.0 - fock_overlap(&canonical, &ga.vector)?);
        }
        report.checks.push(OracleCheck {
            name: format!("fidelity L={size}"),
            passed: used > 0 && worst_fid < ORACLE_TOL,
            detail: format!("{used} pairs, max |F_det - F_fock| = {worst_fid:.3e}"),
        });
        report.checks.push(OracleCheck {
            name: format!("ground state L={size}"),
            passed: used > 0 && worst_state < ORACLE_TOL,
            detail: format!("{used} points, max 1 - overlap = {worst_state:.3e}"),
        });
    }
    Ok(report)
}
