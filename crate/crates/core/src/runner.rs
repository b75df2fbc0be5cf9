//! Drivers behind the three subcommands: CSV production for `simulate`
//! and `sweep`, the JSONL report for `verify`.
//!
//! Rows are computed in parallel but written in grid order with a fixed
//! `{:.16e}` float format, so two runs of the same configuration produce
//! byte-identical output regardless of thread count. Data goes to the
//! configured output; notes and failures go to standard error.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;

use crate::analysis::{entanglement_report, excitation_report, min_symplectic_eigenvalue};
use crate::config::{RunConfig, SweepParam};
use crate::fock::{observables, FockConfig, FockOracle};
use crate::isotropic::{iso_t_steady, IsotropicParams};
use crate::milburn::{CovarianceMatrix, MilburnPropagator};
use crate::model::SystemParams;
use crate::verify::{run_all, VerifyOptions};
use crate::Error;

/// Failure modes of a subcommand, keyed to the process exit codes:
/// verification failures exit 1, configuration and I/O problems exit 2,
/// physicality violations exit 3.
#[derive(Debug)]
pub enum RunError {
    Verification(String),
    Config(String),
    Unphysical { t: f64, detail: String },
    Io(io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Verification(_) => 1,
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Unphysical { .. } => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Verification(msg) => write!(f, "verification failed: {msg}"),
            RunError::Config(msg) => write!(f, "{msg}"),
            RunError::Unphysical { t, detail } => {
                write!(f, "physicality violation at t = {t}: {detail}")
            }
            RunError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

/// Maps a mid-row numeric error, attaching the grid point.
fn row_error(t: f64, e: Error) -> RunError {
    match e {
        Error::Unphysical { .. } => RunError::Unphysical {
            t,
            detail: e.to_string(),
        },
        other => RunError::Config(format!("at t = {t}: {other}")),
    }
}

/// Emitted rows must stay this physical; below it the run aborts with
/// the offending time.
const NU_MIN_FLOOR: f64 = 1.0 - 1e-6;

/// The documented column set, in order.
pub const BASE_COLUMNS: [&str; 20] = [
    "t", "N1", "N2", "N3", "Nab", "Nac", "Nbc", "Na_bc", "Nb_ac", "Nc_ab", "delta_a", "delta_b",
    "delta_c", "E_ab", "E_ac", "E_bc", "E_a_bc", "E_b_ac", "E_c_ab", "nu_min",
];

/// Header line. Sweeps get the swept parameter as an extra leading
/// column; `covariance` appends the 36 independent covariance entries
/// (upper-triangle real parts, then strict-upper imaginary parts,
/// 1-based mode indices).
pub fn csv_header(sweep: Option<SweepParam>, covariance: bool) -> String {
    let mut cols: Vec<String> = Vec::new();
    if let Some(p) = sweep {
        cols.push(p.name().to_string());
    }
    cols.extend(BASE_COLUMNS.iter().map(|s| s.to_string()));
    if covariance {
        for i in 1..=6 {
            for j in i..=6 {
                cols.push(format!("sigma_re_{i}_{j}"));
            }
        }
        for i in 1..=6 {
            for j in (i + 1)..=6 {
                cols.push(format!("sigma_im_{i}_{j}"));
            }
        }
    }
    cols.join(",")
}

fn write_row(out: &mut dyn Write, values: &[f64]) -> io::Result<()> {
    let mut line = String::with_capacity(values.len() * 26);
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(&format!("{v:.16e}"));
    }
    line.push('\n');
    out.write_all(line.as_bytes())
}

/// One computed grid point, ready to print.
struct PointOutcome {
    t: f64,
    nu_min: f64,
    row: Vec<f64>,
    /// First oracle-gate failure at this point, if any.
    failure: Option<String>,
    /// Exact-vs-Gaussian negativity gap seen by the Fock oracle here.
    e_gap: f64,
    /// Sweep annotation (deduplicated at print time).
    note: Option<String>,
}

/// The documented observable columns for one state.
fn row_from_sigma(
    t: f64,
    sigma: &CovarianceMatrix,
    covariance: bool,
) -> crate::Result<(Vec<f64>, f64)> {
    let exc = excitation_report(sigma)?;
    let ent = entanglement_report(sigma)?;
    let nu_min = min_symplectic_eigenvalue(sigma)?;
    let mut row = Vec::with_capacity(if covariance { 56 } else { 20 });
    row.push(t);
    row.extend_from_slice(&exc.n);
    row.extend_from_slice(&exc.pairwise);
    row.extend_from_slice(&exc.one_vs_two);
    row.extend_from_slice(&exc.delta);
    row.extend_from_slice(&ent.e_pair);
    row.extend_from_slice(&ent.e_one_vs_two);
    row.push(nu_min);
    if covariance {
        for i in 0..6 {
            for j in i..6 {
                row.push(sigma.mat[(i, j)].re);
            }
        }
        for i in 0..6 {
            for j in (i + 1)..6 {
                row.push(sigma.mat[(i, j)].im);
            }
        }
    }
    Ok((row, nu_min))
}

fn max_entry_gap(a: &crate::symplectic::Mat6, b: &crate::symplectic::Mat6) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Oracle gates applied to one computed point. Returns the first
/// failure (tolerances: series 1e-8, occupations 1e-4 relative with an
/// absolute floor of 1e-8 below 1e-4, covariance entries 1e-6) plus the
/// exact-negativity gap, which is a finite-Γ non-Gaussian effect and is
/// reported rather than gated.
fn oracle_gates(
    prop: &MilburnPropagator,
    fock: Option<&FockOracle>,
    series_epsilon: Option<f64>,
    cutoff: usize,
    t: f64,
    sigma: &CovarianceMatrix,
    row: &[f64],
) -> crate::Result<(Option<String>, f64)> {
    let p = prop.params();
    let mut failure = None;
    if let Some(eps) = series_epsilon {
        let (series, _) = prop.covariance_series(t, p.gamma, eps)?;
        let gap = max_entry_gap(&sigma.mat, &series.mat);
        if gap > 1e-8 {
            failure = Some(format!(
                "series oracle at t = {t}: covariance gap {gap:.3e} exceeds 1e-8"
            ));
        }
    }
    let mut e_gap: f64 = 0.0;
    if let Some(oracle) = fock {
        let rho = oracle.milburn_density(t, p.gamma)?;
        let obs = observables(&rho, cutoff);
        for j in 0..3 {
            let pipe = row[1 + j];
            let gap = (obs.n[j] - pipe).abs();
            let ok = if pipe.abs() < 1e-4 {
                gap <= 1e-8
            } else {
                gap / pipe.abs() <= 1e-4
            };
            if !ok && failure.is_none() {
                failure = Some(format!(
                    "fock oracle at t = {t}: N{} gap {gap:.3e} (pipeline {pipe:.6e})",
                    j + 1
                ));
            }
        }
        let cov_gap = max_entry_gap(&obs.covariance, &sigma.mat);
        if cov_gap > 1e-6 && failure.is_none() {
            failure = Some(format!(
                "fock oracle at t = {t}: covariance gap {cov_gap:.3e} exceeds 1e-6"
            ));
        }
        for slot in 0..3 {
            e_gap = e_gap.max((obs.e_pair[slot] - row[13 + slot]).abs());
        }
    }
    Ok((failure, e_gap))
}

fn resonance_note(omega: &[f64; 3]) -> Option<String> {
    let gap = (omega[0] + omega[2] - 4.0 * omega[1]).abs();
    (gap <= 1e-9).then(|| {
        format!(
            "note: omega1 + omega3 = 4 omega2 within 1e-9 (residual {gap:.1e}); \
             counter-rotating exchange through the central oscillator is resonant"
        )
    })
}

/// Builds the Fock oracle when requested.
fn fock_oracle_for(cfg: &RunConfig, p: SystemParams) -> crate::Result<Option<FockOracle>> {
    if !cfg.fock_oracle {
        return Ok(None);
    }
    Ok(Some(FockOracle::new(
        p,
        FockConfig::new(cfg.fock_cutoff, 1e-12, 1e-2)?,
    )?))
}

/// Series-oracle epsilon, unless disabled or meaningless (the
/// Schrödinger limit has no decoherence series).
fn series_epsilon_for(cfg: &RunConfig) -> Option<f64> {
    (cfg.series_oracle && !cfg.schrodinger_limit).then_some(cfg.series_epsilon)
}

/// Evolves one parameter set over the configured time grid and writes
/// one CSV row per point.
pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> RunResult<()> {
    let p = cfg.params()?;
    let prop = MilburnPropagator::new(p)?;
    if let Some(note) = resonance_note(&p.omega) {
        eprintln!("{note}");
    }
    if cfg.series_oracle && cfg.schrodinger_limit {
        eprintln!("note: series oracle skipped (schrodinger_limit set)");
    }
    let fock = fock_oracle_for(cfg, p)?;
    let series_eps = series_epsilon_for(cfg);
    let covariance = cfg.outputs.covariance;
    writeln!(out, "{}", csv_header(None, covariance))?;
    let outcomes: Vec<RunResult<PointOutcome>> = cfg
        .time_values()
        .par_iter()
        .map(|&t| {
            let sigma = prop.evolve(t).map_err(|e| row_error(t, e))?;
            let (row, nu_min) =
                row_from_sigma(t, &sigma, covariance).map_err(|e| row_error(t, e))?;
            let (failure, e_gap) = oracle_gates(
                &prop,
                fock.as_ref(),
                series_eps,
                cfg.fock_cutoff,
                t,
                &sigma,
                &row,
            )
            .map_err(|e| row_error(t, e))?;
            Ok(PointOutcome {
                t,
                nu_min,
                row,
                failure,
                e_gap,
                note: None,
            })
        })
        .collect();
    finish_rows(out, outcomes, fock.is_some())
}

/// Steady-state sampling time for one sweep point: ten relaxation times
/// for the fully symmetric configuration (which has a closed-form rate),
/// the end of the configured grid otherwise.
fn steady_target(cfg: &RunConfig, p: &SystemParams) -> (f64, Option<String>) {
    let iso = p.omega[0] == p.omega[1]
        && p.omega[1] == p.omega[2]
        && p.coupling[0] == p.coupling[1]
        && p.coupling[1] == p.coupling[2];
    if !iso {
        return (cfg.t_end, None);
    }
    if p.schrodinger_limit {
        return (
            cfg.t_end,
            Some("note: no relaxation in the schrodinger limit; sampling at t_end".into()),
        );
    }
    match IsotropicParams::new(p.omega[0], p.coupling[0], p.gamma) {
        Ok(iso_p) => {
            let ts = iso_t_steady(&iso_p);
            if ts.is_finite() {
                (10.0 * ts, None)
            } else {
                (
                    cfg.t_end,
                    Some(
                        "note: an undamped normal branch gives no finite relaxation time; \
                         sampling at t_end"
                            .into(),
                    ),
                )
            }
        }
        Err(_) => (cfg.t_end, None),
    }
}

enum SweptPoint {
    Done(PointOutcome),
    Skipped(String),
}

/// Varies one parameter over the sweep grid and writes one steady-time
/// CSV row per value, the swept value leading. Points outside the
/// bound-state manifold are skipped and reported.
pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> RunResult<()> {
    let param = cfg
        .sweep_param
        .ok_or_else(|| RunError::Config("config: sweep requires sweep_param".into()))?;
    let covariance = cfg.outputs.covariance;
    writeln!(out, "{}", csv_header(Some(param), covariance))?;
    if cfg.series_oracle && cfg.schrodinger_limit {
        eprintln!("note: series oracle skipped (schrodinger_limit set)");
    }
    let outcomes: Vec<RunResult<SweptPoint>> = cfg
        .sweep_values()
        .par_iter()
        .map(|&v| {
            let p = match cfg.params_at(param, v) {
                Ok(p) => p,
                Err(e) => {
                    return Ok(SweptPoint::Skipped(format!(
                        "skipping {} = {v}: {e}",
                        param.name()
                    )));
                }
            };
            let prop = match MilburnPropagator::new(p) {
                Ok(prop) => prop,
                Err(e) => {
                    return Ok(SweptPoint::Skipped(format!(
                        "skipping {} = {v}: {e}",
                        param.name()
                    )));
                }
            };
            let (t, mut note) = steady_target(cfg, &p);
            if note.is_none() {
                note = resonance_note(&p.omega);
            }
            let sigma = prop.evolve(t).map_err(|e| row_error(t, e))?;
            let (mut row, nu_min) =
                row_from_sigma(t, &sigma, covariance).map_err(|e| row_error(t, e))?;
            let fock = fock_oracle_for(cfg, p).map_err(|e| row_error(t, e))?;
            let (failure, e_gap) = oracle_gates(
                &prop,
                fock.as_ref(),
                series_epsilon_for(cfg),
                cfg.fock_cutoff,
                t,
                &sigma,
                &row,
            )
            .map_err(|e| row_error(t, e))?;
            row.insert(0, v);
            Ok(SweptPoint::Done(PointOutcome {
                t,
                nu_min,
                row,
                failure,
                e_gap,
                note,
            }))
        })
        .collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut seen_notes: Vec<String> = Vec::new();
    for outcome in outcomes {
        match outcome? {
            SweptPoint::Done(mut done) => {
                if let Some(note) = done.note.take() {
                    if !seen_notes.contains(&note) {
                        eprintln!("{note}");
                        seen_notes.push(note);
                    }
                }
                rows.push(Ok(done));
            }
            SweptPoint::Skipped(msg) => {
                eprintln!("{msg}");
            }
        }
    }
    finish_rows(out, rows, cfg.fock_oracle)
}

/// Writes computed rows in order, enforcing the physicality floor and
/// surfacing the first oracle failure after the data is out.
fn finish_rows(
    out: &mut dyn Write,
    outcomes: Vec<RunResult<PointOutcome>>,
    fock_active: bool,
) -> RunResult<()> {
    let mut first_failure: Option<String> = None;
    let mut e_gap_max: f64 = 0.0;
    for outcome in outcomes {
        let point = outcome?;
        write_row(out, &point.row)?;
        if point.nu_min < NU_MIN_FLOOR {
            out.flush()?;
            return Err(RunError::Unphysical {
                t: point.t,
                detail: format!("nu_min = {:.12e}", point.nu_min),
            });
        }
        if first_failure.is_none() {
            first_failure = point.failure;
        }
        e_gap_max = e_gap_max.max(point.e_gap);
    }
    out.flush()?;
    if fock_active {
        eprintln!(
            "note: largest exact-vs-Gaussian negativity gap {e_gap_max:.3e} \
             (finite-gamma non-Gaussianity, not gated)"
        );
    }
    match first_failure {
        Some(msg) => Err(RunError::Verification(msg)),
        None => Ok(()),
    }
}

/// Runs every verification suite and writes one JSON line per suite.
pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> RunResult<()> {
    let results = run_all(&VerifyOptions::from(cfg));
    for r in &results {
        writeln!(out, "{}", r.jsonl())?;
    }
    out.flush()?;
    match results.iter().find(|r| !r.pass) {
        Some(first) => Err(RunError::Verification(format!("suite {}", first.name))),
        None => Ok(()),
    }
}

/// Opens the configured data destination (file, or standard output).
pub fn open_output(cfg: &RunConfig) -> RunResult<Box<dyn Write>> {
    match &cfg.out_path {
        Some(path) => Ok(Box::new(BufWriter::new(File::create(path)?))),
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}
