//! Command-line runner: one subcommand per experiment, JSON config in, CSV/JSON artifacts out.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::aqec::{median_drop, run_all, summarize, write_ensemble_csv, write_records_csv};
use crate::codes::{binomial_words, cat_words};
use crate::config::{NamedState, RunConfig};
use crate::engine::{read_state_json, write_state_json, write_trajectory_csv, Drive, RunRecord};
use crate::error::{Error, Result};
use crate::fockspace::{fock, projector, HilbertConfig, StateVector};
use crate::gates::{GateSequence, PeriodDrive};
use crate::ncft::{default_cat_alpha, drive_chart, NcftSpec, Scenario};
use crate::phase_space::{q_function, wigner, GridSpec};
use crate::protocols::{self, TransformParams};

#[derive(Parser, Debug)]
#[command(name = "qlattice", version, about = "Bosonic code-state engineering with quantum lattice gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Adiabatic preparation of one binomial superposition from the vacuum
    Prepare(CommonArgs),
    /// Embedding of the binomial code space and its relative phase
    Embed(CommonArgs),
    /// Binomial → cat code-space transformation
    Transform(CommonArgs),
    /// Parity-measured cat code under photon loss
    Aqec(CommonArgs),
    /// Lattice-gate schedule of a drive, without simulating
    Decompose(CommonArgs),
    /// Wigner and Q grids of named or saved states
    Wigner(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// comma-separated stroboscopic steps
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<usize>>,
}

impl Command {
    fn parts(&self) -> (&'static str, &CommonArgs) {
        match self {
            Command::Prepare(a) => ("prepare", a),
            Command::Embed(a) => ("embed", a),
            Command::Transform(a) => ("transform", a),
            Command::Aqec(a) => ("aqec", a),
            Command::Decompose(a) => ("decompose", a),
            Command::Wigner(a) => ("wigner", a),
        }
    }
}

/// Loads the config, applies command-line overrides and fills the manifest fields.
pub fn resolve(name: &str, args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.command = Some(name.to_string());
    if let Some(s) = args.seed {
        cfg.seed = Some(s);
    }
    if let Some(s) = &args.snapshots {
        cfg.snapshots = s.clone();
    }
    if let (Some(seed), Some(a)) = (cfg.seed, cfg.aqec.as_mut()) {
        a.seed = seed;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<()> {
    let (name, args) = cli.command.parts();
    let cfg = resolve(name, args)?;
    let out = &args.out;
    std::fs::create_dir_all(out)?;
    match name {
        "prepare" => cmd_prepare(&cfg, out)?,
        "embed" => cmd_embed(&cfg, out)?,
        "transform" => cmd_transform(&cfg, out)?,
        "aqec" => cmd_aqec(&cfg, out)?,
        "decompose" => cmd_decompose(&cfg, out)?,
        _ => cmd_wigner(&cfg, out)?,
    }
    std::fs::write(out.join("manifest.json"), cfg.to_json()?)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(())
}

fn write_chart(cfg: &RunConfig, spec: &NcftSpec, omega0: f64, out: &Path) -> Result<()> {
    let g = &cfg.chart;
    drive_chart(spec, g.n_k, g.n_t, g.k_max, omega0)?.write_csv(out, "chart")?;
    Ok(())
}

#[derive(Serialize)]
struct PrepareSummary {
    final_infidelity: f64,
    periods: usize,
}

pub fn cmd_prepare(cfg: &RunConfig, out: &Path) -> Result<()> {
    let p = cfg.section("prepare", &cfg.prepare)?;
    let spec = NcftSpec::new(Scenario::SingleState { c0: p.c0, c1: p.c1 }, p.gap, cfg.hilbert.lambda)?;
    p.wigner_grid.validate()?;
    write_chart(cfg, &spec, 1.0, out)?;
    let rec = protocols::prepare(&cfg.hilbert, &cfg.chart, p.c0, p.c1, p.gap, &p.ramp, p.backend, &cfg.snapshots)?;
    write_trajectory_csv(&out.join("trajectory.csv"), &rec.rows)?;
    write_state_json(&out.join("final_state.json"), &rec.final_state)?;
    for (step, psi) in &rec.snapshots {
        wigner(&projector(psi), &p.wigner_grid, cfg.hilbert.lambda)?.write(out, &format!("wigner_step{step}"))?;
    }
    write_json(
        &out.join("summary.json"),
        &PrepareSummary {
            final_infidelity: rec.final_infidelity(),
            periods: rec.rows.len().saturating_sub(1),
        },
    )
}

#[derive(Serialize)]
struct PhaseRunSummary {
    c0: [f64; 2],
    c1: [f64; 2],
    dphi: f64,
    dphi_over_pi: f64,
    infidelity_updated: f64,
    infidelity_plain: f64,
}

#[derive(Serialize)]
struct WordsSummary {
    word0_infidelity: f64,
    word1_infidelity: f64,
    superpositions: Vec<PhaseRunSummary>,
}

fn summarize_runs(w0: &RunRecord, w1: &RunRecord, sups: &[protocols::SuperpositionRun]) -> WordsSummary {
    WordsSummary {
        word0_infidelity: w0.final_infidelity(),
        word1_infidelity: w1.final_infidelity(),
        superpositions: sups
            .iter()
            .map(|s| PhaseRunSummary {
                c0: [s.c0.re, s.c0.im],
                c1: [s.c1.re, s.c1.im],
                dphi: s.dphi,
                dphi_over_pi: s.dphi / PI,
                infidelity_updated: 1.0 - s.fidelity_updated,
                infidelity_plain: 1.0 - s.fidelity_plain,
            })
            .collect(),
    }
}

fn write_runs(out: &Path, w0: &RunRecord, w1: &RunRecord, sups: &[protocols::SuperpositionRun]) -> Result<()> {
    write_trajectory_csv(&out.join("trajectory_word0.csv"), &w0.rows)?;
    write_trajectory_csv(&out.join("trajectory_word1.csv"), &w1.rows)?;
    for (i, s) in sups.iter().enumerate() {
        write_trajectory_csv(&out.join(format!("trajectory_superposition{i}.csv")), &s.record.rows)?;
        write_state_json(&out.join(format!("final_state_superposition{i}.json")), &s.record.final_state)?;
    }
    write_state_json(&out.join("final_state_word0.json"), &w0.final_state)?;
    write_state_json(&out.join("final_state_word1.json"), &w1.final_state)
}

pub fn cmd_embed(cfg: &RunConfig, out: &Path) -> Result<()> {
    let e = cfg.section("embed", &cfg.embed)?;
    let spec = NcftSpec::new(Scenario::EmbedBinomial, e.gap, cfg.hilbert.lambda)?;
    write_chart(cfg, &spec, 1.0, out)?;
    let pairs: Vec<_> = e.pairs.iter().map(|p| (p[0], p[1])).collect();
    let rep = protocols::embed(&cfg.hilbert, &cfg.chart, e.gap, &e.ramp, e.backend, &pairs)?;
    write_runs(out, &rep.word0, &rep.word1, &rep.superpositions)?;
    write_json(&out.join("summary.json"), &summarize_runs(&rep.word0, &rep.word1, &rep.superpositions))
}

pub fn cmd_transform(cfg: &RunConfig, out: &Path) -> Result<()> {
    let t = cfg.section("transform", &cfg.transform)?;
    let params = TransformParams {
        periods: t.periods,
        beta: t.beta,
        gap: t.gap,
        alpha: t.alpha,
    };
    let spec = NcftSpec::new(Scenario::Transform { h: 0.0, alpha: t.alpha }, t.gap, cfg.hilbert.lambda)?;
    write_chart(cfg, &spec, 1.0, out)?;
    let pairs: Vec<_> = t.pairs.iter().map(|p| (p[0], p[1])).collect();
    let rep = protocols::transform(&cfg.hilbert, &cfg.chart, &params, t.backend, &pairs)?;
    write_runs(out, &rep.word0, &rep.word1, &rep.superpositions)?;
    write_json(&out.join("summary.json"), &summarize_runs(&rep.word0, &rep.word1, &rep.superpositions))
}

#[derive(Serialize)]
struct AqecSummary {
    n_traj: usize,
    final_mean_infidelity: f64,
    final_standard_error: f64,
    median_drop: f64,
}

pub fn cmd_aqec(cfg: &RunConfig, out: &Path) -> Result<()> {
    let a = cfg.section("aqec", &cfg.aqec)?;
    let records = run_all(&cfg.hilbert, a)?;
    let series = summarize(&records);
    write_ensemble_csv(&out.join("aqec_ensemble.csv"), &series.post)?;
    write_ensemble_csv(&out.join("aqec_pre_measurement.csv"), &series.pre)?;
    write_records_csv(&out.join("aqec_trajectories.csv"), &records)?;
    let last = series.post.len() - 1;
    write_json(
        &out.join("summary.json"),
        &AqecSummary {
            n_traj: series.n_traj,
            final_mean_infidelity: series.post[last].mean_infidelity,
            final_standard_error: series.standard_error(last),
            median_drop: median_drop(&records),
        },
    )
}

/// Per-period (β, Ω) samples of a drive, times advanced by 2π/Ω.
pub fn period_drives(drive: &Drive, periods: usize) -> Vec<PeriodDrive> {
    let mut t = 0.0;
    (0..periods)
        .map(|s| {
            let (beta, omega) = drive.eval(t);
            t += 2.0 * PI / omega;
            PeriodDrive {
                floquet_period: s,
                beta,
                omega,
            }
        })
        .collect()
}

pub fn cmd_decompose(cfg: &RunConfig, out: &Path) -> Result<()> {
    let d = cfg.section("decompose", &cfg.decompose)?;
    let spec = NcftSpec::new(d.target.clone(), d.gap, cfg.hilbert.lambda)?;
    let g = &cfg.chart;
    let chart = drive_chart(&spec, g.n_k, g.n_t, g.k_max, 1.0)?;
    chart.write_csv(out, "chart")?;
    let drive = match &d.ramp {
        Some(r) => {
            let s = r.schedule();
            s.validate()?;
            Drive::Ramp(s)
        }
        None => Drive::Constant {
            beta: d.beta,
            omega0: 1.0,
            tf: d.periods.unwrap_or(1) as f64 * 2.0 * PI,
        },
    };
    let periods = d.periods.unwrap_or_else(|| drive.periods());
    let seq = GateSequence::compile(&chart, &period_drives(&drive, periods))?;
    seq.write_json(&out.join("gate_sequence.json"))
}

fn named_state(cfg: &HilbertConfig, name: NamedState, alpha: Option<f64>) -> Result<StateVector> {
    let alpha = alpha.unwrap_or_else(default_cat_alpha);
    let err = |v: &Option<StateVector>| v.clone().ok_or_else(|| Error::Config("cat error words unavailable".into()));
    Ok(match name {
        NamedState::Vacuum => fock(cfg, 0),
        NamedState::BinomialZero => binomial_words(cfg)?.zero_c,
        NamedState::BinomialOne => binomial_words(cfg)?.one_c,
        NamedState::CatZero => cat_words(cfg, alpha)?.zero_c,
        NamedState::CatOne => cat_words(cfg, alpha)?.one_c,
        NamedState::CatZeroError => err(&cat_words(cfg, alpha)?.zero_e)?,
        NamedState::CatOneError => err(&cat_words(cfg, alpha)?.one_e)?,
    })
}

fn pad_state(psi: &StateVector, dim: usize) -> Result<StateVector> {
    if psi.len() > dim {
        return Err(Error::Config(format!("state has {} amplitudes but dim = {dim}", psi.len())));
    }
    Ok(StateVector::from_fn(dim, |i, _| if i < psi.len() { psi[i] } else { Default::default() }))
}

fn write_grids(rho: &crate::fockspace::DensityMatrix, grid: &GridSpec, lambda: f64, q: bool, out: &Path, label: &str) -> Result<()> {
    wigner(rho, grid, lambda)?.write(out, &format!("wigner_{label}"))?;
    if q {
        q_function(rho, grid, lambda)?.write(out, &format!("q_{label}"))?;
    }
    Ok(())
}

pub fn cmd_wigner(cfg: &RunConfig, out: &Path) -> Result<()> {
    let w = cfg.section("wigner", &cfg.wigner)?;
    w.grid.validate()?;
    let lambda = cfg.hilbert.lambda;
    for name in &w.states {
        let psi = named_state(&cfg.hilbert, *name, w.alpha)?;
        write_grids(&projector(&psi), &w.grid, lambda, w.q, out, name.label())?;
    }
    for (i, path) in w.state_files.iter().enumerate() {
        let psi = read_state_json(path).map_err(|e| Error::Config(format!("state file {}: {e}", path.display())))?;
        let psi = pad_state(&psi, cfg.hilbert.dim)?;
        write_grids(&projector(&psi), &w.grid, lambda, w.q, out, &format!("file{i}"))?;
    }
    Ok(())
}
