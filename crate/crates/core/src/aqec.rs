//! Autonomous error correction of four-legged cat states under photon loss with stroboscopic
//! parity measurements and cyclic target updates.

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{cat_words, CodeWordSet};
use crate::engine::{build_target, ChartGrid};
use crate::error::{Error, Result};
use crate::fockspace::{expm_hermitian, DensityMatrix, HilbertConfig, Operator, StateVector, C64};
use crate::gates::{FloquetDriver, RowProfile};
use crate::ncft::{default_cat_alpha, drive_chart, NcftSpec, Scenario};
use crate::special::ln_factorial;

pub const TRACE_TOL: f64 = 1e-8;
pub const MIN_OUTCOME_PROB: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protection {
    None,
    IdealTarget,
    Drive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AqecConfig {
    /// single-photon loss rate, units of ω₀
    pub kappa: f64,
    /// drive strength β, units of ω₀
    pub beta: f64,
    /// drive periods between parity measurements
    pub measure_every: usize,
    pub measurements: usize,
    pub n_traj: usize,
    pub seed: u64,
    pub protection: Protection,
    /// Δ of the ideal protection Hamiltonian
    pub ideal_gap: f64,
    /// Δ used to synthesize the drive chart
    pub drive_gap: f64,
    pub alpha: Option<f64>,
    pub chart: ChartGrid,
    /// Strang splitting chunks per drive period
    pub chunks_per_period: usize,
    /// initial logical coefficients on |0̄_c⟩, |1̄_c⟩
    pub c0: C64,
    pub c1: C64,
}

impl Default for AqecConfig {
    fn default() -> Self {
        Self {
            kappa: 1e-3,
            beta: 0.02,
            measure_every: 5,
            measurements: 20,
            n_traj: 200,
            seed: 7,
            protection: Protection::Drive,
            ideal_gap: 0.2,
            drive_gap: 0.2,
            alpha: None,
            chart: ChartGrid {
                n_k: 20,
                n_t: 100,
                k_max: 14.0,
            },
            chunks_per_period: 10,
            c0: C64::new((5.0f64 / 8.0).sqrt(), 0.0),
            c1: C64::new((3.0f64 / 8.0).sqrt(), 0.0),
        }
    }
}

impl AqecConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::Config(format!("aqec.kappa must be >= 0, got {}", self.kappa)));
        }
        if self.measure_every < 1 {
            return Err(Error::Config("aqec.measure_every must be >= 1".into()));
        }
        if self.n_traj < 1 {
            return Err(Error::Config("aqec.n_traj must be >= 1".into()));
        }
        if self.chunks_per_period < 1 || self.chunks_per_period > self.chart.n_t + 1 {
            return Err(Error::Config(format!(
                "aqec.chunks_per_period must lie in 1..={}",
                self.chart.n_t + 1
            )));
        }
        let n = self.c0.norm_sqr() + self.c1.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("aqec initial coefficients not normalized ({n})")));
        }
        if !(self.ideal_gap > 0.0 && self.drive_gap > 0.0) {
            return Err(Error::Config("aqec gaps must be positive".into()));
        }
        self.chart.validate()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or_else(default_cat_alpha)
    }
}

/// Position in the four-step target sequence driven by single-photon losses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetCycle {
    pub index: usize,
    pub c1: C64,
    pub c2: C64,
}

impl TargetCycle {
    pub fn new(c1: C64, c2: C64) -> Self {
        Self { index: 0, c1, c2 }
    }

    pub fn advance(&mut self) {
        self.index = (self.index + 1) % 4;
    }

    /// c1|0̄_c⟩+c2|1̄_c⟩ → c1|1̄_e⟩+c2|0̄_e⟩ → c1|1̄_c⟩+c2|0̄_c⟩ → c1|0̄_e⟩+c2|1̄_e⟩
    pub fn state(&self, w: &CodeWordSet) -> StateVector {
        let ze = w.zero_e.as_ref().expect("cat words carry error words");
        let oe = w.one_e.as_ref().expect("cat words carry error words");
        let (a, b) = match self.index {
            0 => (&w.zero_c, &w.one_c),
            1 => (oe, ze),
            2 => (&w.one_c, &w.zero_c),
            _ => (ze, oe),
        };
        a * self.c1 + b * self.c2
    }
}

/// Amplitude damping over a duration with survival e^{−κt}, exact on the truncated space.
#[derive(Clone, Debug)]
pub struct LossChannel {
    /// coef[l][(i, j)] multiplies ρ_{i+l, j+l}
    coef: Vec<nalgebra::DMatrix<f64>>,
}

impl LossChannel {
    pub fn new(dim: usize, kappa: f64, t: f64) -> Self {
        let q = (-kappa * t).exp();
        let p = 1.0 - q;
        let lmax = if p == 0.0 { 0 } else { dim - 1 };
        let ln_binom = |n: usize, l: usize| ln_factorial(n) - ln_factorial(l) - ln_factorial(n - l);
        let coef = (0..=lmax)
            .map(|l| {
                nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
                    if i + l >= dim || j + l >= dim {
                        return 0.0;
                    }
                    let lp = if l == 0 { 0.0 } else { l as f64 * p.ln() };
                    let lq = if i + j == 0 { 0.0 } else { 0.5 * (i + j) as f64 * q.ln() };
                    (0.5 * (ln_binom(i + l, l) + ln_binom(j + l, l)) + lp + lq).exp()
                })
            })
            .collect();
        Self { coef }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let dim = rho.nrows();
        DensityMatrix::from_fn(dim, dim, |i, j| {
            let mut s = C64::new(0.0, 0.0);
            for (l, c) in self.coef.iter().enumerate() {
                if i + l >= dim || j + l >= dim {
                    break;
                }
                s += rho[(i + l, j + l)] * c[(i, j)];
            }
            s
        })
    }
}

/// Piecewise propagation of dρ/dt = −(i/λ)[Ĥ_EC, ρ] + κL[â]ρ over whole drive periods.
///
/// Each period is split into chunks of consecutive chart rows; every chunk applies its exact
/// unitary between two half-duration loss channels (Strang splitting).
#[derive(Clone, Debug)]
pub struct LindbladPropagator {
    pub dim: usize,
    pub kappa: f64,
    chunks: Vec<(Option<Operator>, LossChannel)>,
}

impl LindbladPropagator {
    pub fn new(cfg: &HilbertConfig, ac: &AqecConfig) -> Result<Self> {
        ac.validate()?;
        let dim = cfg.dim;
        let n_t = ac.chart.n_t;
        let period = 2.0 * PI;
        let dt = period / n_t as f64;
        // chunk boundaries in row indices; rows 0 and M carry half weight
        let nc = ac.chunks_per_period;
        let bounds: Vec<usize> = (0..=nc).map(|c| (c * (n_t + 1)) / nc).collect();
        let dur = |a: usize, b: usize| -> f64 { (a..b).map(|m| crate::gates::row_weight(m, n_t) * dt).sum() };
        let unitaries: Vec<Option<Operator>> = match ac.protection {
            Protection::None => vec![None; nc],
            Protection::IdealTarget => {
                let spec = NcftSpec::new(Scenario::AqecCat { alpha: ac.alpha }, ac.ideal_gap, cfg.lambda)?;
                let h = build_target(&spec, cfg)?;
                bounds
                    .windows(2)
                    .map(|w| Some(expm_hermitian(&h, dur(w[0], w[1]) / cfg.lambda)))
                    .collect()
            }
            Protection::Drive => {
                let spec = NcftSpec::new(Scenario::AqecCat { alpha: ac.alpha }, ac.drive_gap, cfg.lambda)?;
                let chart = drive_chart(&spec, ac.chart.n_k, n_t, ac.chart.k_max, 1.0)?;
                let drv = FloquetDriver::new(cfg, 1.0);
                let prof = RowProfile::new(&chart, &drv.basis);
                let rows: Vec<Operator> = (0..=n_t)
                    .into_par_iter()
                    .map(|m| drv.row_unitary(&prof, m, ac.beta, 1.0))
                    .collect();
                bounds
                    .windows(2)
                    .map(|w| {
                        let mut u = Operator::identity(dim, dim);
                        for r in &rows[w[0]..w[1]] {
                            u = r * u;
                        }
                        Some(u)
                    })
                    .collect()
            }
        };
        let chunks = bounds
            .windows(2)
            .zip(unitaries)
            .map(|(w, u)| (u, LossChannel::new(dim, ac.kappa, 0.5 * dur(w[0], w[1]))))
            .collect();
        Ok(Self {
            dim,
            kappa: ac.kappa,
            chunks,
        })
    }

    pub fn period(&self, rho: &DensityMatrix) -> DensityMatrix {
        let mut r = rho.clone();
        for (u, half) in &self.chunks {
            r = half.apply(&r);
            if let Some(u) = u {
                r = u * r * u.adjoint();
            }
            r = half.apply(&r);
        }
        r
    }

    /// Propagates over an integer number of periods.
    pub fn evolve(&self, rho: &DensityMatrix, periods: usize) -> Result<DensityMatrix> {
        let mut r = rho.clone();
        for _ in 0..periods {
            r = self.period(&r);
        }
        let r = (&r + r.adjoint()) * C64::new(0.5, 0.0);
        let tr = r.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL || !tr.is_finite() {
            return Err(Error::TraceDrift { trace: tr });
        }
        Ok(r)
    }
}

/// Total weight of the Fock levels of parity m.
pub fn parity_probs(rho: &DensityMatrix) -> (f64, f64) {
    let mut p = [0.0, 0.0];
    for n in 0..rho.nrows() {
        p[n % 2] += rho[(n, n)].re;
    }
    let tr = p[0] + p[1];
    (p[0] / tr, p[1] / tr)
}

/// Π̂_m ρ Π̂_m / P_m.
pub fn project(rho: &DensityMatrix, m: usize) -> Result<DensityMatrix> {
    let (p0, p1) = parity_probs(rho);
    let pm = if m == 0 { p0 } else { p1 } * rho.trace().re;
    if pm <= MIN_OUTCOME_PROB {
        return Err(Error::ImprobableOutcome { outcome: m, prob: pm });
    }
    let dim = rho.nrows();
    Ok(DensityMatrix::from_fn(dim, dim, |i, j| {
        if i % 2 == m && j % 2 == m {
            rho[(i, j)] / pm
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// 1 − √⟨ψ_T|ρ|ψ_T⟩, the Uhlmann infidelity against a pure target.
pub fn infidelity_pure(rho: &DensityMatrix, target: &StateVector) -> f64 {
    let f = target.dotc(&(rho * target)).re.max(0.0).sqrt();
    1.0 - f.min(1.0)
}

/// Outcome from a uniform draw ε: even if ε < P0, odd otherwise.
pub fn select_outcome(eps: f64, p0: f64) -> usize {
    if eps < p0 {
        0
    } else {
        1
    }
}

/// Per-trajectory stream from a master seed.
pub fn trajectory_rng(seed: u64, traj: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(traj as u64);
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub measurement_index: usize,
    /// in drive periods
    pub time: f64,
    pub infidelity_pre: f64,
    pub infidelity_post: f64,
    pub p1: f64,
    pub outcome: usize,
    pub cycle_index: usize,
}

/// Cat words and initial state of an AQEC run.
pub fn cat_setup(cfg: &HilbertConfig, ac: &AqecConfig) -> Result<(CodeWordSet, DensityMatrix)> {
    let w = cat_words(cfg, ac.alpha())?;
    let psi = w.logical(ac.c0, ac.c1);
    Ok((w.clone(), &psi * psi.adjoint()))
}

struct Branch {
    rho: DensityMatrix,
    cycle: TargetCycle,
    last: usize,
    members: Vec<usize>,
}

/// Measurement series of every trajectory, index [traj][measurement].
pub fn run_all(cfg: &HilbertConfig, ac: &AqecConfig) -> Result<Vec<Vec<MeasurementRecord>>> {
    let prop = LindbladPropagator::new(cfg, ac)?;
    let (words, rho0) = cat_setup(cfg, ac)?;
    let mut rngs: Vec<ChaCha8Rng> = (0..ac.n_traj).map(|i| trajectory_rng(ac.seed, i)).collect();
    let mut out: Vec<Vec<MeasurementRecord>> = vec![Vec::with_capacity(ac.measurements); ac.n_traj];
    let mut branches = vec![Branch {
        rho: rho0,
        cycle: TargetCycle::new(ac.c0, ac.c1),
        last: 0,
        members: (0..ac.n_traj).collect(),
    }];
    for j in 1..=ac.measurements {
        let evolved: Vec<Result<DensityMatrix>> =
            branches.par_iter().map(|b| prop.evolve(&b.rho, ac.measure_every)).collect();
        let mut next = Vec::new();
        for (b, rho) in branches.into_iter().zip(evolved) {
            let rho = rho?;
            let (p0, p1) = parity_probs(&rho);
            let pre = infidelity_pure(&rho, &b.cycle.state(&words));
            let mut split: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
            for &t in &b.members {
                let eps: f64 = rngs[t].gen();
                split[select_outcome(eps, p0)].push(t);
            }
            for (m, members) in split.into_iter().enumerate() {
                if members.is_empty() {
                    continue;
                }
                let projected = project(&rho, m)?;
                let mut cycle = b.cycle;
                if m != b.last {
                    cycle.advance();
                }
                let post = infidelity_pure(&projected, &cycle.state(&words));
                for &t in &members {
                    out[t].push(MeasurementRecord {
                        measurement_index: j,
                        time: (j * ac.measure_every) as f64,
                        infidelity_pre: pre,
                        infidelity_post: post,
                        p1,
                        outcome: m,
                        cycle_index: cycle.index,
                    });
                }
                next.push(Branch {
                    rho: projected,
                    cycle,
                    last: m,
                    members,
                });
            }
        }
        branches = next;
    }
    Ok(out)
}

/// One trajectory with its own random stream.
pub fn run_trajectory(
    cfg: &HilbertConfig,
    ac: &AqecConfig,
    initial: &StateVector,
    rng: &mut impl Rng,
) -> Result<Vec<MeasurementRecord>> {
    let prop = LindbladPropagator::new(cfg, ac)?;
    let words = cat_words(cfg, ac.alpha())?;
    let mut rho = initial * initial.adjoint();
    let mut cycle = TargetCycle::new(ac.c0, ac.c1);
    let mut last = 0;
    let mut out = Vec::with_capacity(ac.measurements);
    for j in 1..=ac.measurements {
        rho = prop.evolve(&rho, ac.measure_every)?;
        let (p0, p1) = parity_probs(&rho);
        let pre = infidelity_pure(&rho, &cycle.state(&words));
        let m = select_outcome(rng.gen(), p0);
        rho = project(&rho, m)?;
        if m != last {
            cycle.advance();
        }
        last = m;
        out.push(MeasurementRecord {
            measurement_index: j,
            time: (j * ac.measure_every) as f64,
            infidelity_pre: pre,
            infidelity_post: infidelity_pure(&rho, &cycle.state(&words)),
            p1,
            outcome: m,
            cycle_index: cycle.index,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub measurement_index: usize,
    pub time: f64,
    pub mean_infidelity: f64,
    pub std_infidelity: f64,
    #[serde(rename = "mean_P1")]
    pub mean_p1: f64,
}

#[derive(Clone, Debug)]
pub struct EnsembleSeries {
    /// post-measurement infidelity
    pub post: Vec<EnsembleRow>,
    /// infidelity just before each measurement
    pub pre: Vec<EnsembleRow>,
    pub n_traj: usize,
}

impl EnsembleSeries {
    pub fn standard_error(&self, i: usize) -> f64 {
        self.post[i].std_infidelity / (self.n_traj as f64).sqrt()
    }
}

fn reduce(records: &[Vec<MeasurementRecord>], j: usize, pick: impl Fn(&MeasurementRecord) -> f64) -> EnsembleRow {
    let n = records.len() as f64;
    let vals: Vec<f64> = records.iter().map(|r| pick(&r[j])).collect();
    let mean = vals.iter().sum::<f64>() / n;
    let var = if records.len() > 1 {
        vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let r0 = &records[0][j];
    EnsembleRow {
        measurement_index: r0.measurement_index,
        time: r0.time,
        mean_infidelity: mean,
        std_infidelity: var.sqrt(),
        mean_p1: records.iter().map(|r| r[j].p1).sum::<f64>() / n,
    }
}

/// Ensemble means with a leading row for the initial state.
pub fn run_ensemble(cfg: &HilbertConfig, ac: &AqecConfig) -> Result<EnsembleSeries> {
    Ok(summarize(&run_all(cfg, ac)?))
}

/// Ordered reduction of per-trajectory records into ensemble rows.
pub fn summarize(records: &[Vec<MeasurementRecord>]) -> EnsembleSeries {
    let first = EnsembleRow {
        measurement_index: 0,
        time: 0.0,
        mean_infidelity: 0.0,
        std_infidelity: 0.0,
        mean_p1: 0.0,
    };
    let mut post = vec![first];
    let mut pre = vec![first];
    let n_meas = records.first().map_or(0, |r| r.len());
    for j in 0..n_meas {
        post.push(reduce(records, j, |r| r.infidelity_post));
        pre.push(reduce(records, j, |r| r.infidelity_pre));
    }
    EnsembleSeries {
        post,
        pre,
        n_traj: records.len(),
    }
}

/// Median over all trajectories and measurements of pre/post infidelity.
pub fn median_drop(records: &[Vec<MeasurementRecord>]) -> f64 {
    let mut r: Vec<f64> = records
        .iter()
        .flatten()
        .map(|m| m.infidelity_pre / m.infidelity_post.max(f64::MIN_POSITIVE))
        .collect();
    if r.is_empty() {
        return f64::NAN;
    }
    r.sort_by(|a, b| a.total_cmp(b));
    let n = r.len();
    if n % 2 == 1 {
        r[n / 2]
    } else {
        0.5 * (r[n / 2 - 1] + r[n / 2])
    }
}

#[derive(Serialize)]
struct TrajectoryCsvRow {
    trajectory: usize,
    measurement_index: usize,
    time: f64,
    infidelity_pre: f64,
    infidelity_post: f64,
    #[serde(rename = "P1")]
    p1: f64,
    outcome: usize,
    cycle_index: usize,
}

pub fn write_records_csv(path: &Path, records: &[Vec<MeasurementRecord>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (t, traj) in records.iter().enumerate() {
        for m in traj {
            w.serialize(TrajectoryCsvRow {
                trajectory: t,
                measurement_index: m.measurement_index,
                time: m.time,
                infidelity_pre: m.infidelity_pre,
                infidelity_post: m.infidelity_post,
                p1: m.p1,
                outcome: m.outcome,
                cycle_index: m.cycle_index,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_ensemble_csv(path: &Path, rows: &[EnsembleRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
