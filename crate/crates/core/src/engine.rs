//! Adiabatic ramps of engineered Floquet drives: schedules, target builders, stroboscopic
//! evolution and fidelity diagnostics.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codes::{binomial_words, CodeWordSet};
use crate::error::{Error, Result};
use crate::fockspace::{
    expm_hermitian, fock, hermitian_fn, normalize, rotation_diag, DensityMatrix, HilbertConfig, Operator,
    StateVector, C64,
};
use crate::gates::{conjugate_rotation, row_weight, FloquetDriver, RowProfile};
use crate::ncft::{chart_kf, transform_weights, DriveChart, NcftSpec, Scenario};

/// Tolerated norm drift of a unitary trajectory.
pub const NORM_TOL: f64 = 1e-6;

/// Sigmoid ramps of the drive strength β(t) and frequency Ω(t), in units of ω₀ = 1 time.
///
/// Each sigmoid is normalized so that β(0) = 0, β(tf) = β_f, Ω(0) = Ω_init, Ω(tf) = ω₀.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RampSchedule {
    pub beta_f: f64,
    pub omega0: f64,
    pub omega_init: f64,
    pub s1: f64,
    pub s2: f64,
    pub tc1: f64,
    pub tc2: f64,
    pub tf: f64,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl RampSchedule {
    /// Sigmoid shape of the single-state preparation runs for a final time `tf`.
    pub fn standard(tf: f64, beta_f: f64) -> Self {
        Self {
            beta_f,
            omega0: 1.0,
            omega_init: 1.0 / (1.0 + PI * 1e-3),
            s1: 40.0 / tf,
            s2: 30.0 / tf,
            tc1: tf / 6.0,
            tc2: 2.0 * tf / 3.0,
            tf,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.beta_f,
            self.omega0,
            self.omega_init,
            self.s1,
            self.s2,
            self.tc1,
            self.tc2,
            self.tf,
        ];
        if !fields.iter().all(|v| v.is_finite()) {
            return Err(Error::Config("ramp schedule fields must be finite".into()));
        }
        if !(self.tf > 0.0 && self.omega0 > 0.0 && self.omega_init > 0.0) {
            return Err(Error::Config("ramp needs tf, omega0, omega_init > 0".into()));
        }
        if !(self.s1 > 0.0 && self.s2 > 0.0) {
            return Err(Error::Config("ramp slopes must be positive".into()));
        }
        Ok(())
    }

    /// Z1 = σ(s1(tf − tc1)) − σ(−s1 tc1).
    pub fn z1(&self) -> f64 {
        logistic(self.s1 * (self.tf - self.tc1)) - logistic(-self.s1 * self.tc1)
    }

    pub fn z2(&self) -> f64 {
        logistic(self.s2 * (self.tf - self.tc2)) - logistic(-self.s2 * self.tc2)
    }
}

/// (β(t), Ω(t)) with t clamped to [0, tf].
pub fn schedule_eval(s: &RampSchedule, t: f64) -> (f64, f64) {
    let t = t.clamp(0.0, s.tf);
    let b = (logistic(s.s1 * (t - s.tc1)) - logistic(-s.s1 * s.tc1)) / s.z1();
    let w = (logistic(s.s2 * (t - s.tc2)) - logistic(-s.s2 * s.tc2)) / s.z2();
    let beta = if t == s.tf { s.beta_f } else { s.beta_f * b };
    let omega = if t == s.tf {
        s.omega0
    } else {
        s.omega_init + (s.omega0 - s.omega_init) * w
    };
    (beta, omega)
}

/// h(t) = sin²[(π/2) sin²(πt/2tf)].
pub fn transition_h(t: f64, tf: f64) -> f64 {
    let t = t.clamp(0.0, tf);
    let inner = (PI * t / (2.0 * tf)).sin().powi(2);
    (PI / 2.0 * inner).sin().powi(2)
}

/// Time profile of the drive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Drive {
    Ramp(RampSchedule),
    /// Resonant drive at fixed strength for a duration tf.
    Constant { beta: f64, omega0: f64, tf: f64 },
}

impl Drive {
    pub fn eval(&self, t: f64) -> (f64, f64) {
        match self {
            Drive::Ramp(s) => schedule_eval(s, t),
            Drive::Constant { beta, omega0, .. } => (*beta, *omega0),
        }
    }

    pub fn tf(&self) -> f64 {
        match self {
            Drive::Ramp(s) => s.tf,
            Drive::Constant { tf, .. } => *tf,
        }
    }

    pub fn omega0(&self) -> f64 {
        match self {
            Drive::Ramp(s) => s.omega0,
            Drive::Constant { omega0, .. } => *omega0,
        }
    }

    /// Number of stroboscopic periods, tf/(2π/ω₀) rounded.
    pub fn periods(&self) -> usize {
        (self.tf() * self.omega0() / (2.0 * PI)).round() as usize
    }
}

/// Exact projector-built Ĥ_T on the configured Fock space.
pub fn build_target(spec: &NcftSpec, cfg: &HilbertConfig) -> Result<Operator> {
    let terms = spec.terms()?;
    if terms.max_index() >= cfg.dim {
        return Err(Error::CutoffRisk(format!(
            "target needs Fock index {} but dim = {}",
            terms.max_index(),
            cfg.dim
        )));
    }
    Ok(terms.to_operator(cfg.dim))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    GateSequence,
    DirectIntegration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Binomial,
    Cat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Vacuum,
    Fock { n: usize },
    /// c0|0⟩ + c1|2⟩
    FockSuperposition { c0: C64, c1: C64 },
    /// c0|0̄⟩ + c1|1̄⟩ in the given code family (cat at the first sweet spot unless alpha is set)
    Logical {
        family: Family,
        c0: C64,
        c1: C64,
        #[serde(default)]
        alpha: Option<f64>,
    },
}

impl InitialState {
    pub fn build(&self, cfg: &HilbertConfig) -> Result<StateVector> {
        let v = match self {
            InitialState::Vacuum => fock(cfg, 0),
            InitialState::Fock { n } => {
                if *n >= cfg.dim {
                    return Err(Error::IndexOutOfRange {
                        what: "initial Fock level",
                        index: *n,
                        max: cfg.dim - 1,
                    });
                }
                fock(cfg, *n)
            }
            InitialState::FockSuperposition { c0, c1 } => fock(cfg, 0) * *c0 + fock(cfg, 2) * *c1,
            InitialState::Logical { family, c0, c1, alpha } => {
                let w = words(cfg, *family, *alpha)?;
                w.logical(*c0, *c1)
            }
        };
        let n = v.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Config(format!("initial state must be normalized, norm = {n}")));
        }
        Ok(v)
    }
}

/// Code words of a family on the configured space.
pub fn words(cfg: &HilbertConfig, family: Family, alpha: Option<f64>) -> Result<CodeWordSet> {
    match family {
        Family::Binomial => binomial_words(cfg),
        Family::Cat => crate::codes::cat_words(cfg, alpha.unwrap_or_else(crate::ncft::default_cat_alpha)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChartGrid {
    /// wavenumber steps N
    pub n_k: usize,
    /// time steps M
    pub n_t: usize,
    pub k_max: f64,
}

impl Default for ChartGrid {
    fn default() -> Self {
        Self {
            n_k: 20,
            n_t: 20,
            k_max: 8.0,
        }
    }
}

impl ChartGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n_k < 1 || self.n_t < 1 {
            return Err(Error::Config(format!(
                "chart needs N, M >= 1, got N={}, M={}",
                self.n_k, self.n_t
            )));
        }
        if !(self.k_max > 0.0 && self.k_max.is_finite()) {
            return Err(Error::Config(format!("k_max must be positive, got {}", self.k_max)));
        }
        Ok(())
    }
}

/// The full specification of an evolution run.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpec {
    pub ncft: NcftSpec,
    pub initial: InitialState,
    pub backend: Backend,
}

/// Row potentials of the drive, possibly following h(t).
#[derive(Clone, Debug)]
pub enum DriveModel {
    Static(RowProfile),
    /// binomial, cat and cross parts of the transition Hamiltonian
    Transition { parts: Box<[RowProfile; 3]>, tf: f64 },
}

impl DriveModel {
    pub fn profile_at(&self, t: f64) -> std::borrow::Cow<'_, RowProfile> {
        match self {
            DriveModel::Static(p) => std::borrow::Cow::Borrowed(p),
            DriveModel::Transition { parts, tf } => {
                let [wb, wc, wx] = transform_weights(transition_h(t, *tf));
                std::borrow::Cow::Owned(RowProfile::combine(&[(&parts[0], wb), (&parts[1], wc), (&parts[2], wx)]))
            }
        }
    }
}

/// Stroboscopic sample handed to observers; `time` is ω₀t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub step: usize,
    pub time: f64,
    pub beta: f64,
    pub omega: f64,
}

/// Rotating-frame simulator of one drive acting on one Fock space.
pub struct Simulator {
    pub cfg: HilbertConfig,
    pub driver: FloquetDriver,
    pub model: DriveModel,
    pub drive: Drive,
    pub backend: Backend,
}

impl Simulator {
    /// Builds the row potentials of the spec's chart.
    ///
    /// Transform scenarios are driven along h(t) over the drive duration; the h stored in the
    /// spec is ignored.
    pub fn new(cfg: &HilbertConfig, spec: &NcftSpec, grid: &ChartGrid, drive: Drive, backend: Backend) -> Result<Self> {
        grid.validate()?;
        spec.validate()?;
        let driver = FloquetDriver::new(cfg, drive.omega0());
        let mk = |terms: &crate::ncft::TargetTerms| {
            let kf = chart_kf(terms, spec.lambda, grid.n_k, grid.n_t, grid.k_max);
            let chart = DriveChart::from_kf(&kf, grid.k_max, drive.omega0(), spec.lambda, spec.scenario.label());
            RowProfile::new(&chart, &driver.basis)
        };
        let model = match spec.scenario {
            Scenario::Transform { .. } => {
                let parts = spec.transform_parts()?;
                DriveModel::Transition {
                    parts: Box::new([mk(&parts.binomial), mk(&parts.cat), mk(&parts.cross)]),
                    tf: drive.tf(),
                }
            }
            _ => DriveModel::Static(mk(&spec.terms()?)),
        };
        Ok(Self {
            cfg: *cfg,
            driver,
            model,
            drive,
            backend,
        })
    }

    fn direct_period(&self, prof: &RowProfile, beta: f64, omega: f64, psi: &mut StateVector) {
        let n_t = prof.n_t;
        let dt = 2.0 * PI / (omega * n_t as f64);
        let lam = self.cfg.lambda;
        let det = lam * (self.driver.omega0 - omega);
        for m in 0..=n_t {
            let theta = 2.0 * PI * m as f64 / n_t as f64;
            let vals = nalgebra::DVector::from_fn(self.cfg.dim, |j, _| C64::new(beta * prof.g[(m, j)], 0.0));
            let mut h = conjugate_rotation(&self.driver.basis.function(&vals), theta);
            for n in 0..self.cfg.dim {
                h[(n, n)] += C64::new(det * n as f64, 0.0);
            }
            // symmetrize against roundoff before the Hermitian solver
            let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
            let u = expm_hermitian(&h, dt * row_weight(m, n_t) / lam);
            *psi = u * &*psi;
        }
    }

    /// Advances one period from time t; returns the new time.
    pub fn step(&self, t: f64, psi: &mut StateVector) -> (f64, f64, f64) {
        let (beta, omega) = self.drive.eval(t);
        let prof = self.model.profile_at(t);
        match self.backend {
            Backend::GateSequence => self.driver.apply_period(&prof, beta, omega, psi),
            Backend::DirectIntegration => self.direct_period(&prof, beta, omega, psi),
        }
        (t + 2.0 * PI / omega, beta, omega)
    }

    /// Runs all periods; the observer sees step 0 (initial state) and every period end.
    pub fn run<F>(&self, psi0: &StateVector, mut obs: F) -> Result<StateVector>
    where
        F: FnMut(&StepInfo, &StateVector) -> Result<()>,
    {
        self.run_periods(psi0, self.drive.periods(), &mut obs)
    }

    pub fn run_periods<F>(&self, psi0: &StateVector, periods: usize, obs: &mut F) -> Result<StateVector>
    where
        F: FnMut(&StepInfo, &StateVector) -> Result<()>,
    {
        let mut psi = psi0.clone();
        let mut t = 0.0;
        let (b0, w0) = self.drive.eval(0.0);
        obs(
            &StepInfo {
                step: 0,
                time: 0.0,
                beta: b0,
                omega: w0,
            },
            &psi,
        )?;
        for s in 1..=periods {
            let (t_next, _, _) = self.step(t, &mut psi);
            t = t_next;
            let n = psi.norm();
            if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
                return Err(Error::NonUnitaryDrift { step: s, norm: n });
            }
            let (beta, omega) = self.drive.eval(t);
            obs(
                &StepInfo {
                    step: s,
                    time: t,
                    beta,
                    omega,
                },
                &psi,
            )?;
        }
        Ok(psi)
    }
}

/// Positive square root of a Hermitian positive semidefinite matrix (negatives clamped).
fn psd_sqrt(a: &DensityMatrix) -> DensityMatrix {
    hermitian_fn(a, |w| C64::new(w.max(0.0).sqrt(), 0.0))
}

/// Uhlmann fidelity Tr√(ρ_T^{1/2} ρ ρ_T^{1/2}).
///
/// Eigenvalues are clamped at zero before each square root.
pub fn fidelity(rho: &DensityMatrix, rho_t: &DensityMatrix) -> f64 {
    let s = psd_sqrt(rho_t);
    let m = &s * rho * &s;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = m.symmetric_eigen();
    let f: f64 = eig.eigenvalues.iter().map(|w| w.max(0.0).sqrt()).sum();
    f.clamp(0.0, 1.0)
}

/// |⟨ψ|φ⟩|, the pure-state fidelity.
pub fn pure_fidelity(psi: &StateVector, phi: &StateVector) -> f64 {
    psi.dotc(phi).norm().min(1.0)
}

/// Δφ = arg(⟨1̄|ψ⟩⟨ψ|0̄⟩) in (−π, π].
pub fn geometric_phase(psi: &StateVector, word0: &StateVector, word1: &StateVector) -> Result<f64> {
    let o0 = word0.dotc(psi);
    let o1 = word1.dotc(psi);
    if o0.norm() < 1e-8 {
        return Err(Error::ZeroOverlap {
            word: 0,
            modulus: o0.norm(),
        });
    }
    if o1.norm() < 1e-8 {
        return Err(Error::ZeroOverlap {
            word: 1,
            modulus: o1.norm(),
        });
    }
    let a = (o1 * o0.conj()).arg();
    Ok(if a == -PI { PI } else { a })
}

/// c0|w0⟩ + c1 e^{iΔφ}|w1⟩, normalized.
pub fn phase_updated(w0: &StateVector, w1: &StateVector, c0: C64, c1: C64, dphi: f64) -> StateVector {
    let mut v = w0 * c0 + w1 * (c1 * C64::from_polar(1.0, dphi));
    normalize(&mut v);
    v
}

/// ⟨P̂⟩ = Σ (−1)^n |ψ_n|².
pub fn parity_expectation(psi: &StateVector) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
        .sum()
}

/// Free-rotation map from the rotating frame back to the lab frame at time t.
pub fn to_lab_frame(psi: &StateVector, omega: f64, t: f64) -> StateVector {
    psi.component_mul(&rotation_diag(psi.len(), omega * t))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: usize,
    /// in drive periods 2π/ω₀
    pub time: f64,
    pub beta: f64,
    pub omega: f64,
    pub infidelity: f64,
    pub parity_expectation: f64,
}

impl TrajectoryRow {
    pub fn new(info: &StepInfo, psi: &StateVector, target: &StateVector) -> Self {
        Self {
            step: info.step,
            time: info.time / (2.0 * PI),
            beta: info.beta,
            omega: info.omega,
            infidelity: 1.0 - pure_fidelity(psi, target),
            parity_expectation: parity_expectation(psi),
        }
    }
}

pub fn write_trajectory_csv(path: &Path, rows: &[TrajectoryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// State amplitudes as a JSON array of [re, im] pairs.
pub fn write_state_json(path: &Path, psi: &StateVector) -> Result<()> {
    let pairs: Vec<[f64; 2]> = psi.iter().map(|c| [c.re, c.im]).collect();
    std::fs::write(path, serde_json::to_string(&pairs)? + "\n")?;
    Ok(())
}

pub fn read_state_json(path: &Path) -> Result<StateVector> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    Ok(StateVector::from_iterator(pairs.len(), pairs.iter().map(|p| C64::new(p[0], p[1]))))
}

/// Result of evolving one initial state against one reference target.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub rows: Vec<TrajectoryRow>,
    pub final_state: StateVector,
    pub snapshots: Vec<(usize, StateVector)>,
}

impl RunRecord {
    pub fn final_infidelity(&self) -> f64 {
        self.rows.last().map(|r| r.infidelity).unwrap_or(f64::NAN)
    }
}

/// Evolves `psi0` and tracks infidelity against a fixed `target`.
pub fn run_against(sim: &Simulator, psi0: &StateVector, target: &StateVector, snapshots: &[usize]) -> Result<RunRecord> {
    let mut rows = Vec::with_capacity(sim.drive.periods() + 1);
    let mut snaps = Vec::new();
    let final_state = sim.run(psi0, |info, psi| {
        rows.push(TrajectoryRow::new(info, psi, target));
        if snapshots.contains(&info.step) {
            snaps.push((info.step, psi.clone()));
        }
        Ok(())
    })?;
    Ok(RunRecord {
        rows,
        final_state,
        snapshots: snaps,
    })
}

/// Variance of step-to-step infidelity changes in two windows of a trajectory.
///
/// Used to detect that early detuning oscillations have died out.
pub fn oscillation_variances(rows: &[TrajectoryRow], early: (f64, f64), late: (f64, f64)) -> (f64, f64) {
    let n = rows.len() as f64;
    let window = |(a, b): (f64, f64)| {
        let lo = (a * n) as usize;
        let hi = ((b * n) as usize).min(rows.len());
        let d: Vec<f64> = rows[lo..hi].windows(2).map(|w| w[1].infidelity - w[0].infidelity).collect();
        let mean = d.iter().sum::<f64>() / d.len().max(1) as f64;
        d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d.len().max(1) as f64
    };
    (window(early), window(late))
}
