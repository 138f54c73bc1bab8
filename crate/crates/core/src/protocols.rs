//! End-to-end runs: single-state preparation, binomial code-space embedding and the
//! binomial → cat transformation.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{binomial_words, cat_words, CodeWordSet};
use crate::engine::{
    geometric_phase, phase_updated, pure_fidelity, run_against, transition_h, Backend, ChartGrid, Drive, RampSchedule,
    RunRecord, Simulator, StepInfo, TrajectoryRow,
};
use crate::error::Result;
use crate::fockspace::{fock, normalize, HilbertConfig, StateVector, C64};
use crate::ncft::{default_cat_alpha, NcftSpec, Scenario};

/// Wraps an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Phase difference φ1 − φ0 acquired by the words in `psi`, relative to the input coefficients.
pub fn relative_phase(psi: &StateVector, w0: &StateVector, w1: &StateVector, c0: C64, c1: C64) -> Result<f64> {
    Ok(wrap_angle(geometric_phase(psi, w0, w1)? - (c1 * c0.conj()).arg()))
}

pub fn default_pairs() -> Vec<(C64, C64)> {
    let r = |a: f64, b: f64| (C64::new(a, 0.0), C64::new(b, 0.0));
    vec![
        r(0.5f64.sqrt(), 0.5f64.sqrt()),
        r(0.5, 0.75f64.sqrt()),
        r(0.75f64.sqrt(), 0.5),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RampParams {
    /// in drive periods
    pub periods: f64,
    #[serde(default = "default_beta")]
    pub beta_f: f64,
    #[serde(default)]
    pub omega_init: Option<f64>,
}

fn default_beta() -> f64 {
    0.02
}

impl RampParams {
    pub fn schedule(&self) -> RampSchedule {
        let mut s = RampSchedule::standard(self.periods * 2.0 * PI, self.beta_f);
        if let Some(w) = self.omega_init {
            s.omega_init = w;
        }
        s
    }
}

/// Preparation of c0|0̄_b⟩ + c1|1̄_b⟩ from the vacuum.
pub fn prepare(
    cfg: &HilbertConfig,
    grid: &ChartGrid,
    c0: C64,
    c1: C64,
    gap: f64,
    ramp: &RampParams,
    backend: Backend,
    snapshots: &[usize],
) -> Result<RunRecord> {
    let spec = NcftSpec::new(Scenario::SingleState { c0, c1 }, gap, cfg.lambda)?;
    let sched = ramp.schedule();
    sched.validate()?;
    let sim = Simulator::new(cfg, &spec, grid, Drive::Ramp(sched), backend)?;
    let target = binomial_words(cfg)?.logical(c0, c1);
    run_against(&sim, &fock(cfg, 0), &target, snapshots)
}

#[derive(Clone, Debug)]
pub struct SuperpositionRun {
    pub c0: C64,
    pub c1: C64,
    pub dphi: f64,
    pub fidelity_updated: f64,
    pub fidelity_plain: f64,
    pub record: RunRecord,
}

#[derive(Clone, Debug)]
pub struct EmbedReport {
    pub word0: RunRecord,
    pub word1: RunRecord,
    pub superpositions: Vec<SuperpositionRun>,
}

/// Embedding runs |0⟩ → |0̄_b⟩, |2⟩ → |1̄_b⟩ and c0|0⟩ + c1|2⟩ for every pair.
pub fn embed(
    cfg: &HilbertConfig,
    grid: &ChartGrid,
    gap: f64,
    ramp: &RampParams,
    backend: Backend,
    pairs: &[(C64, C64)],
) -> Result<EmbedReport> {
    let spec = NcftSpec::new(Scenario::EmbedBinomial, gap, cfg.lambda)?;
    let sched = ramp.schedule();
    sched.validate()?;
    let sim = Simulator::new(cfg, &spec, grid, Drive::Ramp(sched), backend)?;
    let w = binomial_words(cfg)?;
    let word0 = run_against(&sim, &fock(cfg, 0), &w.zero_c, &[])?;
    let word1 = run_against(&sim, &fock(cfg, 2), &w.one_c, &[])?;
    let superpositions = pairs
        .par_iter()
        .map(|&(c0, c1)| {
            let psi0 = fock(cfg, 0) * c0 + fock(cfg, 2) * c1;
            let psi_f = sim.run(&psi0, |_, _| Ok(()))?;
            let dphi = relative_phase(&psi_f, &w.zero_c, &w.one_c, c0, c1)?;
            let updated = phase_updated(&w.zero_c, &w.one_c, c0, c1, dphi);
            let plain = w.logical(c0, c1);
            let record = run_against(&sim, &psi0, &updated, &[])?;
            Ok(SuperpositionRun {
                c0,
                c1,
                dphi,
                fidelity_updated: pure_fidelity(&psi_f, &updated),
                fidelity_plain: pure_fidelity(&psi_f, &plain),
                record,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbedReport {
        word0,
        word1,
        superpositions,
    })
}

/// Normalized transition words √(1−h)|j̄_b⟩ + √h|j̄_c⟩.
pub fn transition_words(b: &CodeWordSet, c: &CodeWordSet, h: f64) -> (StateVector, StateVector) {
    let (s0, s1) = ((1.0 - h).max(0.0).sqrt(), h.max(0.0).sqrt());
    let mut w0 = &b.zero_c * C64::new(s0, 0.0) + &c.zero_c * C64::new(s1, 0.0);
    let mut w1 = &b.one_c * C64::new(s0, 0.0) + &c.one_c * C64::new(s1, 0.0);
    normalize(&mut w0);
    normalize(&mut w1);
    (w0, w1)
}

#[derive(Clone, Debug)]
pub struct TransformReport {
    pub word0: RunRecord,
    pub word1: RunRecord,
    /// runs tracked against c0|0̄_c⟩ + c1 e^{iΔφ(t)}|1̄_c⟩
    pub superpositions: Vec<SuperpositionRun>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformParams {
    #[serde(default = "default_transform_periods")]
    pub periods: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_transform_gap")]
    pub gap: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
}

fn default_transform_periods() -> f64 {
    5000.0
}

fn default_transform_gap() -> f64 {
    0.1
}

impl Default for TransformParams {
    fn default() -> Self {
        Self {
            periods: default_transform_periods(),
            beta: default_beta(),
            gap: default_transform_gap(),
            alpha: None,
        }
    }
}

/// Resonant drive along h(t) taking binomial words to cat words.
pub fn transform(
    cfg: &HilbertConfig,
    grid: &ChartGrid,
    p: &TransformParams,
    backend: Backend,
    pairs: &[(C64, C64)],
) -> Result<TransformReport> {
    let alpha = p.alpha.unwrap_or_else(default_cat_alpha);
    let spec = NcftSpec::new(Scenario::Transform { h: 0.0, alpha: Some(alpha) }, p.gap, cfg.lambda)?;
    let drive = Drive::Constant {
        beta: p.beta,
        omega0: 1.0,
        tf: p.periods * 2.0 * PI,
    };
    let sim = Simulator::new(cfg, &spec, grid, drive, backend)?;
    let b = binomial_words(cfg)?;
    let c = cat_words(cfg, alpha)?;
    let word0 = run_against(&sim, &b.zero_c, &c.zero_c, &[])?;
    let word1 = run_against(&sim, &b.one_c, &c.one_c, &[])?;
    let tf = drive.tf();
    let superpositions = pairs
        .par_iter()
        .map(|&(c0, c1)| {
            let psi0 = b.logical(c0, c1);
            let mut rows = Vec::new();
            let mut dphi = 0.0;
            let mut obs = |info: &StepInfo, psi: &StateVector| -> Result<()> {
                let (t0, t1) = transition_words(&b, &c, transition_h(info.time, tf));
                dphi = relative_phase(psi, &t0, &t1, c0, c1)?;
                let target = phase_updated(&c.zero_c, &c.one_c, c0, c1, dphi);
                rows.push(TrajectoryRow::new(info, psi, &target));
                Ok(())
            };
            let psi_f = sim.run(&psi0, &mut obs)?;
            let updated = phase_updated(&c.zero_c, &c.one_c, c0, c1, dphi);
            Ok(SuperpositionRun {
                c0,
                c1,
                dphi,
                fidelity_updated: pure_fidelity(&psi_f, &updated),
                fidelity_plain: pure_fidelity(&psi_f, &c.logical(c0, c1)),
                record: RunRecord {
                    rows,
                    final_state: psi_f,
                    snapshots: Vec::new(),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransformReport {
        word0,
        word1,
        superpositions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_principal() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
        assert!((wrap_angle(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn relative_phase_removes_coefficients() {
        let cfg = HilbertConfig::default();
        let w = binomial_words(&cfg).unwrap();
        let (c0, c1) = (C64::new(0.6, 0.0), C64::from_polar(0.8, 1.0));
        let psi = phase_updated(&w.zero_c, &w.one_c, c0, c1, 0.3);
        assert!((relative_phase(&psi, &w.zero_c, &w.one_c, c0, c1).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn transition_words_end_on_codes() {
        let cfg = HilbertConfig::default();
        let b = binomial_words(&cfg).unwrap();
        let c = cat_words(&cfg, default_cat_alpha()).unwrap();
        let (a0, a1) = transition_words(&b, &c, 0.0);
        assert!((a0 - &b.zero_c).norm() < 1e-14 && (a1 - &b.one_c).norm() < 1e-14);
        let (z0, z1) = transition_words(&b, &c, 1.0);
        assert!((z0 - &c.zero_c).norm() < 1e-14 && (z1 - &c.one_c).norm() < 1e-14);
    }

    #[test]
    fn zero_drive_keeps_vacuum() {
        let cfg = HilbertConfig::default();
        let ramp = RampParams {
            periods: 50.0,
            beta_f: 0.0,
            omega_init: None,
        };
        let r = prepare(
            &cfg,
            &ChartGrid::default(),
            C64::new(0.5, 0.0),
            C64::new(0.75f64.sqrt(), 0.0),
            1.3,
            &ramp,
            Backend::GateSequence,
            &[],
        )
        .unwrap();
        assert!(pure_fidelity(&r.final_state, &fock(&cfg, 0)) >= 1.0 - 1e-9);
    }
}
