//! Noncommutative Fourier transform of code-space target Hamiltonians and drive charts.
//!
//! A target Ĥ_T = Σ c_{mm'}|m⟩⟨m'| has NcFT coefficient f_T(k, τ) = Σ c_{mm'} f_{mm'}(k, τ),
//! and is recovered as Ĥ_T = (1/2π) ∫ k dk dτ f_T(k, τ) e^{ik(x̂ cos τ + p̂ sin τ)}.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::codes::{binomial_words, cat_series_nmax, cat_words, sweet_spot, CodeWordSet};
use crate::error::{Error, Result};
use crate::fockspace::{plane_wave, HilbertConfig, Operator, StateVector, C64};
use crate::special::{laguerre, ln_factorial};

/// Largest Fock index the cat series may need before the spec is rejected.
pub const MAX_SERIES_FOCK: usize = 160;
const SERIES_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scenario {
    /// −Δ|ψ_T⟩⟨ψ_T| with ψ_T = c0|0̄_b⟩ + c1|1̄_b⟩.
    SingleState { c0: C64, c1: C64 },
    /// −Δ(|0̄_b⟩⟨0̄_b| + |1̄_b⟩⟨1̄_b|).
    EmbedBinomial,
    /// −Δ Σ_j |j̄_t⟩⟨j̄_t| with |j̄_t⟩ = √(1−h)|j̄_b⟩ + √h|j̄_c⟩.
    Transform {
        h: f64,
        #[serde(default)]
        alpha: Option<f64>,
    },
    /// −Δ over the cat code and error words.
    AqecCat {
        #[serde(default)]
        alpha: Option<f64>,
    },
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::SingleState { .. } => "single_state",
            Scenario::EmbedBinomial => "embed_binomial",
            Scenario::Transform { .. } => "transform",
            Scenario::AqecCat { .. } => "aqec_cat",
        }
    }
}

/// Cat amplitude α at the first sweet spot.
pub fn default_cat_alpha() -> f64 {
    sweet_spot(1).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NcftSpec {
    pub scenario: Scenario,
    /// Δ in units of ω₀.
    pub gap: f64,
    pub lambda: f64,
}

impl NcftSpec {
    pub fn new(scenario: Scenario, gap: f64, lambda: f64) -> Result<Self> {
        let s = Self {
            scenario,
            gap,
            lambda,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::Config(format!("target.gap must be positive, got {}", self.gap)));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::Config(format!("lambda must be positive, got {}", self.lambda)));
        }
        match &self.scenario {
            Scenario::SingleState { c0, c1 } => {
                let n = c0.norm_sqr() + c1.norm_sqr();
                if (n - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "single_state coefficients must satisfy |c0|^2+|c1|^2 = 1, got {n}"
                    )));
                }
            }
            Scenario::Transform { h, alpha } => {
                if !(0.0..=1.0).contains(h) {
                    return Err(Error::Config(format!("transform.h must lie in [0,1], got {h}")));
                }
                check_alpha(*alpha)?;
            }
            Scenario::AqecCat { alpha } => check_alpha(*alpha)?,
            Scenario::EmbedBinomial => {}
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        match &self.scenario {
            Scenario::Transform { alpha, .. } | Scenario::AqecCat { alpha } => {
                alpha.unwrap_or_else(default_cat_alpha)
            }
            _ => 0.0,
        }
    }

    /// Fock coefficient expansion of Ĥ_T.
    pub fn terms(&self) -> Result<TargetTerms> {
        let parts = self.transform_parts()?;
        Ok(match &self.scenario {
            Scenario::Transform { h, .. } => parts.combine(*h),
            _ => parts.binomial,
        })
    }

    /// Scenario expansion split into h-independent pieces.
    ///
    /// Only the transform scenario populates `cat` and `cross`; the others carry their whole
    /// expansion in `binomial`.
    pub fn transform_parts(&self) -> Result<TransformParts> {
        let delta = C64::new(-self.gap, 0.0);
        let empty = TargetTerms::default();
        match &self.scenario {
            Scenario::SingleState { c0, c1 } => {
                let cfg = HilbertConfig::new(7, self.lambda)?;
                let w = binomial_words(&cfg)?;
                let psi = w.logical(*c0, *c1);
                Ok(TransformParts {
                    binomial: TargetTerms::from_outer(&[(&psi, &psi)], delta),
                    cat: empty.clone(),
                    cross: empty,
                })
            }
            Scenario::EmbedBinomial => {
                let cfg = HilbertConfig::new(7, self.lambda)?;
                let w = binomial_words(&cfg)?;
                Ok(TransformParts {
                    binomial: TargetTerms::from_outer(
                        &[(&w.zero_c, &w.zero_c), (&w.one_c, &w.one_c)],
                        delta,
                    ),
                    cat: empty.clone(),
                    cross: empty,
                })
            }
            Scenario::Transform { .. } => {
                let cw = series_cat_words(self.alpha(), self.lambda)?;
                let cfg = HilbertConfig::new(cw.zero_c.len(), self.lambda)?;
                let bw = binomial_words(&cfg)?;
                let binomial =
                    TargetTerms::from_outer(&[(&bw.zero_c, &bw.zero_c), (&bw.one_c, &bw.one_c)], delta);
                let cat =
                    TargetTerms::from_outer(&[(&cw.zero_c, &cw.zero_c), (&cw.one_c, &cw.one_c)], delta);
                let cross = TargetTerms::from_outer(
                    &[
                        (&bw.zero_c, &cw.zero_c),
                        (&cw.zero_c, &bw.zero_c),
                        (&bw.one_c, &cw.one_c),
                        (&cw.one_c, &bw.one_c),
                    ],
                    delta,
                );
                Ok(TransformParts {
                    binomial,
                    cat,
                    cross,
                })
            }
            Scenario::AqecCat { .. } => {
                let cw = series_cat_words(self.alpha(), self.lambda)?;
                let words = cw.all_words();
                let pairs: Vec<(&StateVector, &StateVector)> = words.iter().map(|w| (*w, *w)).collect();
                Ok(TransformParts {
                    binomial: TargetTerms::from_outer(&pairs, delta),
                    cat: empty.clone(),
                    cross: empty,
                })
            }
        }
    }
}

fn check_alpha(alpha: Option<f64>) -> Result<()> {
    if let Some(a) = alpha {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Config(format!("cat alpha must be positive, got {a}")));
        }
    }
    Ok(())
}

/// Cat words on a Fock space just large enough for the series to converge.
pub fn series_cat_words(alpha: f64, lambda: f64) -> Result<CodeWordSet> {
    let nmax = cat_series_nmax(alpha, SERIES_TOL * SERIES_TOL);
    if nmax + 4 > MAX_SERIES_FOCK {
        let a2 = alpha * alpha;
        let ln_tail = MAX_SERIES_FOCK as f64 * a2.ln() - ln_factorial(MAX_SERIES_FOCK) - a2;
        return Err(Error::SeriesTruncation {
            n_max: MAX_SERIES_FOCK,
            ratio: ln_tail.exp().sqrt(),
        });
    }
    let dim = (nmax + 4).max(7);
    let dim = dim.max((alpha * alpha + 6.0 * alpha).ceil() as usize + 1);
    cat_words(&HilbertConfig::new(dim, lambda)?, alpha)
}

/// Sparse Fock expansion Ĥ = Σ c_{mm'}|m⟩⟨m'|.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TargetTerms {
    pub entries: Vec<(usize, usize, C64)>,
}

impl TargetTerms {
    /// scale · Σ_pairs |u⟩⟨v|, dropping entries below 1e−16 of the largest.
    pub fn from_outer(pairs: &[(&StateVector, &StateVector)], scale: C64) -> Self {
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (u, v) in pairs {
            for m in 0..u.len() {
                if u[m] == C64::new(0.0, 0.0) {
                    continue;
                }
                for mp in 0..v.len() {
                    if v[mp] == C64::new(0.0, 0.0) {
                        continue;
                    }
                    *acc.entry((m, mp)).or_default() += scale * u[m] * v[mp].conj();
                }
            }
        }
        let max = acc.values().map(|c| c.norm()).fold(0.0, f64::max);
        let entries = acc
            .into_iter()
            .filter(|(_, c)| c.norm() > 1e-16 * max)
            .map(|((m, mp), c)| (m, mp, c))
            .collect();
        Self { entries }
    }

    pub fn max_index(&self) -> usize {
        self.entries.iter().map(|&(m, mp, _)| m.max(mp)).max().unwrap_or(0)
    }

    pub fn to_operator(&self, dim: usize) -> Operator {
        let mut op = Operator::zeros(dim, dim);
        for &(m, mp, c) in &self.entries {
            if m < dim && mp < dim {
                op[(m, mp)] += c;
            }
        }
        op
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|&(m, mp, c)| (m, mp, c * s)).collect(),
        }
    }

    pub fn merged(parts: &[&TargetTerms]) -> Self {
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for p in parts {
            for &(m, mp, c) in &p.entries {
                *acc.entry((m, mp)).or_default() += c;
            }
        }
        Self {
            entries: acc.into_iter().map(|((m, mp), c)| (m, mp, c)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransformParts {
    pub binomial: TargetTerms,
    pub cat: TargetTerms,
    pub cross: TargetTerms,
}

impl TransformParts {
    /// (1−h)·binomial + h·cat + √(h(1−h))·cross
    pub fn combine(&self, h: f64) -> TargetTerms {
        let [wb, wc, wx] = transform_weights(h);
        TargetTerms::merged(&[&self.binomial.scaled(wb), &self.cat.scaled(wc), &self.cross.scaled(wx)])
    }
}

pub fn transform_weights(h: f64) -> [f64; 3] {
    [1.0 - h, h, (h * (1.0 - h)).max(0.0).sqrt()]
}

/// τ-independent part of f_{mm'}: f_{mm'}(k, τ) = radial(m, m', k) · e^{−i(m−m')τ}.
///
/// radial = λ e^{−λk²/4} √(lo!/hi!) (−ik√(λ/2))^d L_lo^{(d)}(λk²/2), d = |m−m'|, lo = min(m, m').
pub fn f_radial(m: usize, m2: usize, k: f64, lambda: f64) -> C64 {
    let (lo, hi) = if m >= m2 { (m2, m) } else { (m, m2) };
    let d = hi - lo;
    if k == 0.0 {
        return if d == 0 {
            C64::new(lambda, 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    let z = lambda * k * k / 2.0;
    let ln_pref = lambda.ln() - z / 2.0 + 0.5 * (ln_factorial(lo) - ln_factorial(hi))
        + d as f64 * (k * (lambda / 2.0).sqrt()).ln();
    let lag = laguerre(lo, d as f64, z);
    let mag = ln_pref.exp() * lag;
    // (−i)^d
    let ph = match d % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, -1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 1.0),
    };
    ph * mag
}

/// NcFT component f_{mm'}(k, τ) = λ⟨m'|e^{−ik(x̂ cos τ + p̂ sin τ)}|m⟩.
pub fn f_component(m: usize, m2: usize, k: f64, tau: f64, lambda: f64) -> C64 {
    let dsigned = m as f64 - m2 as f64;
    f_radial(m, m2, k, lambda) * C64::from_polar(1.0, -dsigned * tau)
}

/// f_T at one polar point.
pub fn f_target_terms(terms: &TargetTerms, k: f64, tau: f64, lambda: f64) -> C64 {
    terms
        .entries
        .iter()
        .map(|&(m, mp, c)| c * f_component(m, mp, k, tau, lambda))
        .sum()
}

pub fn f_target(spec: &NcftSpec, k: f64, tau: f64) -> Result<C64> {
    Ok(f_target_terms(&spec.terms()?, k, tau, spec.lambda))
}

/// f_T(k, ·) as a trigonometric polynomial Σ_D F_D(k) e^{−iDτ}, D = m − m'.
pub struct AngularSeries {
    pub offset: i64,
    pub coeffs: Vec<C64>,
}

impl AngularSeries {
    pub fn new(terms: &TargetTerms, k: f64, lambda: f64) -> Self {
        let dmax = terms
            .entries
            .iter()
            .map(|&(m, mp, _)| (m as i64 - mp as i64).abs())
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![C64::new(0.0, 0.0); (2 * dmax + 1) as usize];
        for &(m, mp, c) in &terms.entries {
            let d = m as i64 - mp as i64;
            coeffs[(d + dmax) as usize] += c * f_radial(m, mp, k, lambda);
        }
        Self {
            offset: dmax,
            coeffs,
        }
    }

    pub fn eval(&self, tau: f64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let d = i as i64 - self.offset;
                c * C64::from_polar(1.0, -(d as f64) * tau)
            })
            .sum()
    }
}

/// k_n · f_T(k_n, τ_m) on the (N+1)×(M+1) chart grid, k_n = nΔk, τ_m = 2πm/M.
pub fn chart_kf(terms: &TargetTerms, lambda: f64, n_k: usize, n_t: usize, k_max: f64) -> DMatrix<C64> {
    let dk = k_max / n_k as f64;
    let mut out = DMatrix::zeros(n_k + 1, n_t + 1);
    for n in 0..=n_k {
        let k = n as f64 * dk;
        let series = AngularSeries::new(terms, k, lambda);
        for m in 0..=n_t {
            let tau = 2.0 * PI * m as f64 / n_t as f64;
            out[(n, m)] = series.eval(tau) * k;
        }
    }
    out
}

/// Sampled drive amplitude A(k_n, t_m) ≥ 0 and phase φ(k_n, t_m) ∈ (−π, π].
#[derive(Clone, Debug, PartialEq)]
pub struct DriveChart {
    pub n_k: usize,
    pub n_t: usize,
    pub k_max: f64,
    pub omega: f64,
    pub lambda: f64,
    pub scenario: String,
    pub amplitude: DMatrix<f64>,
    pub phase: DMatrix<f64>,
}

#[derive(Serialize)]
struct ChartSidecar<'a> {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    k_max: f64,
    omega: f64,
    lambda: f64,
    scenario: &'a str,
}

impl DriveChart {
    pub fn from_kf(kf: &DMatrix<C64>, k_max: f64, omega: f64, lambda: f64, scenario: &str) -> Self {
        let n_k = kf.nrows() - 1;
        let n_t = kf.ncols() - 1;
        let amplitude = kf.map(|c| c.norm());
        let phase = kf.map(|c| if c.norm() == 0.0 { 0.0 } else { principal_arg(c) });
        Self {
            n_k,
            n_t,
            k_max,
            omega,
            lambda,
            scenario: scenario.to_string(),
            amplitude,
            phase,
        }
    }

    pub fn delta_k(&self) -> f64 {
        self.k_max / self.n_k as f64
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn delta_t(&self) -> f64 {
        self.period() / self.n_t as f64
    }

    pub fn k(&self, n: usize) -> f64 {
        n as f64 * self.delta_k()
    }

    /// Ω t_m = 2πm/M.
    pub fn tau(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.n_t as f64
    }

    /// k f_T reassembled from (A, φ).
    pub fn kf(&self, n: usize, m: usize) -> C64 {
        C64::from_polar(self.amplitude[(n, m)], self.phase[(n, m)])
    }

    pub fn write_csv(&self, dir: &Path, stem: &str) -> Result<Vec<String>> {
        let mut names = Vec::new();
        for (kind, grid) in [("amplitude", &self.amplitude), ("phase", &self.phase)] {
            let name = format!("{stem}_{kind}.csv");
            let mut w = csv::Writer::from_path(dir.join(&name))?;
            let mut header = vec!["k_n".to_string()];
            for m in 0..=self.n_t {
                header.push(format!("t_{m}"));
            }
            w.write_record(&header)?;
            for n in 0..=self.n_k {
                let mut row = vec![format!("{:.17e}", self.k(n))];
                for m in 0..=self.n_t {
                    row.push(format!("{:.17e}", grid[(n, m)]));
                }
                w.write_record(&row)?;
            }
            w.flush()?;
            names.push(name);
        }
        let side = ChartSidecar {
            n: self.n_k,
            m: self.n_t,
            k_max: self.k_max,
            omega: self.omega,
            lambda: self.lambda,
            scenario: &self.scenario,
        };
        let name = format!("{stem}.json");
        let mut f = std::fs::File::create(dir.join(&name))?;
        serde_json::to_writer_pretty(&mut f, &side)?;
        writeln!(f)?;
        names.push(name);
        Ok(names)
    }
}

fn principal_arg(c: C64) -> f64 {
    let a = c.arg();
    if a == -PI {
        PI
    } else {
        a
    }
}

pub fn drive_chart(spec: &NcftSpec, n_k: usize, n_t: usize, k_max: f64, omega: f64) -> Result<DriveChart> {
    if n_k < 1 || n_t < 1 {
        return Err(Error::Config(format!("chart needs N, M >= 1, got N={n_k}, M={n_t}")));
    }
    if !(k_max > 0.0) {
        return Err(Error::Config(format!("k_max must be positive, got {k_max}")));
    }
    let terms = spec.terms()?;
    let kf = chart_kf(&terms, spec.lambda, n_k, n_t, k_max);
    Ok(DriveChart::from_kf(&kf, k_max, omega, spec.lambda, spec.scenario.label()))
}

/// H_T^Q(x, p) = ⟨α|Ĥ_T|α⟩ with α = (x + ip)/√(2λ).
pub fn husimi_terms(terms: &TargetTerms, lambda: f64, x: f64, p: f64) -> f64 {
    let nmax = terms.max_index();
    let alpha = C64::new(x, p) / (2.0 * lambda).sqrt();
    // v_m = α^m/√m!
    let mut v = Vec::with_capacity(nmax + 1);
    let mut cur = C64::new(1.0, 0.0);
    for m in 0..=nmax {
        v.push(cur);
        cur = cur * alpha / ((m + 1) as f64).sqrt();
    }
    let s: C64 = terms
        .entries
        .iter()
        .map(|&(m, mp, c)| c * v[m].conj() * v[mp])
        .sum();
    (-alpha.norm_sqr()).exp() * s.re
}

/// Q-function of Ĥ_T on an (x, p) lattice; rows follow xs, columns ps.
pub fn husimi_target(spec: &NcftSpec, xs: &[f64], ps: &[f64]) -> Result<DMatrix<f64>> {
    let terms = spec.terms()?;
    Ok(DMatrix::from_fn(xs.len(), ps.len(), |i, j| {
        husimi_terms(&terms, spec.lambda, xs[i], ps[j])
    }))
}

/// Midpoint-rule polar quadrature of Ĥ = (1/2π)∫∫ k dk dτ f_T e^{ik x̂_τ}, for validation.
pub fn reconstruct(spec: &NcftSpec, cfg: &HilbertConfig, n_k: usize, n_t: usize, k_max: f64) -> Result<Operator> {
    let terms = spec.terms()?;
    reconstruct_terms(&terms, cfg, n_k, n_t, k_max)
}

pub fn reconstruct_terms(
    terms: &TargetTerms,
    cfg: &HilbertConfig,
    n_k: usize,
    n_t: usize,
    k_max: f64,
) -> Result<Operator> {
    if n_k < 1 || n_t < 1 || !(k_max > 0.0) {
        return Err(Error::Config("reconstruct needs N, M >= 1 and k_max > 0".into()));
    }
    let dim = cfg.dim;
    let dk = k_max / n_k as f64;
    let dtau = 2.0 * PI / n_t as f64;
    let mut h = Operator::zeros(dim, dim);
    for n in 0..n_k {
        let k = (n as f64 + 0.5) * dk;
        // e^{ik x̂_τ} = R(−τ) e^{ik x̂} R(τ): entry (r, c) picks up e^{iτ(r−c)}
        let base = plane_wave(cfg, k, 0.0);
        let series = AngularSeries::new(terms, k, cfg.lambda);
        for m in 0..n_t {
            let tau = (m as f64 + 0.5) * dtau;
            let w = series.eval(tau) * (k * dk * dtau / (2.0 * PI));
            for c in 0..dim {
                for r in 0..dim {
                    let ph = C64::from_polar(1.0, tau * (r as f64 - c as f64));
                    h[(r, c)] += w * ph * base[(r, c)];
                }
            }
        }
    }
    Ok(h)
}
