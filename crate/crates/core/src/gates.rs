//! Quantum lattice gates e^{iγ cos(ζx̂ + σp̂ + δ)} and their compilation from drive charts.

use std::f64::consts::PI;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{
    hermitian_fn, momentum, position, position_real, rotation_diag, squeeze, squeeze_cutoff_risk,
    HilbertConfig, Operator, StateVector, C64,
};
use crate::ncft::DriveChart;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub zeta: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl GateParams {
    pub fn validate(&self) -> Result<()> {
        let p = self;
        if ![p.zeta, p.sigma, p.gamma, p.delta].iter().all(|v| v.is_finite()) {
            return Err(Error::Config(format!("non-finite gate parameters {p:?}")));
        }
        if p.zeta == 0.0 && p.sigma == 0.0 && p.gamma != 0.0 {
            return Err(Error::DegenerateDirection);
        }
        Ok(())
    }
}

/// PSL gate e^{iγ cos(ζx̂ + σp̂ + δ)}.
pub fn psl(cfg: &HilbertConfig, p: &GateParams) -> Result<Operator> {
    p.validate()?;
    if p.gamma == 0.0 {
        return Ok(Operator::identity(cfg.dim, cfg.dim));
    }
    let g = position(cfg) * C64::new(p.zeta, 0.0) + momentum(cfg) * C64::new(p.sigma, 0.0);
    Ok(hermitian_fn(&g, |w| C64::from_polar(1.0, p.gamma * (w + p.delta).cos())))
}

/// XSL gate e^{iγ cos(ρx̂ + δ)}.
pub fn xsl(cfg: &HilbertConfig, rho: f64, gamma: f64, delta: f64) -> Result<Operator> {
    psl(
        cfg,
        &GateParams {
            zeta: rho,
            sigma: 0.0,
            gamma,
            delta,
        },
    )
}

/// R(−θ)·XSL(ρ, γ, δ)·R(θ) with ρ = √(ζ²+σ²), θ = atan2(σ, ζ).
pub fn psl_via_rotation(cfg: &HilbertConfig, p: &GateParams) -> Result<Operator> {
    if p.zeta == 0.0 && p.sigma == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let rho = p.zeta.hypot(p.sigma);
    let theta = p.sigma.atan2(p.zeta);
    let x = xsl(cfg, rho, p.gamma, p.delta)?;
    Ok(conjugate_rotation(&x, theta))
}

/// R(−θ) U R(θ).
pub fn conjugate_rotation(u: &Operator, theta: f64) -> Operator {
    let d = rotation_diag(u.nrows(), theta);
    Operator::from_fn(u.nrows(), u.ncols(), |r, c| d[r].conj() * u[(r, c)] * d[c])
}

/// Ŝ†(−ln ρ)·XSL(1, γ, δ)·Ŝ(−ln ρ), which equals XSL(ρ, γ, δ) away from the cutoff.
///
/// The product is formed on a Fock space of twice the dimension and truncated back.
pub fn xsl_via_squeeze(cfg: &HilbertConfig, rho: f64, gamma: f64, delta: f64) -> Result<Operator> {
    xsl_via_squeeze_in(cfg, 2 * cfg.dim, rho, gamma, delta)
}

/// As [`xsl_via_squeeze`] with an explicit working dimension ≥ cfg.dim.
pub fn xsl_via_squeeze_in(
    cfg: &HilbertConfig,
    work_dim: usize,
    rho: f64,
    gamma: f64,
    delta: f64,
) -> Result<Operator> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Config(format!("squeeze decomposition needs rho > 0, got {rho}")));
    }
    let work = HilbertConfig::new(work_dim.max(cfg.dim), cfg.lambda)?;
    let z = -rho.ln();
    if squeeze_cutoff_risk(cfg, z, 0) {
        return Err(Error::CutoffRisk(format!(
            "squeeze parameter {z:.3} spreads the vacuum beyond the guarded block of dim {}",
            cfg.dim
        )));
    }
    let s = squeeze(&work, z);
    let full = s.adjoint() * xsl(&work, 1.0, gamma, delta)? * s;
    Ok(full.view((0, 0), (cfg.dim, cfg.dim)).into_owned())
}

/// Trapezoid weight of time row m on an M-step period.
pub fn row_weight(m: usize, n_t: usize) -> f64 {
    if m == 0 || m == n_t {
        0.5
    } else {
        1.0
    }
}

fn check_index(chart: &DriveChart, n: usize, m: usize) -> Result<()> {
    if n > chart.n_k {
        return Err(Error::IndexOutOfRange {
            what: "wavenumber index n",
            index: n,
            max: chart.n_k,
        });
    }
    if m > chart.n_t {
        return Err(Error::IndexOutOfRange {
            what: "time index m",
            index: m,
            max: chart.n_t,
        });
    }
    Ok(())
}

/// Grid lattice gate (n, m) of a chart driven at strength β.
///
/// γ = −(1/λ)·β·A·Δk·Δt·w_m, with w_m the trapezoid weight of row m and Δt = 2π/(ΩM).
pub fn grid_gate(chart: &DriveChart, n: usize, m: usize, beta: f64) -> Result<GateParams> {
    grid_gate_at(chart, n, m, beta, chart.omega)
}

/// As [`grid_gate`] with the period set by the instantaneous drive frequency Ω.
pub fn grid_gate_at(chart: &DriveChart, n: usize, m: usize, beta: f64, omega: f64) -> Result<GateParams> {
    check_index(chart, n, m)?;
    let k = chart.k(n);
    let tau = chart.tau(m);
    let dt = 2.0 * PI / (omega * chart.n_t as f64);
    let gamma = -beta * chart.amplitude[(n, m)] * chart.delta_k() * dt * row_weight(m, chart.n_t) / chart.lambda;
    Ok(GateParams {
        zeta: k * tau.cos(),
        sigma: k * tau.sin(),
        gamma,
        delta: chart.phase[(n, m)],
    })
}

/// Row m as the ordered product of its N+1 PSL gates (n ascending; leftmost applied first).
pub fn tm_psl(cfg: &HilbertConfig, chart: &DriveChart, m: usize, beta: f64) -> Result<Operator> {
    let mut u = Operator::identity(cfg.dim, cfg.dim);
    for n in 0..=chart.n_k {
        let g = grid_gate(chart, n, m, beta)?;
        if g.gamma == 0.0 {
            continue;
        }
        u = psl(cfg, &g)? * u;
    }
    Ok(u)
}

/// Same as [`tm_psl`] with the n-product reversed.
pub fn tm_psl_reversed(cfg: &HilbertConfig, chart: &DriveChart, m: usize, beta: f64) -> Result<Operator> {
    let mut u = Operator::identity(cfg.dim, cfg.dim);
    for n in (0..=chart.n_k).rev() {
        let g = grid_gate(chart, n, m, beta)?;
        if g.gamma == 0.0 {
            continue;
        }
        u = psl(cfg, &g)? * u;
    }
    Ok(u)
}

/// exp(−(i/λ) w_m Δt Σ_n βAΔk cos(k_n x̂_τ + φ)) from the summed generator of row m.
pub fn tm_row_exact(cfg: &HilbertConfig, chart: &DriveChart, m: usize, beta: f64) -> Result<Operator> {
    let h = row_hamiltonian(cfg, chart, m, beta)?;
    let dt = chart.delta_t() * row_weight(m, chart.n_t);
    Ok(crate::fockspace::expm_hermitian(&h, dt / cfg.lambda))
}

/// β Σ_n A(k_n, t_m) Δk cos(k_n x̂_{τ_m} + φ(k_n, t_m)) assembled from its PSL generators.
pub fn row_hamiltonian(cfg: &HilbertConfig, chart: &DriveChart, m: usize, beta: f64) -> Result<Operator> {
    check_index(chart, 0, m)?;
    let mut h = Operator::zeros(cfg.dim, cfg.dim);
    let x = position(cfg);
    let p = momentum(cfg);
    let tau = chart.tau(m);
    for n in 1..=chart.n_k {
        let a = chart.amplitude[(n, m)];
        if a == 0.0 {
            continue;
        }
        let k = chart.k(n);
        let g = &x * C64::new(k * tau.cos(), 0.0) + &p * C64::new(k * tau.sin(), 0.0);
        let phi = chart.phase[(n, m)];
        h += hermitian_fn(&g, |w| C64::new((w + phi).cos(), 0.0)) * C64::new(beta * a * chart.delta_k(), 0.0);
    }
    Ok(h)
}

/// One Floquet period Π_{m=0}^{M} tm_psl(m) at the chart frequency.
pub fn xi_gate(cfg: &HilbertConfig, chart: &DriveChart, beta: f64) -> Result<Operator> {
    let mut u = Operator::identity(cfg.dim, cfg.dim);
    for m in 0..=chart.n_t {
        u = tm_psl(cfg, chart, m, beta)? * u;
    }
    Ok(u)
}

/// Eigenbasis of the truncated x̂, shared by all gates of one time row after rotation.
#[derive(Clone, Debug)]
pub struct QuadratureBasis {
    pub dim: usize,
    pub xi: DVector<f64>,
    vecs: Operator,
    vecs_t: Operator,
}

impl QuadratureBasis {
    pub fn new(cfg: &HilbertConfig) -> Self {
        let eig = position_real(cfg).symmetric_eigen();
        let vecs = eig.eigenvectors.map(|v| C64::new(v, 0.0));
        let vecs_t = vecs.transpose();
        Self {
            dim: cfg.dim,
            xi: eig.eigenvalues,
            vecs,
            vecs_t,
        }
    }

    /// f(x̂) as a matrix, given f on the eigenvalues.
    pub fn function(&self, values: &DVector<C64>) -> Operator {
        let mut left = self.vecs.clone();
        for (j, v) in values.iter().enumerate() {
            left.column_mut(j).iter_mut().for_each(|c| *c *= *v);
        }
        left * &self.vecs_t
    }

    pub fn apply(&self, values: &DVector<C64>, psi: &mut StateVector) {
        let mut c = &self.vecs_t * &*psi;
        c.component_mul_assign(values);
        *psi = &self.vecs * c;
    }
}

/// Row potentials g_m(ξ) = Σ_n A(k_n,t_m) Δk cos(k_n ξ + φ(k_n,t_m)) on the x̂ eigenvalues.
#[derive(Clone, Debug)]
pub struct RowProfile {
    pub n_t: usize,
    /// (M+1) × dim
    pub g: DMatrix<f64>,
}

impl RowProfile {
    pub fn new(chart: &DriveChart, basis: &QuadratureBasis) -> Self {
        let dk = chart.delta_k();
        let g = DMatrix::from_fn(chart.n_t + 1, basis.dim, |m, j| {
            let xi = basis.xi[j];
            (1..=chart.n_k)
                .map(|n| chart.amplitude[(n, m)] * dk * (chart.k(n) * xi + chart.phase[(n, m)]).cos())
                .sum()
        });
        Self { n_t: chart.n_t, g }
    }

    /// Σ_i w_i · profile_i (the row potentials are linear in k·f_T).
    pub fn combine(parts: &[(&RowProfile, f64)]) -> Self {
        let first = parts[0].0;
        let mut g = DMatrix::zeros(first.g.nrows(), first.g.ncols());
        for (p, w) in parts {
            g += &p.g * *w;
        }
        Self { n_t: first.n_t, g }
    }
}

/// Stroboscopic driver: applies chart rows through the quadrature basis.
#[derive(Clone, Debug)]
pub struct FloquetDriver {
    pub basis: QuadratureBasis,
    pub lambda: f64,
    pub omega0: f64,
}

impl FloquetDriver {
    pub fn new(cfg: &HilbertConfig, omega0: f64) -> Self {
        Self {
            basis: QuadratureBasis::new(cfg),
            lambda: cfg.lambda,
            omega0,
        }
    }

    fn row_phases(&self, prof: &RowProfile, m: usize, beta: f64, dt: f64) -> DVector<C64> {
        let s = -beta * dt / self.lambda;
        DVector::from_fn(self.basis.dim, |j, _| C64::from_polar(1.0, s * prof.g[(m, j)]))
    }

    /// One period at strength β and drive frequency Ω: rows m = 0..=M, each followed by the
    /// free detuning rotation e^{−i(ω₀−Ω)n̂ w_m Δt}.
    pub fn apply_period(&self, prof: &RowProfile, beta: f64, omega: f64, psi: &mut StateVector) {
        let n_t = prof.n_t;
        let dt = 2.0 * PI / (omega * n_t as f64);
        let dim = self.basis.dim;
        for m in 0..=n_t {
            let w = row_weight(m, n_t);
            let theta = 2.0 * PI * m as f64 / n_t as f64;
            if beta != 0.0 {
                let rot = rotation_diag(dim, theta);
                psi.component_mul_assign(&rot);
                self.basis.apply(&self.row_phases(prof, m, beta, dt * w), psi);
                psi.zip_apply(&rot, |p, r| *p *= r.conj());
            }
            let det = rotation_diag(dim, (self.omega0 - omega) * dt * w);
            psi.component_mul_assign(&det);
        }
    }

    /// Unitary of row m including its detuning rotation.
    pub fn row_unitary(&self, prof: &RowProfile, m: usize, beta: f64, omega: f64) -> Operator {
        let n_t = prof.n_t;
        let dt = 2.0 * PI / (omega * n_t as f64);
        let w = row_weight(m, n_t);
        let theta = 2.0 * PI * m as f64 / n_t as f64;
        let f = self.basis.function(&self.row_phases(prof, m, beta, dt * w));
        let u = conjugate_rotation(&f, theta);
        let det = rotation_diag(self.basis.dim, (self.omega0 - omega) * dt * w);
        Operator::from_fn(u.nrows(), u.ncols(), |r, c| det[r] * u[(r, c)])
    }

    pub fn period_unitary(&self, prof: &RowProfile, beta: f64, omega: f64) -> Operator {
        let mut u = Operator::identity(self.basis.dim, self.basis.dim);
        for m in 0..=prof.n_t {
            u = self.row_unitary(prof, m, beta, omega) * u;
        }
        u
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub zeta: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub delta: f64,
    pub k_index: usize,
    pub t_index: usize,
    pub floquet_period: usize,
}

impl GateRecord {
    pub fn params(&self) -> GateParams {
        GateParams {
            zeta: self.zeta,
            sigma: self.sigma,
            gamma: self.gamma,
            delta: self.delta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodDrive {
    pub floquet_period: usize,
    pub beta: f64,
    pub omega: f64,
}

/// Ordered lattice-gate schedule; records are applied in list order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSequence {
    pub chart: String,
    pub periods: Vec<PeriodDrive>,
    pub records: Vec<GateRecord>,
}

impl GateSequence {
    /// Compiles the chart for each (β, Ω) period in order.
    pub fn compile(chart: &DriveChart, periods: &[PeriodDrive]) -> Result<Self> {
        let mut records = Vec::with_capacity(periods.len() * (chart.n_k + 1) * (chart.n_t + 1));
        for pd in periods {
            for m in 0..=chart.n_t {
                for n in 0..=chart.n_k {
                    let g = grid_gate_at(chart, n, m, pd.beta, pd.omega)?;
                    records.push(GateRecord {
                        zeta: g.zeta,
                        sigma: g.sigma,
                        gamma: g.gamma,
                        delta: g.delta,
                        k_index: n,
                        t_index: m,
                        floquet_period: pd.floquet_period,
                    });
                }
            }
        }
        Ok(Self {
            chart: chart.scenario.clone(),
            periods: periods.to_vec(),
            records,
        })
    }

    /// Product of all gates by PSL construction, lattice gates only.
    pub fn unitary(&self, cfg: &HilbertConfig) -> Result<Operator> {
        let mut u = Operator::identity(cfg.dim, cfg.dim);
        for r in &self.records {
            if r.gamma != 0.0 {
                u = psl(cfg, &r.params())? * u;
            }
        }
        Ok(u)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(&mut w, self)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let r = std::io::BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(r)?)
    }
}
