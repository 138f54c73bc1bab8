//! Wigner and Husimi-Q functions on rectangular (x, p) grids.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{DensityMatrix, C64};
use crate::special::{laguerre_all, ln_factorial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Wigner,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -5.0,
            x_max: 5.0,
            p_min: -5.0,
            p_max: 5.0,
            nx: 201,
            np: 201,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 {
            return Err(Error::Config(format!("grid needs nx, np >= 2, got {}x{}", self.nx, self.np)));
        }
        if !(self.x_max > self.x_min && self.p_max > self.p_min) {
            return Err(Error::Config("grid axes must be increasing".into()));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ps(&self) -> Vec<f64> {
        axis(self.p_min, self.p_max, self.np)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }
}

fn axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Clone, Debug)]
pub struct PhaseGrid {
    pub spec: GridSpec,
    pub lambda: f64,
    pub kind: GridKind,
    /// values[(i, j)] at (x_i, p_j)
    pub values: DMatrix<f64>,
}

#[derive(Serialize)]
struct GridMeta<'a> {
    lambda: f64,
    kind: GridKind,
    axes: Axes<'a>,
}

#[derive(Serialize)]
struct Axes<'a> {
    x: &'a [f64],
    p: &'a [f64],
}

impl PhaseGrid {
    /// Integral over the plane in the measure d²α = dx dp / (2λ), trapezoid rule.
    pub fn integral(&self) -> f64 {
        let (nx, np) = (self.spec.nx, self.spec.np);
        let mut s = 0.0;
        for i in 0..nx {
            let wi = if i == 0 || i == nx - 1 { 0.5 } else { 1.0 };
            for j in 0..np {
                let wj = if j == 0 || j == np - 1 { 0.5 } else { 1.0 };
                s += wi * wj * self.values[(i, j)];
            }
        }
        s * self.spec.dx() * self.spec.dp() / (2.0 * self.lambda)
    }

    /// One row per x value: `x,p_0,p_1,...` header then `x_i,v_i0,v_i1,...`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let ps = self.spec.ps();
        let mut header = vec!["x".to_string()];
        header.extend(ps.iter().map(|p| format!("{p}")));
        w.write_record(&header)?;
        for (i, x) in self.spec.xs().iter().enumerate() {
            let mut rec = vec![format!("{x}")];
            rec.extend((0..self.spec.np).map(|j| format!("{:e}", self.values[(i, j)])));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_meta(&self, path: &Path) -> Result<()> {
        let (xs, ps) = (self.spec.xs(), self.spec.ps());
        let meta = GridMeta {
            lambda: self.lambda,
            kind: self.kind,
            axes: Axes { x: &xs, p: &ps },
        };
        std::fs::write(path, serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    /// Writes `{stem}.csv` and `{stem}.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        self.write_csv(&dir.join(format!("{stem}.csv")))?;
        self.write_meta(&dir.join(format!("{stem}.json")))
    }
}

/// α = (x + i p)/√(2λ).
pub fn alpha_of(x: f64, p: f64, lambda: f64) -> C64 {
    C64::new(x, p) / (2.0 * lambda).sqrt()
}

/// W_{mm'}(α) of |m⟩⟨m'| for m ≥ m'; the m < m' element is its complex conjugate.
pub fn wigner_element(m: usize, mp: usize, alpha: C64) -> C64 {
    assert!(m >= mp);
    let d = m - mp;
    let r2 = alpha.norm_sqr();
    let lag = crate::special::laguerre(mp, d as f64, 4.0 * r2);
    let sign = if mp % 2 == 0 { 1.0 } else { -1.0 };
    let mag = if d == 0 {
        1.0
    } else if r2 == 0.0 {
        0.0
    } else {
        (0.5 * (ln_factorial(mp) - ln_factorial(m)) + d as f64 * (2.0 * r2.sqrt()).ln()).exp()
    };
    let phase = C64::from_polar(1.0, -(d as f64) * alpha.arg());
    phase * (sign * 2.0 / PI * mag * (-2.0 * r2).exp() * lag)
}

/// W(α) = Σ ρ_{mm'} W_{mm'}(α).
pub fn wigner_at(rho: &DensityMatrix, alpha: C64) -> f64 {
    let dim = rho.nrows();
    let r2 = alpha.norm_sqr();
    let x = 4.0 * r2;
    let ln2r = (2.0 * r2.sqrt()).ln();
    let theta = alpha.arg();
    let mut lag = Vec::with_capacity(dim);
    let mut s = 0.0;
    for d in 0..dim {
        laguerre_all(dim - 1 - d, d as f64, x, &mut lag);
        let rot = C64::from_polar(1.0, -(d as f64) * theta);
        let mut acc = C64::new(0.0, 0.0);
        for mp in 0..dim - d {
            let m = mp + d;
            let c = rho[(m, mp)];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let mag = if d == 0 {
                1.0
            } else if r2 == 0.0 {
                0.0
            } else {
                (0.5 * (ln_factorial(mp) - ln_factorial(m)) + d as f64 * ln2r).exp()
            };
            let sign = if mp % 2 == 0 { 1.0 } else { -1.0 };
            acc += c * (sign * mag * lag[mp]);
        }
        let term = (acc * rot).re;
        s += if d == 0 { term } else { 2.0 * term };
    }
    s * 2.0 / PI * (-2.0 * r2).exp()
}

/// Q(α) = ⟨α|ρ|α⟩ (no 1/π).
pub fn q_at(rho: &DensityMatrix, alpha: C64) -> f64 {
    let dim = rho.nrows();
    let mut v = Vec::with_capacity(dim);
    let mut t = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        v.push(t);
        t *= alpha / ((n + 1) as f64).sqrt();
    }
    let mut s = C64::new(0.0, 0.0);
    for i in 0..dim {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..dim {
            row += rho[(i, j)] * v[j];
        }
        s += v[i].conj() * row;
    }
    s.re
}

fn eval_grid(rho: &DensityMatrix, spec: &GridSpec, lambda: f64, kind: GridKind) -> Result<PhaseGrid> {
    spec.validate()?;
    let (xs, ps) = (spec.xs(), spec.ps());
    let f = match kind {
        GridKind::Wigner => wigner_at,
        GridKind::Q => q_at,
    };
    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| ps.iter().map(|&p| f(rho, alpha_of(x, p, lambda))).collect())
        .collect();
    let values = DMatrix::from_fn(spec.nx, spec.np, |i, j| rows[i][j]);
    Ok(PhaseGrid {
        spec: *spec,
        lambda,
        kind,
        values,
    })
}

pub fn wigner(rho: &DensityMatrix, spec: &GridSpec, lambda: f64) -> Result<PhaseGrid> {
    eval_grid(rho, spec, lambda, GridKind::Wigner)
}

pub fn q_function(rho: &DensityMatrix, spec: &GridSpec, lambda: f64) -> Result<PhaseGrid> {
    eval_grid(rho, spec, lambda, GridKind::Q)
}
