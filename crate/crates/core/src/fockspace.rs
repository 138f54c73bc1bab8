//! Truncated Fock space of one bosonic mode with [x̂, p̂] = iλ.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Operator = DMatrix<C64>;
pub type StateVector = DVector<C64>;
pub type DensityMatrix = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Width of the band of top Fock levels excluded from unitarity checks.
pub const GUARD_BAND: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HilbertConfig {
    pub dim: usize,
    pub lambda: f64,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        Self {
            dim: 60,
            lambda: 0.25,
        }
    }
}

impl HilbertConfig {
    pub fn new(dim: usize, lambda: f64) -> Result<Self> {
        let cfg = Self { dim, lambda };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Config(format!("hilbert.dim must be >= 2, got {}", self.dim)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!(
                "hilbert.lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Size of the top-left block on which truncation artifacts are negligible.
    pub fn guard(&self) -> usize {
        self.dim.saturating_sub(GUARD_BAND).max(1)
    }
}

/// Annihilation operator, ⟨n−1|â|n⟩ = √n.
pub fn ladder(cfg: &HilbertConfig) -> Operator {
    let mut a = Operator::zeros(cfg.dim, cfg.dim);
    for n in 1..cfg.dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn number(cfg: &HilbertConfig) -> Operator {
    Operator::from_diagonal(&StateVector::from_fn(cfg.dim, |n, _| C64::new(n as f64, 0.0)))
}

/// x̂ = √(λ/2)(â + â†), real symmetric tridiagonal.
pub fn position_real(cfg: &HilbertConfig) -> DMatrix<f64> {
    let s = (cfg.lambda / 2.0).sqrt();
    let mut x = DMatrix::zeros(cfg.dim, cfg.dim);
    for n in 1..cfg.dim {
        let v = s * (n as f64).sqrt();
        x[(n - 1, n)] = v;
        x[(n, n - 1)] = v;
    }
    x
}

pub fn position(cfg: &HilbertConfig) -> Operator {
    position_real(cfg).map(|v| C64::new(v, 0.0))
}

/// p̂ = −i√(λ/2)(â − â†).
pub fn momentum(cfg: &HilbertConfig) -> Operator {
    let a = ladder(cfg);
    let s = (cfg.lambda / 2.0).sqrt();
    (&a - a.adjoint()) * C64::new(0.0, -s)
}

/// f(H) for Hermitian H via its eigendecomposition.
pub fn hermitian_fn(h: &Operator, f: impl Fn(f64) -> C64) -> Operator {
    let eig = h.clone().symmetric_eigen();
    let u = &eig.eigenvectors;
    let mut left = u.clone();
    for (j, &w) in eig.eigenvalues.iter().enumerate() {
        let fw = f(w);
        left.column_mut(j).iter_mut().for_each(|c| *c *= fw);
    }
    left * u.adjoint()
}

/// exp(−i H t) for Hermitian H.
pub fn expm_hermitian(h: &Operator, t: f64) -> Operator {
    hermitian_fn(h, |w| C64::from_polar(1.0, -w * t))
}

/// e^{i(kx x̂ + kp p̂)} by exact exponentiation of the Hermitian generator.
pub fn plane_wave(cfg: &HilbertConfig, kx: f64, kp: f64) -> Operator {
    let g = position(cfg) * C64::new(kx, 0.0) + momentum(cfg) * C64::new(kp, 0.0);
    hermitian_fn(&g, |w| C64::from_polar(1.0, w))
}

/// R(θ) = e^{−iθ n̂}.
pub fn rotation(cfg: &HilbertConfig, theta: f64) -> Operator {
    Operator::from_diagonal(&rotation_diag(cfg.dim, theta))
}

pub fn rotation_diag(dim: usize, theta: f64) -> StateVector {
    StateVector::from_fn(dim, |n, _| C64::from_polar(1.0, -theta * n as f64))
}

/// Ŝ(z) = exp(½(z â² − z â†²)) for real z; Ŝ†(z) x̂ Ŝ(z) = e^{−z} x̂.
pub fn squeeze(cfg: &HilbertConfig, z: f64) -> Operator {
    let a = ladder(cfg);
    let a2 = &a * &a;
    // A = ½z(a² − a†²) is anti-Hermitian; Ŝ = exp(A) = exp(−iK) with K = iA.
    let k = (&a2 - a2.adjoint()) * C64::new(0.0, 0.5 * z);
    expm_hermitian(&k, 1.0)
}

/// Whether squeezing by z is expected to push a state occupying Fock levels ≲ `occupied`
/// into the truncation band.
pub fn squeeze_cutoff_risk(cfg: &HilbertConfig, z: f64, occupied: usize) -> bool {
    let spread = (2.0 * z.abs()).exp() * (occupied as f64 + 1.0);
    spread >= cfg.guard() as f64
}

/// P̂ = e^{iπn̂} = diag((−1)^n).
pub fn parity(cfg: &HilbertConfig) -> Operator {
    Operator::from_diagonal(&StateVector::from_fn(cfg.dim, |n, _| {
        C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    }))
}

pub fn fock(cfg: &HilbertConfig, n: usize) -> StateVector {
    let mut v = StateVector::zeros(cfg.dim);
    v[n] = C64::new(1.0, 0.0);
    v
}

pub fn normalize(v: &mut StateVector) {
    let n = v.norm();
    if n > 0.0 {
        *v /= C64::new(n, 0.0);
    }
}

pub fn projector(v: &StateVector) -> DensityMatrix {
    v * v.adjoint()
}

/// Frobenius norm of (a − b) restricted to the top-left `n`×`n` block.
pub fn block_distance(a: &Operator, b: &Operator, n: usize) -> f64 {
    let n = n.min(a.nrows()).min(b.nrows());
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            s += (a[(i, j)] - b[(i, j)]).norm_sqr();
        }
    }
    s.sqrt()
}

pub fn block_norm(a: &Operator, n: usize) -> f64 {
    let n = n.min(a.nrows());
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// ‖U†U − I‖_F on the guarded block.
pub fn unitarity_defect(u: &Operator, cfg: &HilbertConfig) -> f64 {
    let g = cfg.guard();
    let uu = u.adjoint() * u;
    block_distance(&uu, &Operator::identity(cfg.dim, cfg.dim), g)
}

pub fn hermiticity_defect(h: &Operator) -> f64 {
    (h - h.adjoint()).norm()
}

pub fn expect(op: &Operator, v: &StateVector) -> C64 {
    v.dotc(&(op * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize) -> HilbertConfig {
        HilbertConfig::new(dim, 0.25).unwrap()
    }

    #[test]
    fn ladder_elements() {
        let a = ladder(&cfg(3));
        assert_eq!(a[(0, 1)], C64::new(1.0, 0.0));
        assert!((a[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        let n = a.adjoint() * &a;
        assert!((n - number(&cfg(3))).norm() < 1e-14);
    }

    #[test]
    fn canonical_commutator_except_cutoff() {
        let c = cfg(30);
        let x = position(&c);
        let p = momentum(&c);
        let comm = &x * &p - &p * &x;
        let target = Operator::identity(30, 30) * C64::new(0.0, c.lambda);
        assert!(block_distance(&comm, &target, 29) < 1e-10);
        assert!((comm[(29, 29)] - target[(29, 29)]).norm() > 1.0);
    }

    #[test]
    fn vacuum_plane_wave_gaussian() {
        let c = cfg(40);
        let u = plane_wave(&c, 1.0, 0.0);
        let expected = (-c.lambda / 4.0).exp();
        assert!((u[(0, 0)] - C64::new(expected, 0.0)).norm() < 1e-8);
        let inv = plane_wave(&c, -1.0, 0.0);
        assert!(block_distance(&(&u * &inv), &Operator::identity(40, 40), c.guard()) < 1e-10);
        assert!((plane_wave(&c, 0.0, 0.0) - Operator::identity(40, 40)).norm() < 1e-12);
    }

    #[test]
    fn plane_wave_is_rotated_x_wave() {
        let c = cfg(60);
        let (k, th) = (1.7f64, 0.8f64);
        let direct = plane_wave(&c, k * th.cos(), k * th.sin());
        let via = rotation(&c, -th) * plane_wave(&c, k, 0.0) * rotation(&c, th);
        assert!(block_distance(&direct, &via, c.guard()) < 1e-9);
    }

    #[test]
    fn rotation_and_parity() {
        let c = cfg(12);
        let r = rotation(&c, std::f64::consts::PI);
        assert!((r - parity(&c)).norm() < 1e-12);
        let rr = rotation(&c, 0.37) * rotation(&c, -0.37);
        assert!((rr - Operator::identity(12, 12)).norm() < 1e-15);
        let p = parity(&c);
        assert_eq!((&p * fock(&c, 4))[4], C64::new(1.0, 0.0));
        assert_eq!((&p * fock(&c, 3))[3], C64::new(-1.0, 0.0));
        assert_eq!(&p * &p, Operator::identity(12, 12));
    }

    #[test]
    fn squeeze_scales_x() {
        let c = cfg(60);
        let z = 0.3;
        let s = squeeze(&c, z);
        let x = position(&c);
        let lhs = s.adjoint() * &x * &s;
        let d = block_distance(&lhs, &(x * C64::new((-z).exp(), 0.0)), 20);
        assert!(d < 1e-6, "{d}");
        let inv = squeeze(&c, z) * squeeze(&c, -z);
        assert!(block_distance(&inv, &Operator::identity(60, 60), c.guard()) < 1e-9);
        assert!((squeeze(&c, 0.0) - Operator::identity(60, 60)).norm() < 1e-12);
    }

    #[test]
    fn eigen_exponential_matches_pade_oracle() {
        let c = cfg(20);
        let g = position(&c) * C64::new(0.7, 0.0) + momentum(&c) * C64::new(-0.4, 0.0);
        let g = &g / C64::new(g.norm(), 0.0);
        let ours = expm_hermitian(&g, 1.0);
        let oracle = (g * C64::new(0.0, -1.0)).exp();
        assert!((ours - oracle).norm() < 1e-11);
    }
}
