//! Four-legged cat and binomial code words, sweet spots and Knill–Laflamme residuals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{HilbertConfig, Operator, StateVector, C64};
use crate::special::ln_factorial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeFamily {
    Cat4,
    Binomial,
}

#[derive(Clone, Debug)]
pub struct CodeWordSet {
    pub family: CodeFamily,
    /// Cat amplitude α (real, positive); zero for the binomial family.
    pub alpha: f64,
    pub zero_c: StateVector,
    pub one_c: StateVector,
    /// Error words, cat family only.
    pub zero_e: Option<StateVector>,
    pub one_e: Option<StateVector>,
}

impl CodeWordSet {
    pub fn code_words(&self) -> [&StateVector; 2] {
        [&self.zero_c, &self.one_c]
    }

    /// Code words followed by the error words when present.
    pub fn all_words(&self) -> Vec<&StateVector> {
        let mut v = vec![&self.zero_c, &self.one_c];
        if let (Some(a), Some(b)) = (&self.zero_e, &self.one_e) {
            v.push(a);
            v.push(b);
        }
        v
    }

    pub fn logical(&self, c0: C64, c1: C64) -> StateVector {
        &self.zero_c * c0 + &self.one_c * c1
    }
}

fn sweet_spot_residual(x: f64) -> f64 {
    x.tan() + x.tanh()
}

/// j-th positive root α² of tan α² = −tanh α², by bisection on ((j−½)π, (j+½)π).
pub fn sweet_spot(j: usize) -> f64 {
    assert!(j >= 1, "sweet spots are numbered from 1");
    let pi = std::f64::consts::PI;
    // tan runs from −∞ to +∞ across the bracket while tanh stays in (0, 1)
    let eps = 1e-12;
    let mut lo = (j as f64 - 0.5) * pi + eps;
    let mut hi = (j as f64 + 0.5) * pi - eps;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sweet_spot_residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * mid {
            break;
        }
    }
    let (rlo, rhi) = (sweet_spot_residual(lo).abs(), sweet_spot_residual(hi).abs());
    if rlo < rhi {
        lo
    } else {
        hi
    }
}

/// Residual |tan α² + tanh α²|.
pub fn sweet_spot_defect(alpha2: f64) -> f64 {
    sweet_spot_residual(alpha2).abs()
}

/// Normalization N_m of the four-coherent-state superpositions, m = 0..3.
///
/// N_{0,2} = 8e^{−α²}[cosh α² ± cos α²], N_{1,3} = 8e^{−α²}[sinh α² ± sin α²].
pub fn cat_normalization(m: usize, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let pref = 8.0 * (-a2).exp();
    match m % 4 {
        0 => pref * (a2.cosh() + a2.cos()),
        2 => pref * (a2.cosh() - a2.cos()),
        1 => pref * (a2.sinh() + a2.sin()),
        _ => pref * (a2.sinh() - a2.sin()),
    }
}

/// Smallest n_max such that the tail of Σ α^{2n}/n! beyond n_max is < tol of the sum.
pub fn cat_series_nmax(alpha: f64, tol: f64) -> usize {
    let a2 = alpha * alpha;
    let ln_a2 = a2.max(1e-300).ln();
    for n in 1..=4096usize {
        // past the peak the tail is bounded by a geometric series in a2/(n+2)
        let next = (n + 1) as f64;
        if next <= a2 {
            continue;
        }
        let ln_next = next * ln_a2 - ln_factorial(n + 1) - a2;
        let ratio = a2 / (next + 1.0);
        if ln_next.exp() / (1.0 - ratio) < tol {
            return n;
        }
    }
    4097
}

/// Fock-series cat word on residue class m mod 4 (unnormalized amplitudes α^n/√n!).
fn cat_word(dim: usize, alpha: f64, m: usize) -> StateVector {
    let mut v = StateVector::zeros(dim);
    let mut n = m;
    while n < dim {
        let ln_amp = if alpha > 0.0 {
            n as f64 * alpha.ln() - 0.5 * ln_factorial(n)
        } else if n == 0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        v[n] = C64::new(ln_amp.exp(), 0.0);
        n += 4;
    }
    v
}

/// Cat code and error words built from their Fock series.
///
/// |0̄_c⟩ on n ≡ 0, |1̄_c⟩ on n ≡ 2, |0̄_e⟩ on n ≡ 1, |1̄_e⟩ on n ≡ 3 (mod 4).
pub fn cat_words(cfg: &HilbertConfig, alpha: f64) -> Result<CodeWordSet> {
    if !(alpha > 0.0) {
        return Err(Error::Config(format!("cat amplitude must be positive, got {alpha}")));
    }
    if alpha * alpha + 6.0 * alpha >= cfg.dim as f64 {
        return Err(Error::CutoffRisk(format!(
            "alpha={alpha:.4}: alpha^2 + 6 alpha exceeds dim={}",
            cfg.dim
        )));
    }
    let nmax = cat_series_nmax(alpha, 1e-24);
    if nmax >= cfg.dim {
        return Err(Error::CutoffRisk(format!(
            "cat series needs n_max={nmax} >= dim={}",
            cfg.dim
        )));
    }
    let a2 = alpha * alpha;
    let mk = |m: usize| {
        // 4 e^{−α²/2}/√N_m · α^n/√n!
        let scale = 4.0 * (-a2 / 2.0).exp() / cat_normalization(m, alpha).sqrt();
        cat_word(cfg.dim, alpha, m) * C64::new(scale, 0.0)
    };
    Ok(CodeWordSet {
        family: CodeFamily::Cat4,
        alpha,
        zero_c: mk(0),
        one_c: mk(2),
        zero_e: Some(mk(1)),
        one_e: Some(mk(3)),
    })
}

/// |0̄_b⟩ = (|0⟩ + √3|4⟩)/2, |1̄_b⟩ = (√3|2⟩ + |6⟩)/2.
pub fn binomial_words(cfg: &HilbertConfig) -> Result<CodeWordSet> {
    if cfg.dim < 7 {
        return Err(Error::Config(format!("binomial words need dim >= 7, got {}", cfg.dim)));
    }
    let s3 = 3f64.sqrt() / 2.0;
    let mut z = StateVector::zeros(cfg.dim);
    z[0] = C64::new(0.5, 0.0);
    z[4] = C64::new(s3, 0.0);
    let mut o = StateVector::zeros(cfg.dim);
    o[2] = C64::new(s3, 0.0);
    o[6] = C64::new(0.5, 0.0);
    Ok(CodeWordSet {
        family: CodeFamily::Binomial,
        alpha: 0.0,
        zero_c: z,
        one_c: o,
        zero_e: None,
        one_e: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KlEntry {
    pub i: usize,
    pub j: usize,
    /// |⟨0̄|ε_i†ε_j|0̄⟩ − ⟨1̄|ε_i†ε_j|1̄⟩|
    pub diagonal: f64,
    /// |⟨0̄|ε_i†ε_j|1̄⟩|
    pub off_diagonal: f64,
    pub moment0: C64,
    pub moment1: C64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub entries: Vec<KlEntry>,
    pub max_residual: f64,
    pub max_diagonal: f64,
    pub max_off_diagonal: f64,
}

/// Knill–Laflamme residuals of the code words for every ordered pair of errors.
pub fn kl_matrix(words: &CodeWordSet, errors: &[Operator]) -> KlReport {
    let (w0, w1) = (&words.zero_c, &words.one_c);
    let images0: Vec<StateVector> = errors.iter().map(|e| e * w0).collect();
    let images1: Vec<StateVector> = errors.iter().map(|e| e * w1).collect();
    let mut entries = Vec::new();
    let (mut md, mut mo) = (0.0f64, 0.0f64);
    for i in 0..errors.len() {
        for j in 0..errors.len() {
            let m0 = images0[i].dotc(&images0[j]);
            let m1 = images1[i].dotc(&images1[j]);
            let off = images0[i].dotc(&images1[j]).norm();
            let diag = (m0 - m1).norm();
            md = md.max(diag);
            mo = mo.max(off);
            entries.push(KlEntry {
                i,
                j,
                diagonal: diag,
                off_diagonal: off,
                moment0: m0,
                moment1: m1,
            });
        }
    }
    KlReport {
        entries,
        max_residual: md.max(mo),
        max_diagonal: md,
        max_off_diagonal: mo,
    }
}

/// Normalized â^k|ψ⟩.
pub fn loss_image(a: &Operator, psi: &StateVector, k: usize) -> StateVector {
    let mut v = psi.clone();
    for _ in 0..k {
        v = a * v;
    }
    let n = v.norm();
    v / C64::new(n, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{ladder, number, parity};

    fn cfg() -> HilbertConfig {
        HilbertConfig::default()
    }

    #[test]
    fn first_sweet_spot() {
        let a2 = sweet_spot(1);
        // frozen from an independent scipy brentq root of tan x + tanh x
        assert!((a2 - 2.365_020_372_431_352).abs() < 1e-9, "{a2}");
        assert!(sweet_spot_defect(a2) <= 1e-12);
    }

    #[test]
    fn second_sweet_spot_bisection_oracle() {
        // independent oracle: Newton on g(x) = sin x cosh x + cos x sinh x from 2π − π/4
        let g = |x: f64| x.sin() * x.cosh() + x.cos() * x.sinh();
        let dg = |x: f64| 2.0 * x.cos() * x.cosh();
        let mut x = 2.0 * std::f64::consts::PI - std::f64::consts::FRAC_PI_4;
        for _ in 0..50 {
            x -= g(x) / dg(x);
        }
        let a2 = sweet_spot(2);
        assert!((a2 - x).abs() < 1e-10, "{a2} vs {x}");
        assert!(a2 > 1.5 * std::f64::consts::PI && a2 < 2.5 * std::f64::consts::PI);
    }

    #[test]
    fn cat_normalization_matches_coherent_sum() {
        // |α⟩+|−α⟩+|iα⟩+|−iα⟩ summed directly in the Fock basis
        let c = cfg();
        let alpha = sweet_spot(1).sqrt();
        let mut v = StateVector::zeros(c.dim);
        for (k, phase) in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)]
            .iter()
            .enumerate()
        {
            let _ = k;
            let beta = *phase * alpha;
            for n in 0..c.dim {
                let amp = (-alpha * alpha / 2.0).exp() * beta.powu(n as u32)
                    / ln_factorial(n).exp().sqrt();
                v[n] += amp;
            }
        }
        assert!((v.norm() - cat_normalization(0, alpha).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn cat_word_support_and_orthogonality() {
        let w = cat_words(&cfg(), sweet_spot(1).sqrt()).unwrap();
        let words = w.all_words();
        for (r, v) in [0usize, 2, 1, 3].iter().zip(&words) {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            for n in 0..v.len() {
                if n % 4 != *r {
                    assert_eq!(v[n], C64::new(0.0, 0.0));
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(words[i].dotc(words[j]).norm() <= 1e-12);
                }
            }
        }
        let p = parity(&cfg());
        assert!(((&p * &w.zero_c) - &w.zero_c).norm() < 1e-14);
        assert!(((&p * w.zero_e.as_ref().unwrap()) + w.zero_e.as_ref().unwrap()).norm() < 1e-14);
    }

    #[test]
    fn single_loss_maps_zero_to_one_error() {
        let c = cfg();
        let w = cat_words(&c, sweet_spot(1).sqrt()).unwrap();
        let img = loss_image(&ladder(&c), &w.zero_c, 1);
        assert!((w.one_e.as_ref().unwrap().dotc(&img).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn binomial_moments_and_kl() {
        let c = cfg();
        let w = binomial_words(&c).unwrap();
        let n = number(&c);
        let errs = vec![Operator::identity(c.dim, c.dim), ladder(&c), n.clone()];
        let rep = kl_matrix(&w, &errs);
        assert!(rep.max_residual <= 1e-12);
        let n2 = &n * &n;
        for v in w.code_words() {
            assert!((v.dotc(&(&n * v)).re - 3.0).abs() < 1e-12);
            assert!((v.dotc(&(&n2 * v)).re - 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cat_kl_on_and_off_sweet_spot() {
        let c = cfg();
        let errs = vec![Operator::identity(c.dim, c.dim), ladder(&c)];
        let on = kl_matrix(&cat_words(&c, sweet_spot(1).sqrt()).unwrap(), &errs);
        assert!(on.max_diagonal <= 1e-10, "{}", on.max_diagonal);
        let off = kl_matrix(&cat_words(&c, 1.5f64.sqrt()).unwrap(), &errs);
        assert!(off.max_diagonal > 1e-3);
    }
}
