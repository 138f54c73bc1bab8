//! Special functions: log-factorials, Γ, generalized Laguerre polynomials and Kummer's ₁F₁.

use std::sync::OnceLock;

const LN_FACT_TABLE: usize = 1024;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..LN_FACT_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// ln(n!)
pub fn ln_factorial(n: usize) -> f64 {
    if n < LN_FACT_TABLE {
        ln_fact_table()[n]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Γ(x) for real x away from the poles.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        pi / ((pi * x).sin() * gamma(1.0 - x))
    } else {
        ln_gamma(x).exp()
    }
}

/// Generalized Laguerre polynomial L_n^{(a)}(x) by the upward three-term recurrence.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + a - x) * l1 - (kf + a) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// All L_k^{(a)}(x) for k = 0..=n.
pub fn laguerre_all(n: usize, a: f64, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if n == 0 {
        return;
    }
    out.push(1.0 + a - x);
    for k in 1..n {
        let kf = k as f64;
        let v = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
        out.push(v);
    }
}

fn is_nonpositive_integer(a: f64) -> bool {
    a <= 0.0 && a == a.round()
}

/// Kahan-compensated Taylor series of ₁F₁(a; b; z).
fn hyp1f1_taylor(a: f64, b: f64, z: f64) -> f64 {
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    for s in 0..10_000 {
        let sf = s as f64;
        term *= (a + sf) / (b + sf) * z / (sf + 1.0);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term == 0.0 || term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Large-|z| asymptotic expansion of ₁F₁(a; b; z) for real z.
fn hyp1f1_asymptotic(a: f64, b: f64, z: f64) -> f64 {
    // Two-sided form; for z < 0 the e^z branch is exponentially small
    // and for z > 0 the (-z)^{-a} branch is.
    let series = |p: f64, q: f64, w: f64| {
        let mut sum = 1.0;
        let mut term = 1.0f64;
        let mut prev = f64::INFINITY;
        for s in 0..60 {
            let sf = s as f64;
            term *= (p + sf) * (q + sf) / ((sf + 1.0) * w);
            if term.abs() > prev {
                break;
            }
            prev = term.abs();
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    };
    if z > 0.0 {
        let lead = ln_gamma(b) - ln_gamma(a) + z + (a - b) * z.ln();
        let sign = gamma(b).signum() * gamma(a).signum();
        sign * lead.exp() * series(b - a, 1.0 - a, z)
    } else {
        let w = -z;
        let lead = ln_gamma(b) - ln_gamma(b - a) - a * w.ln();
        let sign = gamma(b).signum() * gamma(b - a).signum();
        sign * lead.exp() * series(a, a - b + 1.0, w)
    }
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z) for real arguments, b not a
/// nonpositive integer.
///
/// Taylor series with compensated summation for |z| ≤ 30, asymptotic expansion beyond.
/// Negative z goes through Kummer's transformation first; terminating series (a a
/// nonpositive integer) are always summed directly.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    if is_nonpositive_integer(a) {
        return hyp1f1_taylor(a, b, z);
    }
    if z < 0.0 {
        // Kummer transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z) avoids the alternating series
        return z.exp() * hyp1f1(b - a, b, -z);
    }
    if z <= 30.0 {
        return hyp1f1_taylor(a, b, z);
    }
    hyp1f1_asymptotic(a, b, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_small_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        assert!((ln_factorial(20) - 2_432_902_008_176_640_000f64.ln()).abs() < 1e-12);
        assert!((ln_factorial(2000) - ln_gamma(2001.0)).abs() < 1e-9);
    }

    #[test]
    fn gamma_half_integer() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5) - sqrt_pi).abs() < 1e-13);
        assert!((gamma(2.5) - 0.75 * sqrt_pi).abs() < 1e-13);
        assert!((gamma(-0.5) + 2.0 * sqrt_pi).abs() < 1e-12);
    }

    fn laguerre_explicit(n: usize, a: f64, x: f64) -> f64 {
        // sum_i (-1)^i binom(n+a, n-i) x^i / i!
        let mut s = 0.0;
        for i in 0..=n {
            let ln_binom = ln_gamma(n as f64 + a + 1.0)
                - ln_gamma((n - i) as f64 + 1.0)
                - ln_gamma(a + i as f64 + 1.0);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * ln_binom.exp() * x.powi(i as i32) / ln_factorial(i).exp();
        }
        s
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        for n in 0..=10 {
            for a in [0.0, 1.0, 3.0, 4.5] {
                for x in [0.0, 0.3, 1.7, 4.0] {
                    let r = laguerre(n, a, x);
                    let e = laguerre_explicit(n, a, x);
                    assert!((r - e).abs() <= 1e-10 * (1.0 + e.abs()), "n={n} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn hyp1f1_elementary_cases() {
        // 1F1(a;a;z) = e^z
        for z in [-5.0, -0.3, 0.7, 3.0] {
            assert!((hyp1f1(2.5, 2.5, z) - f64::exp(z)).abs() < 1e-13 * f64::exp(z).max(1.0));
        }
        // 1F1(1;2;z) = (e^z - 1)/z
        let z = 1.3f64;
        assert!((hyp1f1(1.0, 2.0, z) - (z.exp() - 1.0) / z).abs() < 1e-14);
        // terminating: 1F1(-n; a+1; x) = n! a!/(n+a)! L_n^a(x)
        let (n, a, x) = (4usize, 2.0f64, 1.9f64);
        let scale = (ln_factorial(n) + ln_gamma(a + 1.0) - ln_gamma(n as f64 + a + 1.0)).exp();
        assert!((hyp1f1(-(n as f64), a + 1.0, x) - scale * laguerre(n, a, x)).abs() < 1e-13);
    }

    #[test]
    fn hyp1f1_asymptotic_branch_is_continuous() {
        // across the |z| = 30 switch point
        for (a, b) in [(1.5, 3.0), (0.25, 1.5)] {
            let lo = hyp1f1_taylor(a, b, 30.5);
            let hi = hyp1f1_asymptotic(a, b, 30.5);
            assert!((lo - hi).abs() / lo.abs() < 1e-8, "a={a} b={b}: {lo} vs {hi}");
            let lo = (-30.5f64).exp() * hyp1f1_taylor(b - a, b, 30.5);
            let hi = hyp1f1_asymptotic(a, b, -30.5);
            assert!((lo - hi).abs() / lo.abs() < 1e-8, "a={a} b={b}: {lo} vs {hi}");
        }
    }
}
