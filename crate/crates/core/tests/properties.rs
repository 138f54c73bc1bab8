use std::f64::consts::PI;

use proptest::prelude::*;
use qlattice::aqec::{parity_probs, project, select_outcome, LossChannel, TargetCycle};
use qlattice::codes::cat_words;
use qlattice::engine::{pure_fidelity, schedule_eval, RampSchedule};
use qlattice::fockspace::{normalize, projector, rotation, unitarity_defect, HilbertConfig, StateVector, C64};
use qlattice::gates::{psl, GateParams, GateSequence, PeriodDrive};
use qlattice::ncft::{default_cat_alpha, drive_chart, NcftSpec, Scenario};
use qlattice::phase_space::{q_at, wigner_at};
use qlattice::protocols::wrap_angle;

const DIM: usize = 24;

fn cfg() -> HilbertConfig {
    HilbertConfig::new(DIM, 0.25).unwrap()
}

/// Normalized state on the lowest `amps.len()` Fock levels.
fn state(amps: &[(f64, f64)]) -> StateVector {
    let mut v = StateVector::from_fn(DIM, |i, _| amps.get(i).map_or(C64::new(0.0, 0.0), |&(r, i)| C64::new(r, i)));
    if v.norm() < 1e-6 {
        v[0] = C64::new(1.0, 0.0);
    }
    normalize(&mut v);
    v
}

fn amps() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parity_probabilities_sum_to_one(a in amps()) {
        let rho = projector(&state(&a));
        let (p0, p1) = parity_probs(&rho);
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
        prop_assert!(p0 >= -1e-15 && p1 >= -1e-15);
        for m in 0..2 {
            let p = if m == 0 { p0 } else { p1 };
            if p > 1e-6 {
                let r = project(&rho, m).unwrap();
                prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
                let q = parity_probs(&r);
                let kept = if m == 0 { q.0 } else { q.1 };
                prop_assert!((kept - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn outcome_threshold(eps in 0.0f64..1.0, p0 in 0.0f64..1.0) {
        prop_assert_eq!(select_outcome(eps, p0), usize::from(eps >= p0));
    }

    #[test]
    fn target_cycle_has_period_four(steps in 0usize..40) {
        let mut c = TargetCycle::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        for _ in 0..steps {
            c.advance();
        }
        let before = c.index;
        for _ in 0..4 {
            c.advance();
        }
        prop_assert_eq!(c.index, before);
        prop_assert_eq!(before, steps % 4);
    }

    #[test]
    fn loss_channel_preserves_trace_and_hermiticity(a in amps(), kt in 0.0f64..3.0) {
        let rho = projector(&state(&a));
        let out = LossChannel::new(DIM, 1.0, kt).apply(&rho);
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!((&out - out.adjoint()).norm() < 1e-12);
        prop_assert!((0..DIM).all(|i| out[(i, i)].re >= -1e-14));
    }

    #[test]
    fn pure_fidelity_is_bounded_and_symmetric(a in amps(), b in amps()) {
        let (x, y) = (state(&a), state(&b));
        let f = pure_fidelity(&x, &y);
        prop_assert!((-1e-15..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - pure_fidelity(&y, &x)).abs() < 1e-14);
        prop_assert!((pure_fidelity(&x, &x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psl_is_unitary(zeta in -2.0f64..2.0, sigma in -2.0f64..2.0, gamma in -1.5f64..1.5, delta in -PI..PI) {
        prop_assume!(zeta.abs() + sigma.abs() > 1e-3);
        let c = cfg();
        let u = psl(&c, &GateParams { zeta, sigma, gamma, delta }).unwrap();
        prop_assert!(unitarity_defect(&u, &c) < 1e-10);
    }

    #[test]
    fn q_is_nonnegative_and_bounded(a in amps(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let rho = projector(&state(&a));
        let q = q_at(&rho, C64::new(re, im));
        prop_assert!((-1e-14..=1.0 + 1e-12).contains(&q));
    }

    #[test]
    fn wigner_follows_rotation(a in amps(), theta in -PI..PI, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let c = cfg();
        let psi = state(&a);
        let turned = rotation(&c, theta) * &psi;
        let alpha = C64::new(re, im);
        let w = wigner_at(&projector(&turned), alpha);
        let w0 = wigner_at(&projector(&psi), alpha * C64::from_polar(1.0, theta));
        prop_assert!((w - w0).abs() < 1e-10);
        prop_assert!(w.abs() <= 2.0 / PI + 1e-10);
    }

    #[test]
    fn cat_wigner_has_quarter_turn_symmetry(re in -2.5f64..2.5, im in -2.5f64..2.5) {
        let w = cat_words(&HilbertConfig::default(), default_cat_alpha()).unwrap();
        let alpha = C64::new(re, im);
        for psi in [&w.zero_c, &w.one_c] {
            let rho = projector(psi);
            prop_assert!((wigner_at(&rho, alpha) - wigner_at(&rho, alpha * C64::i())).abs() < 1e-10);
        }
    }

    #[test]
    fn wrap_angle_is_principal(a in -50.0f64..50.0) {
        let w = wrap_angle(a);
        prop_assert!(w > -PI && w <= PI);
        prop_assert!(((a - w) / (2.0 * PI) - ((a - w) / (2.0 * PI)).round()).abs() < 1e-9);
    }

    #[test]
    fn ramp_is_monotone(periods in 100.0f64..5000.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let s = RampSchedule::standard(periods * 2.0 * PI, 0.02);
        let (t1, t2) = (u.min(v) * s.tf, u.max(v) * s.tf);
        let (b1, w1) = schedule_eval(&s, t1);
        let (b2, w2) = schedule_eval(&s, t2);
        prop_assert!(b1 <= b2 + 1e-15 && w1 <= w2 + 1e-15);
        prop_assert!((0.0..=0.02).contains(&b1) && w1 >= s.omega_init && w2 <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sequence_length_counts_every_grid_gate(n_k in 1usize..8, n_t in 1usize..8, periods in 1usize..4) {
        let spec = NcftSpec::new(Scenario::EmbedBinomial, 1.4, 0.25).unwrap();
        let chart = drive_chart(&spec, n_k, n_t, 8.0, 1.0).unwrap();
        let pd: Vec<_> = (0..periods).map(|s| PeriodDrive { floquet_period: s, beta: 0.02, omega: 1.0 }).collect();
        let seq = GateSequence::compile(&chart, &pd).unwrap();
        prop_assert_eq!(seq.records.len(), periods * (n_k + 1) * (n_t + 1));
        prop_assert!(seq.records.windows(2).all(|w| w[0].floquet_period <= w[1].floquet_period));
    }
}
