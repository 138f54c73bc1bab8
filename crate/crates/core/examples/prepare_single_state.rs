//! Adiabatic preparation of c0|0̄_b⟩ + c1|1̄_b⟩ from the vacuum with the single-state drive.
//!
//! Usage: cargo run --release --example prepare_single_state [periods] [N] [M] [k_max]

use std::f64::consts::PI;

use qlattice::codes::binomial_words;
use qlattice::engine::{run_against, Backend, ChartGrid, Drive, RampSchedule, Simulator};
use qlattice::fockspace::{fock, HilbertConfig, C64};
use qlattice::ncft::{NcftSpec, Scenario};

fn main() -> qlattice::error::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let periods = args.first().copied().unwrap_or(2000);
    let n_k = args.get(1).copied().unwrap_or(20);
    let n_t = args.get(2).copied().unwrap_or(20);

    let cfg = HilbertConfig::default();
    let (c0, c1) = (C64::new(0.5, 0.0), C64::new(0.75f64.sqrt(), 0.0));
    let spec = NcftSpec::new(Scenario::SingleState { c0, c1 }, 1.3, cfg.lambda)?;
    let k_max = std::env::args().nth(4).and_then(|a| a.parse().ok()).unwrap_or(8.0);
    let grid = ChartGrid { n_k, n_t, k_max };
    let sched = RampSchedule::standard(periods as f64 * 2.0 * PI, 0.02);
    let sim = Simulator::new(&cfg, &spec, &grid, Drive::Ramp(sched), Backend::GateSequence)?;

    let target = binomial_words(&cfg)?.logical(c0, c1);
    let t0 = std::time::Instant::now();
    let run = run_against(&sim, &fock(&cfg, 0), &target, &[])?;
    let stride = (periods / 10).max(1);
    for r in run.rows.iter().step_by(stride) {
        println!("period {:>6}  beta {:.5}  omega {:.6}  1-F {:.3e}", r.step, r.beta, r.omega, r.infidelity);
    }
    println!("final infidelity {:.4e}  ({:.1} s)", run.final_infidelity(), t0.elapsed().as_secs_f64());
    Ok(())
}
