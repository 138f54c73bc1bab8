//! Embedding of the binomial code space: |0⟩ → |0̄_b⟩, |2⟩ → |1̄_b⟩ under one drive, and the
//! relative phase picked up by superpositions.
//!
//! Usage: cargo run --release --example embed_binomial [periods] [gap]

use std::f64::consts::PI;

use qlattice::engine::{Backend, ChartGrid};
use qlattice::fockspace::HilbertConfig;
use qlattice::protocols::{default_pairs, embed, RampParams};

fn main() -> qlattice::error::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ramp = RampParams {
        periods: args.first().copied().unwrap_or(2000.0),
        beta_f: 0.02,
        omega_init: None,
    };
    let gap = args.get(1).copied().unwrap_or(1.4);
    let cfg = HilbertConfig::default();
    let t0 = std::time::Instant::now();
    let rep = embed(&cfg, &ChartGrid::default(), gap, &ramp, Backend::GateSequence, &default_pairs())?;
    println!("|0> -> |0_b>: 1-F = {:.3e}", rep.word0.final_infidelity());
    println!("|2> -> |1_b>: 1-F = {:.3e}", rep.word1.final_infidelity());
    for s in &rep.superpositions {
        println!(
            "c0={:.3} c1={:.3}: dphi = {:.4} pi, 1-F updated {:.3e}, plain {:.3e}",
            s.c0.re,
            s.c1.re,
            s.dphi / PI,
            1.0 - s.fidelity_updated,
            1.0 - s.fidelity_plain
        );
    }
    println!("({:.1} s)", t0.elapsed().as_secs_f64());
    Ok(())
}
