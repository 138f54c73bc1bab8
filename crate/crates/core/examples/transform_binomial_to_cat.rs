//! Binomial → cat code-space transformation along h(t) with a resonant drive.
//!
//! Usage: cargo run --release --example transform_binomial_to_cat [periods] [direct] [N M k_max]

use std::f64::consts::PI;

use qlattice::engine::{Backend, ChartGrid};
use qlattice::fockspace::HilbertConfig;
use qlattice::protocols::{default_pairs, transform, TransformParams};

fn main() -> qlattice::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut p = TransformParams::default();
    if let Some(n) = args.first().and_then(|a| a.parse().ok()) {
        p.periods = n;
    }
    let backend = if args.iter().any(|a| a == "direct") {
        Backend::DirectIntegration
    } else {
        Backend::GateSequence
    };
    let nums: Vec<f64> = args.iter().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut grid = ChartGrid::default();
    if let [n, m, k] = nums[..] {
        grid = ChartGrid {
            n_k: n as usize,
            n_t: m as usize,
            k_max: k,
        };
    }
    let cfg = HilbertConfig::default();
    let t0 = std::time::Instant::now();
    let rep = transform(&cfg, &grid, &p, backend, &default_pairs()[..1])?;
    let stride = (rep.word0.rows.len() / 10).max(1);
    for ((a, b), s) in rep.word0.rows.iter().zip(&rep.word1.rows).zip(&rep.superpositions[0].record.rows).step_by(stride) {
        println!("period {:>6}  1-F0 {:.3e}  1-F1 {:.3e}  1-F(sup, updated) {:.3e}", a.step, a.infidelity, b.infidelity, s.infidelity);
    }
    println!("final: word0 {:.3e}, word1 {:.3e}", rep.word0.final_infidelity(), rep.word1.final_infidelity());
    for s in &rep.superpositions {
        println!("dphi {:.4} pi, 1-F updated {:.3e}, plain {:.3e}", s.dphi / PI, 1.0 - s.fidelity_updated, 1.0 - s.fidelity_plain);
    }
    println!("({:.1} s)", t0.elapsed().as_secs_f64());
    Ok(())
}
