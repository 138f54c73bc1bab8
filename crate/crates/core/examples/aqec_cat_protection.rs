//! Parity-measured cat code under photon loss: no protection, ideal target Hamiltonian, and the
//! synthesized drive.
//!
//! Usage: cargo run --release --example aqec_cat_protection [n_traj] [drive_gap] [measurements] [k_max] [N]

use qlattice::aqec::{run_ensemble, AqecConfig, Protection};
use qlattice::fockspace::HilbertConfig;

fn main() -> qlattice::error::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut base = AqecConfig::default();
    if let Some(&n) = args.first() {
        base.n_traj = n as usize;
    }
    if let Some(&g) = args.get(1) {
        base.drive_gap = g;
    }
    if let Some(&m) = args.get(2) {
        base.measurements = m as usize;
    }
    if let Some(&k) = args.get(3) {
        base.chart.k_max = k;
    }
    if let Some(&n) = args.get(4) {
        base.chart.n_k = n as usize;
    }
    let cfg = HilbertConfig::new(40, 0.25)?;
    let mut series = Vec::new();
    for p in [Protection::None, Protection::IdealTarget, Protection::Drive] {
        let t0 = std::time::Instant::now();
        let s = run_ensemble(&cfg, &AqecConfig { protection: p, ..base.clone() })?;
        println!("{p:?}: {:.1} s", t0.elapsed().as_secs_f64());
        series.push(s);
    }
    println!("{:>6} {:>22} {:>22} {:>22}", "period", "none pre/post", "ideal pre/post", "drive pre/post");
    for j in 1..series[0].post.len() {
        print!("{:>6}", series[0].post[j].time);
        for s in &series {
            print!("   {:.3e}/{:.3e}", s.pre[j].mean_infidelity, s.post[j].mean_infidelity);
        }
        println!();
    }
    Ok(())
}
