//! Non-commutative Fourier chart of a target Hamiltonian and how well the sampled chart
//! reconstructs it, as a function of k_max.
//!
//! Usage: cargo run --release --example drive_chart [out_dir]

use qlattice::engine::build_target;
use qlattice::fockspace::{block_distance, block_norm, HilbertConfig};
use qlattice::ncft::{drive_chart, reconstruct, NcftSpec, Scenario};

fn main() -> qlattice::error::Result<()> {
    let cfg = HilbertConfig::default();
    let spec = NcftSpec::new(Scenario::EmbedBinomial, 1.4, cfg.lambda)?;
    let exact = build_target(&spec, &cfg)?;
    for k_max in [8.0, 10.0, 12.0, 14.0, 16.0] {
        let h = reconstruct(&spec, &cfg, 40, 60, k_max)?;
        let chart = drive_chart(&spec, 20, 20, k_max, 1.0)?;
        let tail = (0..=chart.n_t).map(|m| chart.amplitude[(chart.n_k, m)]).fold(0.0, f64::max);
        println!(
            "k_max = {k_max:4.1}: relative error on 12x12 block {:.3e}, edge amplitude {tail:.3e}, peak {:.3e}",
            block_distance(&h, &exact, 12) / block_norm(&exact, 12),
            chart.amplitude.max()
        );
    }
    if let Some(dir) = std::env::args().nth(1) {
        let chart = drive_chart(&spec, 20, 20, 8.0, 1.0)?;
        std::fs::create_dir_all(&dir)?;
        let files = chart.write_csv(std::path::Path::new(&dir), "chart")?;
        println!("wrote {files:?}");
    }
    Ok(())
}
