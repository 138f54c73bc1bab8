//! Wigner and Husimi Q functions of the code words on a phase-space grid, with their
//! normalization and Wigner negativity.
//!
//! Usage: cargo run --release --example phase_space [out_dir]

use qlattice::codes::{binomial_words, cat_words};
use qlattice::fockspace::{projector, HilbertConfig};
use qlattice::ncft::default_cat_alpha;
use qlattice::phase_space::{q_function, wigner, GridSpec};

fn main() -> qlattice::error::Result<()> {
    let cfg = HilbertConfig::default();
    let grid = GridSpec {
        nx: 121,
        np: 121,
        ..GridSpec::default()
    };
    let b = binomial_words(&cfg)?;
    let c = cat_words(&cfg, default_cat_alpha())?;
    let out = std::env::args().nth(1);
    for (name, psi) in [("binomial_zero", &b.zero_c), ("binomial_one", &b.one_c), ("cat_zero", &c.zero_c), ("cat_one", &c.one_c)] {
        let rho = projector(psi);
        let w = wigner(&rho, &grid, cfg.lambda)?;
        let q = q_function(&rho, &grid, cfg.lambda)?;
        println!(
            "{name:14} W: integral {:.5}, min {:+.4}   Q: integral {:.5}, max {:.4}",
            w.integral(),
            w.values.min(),
            q.integral(),
            q.values.max()
        );
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            w.write(std::path::Path::new(dir), &format!("wigner_{name}"))?;
            q.write(std::path::Path::new(dir), &format!("q_{name}"))?;
        }
    }
    Ok(())
}
