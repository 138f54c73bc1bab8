//! Lattice gates: a PSL gate built directly and by rotating an x-gate, and a two-period
//! gate schedule compiled from a chart and multiplied out.

use std::f64::consts::PI;

use qlattice::fockspace::{block_distance, unitarity_defect, HilbertConfig};
use qlattice::gates::{psl, psl_via_rotation, xi_gate, GateParams, GateSequence, PeriodDrive};
use qlattice::ncft::{drive_chart, NcftSpec, Scenario};

fn main() -> qlattice::error::Result<()> {
    let cfg = HilbertConfig::default();
    let p = GateParams {
        zeta: 1.2,
        sigma: -0.7,
        gamma: 0.3,
        delta: 0.4,
    };
    let direct = psl(&cfg, &p)?;
    let rotated = psl_via_rotation(&cfg, &p)?;
    println!(
        "PSL unitarity defect {:.2e}, direct vs rotated on 30x30 block {:.2e}",
        unitarity_defect(&direct, &cfg),
        block_distance(&direct, &rotated, 30)
    );

    let spec = NcftSpec::new(Scenario::EmbedBinomial, 1.4, cfg.lambda)?;
    let chart = drive_chart(&spec, 20, 20, 8.0, 1.0)?;
    let periods: Vec<_> = (0..2)
        .map(|s| PeriodDrive {
            floquet_period: s,
            beta: 0.02,
            omega: 1.0,
        })
        .collect();
    let seq = GateSequence::compile(&chart, &periods)?;
    println!("{} gate records for 2 periods of a {}x{} chart", seq.records.len(), chart.n_k, chart.n_t);
    let u = seq.unitary(&cfg)?;
    let xi = xi_gate(&cfg, &chart, 0.02)?;
    println!(
        "schedule vs Xi^2 on 20x20 block: {:.2e} (period 2pi/Omega = {:.4})",
        block_distance(&u, &(&xi * &xi), 20),
        2.0 * PI / chart.omega
    );
    Ok(())
}
