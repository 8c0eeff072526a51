//! Energy transfer in a dimer with one Brownian-oscillator bath per site,
//! on a lattice small enough to finish in seconds.
//!
//!     cargo run --release --example dimer_dynamics [lambda]

use chainmap::chain::{assemble_lattice, chain_from_density, SystemSpec};
use chainmap::mps::{init_vacuum, reflection_time, tebd_evolve, EvolutionConfig};
use chainmap::specdens::overdamped_brownian;

fn main() -> chainmap::Result<()> {
    let lambda: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100.0);
    let j = overdamped_brownian(lambda, 53.0, 1060.0)?;
    let c = chain_from_density(&j, 30)?;
    let lat = assemble_lattice(&SystemSpec::dimer(100.0, 0.0, 100.0), &[c.clone(), c], 6)?;
    let cfg = EvolutionConfig { dt: 2e-3, t_final: 0.5, chi_max: 16, measure_stride: 10, ..Default::default() };
    println!("lambda = {lambda} cm^-1; chain end reflects back after {:.2} ps", reflection_time(&lat, 1060.0));

    let (tr, _) = tebd_evolve(&lat, init_vacuum(&lat, 1, cfg.chi_max, cfg.trunc_tol)?, &cfg)?;
    println!("{:>6} {:>8} {:>9} {:>7} {:>9}", "t/ps", "p1", "Re c12", "S_max", "discarded");
    for i in 0..tr.times.len() {
        println!("{:>6.3} {:>8.4} {:>9.4} {:>7.3} {:>9.1e}", tr.times[i], tr.p1[i], tr.c12[i].re, tr.s_max[i], tr.discarded[i]);
    }
    Ok(())
}
