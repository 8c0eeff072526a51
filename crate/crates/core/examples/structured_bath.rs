//! A structured spectral density (two super-Ohmic components plus one
//! undamped vibration) and what the discrete line does to the chain.
//!
//!     cargo run --release --example structured_bath

use chainmap::chain::chain_from_density;
use chainmap::specdens::adolphs_renger;

fn main() -> chainmap::Result<()> {
    let with = adolphs_renger(100.0, 0.22, 180.0, 0.5, 1.95, 1000.0)?;
    let without = adolphs_renger(100.0, 0.0, 180.0, 0.5, 1.95, 1000.0)?;
    println!("reorganization energy: {:.3} cm^-1 with the mode, {:.3} without", with.reorganization_energy()?, without.reorganization_energy()?);

    let (a, b) = (chain_from_density(&with, 12)?, chain_from_density(&without, 12)?);
    println!("head coupling: {:.3} vs {:.3} cm^-1", a.system_coupling(), b.system_coupling());
    println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "n", "eps (line)", "eps", "t (line)", "t");
    for n in 0..12 {
        println!("{n:>3} {:>12.4} {:>12.4} {:>12.4} {:>12.4}", a.eps[n], b.eps[n], a.t[n], b.t[n]);
    }
    Ok(())
}
