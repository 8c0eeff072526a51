//! What site 39 of a Brownian-oscillator chain sees when the rest of the
//! chain is diagonalized: a semicircle on [0, wc].
//!
//!     cargo run --release --example terminal_density

use chainmap::chain::{chain_from_density, terminal_spectral_density};
use chainmap::specdens::overdamped_brownian;

fn main() -> chainmap::Result<()> {
    let j = overdamped_brownian(100.0, 53.0, 1060.0)?;
    let c = chain_from_density(&j, 40)?;
    let td = terminal_spectral_density(&c, 39, 2000)?;
    let (w, rho) = td.smoothed(20);
    let peak = rho.iter().cloned().fold(0.0, f64::max);
    for (w, r) in w.iter().zip(&rho) {
        println!("{w:>8.1} {:>10.4} {}", r, "#".repeat((50.0 * r / peak).round() as usize));
    }
    println!("normalized L2 deviation from C sqrt(w (wc - w)): {:.3}", td.semicircle_deviation(40));
    Ok(())
}
