//! TEBD against exact propagation of the same truncated Hamiltonian, and the
//! second-order Trotter error on halving the step.
//!
//!     cargo run --release --example dense_check

use chainmap::chain::SystemSpec;
use chainmap::cli::{tebd_vs_dense, tiny_lattice};
use chainmap::specdens::overdamped_brownian;

fn main() -> chainmap::Result<()> {
    let j = overdamped_brownian(100.0, 53.0, 1060.0)?;
    let lat = tiny_lattice(&j, &SystemSpec::dimer(100.0, 0.0, 100.0), 2, 3)?;
    println!("lattice dims {:?}", lat.dims());
    for dt in [4e-3, 2e-3, 1e-3] {
        let c = tebd_vs_dense(&lat, dt, 0.5, 2)?;
        println!("dt = {dt:.0e} ps: sup |p1 - exact| = {:.3e}, ratio to dt/2 = {:.3}", c.coarse, c.coarse / c.fine);
    }
    Ok(())
}
