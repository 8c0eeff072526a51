//! Chain coefficients of an Ohmic bath two ways: the closed-form Jacobi
//! recurrence and adaptive quadrature plus Lanczos.
//!
//!     cargo run --release --example ohmic_chain

use chainmap::chain::{asymptote_convergence, build_chain, chain_from_density};
use chainmap::cli::chain_rel_diff;
use chainmap::orthopoly::{adaptive_recurrence, jacobi_recurrence};
use chainmap::specdens::power_law;

fn main() -> chainmap::Result<()> {
    let (alpha, s, wc, n) = (0.05, 1.0, 1000.0, 100);
    let j = power_law(alpha, s, wc)?;
    let exact = build_chain(&jacobi_recurrence(s, n + 1)?.with_total_mass(j.total_mass()?), wc, n)?;
    let numeric = build_chain(&adaptive_recurrence(&j.to_unit_measure()?, n + 1)?, wc, n)?;

    println!("eta = {:.6} cm^-1, system coupling = {:.6} cm^-1", exact.eta, exact.system_coupling());
    println!("{:>4} {:>14} {:>14}", "n", "eps_n", "t_n");
    for k in [0, 1, 2, 5, 10, 50, 99] {
        println!("{k:>4} {:>14.8} {:>14.8}", exact.eps[k], exact.t[k]);
    }
    println!("max relative difference, closed form vs Lanczos: {:.2e}", chain_rel_diff(&numeric, &exact));

    let a = asymptote_convergence(&chain_from_density(&j, n)?, 1e-3)?;
    println!("within 1e-3 of (wc/2, wc/4) from site {}", a.n_star);
    Ok(())
}
