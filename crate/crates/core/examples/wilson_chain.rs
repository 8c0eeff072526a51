//! Logarithmic discretization of a power-law bath and its chain from the
//! little q-Jacobi polynomials, checked against Lanczos and exact moments.
//!
//!     cargo run --release --example wilson_chain

use chainmap::chain::build_chain;
use chainmap::orthopoly::{lanczos_rkpw, little_q_jacobi_chain, log_discretize, moment_oracle};

fn main() -> chainmap::Result<()> {
    let (s, delta, n) = (1.0, 2.0, 20);
    let log = log_discretize(0.05, s, 1000.0, delta, n + 60)?;
    let closed = little_q_jacobi_chain(&log, n)?;
    let lanczos = lanczos_rkpw(&log.discrete_measure()?, n)?;
    let small = lanczos_rkpw(&log.discrete_measure()?, 6)?;
    let exact = moment_oracle(&log.discrete_measure()?, 6)?;

    let chain = build_chain(&closed, 1000.0, n - 1)?;
    println!("{:>3} {:>14} {:>14} {:>10}", "n", "eps_n", "t_n", "t_n/t_n-1");
    for k in 0..n - 1 {
        let ratio = if k > 0 { chain.t[k] / chain.t[k - 1] } else { f64::NAN };
        println!("{k:>3} {:>14.6e} {:>14.6e} {ratio:>10.5}", chain.eps[k], chain.t[k]);
    }
    let rel = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max);
    println!("closed form vs Lanczos: alpha {:.1e}, beta {:.1e}", rel(&closed.alpha, &lanczos.alpha), rel(&closed.beta, &lanczos.beta));
    println!("Lanczos vs exact rational moments (n < 6): alpha {:.1e}, beta {:.1e}", rel(&small.alpha, &exact.alpha), rel(&small.beta, &exact.beta));
    println!("successive hoppings shrink towards 1/Delta: {:.5} vs {:.5}", chain.t[n - 2] / chain.t[n - 3], 1.0 / delta);
    Ok(())
}
