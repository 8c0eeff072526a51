//! Matrix-product-state time evolution (TEBD) of a nearest-neighbour lattice.

mod state;
mod svd;
mod tebd;
mod tensor;
mod trajectory;

pub use state::{init_vacuum, MpsState, Sweep};
pub use svd::{truncated_svd, TruncatedSvd};
pub use tebd::{energy_expectation, reflection_time, tebd_evolve, tebd_evolve_with, EvolutionConfig, GateCache};
pub use tensor::Tensor3;
pub use trajectory::{oscillation_lifetime, swings, Trajectory};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{assemble_lattice, chain_from_density, ChainParams, LatticeHamiltonian, SystemSpec};
    use crate::oracle::{dense_build, dense_evolve, rabi_analytic, DEFAULT_DENSE_CAP};
    use crate::ops::{number, real};
    use crate::orthopoly::Source;
    use crate::specdens::overdamped_brownian;

    fn tiny(lambda: f64, n: usize, d: usize) -> LatticeHamiltonian {
        let j = overdamped_brownian(lambda, 53.0, 1060.0).unwrap();
        let c = chain_from_density(&j, n).unwrap();
        assemble_lattice(&SystemSpec::dimer(100.0, 0.0, 100.0), &[c.clone(), c], d).unwrap()
    }

    fn sup_dev(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn vacuum_observables() {
        let lat = tiny(100.0, 3, 4);
        let mut psi = init_vacuum(&lat, 1, 10, 1e-10).unwrap();
        let sys = lat.system_index();
        let p1 = real(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(psi.measure_local(p1.as_ref(), sys).unwrap().re, 1.0);
        for i in (0..lat.len()).filter(|&i| i != sys) {
            assert_eq!(psi.measure_local(number(4).as_ref(), i).unwrap().norm(), 0.0);
        }
        assert_eq!(psi.norm2(), 1.0);
        assert!((0..lat.len() - 1).all(|b| psi.bond_entropy(b).unwrap() == 0.0));
        assert!(matches!(psi.measure_local(number(3).as_ref(), 0), Err(crate::Error::DimensionMismatch { .. })));
        assert!(init_vacuum(&lat, 3, 10, 0.0).is_err());
        let e = energy_expectation(&lat, &mut psi).unwrap();
        assert!((e - 100.0).abs() < 1e-12);
    }

    #[test]
    fn bell_pair_entropy() {
        let lat = tiny(100.0, 1, 2);
        let mut psi = init_vacuum(&lat, 1, 10, 0.0).unwrap();
        // CNOT-like swap of |0,1⟩ into (|0,1⟩ + |1,0⟩)/√2 on bond 0 (boson ⊗ system)
        let h = 1.0 / 2f64.sqrt();
        let mut g = faer::Mat::<num_complex::Complex64>::zeros(4, 4);
        for p in 0..4 {
            g[(p, p)] = num_complex::Complex64::new(1.0, 0.0);
        }
        // basis p = s_boson + 2 s_sys; |0,0⟩ → (|0,0⟩ + |1,1⟩)/√2 rotation in the {0, 3} block
        g[(0, 0)] = num_complex::Complex64::new(h, 0.0);
        g[(3, 0)] = num_complex::Complex64::new(h, 0.0);
        g[(0, 3)] = num_complex::Complex64::new(-h, 0.0);
        g[(3, 3)] = num_complex::Complex64::new(h, 0.0);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        psi.apply_two_site(g.as_ref(), 0, Sweep::Right, &mut rng).unwrap();
        assert!((psi.bond_entropy(0).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!(psi.canonical_error() < 1e-12);
    }

    #[test]
    fn decoupled_dimer_follows_rabi() {
        let zero = ChainParams { eps: vec![500.0; 3], t: vec![250.0; 3], eta: 0.0, omega_c: 1000.0, source: Source::Lanczos };
        let lat = assemble_lattice(&SystemSpec::dimer(100.0, 0.0, 100.0), &[zero.clone(), zero], 3).unwrap();
        let psi = init_vacuum(&lat, 1, 8, 1e-12).unwrap();
        let cfg = EvolutionConfig { dt: 1e-4, t_final: 0.2, measure_stride: 20, ..Default::default() };
        let (tr, _) = tebd_evolve(&lat, psi, &cfg).unwrap();
        let exact: Vec<f64> = tr.times.iter().map(|&t| rabi_analytic(100.0, 100.0, t)).collect();
        assert!(sup_dev(&tr.p1, &exact) < 1e-6, "{}", sup_dev(&tr.p1, &exact));
    }

    #[test]
    fn tebd_matches_dense_and_scales_as_second_order() {
        let lat = tiny(100.0, 2, 3);
        let sys = dense_build(&lat, DEFAULT_DENSE_CAP).unwrap();
        let run = |dt: f64| {
            let cfg = EvolutionConfig { dt, t_final: 0.5, chi_max: 1000, trunc_tol: 0.0, measure_stride: (0.01 / dt).round() as usize, ..Default::default() };
            tebd_evolve(&lat, init_vacuum(&lat, 1, 1000, 0.0).unwrap(), &cfg).unwrap().0
        };
        let coarse = run(1e-3);
        let fine = run(5e-4);
        let exact = dense_evolve(&sys, &sys.initial_state(1).unwrap(), &coarse.times).unwrap();
        let e1 = sup_dev(&coarse.p1, &exact.p1);
        let e2 = sup_dev(&fine.p1, &exact.p1);
        // ~1.7e-4 here: ω·dt ≈ 0.1 for the top chain frequencies
        assert!(e1 < 1e-3, "{e1}");
        assert!((3.5..=4.5).contains(&(e1 / e2)), "{e1} {e2}");
        assert!(coarse.conservation_excess() < 1e-8);
    }

    #[test]
    fn state_vector_agrees_with_dense() {
        let lat = tiny(50.0, 2, 3);
        let sys = dense_build(&lat, DEFAULT_DENSE_CAP).unwrap();
        let cfg = EvolutionConfig { dt: 2e-4, t_final: 0.05, chi_max: 1000, trunc_tol: 0.0, measure_stride: 50, ..Default::default() };
        let (_, mut psi) = tebd_evolve(&lat, init_vacuum(&lat, 2, 1000, 0.0).unwrap(), &cfg).unwrap();
        let v = psi.to_vector();
        assert_eq!(v.len(), sys.dim());
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
        assert!(psi.canonical_error() < 1e-10);
        let e0 = 0.0;
        let e = energy_expectation(&lat, &mut psi).unwrap();
        assert!((e - e0).abs() < 1e-3 * 100.0, "{e}");
        psi.move_center(0).unwrap();
        assert!(psi.canonical_error() < 1e-10);
    }

    #[test]
    fn truncation_is_accounted() {
        let lat = tiny(300.0, 6, 4);
        let cfg = EvolutionConfig { dt: 2e-3, t_final: 0.2, chi_max: 3, trunc_tol: 1e-10, measure_stride: 5, ..Default::default() };
        let (tr, psi) = tebd_evolve(&lat, init_vacuum(&lat, 1, 3, 1e-10).unwrap(), &cfg).unwrap();
        assert!(psi.discarded > 0.0);
        assert!(tr.conservation_excess() < 1e-8);
        assert!(tr.norm_excess() <= 1e-12, "{}", tr.norm_excess());
        assert!(tr.norm2.iter().all(|&n| n <= 1.0 + 1e-12));
        let strict = EvolutionConfig { abort_discarded: Some(1e-14), ..cfg };
        assert!(matches!(
            tebd_evolve(&lat, init_vacuum(&lat, 1, 3, 1e-10).unwrap(), &strict),
            Err(crate::Error::TruncationOverflow { .. })
        ));
    }
}
