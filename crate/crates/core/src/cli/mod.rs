//! The `chainmap` command line: `chainmap map|dynamics|verify <config>`.

mod config;
mod run;
mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

pub use config::{
    DensityConfig, EvolutionSection, MappingConfig, MappingMethod, Mode, OutputConfig, RunConfig, SystemConfig,
    VerifyConfig,
};
pub use run::{build_lattice, map_chain, run_dynamics, run_map, DynamicsOutput, MapOutput, Summary};
pub use verify::{
    analytic_vs_numeric, asymptote_residual, chain_rel_diff, jacobi_decay_exponent, little_q_vs_lanczos, rabi_deviation,
    run_verify, terminal_deviation, tebd_vs_dense, tiny_lattice, Check, Report, TrotterComparison, UNIVERSALITY_TOL,
};

use crate::error::{Error, Result};

/// Environment variable read for the default of `--threads`.
pub const THREADS_ENV: &str = "CHAINMAP_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Map,
    Dynamics,
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "chainmap", version, about = "Chain mappings of bosonic baths and TEBD dimer dynamics")]
pub struct Args {
    pub command: Command,
    pub config: PathBuf,
    /// Output directory (overrides `output.dir`)
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// `key=value` applied to the config, dotted keys for nested tables
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Linear-algebra threads; 1 is sequential, 0 uses every core
    #[arg(long, env = THREADS_ENV, default_value_t = 1)]
    pub threads: usize,
}

pub fn set_threads(n: usize) {
    let par = if n == 1 { faer::Par::Seq } else { faer::Par::rayon(n) };
    faer::set_global_parallelism(par);
}

/// Runs one command, printing the verify report or the list of written
/// files. `Ok(false)` means a verify check failed.
pub fn execute(args: &Args) -> Result<bool> {
    set_threads(args.threads);
    let cfg = RunConfig::load(&args.config, &args.overrides)?;
    let wanted = match args.command {
        Command::Map => Mode::Map,
        Command::Dynamics => Mode::Dynamics,
        Command::Verify => Mode::Verify,
    };
    if let Some(m) = cfg.mode {
        if m != wanted {
            log::warn!("config says mode = {m:?}; running {wanted:?} as requested on the command line");
        }
    }
    let base = args.config.parent().unwrap_or(Path::new("."));
    let out_dir = args.out_dir.clone().unwrap_or_else(|| cfg.output.dir.clone());
    match args.command {
        Command::Map => {
            let out = run_map(&cfg, base, &out_dir)?;
            print_files(&out.files);
            Ok(true)
        }
        Command::Dynamics => {
            let mut last_decile = 0;
            let out = run_dynamics(&cfg, base, &out_dir, |step, n| {
                let decile = 10 * step / n.max(1);
                if decile > last_decile {
                    last_decile = decile;
                    log::info!("step {step}/{n}");
                }
            })?;
            print_files(&out.files);
            Ok(true)
        }
        Command::Verify => {
            let report = run_verify(&cfg, base)?;
            println!("{report}");
            std::fs::create_dir_all(&out_dir)?;
            let p = out_dir.join(format!("{}.verify.txt", cfg.output.stem));
            std::fs::write(&p, format!("{report}\n"))?;
            Ok(report.all_passed())
        }
    }
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("{}", f.display());
    }
}

/// One-line machine-parsable form: `error[E_CODE]: message`.
pub fn error_line(e: &Error) -> String {
    let msg = e.to_string().replace('\n', " ");
    format!("error[{}]: {msg}", e.code())
}
