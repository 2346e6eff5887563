//! The `fgan` command-line tool.
//!
//! Each subcommand writes CSV files into the output directory (`--out`, else the
//! `FGAN_OUT_DIR` environment variable, else the current directory):
//!
//! | command | file | columns |
//! |---|---|---|
//! | `profile` | `profiles.csv` | `divergence,u,f` |
//! | `fit` | `fit.csv` | `divergence,mu,sigma,value,converged` |
//! | `fit` | `fit_curves.csv` | `divergence,x,q,p` |
//! | `fit` | `fit_trace.csv` | `divergence,iteration,value` |
//! | `train` | `metrics.csv` | `step,d_objective,g_objective,modes_covered,hq_fraction,kde_divergence` |
//! | `train` | `samples.csv` | `x` or `x,y` |
//! | `ratio-eval` | `ratio_eval.csv` | `x,q,p,true_log_ratio,est_log_ratio` |
//! | `ratio-eval` | `ratio_report.csv` | `steps,mean_abs_error,clamp_fraction,n_points` |
//!
//! `train` also writes `generator.ckpt`, `discriminator.ckpt` and the resolved
//! settings as `train_config.toml`, which can be passed back with `--config`.
//! `ratio-eval` writes its `discriminator.ckpt`.
//!
//! Exit codes: 0 on success (a fit that hit its iteration cap still counts), 1 for
//! usage errors, 2 when a computation fails numerically.

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod error;
pub mod output;
pub mod settings;

pub use error::{CliError, EXIT_NUMERICAL, EXIT_USAGE};
pub use settings::OUT_DIR_ENV;

#[derive(Debug, Parser)]
#[command(name = "fgan", version, about = "f-divergence GAN experiments on toy densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate f(u) for a list of divergences
    Profile(commands::profile::ProfileArgs),
    /// Fit a single Gaussian to a 1D mixture under each divergence
    Fit(commands::fit::FitArgs),
    /// Train a GAN with a chosen discriminator and generator divergence
    Train(commands::train::TrainArgs),
    /// Train a discriminator between two fixed 1D densities and score its density ratio
    RatioEval(commands::ratio::RatioArgs),
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Profile(a) => commands::profile::run(a),
        Command::Fit(a) => commands::fit::run(a),
        Command::Train(a) => commands::train::run(a),
        Command::RatioEval(a) => commands::ratio::run(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fgan: {e}");
            e.exit_code()
        }
    }
}
