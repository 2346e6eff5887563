use clap::Args;
use fgan::density::{Density1D, Mixture1D, DEFAULT_POINTS};
use fgan::fit::{density_curve, fit_gaussian, FitOptions, FitResult};
use fgan::FDivergence;

use crate::error::CliError;
use crate::output::{num, write_csv};
use crate::settings::{output_dir, resolve, Common, DensityArg, DivList, FileConfig};

pub const KEYS: &[&str] = &["data", "div", "max-iter", "tol", "points", "curve-points"];

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    /// Target mixture: two-mode, normal:<mean>,<stddev> or a density file [default: two-mode]
    #[arg(long)]
    pub data: Option<DensityArg>,
    /// Comma-separated divergences [default: gan-alt,rkl,js,kl]
    #[arg(long)]
    pub div: Option<DivList>,
    /// Nelder-Mead iteration cap per restart [default: 2000]
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Simplex value-spread tolerance [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Quadrature points, odd [default: 20001]
    #[arg(long)]
    pub points: Option<usize>,
    /// Rows per density curve [default: 401]
    #[arg(long)]
    pub curve_points: Option<usize>,
}

pub fn run(args: FitArgs) -> Result<(), CliError> {
    let file = FileConfig::load_for(&args.common, KEYS)?;
    let data = resolve(args.data, &file, "data", "two-mode".parse().expect("valid default"))?;
    let q = data.one_d("fit target")?.clone();
    let divs = resolve(args.div, &file, "div", "gan-alt,rkl,js,kl".parse().expect("valid default"))?;
    let defaults = FitOptions::default();
    let opts = FitOptions {
        max_iterations: resolve(args.max_iter, &file, "max-iter", defaults.max_iterations)?,
        tolerance: resolve(args.tol, &file, "tol", defaults.tolerance)?,
        n_points: resolve(args.points, &file, "points", DEFAULT_POINTS)?,
        restarts: Vec::new(),
    };
    let curve_points = resolve(args.curve_points, &file, "curve-points", 401)?;
    let dir = output_dir(&args.common, &file)?;

    // independent fits, one worker each; results are collected in input order
    let results: Vec<Result<FitResult, fgan::Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = divs
            .0
            .iter()
            .map(|&kind| {
                let (q, opts) = (&q, &opts);
                s.spawn(move || fit_gaussian(&FDivergence::new(kind), q, opts))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("fit worker panicked")).collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    for r in &results {
        if !r.converged {
            eprintln!("fgan: warning: {} fit hit the iteration cap", r.kind);
        }
        println!("{}: mu={} sigma={} value={}", r.kind, num(r.mean), num(r.stddev), num(r.value));
    }
    write_csv(
        &dir.join("fit.csv"),
        &["divergence", "mu", "sigma", "value", "converged"],
        results.iter().map(|r| {
            vec![r.kind.to_string(), num(r.mean), num(r.stddev), num(r.value), r.converged.to_string()]
        }),
    )?;
    let (lo, hi) = curve_range(&q);
    write_csv(
        &dir.join("fit_curves.csv"),
        &["divergence", "x", "q", "p"],
        results.iter().flat_map(|r| {
            density_curve(&q, &r.model(), lo, hi, curve_points)
                .into_iter()
                .map(|(x, qx, px)| vec![r.kind.to_string(), num(x), num(qx), num(px)])
        }),
    )?;
    write_csv(
        &dir.join("fit_trace.csv"),
        &["divergence", "iteration", "value"],
        results.iter().flat_map(|r| {
            r.trace
                .iter()
                .map(|(i, v)| vec![r.kind.to_string(), i.to_string(), num(*v)])
        }),
    )
}

/// Five stddevs beyond the outermost components.
fn curve_range(q: &Mixture1D) -> (f64, f64) {
    let (lo, hi, s) = q.envelope();
    (lo - 5.0 * s, hi + 5.0 * s)
}
