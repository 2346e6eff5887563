use clap::Args;
use fgan::density::{Density1D, QuadratureGrid, DEFAULT_POINTS};
use fgan::neural::{AdamConfig, Matrix};
use fgan::train::{ratio_accuracy, train_ratio_estimator, RatioConfig, HIGH_DENSITY};
use fgan::FDivergence;

use crate::error::CliError;
use crate::output::{num, write_csv, write_text};
use crate::settings::{output_dir, resolve, seed, Activation, Common, DensityArg, Div, FileConfig, Sizes};

pub const KEYS: &[&str] = &[
    "q", "p", "fd", "steps", "batch", "lr", "beta1", "beta2", "hidden", "activation", "init-std", "points",
];

#[derive(Debug, Clone, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub common: Common,
    /// Data density q [default: normal:0.5,1]
    #[arg(long)]
    pub q: Option<DensityArg>,
    /// Model density p [default: normal:-0.5,1]
    #[arg(long)]
    pub p: Option<DensityArg>,
    /// Discriminator divergence [default: gan-js]
    #[arg(long)]
    pub fd: Option<Div>,
    /// Discriminator updates [default: 5000]
    #[arg(long)]
    pub steps: Option<u64>,
    /// Samples per density per update [default: 1024]
    #[arg(long)]
    pub batch: Option<usize>,
    /// Adam step size [default: 3e-4]
    #[arg(long)]
    pub lr: Option<f64>,
    /// [default: 0.5]
    #[arg(long)]
    pub beta1: Option<f64>,
    /// [default: 0.999]
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Hidden layer widths [default: 32,32]
    #[arg(long)]
    pub hidden: Option<Sizes>,
    /// leaky-relu, leaky-relu:<slope> or tanh [default: leaky-relu:0.1]
    #[arg(long)]
    pub activation: Option<Activation>,
    /// Weight init stddev [default: 0.3]
    #[arg(long)]
    pub init_std: Option<f64>,
    /// Evaluation grid points [default: 20001]
    #[arg(long)]
    pub points: Option<usize>,
}

pub fn run(args: RatioArgs) -> Result<(), CliError> {
    let file = FileConfig::load_for(&args.common, KEYS)?;
    let q_arg = resolve(args.q, &file, "q", "normal:0.5,1".parse().expect("valid default"))?;
    let p_arg = resolve(args.p, &file, "p", "normal:-0.5,1".parse().expect("valid default"))?;
    let (q, p) = (q_arg.one_d("q")?, p_arg.one_d("p")?);
    let d = RatioConfig::default();
    let config = RatioConfig {
        f_d: resolve(args.fd, &file, "fd", Div(d.f_d))?.0,
        hidden_sizes: resolve(args.hidden, &file, "hidden", Sizes(d.hidden_sizes))?.0,
        hidden: resolve(args.activation, &file, "activation", Activation(d.hidden))?.0,
        batch_size: resolve(args.batch, &file, "batch", d.batch_size)?,
        adam: AdamConfig {
            lr: resolve(args.lr, &file, "lr", d.adam.lr)?,
            beta1: resolve(args.beta1, &file, "beta1", d.adam.beta1)?,
            beta2: resolve(args.beta2, &file, "beta2", d.adam.beta2)?,
            eps: d.adam.eps,
        },
        steps: resolve(args.steps, &file, "steps", d.steps)?,
        seed: seed(&args.common, &file)?,
        init_std: resolve(args.init_std, &file, "init-std", d.init_std)?,
    };
    let points = resolve(args.points, &file, "points", DEFAULT_POINTS)?;
    let dir = output_dir(&args.common, &file)?;

    let (disc, _) = train_ratio_estimator(&config, q, p)?;
    write_text(&dir.join("discriminator.ckpt"), &disc.to_checkpoint())?;
    let f_d = FDivergence::new(config.f_d);
    let grid = QuadratureGrid::covering(&[q, p], points)?;
    let acc = ratio_accuracy(&disc, &f_d, q, p, &grid)?;

    let xs: Vec<f64> = grid.nodes().filter(|&x| q.pdf(x) + p.pdf(x) > HIGH_DENSITY).collect();
    let v = disc.predict(&Matrix::column(&xs))?;
    let mut rows = Vec::with_capacity(xs.len());
    for (&x, &vi) in xs.iter().zip(v.as_slice()) {
        let est = f_d.ratio_from_logit(vi)?.ln();
        rows.push(vec![num(x), num(q.pdf(x)), num(p.pdf(x)), num(q.ln_pdf(x) - p.ln_pdf(x)), num(est)]);
    }
    write_csv(
        &dir.join("ratio_eval.csv"),
        &["x", "q", "p", "true_log_ratio", "est_log_ratio"],
        rows,
    )?;
    write_csv(
        &dir.join("ratio_report.csv"),
        &["steps", "mean_abs_error", "clamp_fraction", "n_points"],
        [vec![
            config.steps.to_string(),
            num(acc.mean_abs_error),
            num(acc.clamp_fraction),
            acc.n_points.to_string(),
        ]],
    )?;
    println!(
        "mean |log-ratio error| = {} nats over {} points; clamped fraction = {}",
        num(acc.mean_abs_error),
        acc.n_points,
        num(acc.clamp_fraction)
    );
    Ok(())
}
