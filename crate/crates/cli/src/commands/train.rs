use clap::Args;
use fgan::density::Density;
use fgan::neural::AdamConfig;
use fgan::train::{train, GanConfig, MetricRow};

use crate::error::CliError;
use crate::output::{num, opt_num, write_csv, write_text};
use crate::settings::{output_dir, resolve, seed, Activation, Common, DensityArg, Div, FileConfig, Sizes};

pub const KEYS: &[&str] = &[
    "data",
    "fd",
    "fg",
    "steps",
    "batch",
    "lr",
    "g-lr",
    "d-lr",
    "beta1",
    "beta2",
    "latent-dim",
    "g-hidden",
    "d-hidden",
    "activation",
    "init-std",
    "d-steps",
    "log-every",
    "eval-samples",
    "samples",
    "monitor",
];

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    /// ring8, two-mode, normal:<mean>,<stddev> or a density file [default: ring8]
    #[arg(long)]
    pub data: Option<DensityArg>,
    /// Discriminator divergence [default: gan-js]
    #[arg(long)]
    pub fd: Option<Div>,
    /// Generator divergence [default: gan-alt]
    #[arg(long)]
    pub fg: Option<Div>,
    /// Alternations of discriminator and generator updates [default: 20000]
    #[arg(long)]
    pub steps: Option<u64>,
    /// [default: 128]
    #[arg(long)]
    pub batch: Option<usize>,
    /// Adam step size for both networks [default: 1e-4]
    #[arg(long)]
    pub lr: Option<f64>,
    /// Generator step size [default: --lr]
    #[arg(long)]
    pub g_lr: Option<f64>,
    /// Discriminator step size [default: --lr]
    #[arg(long)]
    pub d_lr: Option<f64>,
    /// [default: 0.5]
    #[arg(long)]
    pub beta1: Option<f64>,
    /// [default: 0.999]
    #[arg(long)]
    pub beta2: Option<f64>,
    /// [default: 2]
    #[arg(long)]
    pub latent_dim: Option<usize>,
    /// Generator hidden widths [default: 32,32]
    #[arg(long)]
    pub g_hidden: Option<Sizes>,
    /// Discriminator hidden widths [default: 32,32]
    #[arg(long)]
    pub d_hidden: Option<Sizes>,
    /// leaky-relu, leaky-relu:<slope> or tanh [default: leaky-relu:0.1]
    #[arg(long)]
    pub activation: Option<Activation>,
    /// Weight init stddev [default: 0.01]
    #[arg(long)]
    pub init_std: Option<f64>,
    /// Discriminator updates per generator update [default: 1]
    #[arg(long)]
    pub d_steps: Option<usize>,
    /// Steps between mode reports [default: 1000]
    #[arg(long)]
    pub log_every: Option<u64>,
    /// Generator samples per mode report [default: 2000]
    #[arg(long)]
    pub eval_samples: Option<usize>,
    /// Final generator samples written to samples.csv [default: 10000]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Divergence between the target and a KDE of samples, logged for 1D data [default: js]
    #[arg(long)]
    pub monitor: Option<Div>,
}

struct Resolved {
    config: GanConfig,
    data_text: String,
    samples: usize,
}

fn resolve_all(args: TrainArgs, file: &FileConfig) -> Result<Resolved, CliError> {
    let d = GanConfig::default();
    let data = resolve(args.data, file, "data", "ring8".parse().expect("valid default"))?;
    let lr = resolve(args.lr, file, "lr", d.generator_adam.lr)?;
    let beta1 = resolve(args.beta1, file, "beta1", d.generator_adam.beta1)?;
    let beta2 = resolve(args.beta2, file, "beta2", d.generator_adam.beta2)?;
    let adam = |lr| AdamConfig {
        lr,
        beta1,
        beta2,
        eps: d.generator_adam.eps,
    };
    let config = GanConfig {
        f_d: resolve(args.fd, file, "fd", Div(d.f_d))?.0,
        f_g: resolve(args.fg, file, "fg", Div(d.f_g))?.0,
        latent_dim: resolve(args.latent_dim, file, "latent-dim", d.latent_dim)?,
        generator_hidden: resolve(args.g_hidden, file, "g-hidden", Sizes(d.generator_hidden))?.0,
        discriminator_hidden: resolve(args.d_hidden, file, "d-hidden", Sizes(d.discriminator_hidden))?.0,
        hidden: resolve(args.activation, file, "activation", Activation(d.hidden))?.0,
        batch_size: resolve(args.batch, file, "batch", d.batch_size)?,
        generator_adam: adam(resolve(args.g_lr, file, "g-lr", lr)?),
        discriminator_adam: adam(resolve(args.d_lr, file, "d-lr", lr)?),
        steps: resolve(args.steps, file, "steps", d.steps)?,
        d_steps: resolve(args.d_steps, file, "d-steps", d.d_steps)?,
        seed: seed(&args.common, file)?,
        init_std: resolve(args.init_std, file, "init-std", d.init_std)?,
        log_every: resolve(args.log_every, file, "log-every", d.log_every)?,
        eval_samples: resolve(args.eval_samples, file, "eval-samples", d.eval_samples)?,
        monitor: resolve(args.monitor, file, "monitor", Div(d.monitor))?.0,
        data: data.density,
    };
    config.validate()?;
    Ok(Resolved {
        config,
        data_text: data.text,
        samples: resolve(args.samples, file, "samples", 10_000)?,
    })
}

/// The resolved settings in config-file form.
fn settings_toml(r: &Resolved) -> String {
    use toml::Value;
    let c = &r.config;
    let mut t = toml::Table::new();
    let mut put = |k: &str, v: Value| {
        t.insert(k.to_string(), v);
    };
    let int = |n: u64| Value::Integer(n as i64);
    put("data", Value::String(r.data_text.clone()));
    put("fd", Value::String(c.f_d.to_string()));
    put("fg", Value::String(c.f_g.to_string()));
    put("steps", int(c.steps));
    put("batch", int(c.batch_size as u64));
    put("g-lr", Value::Float(c.generator_adam.lr));
    put("d-lr", Value::Float(c.discriminator_adam.lr));
    put("beta1", Value::Float(c.generator_adam.beta1));
    put("beta2", Value::Float(c.generator_adam.beta2));
    put("latent-dim", int(c.latent_dim as u64));
    put("g-hidden", Value::String(Sizes(c.generator_hidden.clone()).to_string()));
    put("d-hidden", Value::String(Sizes(c.discriminator_hidden.clone()).to_string()));
    put("activation", Value::String(Activation(c.hidden).to_string()));
    put("init-std", Value::Float(c.init_std));
    put("d-steps", int(c.d_steps as u64));
    put("log-every", int(c.log_every));
    put("eval-samples", int(c.eval_samples as u64));
    put("samples", int(r.samples as u64));
    put("monitor", Value::String(c.monitor.to_string()));
    put("seed", int(c.seed));
    toml::to_string(&t).expect("flat table serializes")
}

fn metric_row(r: &MetricRow) -> Vec<String> {
    vec![
        r.step.to_string(),
        num(r.d_objective),
        num(r.g_objective),
        r.modes_covered.map(|m| m.to_string()).unwrap_or_default(),
        opt_num(r.hq_fraction),
        opt_num(r.kde_divergence),
    ]
}

pub fn run(args: TrainArgs) -> Result<(), CliError> {
    let file = FileConfig::load_for(&args.common, KEYS)?;
    let dir = output_dir(&args.common, &file)?;
    let resolved = resolve_all(args, &file)?;
    let config = &resolved.config;
    write_text(&dir.join("train_config.toml"), &settings_toml(&resolved))?;

    let mut run = train(config)?;
    write_csv(
        &dir.join("metrics.csv"),
        &[
            "step",
            "d_objective",
            "g_objective",
            "modes_covered",
            "hq_fraction",
            "kde_divergence",
        ],
        run.log.iter().map(metric_row),
    )?;
    write_text(&dir.join("generator.ckpt"), &run.state.generator.to_checkpoint())?;
    write_text(&dir.join("discriminator.ckpt"), &run.state.discriminator.to_checkpoint())?;
    if let Some(err) = run.abort {
        let context = format!("training stopped after {} steps", run.state.step());
        return Err(match CliError::from(err) {
            CliError::Usage(m) => CliError::Usage(format!("{context}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{context}: {m}")),
            other => other,
        });
    }

    let samples = run.state.eval_samples(config, resolved.samples)?;
    let header: &[&str] = match config.data {
        Density::OneD(_) => &["x"],
        Density::TwoD(_) => &["x", "y"],
    };
    write_csv(
        &dir.join("samples.csv"),
        header,
        (0..samples.rows()).map(|r| samples.row(r).iter().map(|&v| num(v)).collect()),
    )?;
    if let Some(last) = run.log.iter().rev().find(|r| r.modes_covered.is_some()) {
        println!(
            "step {}: {} modes covered, high-quality fraction {}",
            last.step,
            last.modes_covered.unwrap_or(0),
            num(last.hq_fraction.unwrap_or(0.0))
        );
    }
    Ok(())
}
