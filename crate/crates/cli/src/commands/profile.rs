use clap::Args;
use fgan::fit::divergence_profile;
use fgan::FDivergence;

use crate::error::CliError;
use crate::output::{num, write_csv};
use crate::settings::{output_dir, resolve, Common, DivList, FileConfig};

pub const KEYS: &[&str] = &["div", "u-min", "u-max", "points"];

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated divergences [default: gan-alt,kl,rkl,js]
    #[arg(long)]
    pub div: Option<DivList>,
    /// Smallest ratio [default: 0.01]
    #[arg(long)]
    pub u_min: Option<f64>,
    /// Largest ratio [default: 10]
    #[arg(long)]
    pub u_max: Option<f64>,
    /// Log-spaced grid points; u = 1 is always added when in range [default: 200]
    #[arg(long)]
    pub points: Option<usize>,
}

/// Log-spaced grid from `lo` to `hi` (both exact), with 1 inserted if inside.
pub fn ratio_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut u: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect();
    if lo <= 1.0 && 1.0 <= hi && !u.contains(&1.0) {
        u.push(1.0);
        u.sort_by(f64::total_cmp);
    }
    u
}

pub fn run(args: ProfileArgs) -> Result<(), CliError> {
    let file = FileConfig::load_for(&args.common, KEYS)?;
    let divs = resolve(args.div, &file, "div", "gan-alt,kl,rkl,js".parse().expect("valid default"))?;
    let lo = resolve(args.u_min, &file, "u-min", 0.01)?;
    let hi = resolve(args.u_max, &file, "u-max", 10.0)?;
    let n = resolve(args.points, &file, "points", 200)?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CliError::Usage(format!("need 0 < u-min < u-max, got {lo} and {hi}")));
    }
    if n < 2 {
        return Err(CliError::Usage(format!("need at least 2 points, got {n}")));
    }
    let dir = output_dir(&args.common, &file)?;
    let grid = ratio_grid(lo, hi, n);
    let mut rows = Vec::new();
    for kind in divs.0 {
        for (u, f) in divergence_profile(&FDivergence::new(kind), &grid)? {
            rows.push(vec![kind.to_string(), num(u), num(f)]);
        }
    }
    write_csv(&dir.join("profiles.csv"), &["divergence", "u", "f"], rows)
}
