//! Fitting a single Gaussian to a 1D mixture by minimizing an exact f-divergence.
//!
//! The model `p = N(μ, e^s)` is optimized in `(μ, s)` with Nelder-Mead from a
//! fixed set of restarts, and the best local minimum is returned. Mode-seeking
//! divergences land on a single component; mode-covering ones spread over all.

use crate::density::{exact_divergence, Density1D, Gaussian1D, Mixture1D, QuadratureGrid, DEFAULT_POINTS};
use crate::error::{Error, Result};
use crate::fdiv::{DivergenceKind, FDivergence};
use crate::nelder_mead::{self, NelderMeadOptions};

/// Restarts closer than this in objective value count as tied.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Starting `(μ, σ)` pairs. Empty means the default restarts for the mixture.
    pub restarts: Vec<(f64, f64)>,
    pub n_points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 2000,
            tolerance: 1e-10,
            restarts: Vec::new(),
            n_points: DEFAULT_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub kind: DivergenceKind,
    pub mean: f64,
    pub stddev: f64,
    pub value: f64,
    pub trace: Vec<(usize, f64)>,
    pub n_restarts_used: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn model(&self) -> Gaussian1D {
        Gaussian1D {
            mean: self.mean,
            stddev: self.stddev,
        }
    }
}

/// The moment-matched start followed by one start on each component.
pub fn default_restarts(q: &Mixture1D) -> Vec<(f64, f64)> {
    let mut starts = vec![(q.mean(), q.variance().sqrt())];
    starts.extend(q.components().iter().map(|c| (c.mean, c.stddev)));
    starts
}

/// `D_f(q || N(mean, stddev))` on a grid covering both densities.
pub fn objective(f: &FDivergence, q: &Mixture1D, mean: f64, stddev: f64, n_points: usize) -> Result<f64> {
    let p = Gaussian1D::new(mean, stddev)?;
    let grid = QuadratureGrid::covering(&[q, &p], n_points)?;
    exact_divergence(f, q, &p, &grid)
}

pub fn fit_gaussian(f: &FDivergence, q: &Mixture1D, opts: &FitOptions) -> Result<FitResult> {
    let starts = if opts.restarts.is_empty() {
        default_restarts(q)
    } else {
        opts.restarts.clone()
    };
    if starts.iter().any(|(m, s)| !m.is_finite() || !(*s > 0.0)) {
        return Err(Error::Config("restart stddevs must be positive".into()));
    }

    let mut best: Option<FitResult> = None;
    for &(m0, s0) in &starts {
        let nm_opts = NelderMeadOptions {
            max_iterations: opts.max_iterations,
            value_tolerance: opts.tolerance,
            initial_step: vec![0.25 * s0.max(0.1), 0.2],
        };
        let run = nelder_mead::minimize(
            |x| objective(f, q, x[0], x[1].exp(), opts.n_points).unwrap_or(f64::INFINITY),
            &[m0, s0.ln()],
            &nm_opts,
        );
        if !run.value.is_finite() {
            return Err(Error::Numerical(format!(
                "{} fit from ({m0}, {s0}) found no finite objective",
                f.kind
            )));
        }
        let candidate = FitResult {
            kind: f.kind,
            mean: run.x[0],
            stddev: run.x[1].exp(),
            value: run.value,
            trace: run.trace,
            n_restarts_used: starts.len(),
            converged: run.converged,
        };
        best = Some(match best {
            None => candidate,
            Some(b) => {
                let tied = (candidate.value - b.value).abs() <= TIE_TOLERANCE;
                if (tied && candidate.mean.abs() < b.mean.abs()) || (!tied && candidate.value < b.value) {
                    candidate
                } else {
                    b
                }
            }
        });
    }
    Ok(best.expect("at least one restart"))
}

/// `(u, f(u))` over a ratio grid.
pub fn divergence_profile(f: &FDivergence, u_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    u_grid.iter().map(|&u| f.eval(u).map(|v| (u, v))).collect()
}

/// Brute-force minimum of the fit objective over a `(μ, σ)` lattice, returned as `(μ, σ, value)`.
pub fn grid_search(
    f: &FDivergence,
    q: &Mixture1D,
    mu_range: (f64, f64),
    sigma_range: (f64, f64),
    n: usize,
    n_points: usize,
) -> Result<(f64, f64, f64)> {
    let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
    for i in 0..n {
        let mu = lin(mu_range.0, mu_range.1, i);
        for j in 0..n {
            let sigma = lin(sigma_range.0, sigma_range.1, j);
            let v = objective(f, q, mu, sigma, n_points)?;
            if v < best.2 {
                best = (mu, sigma, v);
            }
        }
    }
    Ok(best)
}

/// `(x, q(x), p(x))` rows for plotting a fit against its target.
pub fn density_curve(q: &Mixture1D, p: &Gaussian1D, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64, f64)> {
    (0..n)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64;
            (x, q.pdf(x), p.pdf(x))
        })
        .collect()
}
