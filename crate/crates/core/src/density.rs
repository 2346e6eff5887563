//! Analytic Gaussian densities and the quadrature oracle.
//!
//! Divergences and variational lower bounds between 1D densities are computed
//! with composite Simpson quadrature on a uniform grid wide enough to cover
//! both densities. Integrands are built from log densities so that tails where
//! one density underflows still contribute their exact limit.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdiv::FDivergence;
use crate::math::{log_sum_exp, weighted};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Default number of Simpson nodes.
pub const DEFAULT_POINTS: usize = 20001;
/// Half-width of the integration envelope, in standard deviations.
pub const ENVELOPE_SIGMAS: f64 = 10.0;

/// A density on the real line.
pub trait Density1D {
    fn ln_pdf(&self, x: f64) -> f64;

    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64
    where
        Self: Sized;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64>
    where
        Self: Sized,
    {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    /// `(lo, hi)` such that the density is negligible outside
    /// `[lo - ENVELOPE_SIGMAS·s, hi + ENVELOPE_SIGMAS·s]`, returned with `s`.
    fn envelope(&self) -> (f64, f64, f64);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian1D {
    pub mean: f64,
    pub stddev: f64,
}

impl Gaussian1D {
    pub fn new(mean: f64, stddev: f64) -> Result<Self> {
        if !mean.is_finite() || !(stddev > 0.0) || !stddev.is_finite() {
            return Err(Error::Config(format!(
                "gaussian needs finite mean and positive stddev, got ({mean}, {stddev})"
            )));
        }
        Ok(Gaussian1D { mean, stddev })
    }

    pub fn standard() -> Self {
        Gaussian1D {
            mean: 0.0,
            stddev: 1.0,
        }
    }
}

impl Density1D for Gaussian1D {
    fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.stddev;
        -0.5 * z * z - self.stddev.ln() - LN_SQRT_2PI
    }

    fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mean + self.stddev * z
    }

    fn envelope(&self) -> (f64, f64, f64) {
        (self.mean, self.mean, self.stddev)
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Config("mixture needs at least one component".into()));
    }
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::Config("mixture weights must be positive".into()));
    }
    let s: f64 = weights.iter().sum();
    if (s - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::Config(format!("mixture weights sum to {s}, not 1")));
    }
    Ok(())
}

/// Picks a component index proportionally to `weights`.
fn pick_component<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mixture1D {
    weights: Vec<f64>,
    components: Vec<Gaussian1D>,
}

impl Mixture1D {
    pub fn new(components: Vec<(f64, Gaussian1D)>) -> Result<Self> {
        let (weights, components): (Vec<f64>, Vec<Gaussian1D>) = components.into_iter().unzip();
        check_weights(&weights)?;
        Ok(Mixture1D {
            weights,
            components,
        })
    }

    /// `0.5·N(−2, 0.5²) + 0.5·N(2, 0.5²)`, the two-mode fixture used throughout.
    pub fn two_mode() -> Self {
        Mixture1D {
            weights: vec![0.5, 0.5],
            components: vec![
                Gaussian1D {
                    mean: -2.0,
                    stddev: 0.5,
                },
                Gaussian1D {
                    mean: 2.0,
                    stddev: 0.5,
                },
            ],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Gaussian1D] {
        &self.components
    }

    pub fn mean(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.components)
            .map(|(w, c)| w * c.mean)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.weights
            .iter()
            .zip(&self.components)
            .map(|(w, c)| w * (c.stddev * c.stddev + (c.mean - m) * (c.mean - m)))
            .sum()
    }
}

impl From<Gaussian1D> for Mixture1D {
    fn from(g: Gaussian1D) -> Self {
        Mixture1D {
            weights: vec![1.0],
            components: vec![g],
        }
    }
}

impl Density1D for Mixture1D {
    fn ln_pdf(&self, x: f64) -> f64 {
        if self.components.len() == 1 {
            return self.components[0].ln_pdf(x);
        }
        log_sum_exp(
            self.weights
                .iter()
                .zip(&self.components)
                .map(|(w, c)| w.ln() + c.ln_pdf(x)),
        )
    }

    fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let i = pick_component(&self.weights, rng);
        self.components[i].sample_one(rng)
    }

    fn envelope(&self) -> (f64, f64, f64) {
        let lo = self.components.iter().map(|c| c.mean).fold(f64::INFINITY, f64::min);
        let hi = self.components.iter().map(|c| c.mean).fold(f64::NEG_INFINITY, f64::max);
        let s = self.components.iter().map(|c| c.stddev).fold(0.0, f64::max);
        (lo, hi, s)
    }
}

/// Mixture of isotropic 2D Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture2D {
    weights: Vec<f64>,
    means: Vec<[f64; 2]>,
    stddevs: Vec<f64>,
}

impl Mixture2D {
    pub fn new(weights: Vec<f64>, means: Vec<[f64; 2]>, stddevs: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        if means.len() != weights.len() || stddevs.len() != weights.len() {
            return Err(Error::Config(
                "mixture weights, means and stddevs must have equal length".into(),
            ));
        }
        if stddevs.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::Config("mixture stddevs must be positive".into()));
        }
        Ok(Mixture2D {
            weights,
            means,
            stddevs,
        })
    }

    /// `n` equally weighted modes evenly spaced on a circle.
    pub fn ring(n: usize, radius: f64, stddev: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("ring needs at least one mode".into()));
        }
        let means = (0..n)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                [radius * a.cos(), radius * a.sin()]
            })
            .collect();
        // equal weights that sum to exactly one regardless of n
        let mut weights = vec![1.0 / n as f64; n];
        let s: f64 = weights.iter().sum();
        weights[n - 1] += 1.0 - s;
        Mixture2D::new(weights, means, vec![stddev; n])
    }

    /// Eight modes of stddev 0.05 on a circle of radius 2.
    pub fn ring8() -> Self {
        Mixture2D::ring(8, 2.0, 0.05).expect("valid ring")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[[f64; 2]] {
        &self.means
    }

    pub fn stddevs(&self) -> &[f64] {
        &self.stddevs
    }

    pub fn ln_pdf(&self, x: [f64; 2]) -> f64 {
        log_sum_exp(self.weights.iter().zip(&self.means).zip(&self.stddevs).map(
            |((w, m), s)| {
                let dx = (x[0] - m[0]) / s;
                let dy = (x[1] - m[1]) / s;
                w.ln() - 0.5 * (dx * dx + dy * dy) - 2.0 * s.ln() - 2.0 * LN_SQRT_2PI
            },
        ))
    }

    pub fn pdf(&self, x: [f64; 2]) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        let i = pick_component(&self.weights, rng);
        let zx: f64 = rng.sample(StandardNormal);
        let zy: f64 = rng.sample(StandardNormal);
        [
            self.means[i][0] + self.stddevs[i] * zx,
            self.means[i][1] + self.stddevs[i] * zy,
        ]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<[f64; 2]> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }
}

/// Any supported analytic density, as read from a config file.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    OneD(Mixture1D),
    TwoD(Mixture2D),
}

impl Density {
    pub fn dim(&self) -> usize {
        match self {
            Density::OneD(_) => 1,
            Density::TwoD(_) => 2,
        }
    }

    /// Parses the text form:
    ///
    /// ```toml
    /// type = "mixture1d"          # gaussian | mixture1d | mixture2d | ring
    /// weights = [0.5, 0.5]        # optional, uniform by default
    /// means = [-2.0, 2.0]         # [[x, y], ...] for mixture2d
    /// stddevs = [0.5, 0.5]
    /// ```
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let spec: DensitySpec = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }

    pub fn to_toml_string(&self) -> String {
        let spec = DensitySpec::from(self);
        toml::to_string(&spec).expect("density spec serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Means {
    OneD(Vec<f64>),
    TwoD(Vec<[f64; 2]>),
}

/// Serialized form of a [`Density`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Means>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stddevs: Option<Vec<f64>>,
    /// Only for `ring`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl DensitySpec {
    pub fn build(&self) -> Result<Density> {
        let uniform = |n: usize| -> Vec<f64> {
            let mut w = vec![1.0 / n as f64; n];
            let s: f64 = w.iter().sum();
            if n > 0 {
                w[n - 1] += 1.0 - s;
            }
            w
        };
        let stddevs = || {
            self.stddevs
                .clone()
                .ok_or_else(|| Error::Config(format!("{} density needs stddevs", self.kind)))
        };
        match self.kind.as_str() {
            "gaussian" | "mixture1d" => {
                let means = match &self.means {
                    Some(Means::OneD(m)) => m.clone(),
                    Some(Means::TwoD(_)) => {
                        return Err(Error::Config(format!("{} needs scalar means", self.kind)))
                    }
                    None => return Err(Error::Config(format!("{} needs means", self.kind))),
                };
                let stddevs = stddevs()?;
                if stddevs.len() != means.len() {
                    return Err(Error::Config("means and stddevs differ in length".into()));
                }
                if self.kind == "gaussian" && means.len() != 1 {
                    return Err(Error::Config("gaussian takes exactly one mean".into()));
                }
                let weights = self.weights.clone().unwrap_or_else(|| uniform(means.len()));
                if weights.len() != means.len() {
                    return Err(Error::Config("weights and means differ in length".into()));
                }
                let comps = weights
                    .into_iter()
                    .zip(means.iter().zip(&stddevs))
                    .map(|(w, (m, s))| Gaussian1D::new(*m, *s).map(|g| (w, g)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Density::OneD(Mixture1D::new(comps)?))
            }
            "mixture2d" => {
                let means = match &self.means {
                    Some(Means::TwoD(m)) => m.clone(),
                    Some(Means::OneD(m)) if m.is_empty() => Vec::new(),
                    _ => return Err(Error::Config("mixture2d needs [[x, y], ...] means".into())),
                };
                let stddevs = stddevs()?;
                let weights = self.weights.clone().unwrap_or_else(|| uniform(means.len()));
                Ok(Density::TwoD(Mixture2D::new(weights, means, stddevs)?))
            }
            "ring" => {
                let n = self.modes.unwrap_or(8);
                let radius = self.radius.unwrap_or(2.0);
                let s = match self.stddevs.as_deref() {
                    None => 0.05,
                    Some([s]) => *s,
                    Some(_) => return Err(Error::Config("ring takes a single stddev".into())),
                };
                Ok(Density::TwoD(Mixture2D::ring(n, radius, s)?))
            }
            other => Err(Error::Config(format!(
                "unknown density type '{other}' (valid: gaussian, mixture1d, mixture2d, ring)"
            ))),
        }
    }
}

impl From<&Density> for DensitySpec {
    fn from(d: &Density) -> Self {
        match d {
            Density::OneD(m) => DensitySpec {
                kind: "mixture1d".into(),
                weights: Some(m.weights.clone()),
                means: Some(Means::OneD(m.components.iter().map(|c| c.mean).collect())),
                stddevs: Some(m.components.iter().map(|c| c.stddev).collect()),
                modes: None,
                radius: None,
            },
            Density::TwoD(m) => DensitySpec {
                kind: "mixture2d".into(),
                weights: Some(m.weights.clone()),
                means: Some(Means::TwoD(m.means.clone())),
                stddevs: Some(m.stddevs.clone()),
                modes: None,
                radius: None,
            },
        }
    }
}

/// Uniform Simpson grid on `[lo, hi]` with an odd number of nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl QuadratureGrid {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Config(format!("grid bounds [{lo}, {hi}] invalid")));
        }
        if n_points < 3 || n_points % 2 == 0 {
            return Err(Error::Config(format!(
                "simpson grid needs an odd number of points >= 3, got {n_points}"
            )));
        }
        Ok(QuadratureGrid { lo, hi, n_points })
    }

    /// Grid spanning every density's means ± `ENVELOPE_SIGMAS` times the largest stddev.
    pub fn covering(densities: &[&dyn EnvelopeOf], n_points: usize) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut s: f64 = 0.0;
        for d in densities {
            let (a, b, sd) = d.envelope_of();
            lo = lo.min(a);
            hi = hi.max(b);
            s = s.max(sd);
        }
        QuadratureGrid::new(lo - ENVELOPE_SIGMAS * s, hi + ENVELOPE_SIGMAS * s, n_points)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.n_points).map(move |i| {
            if i == self.n_points - 1 {
                self.hi
            } else {
                self.lo + h * i as f64
            }
        })
    }

    /// Composite Simpson weight of node `i`.
    fn weight(&self, i: usize) -> f64 {
        let h = self.step();
        if i == 0 || i == self.n_points - 1 {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes()
            .enumerate()
            .map(|(i, x)| self.weight(i) * f(x))
            .sum()
    }

    /// Like [`integrate`](Self::integrate) but stops at the first error.
    pub fn try_integrate(&self, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (i, x) in self.nodes().enumerate() {
            acc += self.weight(i) * f(x)?;
        }
        Ok(acc)
    }
}

/// Object-safe view of [`Density1D::envelope`], for building grids over mixed types.
pub trait EnvelopeOf {
    fn envelope_of(&self) -> (f64, f64, f64);
}

impl<D: Density1D> EnvelopeOf for D {
    fn envelope_of(&self) -> (f64, f64, f64) {
        self.envelope()
    }
}

/// `D_f(q || p) = ∫ p f(q/p) dx` by Simpson quadrature.
pub fn exact_divergence<Q, P>(f: &FDivergence, q: &Q, p: &P, grid: &QuadratureGrid) -> Result<f64>
where
    Q: Density1D + ?Sized,
    P: Density1D + ?Sized,
{
    grid.try_integrate(|x| {
        let v = f.perspective(p.ln_pdf(x), q.ln_pdf(x));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "non-finite {} integrand {v} at x = {x}",
                f.kind
            )))
        }
    })
}

/// Variational lower bound `E_q[T] − E_p[f★(T)]` by Simpson quadrature.
pub fn lower_bound<Q, P>(
    f: &FDivergence,
    q: &Q,
    p: &P,
    t: impl Fn(f64) -> f64,
    grid: &QuadratureGrid,
) -> Result<f64>
where
    Q: Density1D + ?Sized,
    P: Density1D + ?Sized,
{
    grid.try_integrate(|x| {
        let tx = t(x);
        let conj = f.conjugate(tx).map_err(|_| {
            Error::domain(
                "lower_bound",
                format!("T(x) = {tx} at x = {x} is outside the conjugate domain of {}", f.kind),
            )
        })?;
        let v = weighted(q.pdf(x), tx) - weighted(p.pdf(x), conj);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!("non-finite lower-bound integrand at x = {x}")))
        }
    })
}

/// The same bound with the critic given as a logit, `T = g_f(v(x))`.
///
/// `f★(g_f(v))` is evaluated in closed form from `v`, so critics whose `T` would
/// round onto an endpoint of the conjugate domain (large `v` for Js or squared
/// Hellinger) still give a finite bound.
pub fn lower_bound_logit<Q, P>(
    f: &FDivergence,
    q: &Q,
    p: &P,
    v: impl Fn(f64) -> f64,
    grid: &QuadratureGrid,
) -> Result<f64>
where
    Q: Density1D + ?Sized,
    P: Density1D + ?Sized,
{
    let act = f.activation();
    grid.try_integrate(|x| {
        let vx = v(x);
        let value = weighted(q.pdf(x), act.apply(vx)) - weighted(p.pdf(x), act.conjugate(vx));
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Numerical(format!("non-finite lower-bound integrand at x = {x} (logit {vx})")))
        }
    })
}

/// Value of the original GAN criterion `E_q[log d*] + E_p[log(1 − d*)]` with the
/// optimal discriminator `d* = q/(q + p)`.
pub fn optimal_gan_criterion<Q, P>(q: &Q, p: &P, grid: &QuadratureGrid) -> f64
where
    Q: Density1D + ?Sized,
    P: Density1D + ?Sized,
{
    grid.integrate(|x| {
        let lq = q.ln_pdf(x);
        let lp = p.ln_pdf(x);
        let m = crate::math::log_add_exp(lq, lp);
        weighted(lq.exp(), lq - m) + weighted(lp.exp(), lp - m)
    })
}

/// Jensen-Shannon divergence `½KL(q‖m) + ½KL(p‖m)`, `m = (q + p)/2`.
pub fn jensen_shannon<Q, P>(q: &Q, p: &P, grid: &QuadratureGrid) -> f64
where
    Q: Density1D + ?Sized,
    P: Density1D + ?Sized,
{
    grid.integrate(|x| {
        let qx = q.pdf(x);
        let px = p.pdf(x);
        let m = 0.5 * (qx + px);
        let term = |a: f64| if a > 0.0 { a * (a / m).ln() } else { 0.0 };
        0.5 * (term(qx) + term(px))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdiv::DivergenceKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid_for(q: &dyn EnvelopeOf, p: &dyn EnvelopeOf) -> QuadratureGrid {
        QuadratureGrid::covering(&[q, p], DEFAULT_POINTS).unwrap()
    }

    #[test]
    fn pdf_examples() {
        let g = Gaussian1D::standard();
        assert!((g.pdf(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
        let m = Mixture1D::two_mode();
        let expected = 2.0 * 0.5 * (1.0 / (0.5 * (2.0 * std::f64::consts::PI).sqrt())) * (-8.0f64).exp();
        assert!((m.pdf(0.0) - expected).abs() < 1e-18, "{} {}", m.pdf(0.0), expected);
        assert!(g.pdf(12.5) < 1e-30);
        assert!(m.pdf(2.0 + 13.0 * 0.5) < 1e-30);
    }

    #[test]
    fn densities_integrate_to_one() {
        let g = Gaussian1D::new(0.3, 0.7).unwrap();
        let grid = grid_for(&g, &g);
        assert!((grid.integrate(|x| g.pdf(x)) - 1.0).abs() < 1e-8);
        let m = Mixture1D::two_mode();
        let grid = grid_for(&m, &m);
        assert!((grid.integrate(|x| m.pdf(x)) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sample_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs = Gaussian1D::standard().sample(&mut rng, 1_000_000);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.005, "{mean}");

        let xs = Mixture1D::two_mode().sample(&mut rng, 1_000_000);
        let frac = xs.iter().filter(|x| **x > 0.0).count() as f64 / xs.len() as f64;
        assert!((frac - 0.5).abs() < 0.002, "{frac}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = Mixture1D::two_mode();
        let a = m.sample(&mut ChaCha8Rng::seed_from_u64(3), 100);
        let b = m.sample(&mut ChaCha8Rng::seed_from_u64(3), 100);
        assert_eq!(a, b);
        let r = Mixture2D::ring8();
        let a = r.sample(&mut ChaCha8Rng::seed_from_u64(3), 100);
        let b = r.sample(&mut ChaCha8Rng::seed_from_u64(3), 100);
        assert_eq!(a, b);
    }

    #[test]
    fn mixture_validation() {
        assert!(Mixture1D::new(vec![(0.5, Gaussian1D::standard())]).is_err());
        assert!(Mixture1D::new(vec![]).is_err());
        assert!(Gaussian1D::new(0.0, 0.0).is_err());
        assert!(Mixture2D::new(vec![1.0], vec![[0.0, 0.0]], vec![-1.0]).is_err());
        let r = Mixture2D::ring8();
        assert!((r.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!((r.means()[2][1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_divergence_examples() {
        let kl = FDivergence::new(DivergenceKind::Kl);
        let n01 = Gaussian1D::standard();
        let grid = grid_for(&n01, &n01);
        assert!(exact_divergence(&kl, &n01, &n01, &grid).unwrap().abs() < 1e-8);

        let q = Gaussian1D::new(1.0, 1.0).unwrap();
        let grid = grid_for(&q, &n01);
        let v = exact_divergence(&kl, &q, &n01, &grid).unwrap();
        assert!((v - 0.5).abs() < 1e-6, "{v}");

        let gan = FDivergence::new(DivergenceKind::GanJs);
        let v = exact_divergence(&gan, &n01, &n01, &grid_for(&n01, &n01)).unwrap();
        assert!((v + 4f64.ln()).abs() < 1e-8, "{v}");
    }

    #[test]
    fn kl_closed_form_unequal_variances() {
        // KL(N(m1,s1) || N(m2,s2)) = ln(s2/s1) + (s1² + (m1−m2)²)/(2 s2²) − ½
        let q = Gaussian1D::new(0.4, 0.6).unwrap();
        let p = Gaussian1D::new(-0.3, 1.7).unwrap();
        let closed = (1.7f64 / 0.6).ln() + (0.36 + 0.49) / (2.0 * 1.7 * 1.7) - 0.5;
        let kl = FDivergence::new(DivergenceKind::Kl);
        let v = exact_divergence(&kl, &q, &p, &grid_for(&q, &p)).unwrap();
        assert!((v - closed).abs() < 1e-9);
        let rkl = FDivergence::new(DivergenceKind::ReverseKl);
        let closed_r = (0.6f64 / 1.7).ln() + (1.7 * 1.7 + 0.49) / (2.0 * 0.36) - 0.5;
        let v = exact_divergence(&rkl, &q, &p, &grid_for(&q, &p)).unwrap();
        assert!((v - closed_r).abs() < 1e-9);
    }

    #[test]
    fn lower_bound_examples() {
        let kl = FDivergence::new(DivergenceKind::Kl);
        let q = Gaussian1D::new(0.5, 1.0).unwrap();
        let p = Gaussian1D::new(-0.5, 1.2).unwrap();
        let grid = grid_for(&q, &p);
        let exact = exact_divergence(&kl, &q, &p, &grid).unwrap();
        let act = kl.activation();
        let opt = |x: f64| act.apply(q.ln_pdf(x) - p.ln_pdf(x));
        let lb = lower_bound(&kl, &q, &p, opt, &grid).unwrap();
        assert!((lb - exact).abs() < 1e-5, "{lb} {exact}");
        let lb2 = lower_bound(&kl, &q, &p, |x| opt(x) - 0.1, &grid).unwrap();
        assert!(lb2 < exact);

        // q = p with T ≡ f'(1) = 1: 1 − f★(1) = 1 − e⁰ = 0
        let lb = lower_bound(&kl, &q, &q, |_| 1.0, &grid).unwrap();
        assert!(lb.abs() < 1e-10);
    }

    #[test]
    fn logit_bound_agrees_and_survives_saturation() {
        let q = Gaussian1D::new(0.0, 0.7).unwrap();
        let p = Gaussian1D::new(0.5, 1.5).unwrap();
        let grid = grid_for(&q, &p);
        let log_ratio = |x: f64| q.ln_pdf(x) - p.ln_pdf(x);
        let gan = FDivergence::new(DivergenceKind::GanJs);
        let act = gan.activation();
        let a = lower_bound(&gan, &q, &p, |x| act.apply(log_ratio(x)), &grid).unwrap();
        let b = lower_bound_logit(&gan, &q, &p, log_ratio, &grid).unwrap();
        assert!((a - b).abs() < 1e-12);

        // T = f'(e^{50}) rounds to ln 2, where the js conjugate is infinite
        let js = FDivergence::new(DivergenceKind::Js);
        assert!(lower_bound(&js, &q, &p, |_| js.activation().apply(50.0), &grid).is_err());
        let exact = exact_divergence(&js, &q, &p, &grid).unwrap();
        let lb = lower_bound_logit(&js, &q, &p, log_ratio, &grid).unwrap();
        assert!((lb - exact).abs() < 1e-6, "{lb} {exact}");
    }

    #[test]
    fn lower_bound_reports_domain_violation() {
        let gan = FDivergence::new(DivergenceKind::GanJs);
        let q = Gaussian1D::standard();
        let grid = grid_for(&q, &q);
        let err = lower_bound(&gan, &q, &q, |x| if x > 1.0 { 0.5 } else { -1.0 }, &grid).unwrap_err();
        match err {
            Error::Domain { detail, .. } => assert!(detail.contains("x = "), "{detail}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn gan_criterion_is_two_js_minus_log4() {
        let q = Gaussian1D::new(0.0, 1.0).unwrap();
        let p = Gaussian1D::new(1.5, 0.7).unwrap();
        let grid = grid_for(&q, &p);
        let crit = optimal_gan_criterion(&q, &p, &grid);
        let js = jensen_shannon(&q, &p, &grid);
        assert!((crit - (2.0 * js - 4f64.ln())).abs() < 1e-9);
        let gan = FDivergence::new(DivergenceKind::GanJs);
        assert!((exact_divergence(&gan, &q, &p, &grid).unwrap() - crit).abs() < 1e-12);
    }

    #[test]
    fn grid_refinement_is_stable() {
        let q = Mixture1D::two_mode();
        let p = Gaussian1D::new(0.2, 1.3).unwrap();
        for k in [DivergenceKind::Kl, DivergenceKind::ReverseKl, DivergenceKind::Js, DivergenceKind::GanAlt] {
            let f = FDivergence::new(k);
            let g1 = QuadratureGrid::covering(&[&q, &p], DEFAULT_POINTS).unwrap();
            let g2 = QuadratureGrid::covering(&[&q, &p], 2 * DEFAULT_POINTS - 1).unwrap();
            let a = exact_divergence(&f, &q, &p, &g1).unwrap();
            let b = exact_divergence(&f, &q, &p, &g2).unwrap();
            assert!((a - b).abs() < 1e-8, "{k}: {a} {b}");
        }
    }

    #[test]
    fn grid_validation() {
        assert!(QuadratureGrid::new(0.0, 1.0, 1000).is_err());
        assert!(QuadratureGrid::new(1.0, 0.0, 1001).is_err());
        let g = QuadratureGrid::new(0.0, 1.0, 3).unwrap();
        assert!((g.integrate(|x| x * x) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn config_round_trip() {
        let text = r#"
type = "mixture1d"
weights = [0.5, 0.5]
means = [-2.0, 2.0]
stddevs = [0.5, 0.5]
"#;
        let d = Density::from_toml_str(text).unwrap();
        assert_eq!(d, Density::OneD(Mixture1D::two_mode()));
        assert_eq!(Density::from_toml_str(&d.to_toml_string()).unwrap(), d);

        let ring = Density::from_toml_str("type = \"ring\"\n").unwrap();
        assert_eq!(ring, Density::TwoD(Mixture2D::ring8()));
        assert_eq!(Density::from_toml_str(&ring.to_toml_string()).unwrap(), ring);

        let g = Density::from_toml_str("type = \"gaussian\"\nmeans = [0.5]\nstddevs = [1.0]\n").unwrap();
        assert_eq!(g.dim(), 1);
        assert!(Density::from_toml_str("type = \"cauchy\"\n").is_err());
        assert!(Density::from_toml_str("type = \"mixture1d\"\nmeans=[0.0]\n").is_err());
    }
}
