//! The f-divergence family and its calculus.
//!
//! Every divergence here is `D_f(q || p) = ∫ p(x) f(q(x)/p(x)) dx` for a convex
//! generator `f` on `(0, ∞)`. Alongside `f` each kind provides its derivative,
//! the inverse of the derivative, the Fenchel conjugate and an output
//! activation `g_f` that maps an unconstrained network output `v` onto the
//! range of `f'`.
//!
//! The activation is always `g_f(v) = f'(e^v)`. For the standard GAN
//! discriminator divergence this is `-log(1 + e^{-v})`; for every kind it means
//! the density ratio recovered from a discriminator is `(f')⁻¹(g_f(v)) = e^v`,
//! so `v` is an estimate of `log q(x)/p(x)`.
//!
//! | kind          | f(u)                                     | range of f'        |
//! |---------------|------------------------------------------|--------------------|
//! | `GanJs`       | u log u − (u+1) log(u+1)                 | (−∞, 0)            |
//! | `Kl`          | u log u                                  | ℝ                  |
//! | `ReverseKl`   | −log u                                   | (−∞, 0)            |
//! | `Js`          | u log u − (u+1) log((u+1)/2)             | (−∞, log 2)        |
//! | `SquaredHellinger` | (√u − 1)²                           | (−∞, 1)            |
//! | `Alpha(α)`    | (u^α − 1 − α(u−1)) / (α(α−1))            | depends on α       |
//! | `GanAlt`      | log(1 + 1/u)                             | (−∞, 0)            |

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{log_add_exp, sigmoid, softplus};

/// Lower clamp applied to recovered density ratios.
pub const DEFAULT_U_MIN: f64 = 1e-8;
/// Upper clamp applied to recovered density ratios.
pub const DEFAULT_U_MAX: f64 = 1e8;
/// Raw discriminator logits are clamped to `[-LOGIT_CLAMP, LOGIT_CLAMP]` before exponentiation.
pub const LOGIT_CLAMP: f64 = 30.0;
/// `Alpha(α)` within this distance of 0 or 1 collapses onto reverse KL or KL.
pub const ALPHA_SNAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceKind {
    /// The standard GAN discriminator divergence, `2 JS − log 4`.
    GanJs,
    Kl,
    ReverseKl,
    Js,
    SquaredHellinger,
    Alpha(f64),
    /// The divergence implied by the usual non-saturating generator loss.
    GanAlt,
}

impl DivergenceKind {
    /// Builds an α-divergence, snapping α near 0 or 1 onto its limit.
    pub fn alpha(alpha: f64) -> Self {
        DivergenceKind::Alpha(alpha).canonical()
    }

    pub fn canonical(self) -> Self {
        match self {
            DivergenceKind::Alpha(a) if a.abs() < ALPHA_SNAP => DivergenceKind::ReverseKl,
            DivergenceKind::Alpha(a) if (a - 1.0).abs() < ALPHA_SNAP => DivergenceKind::Kl,
            k => k,
        }
    }

    /// Names accepted by [`FromStr`], for usage messages.
    pub const VALID_NAMES: &'static str =
        "gan-js, kl, rkl, js, hellinger, gan-alt, alpha:<value>";
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceKind::GanJs => f.write_str("gan-js"),
            DivergenceKind::Kl => f.write_str("kl"),
            DivergenceKind::ReverseKl => f.write_str("rkl"),
            DivergenceKind::Js => f.write_str("js"),
            DivergenceKind::SquaredHellinger => f.write_str("hellinger"),
            DivergenceKind::Alpha(a) => write!(f, "alpha:{a}"),
            DivergenceKind::GanAlt => f.write_str("gan-alt"),
        }
    }
}

impl FromStr for DivergenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let kind = match s.as_str() {
            "gan-js" | "gan" | "ganjs" => DivergenceKind::GanJs,
            "kl" => DivergenceKind::Kl,
            "rkl" | "reverse-kl" => DivergenceKind::ReverseKl,
            "js" => DivergenceKind::Js,
            "hellinger" | "squared-hellinger" => DivergenceKind::SquaredHellinger,
            "gan-alt" | "ganalt" => DivergenceKind::GanAlt,
            other => {
                let value = other
                    .strip_prefix("alpha:")
                    .or_else(|| other.strip_prefix("alpha="))
                    .ok_or_else(|| {
                        Error::Parse(format!(
                            "unknown divergence '{other}' (valid: {})",
                            DivergenceKind::VALID_NAMES
                        ))
                    })?;
                let a: f64 = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad alpha value '{value}'")))?;
                if !a.is_finite() {
                    return Err(Error::Parse(format!("bad alpha value '{value}'")));
                }
                DivergenceKind::alpha(a)
            }
        };
        Ok(kind)
    }
}

/// An open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }
}

/// An f-divergence together with the ratio clamp used when it is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDivergence {
    pub kind: DivergenceKind,
    pub u_min: f64,
    pub u_max: f64,
    /// Whether `f(1) = 0`. [`DivergenceKind::GanAlt`] has `f(1) = log 2` and
    /// [`DivergenceKind::GanJs`] has `f(1) = −log 4`; every other kind is normalized.
    pub normalized: bool,
}

impl From<DivergenceKind> for FDivergence {
    fn from(kind: DivergenceKind) -> Self {
        FDivergence::new(kind)
    }
}

impl FDivergence {
    pub fn new(kind: DivergenceKind) -> Self {
        let kind = kind.canonical();
        FDivergence {
            kind,
            u_min: DEFAULT_U_MIN,
            u_max: DEFAULT_U_MAX,
            normalized: !matches!(kind, DivergenceKind::GanAlt | DivergenceKind::GanJs),
        }
    }

    pub fn with_clamp(mut self, u_min: f64, u_max: f64) -> Self {
        assert!(0.0 < u_min && u_min < u_max, "invalid ratio clamp");
        self.u_min = u_min;
        self.u_max = u_max;
        self
    }

    pub fn clamp_ratio(&self, u: f64) -> f64 {
        u.clamp(self.u_min, self.u_max)
    }

    fn check_u(&self, op: &'static str, u: f64) -> Result<()> {
        if u.is_finite() && u > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(op, format!("ratio u = {u} must be finite and positive")))
        }
    }

    /// `f(u)`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        self.check_u("f_eval", u)?;
        let ln_u = u.ln();
        Ok(match self.kind {
            DivergenceKind::GanJs => {
                if u > 1.0 {
                    -ln_u - (u + 1.0) * (1.0 / u).ln_1p()
                } else {
                    u * ln_u - (u + 1.0) * u.ln_1p()
                }
            }
            DivergenceKind::Kl => u * ln_u,
            DivergenceKind::ReverseKl => -ln_u,
            // u log(2u/(u+1)) + log(2/(u+1)); both logs vanish exactly at u = 1.
            DivergenceKind::Js => u * (LN_2 - (1.0 / u).ln_1p()) + (LN_2 - u.ln_1p()),
            DivergenceKind::SquaredHellinger => {
                let d = u.sqrt() - 1.0;
                d * d
            }
            DivergenceKind::Alpha(a) => ((a * ln_u).exp_m1() - a * (u - 1.0)) / (a * (a - 1.0)),
            DivergenceKind::GanAlt => (1.0 / u).ln_1p(),
        })
    }

    /// `f'(u)`.
    pub fn prime(&self, u: f64) -> Result<f64> {
        self.check_u("f_prime", u)?;
        Ok(match self.kind {
            DivergenceKind::GanJs => -(1.0 / u).ln_1p(),
            DivergenceKind::Kl => u.ln() + 1.0,
            DivergenceKind::ReverseKl => -1.0 / u,
            DivergenceKind::Js => LN_2 - (1.0 / u).ln_1p(),
            DivergenceKind::SquaredHellinger => 1.0 - 1.0 / u.sqrt(),
            DivergenceKind::Alpha(a) => ((a - 1.0) * u.ln()).exp_m1() / (a - 1.0),
            DivergenceKind::GanAlt => -1.0 / (u * (u + 1.0)),
        })
    }

    /// Open interval of values taken by `f'` on `(0, ∞)`, which is also the
    /// domain on which the Fenchel conjugate is finite.
    pub fn conjugate_domain(&self) -> Interval {
        let inf = f64::INFINITY;
        let (lo, hi) = match self.kind {
            DivergenceKind::GanJs | DivergenceKind::ReverseKl | DivergenceKind::GanAlt => {
                (-inf, 0.0)
            }
            DivergenceKind::Kl => (-inf, inf),
            DivergenceKind::Js => (-inf, LN_2),
            DivergenceKind::SquaredHellinger => (-inf, 1.0),
            DivergenceKind::Alpha(a) if a > 1.0 => (-1.0 / (a - 1.0), inf),
            DivergenceKind::Alpha(a) => (-inf, 1.0 / (1.0 - a)),
        };
        Interval { lo, hi }
    }

    /// `(f')⁻¹(t)`, clamped to `[u_min, u_max]`.
    ///
    /// The finite endpoints of the range of `f'` are accepted and map to the
    /// limiting ratio (0 or ∞) before clamping.
    pub fn prime_inv(&self, t: f64) -> Result<f64> {
        let dom = self.conjugate_domain();
        if !t.is_finite() || t < dom.lo || t > dom.hi {
            return Err(Error::domain(
                "f_prime_inv",
                format!("t = {t} outside range ({}, {}) of f' for {}", dom.lo, dom.hi, self.kind),
            ));
        }
        // f' is increasing: its upper end is approached as u → ∞, its lower end as u → 0.
        if t == dom.hi {
            return Ok(self.u_max);
        }
        if t == dom.lo {
            return Ok(self.u_min);
        }
        Ok(self.clamp_ratio(self.prime_inv_unclamped(t)))
    }

    /// `(f')⁻¹(t)` without the ratio clamp, for `t` strictly inside the range of `f'`.
    pub fn prime_inv_unclamped(&self, t: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs => t.exp() / -t.exp_m1(),
            DivergenceKind::Kl => (t - 1.0).exp(),
            DivergenceKind::ReverseKl => -1.0 / t,
            DivergenceKind::Js => {
                let e = t.exp();
                e / (2.0 - e)
            }
            DivergenceKind::SquaredHellinger => {
                let d = 1.0 - t;
                1.0 / (d * d)
            }
            DivergenceKind::Alpha(a) => (((a - 1.0) * t).ln_1p() / (a - 1.0)).exp(),
            DivergenceKind::GanAlt => {
                // Positive root of u² + u + 1/t = 0, written to avoid cancellation.
                let c = -1.0 / t;
                2.0 * c / (1.0 + (1.0 + 4.0 * c).sqrt())
            }
        }
    }

    /// Fenchel conjugate `f★(t) = sup_u (u t − f(u))`.
    ///
    /// A finite endpoint of the range of `f'` is accepted when the supremum there
    /// is still finite, as at `f'(0)` for α > 1 where `f★ = −f(0)`.
    pub fn conjugate(&self, t: f64) -> Result<f64> {
        let dom = self.conjugate_domain();
        let outside = || {
            Error::domain(
                "fenchel_conjugate",
                format!("t = {t} outside conjugate domain ({}, {}) of {}", dom.lo, dom.hi, self.kind),
            )
        };
        if !t.is_finite() || t < dom.lo || t > dom.hi {
            return Err(outside());
        }
        let value = match self.kind {
            DivergenceKind::GanJs => -(-t.exp_m1()).ln(),
            DivergenceKind::Kl => (t - 1.0).exp(),
            DivergenceKind::ReverseKl => -1.0 - (-t).ln(),
            DivergenceKind::Js => -(2.0 - t.exp()).ln(),
            DivergenceKind::SquaredHellinger => t / (1.0 - t),
            DivergenceKind::Alpha(a) => {
                let ln_s = ((a - 1.0) * t).ln_1p();
                (a / (a - 1.0) * ln_s).exp_m1() / a
            }
            DivergenceKind::GanAlt => {
                let u = self.prime_inv_unclamped(t);
                u * t - (1.0 / u).ln_1p()
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(outside())
        }
    }

    /// `f(e^l)`, evaluated without forming `e^l` where that would lose precision.
    pub fn eval_log(&self, l: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs => {
                let u = l.exp();
                if l > 0.0 {
                    -l - (u + 1.0) * softplus(-l)
                } else {
                    u * l - (u + 1.0) * softplus(l)
                }
            }
            DivergenceKind::Kl => l * l.exp(),
            DivergenceKind::ReverseKl => -l,
            DivergenceKind::Js => l.exp() * (LN_2 - softplus(-l)) + (LN_2 - softplus(l)),
            DivergenceKind::SquaredHellinger => {
                let d = (0.5 * l).exp_m1();
                d * d
            }
            DivergenceKind::Alpha(a) => alpha_eval_log(a, l),
            DivergenceKind::GanAlt => softplus(-l),
        }
    }

    /// `d/dl f(e^l) = e^l f'(e^l)`.
    pub fn eval_log_grad(&self, l: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs => -l.exp() * softplus(-l),
            DivergenceKind::Kl => (1.0 + l) * l.exp(),
            DivergenceKind::ReverseKl => -1.0,
            DivergenceKind::Js => l.exp() * (LN_2 - softplus(-l)),
            DivergenceKind::SquaredHellinger => l.exp() - (0.5 * l).exp(),
            DivergenceKind::Alpha(a) => ((a * l).exp() - l.exp()) / (a - 1.0),
            DivergenceKind::GanAlt => -sigmoid(-l),
        }
    }

    /// The output activation `g_f` for a discriminator targeting this divergence.
    pub fn activation(&self) -> Activation {
        Activation { kind: self.kind }
    }

    /// The integrand `p f(q/p)` of the divergence, from `log p` and `log q`.
    ///
    /// Working from log densities keeps the integrand exact where one density
    /// underflows, so no ratio clamp is needed here.
    pub fn perspective(&self, log_p: f64, log_q: f64) -> f64 {
        if log_p == f64::NEG_INFINITY && log_q == f64::NEG_INFINITY {
            return 0.0;
        }
        let p = log_p.exp();
        let q = log_q.exp();
        let d = log_q - log_p;
        match self.kind {
            DivergenceKind::GanJs | DivergenceKind::Js => {
                let m = log_add_exp(log_p, log_q);
                let base = weighted(q, log_q - m) + weighted(p, log_p - m);
                if matches!(self.kind, DivergenceKind::Js) {
                    base + (p + q) * LN_2
                } else {
                    base
                }
            }
            DivergenceKind::Kl => weighted(q, d),
            DivergenceKind::ReverseKl => weighted(p, -d),
            DivergenceKind::SquaredHellinger => {
                let r = (0.5 * log_q).exp() - (0.5 * log_p).exp();
                r * r
            }
            DivergenceKind::Alpha(a) => {
                if d.abs() < 1.0 {
                    p * self.eval_log(d)
                } else {
                    let mixed = ((1.0 - a) * log_p + a * log_q).exp();
                    (mixed - p - a * (q - p)) / (a * (a - 1.0))
                }
            }
            DivergenceKind::GanAlt => weighted(p, softplus(-d)),
        }
    }

    /// Recovered density ratio `(f')⁻¹(g_f(v))` for a raw discriminator output `v`,
    /// clamped to `[u_min, u_max]`.
    pub fn ratio_from_logit(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::domain("ratio_from_logit", format!("logit {v} is not finite")));
        }
        let t = self.activation().apply(v.clamp(-LOGIT_CLAMP, LOGIT_CLAMP));
        self.prime_inv(t)
    }

    /// Estimated `log q/p` for a raw discriminator output. Since `g_f(v) = f'(e^v)`
    /// this is `v` itself, after the logit clamp.
    pub fn log_ratio_from_logit(&self, v: f64) -> f64 {
        v.clamp(-LOGIT_CLAMP, LOGIT_CLAMP)
    }
}

/// `f_α(e^l)`. The closed form cancels to `O(l²)` from `O(l)` terms near `l = 0`,
/// so small logits use the power series `Σ_{n≥2} c_n l^n / n!` with
/// `c_n = (α^{n−1} − 1)/(α − 1) = 1 + α c_{n−1}`.
fn alpha_eval_log(a: f64, l: f64) -> f64 {
    if l.abs() >= 0.25 {
        return ((a * l).exp_m1() - a * l.exp_m1()) / (a * (a - 1.0));
    }
    let mut c = 1.0;
    let mut power = l * l / 2.0;
    let mut sum = c * power;
    for n in 3..80 {
        c = 1.0 + a * c;
        power *= l / n as f64;
        let term = c * power;
        sum += term;
        // c_n vanishes at odd n when α = −1, so the stop test uses the power alone
        if power.abs() * c.abs().max(1.0) <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn weighted(w: f64, v: f64) -> f64 {
    crate::math::weighted(w, v)
}

/// The output activation `g_f(v) = f'(e^v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activation {
    pub kind: DivergenceKind,
}

impl Activation {
    /// `T = g_f(v)`.
    pub fn apply(&self, v: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs => -softplus(-v),
            DivergenceKind::Kl => v + 1.0,
            DivergenceKind::ReverseKl => -(-v).exp(),
            DivergenceKind::Js => LN_2 - softplus(-v),
            DivergenceKind::SquaredHellinger => -(-0.5 * v).exp_m1(),
            DivergenceKind::Alpha(a) => ((a - 1.0) * v).exp_m1() / (a - 1.0),
            DivergenceKind::GanAlt => -(-v).exp() * sigmoid(-v),
        }
    }

    /// `dT/dv`.
    pub fn derivative(&self, v: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs | DivergenceKind::Js => sigmoid(-v),
            DivergenceKind::Kl => 1.0,
            DivergenceKind::ReverseKl => (-v).exp(),
            DivergenceKind::SquaredHellinger => 0.5 * (-0.5 * v).exp(),
            DivergenceKind::Alpha(a) => ((a - 1.0) * v).exp(),
            DivergenceKind::GanAlt => (-v).exp() * sigmoid(-v) * (1.0 + sigmoid(v)),
        }
    }

    /// `f★(g_f(v))`, the per-sample penalty on model samples in the variational bound.
    pub fn conjugate(&self, v: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs => softplus(v),
            DivergenceKind::Kl => v.exp(),
            DivergenceKind::ReverseKl => v - 1.0,
            DivergenceKind::Js => softplus(v) - LN_2,
            DivergenceKind::SquaredHellinger => (0.5 * v).exp_m1(),
            DivergenceKind::Alpha(a) => (a * v).exp_m1() / a,
            DivergenceKind::GanAlt => -sigmoid(-v) - softplus(-v),
        }
    }

    /// `d/dv f★(g_f(v))`.
    pub fn conjugate_derivative(&self, v: f64) -> f64 {
        match self.kind {
            DivergenceKind::GanJs | DivergenceKind::Js => sigmoid(v),
            DivergenceKind::Kl => v.exp(),
            DivergenceKind::ReverseKl => 1.0,
            DivergenceKind::SquaredHellinger => 0.5 * (0.5 * v).exp(),
            DivergenceKind::Alpha(a) => (a * v).exp(),
            DivergenceKind::GanAlt => sigmoid(-v) * (1.0 + sigmoid(v)),
        }
    }
}

/// Per-sample generator loss `f_G((f_D')⁻¹(g_{f_D}(v)))`, i.e. `f_G` applied to
/// the density ratio recovered from the discriminator logit `v`.
pub fn generator_objective_term(f_d: &FDivergence, f_g: &FDivergence, v: f64) -> f64 {
    f_g.eval_log(f_d.log_ratio_from_logit(v))
}

/// Derivative of [`generator_objective_term`] with respect to `v`. Zero outside
/// the logit clamp.
pub fn generator_objective_grad(f_d: &FDivergence, f_g: &FDivergence, v: f64) -> f64 {
    if v.abs() > LOGIT_CLAMP {
        return 0.0;
    }
    f_g.eval_log_grad(f_d.log_ratio_from_logit(v))
}
