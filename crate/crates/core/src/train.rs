//! Alternating GAN training: the discriminator ascends the variational lower bound
//! on `D_{f_D}(q || p)`, then the generator descends `E_p[f_G(r(x))]` where `r` is the
//! density ratio read off the discriminator.
//!
//! Everything is driven by one seeded `ChaCha8Rng`. Evaluation (mode reports, KDE
//! monitoring) draws from a second stream of the same seed so that changing how
//! often metrics are logged never changes the training trajectory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::density::{exact_divergence, Density, Density1D, QuadratureGrid};
use crate::error::{Error, Result};
use crate::fdiv::{generator_objective_grad, generator_objective_term, DivergenceKind, FDivergence};
use crate::kde::GaussianKde;
use crate::neural::{AdamConfig, AdamState, Hidden, Matrix, Mlp, Output};

/// Fraction of samples a mode needs before it counts as covered.
pub const COVERAGE_THRESHOLD: f64 = 0.02;
/// Samples farther than this many of a mode's stddevs from every mode are off-manifold.
pub const MODE_RADIUS_SIGMAS: f64 = 3.0;
pub const MIN_REPORT_SAMPLES: usize = 1000;
/// Quadrature points for the KDE monitor, which is coarser than the fitting oracle.
const MONITOR_POINTS: usize = 2001;

#[derive(Debug, Clone, PartialEq)]
pub struct GanConfig {
    pub f_d: DivergenceKind,
    pub f_g: DivergenceKind,
    pub latent_dim: usize,
    pub generator_hidden: Vec<usize>,
    pub discriminator_hidden: Vec<usize>,
    pub hidden: Hidden,
    pub batch_size: usize,
    pub generator_adam: AdamConfig,
    pub discriminator_adam: AdamConfig,
    pub steps: u64,
    /// Discriminator updates per generator update.
    pub d_steps: usize,
    pub seed: u64,
    pub init_std: f64,
    /// Run a mode report (and the 1D KDE monitor) every this many steps.
    pub log_every: u64,
    pub eval_samples: usize,
    /// Divergence between the target and a KDE of generator samples, logged for 1D data.
    pub monitor: DivergenceKind,
    pub data: Density,
}

impl Default for GanConfig {
    fn default() -> Self {
        GanConfig {
            f_d: DivergenceKind::GanJs,
            f_g: DivergenceKind::GanAlt,
            latent_dim: 2,
            generator_hidden: vec![32, 32],
            discriminator_hidden: vec![32, 32],
            hidden: Hidden::LeakyRelu(0.1),
            batch_size: 128,
            generator_adam: AdamConfig::default(),
            discriminator_adam: AdamConfig::default(),
            steps: 20_000,
            d_steps: 1,
            seed: 0,
            init_std: 0.01,
            log_every: 1000,
            eval_samples: 2000,
            monitor: DivergenceKind::Js,
            data: Density::TwoD(crate::density::Mixture2D::ring8()),
        }
    }
}

impl GanConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.batch_size < 2 {
            return bad(format!("batch size {} must be at least 2", self.batch_size));
        }
        if self.latent_dim == 0 {
            return bad("latent dimension must be positive".into());
        }
        if self.d_steps == 0 {
            return bad("need at least one discriminator step per generator step".into());
        }
        if self.log_every == 0 {
            return bad("log interval must be positive".into());
        }
        if self.eval_samples < MIN_REPORT_SAMPLES {
            return bad(format!(
                "eval_samples {} below the {MIN_REPORT_SAMPLES} a mode report needs",
                self.eval_samples
            ));
        }
        if !(self.init_std > 0.0 && self.init_std.is_finite()) {
            return bad(format!("init_std {} must be positive", self.init_std));
        }
        for adam in [&self.generator_adam, &self.discriminator_adam] {
            if !(adam.lr >= 0.0) || !(0.0..1.0).contains(&adam.beta1) || !(0.0..1.0).contains(&adam.beta2) {
                return bad(format!("invalid Adam settings {adam:?}"));
            }
        }
        Ok(())
    }

    fn generator_sizes(&self) -> Vec<usize> {
        let mut s = vec![self.latent_dim];
        s.extend(&self.generator_hidden);
        s.push(self.data.dim());
        s
    }

    fn discriminator_sizes(&self) -> Vec<usize> {
        let mut s = vec![self.data.dim()];
        s.extend(&self.discriminator_hidden);
        s.push(1);
        s
    }
}

/// One logged training step. Evaluation columns are filled only on report steps.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub step: u64,
    pub d_objective: f64,
    pub g_objective: f64,
    pub modes_covered: Option<usize>,
    pub hq_fraction: Option<f64>,
    pub kde_divergence: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GanState {
    pub generator: Mlp,
    pub discriminator: Mlp,
    pub generator_opt: AdamState,
    pub discriminator_opt: AdamState,
    step: u64,
    rng: ChaCha8Rng,
    eval_rng: ChaCha8Rng,
}

/// Draws `n` rows from the data density.
pub fn sample_data<R: Rng + ?Sized>(data: &Density, rng: &mut R, n: usize) -> Matrix {
    match data {
        Density::OneD(m) => Matrix::column(&m.sample(rng, n)),
        Density::TwoD(m) => Matrix::from_rows(&m.sample(rng, n)),
    }
}

pub fn sample_latent<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize) -> Matrix {
    let data = (0..n * dim).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::from_vec(n, dim, data).expect("shape matches by construction")
}

/// One ascent step on `mean g(V(data)) − mean f★(g(V(model)))` for `disc`.
/// Returns the estimate before the update.
pub fn discriminator_update(
    disc: &mut Mlp,
    opt: &mut AdamState,
    f_d: &FDivergence,
    data: &Matrix,
    model: &Matrix,
    step: u64,
) -> Result<f64> {
    let act = f_d.activation();
    let (vq, cache_q) = disc.forward(data)?;
    let (vp, cache_p) = disc.forward(model)?;
    let (nq, np) = (vq.rows() as f64, vp.rows() as f64);
    let gain = vq.as_slice().iter().map(|&v| act.apply(v)).sum::<f64>() / nq;
    let penalty = vp.as_slice().iter().map(|&v| act.conjugate(v)).sum::<f64>() / np;
    let estimate = gain - penalty;
    if !estimate.is_finite() {
        return Err(Error::NonFiniteLoss {
            which: "discriminator",
            step,
        });
    }
    // minimize the negated bound
    let dq: Vec<f64> = vq.as_slice().iter().map(|&v| -act.derivative(v) / nq).collect();
    let dp: Vec<f64> = vp.as_slice().iter().map(|&v| act.conjugate_derivative(v) / np).collect();
    let (mut grads, _) = disc.backward(&cache_q, &Matrix::column(&dq))?;
    let (gp, _) = disc.backward(&cache_p, &Matrix::column(&dp))?;
    grads.iter_mut().zip(&gp).for_each(|(a, b)| *a += b);
    opt.step(disc, &grads)?;
    Ok(estimate)
}

impl GanState {
    pub fn new(config: &GanConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut eval_rng = ChaCha8Rng::seed_from_u64(config.seed);
        eval_rng.set_stream(1);
        let generator = Mlp::new(
            &config.generator_sizes(),
            config.hidden,
            Output::Linear,
            config.init_std,
            &mut rng,
        )?;
        let discriminator = Mlp::new(
            &config.discriminator_sizes(),
            config.hidden,
            Output::Linear,
            config.init_std,
            &mut rng,
        )?;
        Ok(GanState {
            generator_opt: AdamState::for_net(config.generator_adam, &generator),
            discriminator_opt: AdamState::for_net(config.discriminator_adam, &discriminator),
            generator,
            discriminator,
            step: 0,
            rng,
            eval_rng,
        })
    }

    /// Completed alternations.
    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn generate(&self, latent: &Matrix) -> Result<Matrix> {
        self.generator.predict(latent)
    }

    /// `n` generator samples drawn with the evaluation stream.
    pub fn eval_samples(&mut self, config: &GanConfig, n: usize) -> Result<Matrix> {
        let z = sample_latent(&mut self.eval_rng, n, config.latent_dim);
        self.generate(&z)
    }

    pub fn discriminator_step(&mut self, config: &GanConfig, data: &Matrix, model: &Matrix) -> Result<f64> {
        discriminator_update(
            &mut self.discriminator,
            &mut self.discriminator_opt,
            &FDivergence::new(config.f_d),
            data,
            model,
            self.step,
        )
    }

    /// Mean per-sample loss over `V(G(z))` and its gradient with respect to the
    /// generator parameters. `loss` maps a logit to `(value, d value / d logit)`.
    /// The discriminator is read, never updated.
    pub fn generator_gradients_with(
        &self,
        latent: &Matrix,
        loss: impl Fn(f64) -> (f64, f64),
    ) -> Result<(f64, Vec<f64>)> {
        let (x, cache_g) = self.generator.forward(latent)?;
        let (v, cache_d) = self.discriminator.forward(&x)?;
        let n = v.rows() as f64;
        let mut total = 0.0;
        let mut dv = Vec::with_capacity(v.rows());
        for &vi in v.as_slice() {
            let (val, grad) = loss(vi);
            total += val;
            dv.push(grad / n);
        }
        let (_, dx) = self.discriminator.backward(&cache_d, &Matrix::column(&dv))?;
        let (grads, _) = self.generator.backward(&cache_g, &dx)?;
        Ok((total / n, grads))
    }

    pub fn generator_gradients(&self, config: &GanConfig, latent: &Matrix) -> Result<(f64, Vec<f64>)> {
        let f_d = FDivergence::new(config.f_d);
        let f_g = FDivergence::new(config.f_g);
        self.generator_gradients_with(latent, |v| {
            (generator_objective_term(&f_d, &f_g, v), generator_objective_grad(&f_d, &f_g, v))
        })
    }

    /// One descent step on the generator objective. Returns the objective before the update.
    pub fn generator_step(&mut self, config: &GanConfig, latent: &Matrix) -> Result<f64> {
        let (objective, grads) = self.generator_gradients(config, latent)?;
        if !objective.is_finite() {
            return Err(Error::NonFiniteLoss {
                which: "generator",
                step: self.step,
            });
        }
        self.generator_opt.step(&mut self.generator, &grads)?;
        Ok(objective)
    }

    /// `d_steps` discriminator updates then one generator update, all on fresh batches.
    /// Returns the last discriminator estimate and the generator objective.
    pub fn alternate(&mut self, config: &GanConfig) -> Result<(f64, f64)> {
        let b = config.batch_size;
        let mut d_obj = f64::NAN;
        for _ in 0..config.d_steps {
            let data = sample_data(&config.data, &mut self.rng, b);
            let z = sample_latent(&mut self.rng, b, config.latent_dim);
            let model = self.generate(&z)?;
            d_obj = self.discriminator_step(config, &data, &model)?;
        }
        let z = sample_latent(&mut self.rng, b, config.latent_dim);
        let g_obj = self.generator_step(config, &z)?;
        self.step += 1;
        Ok((d_obj, g_obj))
    }

    /// Mode report and, for 1D data, the KDE divergence monitor.
    pub fn evaluate(&mut self, config: &GanConfig) -> Result<(ModeReport, Option<f64>)> {
        let samples = self.eval_samples(config, config.eval_samples)?;
        let report = mode_report(&samples, &config.data)?;
        let monitor = match &config.data {
            Density::OneD(q) => {
                let kde = GaussianKde::new(samples.as_slice().to_vec())?;
                let grid = QuadratureGrid::covering(&[q, &kde], MONITOR_POINTS)?;
                Some(exact_divergence(&FDivergence::new(config.monitor), q, &kde, &grid)?)
            }
            Density::TwoD(_) => None,
        };
        Ok((report, monitor))
    }

    /// Compares the generator objective, estimated on `n` fresh samples through the
    /// current discriminator, with `D_{f_G}(q || p̂)` for a KDE `p̂` of the same samples.
    ///
    /// The estimate is neither an upper nor a lower bound in general, so this is a
    /// diagnostic only. `None` for 2D data, where no quadrature reference exists.
    pub fn objective_bias<R: Rng + ?Sized>(
        &self,
        config: &GanConfig,
        n: usize,
        rng: &mut R,
    ) -> Result<Option<ObjectiveBias>> {
        let Density::OneD(q) = &config.data else {
            return Ok(None);
        };
        let z = sample_latent(rng, n, config.latent_dim);
        let samples = self.generate(&z)?;
        let (estimate, _) = self.generator_gradients(config, &z)?;
        let kde = GaussianKde::new(samples.as_slice().to_vec())?;
        let grid = QuadratureGrid::covering(&[q, &kde], MONITOR_POINTS)?;
        let reference = exact_divergence(&FDivergence::new(config.f_g), q, &kde, &grid)?;
        Ok(Some(ObjectiveBias { estimate, reference }))
    }

    /// Runs up to `config.steps` alternations, appending to `log`. A failed step stops
    /// the run; everything logged before it stays in `log`.
    pub fn run(&mut self, config: &GanConfig, log: &mut Vec<MetricRow>) -> Result<()> {
        while self.step < config.steps {
            let (d_objective, g_objective) = self.alternate(config)?;
            let mut row = MetricRow {
                step: self.step,
                d_objective,
                g_objective,
                modes_covered: None,
                hq_fraction: None,
                kde_divergence: None,
            };
            if self.step % config.log_every == 0 || self.step == config.steps {
                let (report, monitor) = self.evaluate(config)?;
                row.modes_covered = Some(report.modes_covered);
                row.hq_fraction = Some(report.hq_fraction);
                row.kde_divergence = monitor;
            }
            log.push(row);
        }
        Ok(())
    }
}

/// Output of [`GanState::objective_bias`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveBias {
    /// Mean generator objective over the samples.
    pub estimate: f64,
    /// Quadrature divergence between the target and a KDE of the samples.
    pub reference: f64,
}

impl ObjectiveBias {
    pub fn bias(&self) -> f64 {
        self.estimate - self.reference
    }
}

/// A finished (or aborted) training run.
#[derive(Debug, Clone)]
pub struct TrainRun {
    pub state: GanState,
    pub log: Vec<MetricRow>,
    /// The failure that stopped the run early, if any.
    pub abort: Option<Error>,
}

pub fn train(config: &GanConfig) -> Result<TrainRun> {
    let mut state = GanState::new(config)?;
    let mut log = Vec::new();
    let abort = state.run(config, &mut log).err();
    Ok(TrainRun { state, log, abort })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    /// Share of all samples assigned to each mode, in the density's component order.
    pub fractions: Vec<f64>,
    pub modes_covered: usize,
    /// Share of samples within the mode radius of their nearest mode.
    pub hq_fraction: f64,
}

/// Assigns each sample (a row of `samples`) to its nearest mode and counts modes
/// holding at least [`COVERAGE_THRESHOLD`] of the samples.
pub fn mode_report(samples: &Matrix, density: &Density) -> Result<ModeReport> {
    let (means, stddevs): (Vec<Vec<f64>>, Vec<f64>) = match density {
        Density::OneD(m) => m.components().iter().map(|c| (vec![c.mean], c.stddev)).unzip(),
        Density::TwoD(m) => (m.means().iter().map(|c| c.to_vec()).collect(), m.stddevs().to_vec()),
    };
    if samples.cols() != density.dim() {
        return Err(Error::Dimension {
            expected: density.dim(),
            actual: samples.cols(),
        });
    }
    let n = samples.rows();
    if n < MIN_REPORT_SAMPLES {
        return Err(Error::domain(
            "mode_report",
            format!("{n} samples, need at least {MIN_REPORT_SAMPLES}"),
        ));
    }
    let mut counts = vec![0usize; means.len()];
    for r in 0..n {
        let x = samples.row(r);
        let (best, d2) = means
            .iter()
            .map(|m| m.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one mode");
        if d2.sqrt() <= MODE_RADIUS_SIGMAS * stddevs[best] {
            counts[best] += 1;
        }
    }
    let fractions: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    Ok(ModeReport {
        modes_covered: fractions.iter().filter(|&&f| f >= COVERAGE_THRESHOLD).count(),
        hq_fraction: counts.iter().sum::<usize>() as f64 / n as f64,
        fractions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioAccuracy {
    /// Mean `|log r̂(x) − log(q(x)/p(x))|` over the high-density grid points.
    pub mean_abs_error: f64,
    /// Share of those points where the recovered ratio sits on a clamp bound.
    pub clamp_fraction: f64,
    pub n_points: usize,
}

/// Grid points count when `q(x) + p(x)` exceeds this.
pub const HIGH_DENSITY: f64 = 1e-4;

pub fn ratio_accuracy<Q, P>(
    discriminator: &Mlp,
    f_d: &FDivergence,
    q: &Q,
    p: &P,
    grid: &QuadratureGrid,
) -> Result<RatioAccuracy>
where
    Q: Density1D,
    P: Density1D,
{
    let xs: Vec<f64> = grid
        .nodes()
        .filter(|&x| q.pdf(x) + p.pdf(x) > HIGH_DENSITY)
        .collect();
    if xs.is_empty() {
        return Err(Error::domain("ratio_accuracy", "no grid point has q + p above 1e-4"));
    }
    let v = discriminator.predict(&Matrix::column(&xs))?;
    let mut err = 0.0;
    let mut clamped = 0usize;
    for (&x, &vi) in xs.iter().zip(v.as_slice()) {
        let r = f_d.ratio_from_logit(vi)?;
        if r <= f_d.u_min || r >= f_d.u_max {
            clamped += 1;
        }
        err += (r.ln() - (q.ln_pdf(x) - p.ln_pdf(x))).abs();
    }
    let n = xs.len();
    Ok(RatioAccuracy {
        mean_abs_error: err / n as f64,
        clamp_fraction: clamped as f64 / n as f64,
        n_points: n,
    })
}

/// Settings for training a discriminator alone between two fixed 1D densities.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioConfig {
    pub f_d: DivergenceKind,
    pub hidden_sizes: Vec<usize>,
    pub hidden: Hidden,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub steps: u64,
    pub seed: u64,
    pub init_std: f64,
}

impl Default for RatioConfig {
    fn default() -> Self {
        RatioConfig {
            f_d: DivergenceKind::GanJs,
            hidden_sizes: vec![32, 32],
            hidden: Hidden::LeakyRelu(0.1),
            batch_size: 1024,
            adam: AdamConfig {
                lr: 3e-4,
                ..AdamConfig::default()
            },
            steps: 5000,
            seed: 0,
            init_std: 0.3,
        }
    }
}

/// Trains a discriminator to separate `q` (data) from `p` (model). Returns the
/// network and the per-step bound estimates.
pub fn train_ratio_estimator<Q, P>(config: &RatioConfig, q: &Q, p: &P) -> Result<(Mlp, Vec<f64>)>
where
    Q: Density1D,
    P: Density1D,
{
    if config.batch_size < 2 {
        return Err(Error::Config(format!("batch size {} must be at least 2", config.batch_size)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut sizes = vec![1];
    sizes.extend(&config.hidden_sizes);
    sizes.push(1);
    let mut disc = Mlp::new(&sizes, config.hidden, Output::Linear, config.init_std, &mut rng)?;
    let mut opt = AdamState::for_net(config.adam, &disc);
    let f_d = FDivergence::new(config.f_d);
    let mut trace = Vec::with_capacity(config.steps as usize);
    for step in 0..config.steps {
        let data = Matrix::column(&q.sample(&mut rng, config.batch_size));
        let model = Matrix::column(&p.sample(&mut rng, config.batch_size));
        trace.push(discriminator_update(&mut disc, &mut opt, &f_d, &data, &model, step)?);
    }
    Ok((disc, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{Gaussian1D, Mixture1D, Mixture2D};
    use crate::fdiv::DivergenceKind as K;

    fn small_config(data: Density) -> GanConfig {
        GanConfig {
            generator_hidden: vec![8],
            discriminator_hidden: vec![8],
            steps: 50,
            log_every: 25,
            eval_samples: 1000,
            init_std: 0.1,
            data,
            ..GanConfig::default()
        }
    }

    #[test]
    fn zero_discriminator_gives_minus_log_four() {
        let cfg = small_config(Density::OneD(Mixture1D::two_mode()));
        let mut st = GanState::new(&cfg).unwrap();
        st.discriminator = Mlp::zeros(&[1, 8, 1], cfg.hidden, Output::Linear).unwrap();
        let batch = Matrix::column(&[0.1, -0.3, 2.0, 1.5]);
        let est = st.discriminator_step(&cfg, &batch, &batch).unwrap();
        assert!((est + 4f64.ln()).abs() < 1e-15, "{est}");
    }

    #[test]
    fn zero_lr_freezes_parameters() {
        let mut cfg = small_config(Density::OneD(Mixture1D::two_mode()));
        cfg.discriminator_adam.lr = 0.0;
        let mut st = GanState::new(&cfg).unwrap();
        let before = st.discriminator.clone();
        let batch = Matrix::column(&[0.0, 1.0]);
        let est = st.discriminator_step(&cfg, &batch, &Matrix::column(&[3.0, 4.0])).unwrap();
        assert!(est.is_finite());
        assert_eq!(st.discriminator, before);
    }

    #[test]
    fn steps_only_touch_their_own_network() {
        let cfg = small_config(Density::TwoD(Mixture2D::ring8()));
        let mut st = GanState::new(&cfg).unwrap();
        let (d0, g0) = (st.discriminator.clone(), st.generator.clone());
        let z = sample_latent(&mut ChaCha8Rng::seed_from_u64(9), 16, cfg.latent_dim);
        st.generator_step(&cfg, &z).unwrap();
        assert_eq!(st.discriminator, d0);
        assert_ne!(st.generator, g0);
        let g1 = st.generator.clone();
        let data = sample_data(&cfg.data, &mut ChaCha8Rng::seed_from_u64(10), 16);
        let model = st.generate(&z).unwrap();
        st.discriminator_step(&cfg, &data, &model).unwrap();
        assert_eq!(st.generator, g1);
        assert_ne!(st.discriminator, d0);
    }

    #[test]
    fn reverse_kl_objective_is_minus_mean_logit() {
        let mut cfg = small_config(Density::TwoD(Mixture2D::ring8()));
        cfg.f_g = K::ReverseKl;
        let st = GanState::new(&cfg).unwrap();
        let z = sample_latent(&mut ChaCha8Rng::seed_from_u64(1), 32, cfg.latent_dim);
        let (obj, _) = st.generator_gradients(&cfg, &z).unwrap();
        let v = st.discriminator.predict(&st.generate(&z).unwrap()).unwrap();
        let expected = -v.as_slice().iter().sum::<f64>() / 32.0;
        assert!((obj - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_discriminator_is_a_fixed_point() {
        for f_g in [K::Kl, K::ReverseKl, K::GanAlt, K::Js, K::Alpha(2.0)] {
            let mut cfg = small_config(Density::TwoD(Mixture2D::ring8()));
            cfg.f_g = f_g;
            let mut st = GanState::new(&cfg).unwrap();
            st.discriminator = Mlp::zeros(&[2, 8, 1], cfg.hidden, Output::Linear).unwrap();
            let z = sample_latent(&mut ChaCha8Rng::seed_from_u64(2), 64, 2);
            let (_, grads) = st.generator_gradients(&cfg, &z).unwrap();
            assert!(grads.iter().all(|&g| g == 0.0), "{f_g}");
        }
    }

    #[test]
    fn training_is_deterministic_and_logs_reports() {
        let cfg = small_config(Density::OneD(Mixture1D::two_mode()));
        let a = train(&cfg).unwrap();
        let b = train(&cfg).unwrap();
        assert!(a.abort.is_none());
        assert_eq!(a.log, b.log);
        assert_eq!(a.state.generator, b.state.generator);
        assert_eq!(a.log.len(), 50);
        assert_eq!(a.state.step(), 50);
        let reports: Vec<_> = a.log.iter().filter(|r| r.modes_covered.is_some()).map(|r| r.step).collect();
        assert_eq!(reports, vec![25, 50]);
        assert!(a.log[24].kde_divergence.unwrap().is_finite());
    }

    #[test]
    fn log_interval_does_not_change_the_trajectory() {
        let mut cfg = small_config(Density::TwoD(Mixture2D::ring8()));
        let a = train(&cfg).unwrap();
        cfg.log_every = 7;
        let b = train(&cfg).unwrap();
        assert_eq!(a.state.generator, b.state.generator);
    }

    #[test]
    fn zero_steps_returns_initial_state() {
        let mut cfg = small_config(Density::TwoD(Mixture2D::ring8()));
        cfg.steps = 0;
        let run = train(&cfg).unwrap();
        assert!(run.log.is_empty());
        assert_eq!(run.state.generator, GanState::new(&cfg).unwrap().generator);
    }

    #[test]
    fn config_validation() {
        let mut cfg = GanConfig::default();
        cfg.batch_size = 1;
        assert!(matches!(GanState::new(&cfg), Err(Error::Config(_))));
        let mut cfg = GanConfig::default();
        cfg.eval_samples = 10;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn mode_report_examples() {
        let ring = Mixture2D::ring8();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let own = Matrix::from_rows(&ring.sample(&mut rng, 5000));
        let r = mode_report(&own, &Density::TwoD(ring.clone())).unwrap();
        assert_eq!(r.modes_covered, 8);
        assert!(r.hq_fraction > 0.95);
        assert!(r.fractions.iter().sum::<f64>() <= 1.0);

        let m = ring.means()[3];
        let one = Matrix::from_rows(&vec![m; 1000]);
        let r = mode_report(&one, &Density::TwoD(ring.clone())).unwrap();
        assert_eq!(r.modes_covered, 1);
        assert_eq!(r.hq_fraction, 1.0);

        assert!(mode_report(&Matrix::from_rows(&[[0.0, 0.0]]), &Density::TwoD(ring)).is_err());
    }

    #[test]
    fn ratio_accuracy_of_analytic_optimum() {
        // V(x) = x is the exact log ratio of N(0.5, 1) to N(-0.5, 1)
        let mut v = Mlp::zeros(&[1, 1], Hidden::Tanh, Output::Linear).unwrap();
        v.params_mut()[0] = 1.0;
        let q = Gaussian1D::new(0.5, 1.0).unwrap();
        let p = Gaussian1D::new(-0.5, 1.0).unwrap();
        let f = FDivergence::new(K::GanJs);
        let grid = QuadratureGrid::covering(&[&q, &p], 2001).unwrap();
        let acc = ratio_accuracy(&v, &f, &q, &p, &grid).unwrap();
        assert!(acc.mean_abs_error < 1e-12, "{acc:?}");
        assert_eq!(acc.clamp_fraction, 0.0);

        let zero = Mlp::zeros(&[1, 4, 1], Hidden::Tanh, Output::Linear).unwrap();
        let acc = ratio_accuracy(&zero, &f, &q, &q, &grid).unwrap();
        assert_eq!(acc.mean_abs_error, 0.0);
    }
}
