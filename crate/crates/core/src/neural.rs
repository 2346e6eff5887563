//! Minimal dense MLP with explicit forward/backward passes and an Adam optimizer.
//!
//! Parameters live in one flat vector, layer by layer: the row-major
//! `out × in` weight matrix followed by the `out` biases. Gradients use the same
//! layout, so optimizers work on plain slices.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::math::sigmoid;

/// Dense row-major matrix; rows are batch elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<const N: usize>(rows: &[[f64; N]]) -> Self {
        Matrix {
            rows: rows.len(),
            cols: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Column vector from a slice.
    pub fn column(values: &[f64]) -> Self {
        Matrix {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                actual: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hidden {
    LeakyRelu(f64),
    Tanh,
}

impl Hidden {
    fn apply(self, z: f64) -> f64 {
        match self {
            Hidden::LeakyRelu(slope) => {
                if z > 0.0 {
                    z
                } else {
                    slope * z
                }
            }
            Hidden::Tanh => z.tanh(),
        }
    }

    /// Derivative, given the pre-activation `z` and activation `a`.
    fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Hidden::LeakyRelu(slope) => {
                if z > 0.0 {
                    1.0
                } else {
                    slope
                }
            }
            Hidden::Tanh => 1.0 - a * a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Output {
    Linear,
    Sigmoid,
}

impl Output {
    fn apply(self, z: f64) -> f64 {
        match self {
            Output::Linear => z,
            Output::Sigmoid => sigmoid(z),
        }
    }

    fn derivative(self, a: f64) -> f64 {
        match self {
            Output::Linear => 1.0,
            Output::Sigmoid => a * (1.0 - a),
        }
    }
}

/// Per-layer parameter offsets into the flat vector.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LayerShape {
    n_in: usize,
    n_out: usize,
    w: usize,
    b: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    hidden: Hidden,
    output: Output,
    layers: Vec<LayerShape>,
    params: Vec<f64>,
}

/// Activations saved by [`Mlp::forward`] for the matching [`Mlp::backward`].
#[derive(Debug, Clone)]
pub struct Cache {
    /// `activations[0]` is the input; `activations[l + 1]` the output of layer `l`.
    activations: Vec<Matrix>,
    pre_activations: Vec<Matrix>,
}

impl Cache {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("non-empty cache")
    }

    /// Pre-activations `z` of every layer, the output layer last.
    pub fn pre_activations(&self) -> &[Matrix] {
        &self.pre_activations
    }
}

impl Mlp {
    /// Builds a network with all parameters zero.
    pub fn zeros(sizes: &[usize], hidden: Hidden, output: Output) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::Config(format!(
                "layer sizes {sizes:?} need at least input and output, all nonzero"
            )));
        }
        let mut layers = Vec::with_capacity(sizes.len() - 1);
        let mut offset = 0;
        for w in sizes.windows(2) {
            let (n_in, n_out) = (w[0], w[1]);
            layers.push(LayerShape {
                n_in,
                n_out,
                w: offset,
                b: offset + n_in * n_out,
            });
            offset += n_in * n_out + n_out;
        }
        Ok(Mlp {
            sizes: sizes.to_vec(),
            hidden,
            output,
            layers,
            params: vec![0.0; offset],
        })
    }

    /// Weights drawn i.i.d. from `N(0, init_std²)`, biases zero.
    pub fn new<R: Rng + ?Sized>(
        sizes: &[usize],
        hidden: Hidden,
        output: Output,
        init_std: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut net = Mlp::zeros(sizes, hidden, output)?;
        let normal = Normal::new(0.0, init_std)
            .map_err(|e| Error::Config(format!("init stddev {init_std}: {e}")))?;
        for layer in net.layers.clone() {
            for w in &mut net.params[layer.w..layer.b] {
                *w = normal.sample(rng);
            }
        }
        Ok(net)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn hidden(&self) -> Hidden {
        self.hidden
    }

    pub fn output_activation(&self) -> Output {
        self.output
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().expect("sizes non-empty")
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// Index of the layer owning flat parameter `idx`.
    pub fn layer_of_param(&self, idx: usize) -> usize {
        self.layers
            .iter()
            .position(|l| idx < l.b + l.n_out)
            .unwrap_or(self.layers.len() - 1)
    }

    /// Mutable view of layer `l`'s weights (row-major `out × in`) and biases.
    pub fn layer_mut(&mut self, l: usize) -> (&mut [f64], &mut [f64]) {
        let s = self.layers[l];
        let (w, rest) = self.params[s.w..].split_at_mut(s.n_in * s.n_out);
        (w, &mut rest[..s.n_out])
    }

    pub fn forward(&self, batch: &Matrix) -> Result<(Matrix, Cache)> {
        if batch.cols != self.input_dim() {
            return Err(Error::Dimension {
                expected: self.input_dim(),
                actual: batch.cols,
            });
        }
        let n = batch.rows;
        let last = self.layers.len() - 1;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        let mut pre_activations = Vec::with_capacity(self.layers.len());
        activations.push(batch.clone());
        for (l, s) in self.layers.iter().enumerate() {
            let input = &activations[l];
            let w = &self.params[s.w..s.b];
            let b = &self.params[s.b..s.b + s.n_out];
            let mut z = Matrix::zeros(n, s.n_out);
            for r in 0..n {
                let x = input.row(r);
                let zr = z.row_mut(r);
                for (j, zj) in zr.iter_mut().enumerate() {
                    let wj = &w[j * s.n_in..(j + 1) * s.n_in];
                    *zj = b[j] + wj.iter().zip(x).map(|(a, c)| a * c).sum::<f64>();
                }
            }
            let mut a = z.clone();
            if l == last {
                a.data.iter_mut().for_each(|v| *v = self.output.apply(*v));
            } else {
                a.data.iter_mut().for_each(|v| *v = self.hidden.apply(*v));
            }
            pre_activations.push(z);
            activations.push(a);
        }
        let out = activations.last().expect("one layer at least").clone();
        Ok((
            out,
            Cache {
                activations,
                pre_activations,
            },
        ))
    }

    pub fn predict(&self, batch: &Matrix) -> Result<Matrix> {
        self.forward(batch).map(|(out, _)| out)
    }

    /// Gradients of a scalar loss given `dL/d(output)`: returns the flat parameter
    /// gradient and `dL/d(input)`.
    pub fn backward(&self, cache: &Cache, output_grad: &Matrix) -> Result<(Vec<f64>, Matrix)> {
        let out = cache.output();
        if output_grad.rows != out.rows || output_grad.cols != out.cols {
            return Err(Error::Dimension {
                expected: out.rows * out.cols,
                actual: output_grad.rows * output_grad.cols,
            });
        }
        if cache.pre_activations.len() != self.layers.len()
            || cache.activations[0].cols != self.input_dim()
        {
            return Err(Error::Dimension {
                expected: self.layers.len(),
                actual: cache.pre_activations.len(),
            });
        }
        let n = out.rows;
        let last = self.layers.len() - 1;
        let mut grads = vec![0.0; self.params.len()];
        let mut delta = output_grad.clone();
        for l in (0..self.layers.len()).rev() {
            let s = self.layers[l];
            let z = &cache.pre_activations[l];
            let a = &cache.activations[l + 1];
            for ((d, zv), av) in delta.data.iter_mut().zip(&z.data).zip(&a.data) {
                *d *= if l == last {
                    self.output.derivative(*av)
                } else {
                    self.hidden.derivative(*zv, *av)
                };
            }
            let input = &cache.activations[l];
            let w = &self.params[s.w..s.b];
            let mut next = Matrix::zeros(n, s.n_in);
            {
                let (gw, gb) = grads[s.w..s.b + s.n_out].split_at_mut(s.n_in * s.n_out);
                for r in 0..n {
                    let x = input.row(r);
                    let dr = delta.row(r);
                    let nr = &mut next.data[r * s.n_in..(r + 1) * s.n_in];
                    for (j, &g) in dr.iter().enumerate() {
                        if g == 0.0 {
                            continue;
                        }
                        gb[j] += g;
                        let gwj = &mut gw[j * s.n_in..(j + 1) * s.n_in];
                        let wj = &w[j * s.n_in..(j + 1) * s.n_in];
                        for k in 0..s.n_in {
                            gwj[k] += g * x[k];
                            nr[k] += g * wj[k];
                        }
                    }
                }
            }
            delta = next;
        }
        Ok((grads, delta))
    }

    /// Text checkpoint: a header with layer sizes and nonlinearity tags, then one
    /// parameter per line in flat row-major order.
    pub fn to_checkpoint(&self) -> String {
        let mut s = String::from("fgan-mlp 1\n");
        let sizes: Vec<String> = self.sizes.iter().map(|n| n.to_string()).collect();
        writeln!(s, "sizes {}", sizes.join(" ")).unwrap();
        match self.hidden {
            Hidden::LeakyRelu(slope) => writeln!(s, "hidden leaky_relu {slope:.16e}").unwrap(),
            Hidden::Tanh => writeln!(s, "hidden tanh").unwrap(),
        }
        match self.output {
            Output::Linear => writeln!(s, "output linear").unwrap(),
            Output::Sigmoid => writeln!(s, "output sigmoid").unwrap(),
        }
        writeln!(s, "params {}", self.params.len()).unwrap();
        for p in &self.params {
            writeln!(s, "{p:.16e}").unwrap();
        }
        s
    }

    pub fn from_checkpoint(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("checkpoint: {msg}"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("fgan-mlp 1") {
            return Err(bad("missing header"));
        }
        let field = |line: Option<&str>, key: &str| -> Result<Vec<String>> {
            let line = line.ok_or_else(|| bad(&format!("missing {key}")))?;
            let mut it = line.split_whitespace();
            if it.next() != Some(key) {
                return Err(bad(&format!("expected {key}")));
            }
            Ok(it.map(str::to_owned).collect())
        };
        let sizes = field(lines.next(), "sizes")?
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| bad("bad size")))
            .collect::<Result<Vec<_>>>()?;
        let hidden = match field(lines.next(), "hidden")?.as_slice() {
            [t] if t == "tanh" => Hidden::Tanh,
            [t, slope] if t == "leaky_relu" => {
                Hidden::LeakyRelu(slope.parse().map_err(|_| bad("bad slope"))?)
            }
            _ => return Err(bad("unknown hidden nonlinearity")),
        };
        let output = match field(lines.next(), "output")?.as_slice() {
            [t] if t == "linear" => Output::Linear,
            [t] if t == "sigmoid" => Output::Sigmoid,
            _ => return Err(bad("unknown output nonlinearity")),
        };
        let count: usize = match field(lines.next(), "params")?.as_slice() {
            [c] => c.parse().map_err(|_| bad("bad parameter count"))?,
            _ => return Err(bad("bad parameter count")),
        };
        let mut net = Mlp::zeros(&sizes, hidden, output)?;
        if count != net.params.len() {
            return Err(Error::Dimension {
                expected: net.params.len(),
                actual: count,
            });
        }
        for (i, p) in net.params.iter_mut().enumerate() {
            let line = lines.next().ok_or_else(|| bad(&format!("missing parameter {i}")))?;
            *p = line.trim().parse().map_err(|_| bad(&format!("bad parameter {i}")))?;
        }
        Ok(net)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    /// `lr = 1e-4, β₁ = 0.5, β₂ = 0.999`.
    fn default() -> Self {
        AdamConfig {
            lr: 1e-4,
            beta1: 0.5,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl AdamState {
    pub fn new(config: AdamConfig, n_params: usize) -> Self {
        AdamState {
            config,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            t: 0,
        }
    }

    pub fn for_net(config: AdamConfig, net: &Mlp) -> Self {
        AdamState::new(config, net.params().len())
    }

    pub fn timestep(&self) -> u64 {
        self.t
    }

    /// One bias-corrected Adam update. On a non-finite gradient nothing is
    /// modified and the index of the first offending parameter is returned.
    pub fn step_slice(&mut self, params: &mut [f64], grads: &[f64]) -> std::result::Result<(), usize> {
        assert_eq!(params.len(), self.m.len(), "parameter count");
        assert_eq!(grads.len(), self.m.len(), "gradient count");
        if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
            return Err(i);
        }
        let AdamConfig {
            lr,
            beta1,
            beta2,
            eps,
        } = self.config;
        self.t += 1;
        let c1 = 1.0 - beta1.powi(self.t as i32);
        let c2 = 1.0 - beta2.powi(self.t as i32);
        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }

    /// [`step_slice`](Self::step_slice) on a network, reporting the offending layer.
    pub fn step(&mut self, net: &mut Mlp, grads: &[f64]) -> Result<()> {
        let result = self.step_slice(&mut net.params, grads);
        result.map_err(|i| Error::NonFiniteGradient {
            layer: net.layer_of_param(i),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    fn random_batch(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows * cols).map(|_| rng.random_range(-1.5..1.5)).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn zero_weight_net_outputs_bias() {
        let mut net = Mlp::zeros(&[3, 4, 2], Hidden::LeakyRelu(0.1), Output::Linear).unwrap();
        let (_, b) = net.layer_mut(1);
        b.copy_from_slice(&[0.7, -1.2]);
        let out = net.predict(&random_batch(&mut rng(), 5, 3)).unwrap();
        for r in 0..5 {
            assert_eq!(out.row(r), &[0.7, -1.2]);
        }
    }

    #[test]
    fn identity_layer() {
        let mut net = Mlp::zeros(&[3, 3], Hidden::Tanh, Output::Linear).unwrap();
        let (w, _) = net.layer_mut(0);
        for i in 0..3 {
            w[i * 3 + i] = 1.0;
        }
        let x = random_batch(&mut rng(), 7, 3);
        assert_eq!(net.predict(&x).unwrap(), x);
    }

    #[test]
    fn batch_shape_contract() {
        let mut r = rng();
        let net = Mlp::new(&[2, 16, 16, 1], Hidden::LeakyRelu(0.1), Output::Linear, 0.1, &mut r).unwrap();
        let out = net.predict(&random_batch(&mut r, 128, 2)).unwrap();
        assert_eq!((out.rows(), out.cols()), (128, 1));
        let err = net.predict(&random_batch(&mut r, 4, 3)).unwrap_err();
        assert_eq!(err, Error::Dimension { expected: 2, actual: 3 });
    }

    #[test]
    fn linear_input_gradient_is_w_transpose_ones() {
        let mut r = rng();
        let net = Mlp::new(&[3, 2], Hidden::Tanh, Output::Linear, 1.0, &mut r).unwrap();
        let x = random_batch(&mut r, 4, 3);
        let (out, cache) = net.forward(&x).unwrap();
        let ones = Matrix::from_vec(out.rows(), out.cols(), vec![1.0; out.rows() * out.cols()]).unwrap();
        let (_, dx) = net.backward(&cache, &ones).unwrap();
        let w = &net.params()[..6];
        for row in 0..4 {
            for k in 0..3 {
                assert!((dx.get(row, k) - (w[k] + w[3 + k])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_output_grad_gives_zero_gradients() {
        let mut r = rng();
        let net = Mlp::new(&[2, 8, 1], Hidden::LeakyRelu(0.1), Output::Sigmoid, 0.5, &mut r).unwrap();
        let (out, cache) = net.forward(&random_batch(&mut r, 6, 2)).unwrap();
        let (g, dx) = net.backward(&cache, &Matrix::zeros(out.rows(), 1)).unwrap();
        assert!(g.iter().all(|v| *v == 0.0));
        assert!(dx.as_slice().iter().all(|v| *v == 0.0));
        assert!(net.backward(&cache, &Matrix::zeros(out.rows(), 2)).is_err());
    }

    /// Loss = Σ c ⊙ output for a fixed random `c`.
    fn check_gradients(sizes: &[usize], hidden: Hidden, output: Output) {
        let mut r = rng();
        let net = Mlp::new(sizes, hidden, output, 0.7, &mut r).unwrap();
        let x = random_batch(&mut r, 5, sizes[0]);
        let c = random_batch(&mut r, 5, *sizes.last().unwrap());
        let loss = |net: &Mlp, x: &Matrix| -> f64 {
            let out = net.predict(x).unwrap();
            out.as_slice().iter().zip(c.as_slice()).map(|(a, b)| a * b).sum()
        };
        let (_, cache) = net.forward(&x).unwrap();
        let (g, dx) = net.backward(&cache, &c).unwrap();
        let h = 1e-5;
        for i in 0..net.params().len() {
            let mut plus = net.clone();
            plus.params_mut()[i] += h;
            let mut minus = net.clone();
            minus.params_mut()[i] -= h;
            let fd = (loss(&plus, &x) - loss(&minus, &x)) / (2.0 * h);
            let rel = (fd - g[i]).abs() / g[i].abs().max(fd.abs()).max(1e-6);
            assert!(rel < 1e-4, "param {i}: analytic {} fd {fd}", g[i]);
        }
        for i in 0..x.as_slice().len() {
            let mut xp = x.clone();
            xp.as_mut_slice()[i] += h;
            let mut xm = x.clone();
            xm.as_mut_slice()[i] -= h;
            let fd = (loss(&net, &xp) - loss(&net, &xm)) / (2.0 * h);
            let a = dx.as_slice()[i];
            assert!((fd - a).abs() / a.abs().max(fd.abs()).max(1e-6) < 1e-4);
        }
    }

    #[test]
    fn gradient_check_small_nets() {
        check_gradients(&[2, 5, 1], Hidden::Tanh, Output::Linear);
        check_gradients(&[3, 4, 4, 2], Hidden::Tanh, Output::Sigmoid);
        check_gradients(&[2, 6, 3, 1], Hidden::LeakyRelu(0.1), Output::Linear);
    }

    #[test]
    fn adam_zero_gradient_is_noop() {
        let mut params = vec![1.0, -2.0, 3.0];
        let mut adam = AdamState::new(AdamConfig::default(), 3);
        adam.step_slice(&mut params, &[0.0; 3]).unwrap();
        assert_eq!(params, vec![1.0, -2.0, 3.0]);
        assert_eq!(adam.timestep(), 1);
    }

    #[test]
    fn adam_first_step_moves_by_lr() {
        let cfg = AdamConfig::default();
        let mut params = vec![0.0, 0.0];
        let mut adam = AdamState::new(cfg, 2);
        adam.step_slice(&mut params, &[0.3, -7.0]).unwrap();
        assert!((params[0] + cfg.lr).abs() < 1e-10);
        assert!((params[1] - cfg.lr).abs() < 1e-10);
    }

    #[test]
    fn adam_constant_gradient_limit() {
        let cfg = AdamConfig {
            lr: 1e-3,
            ..AdamConfig::default()
        };
        let mut params = vec![0.0];
        let mut adam = AdamState::new(cfg, 1);
        let mut prev = 0.0;
        for _ in 0..5000 {
            adam.step_slice(&mut params, &[2.5]).unwrap();
            let delta = params[0] - prev;
            assert!((delta + cfg.lr).abs() < 1e-8, "{delta}");
            prev = params[0];
        }
    }

    #[test]
    fn adam_rejects_non_finite_with_layer() {
        let mut net = Mlp::zeros(&[2, 3, 1], Hidden::Tanh, Output::Linear).unwrap();
        let before = net.clone();
        let mut adam = AdamState::for_net(AdamConfig::default(), &net);
        let mut g = vec![0.0; net.params().len()];
        // layer 0 holds 2·3 weights + 3 biases
        let idx = 2 * 3 + 3 + 1;
        g[idx] = f64::NAN;
        let err = adam.step(&mut net, &g).unwrap_err();
        assert_eq!(err, Error::NonFiniteGradient { layer: 1 });
        assert_eq!(net, before);
        assert_eq!(adam.timestep(), 0);
    }

    #[test]
    fn checkpoint_round_trip() {
        let mut r = rng();
        let net = Mlp::new(&[2, 5, 1], Hidden::LeakyRelu(0.1), Output::Sigmoid, 0.3, &mut r).unwrap();
        let text = net.to_checkpoint();
        assert!(text.starts_with("fgan-mlp 1\nsizes 2 5 1\nhidden leaky_relu"));
        assert_eq!(Mlp::from_checkpoint(&text).unwrap(), net);
        assert!(Mlp::from_checkpoint("garbage").is_err());
        let truncated: String = text.lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(Mlp::from_checkpoint(&truncated).is_err());
    }

    #[test]
    fn deterministic_init() {
        let a = Mlp::new(&[2, 8, 1], Hidden::Tanh, Output::Linear, 0.01, &mut rng()).unwrap();
        let b = Mlp::new(&[2, 8, 1], Hidden::Tanh, Output::Linear, 0.01, &mut rng()).unwrap();
        assert_eq!(a, b);
        let (w, b0) = (&a.params()[..16], &a.params()[16..24]);
        assert!(w.iter().all(|v| *v != 0.0));
        assert!(b0.iter().all(|v| *v == 0.0));
    }
}
