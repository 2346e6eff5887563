//! Derivative-free Nelder-Mead simplex minimization.

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once `max f − min f` over the simplex falls below this.
    pub value_tolerance: f64,
    /// Edge length of the initial simplex along each axis.
    pub initial_step: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best simplex value after each iteration.
    pub trace: Vec<(usize, f64)>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `start`. Non-finite objective values are treated as `+∞`.
pub fn minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadResult {
    let n = start.len();
    assert_eq!(opts.initial_step.len(), n, "initial_step dimension");
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(start);
    simplex.push((start.to_vec(), v0));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += opts.initial_step[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    let point = |centroid: &[f64], worst: &[f64], coeff: f64| -> Vec<f64> {
        centroid
            .iter()
            .zip(worst)
            .map(|(c, w)| c + coeff * (c - w))
            .collect()
    };

    while iterations < opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst - best < opts.value_tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst_x = simplex[n].0.clone();
        let second_worst = simplex[n - 1].1;

        let xr = point(&centroid, &worst_x, REFLECT);
        let fr = eval(&xr);
        if fr < best {
            let xe = point(&centroid, &worst_x, REFLECT * EXPAND);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < second_worst {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let xc = point(&centroid, &worst_x, REFLECT * CONTRACT);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = point(&centroid, &worst_x, -CONTRACT);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&x0) {
                        *xi = bi + SHRINK * (*xi - bi);
                    }
                    *v = eval(x);
                }
            }
        }
        let b = simplex.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        trace.push((iterations, b));
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        value,
        iterations,
        evaluations,
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize) -> NelderMeadOptions {
        NelderMeadOptions {
            max_iterations: 5000,
            value_tolerance: 1e-14,
            initial_step: vec![0.5; n],
        }
    }

    #[test]
    fn quadratic_bowl() {
        let r = minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], &opts(2));
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5, "{:?}", r.x);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &opts(2),
        );
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn trace_is_monotone_and_nan_is_rejected() {
        let r = minimize(
            |x| if x[0] < -1.0 { f64::NAN } else { (x[0] - 0.3).powi(2) },
            &[2.0],
            &opts(1),
        );
        assert!((r.x[0] - 0.3).abs() < 1e-6);
        for w in r.trace.windows(2) {
            assert!(w[1].1 <= w[0].1);
        }
        assert!(r.trace.iter().all(|(_, v)| *v >= r.value));
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let o = NelderMeadOptions {
            max_iterations: 3,
            value_tolerance: 0.0,
            initial_step: vec![1.0, 1.0],
        };
        let r = minimize(|x| x[0] * x[0] + x[1] * x[1], &[5.0, 5.0], &o);
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }
}
