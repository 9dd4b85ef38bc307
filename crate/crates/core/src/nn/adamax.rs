//! Adamax: Adam with an infinity-norm second moment.

use crate::nn::{ParamSet, Scalar};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPSILON: f64 = 1e-8;

/// Optimizer state: first-moment EMA and infinity-norm accumulator per
/// parameter, plus the step counter for bias correction.
///
/// Update rule per parameter:
///   m ← β1·m + (1−β1)·g
///   u ← max(β2·u, |g|)
///   θ ← θ − (lr / (1−β1^t)) · m / (u + ε)
pub struct Adamax<F> {
    lr: F,
    beta1: F,
    beta2: F,
    eps: F,
    step_count: u64,
    m: Vec<Vec<F>>,
    u: Vec<Vec<F>>,
}

impl<F: Scalar> Adamax<F> {
    pub fn new(template: &ParamSet<F>, learning_rate: f64) -> Adamax<F> {
        let shapes: Vec<usize> = template.slices().iter().map(|s| s.len()).collect();
        Adamax {
            lr: F::from_f64(learning_rate),
            beta1: F::from_f64(BETA1),
            beta2: F::from_f64(BETA2),
            eps: F::from_f64(EPSILON),
            step_count: 0,
            m: shapes.iter().map(|&n| vec![F::zero(); n]).collect(),
            u: shapes.iter().map(|&n| vec![F::zero(); n]).collect(),
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Applies one update in place. `grads` must come from the same model
    /// the state was built for.
    pub fn step(&mut self, params: &mut ParamSet<F>, grads: &ParamSet<F>) {
        self.step_count += 1;
        let correction = 1.0 - BETA1.powi(self.step_count as i32);
        let alpha = self.lr / F::from_f64(correction);
        let one_minus_beta1 = F::one() - self.beta1;

        let grad_slices = grads.slices();
        for (idx, p_slice) in params.slices_mut().into_iter().enumerate() {
            let g_slice = grad_slices[idx];
            let m = &mut self.m[idx];
            let u = &mut self.u[idx];
            for i in 0..p_slice.len() {
                let g = g_slice[i];
                m[i] = self.beta1 * m[i] + one_minus_beta1 * g;
                u[i] = (self.beta2 * u[i]).max(g.abs());
                p_slice[i] = p_slice[i] - alpha * m[i] / (u[i] + self.eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::ModelConfig;

    fn tiny() -> (ParamSet<f64>, ParamSet<f64>) {
        let mut cfg = ModelConfig::cw(vec![2], 2);
        cfg.embed_dim = 1;
        cfg.lstm_units = 1;
        cfg.dense_units = 1;
        let params = ParamSet::init(&cfg, 5);
        let grads = ParamSet::zeros(&cfg);
        (params, grads)
    }

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let (mut params, grads) = tiny();
        let before = params.to_flat();
        let mut opt = Adamax::new(&params, 0.001);
        opt.step(&mut params, &grads);
        opt.step(&mut params, &grads);
        assert_eq!(params.to_flat(), before);
    }

    #[test]
    fn first_step_matches_hand_computed_update() {
        // single weight w = 1.0, gradient 0.5, lr 0.001:
        //   m = 0.1 * 0.5 = 0.05
        //   u = max(0, |0.5|) = 0.5
        //   w' = 1.0 - (0.001 / (1 - 0.9)) * 0.05 / (0.5 + 1e-8)
        let (mut params, mut grads) = tiny();
        params.fill(0.0);
        params.out_b[0] = 1.0;
        grads.out_b[0] = 0.5;
        let mut opt = Adamax::new(&params, 0.001);
        opt.step(&mut params, &grads);
        let expected = 1.0 - (0.001 / (1.0 - 0.9)) * 0.05 / (0.5 + 1e-8);
        assert!((params.out_b[0] - expected).abs() < 1e-15);
        assert!((expected - 0.999).abs() < 1e-9);
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let run = || {
            let (mut params, mut grads) = tiny();
            let mut opt = Adamax::new(&params, 0.01);
            for step in 1..=10 {
                for (i, s) in grads.slices_mut().into_iter().enumerate() {
                    for (j, v) in s.iter_mut().enumerate() {
                        *v = ((step * 7 + i * 3 + j) % 5) as f64 * 0.1 - 0.2;
                    }
                }
                opt.step(&mut params, &grads);
            }
            params.to_flat()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn bias_correction_decays() {
        // after many steps the correction approaches 1, so the effective
        // step size approaches lr * m/u
        let (mut params, mut grads) = tiny();
        params.fill(1.0);
        grads.fill(0.0);
        grads.out_b[0] = 1.0;
        let mut opt = Adamax::new(&params, 0.001);
        for _ in 0..200 {
            opt.step(&mut params, &grads);
        }
        // constant gradient 1: m -> 1, u = 1, so each late step ~ lr
        let before = params.out_b[0];
        opt.step(&mut params, &grads);
        let delta = before - params.out_b[0];
        assert!((delta - 0.001).abs() < 1e-6, "delta {delta}");
    }
}
