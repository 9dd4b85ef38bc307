//! The parameter bundle shared by models, gradients, and optimizer state.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::nn::{ModelConfig, Scalar};

/// One LSTM direction: input weights, recurrent weights, bias. Gate rows
/// are stacked in the order input, forget, cell, output (4H total).
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams<F> {
    /// 4H × D
    pub w_x: Array2<F>,
    /// 4H × H
    pub w_h: Array2<F>,
    /// 4H
    pub b: Array1<F>,
}

/// Every trainable tensor of a sequence model. The same structure carries
/// parameter values, gradients, and per-tensor optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet<F> {
    /// One V_k × E bank per feature.
    pub embeddings: Vec<Array2<F>>,
    pub fwd: LstmParams<F>,
    pub bwd: LstmParams<F>,
    /// dense_units × 2H
    pub dense_w: Array2<F>,
    pub dense_b: Array1<F>,
    /// label_count × dense_units
    pub out_w: Array2<F>,
    pub out_b: Array1<F>,
}

const INIT_RANGE: f64 = 0.05;

impl<F: Scalar> ParamSet<F> {
    /// Weight matrices and embeddings uniform in ±0.05 from the seed;
    /// biases zero except the forget gate at 1.0.
    pub fn init(config: &ModelConfig, seed: u64) -> ParamSet<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut uniform = |rows: usize, cols: usize| -> Array2<F> {
            Array2::from_shape_fn((rows, cols), |_| {
                F::from_f64(rng.gen_range(-INIT_RANGE..INIT_RANGE))
            })
        };

        let e = config.embed_dim;
        let d = config.input_dim();
        let h = config.lstm_units;

        let embeddings = config
            .feature_vocab_sizes
            .iter()
            .map(|&v| uniform(v, e))
            .collect();
        let lstm = |rng_uniform: &mut dyn FnMut(usize, usize) -> Array2<F>| LstmParams {
            w_x: rng_uniform(4 * h, d),
            w_h: rng_uniform(4 * h, h),
            b: forget_bias_ones(h),
        };
        let fwd = lstm(&mut uniform);
        let bwd = lstm(&mut uniform);
        let dense_w = uniform(config.dense_units, 2 * h);
        let out_w = uniform(config.label_count, config.dense_units);

        ParamSet {
            embeddings,
            fwd,
            bwd,
            dense_w,
            dense_b: Array1::zeros(config.dense_units),
            out_w,
            out_b: Array1::zeros(config.label_count),
        }
    }

    pub fn zeros(config: &ModelConfig) -> ParamSet<F> {
        let e = config.embed_dim;
        let d = config.input_dim();
        let h = config.lstm_units;
        let zero_lstm = || LstmParams {
            w_x: Array2::zeros((4 * h, d)),
            w_h: Array2::zeros((4 * h, h)),
            b: Array1::zeros(4 * h),
        };
        ParamSet {
            embeddings: config
                .feature_vocab_sizes
                .iter()
                .map(|&v| Array2::zeros((v, e)))
                .collect(),
            fwd: zero_lstm(),
            bwd: zero_lstm(),
            dense_w: Array2::zeros((config.dense_units, 2 * h)),
            dense_b: Array1::zeros(config.dense_units),
            out_w: Array2::zeros((config.label_count, config.dense_units)),
            out_b: Array1::zeros(config.label_count),
        }
    }

    /// Tensors in a fixed order, named for serialization.
    pub fn named_slices(&self) -> Vec<(String, &[F])> {
        let mut out: Vec<(String, &[F])> = Vec::new();
        for (k, e) in self.embeddings.iter().enumerate() {
            out.push((format!("emb.{k}"), slice_of(e)));
        }
        for (dir, p) in [("fwd", &self.fwd), ("bwd", &self.bwd)] {
            out.push((format!("{dir}.w_x"), slice_of(&p.w_x)));
            out.push((format!("{dir}.w_h"), slice_of(&p.w_h)));
            out.push((format!("{dir}.b"), p.b.as_slice().expect("contiguous")));
        }
        out.push(("dense.w".into(), slice_of(&self.dense_w)));
        out.push(("dense.b".into(), self.dense_b.as_slice().expect("contiguous")));
        out.push(("out.w".into(), slice_of(&self.out_w)));
        out.push(("out.b".into(), self.out_b.as_slice().expect("contiguous")));
        out
    }

    pub fn named_shapes(&self) -> Vec<(String, Vec<usize>)> {
        let mut out: Vec<(String, Vec<usize>)> = Vec::new();
        for (k, e) in self.embeddings.iter().enumerate() {
            out.push((format!("emb.{k}"), e.shape().to_vec()));
        }
        for (dir, p) in [("fwd", &self.fwd), ("bwd", &self.bwd)] {
            out.push((format!("{dir}.w_x"), p.w_x.shape().to_vec()));
            out.push((format!("{dir}.w_h"), p.w_h.shape().to_vec()));
            out.push((format!("{dir}.b"), p.b.shape().to_vec()));
        }
        out.push(("dense.w".into(), self.dense_w.shape().to_vec()));
        out.push(("dense.b".into(), self.dense_b.shape().to_vec()));
        out.push(("out.w".into(), self.out_w.shape().to_vec()));
        out.push(("out.b".into(), self.out_b.shape().to_vec()));
        out
    }

    pub fn slices(&self) -> Vec<&[F]> {
        self.named_slices().into_iter().map(|(_, s)| s).collect()
    }

    pub fn slices_mut(&mut self) -> Vec<&mut [F]> {
        let mut out: Vec<&mut [F]> = Vec::new();
        for e in self.embeddings.iter_mut() {
            out.push(slice_of_mut(e));
        }
        for p in [&mut self.fwd, &mut self.bwd] {
            out.push(slice_of_mut(&mut p.w_x));
            out.push(slice_of_mut(&mut p.w_h));
            out.push(p.b.as_slice_mut().expect("contiguous"));
        }
        out.push(slice_of_mut(&mut self.dense_w));
        out.push(self.dense_b.as_slice_mut().expect("contiguous"));
        out.push(slice_of_mut(&mut self.out_w));
        out.push(self.out_b.as_slice_mut().expect("contiguous"));
        out
    }

    pub fn param_count(&self) -> usize {
        self.slices().iter().map(|s| s.len()).sum()
    }

    pub fn to_flat(&self) -> Vec<F> {
        let mut flat = Vec::with_capacity(self.param_count());
        for s in self.slices() {
            flat.extend_from_slice(s);
        }
        flat
    }

    pub fn assign_flat(&mut self, flat: &[F]) {
        let mut offset = 0;
        for s in self.slices_mut() {
            s.copy_from_slice(&flat[offset..offset + s.len()]);
            offset += s.len();
        }
        assert_eq!(offset, flat.len(), "flat vector length mismatch");
    }

    pub fn fill(&mut self, value: F) {
        for s in self.slices_mut() {
            s.fill(value);
        }
    }
}

fn forget_bias_ones<F: Scalar>(h: usize) -> Array1<F> {
    let mut b = Array1::zeros(4 * h);
    for i in h..2 * h {
        b[i] = F::one();
    }
    b
}

fn slice_of<F>(a: &Array2<F>) -> &[F] {
    a.as_slice().expect("owned arrays are standard layout")
}

fn slice_of_mut<F>(a: &mut Array2<F>) -> &mut [F] {
    a.as_slice_mut().expect("owned arrays are standard layout")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ModelConfig {
        let mut c = ModelConfig::cw(vec![6, 4], 3);
        c.embed_dim = 2;
        c.lstm_units = 3;
        c.dense_units = 4;
        c
    }

    #[test]
    fn init_is_seed_deterministic() {
        let cfg = tiny_config();
        let a: ParamSet<f32> = ParamSet::init(&cfg, 42);
        let b: ParamSet<f32> = ParamSet::init(&cfg, 42);
        assert_eq!(a, b);
        let c: ParamSet<f32> = ParamSet::init(&cfg, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn forget_gate_bias_is_one() {
        let cfg = tiny_config();
        let p: ParamSet<f64> = ParamSet::init(&cfg, 1);
        let h = cfg.lstm_units;
        for i in 0..4 * h {
            let expected = if (h..2 * h).contains(&i) { 1.0 } else { 0.0 };
            assert_eq!(p.fwd.b[i], expected);
            assert_eq!(p.bwd.b[i], expected);
        }
    }

    #[test]
    fn flat_round_trip() {
        let cfg = tiny_config();
        let p: ParamSet<f64> = ParamSet::init(&cfg, 7);
        let flat = p.to_flat();
        assert_eq!(flat.len(), p.param_count());
        let mut q: ParamSet<f64> = ParamSet::zeros(&cfg);
        q.assign_flat(&flat);
        assert_eq!(p, q);
    }

    #[test]
    fn weights_within_init_range() {
        let cfg = tiny_config();
        let p: ParamSet<f64> = ParamSet::init(&cfg, 9);
        for v in p.to_flat() {
            assert!(v.abs() <= 1.0);
        }
        assert!(p
            .embeddings
            .iter()
            .all(|e| e.iter().all(|v| v.abs() < 0.05 + 1e-12)));
    }
}
