//! The sequence model: embedding banks → biLSTM → dense (tanh) → softmax.

use ndarray::{s, Array1, Array2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::nn::lstm;
use crate::nn::{ModelConfig, NnError, ParamSet, Scalar};

/// One encoded sequence: a feature-id row per position plus aligned
/// labels. Positions labeled `None` (word boundaries, padding) are
/// excluded from the loss.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSeq {
    features: Array2<usize>,
    labels: Vec<Option<usize>>,
}

impl EncodedSeq {
    pub fn new(features: Array2<usize>, labels: Vec<Option<usize>>) -> Result<EncodedSeq, NnError> {
        if features.nrows() != labels.len() {
            return Err(NnError::ShapeMismatch(format!(
                "{} feature rows vs {} labels",
                features.nrows(),
                labels.len()
            )));
        }
        Ok(EncodedSeq { features, labels })
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn features(&self) -> &Array2<usize> {
        &self.features
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn labeled_positions(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }
}

/// Whether a pass samples dropout. Evaluation never does; training draws
/// masks from the supplied stream, so a fixed seed reproduces them
/// exactly.
pub enum DropoutMode<'a> {
    Eval,
    Train(&'a mut ChaCha8Rng),
}

/// Embeddings + biLSTM + dense + softmax with a config snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceModel<F: Scalar> {
    pub config: ModelConfig,
    pub params: ParamSet<F>,
}

struct RunOutput<F: Scalar> {
    /// (T·B) × label_count probability rows, time-major.
    probs_all: Array2<F>,
    loss_sum: f64,
    labeled: usize,
    grads: Option<ParamSet<F>>,
}

impl<F: Scalar> SequenceModel<F> {
    /// A randomly initialized model.
    pub fn new(config: ModelConfig, seed: u64) -> Result<SequenceModel<F>, NnError> {
        config.validate()?;
        let params = ParamSet::init(&config, seed);
        Ok(SequenceModel { config, params })
    }

    pub fn from_parts(config: ModelConfig, params: ParamSet<F>) -> Result<SequenceModel<F>, NnError> {
        config.validate()?;
        let expected = ParamSet::<F>::zeros(&config).param_count();
        if params.param_count() != expected {
            return Err(NnError::ShapeMismatch(format!(
                "parameter count {} does not fit config ({} expected)",
                params.param_count(),
                expected
            )));
        }
        Ok(SequenceModel { config, params })
    }

    /// Per-position label distributions for every sequence in the batch.
    /// Eval mode is deterministic; every row sums to 1.
    pub fn forward(
        &self,
        batch: &[&EncodedSeq],
        mode: DropoutMode<'_>,
    ) -> Result<Vec<Array2<F>>, NnError> {
        let out = self.run(batch, mode, false)?;
        Ok(self.split_probs(batch, &out.probs_all))
    }

    /// Mean cross-entropy over labeled positions, with the position count.
    pub fn loss(&self, batch: &[&EncodedSeq], mode: DropoutMode<'_>) -> Result<(f64, usize), NnError> {
        let out = self.run(batch, mode, false)?;
        Ok((mean_loss(&out), out.labeled))
    }

    /// Loss plus gradients for every parameter.
    pub fn loss_and_gradients(
        &self,
        batch: &[&EncodedSeq],
        mode: DropoutMode<'_>,
    ) -> Result<(f64, usize, ParamSet<F>), NnError> {
        let mut out = self.run(batch, mode, true)?;
        let grads = out
            .grads
            .take()
            .unwrap_or_else(|| ParamSet::zeros(&self.config));
        Ok((mean_loss(&out), out.labeled, grads))
    }

    /// Argmax labels per position; ties break to the lowest label id.
    pub fn predict(&self, seq: &EncodedSeq) -> Result<Vec<usize>, NnError> {
        let probs = self.forward(&[seq], DropoutMode::Eval)?;
        Ok(probs[0]
            .outer_iter()
            .map(|row| {
                let mut best = 0usize;
                let mut best_v = row[0];
                for (i, &v) in row.iter().enumerate().skip(1) {
                    if v > best_v {
                        best = i;
                        best_v = v;
                    }
                }
                best
            })
            .collect())
    }

    fn split_probs(&self, batch: &[&EncodedSeq], probs_all: &Array2<F>) -> Vec<Array2<F>> {
        let b = batch.len();
        batch
            .iter()
            .enumerate()
            .map(|(bi, seq)| {
                let mut out = Array2::<F>::zeros((seq.len(), self.config.label_count));
                for t in 0..seq.len() {
                    out.row_mut(t).assign(&probs_all.row(t * b + bi));
                }
                out
            })
            .collect()
    }

    fn validate_batch(&self, batch: &[&EncodedSeq]) -> Result<(), NnError> {
        let m = self.config.feature_count();
        for (bi, seq) in batch.iter().enumerate() {
            if seq.features.ncols() != m {
                return Err(NnError::ShapeMismatch(format!(
                    "sequence {bi} has {} features per row, model expects {m}",
                    seq.features.ncols()
                )));
            }
            for ((t, k), &id) in seq.features.indexed_iter() {
                if id >= self.config.feature_vocab_sizes[k] {
                    return Err(NnError::ShapeMismatch(format!(
                        "sequence {bi} position {t}: feature {k} id {id} out of range {}",
                        self.config.feature_vocab_sizes[k]
                    )));
                }
            }
            for (t, label) in seq.labels.iter().enumerate() {
                if let Some(y) = label {
                    if *y >= self.config.label_count {
                        return Err(NnError::ShapeMismatch(format!(
                            "sequence {bi} position {t}: label {y} out of range {}",
                            self.config.label_count
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn run(
        &self,
        batch: &[&EncodedSeq],
        mode: DropoutMode<'_>,
        want_grads: bool,
    ) -> Result<RunOutput<F>, NnError> {
        self.validate_batch(batch)?;
        let b = batch.len();
        let t_max = batch.iter().map(|s| s.len()).max().unwrap_or(0);
        let cfg = &self.config;
        if b == 0 || t_max == 0 {
            return Ok(RunOutput {
                probs_all: Array2::zeros((0, cfg.label_count)),
                loss_sum: 0.0,
                labeled: 0,
                grads: want_grads.then(|| ParamSet::zeros(cfg)),
            });
        }

        let d = cfg.input_dim();
        let h = cfg.lstm_units;
        let e = cfg.embed_dim;
        let n = t_max * b;
        let lens: Vec<usize> = batch.iter().map(|s| s.len()).collect();

        let mut rng = match mode {
            DropoutMode::Eval => None,
            DropoutMode::Train(r) => Some(r),
        };

        // activity masks per time
        let masks: Vec<Array1<F>> = (0..t_max)
            .map(|t| {
                Array1::from_iter(lens.iter().map(|&l| if t < l { F::one() } else { F::zero() }))
            })
            .collect();

        // time-major embedding gather: row t*b + bi
        let mut x_all = Array2::<F>::zeros((n, d));
        for t in 0..t_max {
            for (bi, seq) in batch.iter().enumerate() {
                if t >= seq.len() {
                    continue;
                }
                for k in 0..cfg.feature_count() {
                    let id = seq.features[(t, k)];
                    x_all
                        .slice_mut(s![t * b + bi, k * e..(k + 1) * e])
                        .assign(&self.params.embeddings[k].row(id));
                }
            }
        }
        let in_mask = match (&mut rng, cfg.input_dropout > 0.0) {
            (Some(r), true) => {
                let m = dropout_mask(n, d, cfg.input_dropout, r);
                x_all *= &m;
                Some(m)
            }
            _ => None,
        };

        // biLSTM over both processing orders
        let times_fwd: Vec<usize> = (0..t_max).collect();
        let times_bwd: Vec<usize> = (0..t_max).rev().collect();
        let fwd_cache = lstm::forward(&self.params.fwd, &x_all, b, &times_fwd, &masks);
        let bwd_cache = lstm::forward(&self.params.bwd, &x_all, b, &times_bwd, &masks);

        // dense + softmax over all positions at once
        let mut hcat = Array2::<F>::zeros((n, 2 * h));
        hcat.slice_mut(s![.., 0..h]).assign(&fwd_cache.h);
        hcat.slice_mut(s![.., h..2 * h]).assign(&bwd_cache.h);

        let use_dense_dropout = rng.is_some() && cfg.dense_dropout > 0.0;
        let dense_mask = if use_dense_dropout {
            let m = dropout_mask(n, 2 * h, cfg.dense_dropout, rng.as_mut().unwrap());
            hcat *= &m;
            Some(m)
        } else {
            None
        };

        let mut zlin = hcat.dot(&self.params.dense_w.t());
        zlin += &self.params.dense_b;
        let z = zlin.mapv(|v| v.tanh());

        let mut logits = z.dot(&self.params.out_w.t());
        logits += &self.params.out_b;
        let (probs_all, logp) = softmax_rows(&logits);

        let mut loss_sum = 0.0f64;
        let mut labeled = 0usize;
        for (bi, seq) in batch.iter().enumerate() {
            for (t, label) in seq.labels.iter().enumerate() {
                if let Some(y) = label {
                    loss_sum -= logp[(t * b + bi, *y)].into_f64();
                    labeled += 1;
                }
            }
        }

        if !want_grads {
            return Ok(RunOutput {
                probs_all,
                loss_sum,
                labeled,
                grads: None,
            });
        }

        // backward
        let mut grads = ParamSet::<F>::zeros(cfg);
        if labeled == 0 {
            return Ok(RunOutput {
                probs_all,
                loss_sum,
                labeled,
                grads: Some(grads),
            });
        }
        let inv_count = F::from_f64(1.0 / labeled as f64);

        let mut dlogits = Array2::<F>::zeros((n, cfg.label_count));
        for (bi, seq) in batch.iter().enumerate() {
            for (t, label) in seq.labels.iter().enumerate() {
                if let Some(y) = label {
                    let row = t * b + bi;
                    let mut out = dlogits.row_mut(row);
                    out.assign(&probs_all.row(row));
                    out[*y] -= F::one();
                    out *= inv_count;
                }
            }
        }

        grads.out_w += &dlogits.t().dot(&z);
        grads.out_b += &dlogits.sum_axis(Axis(0));
        let dz = dlogits.dot(&self.params.out_w);
        let dzlin = ndarray::Zip::from(&dz)
            .and(&z)
            .map_collect(|&dz, &z| dz * (F::one() - z * z));

        grads.dense_w += &dzlin.t().dot(&hcat);
        grads.dense_b += &dzlin.sum_axis(Axis(0));
        let mut dhcat = dzlin.dot(&self.params.dense_w);
        if let Some(m) = &dense_mask {
            dhcat *= m;
        }

        let dh_fwd = dhcat.slice(s![.., 0..h]).to_owned();
        let dh_bwd = dhcat.slice(s![.., h..2 * h]).to_owned();

        let mut dx_all = Array2::<F>::zeros((n, d));
        lstm::backward(
            &self.params.fwd,
            &x_all,
            b,
            &times_fwd,
            &masks,
            &fwd_cache,
            &dh_fwd,
            &mut grads.fwd,
            &mut dx_all,
        );
        lstm::backward(
            &self.params.bwd,
            &x_all,
            b,
            &times_bwd,
            &masks,
            &bwd_cache,
            &dh_bwd,
            &mut grads.bwd,
            &mut dx_all,
        );

        // through input dropout, then scatter into embedding banks
        if let Some(m) = &in_mask {
            dx_all *= m;
        }
        for (bi, seq) in batch.iter().enumerate() {
            for t in 0..seq.len() {
                for k in 0..cfg.feature_count() {
                    let id = seq.features[(t, k)];
                    let mut row = grads.embeddings[k].row_mut(id);
                    row += &dx_all.slice(s![t * b + bi, k * e..(k + 1) * e]);
                }
            }
        }

        Ok(RunOutput {
            probs_all,
            loss_sum,
            labeled,
            grads: Some(grads),
        })
    }
}

fn mean_loss<F: Scalar>(out: &RunOutput<F>) -> f64 {
    if out.labeled == 0 {
        0.0
    } else {
        out.loss_sum / out.labeled as f64
    }
}

/// Inverted-dropout mask: entries are 0 with probability `p`, else
/// 1/(1-p).
fn dropout_mask<F: Scalar>(rows: usize, cols: usize, p: f64, rng: &mut ChaCha8Rng) -> Array2<F> {
    let scale = F::from_f64(1.0 / (1.0 - p));
    Array2::from_shape_fn((rows, cols), |_| {
        if rng.gen::<f64>() >= p {
            scale
        } else {
            F::zero()
        }
    })
}

/// Row-wise stable softmax; returns (probabilities, log-probabilities).
fn softmax_rows<F: Scalar>(logits: &Array2<F>) -> (Array2<F>, Array2<F>) {
    let mut logp = logits.clone();
    for mut row in logp.outer_iter_mut() {
        let max = row.iter().cloned().fold(F::neg_infinity(), F::max);
        let mut sum = F::zero();
        for v in row.iter() {
            sum += (*v - max).exp();
        }
        let lse = max + sum.ln();
        row.mapv_inplace(|v| v - lse);
    }
    let probs = logp.mapv(|v| v.exp());
    (probs, logp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::ModelMode;
    use rand::SeedableRng;

    fn tiny_config(mode: ModelMode) -> ModelConfig {
        ModelConfig {
            mode,
            feature_vocab_sizes: vec![7, 5],
            embed_dim: 3,
            lstm_units: 4,
            dense_units: 5,
            input_dropout: if mode == ModelMode::Ce { 0.75 } else { 0.0 },
            dense_dropout: if mode == ModelMode::Ce { 0.15 } else { 0.0 },
            label_count: if mode == ModelMode::Ce { 15 } else { 6 },
        }
    }

    fn seq(rows: &[[usize; 2]], labels: &[Option<usize>]) -> EncodedSeq {
        let features =
            Array2::from_shape_fn((rows.len(), 2), |(t, k)| rows[t][k]);
        EncodedSeq::new(features, labels.to_vec()).unwrap()
    }

    #[test]
    fn distributions_sum_to_one() {
        let model: SequenceModel<f32> =
            SequenceModel::new(tiny_config(ModelMode::Cw), 3).unwrap();
        let s1 = seq(&[[1, 2], [3, 4], [6, 0]], &[Some(0), None, Some(3)]);
        let s2 = seq(&[[2, 1]], &[Some(1)]);
        let probs = model.forward(&[&s1, &s2], DropoutMode::Eval).unwrap();
        assert_eq!(probs[0].nrows(), 3);
        assert_eq!(probs[1].nrows(), 1);
        for p in &probs {
            for row in p.outer_iter() {
                let sum: f32 = row.sum();
                assert!((sum - 1.0).abs() < 1e-6, "row sums to {sum}");
                assert!(row.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn zero_model_is_uniform() {
        let cfg = tiny_config(ModelMode::Cw);
        let mut model: SequenceModel<f64> = SequenceModel::new(cfg.clone(), 3).unwrap();
        model.params.fill(0.0);
        let s1 = seq(&[[1, 2], [3, 4]], &[Some(0), Some(1)]);
        let probs = model.forward(&[&s1], DropoutMode::Eval).unwrap();
        let uniform = 1.0 / cfg.label_count as f64;
        for row in probs[0].outer_iter() {
            for &v in row.iter() {
                assert!((v - uniform).abs() < 1e-12);
            }
        }
        // uniform over 6 labels: loss = ln 6
        let (loss, n) = model.loss(&[&s1], DropoutMode::Eval).unwrap();
        assert_eq!(n, 2);
        assert!((loss - (6.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn dropout_masks_replay_under_same_seed() {
        let model: SequenceModel<f64> =
            SequenceModel::new(tiny_config(ModelMode::Ce), 5).unwrap();
        let s1 = seq(&[[1, 2], [3, 4], [5, 1]], &[Some(0), Some(4), Some(2)]);
        let mut r1 = ChaCha8Rng::seed_from_u64(11);
        let mut r2 = ChaCha8Rng::seed_from_u64(11);
        let (l1, _, g1) = model
            .loss_and_gradients(&[&s1], DropoutMode::Train(&mut r1))
            .unwrap();
        let (l2, _, g2) = model
            .loss_and_gradients(&[&s1], DropoutMode::Train(&mut r2))
            .unwrap();
        assert_eq!(l1, l2);
        assert_eq!(g1, g2);
        let mut r3 = ChaCha8Rng::seed_from_u64(12);
        let (l3, _, _) = model
            .loss_and_gradients(&[&s1], DropoutMode::Train(&mut r3))
            .unwrap();
        assert_ne!(l1, l3);
    }

    #[test]
    fn out_of_range_ids_rejected() {
        let model: SequenceModel<f32> =
            SequenceModel::new(tiny_config(ModelMode::Cw), 3).unwrap();
        let bad = seq(&[[7, 0]], &[None]);
        assert!(matches!(
            model.forward(&[&bad], DropoutMode::Eval),
            Err(NnError::ShapeMismatch(_))
        ));
        let bad_label = seq(&[[1, 0]], &[Some(6)]);
        assert!(matches!(
            model.loss(&[&bad_label], DropoutMode::Eval),
            Err(NnError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn perfect_prediction_loss_near_zero() {
        // push one logit very high by hand
        let cfg = tiny_config(ModelMode::Cw);
        let mut model: SequenceModel<f64> = SequenceModel::new(cfg, 3).unwrap();
        model.params.fill(0.0);
        model.params.out_b[2] = 50.0;
        let s1 = seq(&[[1, 2]], &[Some(2)]);
        let (loss, _) = model.loss(&[&s1], DropoutMode::Eval).unwrap();
        assert!(loss < 1e-12, "loss {loss}");
    }

    #[test]
    fn bias_shift_does_not_change_predictions() {
        let cfg = tiny_config(ModelMode::Cw);
        let mut model: SequenceModel<f64> = SequenceModel::new(cfg, 17).unwrap();
        let s1 = seq(&[[1, 2], [3, 4], [6, 0], [2, 2]], &[None; 4]);
        let before = model.predict(&s1).unwrap();
        for v in model.params.out_b.iter_mut() {
            *v += 3.5;
        }
        assert_eq!(model.predict(&s1).unwrap(), before);
    }

    #[test]
    fn prediction_is_deterministic() {
        let model: SequenceModel<f32> =
            SequenceModel::new(tiny_config(ModelMode::Cw), 23).unwrap();
        let s1 = seq(&[[1, 2], [3, 4], [5, 1]], &[None; 3]);
        assert_eq!(model.predict(&s1).unwrap(), model.predict(&s1).unwrap());
        assert_eq!(model.predict(&s1).unwrap().len(), 3);
    }

    #[test]
    fn padding_does_not_leak_into_short_sequences() {
        // the same sequence must get identical outputs whether batched
        // with a longer neighbor or alone
        let model: SequenceModel<f64> =
            SequenceModel::new(tiny_config(ModelMode::Cw), 29).unwrap();
        let short = seq(&[[1, 2], [3, 1]], &[Some(0), Some(1)]);
        let long = seq(
            &[[2, 2], [4, 4], [5, 0], [6, 3], [1, 1]],
            &[Some(2), Some(3), Some(4), Some(5), Some(0)],
        );
        let alone = model.forward(&[&short], DropoutMode::Eval).unwrap();
        let batched = model.forward(&[&short, &long], DropoutMode::Eval).unwrap();
        let diff = (&alone[0] - &batched[0]).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(diff < 1e-12, "padding leaked: {diff}");
    }
}
