//! The training loop: length-bucketed batches, Adamax updates, and early
//! stopping on validation loss with best-snapshot restore.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::nn::{Adamax, DropoutMode, EncodedSeq, NnError, Scalar, SequenceModel, TrainConfig};

/// Validation-loss watcher. `observe` returns true when training should
/// stop: `patience` consecutive epochs without strict improvement.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    patience: usize,
    best_loss: f64,
    best_epoch: usize,
    epochs_since_improvement: usize,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> EarlyStopping {
        EarlyStopping {
            patience,
            best_loss: f64::INFINITY,
            best_epoch: 0,
            epochs_since_improvement: 0,
        }
    }

    /// Feeds one epoch's validation loss; epochs are 1-based.
    pub fn observe(&mut self, epoch: usize, val_loss: f64) -> bool {
        if val_loss < self.best_loss {
            self.best_loss = val_loss;
            self.best_epoch = epoch;
            self.epochs_since_improvement = 0;
        } else {
            self.epochs_since_improvement += 1;
        }
        self.epochs_since_improvement >= self.patience
    }

    pub fn improved(&self) -> bool {
        self.epochs_since_improvement == 0
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn best_loss(&self) -> f64 {
        self.best_loss
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub epochs: Vec<EpochStats>,
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl TrainingHistory {
    /// Plain-text log, one line per epoch.
    pub fn render(&self) -> String {
        let mut out = String::from("epoch\ttrain_loss\tval_loss\n");
        for e in &self.epochs {
            out.push_str(&format!(
                "{}\t{:.6}\t{:.6}\n",
                e.epoch, e.train_loss, e.val_loss
            ));
        }
        out.push_str(&format!(
            "best_epoch\t{}\tstopped_early\t{}\n",
            self.best_epoch, self.stopped_early
        ));
        out
    }
}

/// Length-bucketed batch index lists: sequences sorted by length (stable),
/// then chunked.
fn bucket_batches(set: &[EncodedSeq], batch_size: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by_key(|&i| (set[i].len(), i));
    order
        .chunks(batch_size)
        .map(|chunk| chunk.to_vec())
        .collect()
}

fn gather<'a>(set: &'a [EncodedSeq], idx: &[usize]) -> Vec<&'a EncodedSeq> {
    idx.iter().map(|&i| &set[i]).collect()
}

/// Mean loss over a whole set in eval mode (no dropout), weighted by
/// labeled positions.
pub fn evaluate_loss<F: Scalar>(
    model: &SequenceModel<F>,
    set: &[EncodedSeq],
    batch_size: usize,
) -> Result<(f64, usize), NnError> {
    let mut loss_sum = 0.0f64;
    let mut count = 0usize;
    for batch in bucket_batches(set, batch_size) {
        let refs = gather(set, &batch);
        let (loss, n) = model.loss(&refs, DropoutMode::Eval)?;
        loss_sum += loss * n as f64;
        count += n;
    }
    if count == 0 {
        return Ok((0.0, 0));
    }
    Ok((loss_sum / count as f64, count))
}

/// Trains in place. Stops after `patience` epochs without validation-loss
/// improvement or at `max_epochs`, whichever comes first, and restores the
/// best-validation snapshot. The run is fully deterministic under
/// `cfg.seed`.
pub fn train<F: Scalar>(
    model: &mut SequenceModel<F>,
    train_set: &[EncodedSeq],
    val_set: &[EncodedSeq],
    cfg: &TrainConfig,
) -> Result<TrainingHistory, NnError> {
    cfg.validate()?;
    if train_set.is_empty() || val_set.is_empty() {
        return Err(NnError::EmptyDataset);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut optimizer = Adamax::new(&model.params, cfg.learning_rate);
    let mut stopper = EarlyStopping::new(cfg.patience);
    let batches = bucket_batches(train_set, cfg.batch_size);

    let mut best_params = model.params.clone();
    let mut history = TrainingHistory {
        epochs: Vec::new(),
        best_epoch: 0,
        stopped_early: false,
    };

    for epoch in 1..=cfg.max_epochs {
        let mut order: Vec<usize> = (0..batches.len()).collect();
        order.shuffle(&mut rng);

        let mut loss_sum = 0.0f64;
        let mut count = 0usize;
        for &bi in &order {
            let refs = gather(train_set, &batches[bi]);
            let (loss, n, grads) =
                model.loss_and_gradients(&refs, DropoutMode::Train(&mut rng))?;
            optimizer.step(&mut model.params, &grads);
            loss_sum += loss * n as f64;
            count += n;
        }
        let train_loss = if count == 0 { 0.0 } else { loss_sum / count as f64 };
        let (val_loss, _) = evaluate_loss(model, val_set, cfg.batch_size)?;

        history.epochs.push(EpochStats {
            epoch,
            train_loss,
            val_loss,
        });

        let stop = stopper.observe(epoch, val_loss);
        if stopper.improved() {
            best_params = model.params.clone();
        }
        if stop {
            history.stopped_early = true;
            break;
        }
    }

    history.best_epoch = stopper.best_epoch();
    model.params = best_params;
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_sequence_stops_after_patience() {
        // improving through epoch 3, flat afterwards
        let losses = [1.0, 0.8, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5];
        let mut stopper = EarlyStopping::new(5);
        let mut stopped_at = None;
        for (i, &loss) in losses.iter().enumerate() {
            let epoch = i + 1;
            if stopper.observe(epoch, loss) {
                stopped_at = Some(epoch);
                break;
            }
        }
        assert_eq!(stopped_at, Some(8)); // k = 3, stop at k + 5
        assert_eq!(stopper.best_epoch(), 3);
    }

    #[test]
    fn strict_improvement_never_stops() {
        let mut stopper = EarlyStopping::new(5);
        for epoch in 1..=100 {
            assert!(!stopper.observe(epoch, 1.0 / epoch as f64));
        }
        assert_eq!(stopper.best_epoch(), 100);
    }

    #[test]
    fn ties_do_not_count_as_improvement() {
        let mut stopper = EarlyStopping::new(2);
        assert!(!stopper.observe(1, 0.5));
        assert!(!stopper.observe(2, 0.5));
        assert!(stopper.observe(3, 0.5));
        assert_eq!(stopper.best_epoch(), 1);
    }

    #[test]
    fn buckets_sort_by_length() {
        use ndarray::Array2;
        let mk = |n: usize| {
            EncodedSeq::new(Array2::zeros((n, 1)), vec![None; n]).unwrap()
        };
        let set = vec![mk(5), mk(1), mk(3), mk(2)];
        let batches = bucket_batches(&set, 2);
        assert_eq!(batches, vec![vec![1, 3], vec![2, 0]]);
    }
}
