//! Rough timing probe (ignored by default).
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use harakat_core::nn::{DropoutMode, EncodedSeq, ModelConfig, SequenceModel};
use std::time::Instant;

#[test]
#[ignore]
fn time_updates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (b, t) in [(4usize, 17usize), (16, 17), (64, 17), (16, 60)] {
        let config = ModelConfig::cw(vec![40, 8, 259, 5], 15);
        let model: SequenceModel<f32> = SequenceModel::new(config.clone(), 3).unwrap();
        let seqs: Vec<EncodedSeq> = (0..b)
            .map(|_| {
                let features = Array2::from_shape_fn((t, 4), |(_, k)| {
                    rng.gen_range(0..config.feature_vocab_sizes[k])
                });
                let labels = (0..t).map(|_| Some(rng.gen_range(0..15))).collect();
                EncodedSeq::new(features, labels).unwrap()
            })
            .collect();
        let batch: Vec<&EncodedSeq> = seqs.iter().collect();
        let start = Instant::now();
        let iters = 20;
        for _ in 0..iters {
            let _ = model.loss_and_gradients(&batch, DropoutMode::Eval).unwrap();
        }
        let per = start.elapsed().as_secs_f64() / iters as f64;
        let positions = b * t;
        eprintln!("B={b} T={t}: {:.1} ms/update, {:.1} us/position", per * 1e3, per * 1e6 / positions as f64);
    }
}
