//! Capability checks for the training loop: the models must be able to
//! memorize small corpora.

use std::collections::{BTreeMap, BTreeSet};

use harakat_core::codec::recompose;
use harakat_core::corpus::{parse_corpus, prepare_corpus, CorpusFormat, SentenceRecord};
use harakat_core::features::ce::CeSelector;
use harakat_core::features::cw::CwSelector;
use harakat_core::morpho::{MorphoAnnotation, NaiveAnnotator};
use harakat_core::nn::TrainConfig;
use harakat_core::pipeline::{
    train_ce_model, train_cw_model, Diacritizer, TrainedResources,
};

/// A 50-sentence unambiguous corpus: every bare word has exactly one
/// diacritization, so both models can memorize it.
fn toy_lines() -> Vec<String> {
    let nouns = ["kitaAbu", "qalamu", "waladu", "rajulu", "bintu"];
    let verbs = ["kataba", "qara>a", "Hamala", "rasama", "Taraqa"];
    let mut lines = Vec::new();
    for (i, v) in verbs.iter().enumerate() {
        for (j, n) in nouns.iter().enumerate() {
            if (i + j) % 2 == 0 {
                lines.push(format!("{v} Al{n} ."));
            } else {
                lines.push(format!("{v} {n}"));
            }
            lines.push(format!("{n} hunA"));
        }
    }
    assert_eq!(lines.len(), 50);
    lines
}

fn prepared(lines: &[String]) -> (Vec<SentenceRecord>, Vec<Vec<MorphoAnnotation>>) {
    let text = lines.join("\n");
    let mut corpus = parse_corpus(&text, CorpusFormat::Plain, "toy").unwrap();
    let annots = prepare_corpus(&mut corpus, &NaiveAnnotator::new()).unwrap();
    (corpus, annots)
}

#[test]
fn cw_model_memorizes_toy_corpus() {
    let lines = toy_lines();
    let (corpus, annots) = prepared(&lines);
    let resources = TrainedResources::build(&corpus, &annots);

    let cfg = TrainConfig {
        batch_size: 4,
        max_epochs: 200,
        patience: 200,
        seed: 7,
        ..TrainConfig::default()
    };
    let (cw, history) = train_cw_model(
        &corpus,
        &annots,
        &corpus,
        &annots,
        &resources.priors,
        CwSelector::All,
        cfg.clone(),
        BTreeMap::new(),
    )
    .unwrap();

    let (ce, _) = train_ce_model(
        &corpus,
        &annots,
        &corpus,
        &annots,
        &resources.sukun_words,
        &BTreeSet::new(),
        CeSelector::AllMisc,
        cfg,
        BTreeMap::new(),
    )
    .unwrap();

    let diacritizer = Diacritizer {
        cw,
        ce,
        lexicon: resources.lexicon.clone(),
        priors: resources.priors.clone(),
        sukun_words: resources.sukun_words.clone(),
        gazetteer: BTreeSet::new(),
        annotator: Box::new(NaiveAnnotator::new()),
        post_correction: false,
    };

    let mut total = 0usize;
    let mut correct = 0usize;
    for record in &corpus {
        let words = diacritizer.diacritize_record(record).unwrap();
        for (token, word) in record.tokens.iter().zip(words.iter()) {
            if !token.word.is_arabic() {
                continue;
            }
            total += 1;
            if recompose(&token.word) == recompose(word) {
                correct += 1;
            }
        }
    }
    let accuracy = correct as f64 / total as f64;
    assert!(
        accuracy >= 0.99,
        "memorization failed: {correct}/{total} ({accuracy:.3}), final val loss {:?}",
        history.epochs.last().map(|e| e.val_loss)
    );
}

#[test]
#[ignore]
fn debug_memorization_breakdown() {
    let lines = toy_lines();
    let (corpus, annots) = prepared(&lines);
    let resources = TrainedResources::build(&corpus, &annots);
    let cfg = TrainConfig {
        batch_size: 4,
        max_epochs: 60,
        patience: 60,
        seed: 7,
        ..TrainConfig::default()
    };
    let (cw, hist_cw) = train_cw_model(
        &corpus, &annots, &corpus, &annots, &resources.priors,
        CwSelector::All, cfg.clone(), BTreeMap::new(),
    ).unwrap();
    let (ce, hist_ce) = train_ce_model(
        &corpus, &annots, &corpus, &annots, &resources.sukun_words,
        &BTreeSet::new(), CeSelector::AllMisc, cfg, BTreeMap::new(),
    ).unwrap();
    eprintln!("cw final val {:?}", hist_cw.epochs.last().map(|e| e.val_loss));
    eprintln!("ce final val {:?}", hist_ce.epochs.last().map(|e| e.val_loss));
    let diacritizer = Diacritizer {
        cw, ce,
        lexicon: resources.lexicon.clone(),
        priors: resources.priors.clone(),
        sukun_words: resources.sukun_words.clone(),
        gazetteer: BTreeSet::new(),
        annotator: Box::new(NaiveAnnotator::new()),
        post_correction: false,
    };
    for record in corpus.iter().take(4) {
        let words = diacritizer.diacritize_record(record).unwrap();
        let refs: Vec<String> = record.tokens.iter().map(|t| recompose(&t.word)).collect();
        let hyps: Vec<String> = words.iter().map(recompose).collect();
        eprintln!("ref {refs:?}\nhyp {hyps:?}");
    }
}
