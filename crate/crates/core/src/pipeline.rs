//! End-to-end wiring: model-file bundles, training orchestration, and the
//! two-model diacritization pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::codec::{CeLabel, DiacritizedWord, MarkCombo, Vowel};
use crate::container::{Container, ContainerError};
use crate::corpus::{
    assign_ce_slots, CorpusError, Lexicon, PriorTable, SentenceRecord,
};
use crate::eval::EvalError;
use crate::features::ce::{
    build_sukun_list, extract_ce_row, CeEncoder, CeFeatureRow, CeSelector, CeVocabs,
    SUKUN_LIST_THRESHOLD,
};
use crate::features::cw::{cw_label_combo, cw_label_count, CwEncoder, CwSelector, CwVocab};
use crate::morpho::{Annotator, MorphoAnnotation, MorphoError};
use crate::nn::{
    read_params, train, write_params, EncodedSeq, ModelConfig, NnError, SequenceModel,
    TrainConfig, TrainingHistory,
};
use crate::postcorrect::post_correct;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

const KIND_CW: &str = "cw-model";
const KIND_CE: &str = "ce-model";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Morpho(#[from] MorphoError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("model mismatch: expected a {expected}, found {found}")]
    ModelMismatch { expected: String, found: String },
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn fingerprint_file(path: &Path) -> std::io::Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

/// Header stored in every model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub kind: String,
    pub toolkit_version: String,
    pub config: ModelConfig,
    pub train_config: TrainConfig,
    pub seed: u64,
    pub corpus_fingerprints: BTreeMap<String, String>,
}

/// A trained core-word model with its vocabulary and selector.
#[derive(Debug, Clone, PartialEq)]
pub struct CwModelFile {
    pub meta: ModelMeta,
    pub vocab: CwVocab,
    pub selector: CwSelector,
    pub model: SequenceModel<f32>,
}

/// A trained case-ending model with its vocabularies and selector.
#[derive(Debug, Clone, PartialEq)]
pub struct CeModelFile {
    pub meta: ModelMeta,
    pub vocabs: CeVocabs,
    pub selector: CeSelector,
    pub model: SequenceModel<f32>,
}

fn check_kind(meta: &ModelMeta, expected: &str) -> Result<(), PipelineError> {
    if meta.kind != expected {
        return Err(PipelineError::ModelMismatch {
            expected: expected.to_string(),
            found: meta.kind.clone(),
        });
    }
    Ok(())
}

impl CwModelFile {
    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        let mut c = Container::new();
        c.add_json("meta", &self.meta);
        c.add_json("selector", &self.selector);
        c.add_json("vocab", &self.vocab);
        write_params(&mut c, &self.model.params);
        c.save(path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CwModelFile, PipelineError> {
        let c = Container::load(path)?;
        let meta: ModelMeta = c.require_json("meta")?;
        check_kind(&meta, KIND_CW)?;
        let selector: CwSelector = c.require_json("selector")?;
        let vocab: CwVocab = c.require_json("vocab")?;
        let params = read_params(&c, &meta.config)?;
        let model = SequenceModel::from_parts(meta.config.clone(), params)?;
        Ok(CwModelFile {
            meta,
            vocab,
            selector,
            model,
        })
    }
}

impl CeModelFile {
    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        let mut c = Container::new();
        c.add_json("meta", &self.meta);
        c.add_json("selector", &self.selector);
        c.add_json("vocab", &self.vocabs);
        write_params(&mut c, &self.model.params);
        c.save(path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CeModelFile, PipelineError> {
        let c = Container::load(path)?;
        let meta: ModelMeta = c.require_json("meta")?;
        check_kind(&meta, KIND_CE)?;
        let selector: CeSelector = c.require_json("selector")?;
        let vocabs: CeVocabs = c.require_json("vocab")?;
        let params = read_params(&c, &meta.config)?;
        let model = SequenceModel::from_parts(meta.config.clone(), params)?;
        Ok(CeModelFile {
            meta,
            vocabs,
            selector,
            model,
        })
    }
}

/// The tables built from training text alongside the models.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedResources {
    pub lexicon: Lexicon,
    pub priors: PriorTable,
    pub sukun_words: BTreeSet<String>,
}

impl TrainedResources {
    pub fn build(train: &[SentenceRecord], annotations: &[Vec<MorphoAnnotation>]) -> TrainedResources {
        TrainedResources {
            lexicon: Lexicon::build(train),
            priors: PriorTable::build_from_annotations(train, annotations),
            sukun_words: build_sukun_list(train, SUKUN_LIST_THRESHOLD),
        }
    }

    pub fn save_sukun(&self, path: &Path) -> Result<(), ContainerError> {
        save_word_set(path, "sukun-words", &self.sukun_words)
    }

    pub fn load_sukun(path: &Path) -> Result<BTreeSet<String>, ContainerError> {
        load_word_set(path)
    }
}

/// Persists a bare-word set (sukun list, gazetteer) in a container.
pub fn save_word_set(
    path: &Path,
    kind: &str,
    words: &BTreeSet<String>,
) -> Result<(), ContainerError> {
    let mut c = Container::new();
    c.add_json("kind", &kind);
    c.add_json("words", words);
    c.save(path)
}

pub fn load_word_set(path: &Path) -> Result<BTreeSet<String>, ContainerError> {
    Container::load(path)?.require_json("words")
}

/// Flattens a prepared corpus into core-word training sequences.
pub fn encode_cw_corpus(
    corpus: &[SentenceRecord],
    annotations: &[Vec<MorphoAnnotation>],
    vocab: &CwVocab,
    priors: &PriorTable,
    selector: CwSelector,
) -> Vec<EncodedSeq> {
    let encoder = CwEncoder::new(vocab, priors, selector);
    corpus
        .iter()
        .zip(annotations.iter())
        .flat_map(|(record, annots)| {
            encoder
                .encode(record, annots)
                .into_iter()
                .map(|e| e.seq)
        })
        .collect()
}

/// Flattens a prepared corpus into case-ending training sequences.
pub fn encode_ce_corpus(
    corpus: &[SentenceRecord],
    annotations: &[Vec<MorphoAnnotation>],
    vocabs: &CeVocabs,
    selector: CeSelector,
    sukun_words: &BTreeSet<String>,
    gazetteer: &BTreeSet<String>,
) -> Vec<EncodedSeq> {
    let encoder = CeEncoder {
        vocabs,
        selector,
        sukun_words,
        gazetteer,
    };
    corpus
        .iter()
        .zip(annotations.iter())
        .map(|(record, annots)| encoder.encode(record, annots))
        .collect()
}

/// Trains a core-word model over a prepared (annotated, slot-assigned)
/// split.
#[allow(clippy::too_many_arguments)]
pub fn train_cw_model(
    train_set: &[SentenceRecord],
    train_annots: &[Vec<MorphoAnnotation>],
    val_set: &[SentenceRecord],
    val_annots: &[Vec<MorphoAnnotation>],
    priors: &PriorTable,
    selector: CwSelector,
    train_config: TrainConfig,
    corpus_fingerprints: BTreeMap<String, String>,
) -> Result<(CwModelFile, TrainingHistory), PipelineError> {
    let vocab = CwVocab::build(train_set);
    let config = ModelConfig::cw(vocab.vocab_sizes(), cw_label_count());
    let train_seqs = encode_cw_corpus(train_set, train_annots, &vocab, priors, selector);
    let val_seqs = encode_cw_corpus(val_set, val_annots, &vocab, priors, selector);

    let seed = train_config.seed;
    let mut model: SequenceModel<f32> = SequenceModel::new(config, seed)?;
    let history = train(&mut model, &train_seqs, &val_seqs, &train_config)?;

    let meta = ModelMeta {
        kind: KIND_CW.to_string(),
        toolkit_version: TOOLKIT_VERSION.to_string(),
        config: model.config.clone(),
        train_config,
        seed,
        corpus_fingerprints,
    };
    Ok((
        CwModelFile {
            meta,
            vocab,
            selector,
            model,
        },
        history,
    ))
}

/// Trains a case-ending model over a prepared split.
#[allow(clippy::too_many_arguments)]
pub fn train_ce_model(
    train_set: &[SentenceRecord],
    train_annots: &[Vec<MorphoAnnotation>],
    val_set: &[SentenceRecord],
    val_annots: &[Vec<MorphoAnnotation>],
    sukun_words: &BTreeSet<String>,
    gazetteer: &BTreeSet<String>,
    selector: CeSelector,
    train_config: TrainConfig,
    corpus_fingerprints: BTreeMap<String, String>,
) -> Result<(CeModelFile, TrainingHistory), PipelineError> {
    let mut rows: Vec<CeFeatureRow> = Vec::new();
    for (record, annots) in train_set.iter().zip(train_annots.iter()) {
        for (token, annot) in record.tokens.iter().zip(annots.iter()) {
            rows.push(extract_ce_row(
                token.word.bare(),
                annot,
                sukun_words,
                gazetteer,
            ));
        }
    }
    let vocabs = CeVocabs::build(rows.iter());
    let config = ModelConfig::ce(vocabs.vocab_sizes());
    let train_seqs =
        encode_ce_corpus(train_set, train_annots, &vocabs, selector, sukun_words, gazetteer);
    let val_seqs =
        encode_ce_corpus(val_set, val_annots, &vocabs, selector, sukun_words, gazetteer);

    let seed = train_config.seed;
    let mut model: SequenceModel<f32> = SequenceModel::new(config, seed)?;
    let history = train(&mut model, &train_seqs, &val_seqs, &train_config)?;

    let meta = ModelMeta {
        kind: KIND_CE.to_string(),
        toolkit_version: TOOLKIT_VERSION.to_string(),
        config: model.config.clone(),
        train_config,
        seed,
        corpus_fingerprints,
    };
    Ok((
        CeModelFile {
            meta,
            vocabs,
            selector,
            model,
        },
        history,
    ))
}

/// The full inference pipeline: encode → core-word predict → optional
/// post-correction → case-ending predict → compose.
pub struct Diacritizer {
    pub cw: CwModelFile,
    pub ce: CeModelFile,
    pub lexicon: Lexicon,
    pub priors: PriorTable,
    pub sukun_words: BTreeSet<String>,
    pub gazetteer: BTreeSet<String>,
    pub annotator: Box<dyn Annotator>,
    pub post_correction: bool,
}

impl Diacritizer {
    /// Diacritizes one sentence; bare letters are never altered.
    pub fn diacritize_record(
        &self,
        record: &SentenceRecord,
    ) -> Result<Vec<DiacritizedWord>, PipelineError> {
        let annots = record.annotate(&*self.annotator)?;

        // work on stripped copies: predictions replace any input marks
        let mut work = record.clone();
        for token in &mut work.tokens {
            token.word = token.word.stripped();
        }
        assign_ce_slots(&mut work, &annots);

        // core-word pass
        let encoder = CwEncoder::new(&self.cw.vocab, &self.priors, self.cw.selector);
        for example in encoder.encode(&work, &annots) {
            let preds = self.cw.model.predict(&example.seq)?;
            for span in &example.tokens {
                for i in 0..span.letter_count {
                    let combo = cw_label_combo(preds[span.row_start + i])
                        .expect("prediction within label inventory");
                    let letter = span.letter_offset + i;
                    work.tokens[span.token_index].word.set_mark(letter, combo);
                }
            }
        }

        // unigram post-correction on core forms
        if self.post_correction {
            for token in &mut work.tokens {
                token.word = post_correct(&token.word, &self.lexicon);
            }
        }

        // case-ending pass
        let ce_encoder = CeEncoder {
            vocabs: &self.ce.vocabs,
            selector: self.ce.selector,
            sukun_words: &self.sukun_words,
            gazetteer: &self.gazetteer,
        };
        let seq = ce_encoder.encode(&work, &annots);
        let ce_preds = self.ce.model.predict(&seq)?;

        for (token, &pred) in work.tokens.iter_mut().zip(ce_preds.iter()) {
            let Some(slot) = token.word.ce_index() else {
                continue;
            };
            let label = CeLabel::from_id(pred).expect("prediction within label inventory");
            if let Some(ce_combo) = label.to_combo() {
                let residue = token.word.mark_at(slot);
                let shadda = residue.shadda || ce_combo.shadda;
                // gemination with sukun cannot be written; gemination wins
                let vowel = ce_combo
                    .vowel
                    .filter(|&v| !(shadda && v == Vowel::Sukun));
                token.word.set_mark(slot, MarkCombo { shadda, vowel });
            }
        }

        Ok(work.tokens.into_iter().map(|t| t.word).collect())
    }

    /// Diacritizes a whole corpus, preserving sentence structure and gold
    /// columns (so outputs stay alignable with references).
    pub fn diacritize_corpus(
        &self,
        corpus: &[SentenceRecord],
    ) -> Result<Vec<SentenceRecord>, PipelineError> {
        let mut out = Vec::with_capacity(corpus.len());
        for record in corpus {
            let words = self.diacritize_record(record)?;
            let mut hyp = record.clone();
            for (token, word) in hyp.tokens.iter_mut().zip(words.into_iter()) {
                token.word = word;
            }
            out.push(hyp);
        }
        Ok(out)
    }
}
