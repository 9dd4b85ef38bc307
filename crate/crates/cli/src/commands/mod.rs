//! Subcommand implementations.

pub mod diacritize;
pub mod dump;
pub mod evaluate;
pub mod report;
pub mod train;

use std::path::{Path, PathBuf};

use anyhow::Context;

use harakat_core::container::atomic_write;
use harakat_core::corpus::{load_corpus, CorpusFormat, Lexicon, PriorTable, SentenceRecord};
use harakat_core::morpho::{self, Annotator};
use harakat_core::pipeline::{load_word_set, CeModelFile, CwModelFile, Diacritizer};

use crate::usage_error;

pub const CW_MODEL_FILE: &str = "cw.model";
pub const CE_MODEL_FILE: &str = "ce.model";
pub const LEXICON_FILE: &str = "lexicon.bin";
pub const PRIORS_FILE: &str = "priors.bin";
pub const SUKUN_FILE: &str = "sukun.bin";
pub const GAZETTEER_FILE: &str = "ne.bin";

pub fn require_file(path: &Path, what: &str) -> anyhow::Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        usage_error(format!("{what} not found: {}", path.display()))
    }
}

pub fn load_corpus_checked(
    path: &Path,
    format: CorpusFormat,
) -> anyhow::Result<Vec<SentenceRecord>> {
    require_file(path, "corpus file")?;
    load_corpus(path, format).with_context(|| format!("loading corpus {}", path.display()))
}

pub fn create_annotator(name: &str) -> anyhow::Result<Box<dyn Annotator>> {
    match morpho::create(name) {
        Ok(a) => Ok(a),
        Err(err) => usage_error(err.to_string()),
    }
}

pub fn write_text(path: &PathBuf, text: &str) -> anyhow::Result<()> {
    atomic_write(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))
}

/// Loads the full pipeline from a model directory produced by `train`.
pub fn load_diacritizer(
    model_dir: &Path,
    annotator: &str,
    post_correction: bool,
) -> anyhow::Result<Diacritizer> {
    for name in [
        CW_MODEL_FILE,
        CE_MODEL_FILE,
        LEXICON_FILE,
        PRIORS_FILE,
        SUKUN_FILE,
        GAZETTEER_FILE,
    ] {
        require_file(&model_dir.join(name), "model resource")?;
    }
    let cw = CwModelFile::load(&model_dir.join(CW_MODEL_FILE))?;
    let ce = CeModelFile::load(&model_dir.join(CE_MODEL_FILE))?;
    let lexicon = Lexicon::load(&model_dir.join(LEXICON_FILE))?;
    let priors = PriorTable::load(&model_dir.join(PRIORS_FILE))?;
    let sukun_words = load_word_set(&model_dir.join(SUKUN_FILE))?;
    let gazetteer = load_word_set(&model_dir.join(GAZETTEER_FILE))?;
    Ok(Diacritizer {
        cw,
        ce,
        lexicon,
        priors,
        sukun_words,
        gazetteer,
        annotator: create_annotator(annotator)?,
        post_correction,
    })
}
