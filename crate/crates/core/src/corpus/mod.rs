//! Corpus ingestion, the train/validation split, and the lexicon and
//! prior tables derived from training text.

mod lexicon;
mod prior;

pub use lexicon::Lexicon;
pub use prior::PriorTable;

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codec::{self, CodecError, DiacritizedWord};
use crate::morpho::{AnnotationInput, Annotator, GoldColumns, MorphoAnnotation, MorphoError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error reading corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid utf-8 on line {line}")]
    Encoding { line: usize },
    #[error("malformed token on line {line}, column {col}: {source}")]
    MalformedToken {
        line: usize,
        col: usize,
        source: CodecError,
    },
    #[error("inconsistent tsv row on line {line}: {detail}")]
    MalformedRow { line: usize, detail: String },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("validation fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error(transparent)]
    Annotation(#[from] MorphoError),
}

/// Corpus file layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One sentence per line, whitespace-tokenized Arabic script or
    /// Buckwalter.
    Plain,
    /// One token per row (token, diacritized form, segmentation, POS,
    /// gender/number), blank line between sentences. Trailing columns may
    /// be omitted or left empty.
    Tsv,
}

/// One corpus token: the decomposed word plus any gold columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub word: DiacritizedWord,
    pub gold: GoldColumns,
}

impl Token {
    pub fn bare_word(word: DiacritizedWord) -> Token {
        Token {
            word,
            gold: GoldColumns::default(),
        }
    }
}

/// A loaded sentence with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceRecord {
    pub tokens: Vec<Token>,
    pub raw: String,
    pub source_id: String,
}

impl SentenceRecord {
    /// Annotates every token with the given annotator, feeding gold
    /// columns through.
    pub fn annotate(&self, annotator: &dyn Annotator) -> Result<Vec<MorphoAnnotation>, MorphoError> {
        let inputs: Vec<AnnotationInput<'_>> = self
            .tokens
            .iter()
            .map(|t| AnnotationInput {
                bare: t.word.bare(),
                gold: Some(&t.gold),
            })
            .collect();
        annotator.annotate(&inputs)
    }
}

/// Parses one whitespace token: Arabic script is transliterated, tatweel
/// is deleted, Buckwalter content is decomposed, and anything outside the
/// table passes through unanalyzed.
pub fn parse_token(token: &str) -> Result<DiacritizedWord, CodecError> {
    let cleaned: String = token
        .chars()
        .filter(|&c| c != '_' && c != '\u{0640}')
        .collect();
    if cleaned.is_empty() {
        return Ok(DiacritizedWord::passthrough(token));
    }
    let bw = if codec::contains_arabic_script(&cleaned) {
        codec::arabic_to_bw(&cleaned)?
    } else {
        cleaned
    };
    if codec::is_buckwalter_token(&bw) {
        codec::decompose(&bw)
    } else {
        Ok(DiacritizedWord::passthrough(&bw))
    }
}

fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut col = 0usize;
    let mut start: Option<(usize, usize)> = None;
    for (i, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some((s, c0)) = start.take() {
                out.push((c0, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, c0)) = start {
        out.push((c0, &line[s..]));
    }
    out
}

fn parse_plain(text: &str, source: &str) -> Result<Vec<SentenceRecord>, CorpusError> {
    let mut records = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let mut tokens = Vec::new();
        for (col, tok) in tokens_with_columns(line) {
            let word = parse_token(tok).map_err(|source| CorpusError::MalformedToken {
                line: line_no,
                col,
                source,
            })?;
            if word.is_empty() {
                continue;
            }
            tokens.push(Token::bare_word(word));
        }
        if tokens.is_empty() {
            continue;
        }
        records.push(SentenceRecord {
            tokens,
            raw: line.to_string(),
            source_id: format!("{source}:{line_no}"),
        });
    }
    Ok(records)
}

fn opt_col(cols: &[&str], i: usize) -> Option<String> {
    cols.get(i)
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(String::from)
}

fn parse_tsv(text: &str, source: &str) -> Result<Vec<SentenceRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut raw_lines: Vec<&str> = Vec::new();
    let mut sentence_no = 0usize;

    let mut flush = |tokens: &mut Vec<Token>, raw_lines: &mut Vec<&str>| {
        if tokens.is_empty() {
            return;
        }
        sentence_no += 1;
        records.push(SentenceRecord {
            tokens: std::mem::take(tokens),
            raw: raw_lines.join("\n"),
            source_id: format!("{source}:s{sentence_no}"),
        });
        raw_lines.clear();
    };

    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        if line.trim().is_empty() {
            flush(&mut tokens, &mut raw_lines);
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let surface = cols[0].trim();
        if surface.is_empty() {
            return Err(CorpusError::MalformedRow {
                line: line_no,
                detail: "empty token column".to_string(),
            });
        }
        let diacritized = opt_col(&cols, 1);
        let word_source = diacritized.as_deref().unwrap_or(surface);
        let word = parse_token(word_source).map_err(|source| CorpusError::MalformedToken {
            line: line_no,
            col: 1,
            source,
        })?;
        if diacritized.is_some() {
            let bare_check =
                parse_token(surface).map_err(|source| CorpusError::MalformedToken {
                    line: line_no,
                    col: 1,
                    source,
                })?;
            if bare_check.bare() != word.bare() {
                return Err(CorpusError::MalformedRow {
                    line: line_no,
                    detail: format!(
                        "diacritized form spells {:?}, token column spells {:?}",
                        word.bare(),
                        bare_check.bare()
                    ),
                });
            }
        }
        tokens.push(Token {
            word,
            gold: GoldColumns {
                segmentation: opt_col(&cols, 2),
                pos: opt_col(&cols, 3),
                gender_number: opt_col(&cols, 4),
            },
        });
        raw_lines.push(line);
    }
    flush(&mut tokens, &mut raw_lines);
    Ok(records)
}

/// Parses corpus text that is already in memory. `source` tags the
/// records' provenance.
pub fn parse_corpus(
    text: &str,
    format: CorpusFormat,
    source: &str,
) -> Result<Vec<SentenceRecord>, CorpusError> {
    match format {
        CorpusFormat::Plain => parse_plain(text, source),
        CorpusFormat::Tsv => parse_tsv(text, source),
    }
}

/// Loads and validates a corpus file.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<SentenceRecord>, CorpusError> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| CorpusError::Encoding {
        line: 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count(),
    })?;
    parse_corpus(&text, format, &path.display().to_string())
}

/// Deterministic sentence-level split: `round(fraction * n)` sentences go
/// to validation, sampled uniformly under the seed; both sides keep corpus
/// order.
pub fn split_validation(
    corpus: Vec<SentenceRecord>,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<SentenceRecord>, Vec<SentenceRecord>), CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(CorpusError::InvalidFraction(fraction));
    }
    let n = corpus.len();
    let k = ((fraction * n as f64).round() as usize).min(n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(&mut rng);
    let mut val_idx: Vec<usize> = indices[..k].to_vec();
    val_idx.sort_unstable();

    let mut is_val = vec![false; n];
    for &i in &val_idx {
        is_val[i] = true;
    }
    let mut train = Vec::with_capacity(n - k);
    let mut val = Vec::with_capacity(k);
    for (i, rec) in corpus.into_iter().enumerate() {
        if is_val[i] {
            val.push(rec);
        } else {
            train.push(rec);
        }
    }
    Ok((train, val))
}

/// Assigns the case-ending slot of every Arabic token from its
/// segmentation: the last letter of stem + noun suffixes. Non-Arabic
/// tokens keep no slot.
pub fn assign_ce_slots(record: &mut SentenceRecord, annotations: &[MorphoAnnotation]) {
    for (token, annot) in record.tokens.iter_mut().zip(annotations.iter()) {
        if token.word.is_arabic() {
            token
                .word
                .set_ce_index(Some(annot.segmentation.ce_slot_index()));
        } else {
            token.word.set_ce_index(None);
        }
    }
}

/// Annotates and slot-assigns every sentence in place, returning the
/// per-sentence annotations for reuse by the feature encoders.
pub fn prepare_corpus(
    corpus: &mut [SentenceRecord],
    annotator: &dyn Annotator,
) -> Result<Vec<Vec<MorphoAnnotation>>, CorpusError> {
    let mut all = Vec::with_capacity(corpus.len());
    for record in corpus.iter_mut() {
        let annots = record.annotate(annotator)?;
        assign_ce_slots(record, &annots);
        all.push(annots);
    }
    Ok(all)
}
