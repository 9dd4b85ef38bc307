//! Relaxed-scoring evaluation: WER/DER for core-word and full
//! diacritization, CEER for case endings, plus confusion reports.

mod confusion;

pub use confusion::ConfusionReport;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{DiacritizedWord, MarkCombo, Vowel};
use crate::corpus::SentenceRecord;
use crate::features::ce::ce_reference_label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("alignment error at sentence {sentence}, token {token}: {detail}")]
    AlignmentError {
        sentence: usize,
        token: usize,
        detail: String,
    },
}

/// What a score run compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreMode {
    /// Core-word marks only (case-ending slot reduced to its residue).
    Cw,
    /// Case-ending labels only.
    Ce,
    /// Whole words: core and case ending together.
    Full,
}

impl ScoreMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreMode::Cw => "cw",
            ScoreMode::Ce => "ce",
            ScoreMode::Full => "full",
        }
    }

    pub fn from_name(s: &str) -> Option<ScoreMode> {
        match s {
            "cw" => Some(ScoreMode::Cw),
            "ce" => Some(ScoreMode::Ce),
            "full" => Some(ScoreMode::Full),
            _ => None,
        }
    }
}

/// Error rates under relaxed scoring.
///
/// Denominators: CW and Full modes count Arabic tokens (WER) and every
/// letter of Arabic tokens (DER); CE mode counts all tokens, with
/// non-Arabic tokens expected to carry the virtual label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub mode: ScoreMode,
    pub wer: Option<f64>,
    pub der: Option<f64>,
    pub ceer: Option<f64>,
    pub token_count: u64,
    pub error_count: u64,
    pub der_letter_count: u64,
    pub der_error_count: u64,
}

impl ScoreReport {
    /// Human-readable rendering; the DER denominator definition is part
    /// of the header so numbers stay comparable across runs.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mode\t{}\n", self.mode.as_str()));
        out.push_str("scoring\trelaxed (empty CE = sukun; default a/A, i/y, u/w dropped)\n");
        out.push_str("der_denominator\tall letters of Arabic tokens\n");
        if let Some(wer) = self.wer {
            out.push_str(&format!("wer\t{:.4}\n", wer));
        }
        if let Some(der) = self.der {
            out.push_str(&format!("der\t{:.4}\n", der));
        }
        if let Some(ceer) = self.ceer {
            out.push_str(&format!("ceer\t{:.4}\n", ceer));
        }
        out.push_str(&format!("tokens\t{}\n", self.token_count));
        out.push_str(&format!("errors\t{}\n", self.error_count));
        if self.mode != ScoreMode::Ce {
            out.push_str(&format!("letters\t{}\n", self.der_letter_count));
            out.push_str(&format!("letter_errors\t{}\n", self.der_error_count));
        }
        out
    }

    pub fn render_tsv(&self) -> String {
        format!(
            "mode\twer\tder\tceer\ttokens\terrors\tletters\tletter_errors\n{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            self.mode.as_str(),
            self.wer.map(|v| format!("{v:.6}")).unwrap_or_default(),
            self.der.map(|v| format!("{v:.6}")).unwrap_or_default(),
            self.ceer.map(|v| format!("{v:.6}")).unwrap_or_default(),
            self.token_count,
            self.error_count,
            self.der_letter_count,
            self.der_error_count,
        )
    }
}

/// Relaxed normalization: drops default diacritics (fatHa before alef,
/// kasra before ya, damma before waw) and reads an unmarked case-ending
/// slot as sukun. Idempotent; bare letters never change.
pub fn relaxed_normalize(word: &DiacritizedWord) -> DiacritizedWord {
    let letters: Vec<char> = word.bare().chars().collect();
    let mut out = word.clone();
    for i in 0..letters.len() {
        let combo = out.mark_at(i);
        if let Some(v) = combo.vowel {
            let next = letters.get(i + 1).copied();
            let default = matches!(
                (v, next),
                (Vowel::Fatha, Some('A')) | (Vowel::Kasra, Some('y')) | (Vowel::Damma, Some('w'))
            );
            if default {
                out.set_mark(
                    i,
                    MarkCombo {
                        shadda: combo.shadda,
                        vowel: None,
                    },
                );
            }
        }
    }
    if let Some(slot) = out.ce_index() {
        if out.mark_at(slot) == MarkCombo::NONE {
            out.set_mark(slot, MarkCombo::vowel(Vowel::Sukun));
        }
    }
    out
}

fn check_alignment(
    reference: &[SentenceRecord],
    hypothesis: &[SentenceRecord],
) -> Result<(), EvalError> {
    if reference.len() != hypothesis.len() {
        return Err(EvalError::AlignmentError {
            sentence: reference.len().min(hypothesis.len()),
            token: 0,
            detail: format!(
                "{} reference sentences vs {} hypothesis sentences",
                reference.len(),
                hypothesis.len()
            ),
        });
    }
    for (si, (r, h)) in reference.iter().zip(hypothesis.iter()).enumerate() {
        if r.tokens.len() != h.tokens.len() {
            return Err(EvalError::AlignmentError {
                sentence: si,
                token: r.tokens.len().min(h.tokens.len()),
                detail: format!(
                    "{} reference tokens vs {} hypothesis tokens",
                    r.tokens.len(),
                    h.tokens.len()
                ),
            });
        }
        for (ti, (rt, ht)) in r.tokens.iter().zip(h.tokens.iter()).enumerate() {
            if rt.word.bare() != ht.word.bare() {
                return Err(EvalError::AlignmentError {
                    sentence: si,
                    token: ti,
                    detail: format!(
                        "bare forms differ: {:?} vs {:?}",
                        rt.word.bare(),
                        ht.word.bare()
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Scores a hypothesis corpus against a token-aligned reference.
pub fn score(
    reference: &[SentenceRecord],
    hypothesis: &[SentenceRecord],
    mode: ScoreMode,
) -> Result<ScoreReport, EvalError> {
    check_alignment(reference, hypothesis)?;

    let mut token_count = 0u64;
    let mut error_count = 0u64;
    let mut der_letters = 0u64;
    let mut der_errors = 0u64;

    for (r, h) in reference.iter().zip(hypothesis.iter()) {
        for (rt, ht) in r.tokens.iter().zip(h.tokens.iter()) {
            let arabic = rt.word.is_arabic();
            match mode {
                ScoreMode::Ce => {
                    token_count += 1;
                    let r_label = ce_reference_label(&relaxed_normalize(&rt.word));
                    let h_label = ce_reference_label(&relaxed_normalize(&ht.word));
                    if r_label != h_label {
                        error_count += 1;
                    }
                }
                ScoreMode::Cw | ScoreMode::Full => {
                    if !arabic {
                        continue;
                    }
                    let rn = relaxed_normalize(&rt.word);
                    let hn = relaxed_normalize(&ht.word);
                    let (rn, hn) = if mode == ScoreMode::Cw {
                        (rn.core(), hn.core())
                    } else {
                        (rn, hn)
                    };
                    token_count += 1;
                    let mut word_wrong = false;
                    for i in 0..rn.len() {
                        der_letters += 1;
                        if rn.mark_at(i) != hn.mark_at(i) {
                            der_errors += 1;
                            word_wrong = true;
                        }
                    }
                    if word_wrong {
                        error_count += 1;
                    }
                }
            }
        }
    }

    let rate = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let report = match mode {
        ScoreMode::Ce => ScoreReport {
            mode,
            wer: None,
            der: None,
            ceer: Some(rate(error_count, token_count)),
            token_count,
            error_count,
            der_letter_count: 0,
            der_error_count: 0,
        },
        ScoreMode::Cw | ScoreMode::Full => ScoreReport {
            mode,
            wer: Some(rate(error_count, token_count)),
            der: Some(rate(der_errors, der_letters)),
            ceer: None,
            token_count,
            error_count,
            der_letter_count: der_letters,
            der_error_count: der_errors,
        },
    };
    Ok(report)
}

/// Builds the 15×15 case-ending confusion matrix.
pub fn confusion(
    reference: &[SentenceRecord],
    hypothesis: &[SentenceRecord],
) -> Result<ConfusionReport, EvalError> {
    check_alignment(reference, hypothesis)?;
    let mut report = ConfusionReport::new();
    for (r, h) in reference.iter().zip(hypothesis.iter()) {
        for (rt, ht) in r.tokens.iter().zip(h.tokens.iter()) {
            let r_label = ce_reference_label(&relaxed_normalize(&rt.word));
            let h_label = ce_reference_label(&relaxed_normalize(&ht.word));
            report.record(r_label, h_label);
        }
    }
    Ok(report)
}
