//! Synthetic corpus generator for the feature-utility check.
//!
//! The language is constructed so that:
//! - some bare forms are homographs whose core diacritics depend on the
//!   (gold) segmentation: `w+stem` reads differently from a single
//!   four-letter stem with the same letters, and
//! - some bare forms take their case ending from the (gold) POS tag:
//!   the same surface is damma-final as a NOUN and fatha-final as a VERB.
//!
//! A character-only model cannot resolve the first family, and a
//! word-surface-only model cannot resolve the second; the full feature
//! sets can.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One token: bare form, diacritized form, gold segmentation, gold POS.
pub struct SynthToken {
    pub bare: String,
    pub diacritized: String,
    pub segmentation: String,
    pub pos: String,
}

pub struct SynthSentence {
    pub tokens: Vec<SynthToken>,
}

/// Applies a mark pattern (one entry per letter, "" for none) to bare
/// letters.
fn apply_marks(bare: &str, marks: &[&str]) -> String {
    let mut out = String::new();
    for (c, m) in bare.chars().zip(marks.iter()) {
        out.push(c);
        out.push_str(m);
    }
    out
}

const STEMS3: [&str; 8] = ["ktb", "qSr", "jml", "rsm", "Hml", "xbz", "drs", "nql"];
const FILLER: [&str; 10] = [
    "qamar", "baHr", "jabal", "nahr", "ward", "Tayr", "samak", "qalam", "kursy", "bAb",
];

fn seg_homograph(stem: &str, split: bool) -> SynthToken {
    let bare = format!("w{stem}");
    if split {
        // w + stem: conjunction reading, pattern wa-CaCoC-u
        let marks = ["a", "a", "o", "u"];
        SynthToken {
            diacritized: apply_marks(&bare, &marks),
            segmentation: format!("w+{stem}"),
            pos: "CONJ+VERB".to_string(),
            bare,
        }
    } else {
        // single 4-letter stem, pattern CuCCiC-a
        let marks = ["u", "", "i", "a"];
        SynthToken {
            diacritized: apply_marks(&bare, &marks),
            segmentation: bare.clone(),
            pos: "NOUN".to_string(),
            bare,
        }
    }
}

fn pos_homograph(stem: &str, noun: bool) -> SynthToken {
    // fixed core marks; the case ending follows the POS tag
    let core = ["a", "o", ""];
    let ce = if noun { "u" } else { "a" };
    let marks = [core[0], core[1], ce];
    SynthToken {
        bare: stem.to_string(),
        diacritized: apply_marks(stem, &marks),
        segmentation: stem.to_string(),
        pos: if noun { "NOUN" } else { "VERB" }.to_string(),
    }
}

fn filler_token(index: usize, word: &str) -> SynthToken {
    // deterministic per type: marks cycle over fixed patterns
    let pattern: Vec<&str> = match index % 3 {
        0 => vec!["a", "", "i", "", "u"],
        1 => vec!["i", "a", "", "o", "u"],
        _ => vec!["u", "", "a", "i", "o"],
    };
    let n = word.chars().count();
    let marks: Vec<&str> = (0..n).map(|i| pattern[i % pattern.len()]).collect();
    SynthToken {
        bare: word.to_string(),
        diacritized: apply_marks(word, &marks),
        segmentation: word.to_string(),
        pos: "NOUN".to_string(),
    }
}

/// Generates `count` sentences of 4–6 tokens. Every sentence carries one
/// segmentation homograph and one POS homograph among fillers.
pub fn generate(count: usize, seed: u64) -> Vec<SynthSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sentences = Vec::with_capacity(count);
    for _ in 0..count {
        let mut tokens = Vec::new();
        let seg_stem = STEMS3.choose(&mut rng).unwrap();
        let pos_stem = STEMS3.choose(&mut rng).unwrap();
        tokens.push(seg_homograph(seg_stem, rng.gen()));
        tokens.push(pos_homograph(pos_stem, rng.gen()));
        let fillers = rng.gen_range(2..5);
        for _ in 0..fillers {
            let idx = rng.gen_range(0..FILLER.len());
            tokens.push(filler_token(idx, FILLER[idx]));
        }
        tokens.shuffle(&mut rng);
        sentences.push(SynthSentence { tokens });
    }
    sentences
}

/// Renders sentences as the toolkit's TSV corpus format.
pub fn to_tsv(sentences: &[SynthSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        for t in &s.tokens {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t\n",
                t.bare, t.diacritized, t.segmentation, t.pos
            ));
        }
        out.push('\n');
    }
    out
}
