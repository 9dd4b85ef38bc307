//! Buckwalter transliteration and lossless mark decomposition.
//!
//! Everything downstream works on Buckwalter text: `bw_to_arabic` /
//! `arabic_to_bw` convert at the boundaries, and `decompose` / `recompose`
//! move between flat strings and the aligned (letters, marks, slot)
//! representation.

mod marks;
mod table;
mod word;

pub use marks::{CeLabel, MarkCombo, PriorBits, Primitive, Vowel};
pub use table::{
    dump_tsv, entry_for_arabic, entry_for_buckwalter, is_letter, is_mark, SymbolClass, TableEntry,
    TABLE, TABLE_VERSION,
};
pub use word::{decompose, recompose, DiacritizedWord};

use thiserror::Error;

/// Codec failures; positions are 0-based character offsets in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("unknown Buckwalter symbol at position {pos}")]
    UnknownSymbol { pos: usize },
    #[error("unknown Arabic codepoint at position {pos}")]
    UnknownCodepoint { pos: usize },
    #[error("diacritic mark with no preceding letter at position {pos}")]
    OrphanMark { pos: usize },
    #[error("two vowel marks on one letter at position {pos}")]
    DoubleVowel { pos: usize },
    #[error("duplicate shadda on one letter at position {pos}")]
    DoubleShadda { pos: usize },
    #[error("shadda combined with sukun at position {pos}")]
    ShaddaSukun { pos: usize },
}

/// Converts a Buckwalter string to Arabic script, symbol by symbol.
pub fn bw_to_arabic(s: &str) -> Result<String, CodecError> {
    let mut out = String::with_capacity(s.len() * 2);
    for (pos, c) in s.chars().enumerate() {
        let entry = entry_for_buckwalter(c).ok_or(CodecError::UnknownSymbol { pos })?;
        out.push(entry.arabic);
    }
    Ok(out)
}

/// Converts Arabic script to its Buckwalter transliteration.
pub fn arabic_to_bw(s: &str) -> Result<String, CodecError> {
    let mut out = String::with_capacity(s.chars().count());
    for (pos, c) in s.chars().enumerate() {
        let entry = entry_for_arabic(c).ok_or(CodecError::UnknownCodepoint { pos })?;
        out.push(entry.buckwalter);
    }
    Ok(out)
}

/// True when the string uses only Buckwalter symbols (letters or marks).
pub fn is_buckwalter_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| entry_for_buckwalter(c).is_some())
}

/// True when the string contains at least one codepoint from the Arabic
/// side of the table.
pub fn contains_arabic_script(s: &str) -> bool {
    s.chars().any(|c| entry_for_arabic(c).is_some())
}
