//! Decomposition of diacritized Buckwalter strings into aligned
//! (letters, marks) form and the lossless inverse.

use serde::{Deserialize, Serialize};

use crate::codec::marks::{MarkCombo, Vowel};
use crate::codec::table;
use crate::codec::CodecError;

/// A word split into bare letters and one mark combo per letter, with an
/// optional designated case-ending slot.
///
/// `decompose` leaves `ce_index` unset; the slot is assigned later from the
/// word's segmentation. Non-Arabic tokens (digits, Latin, punctuation) are
/// represented with all-empty marks and never receive a slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiacritizedWord {
    bare: String,
    marks: Vec<MarkCombo>,
    ce_index: Option<usize>,
}

impl DiacritizedWord {
    pub fn new(bare: String, marks: Vec<MarkCombo>, ce_index: Option<usize>) -> DiacritizedWord {
        assert_eq!(
            bare.chars().count(),
            marks.len(),
            "marks must align with letters"
        );
        if let Some(i) = ce_index {
            assert!(i < marks.len(), "ce_index out of range");
        }
        DiacritizedWord {
            bare,
            marks,
            ce_index,
        }
    }

    /// Wraps a token that carries no mark semantics (non-Arabic content).
    pub fn passthrough(token: &str) -> DiacritizedWord {
        DiacritizedWord {
            bare: token.to_string(),
            marks: vec![MarkCombo::NONE; token.chars().count()],
            ce_index: None,
        }
    }

    pub fn bare(&self) -> &str {
        &self.bare
    }

    pub fn marks(&self) -> &[MarkCombo] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn ce_index(&self) -> Option<usize> {
        self.ce_index
    }

    pub fn set_ce_index(&mut self, index: Option<usize>) {
        if let Some(i) = index {
            assert!(i < self.marks.len(), "ce_index out of range");
        }
        self.ce_index = index;
    }

    pub fn set_mark(&mut self, index: usize, combo: MarkCombo) {
        self.marks[index] = combo;
    }

    pub fn mark_at(&self, index: usize) -> MarkCombo {
        self.marks[index]
    }

    /// The combo on the case-ending slot, if a slot is assigned.
    pub fn ce_combo(&self) -> Option<MarkCombo> {
        self.ce_index.map(|i| self.marks[i])
    }

    /// True when every letter belongs to the Buckwalter letter inventory.
    pub fn is_arabic(&self) -> bool {
        !self.bare.is_empty() && self.bare.chars().all(table::is_letter)
    }

    /// The word with the case-ending vowel stripped (gemination kept).
    /// This is the form counted by the lexicon and compared by
    /// post-correction.
    pub fn core(&self) -> DiacritizedWord {
        let mut w = self.clone();
        if let Some(i) = w.ce_index {
            w.marks[i] = w.marks[i].core_residue();
        }
        w
    }

    /// A copy with all marks removed.
    pub fn stripped(&self) -> DiacritizedWord {
        DiacritizedWord {
            bare: self.bare.clone(),
            marks: vec![MarkCombo::NONE; self.marks.len()],
            ce_index: self.ce_index,
        }
    }
}

/// Splits a diacritized Buckwalter string into letters and aligned marks.
///
/// Marks must follow their host letter; at most one shadda and one vowel
/// are allowed per letter, in either source order (the combo is normalized
/// to shadda-then-vowel). `ce_index` is left unset.
pub fn decompose(input: &str) -> Result<DiacritizedWord, CodecError> {
    let mut bare = String::new();
    let mut marks: Vec<MarkCombo> = Vec::new();

    for (pos, c) in input.chars().enumerate() {
        if table::is_letter(c) {
            bare.push(c);
            marks.push(MarkCombo::NONE);
        } else if c == '~' {
            let last = marks.last_mut().ok_or(CodecError::OrphanMark { pos })?;
            if last.shadda {
                return Err(CodecError::DoubleShadda { pos });
            }
            if last.vowel == Some(Vowel::Sukun) {
                return Err(CodecError::ShaddaSukun { pos });
            }
            last.shadda = true;
        } else if let Some(v) = Vowel::from_buckwalter(c) {
            let last = marks.last_mut().ok_or(CodecError::OrphanMark { pos })?;
            if last.vowel.is_some() {
                return Err(CodecError::DoubleVowel { pos });
            }
            if last.shadda && v == Vowel::Sukun {
                return Err(CodecError::ShaddaSukun { pos });
            }
            last.vowel = Some(v);
        } else {
            return Err(CodecError::UnknownSymbol { pos });
        }
    }

    Ok(DiacritizedWord {
        bare,
        marks,
        ce_index: None,
    })
}

/// Writes the word back as a diacritized Buckwalter string. Exact inverse
/// of `decompose` for canonical (shadda-then-vowel) input; an unmarked
/// case-ending slot emits no character.
pub fn recompose(word: &DiacritizedWord) -> String {
    let mut out = String::with_capacity(word.bare.len() * 2);
    for (c, combo) in word.bare.chars().zip(word.marks.iter()) {
        out.push(c);
        combo.render(&mut out);
    }
    out
}
