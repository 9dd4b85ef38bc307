//! Pluggable morphological annotation: segmentation, POS, gender/number,
//! and stem templates.
//!
//! Annotators implement the [`Annotator`] trait and are registered by name
//! in [`REGISTRY`]; the CLI selects one at runtime via `--annotator`. Two
//! implementations ship: `naive` (affix stripping against fixed
//! inventories) and `gold` (TSV-supplied columns with a naive fallback).

mod gold;
mod naive;
mod template;

pub use gold::GoldAnnotator;
pub use naive::NaiveAnnotator;
pub use template::TemplateInventory;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphoError {
    #[error("annotation mismatch for token {index}: {detail}")]
    AnnotationMismatch { index: usize, detail: String },
    #[error("unknown annotator {name:?} (available: {available})")]
    UnknownAnnotator { name: String, available: String },
}

/// A word split into affix units around a stem. Concatenating
/// prefixes + stem + noun_suffixes + suffixes recovers the bare word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segmentation {
    pub prefixes: Vec<String>,
    pub stem: String,
    /// Gender/number markers (feminine `p`, plural `At`/`wn`/`yn`, ...),
    /// kept separate because case endings land on them.
    pub noun_suffixes: Vec<String>,
    /// Pronominal and other trailing suffixes.
    pub suffixes: Vec<String>,
}

impl Segmentation {
    pub fn stem_only(word: &str) -> Segmentation {
        Segmentation {
            prefixes: Vec::new(),
            stem: word.to_string(),
            noun_suffixes: Vec::new(),
            suffixes: Vec::new(),
        }
    }

    /// All units in surface order.
    pub fn units(&self) -> Vec<&str> {
        let mut u: Vec<&str> = self.prefixes.iter().map(|s| s.as_str()).collect();
        u.push(&self.stem);
        u.extend(self.noun_suffixes.iter().map(|s| s.as_str()));
        u.extend(self.suffixes.iter().map(|s| s.as_str()));
        u
    }

    pub fn concat(&self) -> String {
        self.units().concat()
    }

    /// Renders as `w+Al+ktAb`.
    pub fn render(&self) -> String {
        self.units().join("+")
    }

    /// The stem with attached gender/number suffixes, '+'-joined
    /// (`mktb+t`). This is the stem as the case-ending features see it.
    pub fn stem_feature(&self) -> String {
        let mut s = self.stem.clone();
        for n in &self.noun_suffixes {
            s.push('+');
            s.push_str(n);
        }
        s
    }

    /// The stem with gender/number suffixes as a plain surface string
    /// (`mktbt`), the input to template matching.
    pub fn stem_surface(&self) -> String {
        let mut s = self.stem.clone();
        for n in &self.noun_suffixes {
            s.push_str(n);
        }
        s
    }

    /// Everything after the prefixes (`mktbtnA`), the "stem side" for
    /// head/tail character n-grams.
    pub fn after_prefixes(&self) -> String {
        let mut s = self.stem.clone();
        for n in &self.noun_suffixes {
            s.push_str(n);
        }
        for x in &self.suffixes {
            s.push_str(x);
        }
        s
    }

    /// Letter index (0-based, within the bare word) of the last letter of
    /// stem + noun_suffixes: the case-ending slot.
    pub fn ce_slot_index(&self) -> usize {
        let prefix_len: usize = self.prefixes.iter().map(|p| p.chars().count()).sum();
        let core_len = self.stem.chars().count()
            + self
                .noun_suffixes
                .iter()
                .map(|n| n.chars().count())
                .sum::<usize>();
        prefix_len + core_len - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gender {
    Masculine,
    Feminine,
    Unknown,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Masculine => "m",
            Gender::Feminine => "f",
            Gender::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Number {
    Singular,
    Dual,
    Plural,
    Unknown,
}

impl Number {
    pub fn as_str(self) -> &'static str {
        match self {
            Number::Singular => "sg",
            Number::Dual => "du",
            Number::Plural => "pl",
            Number::Unknown => "unknown",
        }
    }
}

pub const UNKNOWN_TAG: &str = "unknown";
pub const UNKNOWN_TEMPLATE: &str = "UNK";

/// Per-word morphological annotation. Fields an annotator cannot fill hold
/// the explicit `unknown` / `UNK` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphoAnnotation {
    pub segmentation: Segmentation,
    /// Composite tag over all units, e.g. `CONJ+PREP+NOUN+NSUFF+PRON`.
    pub word_pos: String,
    /// Tag of the stem plus its noun suffixes, e.g. `NOUN+NSUFF`.
    pub stem_pos: String,
    /// One tag per prefix unit.
    pub prefix_pos: Vec<String>,
    /// One tag per (non-noun) suffix unit.
    pub suffix_pos: Vec<String>,
    pub gender: Gender,
    pub number: Number,
    pub stem_template: String,
}

impl MorphoAnnotation {
    pub fn unknown_filled(segmentation: Segmentation, stem_template: String) -> MorphoAnnotation {
        let prefix_pos = vec![UNKNOWN_TAG.to_string(); segmentation.prefixes.len()];
        let suffix_pos = vec![UNKNOWN_TAG.to_string(); segmentation.suffixes.len()];
        MorphoAnnotation {
            segmentation,
            word_pos: UNKNOWN_TAG.to_string(),
            stem_pos: UNKNOWN_TAG.to_string(),
            prefix_pos,
            suffix_pos,
            gender: Gender::Unknown,
            number: Number::Unknown,
            stem_template,
        }
    }

    pub fn gender_number(&self) -> String {
        format!("{}/{}", self.gender.as_str(), self.number.as_str())
    }
}

/// Gold columns a TSV corpus may supply for a token; any subset may be
/// present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldColumns {
    /// `w+Al+ktAb` style segmentation.
    pub segmentation: Option<String>,
    /// `CONJ+PREP+NOUN+NSUFF+PRON` style composite POS.
    pub pos: Option<String>,
    /// `f/sg` or `feminine/singular` style gender/number.
    pub gender_number: Option<String>,
}

impl GoldColumns {
    pub fn is_empty(&self) -> bool {
        self.segmentation.is_none() && self.pos.is_none() && self.gender_number.is_none()
    }
}

/// One word to annotate: its bare form plus any gold columns.
#[derive(Debug, Clone, Copy)]
pub struct AnnotationInput<'a> {
    pub bare: &'a str,
    pub gold: Option<&'a GoldColumns>,
}

impl<'a> AnnotationInput<'a> {
    pub fn bare_only(bare: &'a str) -> AnnotationInput<'a> {
        AnnotationInput { bare, gold: None }
    }
}

/// Which annotation fields an implementation fills; everything else is
/// unknown-filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub segmentation: bool,
    pub pos: bool,
    pub gender_number: bool,
    pub stem_template: bool,
}

/// A morphological annotator. Implementations are immutable after
/// construction; `annotate` is deterministic and safe to call from any
/// thread.
pub trait Annotator: Send + Sync {
    fn id(&self) -> &'static str;

    fn capabilities(&self) -> Capabilities;

    /// Annotates one sentence, one output per input word.
    fn annotate(&self, words: &[AnnotationInput<'_>]) -> Result<Vec<MorphoAnnotation>, MorphoError>;

    /// Segments a single word.
    fn segment(&self, bare: &str) -> Segmentation {
        let input = [AnnotationInput::bare_only(bare)];
        self.annotate(&input)
            .expect("single-word fallback annotation cannot fail")
            .pop()
            .unwrap()
            .segmentation
    }
}

type Constructor = fn() -> Box<dyn Annotator>;

/// The annotator registry: name → constructor. Names are what the CLI
/// accepts for `--annotator`.
pub const REGISTRY: &[(&str, Constructor)] = &[
    ("naive", || Box::new(NaiveAnnotator::new())),
    ("gold", || Box::new(GoldAnnotator::new())),
];

/// Instantiates a registered annotator by name.
pub fn create(name: &str) -> Result<Box<dyn Annotator>, MorphoError> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, ctor)| ctor())
        .ok_or_else(|| MorphoError::UnknownAnnotator {
            name: name.to_string(),
            available: available_names().join(", "),
        })
}

pub fn available_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}
