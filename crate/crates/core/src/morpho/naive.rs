//! Affix-stripping fallback annotator.
//!
//! Stands in for an external segmenter/tagger: one longest-match pass over
//! a fixed prefix inventory (conjunctions, prepositions, determiner,
//! future marker, and their legal concatenations), then one pass over a
//! suffix inventory (gender/number markers and attached pronouns). Both
//! passes require a residual stem of at least two letters; a lone
//! single-letter prefix is stripped only for the conjunctions w/f.

use crate::codec;
use crate::morpho::{
    Annotator, AnnotationInput, Capabilities, Gender, MorphoAnnotation, MorphoError, Number,
    Segmentation, TemplateInventory, UNKNOWN_TEMPLATE,
};

/// A strippable affix: its surface form plus the unit split it stands for.
#[derive(Debug, Clone)]
struct Affix {
    surface: &'static str,
    units: &'static [&'static str],
}

const CONJ: [&str; 2] = ["w", "f"];

fn prefix_inventory() -> Vec<Affix> {
    // Generated statically below to keep 'static unit slices simple.
    macro_rules! affix {
        ($surface:expr, [$($unit:expr),+]) => {
            Affix { surface: $surface, units: &[$($unit),+] }
        };
    }
    let mut inv = vec![
        affix!("w", ["w"]),
        affix!("f", ["f"]),
        affix!("b", ["b"]),
        affix!("k", ["k"]),
        affix!("l", ["l"]),
        affix!("s", ["s"]),
        affix!("Al", ["Al"]),
        affix!("wb", ["w", "b"]),
        affix!("wk", ["w", "k"]),
        affix!("wl", ["w", "l"]),
        affix!("ws", ["w", "s"]),
        affix!("fb", ["f", "b"]),
        affix!("fk", ["f", "k"]),
        affix!("fl", ["f", "l"]),
        affix!("fs", ["f", "s"]),
        affix!("ll", ["l", "l"]),
        affix!("wAl", ["w", "Al"]),
        affix!("fAl", ["f", "Al"]),
        affix!("bAl", ["b", "Al"]),
        affix!("kAl", ["k", "Al"]),
        affix!("wll", ["w", "l", "l"]),
        affix!("fll", ["f", "l", "l"]),
        affix!("wbAl", ["w", "b", "Al"]),
        affix!("wkAl", ["w", "k", "Al"]),
        affix!("fbAl", ["f", "b", "Al"]),
        affix!("fkAl", ["f", "k", "Al"]),
    ];
    inv.sort_by(|a, b| {
        b.surface
            .len()
            .cmp(&a.surface.len())
            .then(a.surface.cmp(b.surface))
    });
    inv
}

const PRONOUNS: [&str; 12] = [
    "y", "ny", "k", "km", "kmA", "kn", "h", "hA", "hmA", "hm", "hn", "nA",
];
/// Gender/number markers. `t` is the pre-pronoun surface of the feminine
/// marker `p`; it strips only in combination with a pronoun.
const NOUN_SUFFIXES_LONE: [&str; 5] = ["p", "At", "An", "wn", "yn"];
const NOUN_SUFFIXES_COMBINING: [&str; 2] = ["t", "At"];

#[derive(Debug, Clone)]
struct Suffix {
    surface: String,
    noun_units: Vec<String>,
    pron_units: Vec<String>,
}

fn suffix_inventory() -> Vec<Suffix> {
    let mut inv = Vec::new();
    for n in NOUN_SUFFIXES_LONE {
        inv.push(Suffix {
            surface: n.to_string(),
            noun_units: vec![n.to_string()],
            pron_units: Vec::new(),
        });
    }
    for p in PRONOUNS {
        inv.push(Suffix {
            surface: p.to_string(),
            noun_units: Vec::new(),
            pron_units: vec![p.to_string()],
        });
    }
    for n in NOUN_SUFFIXES_COMBINING {
        for p in PRONOUNS {
            inv.push(Suffix {
                surface: format!("{n}{p}"),
                noun_units: vec![n.to_string()],
                pron_units: vec![p.to_string()],
            });
        }
    }
    inv.sort_by(|a, b| {
        b.surface
            .len()
            .cmp(&a.surface.len())
            .then(a.surface.cmp(&b.surface))
    });
    inv
}

/// The built-in annotator: affix-stripping segmentation, template lookup,
/// suffix-derived gender/number, no POS tagging.
pub struct NaiveAnnotator {
    prefixes: Vec<Affix>,
    suffixes: Vec<Suffix>,
    templates: TemplateInventory,
}

impl Default for NaiveAnnotator {
    fn default() -> Self {
        Self::new()
    }
}

impl NaiveAnnotator {
    pub fn new() -> NaiveAnnotator {
        NaiveAnnotator {
            prefixes: prefix_inventory(),
            suffixes: suffix_inventory(),
            templates: TemplateInventory::shipped(),
        }
    }

    pub fn with_templates(templates: TemplateInventory) -> NaiveAnnotator {
        NaiveAnnotator {
            prefixes: prefix_inventory(),
            suffixes: suffix_inventory(),
            templates,
        }
    }

    fn segment_arabic(&self, word: &str) -> Segmentation {
        let mut rest = word;
        let mut prefixes: Vec<String> = Vec::new();

        for affix in &self.prefixes {
            if affix.surface.len() == 1 && !CONJ.contains(&affix.surface) {
                continue;
            }
            if rest.starts_with(affix.surface) && rest.len() - affix.surface.len() >= 2 {
                prefixes = affix.units.iter().map(|u| u.to_string()).collect();
                rest = &rest[affix.surface.len()..];
                break;
            }
        }

        let mut noun_suffixes: Vec<String> = Vec::new();
        let mut suffixes: Vec<String> = Vec::new();
        for suffix in &self.suffixes {
            if rest.ends_with(suffix.surface.as_str())
                && rest.len() - suffix.surface.len() >= 2
            {
                noun_suffixes = suffix.noun_units.clone();
                suffixes = suffix.pron_units.clone();
                rest = &rest[..rest.len() - suffix.surface.len()];
                break;
            }
        }

        Segmentation {
            prefixes,
            stem: rest.to_string(),
            noun_suffixes,
            suffixes,
        }
    }

    fn guess_gender_number(noun_suffixes: &[String]) -> (Gender, Number) {
        match noun_suffixes.first().map(|s| s.as_str()) {
            Some("p") | Some("t") => (Gender::Feminine, Number::Singular),
            Some("At") => (Gender::Feminine, Number::Plural),
            Some("wn") | Some("yn") => (Gender::Masculine, Number::Plural),
            Some("An") => (Gender::Unknown, Number::Dual),
            _ => (Gender::Unknown, Number::Unknown),
        }
    }

    fn annotate_word(&self, bare: &str) -> MorphoAnnotation {
        if bare.is_empty() {
            return MorphoAnnotation::unknown_filled(
                Segmentation::stem_only(bare),
                UNKNOWN_TEMPLATE.to_string(),
            );
        }
        let arabic = bare.chars().all(codec::is_letter);
        if !arabic {
            let mut annot = MorphoAnnotation::unknown_filled(
                Segmentation::stem_only(bare),
                UNKNOWN_TEMPLATE.to_string(),
            );
            if bare.chars().all(|c| c.is_ascii_punctuation() || is_arabic_punct(c)) {
                annot.word_pos = "PUNC".to_string();
                annot.stem_pos = "PUNC".to_string();
            }
            return annot;
        }

        let segmentation = self.segment_arabic(bare);
        let template = self.templates.stem_template(&segmentation.stem_surface());
        let (gender, number) = Self::guess_gender_number(&segmentation.noun_suffixes);
        let mut annot = MorphoAnnotation::unknown_filled(segmentation, template);
        annot.gender = gender;
        annot.number = number;
        annot
    }
}

fn is_arabic_punct(c: char) -> bool {
    matches!(c, '\u{060C}' | '\u{061B}' | '\u{061F}' | '\u{00AB}' | '\u{00BB}')
}

impl Annotator for NaiveAnnotator {
    fn id(&self) -> &'static str {
        "naive"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            segmentation: true,
            pos: false,
            gender_number: true,
            stem_template: true,
        }
    }

    fn annotate(
        &self,
        words: &[AnnotationInput<'_>],
    ) -> Result<Vec<MorphoAnnotation>, MorphoError> {
        Ok(words.iter().map(|w| self.annotate_word(w.bare)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(word: &str) -> Segmentation {
        NaiveAnnotator::new().segment(word)
    }

    #[test]
    fn conj_det_stem() {
        assert_eq!(seg("wAlktAb").render(), "w+Al+ktAb");
    }

    #[test]
    fn full_affix_chain() {
        assert_eq!(seg("wbmktbtnA").render(), "w+b+mktb+t+nA");
    }

    #[test]
    fn bare_stem_stays_whole() {
        assert_eq!(seg("ktAb").render(), "ktAb");
    }

    #[test]
    fn lone_preposition_is_not_stripped() {
        // Only w/f strip as lone single-letter prefixes.
        assert_eq!(seg("bqlm").render(), "bqlm");
        assert_eq!(seg("wqlm").render(), "w+qlm");
    }

    #[test]
    fn longest_match_is_greedy() {
        // "wk" outranks lone "w"; naive segmentation accepts this.
        assert_eq!(seg("wktb").render(), "w+k+tb");
    }

    #[test]
    fn determiner_with_preposition() {
        assert_eq!(seg("bAlqlm").render(), "b+Al+qlm");
    }

    #[test]
    fn feminine_marker_splits() {
        let s = seg("mktbp");
        assert_eq!(s.render(), "mktb+p");
        assert_eq!(s.noun_suffixes, vec!["p".to_string()]);
        assert!(s.suffixes.is_empty());
    }

    #[test]
    fn short_words_stay_whole() {
        assert_eq!(seg("w").render(), "w");
        assert_eq!(seg("lA").render(), "lA");
        assert_eq!(seg("fy").render(), "fy");
    }

    #[test]
    fn concatenation_invariant() {
        for w in ["wAlktAb", "wbmktbtnA", "ktAb", "mktbthm", "wllktAb", "mElmwn"] {
            assert_eq!(seg(w).concat(), w);
        }
    }

    #[test]
    fn punctuation_is_tagged() {
        let a = NaiveAnnotator::new();
        let out = a
            .annotate(&[AnnotationInput::bare_only(".")])
            .unwrap();
        assert_eq!(out[0].word_pos, "PUNC");
        assert_eq!(out[0].segmentation.stem, ".");
        assert_eq!(out[0].stem_template, "UNK");
    }

    #[test]
    fn gender_number_from_suffix() {
        let a = NaiveAnnotator::new();
        let out = a
            .annotate(&[AnnotationInput::bare_only("mktbp")])
            .unwrap();
        assert_eq!(out[0].gender, Gender::Feminine);
        assert_eq!(out[0].number, Number::Singular);
        assert_eq!(out[0].gender_number(), "f/sg");
    }

    #[test]
    fn annotation_is_deterministic() {
        let a = NaiveAnnotator::new();
        let input = [AnnotationInput::bare_only("wAlmktbAt")];
        assert_eq!(a.annotate(&input).unwrap(), a.annotate(&input).unwrap());
    }
}
