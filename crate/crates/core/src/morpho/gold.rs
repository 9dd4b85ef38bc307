//! Gold-column annotator: trusts segmentation/POS/gender-number columns
//! supplied by a TSV corpus, falling back to the naive annotator for words
//! without columns.

use crate::morpho::{
    Annotator, AnnotationInput, Capabilities, Gender, MorphoAnnotation, MorphoError,
    NaiveAnnotator, Number, Segmentation,
};

const PREFIX_UNITS: [&str; 7] = ["w", "f", "b", "k", "l", "s", "Al"];
const NOUN_SUFFIX_UNITS: [&str; 6] = ["p", "t", "At", "An", "wn", "yn"];

pub struct GoldAnnotator {
    fallback: NaiveAnnotator,
    templates: crate::morpho::TemplateInventory,
}

impl Default for GoldAnnotator {
    fn default() -> Self {
        Self::new()
    }
}

impl GoldAnnotator {
    pub fn new() -> GoldAnnotator {
        GoldAnnotator {
            fallback: NaiveAnnotator::new(),
            templates: crate::morpho::TemplateInventory::shipped(),
        }
    }

    /// Splits a `w+Al+ktAb` style string into a Segmentation: leading
    /// inventory prefixes, then the stem, then gender/number noun suffixes
    /// (until the first pronominal unit), then trailing suffixes.
    fn parse_segmentation(rendered: &str) -> Segmentation {
        let units: Vec<&str> = rendered.split('+').filter(|u| !u.is_empty()).collect();
        if units.is_empty() {
            return Segmentation::stem_only(rendered);
        }

        let mut i = 0;
        let mut prefixes = Vec::new();
        // Leave at least one unit for the stem.
        while i + 1 < units.len() && PREFIX_UNITS.contains(&units[i]) {
            prefixes.push(units[i].to_string());
            i += 1;
        }
        let stem = units[i].to_string();
        i += 1;

        let mut noun_suffixes = Vec::new();
        while i < units.len() && NOUN_SUFFIX_UNITS.contains(&units[i]) {
            noun_suffixes.push(units[i].to_string());
            i += 1;
        }
        let suffixes = units[i..].iter().map(|u| u.to_string()).collect();

        Segmentation {
            prefixes,
            stem,
            noun_suffixes,
            suffixes,
        }
    }

    fn parse_gender_number(s: &str) -> (Gender, Number) {
        let mut parts = s.split('/');
        let gender = match parts.next().map(str::trim) {
            Some("m") | Some("masc") | Some("masculine") => Gender::Masculine,
            Some("f") | Some("fem") | Some("feminine") => Gender::Feminine,
            _ => Gender::Unknown,
        };
        let number = match parts.next().map(str::trim) {
            Some("sg") | Some("singular") => Number::Singular,
            Some("du") | Some("dual") => Number::Dual,
            Some("pl") | Some("plural") => Number::Plural,
            _ => Number::Unknown,
        };
        (gender, number)
    }

    /// Distributes a composite POS over the segmentation units when the
    /// counts line up; otherwise only the verbatim word POS is kept.
    fn align_pos(annot: &mut MorphoAnnotation, pos: &str) {
        annot.word_pos = pos.to_string();
        let tags: Vec<&str> = pos.split('+').collect();
        let seg = &annot.segmentation;
        let unit_count =
            seg.prefixes.len() + 1 + seg.noun_suffixes.len() + seg.suffixes.len();
        if tags.len() != unit_count {
            return;
        }
        let p = seg.prefixes.len();
        let n = seg.noun_suffixes.len();
        annot.prefix_pos = tags[..p].iter().map(|t| t.to_string()).collect();
        annot.stem_pos = tags[p..p + 1 + n].join("+");
        annot.suffix_pos = tags[p + 1 + n..].iter().map(|t| t.to_string()).collect();
    }

    fn annotate_word(
        &self,
        index: usize,
        word: &AnnotationInput<'_>,
    ) -> Result<MorphoAnnotation, MorphoError> {
        let gold = match word.gold {
            Some(g) if !g.is_empty() => g,
            _ => {
                return Ok(self
                    .fallback
                    .annotate(&[AnnotationInput::bare_only(word.bare)])?
                    .pop()
                    .unwrap())
            }
        };

        let mut annot = match &gold.segmentation {
            Some(rendered) => {
                let seg = Self::parse_segmentation(rendered);
                if seg.concat() != word.bare {
                    return Err(MorphoError::AnnotationMismatch {
                        index,
                        detail: format!(
                            "segmentation {:?} does not spell {:?}",
                            rendered, word.bare
                        ),
                    });
                }
                let template = self.templates.stem_template(&seg.stem_surface());
                MorphoAnnotation::unknown_filled(seg, template)
            }
            None => self
                .fallback
                .annotate(&[AnnotationInput::bare_only(word.bare)])?
                .pop()
                .unwrap(),
        };

        if let Some(pos) = &gold.pos {
            Self::align_pos(&mut annot, pos);
        }
        if let Some(gn) = &gold.gender_number {
            let (g, n) = Self::parse_gender_number(gn);
            annot.gender = g;
            annot.number = n;
        }
        Ok(annot)
    }
}

impl Annotator for GoldAnnotator {
    fn id(&self) -> &'static str {
        "gold"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            segmentation: true,
            pos: true,
            gender_number: true,
            stem_template: true,
        }
    }

    fn annotate(
        &self,
        words: &[AnnotationInput<'_>],
    ) -> Result<Vec<MorphoAnnotation>, MorphoError> {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| self.annotate_word(i, w))
            .collect()
    }
}
