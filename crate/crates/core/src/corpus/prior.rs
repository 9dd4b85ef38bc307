//! Per-segment prior vectors: which diacritics each letter of a segment
//! was observed to carry in training.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codec::PriorBits;
use crate::container::{Container, ContainerError};
use crate::corpus::{CorpusError, SentenceRecord};
use crate::morpho::{Annotator, MorphoAnnotation, Segmentation};

/// Map from bare segment form to one observed-diacritics bit vector per
/// letter. Lookups of unseen segments yield all-ones vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorTable {
    entries: BTreeMap<String, Vec<PriorBits>>,
}

impl PriorTable {
    /// Accumulates observations over every Arabic token, keyed by the
    /// segments the annotator produces. Marks are taken as written,
    /// including the case-ending slot; shadda combos set both the shadda
    /// bit and the vowel bit.
    pub fn build(
        train: &[SentenceRecord],
        annotator: &dyn Annotator,
    ) -> Result<PriorTable, CorpusError> {
        let mut table = PriorTable::default();
        for record in train {
            let annotations = record.annotate(annotator)?;
            table.observe_record(record, &annotations);
        }
        Ok(table)
    }

    /// Same accumulation, reusing annotations computed elsewhere.
    pub fn build_from_annotations(
        train: &[SentenceRecord],
        annotations: &[Vec<MorphoAnnotation>],
    ) -> PriorTable {
        let mut table = PriorTable::default();
        for (record, annots) in train.iter().zip(annotations.iter()) {
            table.observe_record(record, annots);
        }
        table
    }

    fn observe_record(&mut self, record: &SentenceRecord, annotations: &[MorphoAnnotation]) {
        for (token, annot) in record.tokens.iter().zip(annotations.iter()) {
            if !token.word.is_arabic() {
                continue;
            }
            let mut offset = 0usize;
            for unit in annot.segmentation.units() {
                let unit_len = unit.chars().count();
                let vectors = self
                    .entries
                    .entry(unit.to_string())
                    .or_insert_with(|| vec![PriorBits::EMPTY; unit_len]);
                debug_assert_eq!(vectors.len(), unit_len);
                for i in 0..unit_len {
                    vectors[i].observe(token.word.mark_at(offset + i));
                }
                offset += unit_len;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Per-letter vectors for one segment; unseen segments get all-ones.
    pub fn lookup_segment(&self, segment: &str) -> Vec<PriorBits> {
        match self.entries.get(segment) {
            Some(v) => v.clone(),
            None => vec![PriorBits::UNSEEN; segment.chars().count()],
        }
    }

    /// Per-letter vectors for a whole word, concatenated over its
    /// segmentation.
    pub fn lookup_word(&self, segmentation: &Segmentation) -> Vec<PriorBits> {
        let mut out = Vec::new();
        for unit in segmentation.units() {
            out.extend(self.lookup_segment(unit));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), ContainerError> {
        let mut c = Container::new();
        c.add_json("kind", &"priors");
        c.add_json("priors", self);
        c.save(path)
    }

    pub fn load(path: &Path) -> Result<PriorTable, ContainerError> {
        let c = Container::load(path)?;
        c.require_json("priors")
    }

    /// Debug export: segment, space-joined per-letter bit strings.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("segment\tvectors\n");
        for (seg, vectors) in &self.entries {
            let rendered: Vec<String> = vectors.iter().map(|v| v.render()).collect();
            out.push_str(&format!("{seg}\t{}\n", rendered.join(" ")));
        }
        out
    }
}
