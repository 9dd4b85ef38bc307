//! Per-character features for the core-word model: CHAR, SEG, PRIOR, and
//! CASE, with word-boundary rows and sentence-length capping.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::codec::{DiacritizedWord, MarkCombo, PriorBits, Vowel};
use crate::corpus::{PriorTable, SentenceRecord};
use crate::features::{Vocab, MASK_ID};
use crate::morpho::{MorphoAnnotation, Segmentation};
use crate::nn::EncodedSeq;

/// Feature order per row: char, seg, prior, case.
pub const CW_FEATURE_COUNT: usize = 4;

/// Maximum rows per encoded example (characters plus boundary markers).
pub const MAX_SENTENCE_ROWS: usize = 1250;

/// The word-boundary marker's reserved entry in the character vocabulary.
pub const WB_SYMBOL: &str = "<wb>";

/// Position of a character within its segment, plus the boundary marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegLabel {
    Begin,
    Middle,
    End,
    Single,
    Boundary,
}

impl SegLabel {
    /// Bank size: reserved ids + five labels.
    pub const VOCAB_SIZE: usize = 8;

    pub fn id(self) -> usize {
        3 + match self {
            SegLabel::Begin => 0,
            SegLabel::Middle => 1,
            SegLabel::End => 2,
            SegLabel::Single => 3,
            SegLabel::Boundary => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SegLabel::Begin => "B",
            SegLabel::Middle => "M",
            SegLabel::End => "E",
            SegLabel::Single => "S",
            SegLabel::Boundary => "WB",
        }
    }

    pub fn from_id(id: usize) -> Option<SegLabel> {
        Some(match id {
            3 => SegLabel::Begin,
            4 => SegLabel::Middle,
            5 => SegLabel::End,
            6 => SegLabel::Single,
            7 => SegLabel::Boundary,
            _ => return None,
        })
    }
}

/// Bank size for the prior feature: reserved ids + 256 bit patterns.
pub const PRIOR_VOCAB_SIZE: usize = 3 + 256;
/// Bank size for the binary case flag.
pub const CASE_VOCAB_SIZE: usize = 3 + 2;

pub fn prior_feature_id(bits: PriorBits) -> usize {
    3 + bits.0 as usize
}

pub fn case_feature_id(flag: bool) -> usize {
    3 + flag as usize
}

/// Which feature banks are live; CHAR and CASE are always on, masked
/// banks feed the `<mask>` embedding so dimensionality never changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CwSelector {
    Char,
    CharSeg,
    CharPrior,
    All,
}

impl CwSelector {
    pub const ALL_SETUPS: [CwSelector; 4] = [
        CwSelector::Char,
        CwSelector::CharSeg,
        CwSelector::CharPrior,
        CwSelector::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CwSelector::Char => "char",
            CwSelector::CharSeg => "char-seg",
            CwSelector::CharPrior => "char-prior",
            CwSelector::All => "all",
        }
    }

    pub fn from_name(name: &str) -> Option<CwSelector> {
        CwSelector::ALL_SETUPS.into_iter().find(|s| s.name() == name)
    }

    pub fn seg_live(self) -> bool {
        matches!(self, CwSelector::CharSeg | CwSelector::All)
    }

    pub fn prior_live(self) -> bool {
        matches!(self, CwSelector::CharPrior | CwSelector::All)
    }
}

/// The per-letter label inventory: no mark, the seven vowels, bare
/// shadda, and the six shadda+vowel combos (15 states).
pub fn cw_label_count() -> usize {
    15
}

pub fn cw_label_id(combo: MarkCombo) -> usize {
    let vowel_idx = |v: Vowel| Vowel::ALL.iter().position(|&x| x == v).unwrap();
    match (combo.shadda, combo.vowel) {
        (false, None) => 0,
        (false, Some(v)) => 1 + vowel_idx(v),
        (true, None) => 8,
        (true, Some(v)) => {
            let i = vowel_idx(v);
            debug_assert_ne!(v, Vowel::Sukun);
            9 + if i > 3 { i - 1 } else { i }
        }
    }
}

pub fn cw_label_combo(id: usize) -> Option<MarkCombo> {
    MarkCombo::inventory().get(id).copied()
}

/// Character vocabulary for the core-word model, with the boundary marker
/// as a reserved symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwVocab {
    pub chars: Vocab,
}

impl CwVocab {
    /// Closed over the training set: every character of every token, in
    /// corpus order, after the boundary marker.
    pub fn build(train: &[SentenceRecord]) -> CwVocab {
        let mut chars = Vocab::new();
        chars.intern(WB_SYMBOL);
        for record in train {
            for token in &record.tokens {
                for c in token.word.bare().chars() {
                    chars.intern(&c.to_string());
                }
            }
        }
        CwVocab { chars }
    }

    pub fn wb_id(&self) -> usize {
        self.chars.id(WB_SYMBOL)
    }

    pub fn char_id(&self, c: char) -> usize {
        self.chars.id(&c.to_string())
    }

    /// Bank sizes in feature order (char, seg, prior, case).
    pub fn vocab_sizes(&self) -> Vec<usize> {
        vec![
            self.chars.len(),
            SegLabel::VOCAB_SIZE,
            PRIOR_VOCAB_SIZE,
            CASE_VOCAB_SIZE,
        ]
    }
}

/// One segment-position label per letter of the bare word.
pub fn seg_labels(seg: &Segmentation) -> Vec<SegLabel> {
    let mut out = Vec::new();
    for unit in seg.units() {
        let n = unit.chars().count();
        match n {
            0 => {}
            1 => out.push(SegLabel::Single),
            _ => {
                out.push(SegLabel::Begin);
                for _ in 1..n - 1 {
                    out.push(SegLabel::Middle);
                }
                out.push(SegLabel::End);
            }
        }
    }
    out
}

/// Renders per-segment labels joined with '+': `S+BE+BMME`.
pub fn render_seg_labels(seg: &Segmentation) -> String {
    let labels = seg_labels(seg);
    let mut parts = Vec::new();
    let mut offset = 0;
    for unit in seg.units() {
        let n = unit.chars().count();
        let part: String = labels[offset..offset + n]
            .iter()
            .map(|l| l.as_str())
            .collect();
        parts.push(part);
        offset += n;
    }
    parts.join("+")
}

/// The case-ending flag per letter: exactly one true for Arabic words (on
/// the last letter of stem + noun suffixes), none for non-Arabic tokens.
pub fn case_flags(word: &DiacritizedWord, seg: &Segmentation) -> Vec<bool> {
    let n = word.len();
    let mut flags = vec![false; n];
    if word.is_arabic() && n > 0 {
        let slot = seg.ce_slot_index().min(n - 1);
        flags[slot] = true;
    }
    flags
}

/// Row span of one token inside an encoded example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwTokenSpan {
    /// Index of the token within its sentence.
    pub token_index: usize,
    pub row_start: usize,
    pub letter_count: usize,
    /// First covered letter of the token; nonzero only for the
    /// continuation chunks of an oversized token.
    pub letter_offset: usize,
    /// Case-ending slot, as an offset from `row_start`.
    pub ce_offset: Option<usize>,
    pub is_arabic: bool,
}

/// One encoded chunk of a sentence: feature rows (with boundary rows
/// between words), aligned labels, and the token spans needed to decode
/// predictions back into words.
#[derive(Debug, Clone, PartialEq)]
pub struct CwExample {
    pub seq: EncodedSeq,
    pub tokens: Vec<CwTokenSpan>,
}

struct TokenRows {
    rows: Vec<[usize; CW_FEATURE_COUNT]>,
    labels: Vec<Option<usize>>,
    ce_offset: Option<usize>,
    is_arabic: bool,
}

/// Encodes sentences for the core-word model.
pub struct CwEncoder<'a> {
    pub vocab: &'a CwVocab,
    pub priors: &'a PriorTable,
    pub selector: CwSelector,
    pub max_rows: usize,
    /// When true (training), the reference label at the case-ending slot
    /// is reduced to its core residue: the slot's vowel belongs to the
    /// case-ending model.
    pub mask_ce_labels: bool,
}

impl<'a> CwEncoder<'a> {
    pub fn new(vocab: &'a CwVocab, priors: &'a PriorTable, selector: CwSelector) -> CwEncoder<'a> {
        CwEncoder {
            vocab,
            priors,
            selector,
            max_rows: MAX_SENTENCE_ROWS,
            mask_ce_labels: true,
        }
    }

    fn encode_token(&self, word: &DiacritizedWord, annot: &MorphoAnnotation) -> TokenRows {
        let seg = &annot.segmentation;
        let seg_ids: Vec<usize> = if word.is_arabic() {
            seg_labels(seg).iter().map(|l| l.id()).collect()
        } else {
            seg_labels(&Segmentation::stem_only(word.bare()))
                .iter()
                .map(|l| l.id())
                .collect()
        };
        let prior_vectors: Vec<PriorBits> = if word.is_arabic() {
            self.priors.lookup_word(seg)
        } else {
            vec![PriorBits::UNSEEN; word.len()]
        };
        let flags = case_flags(word, seg);

        let n = word.len();
        debug_assert_eq!(seg_ids.len(), n);
        debug_assert_eq!(prior_vectors.len(), n);

        let mut rows = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        let mut ce_offset = None;
        for (i, c) in word.bare().chars().enumerate() {
            let seg_id = if self.selector.seg_live() {
                seg_ids[i]
            } else {
                MASK_ID
            };
            let prior_id = if self.selector.prior_live() {
                prior_feature_id(prior_vectors[i])
            } else {
                MASK_ID
            };
            rows.push([
                self.vocab.char_id(c),
                seg_id,
                prior_id,
                case_feature_id(flags[i]),
            ]);
            let mut combo = word.mark_at(i);
            if flags[i] {
                ce_offset = Some(i);
                if self.mask_ce_labels {
                    combo = combo.core_residue();
                }
            }
            labels.push(Some(cw_label_id(combo)));
        }
        TokenRows {
            rows,
            labels,
            ce_offset,
            is_arabic: word.is_arabic(),
        }
    }

    fn wb_row(&self) -> ([usize; CW_FEATURE_COUNT], Option<usize>) {
        let seg_id = if self.selector.seg_live() {
            SegLabel::Boundary.id()
        } else {
            MASK_ID
        };
        let prior_id = if self.selector.prior_live() {
            prior_feature_id(PriorBits::UNSEEN)
        } else {
            MASK_ID
        };
        (
            [self.vocab.wb_id(), seg_id, prior_id, case_feature_id(false)],
            None,
        )
    }

    /// Encodes one sentence, splitting at word boundaries whenever a chunk
    /// would exceed `max_rows`. A single token longer than the cap is
    /// hard-split as a last resort; no token is ever dropped.
    pub fn encode(
        &self,
        record: &SentenceRecord,
        annotations: &[MorphoAnnotation],
    ) -> Vec<CwExample> {
        assert_eq!(record.tokens.len(), annotations.len());

        struct Builder {
            rows: Vec<[usize; CW_FEATURE_COUNT]>,
            labels: Vec<Option<usize>>,
            spans: Vec<CwTokenSpan>,
        }
        let mut examples: Vec<CwExample> = Vec::new();
        let mut current = Builder {
            rows: Vec::new(),
            labels: Vec::new(),
            spans: Vec::new(),
        };
        let flush = |current: &mut Builder, examples: &mut Vec<CwExample>| {
            if current.rows.is_empty() {
                return;
            }
            let rows = std::mem::take(&mut current.rows);
            let labels = std::mem::take(&mut current.labels);
            let spans = std::mem::take(&mut current.spans);
            let features = Array2::from_shape_fn((rows.len(), CW_FEATURE_COUNT), |(t, k)| {
                rows[t][k]
            });
            examples.push(CwExample {
                seq: EncodedSeq::new(features, labels).expect("aligned rows"),
                tokens: spans,
            });
        };

        for (token_index, (token, annot)) in
            record.tokens.iter().zip(annotations.iter()).enumerate()
        {
            let encoded = self.encode_token(&token.word, annot);
            // token rows plus a separating boundary row, when appending
            let needed = encoded.rows.len() + usize::from(!current.rows.is_empty());
            if !current.rows.is_empty() && current.rows.len() + needed > self.max_rows {
                flush(&mut current, &mut examples);
            }

            if encoded.rows.len() > self.max_rows {
                // oversized token: hard-split its rows
                flush(&mut current, &mut examples);
                let mut offset = 0;
                while offset < encoded.rows.len() {
                    let end = (offset + self.max_rows).min(encoded.rows.len());
                    let rows: Vec<_> = encoded.rows[offset..end].to_vec();
                    let labels: Vec<_> = encoded.labels[offset..end].to_vec();
                    let ce_offset = encoded
                        .ce_offset
                        .filter(|&c| c >= offset && c < end)
                        .map(|c| c - offset);
                    let features =
                        Array2::from_shape_fn((rows.len(), CW_FEATURE_COUNT), |(t, k)| rows[t][k]);
                    examples.push(CwExample {
                        seq: EncodedSeq::new(features, labels).expect("aligned rows"),
                        tokens: vec![CwTokenSpan {
                            token_index,
                            row_start: 0,
                            letter_count: end - offset,
                            letter_offset: offset,
                            ce_offset,
                            is_arabic: encoded.is_arabic,
                        }],
                    });
                    offset = end;
                }
                continue;
            }

            if !current.rows.is_empty() {
                let (row, label) = self.wb_row();
                current.rows.push(row);
                current.labels.push(label);
            }
            let row_start = current.rows.len();
            current.spans.push(CwTokenSpan {
                token_index,
                row_start,
                letter_count: encoded.rows.len(),
                letter_offset: 0,
                ce_offset: encoded.ce_offset,
                is_arabic: encoded.is_arabic,
            });
            current.rows.extend(encoded.rows);
            current.labels.extend(encoded.labels);
        }
        flush(&mut current, &mut examples);
        examples
    }

    /// Debug dump: char, seg, prior bits, case flag, label.
    pub fn dump_tsv(&self, examples: &[CwExample]) -> String {
        let mut out = String::from("char\tseg\tprior\tcase\tlabel\n");
        for example in examples {
            for (t, row) in example.seq.features().outer_iter().enumerate() {
                let ch = self.vocab.chars.get(row[0]).unwrap_or("<unk>");
                let seg = SegLabel::from_id(row[1])
                    .map(|s| s.as_str().to_string())
                    .unwrap_or_else(|| "<mask>".to_string());
                let prior = if row[2] >= 3 {
                    PriorBits((row[2] - 3) as u8).render()
                } else {
                    "<mask>".to_string()
                };
                let case = row[3] == case_feature_id(true);
                let label = match example.seq.labels()[t] {
                    Some(id) => cw_label_combo(id)
                        .map(|c| {
                            let s = c.to_string_bw();
                            if s.is_empty() {
                                "∅".to_string()
                            } else {
                                s
                            }
                        })
                        .unwrap_or_default(),
                    None => "-".to_string(),
                };
                out.push_str(&format!("{ch}\t{seg}\t{prior}\t{case}\t{label}\n"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, prepare_corpus, CorpusFormat};
    use crate::morpho::{Annotator, NaiveAnnotator};

    #[test]
    fn seg_labels_for_walktab() {
        let annotator = NaiveAnnotator::new();
        let seg = annotator.segment("wAlktAb");
        let labels: Vec<&str> = seg_labels(&seg).iter().map(|l| l.as_str()).collect();
        assert_eq!(labels, vec!["S", "B", "E", "B", "M", "M", "E"]);
        assert_eq!(render_seg_labels(&seg), "S+BE+BMME");
    }

    #[test]
    fn seg_labels_short_words() {
        let annotator = NaiveAnnotator::new();
        let w = annotator.segment("w");
        assert_eq!(render_seg_labels(&w), "S");
        let la = annotator.segment("lA");
        assert_eq!(render_seg_labels(&la), "BE");
    }

    #[test]
    fn case_flag_on_stem_final_letter() {
        let annotator = NaiveAnnotator::new();
        let word = crate::codec::decompose("ktAb").unwrap();
        let seg = annotator.segment("ktAb");
        let flags = case_flags(&word, &seg);
        assert_eq!(flags, vec![false, false, false, true]);
    }

    #[test]
    fn case_flag_on_noun_suffix() {
        let annotator = NaiveAnnotator::new();
        let word = crate::codec::decompose("mktbp").unwrap();
        let seg = annotator.segment("mktbp");
        let flags = case_flags(&word, &seg);
        assert_eq!(flags[4], true);
        assert_eq!(flags.iter().filter(|&&f| f).count(), 1);
    }

    #[test]
    fn case_flag_before_pronoun_suffix() {
        let annotator = NaiveAnnotator::new();
        let word = crate::codec::decompose("wbmktbtnA").unwrap();
        let seg = annotator.segment("wbmktbtnA");
        assert_eq!(seg.render(), "w+b+mktb+t+nA");
        let flags = case_flags(&word, &seg);
        // flag on the noun-suffix t (index 6), not on the pronoun
        assert_eq!(flags[6], true);
        assert_eq!(flags.iter().filter(|&&f| f).count(), 1);
    }

    #[test]
    fn non_arabic_token_has_no_flag() {
        let word = crate::codec::DiacritizedWord::passthrough("123");
        let seg = Segmentation::stem_only("123");
        assert!(case_flags(&word, &seg).iter().all(|&f| !f));
    }

    #[test]
    fn cw_labels_cover_inventory() {
        assert_eq!(cw_label_count(), 15);
        for (i, combo) in MarkCombo::inventory().into_iter().enumerate() {
            assert_eq!(cw_label_id(combo), i);
            assert_eq!(cw_label_combo(i), Some(combo));
        }
    }

    fn encode_text(text: &str, selector: CwSelector) -> Vec<CwExample> {
        let mut corpus = parse_corpus(text, CorpusFormat::Plain, "t").unwrap();
        let annotator = NaiveAnnotator::new();
        let annots = prepare_corpus(&mut corpus, &annotator).unwrap();
        let vocab = CwVocab::build(&corpus);
        let priors = PriorTable::build_from_annotations(&corpus, &annots);
        let encoder = CwEncoder::new(&vocab, &priors, selector);
        let mut out = Vec::new();
        for (record, annot) in corpus.iter().zip(annots.iter()) {
            out.extend(encoder.encode(record, annot));
        }
        out
    }

    #[test]
    fn two_word_sentence_structure() {
        let examples = encode_text("katab kitaAbN", CwSelector::All);
        assert_eq!(examples.len(), 1);
        let e = &examples[0];
        // 3 chars + WB + 4 chars
        assert_eq!(e.seq.len(), 8);
        assert_eq!(e.seq.labels()[3], None, "WB row carries no label");
        assert_eq!(e.tokens.len(), 2);
        assert_eq!(e.tokens[0].row_start, 0);
        assert_eq!(e.tokens[1].row_start, 4);
        // WB row: neutral prior, no case flag
        let wb = e.seq.features().row(3);
        assert_eq!(wb[2], prior_feature_id(PriorBits::UNSEEN));
        assert_eq!(wb[3], case_feature_id(false));
    }

    #[test]
    fn ce_slot_label_is_core_residue() {
        let examples = encode_text("rab~u", CwSelector::All);
        let e = &examples[0];
        let slot = e.tokens[0].ce_offset.unwrap();
        assert_eq!(slot, 1);
        // reference ~u at the slot trains as bare shadda
        let expected = cw_label_id(MarkCombo {
            shadda: true,
            vowel: None,
        });
        assert_eq!(e.seq.labels()[slot], Some(expected));
    }

    #[test]
    fn selector_masks_banks() {
        let all = encode_text("katab", CwSelector::All);
        let char_only = encode_text("katab", CwSelector::Char);
        let row_all = all[0].seq.features().row(0).to_owned();
        let row_char = char_only[0].seq.features().row(0).to_owned();
        assert_eq!(row_all[0], row_char[0]);
        assert_ne!(row_all[1], MASK_ID);
        assert_eq!(row_char[1], MASK_ID);
        assert_eq!(row_char[2], MASK_ID);
        assert_eq!(row_all[3], row_char[3], "CASE stays live in every setup");
    }

    #[test]
    fn long_sentence_splits_at_boundaries() {
        let word = "ktAb";
        let n_tokens = 700; // 700*4 chars + 699 WB = 3499 rows >> 1250
        let text = vec![word; n_tokens].join(" ");
        let examples = encode_text(&text, CwSelector::All);
        assert!(examples.len() >= 3);
        let mut seen_tokens = 0;
        for e in &examples {
            assert!(e.seq.len() <= MAX_SENTENCE_ROWS);
            // no chunk starts or ends with a WB row
            assert_ne!(e.seq.features()[(0, 1)], SegLabel::Boundary.id());
            assert_ne!(
                e.seq.features()[(e.seq.len() - 1, 1)],
                SegLabel::Boundary.id()
            );
            seen_tokens += e.tokens.len();
        }
        assert_eq!(seen_tokens, n_tokens, "no token lost");
    }

    #[test]
    fn unseen_word_gets_all_ones_prior() {
        let mut corpus = parse_corpus("katab", CorpusFormat::Plain, "t").unwrap();
        let annotator = NaiveAnnotator::new();
        let annots = prepare_corpus(&mut corpus, &annotator).unwrap();
        let vocab = CwVocab::build(&corpus);
        let priors = PriorTable::default();
        let encoder = CwEncoder::new(&vocab, &priors, CwSelector::All);
        let examples = encoder.encode(&corpus[0], &annots[0]);
        for row in examples[0].seq.features().outer_iter() {
            assert_eq!(row[2], prior_feature_id(PriorBits::UNSEEN));
        }
    }

    #[test]
    fn encoding_is_deterministic() {
        let a = encode_text("katab kitaAbN qalamN", CwSelector::All);
        let b = encode_text("katab kitaAbN qalamN", CwSelector::All);
        assert_eq!(a, b);
    }
}
