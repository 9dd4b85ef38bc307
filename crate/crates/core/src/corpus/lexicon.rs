//! The unigram lexicon: bare word form → observed core diacritized forms
//! with counts.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codec::recompose;
use crate::container::{Container, ContainerError};
use crate::corpus::SentenceRecord;

/// Counts of core diacritized forms per bare word, built from training
/// text. The case-ending vowel is stripped before counting (gemination on
/// the slot is kept), so forms differ only in core-word marks.
///
/// Words containing any non-Arabic character are excluded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeMap<String, u64>>,
    total_tokens: u64,
}

impl Lexicon {
    /// Counts every Arabic token's core form. Case-ending slots should be
    /// assigned beforehand (see `prepare_corpus`); a token without a slot
    /// counts its full form.
    pub fn build(train: &[SentenceRecord]) -> Lexicon {
        let mut lex = Lexicon::default();
        for record in train {
            for token in &record.tokens {
                if !token.word.is_arabic() {
                    continue;
                }
                let form = recompose(&token.word.core());
                let bare = token.word.bare().to_string();
                *lex.entries.entry(bare).or_default().entry(form).or_insert(0) += 1;
                lex.total_tokens += 1;
            }
        }
        lex
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn contains(&self, bare: &str) -> bool {
        self.entries.contains_key(bare)
    }

    pub fn forms(&self, bare: &str) -> Option<&BTreeMap<String, u64>> {
        self.entries.get(bare)
    }

    pub fn count(&self, bare: &str, form: &str) -> u64 {
        self.forms(bare)
            .and_then(|f| f.get(form))
            .copied()
            .unwrap_or(0)
    }

    /// The most frequently observed form; ties break to the
    /// lexicographically smallest form.
    pub fn most_frequent(&self, bare: &str) -> Option<&str> {
        let forms = self.forms(bare)?;
        let mut best: Option<(&str, u64)> = None;
        for (form, &count) in forms {
            match best {
                Some((_, c)) if count <= c => {}
                _ => best = Some((form, count)),
            }
        }
        best.map(|(f, _)| f)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, u64>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn save(&self, path: &Path) -> Result<(), ContainerError> {
        let mut c = Container::new();
        c.add_json("kind", &"lexicon");
        c.add_json("lexicon", self);
        c.save(path)
    }

    pub fn load(path: &Path) -> Result<Lexicon, ContainerError> {
        let c = Container::load(path)?;
        c.require_json("lexicon")
    }

    /// Debug export: bare, form, count.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("bare\tform\tcount\n");
        for (bare, forms) in &self.entries {
            for (form, count) in forms {
                out.push_str(&format!("{bare}\t{form}\t{count}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, CorpusFormat};

    fn corpus(lines: &str) -> Vec<SentenceRecord> {
        parse_corpus(lines, CorpusFormat::Plain, "t").unwrap()
    }

    #[test]
    fn counts_forms_per_bare_word() {
        let train = corpus("kitaAb kitaAb kut~aAb");
        let lex = Lexicon::build(&train);
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.count("ktAb", "kitaAb"), 2);
        assert_eq!(lex.count("ktAb", "kut~aAb"), 1);
        assert_eq!(lex.total_tokens(), 3);
    }

    #[test]
    fn most_frequent_is_argmax() {
        let train = corpus("kitaAb kitaAb kut~aAb");
        let lex = Lexicon::build(&train);
        assert_eq!(lex.most_frequent("ktAb"), Some("kitaAb"));
        assert_eq!(lex.most_frequent("qlm"), None);
    }

    #[test]
    fn ties_break_lexicographically() {
        let train = corpus("katab kutib");
        let lex = Lexicon::build(&train);
        assert_eq!(lex.most_frequent("ktb"), Some("katab"));
    }

    #[test]
    fn empty_train_empty_lexicon() {
        let lex = Lexicon::build(&[]);
        assert!(lex.is_empty());
        assert_eq!(lex.total_tokens(), 0);
    }

    #[test]
    fn non_arabic_tokens_excluded() {
        let train = corpus("kitaAb 123 .");
        let lex = Lexicon::build(&train);
        assert_eq!(lex.len(), 1);
        assert!(!lex.contains("123"));
    }

    #[test]
    fn keys_match_stripped_forms() {
        let train = corpus("kitaAb kut~aAb muEal~im");
        let lex = Lexicon::build(&train);
        for (bare, forms) in lex.iter() {
            for form in forms.keys() {
                let w = crate::codec::decompose(form).unwrap();
                assert_eq!(w.bare(), bare);
            }
        }
    }

    #[test]
    fn save_load_round_trip() {
        let train = corpus("kitaAb kut~aAb");
        let lex = Lexicon::build(&train);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lexicon.bin");
        lex.save(&path).unwrap();
        assert_eq!(Lexicon::load(&path).unwrap(), lex);
    }
}
