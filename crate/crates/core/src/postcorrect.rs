//! Unigram-LM post-correction of core-word model output: a predicted form
//! never seen in training for a known word is replaced by that word's most
//! frequent training form.

use crate::codec::{decompose, recompose, DiacritizedWord, MarkCombo};
use crate::corpus::Lexicon;

/// Whether post-correction runs; the scope is fixed to words seen in
/// training.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectionPolicy {
    pub enabled: bool,
}

impl Default for CorrectionPolicy {
    fn default() -> Self {
        CorrectionPolicy { enabled: true }
    }
}

/// Applies the correction to one predicted word. Comparison and
/// replacement cover core-word marks only: the case-ending slot keeps the
/// predicted vowel (gemination comes from the replacement form, since it
/// is lexical).
///
/// Unknown words, non-Arabic tokens, and predictions already observed in
/// training pass through unchanged.
pub fn post_correct(predicted: &DiacritizedWord, lexicon: &Lexicon) -> DiacritizedWord {
    if !predicted.is_arabic() {
        return predicted.clone();
    }
    let Some(_) = lexicon.forms(predicted.bare()) else {
        return predicted.clone();
    };
    let core_form = recompose(&predicted.core());
    if lexicon.count(predicted.bare(), &core_form) > 0 {
        return predicted.clone();
    }
    let best = lexicon
        .most_frequent(predicted.bare())
        .expect("non-empty entry");
    let mut replacement = decompose(best).expect("lexicon forms are well-formed");
    replacement.set_ce_index(predicted.ce_index());
    if let Some(slot) = predicted.ce_index() {
        let lexical = replacement.mark_at(slot);
        let predicted_slot = predicted.mark_at(slot);
        let vowel = predicted_slot
            .vowel
            .filter(|&v| !(lexical.shadda && v == crate::codec::Vowel::Sukun));
        replacement.set_mark(
            slot,
            MarkCombo {
                shadda: lexical.shadda,
                vowel,
            },
        );
    }
    replacement
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, CorpusFormat, Lexicon};

    fn lexicon(text: &str) -> Lexicon {
        let train = parse_corpus(text, CorpusFormat::Plain, "t").unwrap();
        Lexicon::build(&train)
    }

    fn word(s: &str, ce: Option<usize>) -> DiacritizedWord {
        let mut w = decompose(s).unwrap();
        w.set_ce_index(ce);
        w
    }

    #[test]
    fn unseen_form_replaced_by_most_frequent() {
        let lex = lexicon("kitaAb kitaAb kut~aAb");
        let predicted = word("kutaAb", None);
        let corrected = post_correct(&predicted, &lex);
        assert_eq!(recompose(&corrected), "kitaAb");
    }

    #[test]
    fn seen_form_passes_through() {
        let lex = lexicon("kitaAb kitaAb kut~aAb");
        let predicted = word("kut~aAb", None);
        assert_eq!(post_correct(&predicted, &lex), predicted);
    }

    #[test]
    fn unknown_word_passes_through() {
        let lex = lexicon("kitaAb");
        let predicted = word("qalamu", None);
        assert_eq!(post_correct(&predicted, &lex), predicted);
    }

    #[test]
    fn predicted_ce_vowel_survives_replacement() {
        // slot on the final b; prediction "kutaAbu" is unseen as a core
        // form, the replacement keeps the predicted damma
        let lex = lexicon("kitaAbu kitaAbi kitaAba kut~aAbu");
        let predicted = word("kutaAbu", Some(3));
        let corrected = post_correct(&predicted, &lex);
        assert_eq!(recompose(&corrected), "kitaAbu");
        assert_eq!(corrected.ce_index(), Some(3));
    }

    #[test]
    fn ce_slot_excluded_from_comparison() {
        // core form kitaAb was seen; a novel CE vowel must not trigger
        // replacement
        let lex = lexicon("kitaAbu");
        let predicted = word("kitaAbK", Some(3));
        assert_eq!(post_correct(&predicted, &lex), predicted);
    }

    #[test]
    fn idempotent() {
        let lex = lexicon("kitaAb kitaAb kut~aAb");
        let predicted = word("kutaAbi", Some(3));
        let once = post_correct(&predicted, &lex);
        let twice = post_correct(&once, &lex);
        assert_eq!(once, twice);
    }

    #[test]
    fn non_arabic_passes_through() {
        let lex = lexicon("kitaAb");
        let token = DiacritizedWord::passthrough("123");
        assert_eq!(post_correct(&token, &lex), token);
    }

    #[test]
    fn output_form_always_in_support() {
        let lex = lexicon("kitaAb kut~aAb kitAb");
        for pred in ["kutaAb", "kitaAb", "ktAbu", "kataAb"] {
            let corrected = post_correct(&word(pred, None), &lex);
            let core = recompose(&corrected.core());
            let in_support = lex.count("ktAb", &core) > 0 || core == *pred;
            assert!(in_support, "{core} escaped the lexicon support");
        }
    }
}
