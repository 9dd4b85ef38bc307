//! Stem-template matching against a shipped inventory.

use crate::morpho::UNKNOWN_TEMPLATE;

const DEFAULT_INVENTORY_TSV: &str = include_str!("../../resources/templates.tsv");

const SLOT_LETTERS: [char; 3] = ['f', 'E', 'l'];

#[derive(Debug, Clone)]
struct Template {
    pattern: Vec<char>,
    fixed_count: usize,
}

/// A set of derivational patterns over the root slots f/E/l. Matching is
/// positional: fixed letters must match exactly, and repeated slot letters
/// must bind the same character.
#[derive(Debug, Clone)]
pub struct TemplateInventory {
    templates: Vec<Template>,
}

impl TemplateInventory {
    /// Parses a TSV inventory (template, length). Lines starting with `#`
    /// are comments; the length column is validated against the template.
    pub fn from_tsv(tsv: &str) -> TemplateInventory {
        let mut templates = Vec::new();
        for line in tsv.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let pattern: Vec<char> = match cols.next() {
                Some(t) => t.chars().collect(),
                None => continue,
            };
            if let Some(len) = cols.next().and_then(|l| l.trim().parse::<usize>().ok()) {
                debug_assert_eq!(len, pattern.len(), "inventory length column disagrees");
            }
            let fixed_count = pattern
                .iter()
                .filter(|c| !SLOT_LETTERS.contains(c))
                .count();
            templates.push(Template {
                pattern,
                fixed_count,
            });
        }
        // Most-specific first: more fixed letters win, then source order.
        templates.sort_by(|a, b| b.fixed_count.cmp(&a.fixed_count));
        TemplateInventory { templates }
    }

    pub fn shipped() -> TemplateInventory {
        TemplateInventory::from_tsv(DEFAULT_INVENTORY_TSV)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    /// Returns the first (most specific) template matching the stem, or
    /// `"UNK"` when no inventory entry fits.
    pub fn stem_template(&self, stem: &str) -> String {
        let letters: Vec<char> = stem.chars().collect();
        if letters.is_empty() {
            return UNKNOWN_TEMPLATE.to_string();
        }
        for t in &self.templates {
            if t.pattern.len() == letters.len() && matches(&t.pattern, &letters) {
                return t.pattern.iter().collect();
            }
        }
        UNKNOWN_TEMPLATE.to_string()
    }
}

fn matches(pattern: &[char], letters: &[char]) -> bool {
    let mut bindings: [Option<char>; 3] = [None; 3];
    for (&p, &c) in pattern.iter().zip(letters.iter()) {
        match SLOT_LETTERS.iter().position(|&s| s == p) {
            Some(slot) => match bindings[slot] {
                Some(bound) if bound != c => return false,
                Some(_) => {}
                None => bindings[slot] = Some(c),
            },
            None => {
                if p != c {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_inventory_loads() {
        let inv = TemplateInventory::shipped();
        assert!(inv.len() >= 30, "expected a realistic inventory");
    }

    #[test]
    fn mktbp_matches_mfelp() {
        let inv = TemplateInventory::shipped();
        assert_eq!(inv.stem_template("mktbp"), "mfElp");
    }

    #[test]
    fn three_consonant_stem_matches_fel() {
        let inv = TemplateInventory::shipped();
        assert_eq!(inv.stem_template("ktb"), "fEl");
    }

    #[test]
    fn unmatched_stem_yields_unk() {
        let inv = TemplateInventory::shipped();
        assert_eq!(inv.stem_template("strAtyjyp"), "UNK");
        assert_eq!(inv.stem_template(""), "UNK");
    }

    #[test]
    fn fixed_letters_take_priority() {
        let inv = TemplateInventory::shipped();
        // mktb could bind fEAl slots only with A at position 2, which its
        // 't' is not; it must take mfEl with the fixed m.
        assert_eq!(inv.stem_template("mktb"), "mfEl");
        assert_eq!(inv.stem_template("ktAb"), "fEAl");
        assert_eq!(inv.stem_template("kAtb"), "fAEl");
        assert_eq!(inv.stem_template("mktwb"), "mfEwl");
    }

    #[test]
    fn repeated_slots_must_agree() {
        let inv = TemplateInventory::from_tsv("fEE\t3");
        assert_eq!(inv.stem_template("qmm"), "fEE");
        assert_eq!(inv.stem_template("qmr"), "UNK");
    }
}
