//! The Buckwalter transliteration table.
//!
//! A strict 1:1 mapping between ASCII Buckwalter symbols and Arabic
//! codepoints. Every symbol is classified as either a `Letter` or a `Mark`
//! (diacritic). Hamza-seat variants, madda, dagger alef, and alef wasla are
//! classified as plain letters; only the eight primitive diacritics are
//! marks.

/// Version tag of the mapping; bumped whenever a row is added or changed.
pub const TABLE_VERSION: u32 = 1;

/// Symbol class within the transliteration table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolClass {
    Letter,
    Mark,
}

impl SymbolClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SymbolClass::Letter => "letter",
            SymbolClass::Mark => "mark",
        }
    }
}

/// One row of the transliteration table.
#[derive(Debug, Clone, Copy)]
pub struct TableEntry {
    pub buckwalter: char,
    pub arabic: char,
    pub class: SymbolClass,
}

const fn letter(buckwalter: char, arabic: char) -> TableEntry {
    TableEntry {
        buckwalter,
        arabic,
        class: SymbolClass::Letter,
    }
}

const fn mark(buckwalter: char, arabic: char) -> TableEntry {
    TableEntry {
        buckwalter,
        arabic,
        class: SymbolClass::Mark,
    }
}

/// The full symbol table, letters first, then the eight primitive marks.
pub const TABLE: &[TableEntry] = &[
    letter('\'', '\u{0621}'), // hamza
    letter('|', '\u{0622}'),  // alef with madda
    letter('>', '\u{0623}'),  // alef with hamza above
    letter('&', '\u{0624}'),  // waw with hamza
    letter('<', '\u{0625}'),  // alef with hamza below
    letter('}', '\u{0626}'),  // yeh with hamza
    letter('A', '\u{0627}'),  // alef
    letter('b', '\u{0628}'),  // beh
    letter('p', '\u{0629}'),  // teh marbuta
    letter('t', '\u{062A}'),  // teh
    letter('v', '\u{062B}'),  // theh
    letter('j', '\u{062C}'),  // jeem
    letter('H', '\u{062D}'),  // hah
    letter('x', '\u{062E}'),  // khah
    letter('d', '\u{062F}'),  // dal
    letter('*', '\u{0630}'),  // thal
    letter('r', '\u{0631}'),  // reh
    letter('z', '\u{0632}'),  // zain
    letter('s', '\u{0633}'),  // seen
    letter('$', '\u{0634}'),  // sheen
    letter('S', '\u{0635}'),  // sad
    letter('D', '\u{0636}'),  // dad
    letter('T', '\u{0637}'),  // tah
    letter('Z', '\u{0638}'),  // zah
    letter('E', '\u{0639}'),  // ain
    letter('g', '\u{063A}'),  // ghain
    letter('_', '\u{0640}'),  // tatweel
    letter('f', '\u{0641}'),  // feh
    letter('q', '\u{0642}'),  // qaf
    letter('k', '\u{0643}'),  // kaf
    letter('l', '\u{0644}'),  // lam
    letter('m', '\u{0645}'),  // meem
    letter('n', '\u{0646}'),  // noon
    letter('h', '\u{0647}'),  // heh
    letter('w', '\u{0648}'),  // waw
    letter('Y', '\u{0649}'),  // alef maksura
    letter('y', '\u{064A}'),  // yeh
    letter('`', '\u{0670}'),  // dagger alef
    letter('{', '\u{0671}'),  // alef wasla
    mark('F', '\u{064B}'),    // fathatan
    mark('N', '\u{064C}'),    // dammatan
    mark('K', '\u{064D}'),    // kasratan
    mark('a', '\u{064E}'),    // fatha
    mark('u', '\u{064F}'),    // damma
    mark('i', '\u{0650}'),    // kasra
    mark('~', '\u{0651}'),    // shadda
    mark('o', '\u{0652}'),    // sukun
];

/// Looks up the table row for a Buckwalter symbol.
pub fn entry_for_buckwalter(symbol: char) -> Option<&'static TableEntry> {
    TABLE.iter().find(|e| e.buckwalter == symbol)
}

/// Looks up the table row for an Arabic codepoint.
pub fn entry_for_arabic(codepoint: char) -> Option<&'static TableEntry> {
    TABLE.iter().find(|e| e.arabic == codepoint)
}

/// True for symbols the table classifies as letters.
pub fn is_letter(symbol: char) -> bool {
    matches!(
        entry_for_buckwalter(symbol),
        Some(TableEntry {
            class: SymbolClass::Letter,
            ..
        })
    )
}

/// True for the eight primitive diacritic symbols.
pub fn is_mark(symbol: char) -> bool {
    matches!(
        entry_for_buckwalter(symbol),
        Some(TableEntry {
            class: SymbolClass::Mark,
            ..
        })
    )
}

/// Renders the table as TSV: symbol, codepoint, class. Consumed by the
/// `dump-codec` command and by downstream tooling.
pub fn dump_tsv() -> String {
    let mut out = String::new();
    out.push_str(&format!("# buckwalter table v{TABLE_VERSION}\n"));
    out.push_str("symbol\tcodepoint\tclass\n");
    for e in TABLE {
        out.push_str(&format!(
            "{}\tU+{:04X}\t{}\n",
            e.buckwalter, e.arabic as u32, e.class.as_str()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn table_is_a_bijection() {
        let bw: BTreeSet<char> = TABLE.iter().map(|e| e.buckwalter).collect();
        let ar: BTreeSet<char> = TABLE.iter().map(|e| e.arabic).collect();
        assert_eq!(bw.len(), TABLE.len());
        assert_eq!(ar.len(), TABLE.len());
    }

    #[test]
    fn exactly_eight_marks() {
        let marks: Vec<char> = TABLE
            .iter()
            .filter(|e| e.class == SymbolClass::Mark)
            .map(|e| e.buckwalter)
            .collect();
        assert_eq!(marks.len(), 8);
        for m in ['a', 'i', 'u', 'o', 'F', 'N', 'K', '~'] {
            assert!(marks.contains(&m));
        }
    }

    #[test]
    fn dump_lists_every_symbol() {
        let tsv = dump_tsv();
        assert!(tsv.contains("~\tU+0651\tmark"));
        assert!(tsv.contains("A\tU+0627\tletter"));
        assert_eq!(tsv.lines().count(), TABLE.len() + 2);
    }
}
