//! Diacritic marks, per-letter mark combinations, and the case-ending label
//! inventory.

use serde::{Deserialize, Serialize};

use crate::codec::CodecError;

/// The eight primitive diacritic marks in prior-vector bit order:
/// a, i, u, o, K, N, F, ~.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Primitive {
    Fatha,
    Kasra,
    Damma,
    Sukun,
    Kasratan,
    Dammatan,
    Fathatan,
    Shadda,
}

impl Primitive {
    pub const ALL: [Primitive; 8] = [
        Primitive::Fatha,
        Primitive::Kasra,
        Primitive::Damma,
        Primitive::Sukun,
        Primitive::Kasratan,
        Primitive::Dammatan,
        Primitive::Fathatan,
        Primitive::Shadda,
    ];

    /// Bit index inside a prior vector.
    pub fn bit(self) -> u8 {
        match self {
            Primitive::Fatha => 0,
            Primitive::Kasra => 1,
            Primitive::Damma => 2,
            Primitive::Sukun => 3,
            Primitive::Kasratan => 4,
            Primitive::Dammatan => 5,
            Primitive::Fathatan => 6,
            Primitive::Shadda => 7,
        }
    }

    pub fn buckwalter(self) -> char {
        match self {
            Primitive::Fatha => 'a',
            Primitive::Kasra => 'i',
            Primitive::Damma => 'u',
            Primitive::Sukun => 'o',
            Primitive::Kasratan => 'K',
            Primitive::Dammatan => 'N',
            Primitive::Fathatan => 'F',
            Primitive::Shadda => '~',
        }
    }
}

/// The seven vowel-like marks (everything but shadda). A letter carries at
/// most one of these, optionally geminated by shadda.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vowel {
    Fatha,
    Kasra,
    Damma,
    Sukun,
    Kasratan,
    Dammatan,
    Fathatan,
}

impl Vowel {
    pub const ALL: [Vowel; 7] = [
        Vowel::Fatha,
        Vowel::Kasra,
        Vowel::Damma,
        Vowel::Sukun,
        Vowel::Kasratan,
        Vowel::Dammatan,
        Vowel::Fathatan,
    ];

    pub fn buckwalter(self) -> char {
        self.primitive().buckwalter()
    }

    pub fn primitive(self) -> Primitive {
        match self {
            Vowel::Fatha => Primitive::Fatha,
            Vowel::Kasra => Primitive::Kasra,
            Vowel::Damma => Primitive::Damma,
            Vowel::Sukun => Primitive::Sukun,
            Vowel::Kasratan => Primitive::Kasratan,
            Vowel::Dammatan => Primitive::Dammatan,
            Vowel::Fathatan => Primitive::Fathatan,
        }
    }

    pub fn from_buckwalter(c: char) -> Option<Vowel> {
        Some(match c {
            'a' => Vowel::Fatha,
            'i' => Vowel::Kasra,
            'u' => Vowel::Damma,
            'o' => Vowel::Sukun,
            'K' => Vowel::Kasratan,
            'N' => Vowel::Dammatan,
            'F' => Vowel::Fathatan,
            _ => return None,
        })
    }
}

/// The marks carried by a single letter: optional shadda plus at most one
/// vowel. Mark order is normalized to shadda-then-vowel, so the source
/// spellings `~a` and `a~` decompose to the same combo. Shadda never
/// combines with sukun.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MarkCombo {
    pub shadda: bool,
    pub vowel: Option<Vowel>,
}

impl MarkCombo {
    /// An unmarked letter.
    pub const NONE: MarkCombo = MarkCombo {
        shadda: false,
        vowel: None,
    };

    pub fn new(shadda: bool, vowel: Option<Vowel>) -> Option<MarkCombo> {
        let combo = MarkCombo { shadda, vowel };
        combo.is_valid().then_some(combo)
    }

    pub fn vowel(vowel: Vowel) -> MarkCombo {
        MarkCombo {
            shadda: false,
            vowel: Some(vowel),
        }
    }

    pub fn is_none(self) -> bool {
        self == MarkCombo::NONE
    }

    pub fn is_valid(self) -> bool {
        !(self.shadda && self.vowel == Some(Vowel::Sukun))
    }

    /// Renders the combo in canonical Buckwalter order (shadda first).
    pub fn render(self, out: &mut String) {
        if self.shadda {
            out.push('~');
        }
        if let Some(v) = self.vowel {
            out.push(v.buckwalter());
        }
    }

    pub fn to_string_bw(self) -> String {
        let mut s = String::new();
        self.render(&mut s);
        s
    }

    /// Drops the vowel, keeping gemination. Used to reduce a case-ending
    /// slot to its core-word residue.
    pub fn core_residue(self) -> MarkCombo {
        MarkCombo {
            shadda: self.shadda,
            vowel: None,
        }
    }

    /// The fixed inventory of per-letter mark states: no mark, the seven
    /// vowels, bare shadda, and the six shadda+vowel combinations.
    pub fn inventory() -> Vec<MarkCombo> {
        let mut all = vec![MarkCombo::NONE];
        for v in Vowel::ALL {
            all.push(MarkCombo::vowel(v));
        }
        all.push(MarkCombo {
            shadda: true,
            vowel: None,
        });
        for v in Vowel::ALL {
            if v != Vowel::Sukun {
                all.push(MarkCombo {
                    shadda: true,
                    vowel: Some(v),
                });
            }
        }
        all
    }
}

/// An 8-bit vector of diacritics observed on one letter, bit order
/// a, i, u, o, K, N, F, ~ (bit 0 leftmost when rendered).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorBits(pub u8);

impl PriorBits {
    pub const EMPTY: PriorBits = PriorBits(0);
    /// The all-ones vector used for segments never seen in training.
    pub const UNSEEN: PriorBits = PriorBits(0xFF);

    pub fn set(&mut self, p: Primitive) {
        self.0 |= 1 << p.bit();
    }

    pub fn contains(self, p: Primitive) -> bool {
        self.0 & (1 << p.bit()) != 0
    }

    /// Marks every primitive present in a combo (a shadda combo sets both
    /// the shadda bit and the vowel bit).
    pub fn observe(&mut self, combo: MarkCombo) {
        if combo.shadda {
            self.set(Primitive::Shadda);
        }
        if let Some(v) = combo.vowel {
            self.set(v.primitive());
        }
    }

    /// Renders the vector as 8 ASCII bits, bit 0 first: "01100000".
    pub fn render(self) -> String {
        (0..8)
            .map(|b| if self.0 & (1 << b) != 0 { '1' } else { '0' })
            .collect()
    }
}

/// The 15 case-ending labels: the 14 mark combinations that can close a
/// word stem plus the virtual (null) marker `#`.
///
/// The combination inventory is the standard reading of fatHa, kasra, and
/// damma with optional gemination and nunation: seven plain vowels, bare
/// shadda, and six shadda+vowel pairs (shadda+sukun is excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CeLabel {
    Fatha,
    Kasra,
    Damma,
    Sukun,
    Fathatan,
    Dammatan,
    Kasratan,
    Shadda,
    ShaddaFatha,
    ShaddaKasra,
    ShaddaDamma,
    ShaddaFathatan,
    ShaddaDammatan,
    ShaddaKasratan,
    Virtual,
}

impl CeLabel {
    pub const COUNT: usize = 15;

    pub const ALL: [CeLabel; CeLabel::COUNT] = [
        CeLabel::Fatha,
        CeLabel::Kasra,
        CeLabel::Damma,
        CeLabel::Sukun,
        CeLabel::Fathatan,
        CeLabel::Dammatan,
        CeLabel::Kasratan,
        CeLabel::Shadda,
        CeLabel::ShaddaFatha,
        CeLabel::ShaddaKasra,
        CeLabel::ShaddaDamma,
        CeLabel::ShaddaFathatan,
        CeLabel::ShaddaDammatan,
        CeLabel::ShaddaKasratan,
        CeLabel::Virtual,
    ];

    pub fn id(self) -> usize {
        CeLabel::ALL.iter().position(|&l| l == self).unwrap()
    }

    pub fn from_id(id: usize) -> Option<CeLabel> {
        CeLabel::ALL.get(id).copied()
    }

    /// Maps the observed combo on a case-ending slot to its label. An
    /// unmarked slot reads as sukun (an empty case is equivalent to sukun).
    pub fn from_slot_combo(combo: MarkCombo) -> Result<CeLabel, CodecError> {
        Ok(match (combo.shadda, combo.vowel) {
            (false, None) => CeLabel::Sukun,
            (false, Some(Vowel::Fatha)) => CeLabel::Fatha,
            (false, Some(Vowel::Kasra)) => CeLabel::Kasra,
            (false, Some(Vowel::Damma)) => CeLabel::Damma,
            (false, Some(Vowel::Sukun)) => CeLabel::Sukun,
            (false, Some(Vowel::Fathatan)) => CeLabel::Fathatan,
            (false, Some(Vowel::Dammatan)) => CeLabel::Dammatan,
            (false, Some(Vowel::Kasratan)) => CeLabel::Kasratan,
            (true, None) => CeLabel::Shadda,
            (true, Some(Vowel::Fatha)) => CeLabel::ShaddaFatha,
            (true, Some(Vowel::Kasra)) => CeLabel::ShaddaKasra,
            (true, Some(Vowel::Damma)) => CeLabel::ShaddaDamma,
            (true, Some(Vowel::Fathatan)) => CeLabel::ShaddaFathatan,
            (true, Some(Vowel::Dammatan)) => CeLabel::ShaddaDammatan,
            (true, Some(Vowel::Kasratan)) => CeLabel::ShaddaKasratan,
            (true, Some(Vowel::Sukun)) => return Err(CodecError::ShaddaSukun { pos: 0 }),
        })
    }

    /// The mark combo this label writes onto the slot; `None` for Virtual,
    /// which emits no mark.
    pub fn to_combo(self) -> Option<MarkCombo> {
        let (shadda, vowel) = match self {
            CeLabel::Fatha => (false, Some(Vowel::Fatha)),
            CeLabel::Kasra => (false, Some(Vowel::Kasra)),
            CeLabel::Damma => (false, Some(Vowel::Damma)),
            CeLabel::Sukun => (false, Some(Vowel::Sukun)),
            CeLabel::Fathatan => (false, Some(Vowel::Fathatan)),
            CeLabel::Dammatan => (false, Some(Vowel::Dammatan)),
            CeLabel::Kasratan => (false, Some(Vowel::Kasratan)),
            CeLabel::Shadda => (true, None),
            CeLabel::ShaddaFatha => (true, Some(Vowel::Fatha)),
            CeLabel::ShaddaKasra => (true, Some(Vowel::Kasra)),
            CeLabel::ShaddaDamma => (true, Some(Vowel::Damma)),
            CeLabel::ShaddaFathatan => (true, Some(Vowel::Fathatan)),
            CeLabel::ShaddaDammatan => (true, Some(Vowel::Dammatan)),
            CeLabel::ShaddaKasratan => (true, Some(Vowel::Kasratan)),
            CeLabel::Virtual => return None,
        };
        Some(MarkCombo { shadda, vowel })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CeLabel::Fatha => "a",
            CeLabel::Kasra => "i",
            CeLabel::Damma => "u",
            CeLabel::Sukun => "o",
            CeLabel::Fathatan => "F",
            CeLabel::Dammatan => "N",
            CeLabel::Kasratan => "K",
            CeLabel::Shadda => "~",
            CeLabel::ShaddaFatha => "~a",
            CeLabel::ShaddaKasra => "~i",
            CeLabel::ShaddaDamma => "~u",
            CeLabel::ShaddaFathatan => "~F",
            CeLabel::ShaddaDammatan => "~N",
            CeLabel::ShaddaKasratan => "~K",
            CeLabel::Virtual => "#",
        }
    }
}

impl std::fmt::Display for CeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_primitives_in_bit_order() {
        let order: Vec<char> = Primitive::ALL.iter().map(|p| p.buckwalter()).collect();
        assert_eq!(order, vec!['a', 'i', 'u', 'o', 'K', 'N', 'F', '~']);
        for (i, p) in Primitive::ALL.iter().enumerate() {
            assert_eq!(p.bit() as usize, i);
        }
    }

    #[test]
    fn combo_inventory_has_fifteen_states() {
        let inv = MarkCombo::inventory();
        assert_eq!(inv.len(), 15);
        assert!(inv.iter().all(|c| c.is_valid()));
        // 14 marked combinations plus the unmarked state.
        assert_eq!(inv.iter().filter(|c| !c.is_none()).count(), 14);
    }

    #[test]
    fn ce_label_set_has_fifteen_members() {
        assert_eq!(CeLabel::ALL.len(), 15);
        for (i, l) in CeLabel::ALL.iter().enumerate() {
            assert_eq!(l.id(), i);
            assert_eq!(CeLabel::from_id(i), Some(*l));
        }
    }

    #[test]
    fn shadda_sukun_is_rejected() {
        assert!(MarkCombo::new(true, Some(Vowel::Sukun)).is_none());
        assert!(MarkCombo::new(true, Some(Vowel::Fatha)).is_some());
    }

    #[test]
    fn empty_slot_reads_as_sukun() {
        assert_eq!(
            CeLabel::from_slot_combo(MarkCombo::NONE).unwrap(),
            CeLabel::Sukun
        );
    }

    #[test]
    fn prior_bits_render_in_order() {
        let mut bits = PriorBits::EMPTY;
        bits.set(Primitive::Kasra);
        bits.set(Primitive::Damma);
        assert_eq!(bits.render(), "01100000");
        assert_eq!(PriorBits::UNSEEN.render(), "11111111");
    }

    #[test]
    fn shadda_combo_observation_sets_both_bits() {
        let mut bits = PriorBits::EMPTY;
        bits.observe(MarkCombo {
            shadda: true,
            vowel: Some(Vowel::Fatha),
        });
        assert!(bits.contains(Primitive::Shadda));
        assert!(bits.contains(Primitive::Fatha));
        assert_eq!(bits.render(), "10000001");
    }
}
