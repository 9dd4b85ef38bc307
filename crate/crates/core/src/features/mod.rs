//! Feature extraction for the two models: per-character rows for the
//! core-word model and per-word rows for the case-ending model.

pub mod ce;
pub mod cw;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Reserved vocabulary ids, present in every bank.
pub const PAD_ID: usize = 0;
pub const UNK_ID: usize = 1;
pub const MASK_ID: usize = 2;
pub const RESERVED: [&str; 3] = ["<pad>", "<unk>", "<mask>"];

/// A closed vocabulary built over training data. Unknown lookups map to
/// `<unk>`; ids are assigned in first-seen order and are stable across
/// save/load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocab {
    items: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Default for Vocab {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocab {
    pub fn new() -> Vocab {
        let mut v = Vocab {
            items: Vec::new(),
            index: BTreeMap::new(),
        };
        for r in RESERVED {
            v.intern(r);
        }
        v
    }

    pub fn intern(&mut self, item: &str) -> usize {
        if let Some(&id) = self.index.get(item) {
            return id;
        }
        let id = self.items.len();
        self.items.push(item.to_string());
        self.index.insert(item.to_string(), id);
        id
    }

    pub fn id(&self, item: &str) -> usize {
        self.index.get(item).copied().unwrap_or(UNK_ID)
    }

    pub fn get(&self, id: usize) -> Option<&str> {
        self.items.get(id).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }
}

impl From<Vec<String>> for Vocab {
    fn from(items: Vec<String>) -> Vocab {
        let index = items
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Vocab { items, index }
    }
}

impl From<Vocab> for Vec<String> {
    fn from(v: Vocab) -> Vec<String> {
        v.items
    }
}
