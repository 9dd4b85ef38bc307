//! The case-ending confusion matrix and its renderers: aggregated
//! error-pair rows and per-label distribution/accuracy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::codec::CeLabel;

/// Full 15×15 matrix of (reference, hypothesis) label counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionReport {
    counts: BTreeMap<(usize, usize), u64>,
}

impl ConfusionReport {
    pub fn new() -> ConfusionReport {
        ConfusionReport::default()
    }

    pub fn record(&mut self, reference: CeLabel, hypothesis: CeLabel) {
        *self
            .counts
            .entry((reference.id(), hypothesis.id()))
            .or_insert(0) += 1;
    }

    pub fn count(&self, reference: CeLabel, hypothesis: CeLabel) -> u64 {
        self.counts
            .get(&(reference.id(), hypothesis.id()))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn total_errors(&self) -> u64 {
        self.counts
            .iter()
            .filter(|((r, h), _)| r != h)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Reference occurrences per label.
    pub fn reference_count(&self, label: CeLabel) -> u64 {
        self.counts
            .iter()
            .filter(|((r, _), _)| *r == label.id())
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn correct_count(&self, label: CeLabel) -> u64 {
        self.count(label, label)
    }

    /// Off-diagonal pairs aggregated over both directions (`a ⇔ u`),
    /// sorted by count descending, with the share of total errors.
    pub fn aggregated_errors(&self) -> Vec<(CeLabel, CeLabel, u64, f64)> {
        let total = self.total_errors();
        let mut rows = Vec::new();
        for (i, &a) in CeLabel::ALL.iter().enumerate() {
            for &b in &CeLabel::ALL[i + 1..] {
                let count = self.count(a, b) + self.count(b, a);
                if count > 0 {
                    let pct = 100.0 * count as f64 / total as f64;
                    rows.push((a, b, count, pct));
                }
            }
        }
        rows.sort_by(|x, y| y.2.cmp(&x.2).then(x.0.id().cmp(&y.0.id())));
        rows
    }

    /// Error-pair table in the published layout: error, count, percent.
    pub fn render_errors_text(&self) -> String {
        let mut out = String::from("error\tcount\t%\n");
        for (a, b, count, pct) in self.aggregated_errors() {
            out.push_str(&format!("{a} ⇔ {b}\t{count}\t{pct:.1}\n"));
        }
        out
    }

    /// Per-label frequency and accuracy table.
    pub fn render_distribution_text(&self) -> String {
        let total = self.total();
        let mut out = String::from("label\tref_count\tfreq_%\taccuracy_%\n");
        for &label in &CeLabel::ALL {
            let refs = self.reference_count(label);
            if refs == 0 && total > 0 {
                continue;
            }
            let freq = if total == 0 {
                0.0
            } else {
                100.0 * refs as f64 / total as f64
            };
            let acc = if refs == 0 {
                100.0
            } else {
                100.0 * self.correct_count(label) as f64 / refs as f64
            };
            out.push_str(&format!("{label}\t{refs}\t{freq:.1}\t{acc:.1}\n"));
        }
        out
    }

    /// Machine-readable full matrix (off-diagonal and diagonal).
    pub fn render_tsv(&self) -> String {
        let mut out = String::from("reference\thypothesis\tcount\n");
        for ((r, h), count) in &self.counts {
            let r = CeLabel::from_id(*r).unwrap();
            let h = CeLabel::from_id(*h).unwrap();
            out.push_str(&format!("{r}\t{h}\t{count}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct_has_no_off_diagonal() {
        let mut c = ConfusionReport::new();
        for _ in 0..10 {
            c.record(CeLabel::Fatha, CeLabel::Fatha);
        }
        assert_eq!(c.total_errors(), 0);
        assert!(c.aggregated_errors().is_empty());
        assert_eq!(c.correct_count(CeLabel::Fatha), 10);
    }

    #[test]
    fn single_error_is_all_of_the_errors() {
        let mut c = ConfusionReport::new();
        for _ in 0..9 {
            c.record(CeLabel::Fatha, CeLabel::Fatha);
        }
        c.record(CeLabel::Fatha, CeLabel::Damma);
        let rows = c.aggregated_errors();
        assert_eq!(rows.len(), 1);
        let (a, b, count, pct) = rows[0];
        assert_eq!((a, b, count), (CeLabel::Fatha, CeLabel::Damma, 1));
        assert!((pct - 100.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_errors_aggregate() {
        let mut c = ConfusionReport::new();
        for _ in 0..3 {
            c.record(CeLabel::Fatha, CeLabel::Damma);
        }
        for _ in 0..2 {
            c.record(CeLabel::Damma, CeLabel::Fatha);
        }
        c.record(CeLabel::Kasra, CeLabel::Fatha);
        let rows = c.aggregated_errors();
        assert_eq!(rows[0].0, CeLabel::Fatha);
        assert_eq!(rows[0].1, CeLabel::Damma);
        assert_eq!(rows[0].2, 5);
        let text = c.render_errors_text();
        assert!(text.contains("a ⇔ u\t5"));
    }

    #[test]
    fn row_sums_match_reference_counts() {
        let mut c = ConfusionReport::new();
        c.record(CeLabel::Fatha, CeLabel::Fatha);
        c.record(CeLabel::Fatha, CeLabel::Damma);
        c.record(CeLabel::Virtual, CeLabel::Virtual);
        assert_eq!(c.reference_count(CeLabel::Fatha), 2);
        assert_eq!(c.reference_count(CeLabel::Virtual), 1);
        assert_eq!(c.total(), 3);
        assert_eq!(c.total_errors(), 1);
    }
}
