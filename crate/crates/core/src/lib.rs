//! Recovery of Arabic diacritics with two feature-rich biLSTM sequence
//! models: a character-level model for core-word marks and a word-level
//! model for case endings.
//!
//! The crate is organized as a pipeline:
//!
//! - [`codec`] — Buckwalter transliteration and mark decomposition
//! - [`morpho`] — pluggable segmentation / POS annotators
//! - [`corpus`] — corpus loading, lexicon, and prior tables
//! - [`features`] — per-character and per-word feature extraction
//! - [`nn`] — the trainable embedding + biLSTM + dense engine
//! - [`postcorrect`] — unigram-LM post-correction
//! - [`eval`] — relaxed WER/DER/CEER scoring and confusion reports
//! - [`pipeline`] — end-to-end diacritization with trained models

pub mod codec;
pub mod container;
pub mod corpus;
pub mod eval;
pub mod features;
pub mod morpho;
pub mod nn;
pub mod pipeline;
pub mod postcorrect;
