//! `harakat dump-features` / `dump-codec`: inspection dumps.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Args;

use harakat_core::codec;
use harakat_core::corpus::{prepare_corpus, PriorTable};
use harakat_core::features::ce::{build_sukun_list, CeEncoder, CeSelector, CeVocabs, SUKUN_LIST_THRESHOLD};
use harakat_core::features::cw::{CwEncoder, CwSelector, CwVocab};

use crate::commands::{create_annotator, load_corpus_checked, write_text};
use crate::config::{parse_format, pick, FileConfig};
use crate::{usage_error, CommonArgs};

#[derive(Args)]
pub struct DumpFeaturesArgs {
    /// cw (per-character rows) or ce (per-word rows).
    #[arg(long, value_parser = ["cw", "ce"])]
    pub mode: String,

    /// Corpus to encode; vocabularies, priors, and lists are built from
    /// this same corpus (inspection semantics).
    #[arg(long)]
    pub corpus: PathBuf,

    #[arg(long)]
    pub format: Option<String>,

    #[arg(long)]
    pub annotator: Option<String>,

    #[arg(long)]
    pub feature_set: Option<String>,

    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct DumpCodecArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run_features(args: DumpFeaturesArgs) -> anyhow::Result<()> {
    let file_cfg = FileConfig::load(args.common.config.as_deref())?;
    let format = parse_format(&pick(
        args.format.clone(),
        file_cfg.format.clone(),
        "plain".into(),
    ))?;
    let annotator_name = pick(
        args.annotator.clone(),
        file_cfg.annotator.clone(),
        "naive".into(),
    );

    let mut corpus = load_corpus_checked(&args.corpus, format)?;
    let annotator = create_annotator(&annotator_name)?;
    let annotations = prepare_corpus(&mut corpus, &*annotator)?;

    let out = match args.mode.as_str() {
        "cw" => {
            let feature_set = pick(
                args.feature_set.clone(),
                file_cfg.feature_set.clone(),
                "all".into(),
            );
            let Some(selector) = CwSelector::from_name(&feature_set) else {
                return usage_error(format!("unknown cw feature set {feature_set:?}"));
            };
            let vocab = CwVocab::build(&corpus);
            let priors = PriorTable::build_from_annotations(&corpus, &annotations);
            let encoder = CwEncoder::new(&vocab, &priors, selector);
            let mut out = String::new();
            for (record, annots) in corpus.iter().zip(annotations.iter()) {
                let examples = encoder.encode(record, annots);
                out.push_str(&encoder.dump_tsv(&examples));
            }
            out
        }
        _ => {
            let feature_set = pick(
                args.feature_set.clone(),
                file_cfg.feature_set.clone(),
                "all-misc".into(),
            );
            let Some(selector) = CeSelector::from_name(&feature_set) else {
                return usage_error(format!("unknown ce feature set {feature_set:?}"));
            };
            let sukun_words = build_sukun_list(&corpus, SUKUN_LIST_THRESHOLD);
            let gazetteer = BTreeSet::new();
            let rows: Vec<_> = corpus
                .iter()
                .zip(annotations.iter())
                .flat_map(|(record, annots)| {
                    record.tokens.iter().zip(annots.iter()).map(|(t, a)| {
                        harakat_core::features::ce::extract_ce_row(
                            t.word.bare(),
                            a,
                            &sukun_words,
                            &gazetteer,
                        )
                    })
                })
                .collect();
            let vocabs = CeVocabs::build(rows.iter());
            let encoder = CeEncoder {
                vocabs: &vocabs,
                selector,
                sukun_words: &sukun_words,
                gazetteer: &gazetteer,
            };
            let mut out = String::new();
            for (record, annots) in corpus.iter().zip(annotations.iter()) {
                out.push_str(&encoder.dump_tsv(record, annots));
                out.push('\n');
            }
            out
        }
    };

    match &args.output {
        Some(path) => write_text(path, &out)?,
        None => print!("{out}"),
    }
    Ok(())
}

pub fn run_codec(args: DumpCodecArgs) -> anyhow::Result<()> {
    let table = codec::dump_tsv();
    match &args.output {
        Some(path) => write_text(path, &table)?,
        None => print!("{table}"),
    }
    Ok(())
}
