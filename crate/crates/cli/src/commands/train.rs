//! `harakat train`: builds the resource tables and trains one model.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;

use harakat_core::corpus::{prepare_corpus, split_validation};
use harakat_core::features::ce::{load_ne_gazetteer, CeSelector};
use harakat_core::features::cw::CwSelector;
use harakat_core::nn::TrainConfig;
use harakat_core::pipeline::{
    save_word_set, train_ce_model, train_cw_model, TrainedResources,
};

use crate::commands::{
    create_annotator, load_corpus_checked, write_text, CE_MODEL_FILE, CW_MODEL_FILE,
    GAZETTEER_FILE, LEXICON_FILE, PRIORS_FILE, SUKUN_FILE,
};
use crate::config::{parse_format, pick, pick_opt, resolve_resource, FileConfig};
use crate::manifest::RunManifest;
use crate::{usage_error, CommonArgs};

#[derive(Args)]
pub struct TrainArgs {
    /// Which model to train.
    #[arg(long, value_parser = ["cw", "ce"])]
    pub mode: String,

    /// Training corpus path.
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Corpus layout: plain (sentence per line) or tsv (token per row).
    #[arg(long)]
    pub format: Option<String>,

    /// Output directory for the model and resource tables.
    #[arg(long, default_value = "model")]
    pub out_dir: PathBuf,

    /// Model filename; defaults to cw.model / ce.model.
    #[arg(long)]
    pub model_name: Option<String>,

    /// Morphological annotator (see `--annotator` values in the README).
    #[arg(long)]
    pub annotator: Option<String>,

    /// Feature setup. CW: char, char-seg, char-prior, all.
    /// CE: word, word-surface, word-POS, word-morph,
    /// word-surface-POS-morph, all-misc.
    #[arg(long)]
    pub feature_set: Option<String>,

    /// Named-entity gazetteer (one bare form per line).
    #[arg(long)]
    pub gazetteer: Option<PathBuf>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub learning_rate: Option<f64>,

    #[arg(long)]
    pub batch_size: Option<usize>,

    #[arg(long)]
    pub patience: Option<usize>,

    #[arg(long)]
    pub max_epochs: Option<usize>,

    /// Fraction of sentences held out for early stopping.
    #[arg(long)]
    pub validation_fraction: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: TrainArgs) -> anyhow::Result<()> {
    let file_cfg = FileConfig::load(args.common.config.as_deref())?;

    let Some(corpus_path) = pick_opt(args.corpus.clone(), file_cfg.corpus.clone()) else {
        return usage_error("no corpus given (use --corpus or the config file)");
    };
    let format_name = pick(args.format.clone(), file_cfg.format.clone(), "plain".into());
    let format = parse_format(&format_name)?;
    let annotator_name = pick(
        args.annotator.clone(),
        file_cfg.annotator.clone(),
        "naive".into(),
    );
    let seed = pick(args.seed, file_cfg.seed, 0);
    let fraction = pick(args.validation_fraction, file_cfg.validation_fraction, 0.05);
    let defaults = TrainConfig::default();
    let train_config = TrainConfig {
        learning_rate: pick(args.learning_rate, file_cfg.learning_rate, defaults.learning_rate),
        batch_size: pick(args.batch_size, file_cfg.batch_size, defaults.batch_size),
        patience: pick(args.patience, file_cfg.patience, defaults.patience),
        max_epochs: pick(args.max_epochs, file_cfg.max_epochs, defaults.max_epochs),
        seed,
    };
    let feature_set = pick(
        args.feature_set.clone(),
        file_cfg.feature_set.clone(),
        match args.mode.as_str() {
            "cw" => "all".to_string(),
            _ => "all-misc".to_string(),
        },
    );
    let gazetteer_path = pick_opt(args.gazetteer.clone(), file_cfg.gazetteer.clone())
        .map(|p| resolve_resource(&p));

    // validate everything before writing any output
    let corpus = load_corpus_checked(&corpus_path, format)?;
    if let Some(path) = &gazetteer_path {
        if !path.is_file() {
            return usage_error(format!("gazetteer not found: {}", path.display()));
        }
    }
    let annotator = create_annotator(&annotator_name)?;

    let gazetteer: BTreeSet<String> = match &gazetteer_path {
        Some(path) => load_ne_gazetteer(path)
            .with_context(|| format!("loading gazetteer {}", path.display()))?,
        None => BTreeSet::new(),
    };

    let total = corpus.len();
    let (mut train_set, mut val_set) = split_validation(corpus, fraction, seed)?;
    let train_annots = prepare_corpus(&mut train_set, &*annotator)?;
    let val_annots = prepare_corpus(&mut val_set, &*annotator)?;
    eprintln!(
        "corpus: {total} sentences ({} train / {} validation)",
        train_set.len(),
        val_set.len()
    );

    let resources = TrainedResources::build(&train_set, &train_annots);

    let mut fingerprints = BTreeMap::new();
    fingerprints.insert(
        corpus_path.display().to_string(),
        harakat_core::pipeline::fingerprint_file(&corpus_path)?,
    );
    if let Some(path) = &gazetteer_path {
        fingerprints.insert(
            path.display().to_string(),
            harakat_core::pipeline::fingerprint_file(path)?,
        );
    }

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let default_model_name = match args.mode.as_str() {
        "cw" => CW_MODEL_FILE,
        _ => CE_MODEL_FILE,
    };
    let model_name = args.model_name.clone().unwrap_or_else(|| default_model_name.to_string());
    let model_path = args.out_dir.join(&model_name);
    let history_path = args.out_dir.join(format!("history-{}.log", args.mode));

    let history = match args.mode.as_str() {
        "cw" => {
            let Some(selector) = CwSelector::from_name(&feature_set) else {
                return usage_error(format!(
                    "unknown cw feature set {feature_set:?} (char, char-seg, char-prior, all)"
                ));
            };
            let (model_file, history) = train_cw_model(
                &train_set,
                &train_annots,
                &val_set,
                &val_annots,
                &resources.priors,
                selector,
                train_config.clone(),
                fingerprints.clone(),
            )?;
            model_file.save(&model_path)?;
            history
        }
        _ => {
            let Some(selector) = CeSelector::from_name(&feature_set) else {
                return usage_error(format!(
                    "unknown ce feature set {feature_set:?} (word, word-surface, word-POS, \
                     word-morph, word-surface-POS-morph, all-misc)"
                ));
            };
            let (model_file, history) = train_ce_model(
                &train_set,
                &train_annots,
                &val_set,
                &val_annots,
                &resources.sukun_words,
                &gazetteer,
                selector,
                train_config.clone(),
                fingerprints.clone(),
            )?;
            model_file.save(&model_path)?;
            history
        }
    };

    resources.lexicon.save(&args.out_dir.join(LEXICON_FILE))?;
    resources.priors.save(&args.out_dir.join(PRIORS_FILE))?;
    resources.save_sukun(&args.out_dir.join(SUKUN_FILE))?;
    save_word_set(&args.out_dir.join(GAZETTEER_FILE), "gazetteer", &gazetteer)?;
    write_text(&history_path, &history.render())?;

    let mut manifest = RunManifest::new("train");
    manifest.config = crate::config::resolved_map(&[
        ("mode", args.mode.clone()),
        ("corpus", corpus_path.display().to_string()),
        ("format", format_name),
        ("annotator", annotator_name),
        ("feature_set", feature_set),
        ("validation_fraction", fraction.to_string()),
        ("learning_rate", train_config.learning_rate.to_string()),
        ("batch_size", train_config.batch_size.to_string()),
        ("patience", train_config.patience.to_string()),
        ("max_epochs", train_config.max_epochs.to_string()),
        (
            "gazetteer",
            gazetteer_path
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        ),
    ]);
    manifest.seeds.insert("run".into(), seed);
    manifest.input_fingerprints = fingerprints;
    for name in [
        model_name.as_str(),
        LEXICON_FILE,
        PRIORS_FILE,
        SUKUN_FILE,
        GAZETTEER_FILE,
    ] {
        manifest.record_output(&args.out_dir.join(name));
    }
    manifest.record_output(&history_path);
    manifest.write(&args.out_dir.join(format!("manifest-train-{}.json", args.mode)))?;

    eprintln!(
        "trained {} model: best epoch {} of {}, model at {}",
        args.mode,
        history.best_epoch,
        history.epochs.len(),
        model_path.display()
    );
    Ok(())
}
