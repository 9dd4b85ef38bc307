//! `harakat evaluate`: scores a hypothesis corpus (or a model run)
//! against a reference, with an optional ablation sweep.

use std::path::PathBuf;

use clap::Args;

use harakat_core::corpus::{prepare_corpus, SentenceRecord};
use harakat_core::eval::{confusion, score, ScoreMode};
use harakat_core::features::ce::{CeEncoder, CeSelector};
use harakat_core::nn::EncodedSeq;
use harakat_core::pipeline::CeModelFile;

use crate::commands::{create_annotator, load_corpus_checked, load_diacritizer, write_text};
use crate::config::{parse_format, parse_on_off, pick, FileConfig};
use crate::manifest::RunManifest;
use crate::{usage_error, CommonArgs};

#[derive(Args)]
pub struct EvaluateArgs {
    /// Reference corpus (diacritized).
    #[arg(long = "ref", value_name = "REF")]
    pub reference: PathBuf,

    /// Hypothesis corpus to score.
    #[arg(long)]
    pub hyp: Option<PathBuf>,

    /// Model directory: diacritize the reference's bare text internally,
    /// then score.
    #[arg(long)]
    pub model_dir: Option<PathBuf>,

    /// cw, ce, or full.
    #[arg(long, default_value = "full")]
    pub mode: String,

    /// Corpus layout of ref/hyp files.
    #[arg(long)]
    pub format: Option<String>,

    #[arg(long)]
    pub annotator: Option<String>,

    #[arg(long)]
    pub post_correct: Option<String>,

    /// Evaluate every `ce-<feature-set>.model` in --model-dir and print
    /// one CEER row per setup.
    #[arg(long, default_value_t = false)]
    pub ablation_sweep: bool,

    /// Directory for report files (text + TSV); stdout only when omitted.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    #[command(flatten)]
    pub common: CommonArgs,
}

fn ceer_for_model(
    model: &CeModelFile,
    reference: &[SentenceRecord],
    annotations: &[Vec<harakat_core::morpho::MorphoAnnotation>],
    sukun_words: &std::collections::BTreeSet<String>,
    gazetteer: &std::collections::BTreeSet<String>,
) -> anyhow::Result<f64> {
    let encoder = CeEncoder {
        vocabs: &model.vocabs,
        selector: model.selector,
        sukun_words,
        gazetteer,
    };
    let mut errors = 0u64;
    let mut total = 0u64;
    for (record, annots) in reference.iter().zip(annotations.iter()) {
        let seq: EncodedSeq = encoder.encode(record, annots);
        let preds = model.model.predict(&seq)?;
        for (t, &pred) in preds.iter().enumerate() {
            total += 1;
            if seq.labels()[t] != Some(pred) {
                errors += 1;
            }
        }
    }
    Ok(if total == 0 {
        0.0
    } else {
        errors as f64 / total as f64
    })
}

pub fn run(args: EvaluateArgs) -> anyhow::Result<()> {
    let file_cfg = FileConfig::load(args.common.config.as_deref())?;
    let format_name = pick(args.format.clone(), file_cfg.format.clone(), "plain".into());
    let format = parse_format(&format_name)?;
    let annotator_name = pick(
        args.annotator.clone(),
        file_cfg.annotator.clone(),
        "naive".into(),
    );
    let Some(mode) = ScoreMode::from_name(&args.mode) else {
        return usage_error(format!("unknown mode {:?} (cw, ce, full)", args.mode));
    };

    let mut reference = load_corpus_checked(&args.reference, format)?;
    let annotator = create_annotator(&annotator_name)?;
    let ref_annots = prepare_corpus(&mut reference, &*annotator)?;

    if args.ablation_sweep {
        let Some(model_dir) = &args.model_dir else {
            return usage_error("--ablation-sweep needs --model-dir");
        };
        let sukun = harakat_core::pipeline::load_word_set(&model_dir.join(super::SUKUN_FILE))
            .unwrap_or_default();
        let gazetteer =
            harakat_core::pipeline::load_word_set(&model_dir.join(super::GAZETTEER_FILE))
                .unwrap_or_default();
        let mut table = String::from("setup\tceer_%\n");
        for selector in CeSelector::ALL_SETUPS {
            let path = model_dir.join(format!("ce-{}.model", selector.name()));
            if !path.is_file() {
                eprintln!("skipping {}: no model file", selector.name());
                continue;
            }
            let model = CeModelFile::load(&path)?;
            let ceer = ceer_for_model(&model, &reference, &ref_annots, &sukun, &gazetteer)?;
            table.push_str(&format!("{}\t{:.2}\n", selector.name(), 100.0 * ceer));
        }
        print!("{table}");
        if let Some(out_dir) = &args.out_dir {
            std::fs::create_dir_all(out_dir)?;
            write_text(&out_dir.join("ablation.tsv"), &table)?;
        }
        return Ok(());
    }

    let hypothesis: Vec<SentenceRecord> = match (&args.hyp, &args.model_dir) {
        (Some(hyp_path), None) => {
            let mut hyp = load_corpus_checked(hyp_path, format)?;
            prepare_corpus(&mut hyp, &*annotator)?;
            hyp
        }
        (None, Some(model_dir)) => {
            let post_correct_name = pick(
                args.post_correct.clone(),
                file_cfg.post_correct.clone(),
                "on".into(),
            );
            let diacritizer =
                load_diacritizer(model_dir, &annotator_name, parse_on_off(&post_correct_name)?)?;
            diacritizer.diacritize_corpus(&reference)?
        }
        _ => return usage_error("give exactly one of --hyp or --model-dir"),
    };

    let report = score(&reference, &hypothesis, mode)?;
    print!("{}", report.render_text());

    let confusion_report = if mode == ScoreMode::Ce {
        let c = confusion(&reference, &hypothesis)?;
        print!("\n{}", c.render_errors_text());
        Some(c)
    } else {
        None
    };

    if let Some(out_dir) = &args.out_dir {
        std::fs::create_dir_all(out_dir)?;
        write_text(&out_dir.join("score.txt"), &report.render_text())?;
        write_text(&out_dir.join("score.tsv"), &report.render_tsv())?;
        if let Some(c) = &confusion_report {
            write_text(&out_dir.join("confusion.txt"), &c.render_errors_text())?;
            write_text(&out_dir.join("confusion.tsv"), &c.render_tsv())?;
        }
        let mut manifest = RunManifest::new("evaluate");
        manifest.config = crate::config::resolved_map(&[
            ("ref", args.reference.display().to_string()),
            (
                "hyp",
                args.hyp
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
            (
                "model_dir",
                args.model_dir
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
            ("mode", args.mode.clone()),
            ("format", format_name),
            ("annotator", annotator_name),
        ]);
        manifest.fingerprint_input(&args.reference)?;
        if let Some(hyp) = &args.hyp {
            manifest.fingerprint_input(hyp)?;
        }
        manifest.record_output(&out_dir.join("score.txt"));
        manifest.record_output(&out_dir.join("score.tsv"));
        manifest.write(&out_dir.join("manifest-evaluate.json"))?;
    }
    Ok(())
}
