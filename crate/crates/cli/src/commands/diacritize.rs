//! `harakat diacritize`: runs the two-model pipeline over input text.

use std::path::PathBuf;

use anyhow::Context;
use clap::Args;

use harakat_core::codec::{bw_to_arabic, recompose};
use harakat_core::corpus::{load_corpus, CorpusFormat};

use crate::commands::{load_diacritizer, require_file, write_text};
use crate::config::{parse_format, parse_on_off, pick, FileConfig};
use crate::manifest::RunManifest;
use crate::CommonArgs;

#[derive(Args)]
pub struct DiacritizeArgs {
    /// Directory holding the trained models and resource tables.
    #[arg(long)]
    pub model_dir: PathBuf,

    /// Input text file.
    #[arg(long)]
    pub input: PathBuf,

    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Input layout: plain or tsv. The output mirrors it.
    #[arg(long)]
    pub format: Option<String>,

    /// Unigram post-correction: on (default) or off.
    #[arg(long)]
    pub post_correct: Option<String>,

    #[arg(long)]
    pub annotator: Option<String>,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Renders one diacritized sentence in the script of its source line.
fn render_plain(words: &[harakat_core::codec::DiacritizedWord], arabic_script: bool) -> String {
    words
        .iter()
        .map(|w| {
            let bw = recompose(w);
            if arabic_script {
                bw_to_arabic(&bw).unwrap_or(bw)
            } else {
                bw
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(args: DiacritizeArgs) -> anyhow::Result<()> {
    let file_cfg = FileConfig::load(args.common.config.as_deref())?;
    let format_name = pick(args.format.clone(), file_cfg.format.clone(), "plain".into());
    let format = parse_format(&format_name)?;
    let post_correct_name = pick(
        args.post_correct.clone(),
        file_cfg.post_correct.clone(),
        "on".into(),
    );
    let post_correction = parse_on_off(&post_correct_name)?;
    let annotator_name = pick(
        args.annotator.clone(),
        file_cfg.annotator.clone(),
        "naive".into(),
    );

    require_file(&args.input, "input file")?;
    let diacritizer = load_diacritizer(&args.model_dir, &annotator_name, post_correction)?;
    let corpus = load_corpus(&args.input, format)
        .with_context(|| format!("loading input {}", args.input.display()))?;

    let mut out = String::new();
    match format {
        CorpusFormat::Plain => {
            for record in &corpus {
                let arabic_script = harakat_core::codec::contains_arabic_script(&record.raw);
                let words = diacritizer.diacritize_record(record)?;
                out.push_str(&render_plain(&words, arabic_script));
                out.push('\n');
            }
        }
        CorpusFormat::Tsv => {
            for record in &corpus {
                let arabic_script = harakat_core::codec::contains_arabic_script(&record.raw);
                let words = diacritizer.diacritize_record(record)?;
                for (token, word) in record.tokens.iter().zip(words.iter()) {
                    let bw = recompose(word);
                    let diacritized = if arabic_script {
                        bw_to_arabic(&bw).unwrap_or(bw)
                    } else {
                        bw
                    };
                    let surface = if arabic_script {
                        bw_to_arabic(token.word.bare()).unwrap_or_else(|_| token.word.bare().into())
                    } else {
                        token.word.bare().to_string()
                    };
                    out.push_str(&format!(
                        "{surface}\t{diacritized}\t{}\t{}\t{}\n",
                        token.gold.segmentation.as_deref().unwrap_or(""),
                        token.gold.pos.as_deref().unwrap_or(""),
                        token.gold.gender_number.as_deref().unwrap_or(""),
                    ));
                }
                out.push('\n');
            }
        }
    }

    match &args.output {
        Some(path) => {
            write_text(path, &out)?;
            let mut manifest = RunManifest::new("diacritize");
            manifest.config = crate::config::resolved_map(&[
                ("model_dir", args.model_dir.display().to_string()),
                ("input", args.input.display().to_string()),
                ("format", format_name),
                ("post_correct", post_correct_name),
                ("annotator", annotator_name),
            ]);
            manifest.fingerprint_input(&args.input)?;
            manifest.record_output(path);
            let manifest_path = path.with_extension("manifest.json");
            manifest.write(&manifest_path)?;
        }
        None => print!("{out}"),
    }
    Ok(())
}
