//! `harakat report`: case-ending confusion breakdown and per-label
//! distribution/accuracy tables.

use std::path::PathBuf;

use clap::Args;

use harakat_core::corpus::prepare_corpus;
use harakat_core::eval::confusion;

use crate::commands::{create_annotator, load_corpus_checked, write_text};
use crate::config::{parse_format, pick, FileConfig};
use crate::manifest::RunManifest;
use crate::CommonArgs;

#[derive(Args)]
pub struct ReportArgs {
    /// Reference corpus (diacritized).
    #[arg(long = "ref", value_name = "REF")]
    pub reference: PathBuf,

    /// Hypothesis corpus.
    #[arg(long)]
    pub hyp: PathBuf,

    #[arg(long)]
    pub format: Option<String>,

    #[arg(long)]
    pub annotator: Option<String>,

    /// Directory for TSV reports; stdout only when omitted.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: ReportArgs) -> anyhow::Result<()> {
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

    let mut reference = load_corpus_checked(&args.reference, format)?;
    let mut hypothesis = load_corpus_checked(&args.hyp, format)?;
    let annotator = create_annotator(&annotator_name)?;
    prepare_corpus(&mut reference, &*annotator)?;
    prepare_corpus(&mut hypothesis, &*annotator)?;

    let report = confusion(&reference, &hypothesis)?;
    println!("# case-ending errors (aggregated pairs)");
    print!("{}", report.render_errors_text());
    println!("\n# case-ending distribution and accuracy");
    print!("{}", report.render_distribution_text());

    if let Some(out_dir) = &args.out_dir {
        std::fs::create_dir_all(out_dir)?;
        write_text(&out_dir.join("confusion-errors.txt"), &report.render_errors_text())?;
        write_text(
            &out_dir.join("confusion-distribution.txt"),
            &report.render_distribution_text(),
        )?;
        write_text(&out_dir.join("confusion.tsv"), &report.render_tsv())?;
        let mut manifest = RunManifest::new("report");
        manifest.config = crate::config::resolved_map(&[
            ("ref", args.reference.display().to_string()),
            ("hyp", args.hyp.display().to_string()),
        ]);
        manifest.fingerprint_input(&args.reference)?;
        manifest.fingerprint_input(&args.hyp)?;
        for name in ["confusion-errors.txt", "confusion-distribution.txt", "confusion.tsv"] {
            manifest.record_output(&out_dir.join(name));
        }
        manifest.write(&out_dir.join("manifest-report.json"))?;
    }
    Ok(())
}
