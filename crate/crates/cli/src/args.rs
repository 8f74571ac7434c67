use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gectag_core::TagsetKind;

#[derive(Debug, Parser)]
#[command(name = "gectag", version, about = "Sequence-tagging grammatical error correction tools")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Recorded in the report; every command is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory holding the dictionary, lexicon and verb-form files.
    #[arg(long, global = true, env = gectag_core::data::DATA_DIR_ENV)]
    pub data_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    pub dictionary: Option<PathBuf>,

    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,

    #[arg(long, global = true)]
    pub verb_forms: Option<PathBuf>,

    /// Write the JSON report here instead of stdout (or stderr when the
    /// command's output goes to stdout).
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive tags from a parallel corpus or M2 file and write labeled JSONL.
    Preprocess(PreprocessArgs),
    /// Apply the tags of a labeled JSONL file.
    Apply(ApplyArgs),
    /// Select tags from precomputed distributions and apply them.
    Infer(InferArgs),
    /// Score every inference-tweak setting on a development set.
    Tune(TuneArgs),
    /// Span-level majority vote over system outputs.
    Ensemble(EnsembleArgs),
    /// Span-based precision, recall and F-beta against M2 gold edits.
    Score(ScoreArgs),
    /// Tag histogram and round-trip check of labeled JSONL files.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(long, value_parser = parse_tagset, default_value = "spell+inflect")]
    pub tagset: TagsetKind,

    /// Tokenised source sentences, one per line.
    #[arg(long, requires = "target", conflicts_with = "m2")]
    pub source: Option<PathBuf>,

    /// Tokenised target sentences aligned with --source.
    #[arg(long, requires = "source")]
    pub target: Option<PathBuf>,

    /// M2 file whose gold edits produce the targets.
    #[arg(long, required_unless_present = "source")]
    pub m2: Option<PathBuf>,

    /// Annotator whose edits to apply (default: first listed).
    #[arg(long, requires = "m2")]
    pub annotator: Option<u32>,

    #[arg(long, default_value_t = gectag_core::preprocess::DEFAULT_MAX_ROUNDS)]
    pub max_rounds: usize,

    /// Also write the tag vocabulary built from the output.
    #[arg(long)]
    pub vocab_out: Option<PathBuf>,

    #[arg(long, default_value_t = 5000)]
    pub vocab_size: usize,

    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TweakArgs {
    /// Confidence bias added to $KEEP.
    #[arg(long, default_value_t = 0.0)]
    pub cb: f64,
    /// Minimum error probability.
    #[arg(long, default_value_t = 0.0)]
    pub mep: f64,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[arg(long)]
    pub distributions: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[command(flatten)]
    pub tweaks: TweakArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    /// `SRC M2` or just `M2`; with SRC, its lines must match the M2 sources.
    #[arg(long, num_args = 1..=2, required = true, value_names = ["SRC", "M2"])]
    pub dev: Vec<PathBuf>,
    #[arg(long)]
    pub distributions: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// CSV of every grid cell.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long, num_args = 2.., required = true)]
    pub hyp: Vec<PathBuf>,
    /// Votes an edit needs (default: systems − 1).
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Comma-separated categories to keep in the per-category table.
    #[arg(long, value_delimiter = ',')]
    pub categories: Vec<String>,
    /// Per-category CSV.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(short, long, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
}

fn parse_tagset(s: &str) -> Result<TagsetKind, String> {
    s.parse().map_err(|e: gectag_core::Error| e.to_string())
}
