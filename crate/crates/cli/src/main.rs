//! `voypah` — read Voynich-script corpora as Middle Persian.
//!
//! Exit codes: 0 success; 1 load/processing errors or failing firm golden
//! cases; 2 malformed golden-case file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use voypah_core::ingest::{self, Corpus, EvaMapping, Segmenter};
use voypah_core::lexicon::Lexicon;
use voypah_core::model::ScriptModel;
use voypah_core::report::{self, CommandOutput, GoldenCase, OutputFormat, RunConfig};
use voypah_core::{data, Result};

#[derive(Parser)]
#[command(
    name = "voypah",
    version,
    about = "Voynich-script to Middle Persian (Pahlavi) transliteration toolkit",
    after_help = "Bundled defaults are used for any of --model, --lexicon, --corpus, --golden\nthat are not given."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Script model TSV.
    #[arg(long, global = true, value_name = "PATH")]
    model: Option<PathBuf>,

    /// Lexicon TSV.
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,

    /// Corpus in native notation (or EVA with --eva).
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,

    /// Golden-case TSV.
    #[arg(long, global = true, value_name = "PATH")]
    golden: Option<PathBuf>,

    /// Cap on choice vectors drawn per token lattice.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: usize,

    /// Maximum skeleton edit distance for lexicon matches.
    #[arg(long, global = true, default_value_t = 2)]
    max_edit: u32,

    /// Matched readings reported per token by `match`.
    #[arg(long, global = true, default_value_t = 5)]
    top: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Split tokens at medial separator glyphs before reading them.
    #[arg(long, global = true)]
    split_on_separator: bool,

    /// Treat the corpus as an EVA transcription and import it.
    #[arg(long, global = true)]
    eva: bool,

    /// EVA-to-native mapping TSV (defaults to the bundled example mapping).
    #[arg(long, global = true, value_name = "PATH")]
    eva_mapping: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Best reading per corpus token.
    Translit,
    /// Ranked lexicon matches per corpus token.
    Match,
    /// Corpus counts: lines, tokens, units, glyph frequencies.
    Stats,
    /// Evaluate the golden transliteration cases.
    Golden,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = RunConfig {
        budget: cli.budget,
        max_edit: cli.max_edit,
        top: cli.top,
        format: match cli.format {
            Format::Tsv => OutputFormat::Tsv,
            Format::Jsonl => OutputFormat::Jsonl,
        },
        split_on_separator: cli.split_on_separator,
    };
    let model = load_model(cli)?;
    match cli.command {
        Command::Translit => {
            let corpus = load_corpus(cli, &model)?;
            emit(report::cmd_translit(&corpus, &model, &cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Match => {
            let corpus = load_corpus(cli, &model)?;
            let lexicon = load_lexicon(cli)?;
            emit(report::cmd_match(&corpus, &model, &lexicon, &cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats => {
            let corpus = load_corpus(cli, &model)?;
            emit(report::cmd_stats(&corpus, &model, &cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Golden => {
            // Golden-file problems (unreadable, malformed, unparseable
            // tokens) exit 2; failing firm cases exit 1.
            let cases = match load_golden(cli) {
                Ok(cases) => cases,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
            };
            let lexicon = load_lexicon(cli)?;
            match report::cmd_golden(&cases, &model, &lexicon, &cfg) {
                Ok(outcome) => {
                    let tier_a_ok = outcome.tier_a_ok();
                    emit(outcome.output);
                    if tier_a_ok {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(1))
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
    }
}

fn emit(output: CommandOutput) {
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    print!("{}", output.stdout);
}

fn load_model(cli: &Cli) -> Result<ScriptModel> {
    match &cli.model {
        Some(path) => ScriptModel::load(path),
        None => Ok(ScriptModel::bundled().clone()),
    }
}

fn load_lexicon(cli: &Cli) -> Result<Lexicon> {
    match &cli.lexicon {
        Some(path) => Lexicon::load(path),
        None => Ok(Lexicon::bundled().clone()),
    }
}

fn load_golden(cli: &Cli) -> Result<Vec<GoldenCase>> {
    match &cli.golden {
        Some(path) => report::load_golden(path),
        None => Ok(report::bundled_golden().to_vec()),
    }
}

fn load_corpus(cli: &Cli, model: &ScriptModel) -> Result<Corpus> {
    let seg = Segmenter::from_model(model);
    if cli.eva {
        let mapping = match &cli.eva_mapping {
            Some(path) => EvaMapping::load(path)?,
            None => EvaMapping::parse(data::EVA_MAPPING, "builtin:eva_mapping.tsv")?,
        };
        let text = match &cli.corpus {
            Some(path) => read(path)?,
            None => data::SAMPLE_CORPUS.to_string(),
        };
        let (corpus, diagnostics) = ingest::import_eva(&text, &mapping, &seg)?;
        for d in diagnostics {
            eprintln!("warning: {d}");
        }
        Ok(corpus)
    } else {
        match &cli.corpus {
            Some(path) => ingest::load_corpus(path, &seg),
            None => ingest::parse_corpus_with(data::SAMPLE_CORPUS, &seg),
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| voypah_core::Error::Io {
        path: path.display().to_string(),
        source,
    })
}
