use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use codemix::config::RunConfig;
use codemix::error::{Error, Result};
use codemix::eval::{comparison_grid, comparison_grid_csv, GridRow};
use codemix::pipeline::{self, TrainedSystem};

#[derive(Parser)]
#[command(name = "codemix", version, about = "Sentiment classification for code-mixed tweets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a vectorizer and classifier and write them to --out.
    Train(ConfigArgs),
    /// Score one or more trained model directories on a labelled dataset.
    Eval {
        /// Model directory written by `train`; repeat to compare several.
        #[arg(long = "model_dir", alias = "model-dir", required = true)]
        model_dir: Vec<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        /// Also print the comparison table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Write `{id}\t{label}` predictions for every tweet in a dataset.
    Predict {
        #[arg(long = "model_dir", alias = "model-dir")]
        model_dir: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print one preprocessed line per tweet.
    Preprocess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Train and score all model x document-mode combinations on train/dev.
    Grid {
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

/// `--config FILE` plus one flag per config key; flags win over the file.
#[derive(Args, Default)]
#[command(rename_all = "snake_case")]
struct ConfigArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train: Option<String>,
    #[arg(long)]
    dev: Option<String>,
    #[arg(long)]
    aux: Option<String>,
    #[arg(long)]
    aux_label_column: Option<String>,
    #[arg(long)]
    aux_text_column: Option<String>,
    #[arg(long)]
    aux_lang: Option<String>,
    #[arg(long)]
    lexicon: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    replace_emoji: Option<String>,
    #[arg(long)]
    remove_mentions: Option<String>,
    #[arg(long)]
    remove_non_ascii: Option<String>,
    #[arg(long)]
    replace_urls: Option<String>,
    #[arg(long)]
    collapse_elongation: Option<String>,
    #[arg(long)]
    segment_hashtags: Option<String>,
    #[arg(long)]
    elongation_min_run: Option<String>,
    #[arg(long)]
    doc_mode: Option<String>,
    #[arg(long)]
    word_ngram_min: Option<String>,
    #[arg(long)]
    word_ngram_max: Option<String>,
    #[arg(long)]
    char_ngram_min: Option<String>,
    #[arg(long)]
    char_ngram_max: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    l2_lambda: Option<String>,
    #[arg(long)]
    learning_rate: Option<String>,
    #[arg(long)]
    epochs: Option<String>,
    #[arg(long)]
    batch_size: Option<String>,
    #[arg(long)]
    mnb_alpha: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl ConfigArgs {
    fn overrides(&self) -> [(&'static str, &Option<String>); 27] {
        [
            ("train", &self.train),
            ("dev", &self.dev),
            ("aux", &self.aux),
            ("aux_label_column", &self.aux_label_column),
            ("aux_text_column", &self.aux_text_column),
            ("aux_lang", &self.aux_lang),
            ("lexicon", &self.lexicon),
            ("out", &self.out),
            ("replace_emoji", &self.replace_emoji),
            ("remove_mentions", &self.remove_mentions),
            ("remove_non_ascii", &self.remove_non_ascii),
            ("replace_urls", &self.replace_urls),
            ("collapse_elongation", &self.collapse_elongation),
            ("segment_hashtags", &self.segment_hashtags),
            ("elongation_min_run", &self.elongation_min_run),
            ("doc_mode", &self.doc_mode),
            ("word_ngram_min", &self.word_ngram_min),
            ("word_ngram_max", &self.word_ngram_max),
            ("char_ngram_min", &self.char_ngram_min),
            ("char_ngram_max", &self.char_ngram_max),
            ("kind", &self.kind),
            ("l2_lambda", &self.l2_lambda),
            ("learning_rate", &self.learning_rate),
            ("epochs", &self.epochs),
            ("batch_size", &self.batch_size),
            ("mnb_alpha", &self.mnb_alpha),
            ("seed", &self.seed),
        ]
    }

    /// File, then flags, then the seed environment variable.
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        for (key, value) in self.overrides() {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.apply_env()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => {
            let cfg = args.resolve()?;
            let system = pipeline::cmd_train(&cfg)?;
            let out = cfg.out.as_deref().expect("checked by cmd_train");
            println!(
                "trained {} on {} features; artifacts in {}",
                system.classifier.kind(),
                system.vectorizer.dimension(),
                out.display()
            );
        }
        Command::Eval { model_dir, data, csv } => {
            let dataset = pipeline::load_dataset(&data, "eval")?;
            let mut rows = Vec::new();
            for dir in &model_dir {
                let system = TrainedSystem::load(dir)?;
                let report = system.evaluate(&dataset)?;
                println!("== {} ==", dir.display());
                println!("{report}");
                print!("{}", report.machine_readable());
                rows.push(GridRow::new(
                    system.classifier.kind().display_name(),
                    system.vectorizer.mode().label(),
                    report.macro_f1,
                ));
            }
            if rows.len() > 1 {
                println!();
                print!("{}", comparison_grid(&rows));
                if csv {
                    print!("{}", comparison_grid_csv(&rows));
                }
            }
        }
        Command::Predict { model_dir, data, output } => {
            let n = pipeline::cmd_predict(&model_dir, &data, &output)?;
            eprintln!("wrote {n} predictions to {}", output.display());
        }
        Command::Preprocess { input, output, config } => {
            let cfg = config.resolve()?;
            let lexicon = pipeline::load_lexicon(&cfg)?;
            let dataset = pipeline::load_dataset(&input, "input")?;
            let mut text = String::new();
            for line in pipeline::preprocess_dataset(&dataset, &cfg.pipeline, &lexicon) {
                text.push_str(&line);
                text.push('\n');
            }
            write_output(output.as_deref(), &text)?;
        }
        Command::Grid { csv, config } => {
            let cfg = config.resolve()?;
            let cells = pipeline::run_grid(&cfg)?;
            let rows: Vec<GridRow> = cells.iter().map(|c| c.row()).collect();
            print!("{}", comparison_grid(&rows));
            if csv {
                print!("{}", comparison_grid_csv(&rows));
            }
            print!("{}", pipeline::grid_metrics(&cells));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
