use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use verbaliq::classifier::{classify, Hyper, LinearModel};
use verbaliq::harness::{format_table, records_path, synth::SynthConfig, EvalReport};
use verbaliq::joint::JointConfig;
use verbaliq::pipeline::{self, SolverInputs};
use verbaliq::question::QuestionType;
use verbaliq::senses::TaggerConfig;
use verbaliq::skipgram::TrainConfig;
use verbaliq::solvers::{OffsetKind, PairMode, SolverConfig};

#[derive(Parser)]
#[command(name = "verbaliq", version, about = "Word-sense and relation embeddings for verbal IQ questions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus preparation.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Train single-sense skip-gram embeddings.
    TrainSg {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = 3)]
        negatives: usize,
        #[arg(long, default_value_t = 3)]
        epochs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Relabel corpus tokens with dictionary senses.
    TagSenses {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        emb: PathBuf,
        #[arg(long)]
        dict: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Jointly train word-sense and relation embeddings.
    TrainRk {
        #[arg(long)]
        tagged_corpus: PathBuf,
        #[arg(long)]
        triples: PathBuf,
        /// Dictionary giving sense counts for corruption sampling.
        #[arg(long)]
        dict: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        epochs: usize,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the question-type classifier.
    TrainClassifier {
        #[arg(long)]
        questions: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict the type of a question text.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        question: String,
    },
    /// Answer a question file.
    Solve {
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long)]
        questions: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score an answer file.
    Evaluate {
        #[arg(long)]
        questions: PathBuf,
        #[arg(long)]
        answers: PathBuf,
        #[arg(long)]
        baseline: Option<Baseline>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Solve and score in one step.
    Bench {
        #[command(flatten)]
        models: ModelArgs,
        #[arg(long)]
        questions: PathBuf,
        #[arg(long)]
        baseline: Option<Baseline>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Write a synthetic world with planted structure.
    Synth {
        #[arg(long, default_value_t = 300_000)]
        tokens: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Merge two words into a two-sense pseudoword.
        #[arg(long)]
        pseudoword: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Tokenize text and write vocabulary, idf table and tokens.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_count: usize,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Rg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Offset {
    Plain,
    Abs,
}

#[derive(clap::Args)]
struct ModelArgs {
    #[arg(long)]
    emb: PathBuf,
    #[arg(long)]
    relations: Option<PathBuf>,
    /// Without a classifier, the labelled question types are used.
    #[arg(long)]
    classifier: Option<PathBuf>,
    /// 1: nearest sense pair; 2: offset closest to the relation vector.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    mode: u8,
    #[arg(long, value_enum, default_value_t = Offset::Plain)]
    offset: Offset,
}

impl ModelArgs {
    fn load(&self) -> verbaliq::Result<SolverInputs> {
        if self.mode == 2 && self.relations.is_none() {
            return Err(verbaliq::Error::InvalidConfig(
                "mode 2 needs --relations; use --mode 1 for distance-based answers".into(),
            ));
        }
        SolverInputs::load(&self.emb, self.relations.as_deref(), self.classifier.as_deref())
    }

    fn config(&self) -> SolverConfig {
        SolverConfig {
            mode: if self.mode == 1 { PairMode::Distance } else { PairMode::RelationOffset },
            offset: match self.offset {
                Offset::Plain => OffsetKind::PlainDifference,
                Offset::Abs => OffsetKind::ElementwiseAbsolute,
            },
        }
    }
}

fn print_reports(reports: &[EvalReport], path: &std::path::Path) {
    print!("{}", format_table(reports));
    if let Some(r) = reports.first() {
        println!(
            "fallbacks {} unanswered {} skipped candidates {}",
            r.fallbacks, r.unanswered, r.skipped_candidates
        );
    }
    println!("report {} and {}", path.display(), records_path(path).display());
}

fn run(cli: Cli) -> verbaliq::Result<()> {
    match cli.command {
        Command::Corpus {
            command: CorpusCommand::Build { input, min_count, window, out },
        } => {
            let s = pipeline::build_corpus(&input, min_count, window, &out)?;
            println!(
                "tokens {} kept {} dropped {} vocabulary {} windows {}",
                s.tokens, s.kept, s.dropped, s.vocabulary, s.windows
            );
        }
        Command::TrainSg { corpus, vocab, dim, window, negatives, epochs, seed, out } => {
            let config = TrainConfig { dim, window, negatives, epochs, seed, ..Default::default() };
            let s = pipeline::train_sg_files(&corpus, &vocab, &config, &out)?;
            println!("pairs {} final epoch loss {:.6}", s.pairs, s.final_epoch_loss);
        }
        Command::TagSenses { corpus, emb, dict, seed, window, out } => {
            let config = TaggerConfig { window, seed, ..Default::default() };
            let d = pipeline::tag_senses_files(&corpus, &emb, &dict, &config, &out)?;
            println!(
                "clustered {} rare {} unmatched {} absent {} empty clusters {} empty contexts {} unknown tokens {} missing vectors {}",
                d.clustered_words.len(),
                d.rare_words.len(),
                d.unmatched_words.len(),
                d.absent_words.len(),
                d.empty_cluster_words.len(),
                d.empty_contexts,
                d.context.unknown_tokens,
                d.context.missing_vectors
            );
        }
        Command::TrainRk { tagged_corpus, triples, dict, gamma, alpha, epochs, dim, window, seed, out } => {
            let config = JointConfig {
                skipgram: TrainConfig { dim, window, epochs, seed, ..Default::default() },
                gamma,
                alpha,
                ..Default::default()
            };
            let s = pipeline::train_rk_files(&tagged_corpus, &triples, dict.as_deref(), &config, &out)?;
            println!(
                "units {} triples accepted {} rejected {} (unknown {} self-loop {} duplicate {}) relation batches {} pairs {}",
                s.units,
                s.triples.accepted,
                s.triples.rejected(),
                s.triples.unknown_key,
                s.triples.self_loop,
                s.triples.duplicate,
                s.stats.relation_batches,
                s.stats.skipgram.pairs
            );
        }
        Command::TrainClassifier { questions, seed, out } => {
            let m = pipeline::train_classifier_file(&questions, Hyper { seed, ..Default::default() }, &out)?;
            let degenerate: Vec<String> = m.degenerate_categories().iter().map(|q| q.to_string()).collect();
            println!("examples {} terms {} degenerate [{}]", m.training_examples, m.idf.len(), degenerate.join(", "));
        }
        Command::Classify { model, question } => {
            let model = LinearModel::load(&model)?;
            let p = classify(&question, &model)?;
            println!("{}", p.qtype);
            for (q, s) in QuestionType::ALL.iter().zip(p.scores) {
                println!("  {:<15}{s:.6}", q.name());
            }
        }
        Command::Solve { models, questions, seed, out } => {
            let inputs = models.load()?;
            let answers = pipeline::solve_files(&inputs, &questions, models.config(), seed, &out)?;
            let fallbacks = answers.iter().filter(|a| a.fallback).count();
            let skipped: usize = answers.iter().map(|a| a.skipped).sum();
            println!("answered {} fallbacks {fallbacks} skipped candidates {skipped}", answers.len());
        }
        Command::Evaluate { questions, answers, baseline, seed, report } => {
            let reports = pipeline::evaluate_files(&questions, &answers, baseline.is_some(), seed, &report)?;
            print_reports(&reports, &report);
        }
        Command::Bench { models, questions, baseline, seed, report } => {
            let inputs = models.load()?;
            let reports = pipeline::bench_files(&inputs, &questions, models.config(), baseline.is_some(), seed, &report)?;
            print_reports(&reports, &report);
        }
        Command::Synth { tokens, seed, pseudoword, out } => {
            let s = pipeline::write_synthetic_world(SynthConfig { tokens, seed, pseudoword, ..Default::default() }, &out)?;
            println!("tokens {} triples {} questions {}", s.tokens, s.triples, s.questions);
            for f in &s.files {
                println!("  {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
