//! File-to-file stages behind the command-line tool.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::classifier::{train_ovr, Hyper, LinearModel};
use crate::corpus::{build_vocabulary, read_corpus, window_tfidf, write_tokens, Vocabulary};
use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::harness::synth::{SynthConfig, SyntheticWorld, TABLE2_COUNTS};
use crate::harness::{self, templates, AnswerRecord, EvalReport};
use crate::joint::{load_triples, save_triples, train_joint, JointConfig, JointStats, RelationModel, TripleReport};
use crate::question::{load_questions, save_questions};
use crate::senses::{relabel_corpus, SenseInventory, TagDiagnostics, TaggedCorpus, TaggerConfig};
use crate::skipgram::{train_skipgram, TrainConfig, TrainStats};
use crate::solvers::{Models, SolverConfig};

pub const VOCAB_FILE: &str = "vocab.tsv";
pub const IDF_FILE: &str = "idf.tsv";
pub const TOKENS_FILE: &str = "tokens.txt";
pub const TAGGED_FILE: &str = "tagged.txt";
pub const CLUSTERS_FILE: &str = "clusters.jsonl";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.json";
pub const EMBEDDINGS_FILE: &str = "embeddings.txt";
pub const RELATIONS_FILE: &str = "relations.txt";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CORPUS_FILE: &str = "corpus.txt";
pub const TRIPLES_FILE: &str = "triples.tsv";
pub const DICTIONARY_FILE: &str = "dictionary.jsonl";
pub const QUESTIONS_FILE: &str = "questions.jsonl";
pub const CLASSIFIER_TRAIN_FILE: &str = "classifier_train.jsonl";
pub const CLASSIFIER_HELD_OUT_FILE: &str = "classifier_held_out.jsonl";

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub tokens: u64,
    pub kept: usize,
    pub dropped: u64,
    pub vocabulary: usize,
    pub windows: u64,
}

/// Tokenizes `input`, writes the vocabulary, the window idf table and the
/// filtered token stream into `out`.
pub fn build_corpus(input: &Path, min_count: usize, window: usize, out: &Path) -> Result<CorpusSummary> {
    let tokens = read_corpus(input)?;
    if tokens.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let vocab = build_vocabulary(&tokens, min_count)?;
    let ids = vocab.encode(&tokens);
    let tfidf = window_tfidf(&ids, &vocab, window)?;
    create_dir(out)?;
    vocab.write_tsv(&out.join(VOCAB_FILE))?;
    tfidf.write_tsv(&vocab, &out.join(IDF_FILE))?;
    let kept: Vec<&str> = ids.iter().map(|&i| vocab.word(i)).collect();
    write_tokens(&kept, &out.join(TOKENS_FILE), 1000)?;
    Ok(CorpusSummary {
        tokens: vocab.total_tokens(),
        kept: ids.len(),
        dropped: vocab.dropped_tokens(),
        vocabulary: vocab.len(),
        windows: tfidf.windows(),
    })
}

/// Trains single-sense embeddings and saves the center vectors.
pub fn train_sg_files(corpus: &Path, vocab: &Path, config: &TrainConfig, out: &Path) -> Result<TrainStats> {
    let vocab = Vocabulary::read_tsv(vocab)?;
    let ids = vocab.encode(&read_corpus(corpus)?);
    let sg = train_skipgram(&ids, &vocab, config)?;
    sg.center_table(&vocab).save(out)?;
    Ok(sg.stats)
}

/// Tags a token file with dictionary senses.
pub fn tag_senses_files(corpus: &Path, emb: &Path, dict: &Path, config: &TaggerConfig, out: &Path) -> Result<TagDiagnostics> {
    let tokens = read_corpus(corpus)?;
    let vocab = build_vocabulary(&tokens, 1)?;
    let ids = vocab.encode(&tokens);
    let table = EmbeddingTable::load(emb)?;
    let inventory = SenseInventory::load_jsonl(dict)?;
    let tfidf = window_tfidf(&ids, &vocab, config.window)?;
    let tagging = relabel_corpus(&ids, &vocab, &table, &tfidf, &inventory, config)?;
    create_dir(out)?;
    tagging.corpus.save(&out.join(TAGGED_FILE))?;
    tagging.clusters.save_jsonl(&out.join(CLUSTERS_FILE))?;
    write_json(&tagging.diagnostics, &out.join(DIAGNOSTICS_FILE))?;
    Ok(tagging.diagnostics)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RkSummary {
    pub triples: TripleReport,
    pub stats: JointStats,
    pub units: usize,
}

/// Joint word-sense and relation training from files.
pub fn train_rk_files(
    tagged: &Path,
    triples: &Path,
    dict: Option<&Path>,
    config: &JointConfig,
    out: &Path,
) -> Result<RkSummary> {
    let tagged = TaggedCorpus::load(tagged)?;
    let raw = load_triples(triples)?;
    let inventory = match dict {
        Some(p) => SenseInventory::load_jsonl(p)?,
        None => SenseInventory::default(),
    };
    let model = train_joint(&tagged, &inventory, &raw, config)?;
    create_dir(out)?;
    model.table().save(&out.join(EMBEDDINGS_FILE))?;
    model.relations.save(&out.join(RELATIONS_FILE))?;
    let summary = RkSummary {
        triples: model.triple_report.clone(),
        stats: model.stats.clone(),
        units: model.space.len(),
    };
    let json = serde_json::json!({
        "units": summary.units,
        "triples_accepted": summary.triples.accepted,
        "triples_unknown_key": summary.triples.unknown_key,
        "triples_self_loop": summary.triples.self_loop,
        "triples_duplicate": summary.triples.duplicate,
        "skipgram_pairs": summary.stats.skipgram.pairs,
        "final_epoch_loss": summary.stats.skipgram.final_epoch_loss,
        "relation_batches": summary.stats.relation_batches,
        "last_batch_active": summary.stats.last_batch_active,
    });
    write_json(&json, &out.join(SUMMARY_FILE))?;
    Ok(summary)
}

/// Trains the type classifier on labelled questions and saves it as JSON.
pub fn train_classifier_file(questions: &Path, hyper: Hyper, out: &Path) -> Result<LinearModel> {
    let labeled = templates::labeled_texts(&load_questions(questions)?);
    let model = train_ovr(&labeled, hyper)?;
    model.save(out)?;
    Ok(model)
}

/// Trained artifacts used to answer questions.
pub struct SolverInputs {
    pub embeddings: EmbeddingTable,
    pub relations: Option<RelationModel>,
    pub classifier: Option<LinearModel>,
}

impl SolverInputs {
    pub fn load(emb: &Path, relations: Option<&Path>, classifier: Option<&Path>) -> Result<Self> {
        Ok(SolverInputs {
            embeddings: EmbeddingTable::load(emb)?,
            relations: relations.map(RelationModel::load).transpose()?,
            classifier: classifier.map(LinearModel::load).transpose()?,
        })
    }

    pub fn models(&self) -> Models<'_> {
        Models {
            embeddings: &self.embeddings,
            relations: self.relations.as_ref(),
        }
    }
}

pub fn solve_files(inputs: &SolverInputs, questions: &Path, config: SolverConfig, seed: u64, out: &Path) -> Result<Vec<AnswerRecord>> {
    let questions = load_questions(questions)?;
    let answers = harness::solve_questions(&questions, inputs.classifier.as_ref(), inputs.models(), config, seed)?;
    harness::save_answers(&answers, out)?;
    Ok(answers)
}

/// Scores answers (and optionally the random baseline) and writes the report.
pub fn evaluate_files(questions: &Path, answers: &Path, baseline: bool, seed: u64, report: &Path) -> Result<Vec<EvalReport>> {
    let questions = load_questions(questions)?;
    let answers = harness::load_answers(answers)?;
    report_for(&questions, &answers, baseline, seed, report)
}

fn report_for(
    questions: &[crate::question::Question],
    answers: &[AnswerRecord],
    baseline: bool,
    seed: u64,
    report: &Path,
) -> Result<Vec<EvalReport>> {
    let mut reports = vec![harness::evaluate("RK", questions, answers)?];
    if baseline {
        reports.push(harness::random_baseline(questions, 5, seed)?);
    }
    harness::write_reports(&reports, report)?;
    Ok(reports)
}

/// Solve and evaluate in one step; the report equals `solve` followed by
/// `evaluate` with the same seed.
pub fn bench_files(
    inputs: &SolverInputs,
    questions: &Path,
    config: SolverConfig,
    baseline: bool,
    seed: u64,
    report: &Path,
) -> Result<Vec<EvalReport>> {
    let questions = load_questions(questions)?;
    let answers = harness::solve_questions(&questions, inputs.classifier.as_ref(), inputs.models(), config, seed)?;
    report_for(&questions, &answers, baseline, seed, report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSummary {
    pub tokens: usize,
    pub triples: usize,
    pub questions: usize,
    pub files: Vec<PathBuf>,
}

/// Writes a synthetic world: corpus text, triples, dictionary, a question set
/// in the published proportions and classifier training questions.
pub fn write_synthetic_world(config: SynthConfig, out: &Path) -> Result<SynthSummary> {
    let world = SyntheticWorld::new(config)?;
    let corpus = world.generate_corpus();
    let questions = world.generate_questions(TABLE2_COUNTS, world.config.seed)?;
    create_dir(out)?;
    let files: Vec<PathBuf> = [
        CORPUS_FILE,
        TRIPLES_FILE,
        DICTIONARY_FILE,
        QUESTIONS_FILE,
        CLASSIFIER_TRAIN_FILE,
        CLASSIFIER_HELD_OUT_FILE,
    ]
    .iter()
    .map(|f| out.join(f))
    .collect();
    write_tokens(&corpus.tokens, &files[0], 20)?;
    save_triples(&world.triples, &files[1])?;
    world.dictionary.save_jsonl(&files[2])?;
    save_questions(&questions, &files[3])?;
    save_questions(&templates::classifier_training_set(world.config.seed), &files[4])?;
    save_questions(&templates::classifier_held_out_set(world.config.seed), &files[5])?;
    Ok(SynthSummary {
        tokens: corpus.tokens.len(),
        triples: world.triples.len(),
        questions: questions.len(),
        files,
    })
}
