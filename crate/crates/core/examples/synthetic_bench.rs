//! End-to-end benchmark on a synthetic world written to a temporary
//! directory: train, classify, solve and report against random guessing.

use verbaliq::classifier::Hyper;
use verbaliq::harness::format_table;
use verbaliq::harness::synth::SynthConfig;
use verbaliq::joint::JointConfig;
use verbaliq::pipeline::{self, SolverInputs};
use verbaliq::senses::TaggerConfig;
use verbaliq::skipgram::TrainConfig;
use verbaliq::solvers::{PairMode, SolverConfig};

fn main() -> verbaliq::Result<()> {
    let dir = std::env::temp_dir().join("verbaliq-synthetic-bench");
    let world = dir.join("world");
    let corpus = dir.join("corpus");
    let tagged = dir.join("tagged");
    let rk = dir.join("rk");
    let summary = pipeline::write_synthetic_world(SynthConfig { pseudoword: true, ..Default::default() }, &world)?;
    println!("{summary:?}");

    pipeline::build_corpus(&world.join(pipeline::CORPUS_FILE), 1, 5, &corpus)?;
    let tokens = corpus.join(pipeline::TOKENS_FILE);
    let dict = world.join(pipeline::DICTIONARY_FILE);
    let sg = TrainConfig { dim: 48, epochs: 1, ..Default::default() };
    pipeline::train_sg_files(&tokens, &corpus.join(pipeline::VOCAB_FILE), &sg, &dir.join("sg.txt"))?;
    pipeline::tag_senses_files(&tokens, &dir.join("sg.txt"), &dict, &TaggerConfig::default(), &tagged)?;
    let joint = JointConfig { skipgram: TrainConfig { dim: 48, epochs: 2, ..Default::default() }, ..Default::default() };
    pipeline::train_rk_files(&tagged.join(pipeline::TAGGED_FILE), &world.join(pipeline::TRIPLES_FILE), Some(&dict), &joint, &rk)?;
    pipeline::train_classifier_file(&world.join(pipeline::CLASSIFIER_TRAIN_FILE), Hyper::default(), &dir.join("classifier.json"))?;

    let inputs = SolverInputs::load(
        &rk.join(pipeline::EMBEDDINGS_FILE),
        Some(&rk.join(pipeline::RELATIONS_FILE)),
        Some(&dir.join("classifier.json")),
    )?;
    let reports = pipeline::bench_files(
        &inputs,
        &world.join(pipeline::QUESTIONS_FILE),
        SolverConfig::mode(PairMode::RelationOffset),
        true,
        1,
        &dir.join("report.txt"),
    )?;
    print!("{}", format_table(&reports));
    println!("outputs in {}", dir.display());
    Ok(())
}
