//! The two planted-structure experiments on a synthetic world: recovering
//! the senses of a pseudoword and recovering planted relations.

use crate::corpus::{build_vocabulary, window_tfidf};
use crate::error::Result;
use crate::harness::synth::{sense_purity, SyntheticWorld};
use crate::harness::{evaluate, solve_questions, AnswerRecord, EvalReport};
use crate::joint::{train_joint, JointConfig, JointModel};
use crate::question::Question;
use crate::senses::{relabel_corpus, SenseTagging, TaggedCorpus, TaggerConfig};
use crate::skipgram::{train_skipgram, TrainConfig};
use crate::solvers::{Models, SolverConfig};

pub struct PurityRun {
    pub purity: f64,
    /// Pseudoword occurrences in the corpus.
    pub occurrences: usize,
    pub tagging: SenseTagging,
}

/// Single-sense training, then sense tagging; purity is measured on the
/// pseudoword occurrences against their source words.
pub fn pseudoword_purity(world: &SyntheticWorld, sg: &TrainConfig, tagger: &TaggerConfig) -> Result<PurityRun> {
    let corpus = world.generate_corpus();
    let vocab = build_vocabulary(&corpus.tokens, 1)?;
    let ids = vocab.encode(&corpus.tokens);
    let table = train_skipgram(&ids, &vocab, sg)?.center_table(&vocab);
    let tfidf = window_tfidf(&ids, &vocab, tagger.window)?;
    let tagging = relabel_corpus(&ids, &vocab, &table, &tfidf, &world.dictionary, tagger)?;
    let senses: Vec<u32> = tagging.corpus.tokens().iter().map(|&(_, s)| s).collect();
    Ok(PurityRun {
        purity: sense_purity(&corpus.origins, &senses),
        occurrences: corpus.origins.iter().filter(|o| o.is_some()).count(),
        tagging,
    })
}

pub struct RelationRun {
    pub model: JointModel,
    pub answers: Vec<AnswerRecord>,
    pub report: EvalReport,
}

/// Joint training on the untagged synthetic corpus and the world's planted
/// triples, then scoring `questions` with their labelled types.
pub fn planted_relation_run(
    world: &SyntheticWorld,
    questions: &[Question],
    joint: &JointConfig,
    solver: SolverConfig,
) -> Result<RelationRun> {
    let corpus = world.generate_corpus();
    let vocab = build_vocabulary(&corpus.tokens, 1)?;
    let tagged = TaggedCorpus::untagged(&vocab, &vocab.encode(&corpus.tokens));
    let model = train_joint(&tagged, &world.dictionary, &world.triples, joint)?;
    let table = model.table();
    let models = Models {
        embeddings: &table,
        relations: Some(&model.relations),
    };
    let answers = solve_questions(questions, None, models, solver, joint.skipgram.seed)?;
    let method = if joint.alpha > 0.0 { "RK" } else { "RK-a0" };
    let report = evaluate(method, questions, &answers)?;
    Ok(RelationRun { model, answers, report })
}
