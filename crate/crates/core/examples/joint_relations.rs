//! Joint training of embeddings and relation vectors on planted synonym and
//! antonym pairs, compared against the same run with the relation term off.

use verbaliq::harness::experiments::planted_relation_run;
use verbaliq::harness::synth::{SynthConfig, SyntheticWorld};
use verbaliq::joint::JointConfig;
use verbaliq::question::QuestionType;
use verbaliq::skipgram::TrainConfig;
use verbaliq::solvers::{PairMode, SolverConfig};

fn main() -> verbaliq::Result<()> {
    let world = SyntheticWorld::new(SynthConfig::default())?;
    let questions = world.generate_questions([0, 0, 0, 20, 20], 11)?;
    let mode2 = SolverConfig::mode(PairMode::RelationOffset);
    for alpha in [0.01, 0.0] {
        let joint = JointConfig { skipgram: TrainConfig { dim: 64, epochs: 3, ..Default::default() }, alpha, ..Default::default() };
        let run = planted_relation_run(&world, &questions, &joint, mode2)?;
        println!(
            "alpha {alpha}: synonym {:.0}%, antonym {:.0}%, {} relation batches",
            100.0 * run.report.type_score(QuestionType::Synonym).accuracy,
            100.0 * run.report.type_score(QuestionType::Antonym).accuracy,
            run.model.stats.relation_batches
        );
        for name in run.model.relations.names() {
            let r = run.model.relations.vector_named(name).unwrap();
            println!("  {name}: {:?}", r.iter().take(4).map(|v| format!("{v:+.3}")).collect::<Vec<_>>());
        }
    }
    Ok(())
}
