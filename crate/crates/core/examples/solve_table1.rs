//! Solve the five example questions over a small hand-built geometry, in
//! both pair modes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use verbaliq::harness::fixtures::table1;
use verbaliq::solvers::{dispatch, Models, PairMode, SolverConfig};

fn main() {
    let f = table1();
    let models = Models { embeddings: &f.embeddings, relations: Some(&f.relations) };
    for mode in [PairMode::Distance, PairMode::RelationOffset] {
        println!("{mode:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in &f.questions {
            let d = dispatch(q, q.qtype.unwrap(), models, SolverConfig::mode(mode), &mut rng);
            let mark = if Some(&d.answer) == q.answer.as_ref() { "ok" } else { "--" };
            println!("  {mark} {:<15} {}", q.id, d.answer.0.join(" / "));
        }
    }
}
