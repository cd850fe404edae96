//! Merge two words of different topics into one pseudoword, then recover
//! its senses by clustering occurrence contexts and matching clusters to
//! dictionary glosses.

use verbaliq::harness::experiments::pseudoword_purity;
use verbaliq::harness::synth::{SynthConfig, SyntheticWorld};
use verbaliq::senses::TaggerConfig;
use verbaliq::skipgram::TrainConfig;

fn main() -> verbaliq::Result<()> {
    let world = SyntheticWorld::new(SynthConfig { tokens: 300_000, pseudoword: true, ..Default::default() })?;
    let pw = world.pseudoword.clone().expect("pseudoword world");
    println!("pseudoword {} merges {} and {}", pw.word, pw.parts[0], pw.parts[1]);

    let sg = TrainConfig { dim: 48, epochs: 1, ..Default::default() };
    let run = pseudoword_purity(&world, &sg, &TaggerConfig::default())?;
    println!("purity {:.3} over {} occurrences", run.purity, run.occurrences);
    for (word, c) in &run.tagging.clusters.words {
        println!("{word}: cluster sizes {:?}, matched senses {:?}", c.cluster_sizes, c.cluster_sense);
    }
    Ok(())
}
