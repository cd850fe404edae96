//! Train single-sense skip-gram vectors on a synthetic topic corpus and list
//! the nearest neighbours of a few words.

use verbaliq::corpus::build_vocabulary;
use verbaliq::harness::synth::{SynthConfig, SyntheticWorld};
use verbaliq::linalg::cosine;
use verbaliq::skipgram::{train_skipgram, TrainConfig};

fn main() -> verbaliq::Result<()> {
    let world = SyntheticWorld::new(SynthConfig { tokens: 200_000, ..Default::default() })?;
    let corpus = world.generate_corpus();
    let vocab = build_vocabulary(&corpus.tokens, 1)?;
    let config = TrainConfig { dim: 32, epochs: 2, ..Default::default() };
    let sg = train_skipgram(&vocab.encode(&corpus.tokens), &vocab, &config)?;
    println!("{} pairs, final epoch loss {:.4}", sg.stats.pairs, sg.stats.final_epoch_loss);

    let table = sg.center_table(&vocab);
    for (topic, words) in world.topics.iter().take(3) {
        let probe = &words[0];
        let v = table.get(probe, 0).unwrap();
        let mut near: Vec<(f64, &str)> = vocab
            .words()
            .iter()
            .filter(|w| *w != probe)
            .map(|w| (cosine(v, table.get(w, 0).unwrap()), w.as_str()))
            .collect();
        near.sort_by(|a, b| b.0.total_cmp(&a.0));
        let top: Vec<String> = near.iter().take(5).map(|(c, w)| format!("{w} {c:.2}")).collect();
        println!("[{topic}] {probe}: {}", top.join(", "));
    }
    Ok(())
}
