mod common;

use proptest::prelude::*;
use rand::Rng;
use verbaliq::corpus::{build_vocabulary, window_at, window_tfidf};
use verbaliq::harness::experiments::pseudoword_purity;
use verbaliq::harness::synth::{SynthConfig, SyntheticWorld};
use verbaliq::kmeans::spherical_kmeans;
use verbaliq::senses::{context_vector, match_clusters_to_senses, relabel_corpus, ContextCounters, TaggerConfig, WordVectors};
use verbaliq::skipgram::{train_skipgram, TrainConfig};

fn matrix(k: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    // coarse values so that ties actually occur
    prop::collection::vec(prop::collection::vec((0u8..6).prop_map(|v| v as f64 / 5.0), k), k)
}

fn small_world(seed: u64) -> SyntheticWorld {
    SyntheticWorld::new(SynthConfig {
        tokens: 120_000,
        pseudoword: true,
        pseudoword_occurrences: 200,
        seed,
        ..Default::default()
    })
    .unwrap()
}

fn small_sg() -> TrainConfig {
    TrainConfig { dim: 24, epochs: 1, ..Default::default() }
}

#[test]
fn pseudoword_senses_are_recovered_at_small_scale() {
    let world = small_world(3);
    let run = pseudoword_purity(&world, &small_sg(), &TaggerConfig::default()).unwrap();
    assert_eq!(run.occurrences, 400);
    assert!(run.purity >= 0.85, "purity {}", run.purity);
    let pw = &world.pseudoword.as_ref().unwrap().word;
    assert_eq!(run.tagging.diagnostics.clustered_words, vec![pw.clone()]);
    let clusters = &run.tagging.clusters.words[pw];
    for c in &clusters.centroids {
        assert!((c.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() <= 1e-9);
    }
    let mut senses = clusters.cluster_sense.clone();
    senses.sort();
    assert_eq!(senses, [1, 2]);
}

#[test]
fn tags_stay_in_range_and_survive_scaling() {
    let world = small_world(5);
    let corpus = world.generate_corpus();
    let vocab = build_vocabulary(&corpus.tokens, 1).unwrap();
    let ids = vocab.encode(&corpus.tokens);
    let mut table = train_skipgram(&ids, &vocab, &small_sg()).unwrap().center_table(&vocab);
    let config = TaggerConfig::default();
    let tfidf = window_tfidf(&ids, &vocab, config.window).unwrap();
    let a = relabel_corpus(&ids, &vocab, &table, &tfidf, &world.dictionary, &config).unwrap();
    assert_eq!(a.corpus.len(), ids.len());
    for (i, &(w, s)) in a.corpus.tokens().iter().enumerate() {
        assert_eq!(w, ids[i]);
        let k = world.dictionary.sense_count(vocab.word(w));
        assert!((1..=k).contains(&s));
    }

    // power-of-two scaling is exact, so assignments must match bit for bit
    table.scale(4.0);
    let b = relabel_corpus(&ids, &vocab, &table, &tfidf, &world.dictionary, &config).unwrap();
    assert_eq!(a.corpus, b.corpus);
}

#[test]
fn context_vectors_scale_linearly() {
    let tokens: Vec<String> = "the cat sat on the mat while a dog sat by the door".split(' ').map(String::from).collect();
    let vocab = build_vocabulary(&tokens, 1).unwrap();
    let ids = vocab.encode(&tokens);
    let mut rng = common::rng(2);
    let mut table = verbaliq::embedding::EmbeddingTable::new(3);
    for w in vocab.words() {
        let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        table.push(verbaliq::embedding::SenseKey::new(w.clone(), 0), &v).unwrap();
    }
    let tfidf = window_tfidf(&ids, &vocab, 2).unwrap();
    let mut scaled = table.clone();
    scaled.scale(3.0);
    let (plain, big) = (WordVectors::new(&table, &vocab), WordVectors::new(&scaled, &vocab));
    for pos in 0..ids.len() {
        let w = window_at(&ids, pos, 2);
        let mut c = ContextCounters::default();
        let x = context_vector(&w, 2, &tfidf, &plain, &mut c).unwrap();
        let y = context_vector(&w, 2, &tfidf, &big, &mut c).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((3.0 * a - b).abs() <= 1e-12);
        }
    }
}

/// Best objective over every split into two nonempty groups.
fn best_two_partition(points: &[Vec<f64>]) -> f64 {
    let unit: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            p.iter().map(|v| v / n).collect()
        })
        .collect();
    let n = unit.len();
    let mut best = f64::NEG_INFINITY;
    for mask in 1..(1u32 << (n - 1)) {
        let mut sums = [vec![0.0; unit[0].len()], vec![0.0; unit[0].len()]];
        for (i, p) in unit.iter().enumerate() {
            let g = (mask >> i & 1) as usize;
            for (s, v) in sums[g].iter_mut().zip(p) {
                *s += v;
            }
        }
        let obj: f64 = sums.iter().map(|s| s.iter().map(|v| v * v).sum::<f64>().sqrt()).sum();
        best = best.max(obj);
    }
    best
}

/// Points around (1, 0) and (0, 1) in the plane.
fn bundles(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let base = if i % 2 == 0 { 0.0 } else { std::f64::consts::FRAC_PI_2 };
            let a = base + rng.random_range(-0.3..0.3);
            vec![a.cos(), a.sin()]
        })
        .collect()
}

#[test]
fn two_bundles_reach_the_best_partition() {
    let mut hits = 0;
    for seed in 0..100 {
        let mut rng = common::rng(1000 + seed);
        let n = rng.random_range(4..=12);
        let pts = bundles(&mut rng, n);
        let r = spherical_kmeans(&pts, 2, seed).unwrap();
        if (r.objective() - best_two_partition(&pts)).abs() <= 1e-9 {
            hits += 1;
        }
        let labels: Vec<usize> = r.assignments.iter().map(|a| a.unwrap()).collect();
        assert!(labels.iter().step_by(2).all(|&l| l == labels[0]));
        assert!(labels.iter().skip(1).step_by(2).all(|&l| l != labels[0]));
    }
    assert!(hits >= 95, "{hits}");
}

proptest! {
    #[test]
    fn greedy_matching_equals_the_oracle(dist in (1usize..=5).prop_flat_map(matrix)) {
        let k = dist.len();
        let got = verbaliq::senses::greedy_match(&dist);
        prop_assert_eq!(&got, &common::oracle_greedy(&dist));
        let mut cols = got.clone();
        cols.sort();
        prop_assert_eq!(cols, (0..k).collect::<Vec<_>>());
    }

    #[test]
    fn cluster_matching_equals_the_oracle(seed in any::<u64>(), k in 1usize..=5) {
        let mut rng = common::rng(seed);
        let mut draw = || -> Vec<Vec<f64>> { (0..k).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect() };
        let centroids = draw();
        let glosses = draw();
        let dist: Vec<Vec<f64>> = centroids.iter().map(|c| glosses.iter().map(|g| common::dist(c, g)).collect()).collect();
        prop_assert_eq!(match_clusters_to_senses(&centroids, &glosses).unwrap(), common::oracle_greedy(&dist));
    }

    #[test]
    fn kmeans_objective_never_drops(seed in any::<u64>(), n in 1usize..40, k in 1usize..6, dim in 1usize..6) {
        let mut rng = common::rng(seed);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let r = spherical_kmeans(&pts, k, seed).unwrap();
        for w in r.objective_trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0));
        }
        prop_assert_eq!(r.centroids.len(), k);
        for c in &r.centroids {
            prop_assert!((c.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() <= 1e-9);
        }
    }
}
