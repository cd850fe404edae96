mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use verbaliq::harness::fixtures::table1;
use verbaliq::question::{Answer, QuestionType};
use verbaliq::solvers::{
    dispatch, solve_analogy1, solve_analogy2, solve_antonym, solve_as, solve_classification, solve_synonym, Models,
    PairMode, SolverConfig,
};

fn words(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

#[test]
fn example_questions_over_gold_geometry() {
    let f = table1();
    let emb = &f.embeddings;
    let mode2 = SolverConfig::mode(PairMode::RelationOffset);

    let a1 = solve_analogy1("isotherm", "temperature", "isobar", &words(&["atmosphere", "wind", "pressure", "latitude", "current"]), emb).unwrap();
    assert_eq!(a1.answer, "pressure");

    let a2 = solve_analogy2("chapter", "act", &words(&["book", "verse", "read"]), &words(&["stage", "audience", "play"]), emb).unwrap();
    assert_eq!(a2.answer, ("book".to_string(), "play".to_string()));

    let odd = solve_classification(&words(&["calm", "quiet", "relaxed", "serene", "unruffled"]), emb).unwrap();
    assert_eq!(odd.answer, "quiet");

    let syn = words(&["intransigent", "irredeemable", "unsafe", "lost", "nonsensical"]);
    assert_eq!(solve_synonym("irrational", &syn, emb, Some(&f.relations), mode2).unwrap().answer, "nonsensical");
    assert_eq!(solve_synonym("IRRATIONAL", &syn, emb, Some(&f.relations), mode2).unwrap().answer, "nonsensical");

    let ant = words(&["discordant", "loud", "lyrical", "verbal", "euphonious"]);
    assert_eq!(solve_antonym("musical", &ant, emb, Some(&f.relations), mode2).unwrap().answer, "discordant");

    let models = Models { embeddings: emb, relations: Some(&f.relations) };
    for q in &f.questions {
        let got = solve_as(q, q.qtype.unwrap(), models, mode2).unwrap();
        assert_eq!(Some(&got.answer), q.answer.as_ref(), "{}", q.id);
    }
}

#[test]
fn misrouted_analogy_falls_back_reproducibly() {
    let f = table1();
    let models = Models { embeddings: &f.embeddings, relations: Some(&f.relations) };
    let q = f.questions.iter().find(|q| q.qtype == Some(QuestionType::AnalogyII)).unwrap();
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..20)
            .map(|_| dispatch(q, QuestionType::Classification, models, SolverConfig::default(), &mut rng))
            .collect::<Vec<_>>()
    };
    let a = run(5);
    assert_eq!(a, run(5));
    for d in &a {
        assert!(d.fallback && d.failure.is_some());
        let Answer(ws) = &d.answer;
        assert!(q.candidates.0[0].contains(&ws[0]) && q.candidates.0[1].contains(&ws[1]));
    }
    let typed = dispatch(q, QuestionType::AnalogyII, models, SolverConfig::default(), &mut ChaCha8Rng::seed_from_u64(5));
    assert!(!typed.fallback);
    assert_eq!(Some(&typed.answer), q.answer.as_ref());
}

#[test]
fn random_fixtures_match_the_oracle() {
    let mut rng = common::rng(77);
    for i in 0..100 {
        if let Err(e) = common::check_random_fixture(&mut rng) {
            panic!("fixture {i}: {e}");
        }
    }
}

proptest! {
    #[test]
    fn oracle_agreement(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        prop_assert_eq!(common::check_random_fixture(&mut rng), Ok(()));
    }

    #[test]
    fn answers_survive_uniform_scaling(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let mut rng = common::rng(seed);
        let e = common::random_senses(&mut rng, 8, 3, 5);
        let table = common::table_of(&e);
        let mut scaled = table.clone();
        scaled.scale(scale);
        let w: Vec<String> = e.keys().cloned().collect();
        let cands = &w[3..8];
        let mode1 = SolverConfig::default();
        for t in [&table, &scaled] {
            prop_assert!(cands.contains(&solve_analogy1(&w[0], &w[1], &w[2], cands, t).unwrap().answer));
        }
        prop_assert_eq!(
            solve_analogy1(&w[0], &w[1], &w[2], cands, &table).unwrap().answer,
            solve_analogy1(&w[0], &w[1], &w[2], cands, &scaled).unwrap().answer
        );
        prop_assert_eq!(
            solve_analogy2(&w[0], &w[1], &w[2..5], &w[5..8], &table).unwrap().answer,
            solve_analogy2(&w[0], &w[1], &w[2..5], &w[5..8], &scaled).unwrap().answer
        );
        prop_assert_eq!(
            solve_classification(cands, &table).unwrap().answer,
            solve_classification(cands, &scaled).unwrap().answer
        );
        prop_assert_eq!(
            solve_synonym(&w[0], cands, &table, None, mode1).unwrap().answer,
            solve_synonym(&w[0], cands, &scaled, None, mode1).unwrap().answer
        );
        prop_assert_eq!(
            solve_antonym(&w[0], cands, &table, None, mode1).unwrap().answer,
            solve_antonym(&w[0], cands, &scaled, None, mode1).unwrap().answer
        );
    }
}
