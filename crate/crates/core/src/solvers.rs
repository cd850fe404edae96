//! Exhaustive geometric solvers for the five question types.
//!
//! Every solver enumerates all sense combinations of the words involved and
//! breaks ties in favour of the earliest candidate.

use rand::Rng;
use thiserror::Error;

use crate::embedding::EmbeddingTable;
use crate::joint::{RelationModel, ANTONYM, SYNONYM};
use crate::linalg::{cosine, euclidean};
use crate::question::{Answer, Question, QuestionType};

/// Upper bound on sense-combination mean vectors for odd-one-out questions.
pub const MAX_COMBINATIONS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("stem word `{0}` has no embedding")]
    MissingStem(String),
    #[error("no candidate has an embedding")]
    NoCandidate,
    #[error("question does not fit the {expected} solver: {reason}")]
    Format { expected: QuestionType, reason: String },
    #[error("{combinations} sense combinations exceed the limit of {MAX_COMBINATIONS}; reduce sense counts")]
    TooManyCombinations { combinations: u128 },
    #[error("relation-offset mode needs a trained `{0}` relation vector; use distance mode (1) instead")]
    MissingRelation(String),
    #[error("relation vector has dimension {relation}, embeddings have {embedding}")]
    DimensionMismatch { relation: usize, embedding: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairMode {
    /// Closest sense pair in Euclidean distance.
    #[default]
    Distance,
    /// Sense-pair offset closest to the relation vector.
    RelationOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffsetKind {
    /// `‖(v_candidate − v_query) − r‖`
    #[default]
    PlainDifference,
    /// `‖|v_candidate − v_query| − r‖` with an elementwise absolute value.
    ElementwiseAbsolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverConfig {
    pub mode: PairMode,
    pub offset: OffsetKind,
}

impl SolverConfig {
    pub fn mode(mode: PairMode) -> Self {
        SolverConfig {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solved<T> {
    pub answer: T,
    pub score: f64,
    /// Candidates dropped for lack of an embedding.
    pub skipped: usize,
}

pub type SolveResult<T> = std::result::Result<Solved<T>, SolveError>;

fn senses<'a>(emb: &'a EmbeddingTable, word: &str) -> Vec<&'a [f64]> {
    let mut rows = emb.sense_rows(word);
    if rows.is_empty() {
        rows = emb.sense_rows(&word.to_lowercase());
    }
    rows.iter().map(|&r| emb.row(r)).collect()
}

fn stem<'a>(emb: &'a EmbeddingTable, word: &str) -> Result<Vec<&'a [f64]>, SolveError> {
    let s = senses(emb, word);
    if s.is_empty() {
        Err(SolveError::MissingStem(word.to_string()))
    } else {
        Ok(s)
    }
}

/// Resolvable candidates with their list position.
fn resolve<'a, 'w>(emb: &'a EmbeddingTable, words: &'w [String]) -> (Vec<(&'w str, Vec<&'a [f64]>)>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    for w in words {
        let s = senses(emb, w);
        if s.is_empty() {
            skipped += 1;
        } else {
            out.push((w.as_str(), s));
        }
    }
    (out, skipped)
}

/// All `b − a + c` sense combinations.
fn analogy_queries(a: &[&[f64]], b: &[&[f64]], c: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for vb in b {
        for va in a {
            for vc in c {
                out.push(vb.iter().zip(*va).zip(*vc).map(|((b, a), c)| b - a + c).collect());
            }
        }
    }
    out
}

fn best_cosine(queries: &[Vec<f64>], targets: &[&[f64]]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for q in queries {
        for t in targets {
            best = best.max(cosine(q, t));
        }
    }
    best
}

/// `A : B :: C : ?`
pub fn solve_analogy1(a: &str, b: &str, c: &str, candidates: &[String], emb: &EmbeddingTable) -> SolveResult<String> {
    let queries = analogy_queries(&stem(emb, a)?, &stem(emb, b)?, &stem(emb, c)?);
    let (resolved, skipped) = resolve(emb, candidates);
    let mut best: Option<(&str, f64)> = None;
    for (word, vs) in &resolved {
        let s = best_cosine(&queries, vs);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((word, s));
        }
    }
    let (word, score) = best.ok_or(SolveError::NoCandidate)?;
    Ok(Solved {
        answer: word.to_string(),
        score,
        skipped,
    })
}

/// `A : ? :: C : ?` with one answer from each list.
pub fn solve_analogy2(
    a: &str,
    c: &str,
    first: &[String],
    second: &[String],
    emb: &EmbeddingTable,
) -> SolveResult<(String, String)> {
    let va = stem(emb, a)?;
    let vc = stem(emb, c)?;
    let (bs, skipped_b) = resolve(emb, first);
    let (ds, skipped_d) = resolve(emb, second);
    let mut best: Option<(&str, &str, f64)> = None;
    for (bw, vb) in &bs {
        let queries = analogy_queries(&va, vb, &vc);
        for (dw, vd) in &ds {
            let s = best_cosine(&queries, vd);
            if best.is_none_or(|(_, _, b)| s > b) {
                best = Some((bw, dw, s));
            }
        }
    }
    let (b, d, score) = best.ok_or(SolveError::NoCandidate)?;
    Ok(Solved {
        answer: (b.to_string(), d.to_string()),
        score,
        skipped: skipped_b + skipped_d,
    })
}

/// Odd one out: the candidate whose nearest sense is farthest from every
/// sense-combination mean of the whole list.
pub fn solve_classification(candidates: &[String], emb: &EmbeddingTable) -> SolveResult<String> {
    let (resolved, skipped) = resolve(emb, candidates);
    if resolved.len() < 3 {
        return Err(SolveError::Format {
            expected: QuestionType::Classification,
            reason: format!("{} resolvable candidates, need at least 3", resolved.len()),
        });
    }
    let combinations = resolved
        .iter()
        .try_fold(1u128, |m, (_, vs)| m.checked_mul(vs.len() as u128))
        .unwrap_or(u128::MAX);
    if combinations > MAX_COMBINATIONS {
        return Err(SolveError::TooManyCombinations { combinations });
    }
    let dim = emb.dim();
    let n = resolved.len() as f64;
    let mut nearest = vec![f64::INFINITY; resolved.len()];
    let mut choice = vec![0usize; resolved.len()];
    let mut mean = vec![0.0; dim];
    loop {
        mean.iter_mut().for_each(|m| *m = 0.0);
        for ((_, vs), &i) in resolved.iter().zip(&choice) {
            for (m, v) in mean.iter_mut().zip(vs[i]) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        for ((_, vs), d) in resolved.iter().zip(nearest.iter_mut()) {
            for v in vs {
                *d = d.min(euclidean(v, &mean));
            }
        }
        // Odometer over sense indices.
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                let mut best = 0;
                for j in 1..resolved.len() {
                    if nearest[j] > nearest[best] {
                        best = j;
                    }
                }
                return Ok(Solved {
                    answer: resolved[best].0.to_string(),
                    score: nearest[best],
                    skipped,
                });
            }
            choice[pos] += 1;
            if choice[pos] < resolved[pos].1.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn pair_score(candidate: &[f64], query: &[f64], relation: Option<&[f64]>, offset: OffsetKind) -> f64 {
    match relation {
        None => euclidean(candidate, query),
        Some(r) => candidate
            .iter()
            .zip(query)
            .zip(r)
            .map(|((c, q), r)| {
                let d = match offset {
                    OffsetKind::PlainDifference => c - q,
                    OffsetKind::ElementwiseAbsolute => (c - q).abs(),
                };
                (d - r) * (d - r)
            })
            .sum::<f64>()
            .sqrt(),
    }
}

/// Shared body of the synonym and antonym solvers. `relation` is the bounded
/// relation vector, required in relation-offset mode.
pub fn solve_pair(
    query: &str,
    candidates: &[String],
    emb: &EmbeddingTable,
    relation: Option<&[f64]>,
    relation_name: &str,
    config: SolverConfig,
) -> SolveResult<String> {
    let relation = match config.mode {
        PairMode::Distance => None,
        PairMode::RelationOffset => {
            let r = relation.ok_or_else(|| SolveError::MissingRelation(relation_name.to_string()))?;
            if r.len() != emb.dim() {
                return Err(SolveError::DimensionMismatch {
                    relation: r.len(),
                    embedding: emb.dim(),
                });
            }
            Some(r)
        }
    };
    let vq = stem(emb, query)?;
    let (resolved, skipped) = resolve(emb, candidates);
    let mut best: Option<(&str, f64)> = None;
    for (word, vs) in &resolved {
        let mut s = f64::INFINITY;
        for q in &vq {
            for v in vs {
                s = s.min(pair_score(v, q, relation, config.offset));
            }
        }
        if best.is_none_or(|(_, b)| s < b) {
            best = Some((word, s));
        }
    }
    let (word, score) = best.ok_or(SolveError::NoCandidate)?;
    Ok(Solved {
        answer: word.to_string(),
        score,
        skipped,
    })
}

pub fn solve_synonym(
    query: &str,
    candidates: &[String],
    emb: &EmbeddingTable,
    relations: Option<&RelationModel>,
    config: SolverConfig,
) -> SolveResult<String> {
    let r = relations.and_then(|m| m.vector_named(SYNONYM));
    solve_pair(query, candidates, emb, r.as_deref(), SYNONYM, config)
}

pub fn solve_antonym(
    query: &str,
    candidates: &[String],
    emb: &EmbeddingTable,
    relations: Option<&RelationModel>,
    config: SolverConfig,
) -> SolveResult<String> {
    let r = relations.and_then(|m| m.vector_named(ANTONYM));
    solve_pair(query, candidates, emb, r.as_deref(), ANTONYM, config)
}

/// Embeddings plus the optional relation model used by the pair solvers.
#[derive(Debug, Clone, Copy)]
pub struct Models<'a> {
    pub embeddings: &'a EmbeddingTable,
    pub relations: Option<&'a RelationModel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dispatched {
    pub answer: Answer,
    /// The answer was drawn at random after the solver failed.
    pub fallback: bool,
    pub failure: Option<SolveError>,
    pub skipped: usize,
}

fn format_error(expected: QuestionType, reason: impl Into<String>) -> SolveError {
    SolveError::Format {
        expected,
        reason: reason.into(),
    }
}

fn single_list(q: &Question, expected: QuestionType) -> Result<&[String], SolveError> {
    match q.candidate_lists() {
        [list] => Ok(list),
        lists => Err(format_error(expected, format!("{} candidate lists, expected 1", lists.len()))),
    }
}

fn stem_words(q: &Question, expected: QuestionType, n: usize) -> Result<&[String], SolveError> {
    if q.stem.len() == n {
        Ok(&q.stem)
    } else {
        Err(format_error(expected, format!("{} stem words, expected {n}", q.stem.len())))
    }
}

/// Runs the solver for `qtype` on `question`.
pub fn solve_as(question: &Question, qtype: QuestionType, models: Models<'_>, config: SolverConfig) -> SolveResult<Answer> {
    let emb = models.embeddings;
    let one = |s: Solved<String>| Solved {
        answer: Answer::single(s.answer),
        score: s.score,
        skipped: s.skipped,
    };
    match qtype {
        QuestionType::AnalogyI => {
            let st = stem_words(question, qtype, 3)?;
            let list = single_list(question, qtype)?;
            solve_analogy1(&st[0], &st[1], &st[2], list, emb).map(one)
        }
        QuestionType::AnalogyII => {
            let st = stem_words(question, qtype, 2)?;
            match question.candidate_lists() {
                [first, second] => solve_analogy2(&st[0], &st[1], first, second, emb).map(|s| Solved {
                    answer: Answer(vec![s.answer.0, s.answer.1]),
                    score: s.score,
                    skipped: s.skipped,
                }),
                lists => Err(format_error(qtype, format!("{} candidate lists, expected 2", lists.len()))),
            }
        }
        QuestionType::Classification => solve_classification(single_list(question, qtype)?, emb).map(one),
        QuestionType::Synonym => {
            let st = stem_words(question, qtype, 1)?;
            solve_synonym(&st[0], single_list(question, qtype)?, emb, models.relations, config).map(one)
        }
        QuestionType::Antonym => {
            let st = stem_words(question, qtype, 1)?;
            solve_antonym(&st[0], single_list(question, qtype)?, emb, models.relations, config).map(one)
        }
    }
}

/// One uniformly random candidate per list.
pub fn random_answer<R: Rng + ?Sized>(question: &Question, rng: &mut R) -> Answer {
    Answer(
        question
            .candidate_lists()
            .iter()
            .map(|list| list[rng.random_range(0..list.len())].clone())
            .collect(),
    )
}

/// Routes to the solver for `predicted`, falling back to a random candidate
/// when the solver cannot answer.
pub fn dispatch<R: Rng + ?Sized>(
    question: &Question,
    predicted: QuestionType,
    models: Models<'_>,
    config: SolverConfig,
    rng: &mut R,
) -> Dispatched {
    match solve_as(question, predicted, models, config) {
        Ok(s) => Dispatched {
            answer: s.answer,
            fallback: false,
            failure: None,
            skipped: s.skipped,
        },
        Err(e) => Dispatched {
            answer: random_answer(question, rng),
            fallback: true,
            failure: Some(e),
            skipped: 0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::SenseKey;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table(rows: &[(&str, u32, &[f64])]) -> EmbeddingTable {
        let mut t = EmbeddingTable::new(rows[0].2.len());
        for (w, s, v) in rows {
            t.push(SenseKey::new(*w, *s), v).unwrap();
        }
        t
    }

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn exact_vector_analogy() {
        let emb = table(&[
            ("a", 0, &[1.0, 0.0]),
            ("b", 0, &[0.0, 1.0]),
            ("c", 0, &[1.0, 0.0]),
            ("d1", 0, &[0.0, 1.0]),
            ("d2", 0, &[1.0, 0.0]),
        ]);
        let s = solve_analogy1("a", "b", "c", &words(&["d1", "d2"]), &emb).unwrap();
        assert_eq!(s.answer, "d1");
        assert!((s.score - 1.0).abs() < 1e-15);
    }

    #[test]
    fn forced_choices() {
        let emb = table(&[("a", 0, &[1.0, 0.2]), ("c", 0, &[0.3, 1.0]), ("x", 0, &[0.5, 0.5]), ("y", 0, &[-1.0, 0.1])]);
        let s = solve_analogy2("a", "c", &words(&["x"]), &words(&["y"]), &emb).unwrap();
        assert_eq!(s.answer, ("x".to_string(), "y".to_string()));
        let s = solve_antonym("a", &words(&["y"]), &emb, None, SolverConfig::default()).unwrap();
        assert_eq!(s.answer, "y");
    }

    #[test]
    fn outlier_and_symmetric_tie() {
        let emb = table(&[
            ("p", 0, &[1.0, 0.0, 0.0]),
            ("q", 0, &[1.0, 0.01, 0.0]),
            ("r", 0, &[1.0, 0.0, 0.01]),
            ("s", 0, &[0.99, 0.0, 0.0]),
            ("o", 0, &[0.0, 0.0, 1.0]),
            ("u", 0, &[1.0, 0.0, 0.0]),
            ("v", 0, &[-1.0, 0.0, 0.0]),
            ("w", 0, &[0.0, 1.0, 0.0]),
        ]);
        let s = solve_classification(&words(&["p", "q", "o", "r", "s"]), &emb).unwrap();
        assert_eq!(s.answer, "o");
        // u and v mirror each other around w's axis.
        let s = solve_classification(&words(&["u", "v", "w"]), &emb).unwrap();
        assert_eq!(s.answer, "u");
        assert!(solve_classification(&words(&["u", "v"]), &emb).is_err());
    }

    #[test]
    fn zero_relation_reproduces_distance_mode() {
        let emb = table(&[("q", 0, &[0.0, 0.0]), ("a", 0, &[3.0, 0.0]), ("b", 0, &[0.0, 1.0]), ("c", 0, &[-2.0, 0.0])]);
        let cands = words(&["a", "b", "c"]);
        let d = solve_pair("q", &cands, &emb, None, SYNONYM, SolverConfig::default()).unwrap();
        let zero = [0.0, 0.0];
        let m2 = solve_pair("q", &cands, &emb, Some(&zero), SYNONYM, SolverConfig::mode(PairMode::RelationOffset)).unwrap();
        assert_eq!(d.answer, "b");
        assert_eq!(m2.answer, d.answer);
        let r = [-2.0, 0.0];
        let m2 = solve_pair("q", &cands, &emb, Some(&r), SYNONYM, SolverConfig::mode(PairMode::RelationOffset)).unwrap();
        assert_eq!(m2.answer, "c");
        let abs = SolverConfig {
            mode: PairMode::RelationOffset,
            offset: OffsetKind::ElementwiseAbsolute,
        };
        let r = [2.9, 0.0];
        assert_eq!(solve_pair("q", &cands, &emb, Some(&r), SYNONYM, abs).unwrap().answer, "a");
    }

    #[test]
    fn relation_mode_requires_relation() {
        let emb = table(&[("q", 0, &[0.0, 0.0]), ("a", 0, &[3.0, 0.0])]);
        let e = solve_synonym("q", &words(&["a"]), &emb, None, SolverConfig::mode(PairMode::RelationOffset)).unwrap_err();
        assert_eq!(e, SolveError::MissingRelation(SYNONYM.into()));
    }

    #[test]
    fn missing_words() {
        let emb = table(&[("q", 0, &[1.0, 0.0]), ("a", 0, &[3.0, 0.0])]);
        let s = solve_synonym("q", &words(&["zz", "a"]), &emb, None, SolverConfig::default()).unwrap();
        assert_eq!((s.answer.as_str(), s.skipped), ("a", 1));
        assert!(matches!(
            solve_synonym("nope", &words(&["a"]), &emb, None, SolverConfig::default()),
            Err(SolveError::MissingStem(_))
        ));
        assert_eq!(
            solve_synonym("q", &words(&["zz"]), &emb, None, SolverConfig::default()),
            Err(SolveError::NoCandidate)
        );
    }

    #[test]
    fn misrouted_question_falls_back() {
        let emb = table(&[("a", 0, &[1.0, 0.0]), ("c", 0, &[0.0, 1.0]), ("x", 0, &[1.0, 1.0]), ("y", 0, &[1.0, -1.0])]);
        let q: Question = serde_json::from_str(
            r#"{"id":"1","type":"AnalogyII","stem":["a","c"],"candidates":[["x","y"],["y","x"]],"answer":["x","y"]}"#,
        )
        .unwrap();
        let models = Models {
            embeddings: &emb,
            relations: None,
        };
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            dispatch(&q, QuestionType::Classification, models, SolverConfig::default(), &mut rng)
        };
        let d = run(3);
        assert!(d.fallback);
        assert!(matches!(d.failure, Some(SolveError::Format { .. })));
        assert_eq!(d.answer.0.len(), 2);
        assert_eq!(d, run(3));
        let ok = dispatch(&q, QuestionType::AnalogyII, models, SolverConfig::default(), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(!ok.fallback);
    }
}
