//! End-to-end evaluation: solving question sets, scoring answers per type,
//! the random-guess baseline and report output.

pub mod experiments;
pub mod fixtures;
pub mod synth;
pub mod templates;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{classify, LinearModel};
use crate::error::{Error, Result};
use crate::jsonl::{read_jsonl, write_jsonl};
use crate::question::{Answer, Question, QuestionType};
use crate::solvers::{dispatch, random_answer, Models, SolverConfig};

/// Solver output for one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_type: Option<QuestionType>,
    pub answer: Answer,
    #[serde(default)]
    pub fallback: bool,
    #[serde(default)]
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

pub fn load_answers(path: &Path) -> Result<Vec<AnswerRecord>> {
    read_jsonl(path)
}

pub fn save_answers(answers: &[AnswerRecord], path: &Path) -> Result<()> {
    write_jsonl(answers, path)
}

/// Routes every question through the classifier (or its labelled type when
/// no classifier is given) and the matching solver. The fallback stream is
/// seeded with `seed` and only consumed by fallbacks.
pub fn solve_questions(
    questions: &[Question],
    classifier: Option<&LinearModel>,
    models: Models<'_>,
    config: SolverConfig,
    seed: u64,
) -> Result<Vec<AnswerRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(questions.len());
    for q in questions {
        let predicted = match classifier {
            Some(model) => classify(&templates::question_text(q), model)?.qtype,
            None => q
                .qtype
                .ok_or_else(|| Error::InvalidConfig(format!("question {} has no type and no classifier is given", q.id)))?,
        };
        let d = dispatch(q, predicted, models, config, &mut rng);
        out.push(AnswerRecord {
            id: q.id.clone(),
            predicted_type: Some(predicted),
            answer: d.answer,
            fallback: d.fallback,
            skipped: d.skipped,
            failure: d.failure.map(|e| e.to_string()),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeScore {
    pub qtype: QuestionType,
    pub count: usize,
    /// Mean number of correct answers (fractional for averaged baselines).
    pub correct: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: String,
    pub per_type: Vec<TypeScore>,
    pub count: usize,
    pub correct: f64,
    /// Correct over all questions; unanswered ones count as wrong.
    pub accuracy: f64,
    pub unanswered: usize,
    pub fallbacks: usize,
    pub skipped_candidates: usize,
    /// Share of questions whose predicted type matched the label.
    pub classifier_accuracy: Option<f64>,
}

impl EvalReport {
    pub fn type_score(&self, qtype: QuestionType) -> &TypeScore {
        &self.per_type[qtype.index()]
    }
}

fn ratio(num: f64, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}

fn gold_type(q: &Question) -> Result<QuestionType> {
    q.qtype
        .ok_or_else(|| Error::InvalidConfig(format!("question {} has no type label", q.id)))
}

/// Exact-match scoring. Analogy-II answers must match both words.
pub fn evaluate(method: &str, questions: &[Question], answers: &[AnswerRecord]) -> Result<EvalReport> {
    let index: HashMap<&str, &Question> = questions.iter().map(|q| (q.id.as_str(), q)).collect();
    let mut by_id: HashMap<&str, &AnswerRecord> = HashMap::new();
    for a in answers {
        if !index.contains_key(a.id.as_str()) {
            return Err(Error::InvalidConfig(format!("answer for unknown question `{}`", a.id)));
        }
        by_id.insert(a.id.as_str(), a);
    }
    let mut counts = [0usize; 5];
    let mut correct = [0f64; 5];
    let (mut unanswered, mut fallbacks, mut skipped) = (0, 0, 0);
    let (mut typed, mut typed_right) = (0usize, 0usize);
    for q in questions {
        let t = gold_type(q)?.index();
        counts[t] += 1;
        let Some(a) = by_id.get(q.id.as_str()) else {
            unanswered += 1;
            continue;
        };
        fallbacks += a.fallback as usize;
        skipped += a.skipped;
        if let Some(p) = a.predicted_type {
            typed += 1;
            typed_right += (p.index() == t) as usize;
        }
        if q.answer.as_ref() == Some(&a.answer) {
            correct[t] += 1.0;
        }
    }
    Ok(build_report(method, counts, correct, unanswered, fallbacks, skipped, (typed > 0).then(|| ratio(typed_right as f64, typed))))
}

fn build_report(
    method: &str,
    counts: [usize; 5],
    correct: [f64; 5],
    unanswered: usize,
    fallbacks: usize,
    skipped_candidates: usize,
    classifier_accuracy: Option<f64>,
) -> EvalReport {
    let per_type = QuestionType::ALL
        .into_iter()
        .map(|q| TypeScore {
            qtype: q,
            count: counts[q.index()],
            correct: correct[q.index()],
            accuracy: ratio(correct[q.index()], counts[q.index()]),
        })
        .collect();
    let count = counts.iter().sum();
    let total: f64 = correct.iter().sum();
    EvalReport {
        method: method.to_string(),
        per_type,
        count,
        correct: total,
        accuracy: ratio(total, count),
        unanswered,
        fallbacks,
        skipped_candidates,
        classifier_accuracy,
    }
}

/// Uniform random candidate per list, averaged over `trials` runs.
pub fn random_baseline(questions: &[Question], trials: usize, seed: u64) -> Result<EvalReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("random baseline needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0usize; 5];
    let mut correct = [0f64; 5];
    for q in questions {
        counts[gold_type(q)?.index()] += 1;
    }
    for _ in 0..trials {
        for q in questions {
            let t = gold_type(q)?.index();
            if q.answer.as_ref() == Some(&random_answer(q, &mut rng)) {
                correct[t] += 1.0;
            }
        }
    }
    for c in &mut correct {
        *c /= trials as f64;
    }
    Ok(build_report("RG", counts, correct, 0, 0, 0, None))
}

/// Expected accuracy of uniform guessing, `Σ Π 1/|list| / n`.
pub fn random_expectation(questions: &[Question]) -> f64 {
    let sum: f64 = questions
        .iter()
        .map(|q| q.candidate_lists().iter().map(|l| 1.0 / l.len() as f64).product::<f64>())
        .sum();
    ratio(sum, questions.len())
}

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

/// Fixed-width accuracy table, one row per report.
pub fn format_table(reports: &[EvalReport]) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<8}", "method");
    for q in QuestionType::ALL {
        let _ = write!(s, " {:>14}", q.name());
    }
    let _ = writeln!(s, " {:>8} {:>9} {:>10} {:>10}", "Total", "fallback", "unanswered", "classifier");
    for r in reports {
        let _ = write!(s, "{:<8}", r.method);
        for t in &r.per_type {
            let _ = write!(s, " {:>14}", pct(t.accuracy));
        }
        let cls = r.classifier_accuracy.map(pct).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, " {:>8} {:>9} {:>10} {:>10}", pct(r.accuracy), r.fallbacks, r.unanswered, cls);
    }
    let _ = write!(s, "{:<8}", "count");
    if let Some(r) = reports.first() {
        for t in &r.per_type {
            let _ = write!(s, " {:>14}", t.count);
        }
        let _ = writeln!(s, " {:>8}", r.count);
    }
    s
}

/// Where the JSON Lines twin of a table report goes.
pub fn records_path(report: &Path) -> PathBuf {
    if report.extension().is_some_and(|e| e == "jsonl") {
        report.with_extension("records.jsonl")
    } else {
        report.with_extension("jsonl")
    }
}

/// Writes the table to `path` and one JSON record per report beside it.
pub fn write_reports(reports: &[EvalReport], path: &Path) -> Result<PathBuf> {
    fs::write(path, format_table(reports)).map_err(|e| Error::io(path, e))?;
    let records = records_path(path);
    write_jsonl(reports, &records)?;
    Ok(records)
}
