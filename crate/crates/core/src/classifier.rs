//! Question-type classifier: TF·IDF features over question text and five
//! one-vs-rest linear SVMs.
//!
//! Each SVM minimizes the regularized hinge loss
//! `λ/2 ‖w‖² + mean(max(0, 1 − y (w·x + b)))` in the primal with the Pegasos
//! stochastic subgradient method. The bias is folded into the weight vector
//! as a constant feature.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::normalize_tokenize;
use crate::error::{Error, Result};
use crate::question::QuestionType;

/// Document-level idf over the training questions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdfTable {
    pub documents: usize,
    pub df: BTreeMap<String, usize>,
}

impl IdfTable {
    pub fn fit<S: AsRef<str>>(texts: &[S]) -> Self {
        let mut df = BTreeMap::new();
        for text in texts {
            let mut terms = normalize_tokenize(text.as_ref());
            terms.sort();
            terms.dedup();
            for t in terms {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        IdfTable {
            documents: texts.len(),
            df,
        }
    }

    /// Smoothed idf, `ln((1 + n) / (1 + df)) + 1`; unseen terms get 1.
    pub fn idf(&self, term: &str) -> f64 {
        match self.df.get(term) {
            Some(&df) => ((1.0 + self.documents as f64) / (1.0 + df as f64)).ln() + 1.0,
            None => 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.df.len()
    }

    pub fn is_empty(&self) -> bool {
        self.df.is_empty()
    }
}

/// Nonzero TF·IDF weights keyed by term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseFeature(pub BTreeMap<String, f64>);

impl SparseFeature {
    pub fn get(&self, term: &str) -> f64 {
        self.0.get(term).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn featurize_question(text: &str, idf: &IdfTable) -> Result<SparseFeature> {
    let tokens = normalize_tokenize(text);
    if tokens.is_empty() {
        return Err(Error::EmptyQuestion);
    }
    let mut tf: BTreeMap<String, usize> = BTreeMap::new();
    for t in tokens {
        *tf.entry(t).or_insert(0) += 1;
    }
    Ok(SparseFeature(
        tf.into_iter()
            .map(|(t, n)| {
                let w = n as f64 * idf.idf(&t);
                (t, w)
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            lambda: 1e-3,
            epochs: 200,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryClassifier {
    pub category: QuestionType,
    /// Aligned with the model's sorted term list.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub positives: usize,
    /// No training example: the classifier always answers negative.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub idf: IdfTable,
    pub hyper: Hyper,
    pub training_examples: usize,
    pub classes: Vec<BinaryClassifier>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub qtype: QuestionType,
    /// Decision scores in [`QuestionType::ALL`] order.
    pub scores: [f64; 5],
}

fn dense(feature: &SparseFeature, idf: &IdfTable) -> Vec<(usize, f64)> {
    // Term index is the rank in the sorted df map; unseen terms drop out.
    let mut out = Vec::with_capacity(feature.len());
    let mut terms = idf.df.keys().enumerate().peekable();
    for (term, &w) in &feature.0 {
        while let Some(&(_, t)) = terms.peek() {
            if t.as_str() < term.as_str() {
                terms.next();
            } else {
                break;
            }
        }
        if let Some(&(i, t)) = terms.peek() {
            if t == term {
                out.push((i, w));
            }
        }
    }
    out
}

fn sparse_dot(w: &[f64], x: &[(usize, f64)]) -> f64 {
    x.iter().map(|&(i, v)| w[i] * v).sum()
}

fn pegasos(xs: &[Vec<(usize, f64)>], ys: &[f64], dim: usize, hyper: &Hyper, seed: u64) -> (Vec<f64>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut t = 0u64;
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (hyper.lambda * t as f64);
            let violated = ys[i] * (sparse_dot(&w, &xs[i]) + b) < 1.0;
            let shrink = 1.0 - eta * hyper.lambda;
            for v in w.iter_mut() {
                *v *= shrink;
            }
            b *= shrink;
            if violated {
                for &(j, v) in &xs[i] {
                    w[j] += eta * ys[i] * v;
                }
                b += eta * ys[i];
            }
        }
    }
    (w, b)
}

pub fn train_ovr<S: AsRef<str>>(labeled: &[(S, QuestionType)], hyper: Hyper) -> Result<LinearModel> {
    if labeled.is_empty() {
        return Err(Error::NoTrainingData);
    }
    if !(hyper.lambda > 0.0) || hyper.epochs == 0 {
        return Err(Error::InvalidConfig("classifier needs lambda > 0 and epochs >= 1".into()));
    }
    let texts: Vec<&str> = labeled.iter().map(|(t, _)| t.as_ref()).collect();
    let idf = IdfTable::fit(&texts);
    let xs = texts
        .iter()
        .map(|t| featurize_question(t, &idf).map(|f| dense(&f, &idf)))
        .collect::<Result<Vec<_>>>()?;
    let dim = idf.len();
    let mut classes = Vec::with_capacity(5);
    for (c, category) in QuestionType::ALL.into_iter().enumerate() {
        let ys: Vec<f64> = labeled
            .iter()
            .map(|(_, q)| if *q == category { 1.0 } else { -1.0 })
            .collect();
        let positives = ys.iter().filter(|&&y| y > 0.0).count();
        let class = if positives == 0 {
            BinaryClassifier {
                category,
                weights: vec![0.0; dim],
                bias: -1.0,
                positives,
                degenerate: true,
            }
        } else {
            let seed = hyper.seed ^ (c as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let (weights, bias) = pegasos(&xs, &ys, dim, &hyper, seed);
            BinaryClassifier {
                category,
                weights,
                bias,
                positives,
                degenerate: false,
            }
        };
        classes.push(class);
    }
    Ok(LinearModel {
        idf,
        hyper,
        training_examples: labeled.len(),
        classes,
    })
}

impl LinearModel {
    pub fn degenerate_categories(&self) -> Vec<QuestionType> {
        self.classes.iter().filter(|c| c.degenerate).map(|c| c.category).collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: LinearModel = serde_json::from_str(&text)?;
        let ordered = model.classes.len() == 5
            && model.classes.iter().zip(QuestionType::ALL).all(|(c, q)| c.category == q);
        if !ordered || model.classes.iter().any(|c| c.weights.len() != model.idf.len()) {
            return Err(Error::parse(path, 1, "classifier model is inconsistent"));
        }
        Ok(model)
    }
}

pub fn classify(text: &str, model: &LinearModel) -> Result<Prediction> {
    let x = dense(&featurize_question(text, &model.idf)?, &model.idf);
    let mut scores = [0.0; 5];
    for (s, class) in scores.iter_mut().zip(&model.classes) {
        *s = sparse_dot(&class.weights, &x) + class.bias;
    }
    let mut best = 0;
    for i in 1..5 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Ok(Prediction {
        qtype: QuestionType::ALL[best],
        scores,
    })
}
