//! Skip-gram with negative sampling.
//!
//! The trainer works over an abstract "unit" id space. Plain single-sense
//! training uses vocabulary ids as units; joint word-sense training (see
//! [`crate::joint`]) uses one unit per `(word, sense)` pair and reuses the
//! same epoch loop.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{window_bounds, Vocabulary};
use crate::embedding::{EmbeddingTable, SenseKey};
use crate::error::{Error, Result};
use crate::linalg::{dot, sigmoid};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Half-width N of the context window.
    pub window: usize,
    pub dim: usize,
    pub negatives: usize,
    pub epochs: usize,
    /// Initial learning rate; decays linearly towards
    /// `learning_rate * min_lr_ratio` over the run.
    pub learning_rate: f64,
    pub min_lr_ratio: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            window: 5,
            dim: 64,
            negatives: 3,
            epochs: 3,
            learning_rate: 0.025,
            min_lr_ratio: 1e-4,
            seed: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.dim == 0 {
            return bad("dimension must be at least 1");
        }
        if self.negatives == 0 {
            return bad("negative count must be at least 1");
        }
        if !(self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(0.0..=1.0).contains(&self.min_lr_ratio) {
            return bad("min_lr_ratio must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Draws units i.i.d. with probability proportional to `count^0.75`.
#[derive(Debug, Clone)]
pub struct NegativeSampler {
    dist: WeightedIndex<f64>,
    probs: Vec<f64>,
}

impl NegativeSampler {
    pub const POWER: f64 = 0.75;

    pub fn new(counts: &[u64]) -> Result<Self> {
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(Self::POWER)).collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidConfig("negative sampler needs a nonzero count".into()));
        }
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidConfig(format!("negative sampler: {e}")))?;
        let probs = weights.iter().map(|w| w / total).collect();
        Ok(NegativeSampler { dist, probs })
    }

    pub fn for_vocabulary(vocab: &Vocabulary) -> Result<Self> {
        Self::new(vocab.counts())
    }

    pub fn probability(&self, unit: u32) -> f64 {
        self.probs[unit as usize]
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.dist.sample(rng) as u32
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<u32> {
        (0..count).map(|_| self.draw(rng)).collect()
    }
}

/// `ln σ(x)` without overflow.
fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Center-role ("input") and context-role ("output") parameter tables.
#[derive(Debug, Clone, PartialEq)]
pub struct SkipGramModel {
    dim: usize,
    units: usize,
    input: Vec<f64>,
    output: Vec<f64>,
    scratch_delta: Vec<f64>,
    scratch_coef: Vec<f64>,
}

impl SkipGramModel {
    /// Center vectors uniform in `[-0.5/D, 0.5/D]`, context vectors zero.
    pub fn initialized<R: Rng + ?Sized>(units: usize, dim: usize, rng: &mut R) -> Self {
        let half = 0.5 / dim as f64;
        let input = (0..units * dim).map(|_| rng.random_range(-half..=half)).collect();
        SkipGramModel {
            dim,
            units,
            input,
            output: vec![0.0; units * dim],
            scratch_delta: vec![0.0; dim],
            scratch_coef: Vec::new(),
        }
    }

    pub fn from_parts(dim: usize, input: Vec<f64>, output: Vec<f64>) -> Self {
        assert_eq!(input.len(), output.len());
        assert!(dim > 0 && input.len() % dim == 0);
        SkipGramModel {
            dim,
            units: input.len() / dim,
            input,
            output,
            scratch_delta: vec![0.0; dim],
            scratch_coef: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn units(&self) -> usize {
        self.units
    }

    pub fn input(&self, unit: u32) -> &[f64] {
        let i = unit as usize * self.dim;
        &self.input[i..i + self.dim]
    }

    pub fn input_mut(&mut self, unit: u32) -> &mut [f64] {
        let i = unit as usize * self.dim;
        &mut self.input[i..i + self.dim]
    }

    pub fn output(&self, unit: u32) -> &[f64] {
        let i = unit as usize * self.dim;
        &self.output[i..i + self.dim]
    }

    pub fn output_mut(&mut self, unit: u32) -> &mut [f64] {
        let i = unit as usize * self.dim;
        &mut self.output[i..i + self.dim]
    }

    pub fn inputs(&self) -> &[f64] {
        &self.input
    }

    pub fn outputs(&self) -> &[f64] {
        &self.output
    }

    pub fn all_finite(&self) -> bool {
        self.input.iter().chain(&self.output).all(|v| v.is_finite())
    }

    /// Negative log-likelihood of one `(center, context)` pair against the
    /// given negatives: `-ln σ(u_o·v_c) - Σ ln σ(-u_n·v_c)`.
    pub fn pair_loss(&self, center: u32, context: u32, negatives: &[u32]) -> f64 {
        let v = self.input(center);
        let mut loss = -log_sigmoid(dot(self.output(context), v));
        for &n in negatives {
            loss -= log_sigmoid(-dot(self.output(n), v));
        }
        loss
    }

    /// Analytic gradient of [`Self::pair_loss`] at the current parameters.
    pub fn pair_gradient(&self, center: u32, context: u32, negatives: &[u32]) -> PairGradient {
        let v = self.input(center);
        let mut grad_center = vec![0.0; self.dim];
        let mut outputs = Vec::with_capacity(negatives.len() + 1);
        for (k, &target) in std::iter::once(&context).chain(negatives).enumerate() {
            let u = self.output(target);
            let label = if k == 0 { 1.0 } else { 0.0 };
            let coef = sigmoid(dot(u, v)) - label;
            for (g, ui) in grad_center.iter_mut().zip(u) {
                *g += coef * ui;
            }
            outputs.push((target, v.iter().map(|vi| coef * vi).collect()));
        }
        PairGradient {
            loss: self.pair_loss(center, context, negatives),
            center: grad_center,
            outputs,
        }
    }

    /// One gradient step on [`Self::pair_loss`]; returns the loss before the
    /// update. All partial derivatives are taken at the current parameters
    /// before anything is written, so repeated negatives accumulate exactly.
    pub fn sgd_step(&mut self, center: u32, context: u32, negatives: &[u32], lr: f64) -> f64 {
        let dim = self.dim;
        let c = center as usize * dim;
        self.scratch_coef.clear();
        self.scratch_delta.iter_mut().for_each(|d| *d = 0.0);
        let mut loss = 0.0;
        for (k, &target) in std::iter::once(&context).chain(negatives).enumerate() {
            let label = if k == 0 { 1.0 } else { 0.0 };
            let t = target as usize * dim;
            let score = dot(&self.output[t..t + dim], &self.input[c..c + dim]);
            loss -= if k == 0 {
                log_sigmoid(score)
            } else {
                log_sigmoid(-score)
            };
            // d(-loss)/d(score)
            let g = label - sigmoid(score);
            self.scratch_coef.push(g);
            for (d, u) in self.scratch_delta.iter_mut().zip(&self.output[t..t + dim]) {
                *d += g * u;
            }
        }
        if lr == 0.0 {
            return loss;
        }
        for (k, &target) in std::iter::once(&context).chain(negatives).enumerate() {
            let step = lr * self.scratch_coef[k];
            let t = target as usize * dim;
            for j in 0..dim {
                self.output[t + j] += step * self.input[c + j];
            }
        }
        for (v, d) in self.input[c..c + dim].iter_mut().zip(&self.scratch_delta) {
            *v += lr * d;
        }
        loss
    }
}

/// Gradient of one pair's loss. `outputs` holds one entry per target
/// occurrence (context first, then negatives); repeated targets add up.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    pub center: Vec<f64>,
    pub outputs: Vec<(u32, Vec<f64>)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainStats {
    pub pairs: u64,
    /// Mean pair loss over the final epoch.
    pub final_epoch_loss: f64,
}

/// Runs `config.epochs` passes of skip-gram over `corpus`, calling
/// `after_pair(model, pairs_done, lr)` after each pair update. Negatives that
/// coincide with the positive context are skipped.
pub(crate) fn run_epochs<F>(
    model: &mut SkipGramModel,
    corpus: &[u32],
    sampler: &NegativeSampler,
    config: &TrainConfig,
    rng: &mut ChaCha8Rng,
    mut after_pair: F,
) -> Result<TrainStats>
where
    F: FnMut(&mut SkipGramModel, u64, f64),
{
    let total_steps = (config.epochs * corpus.len()).max(1) as f64;
    let mut stats = TrainStats::default();
    let mut negatives = Vec::with_capacity(config.negatives);
    let mut steps = 0u64;
    for epoch in 0..config.epochs {
        let mut epoch_loss = 0.0;
        let mut epoch_pairs = 0u64;
        for pos in 0..corpus.len() {
            let progress = steps as f64 / total_steps;
            let lr = config.learning_rate * (1.0 - progress).max(config.min_lr_ratio);
            steps += 1;
            let center = corpus[pos];
            for ctx_pos in window_bounds(corpus.len(), pos, config.window) {
                if ctx_pos == pos {
                    continue;
                }
                let context = corpus[ctx_pos];
                negatives.clear();
                for _ in 0..config.negatives {
                    let n = sampler.draw(rng);
                    if n != context {
                        negatives.push(n);
                    }
                }
                epoch_loss += model.sgd_step(center, context, &negatives, lr);
                epoch_pairs += 1;
                stats.pairs += 1;
                after_pair(model, stats.pairs, lr);
            }
        }
        if !model.all_finite() {
            return Err(Error::Diverged { epoch });
        }
        stats.final_epoch_loss = if epoch_pairs > 0 {
            epoch_loss / epoch_pairs as f64
        } else {
            0.0
        };
    }
    Ok(stats)
}

pub(crate) fn check_corpus(corpus: &[u32], units: usize) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if let Some(&bad) = corpus.iter().find(|&&u| u as usize >= units) {
        return Err(Error::InvalidConfig(format!(
            "corpus id {bad} outside the {units}-entry vocabulary"
        )));
    }
    Ok(())
}

/// Result of single-sense training. Every vocabulary word gets sense index 0.
#[derive(Debug, Clone)]
pub struct SkipGram {
    pub model: SkipGramModel,
    pub stats: TrainStats,
}

impl SkipGram {
    /// Center-role vectors keyed `word#0`, in vocabulary id order.
    pub fn center_table(&self, vocab: &Vocabulary) -> EmbeddingTable {
        let keys = vocab.words().iter().map(|w| SenseKey::new(w.clone(), 0)).collect();
        EmbeddingTable::from_rows(self.model.dim(), keys, self.model.inputs().to_vec())
            .expect("model rows match vocabulary")
    }
}

/// Trains single-sense embeddings over an id-encoded corpus.
pub fn train_skipgram(corpus: &[u32], vocab: &Vocabulary, config: &TrainConfig) -> Result<SkipGram> {
    config.validate()?;
    check_corpus(corpus, vocab.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = SkipGramModel::initialized(vocab.len(), config.dim, &mut rng);
    let sampler = NegativeSampler::for_vocabulary(vocab)?;
    let stats = run_epochs(&mut model, corpus, &sampler, config, &mut rng, |_, _, _| {})?;
    Ok(SkipGram { model, stats })
}
