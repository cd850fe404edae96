//! Joint training of word-sense vectors and relation vectors.
//!
//! The objective is `J = α·E − L`: `L` is the skip-gram log-likelihood over
//! the sense-tagged corpus and `E` is a translation margin energy over
//! relation triples,
//!
//! ```text
//! E = Σ [γ + ‖h + r − t‖ − ‖h' + r − t'‖]₊
//! ```
//!
//! where `(h', r, t')` is the triple with its head or tail replaced by a
//! random word-sense pair. Each relation vector is `r = 2σ(x) − 1` over a free
//! latent `x`, which keeps every component inside `(−1, 1)`.
//!
//! Training alternates: after every `pairs_per_batch` skip-gram updates one
//! minibatch of triples takes a descent step on `α·E`.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{EmbeddingTable, SenseKey};
use crate::error::{Error, Result};
use crate::linalg::{norm, sigmoid};
use crate::senses::{SenseInventory, TaggedCorpus};
use crate::skipgram::{check_corpus, run_epochs, NegativeSampler, SkipGramModel, TrainConfig, TrainStats};

/// Latent parameters are clamped here; beyond it `2σ(x) − 1` rounds to ±1.
pub const LATENT_LIMIT: f64 = 30.0;

pub const SYNONYM: &str = "synonym";
pub const ANTONYM: &str = "antonym";

/// Componentwise `2σ(x) − 1`.
pub fn relation_vector(latent: &[f64]) -> Vec<f64> {
    latent
        .iter()
        .map(|&x| 2.0 * sigmoid(x.clamp(-LATENT_LIMIT, LATENT_LIMIT)) - 1.0)
        .collect()
}

/// A relation triple as written in a triple file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawTriple {
    pub head: SenseKey,
    pub relation: String,
    pub tail: SenseKey,
}

/// Reads `head_word<TAB>head_sense<TAB>relation<TAB>tail_word<TAB>tail_sense`.
pub fn load_triples(path: &Path) -> Result<Vec<RawTriple>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(Error::parse(path, n + 1, "expected five tab-separated fields"));
        }
        let sense = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::parse(path, n + 1, format!("bad sense index `{s}`")))
        };
        out.push(RawTriple {
            head: SenseKey::new(f[0], sense(f[1])?),
            relation: f[2].to_string(),
            tail: SenseKey::new(f[3], sense(f[4])?),
        });
    }
    Ok(out)
}

pub fn save_triples(triples: &[RawTriple], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for t in triples {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            t.head.word, t.head.sense, t.relation, t.tail.word, t.tail.sense
        )
        .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Dense ids for every `(word, sense)` pair. The senses of one word occupy a
/// contiguous id range.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSpace {
    keys: Vec<SenseKey>,
    index: HashMap<SenseKey, u32>,
    // (first unit, sense count) per word
    words: Vec<(u32, u32)>,
}

impl UnitSpace {
    /// Senses `1..=k` for each word, `k` taken from the inventory (and at
    /// least the largest tag observed).
    pub fn new<'a, I>(words: I, inventory: &SenseInventory, observed_max: &HashMap<&str, u32>) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut keys = Vec::new();
        let mut index = HashMap::new();
        let mut spans = Vec::new();
        for w in words {
            let k = inventory
                .sense_count(w)
                .max(observed_max.get(w).copied().unwrap_or(1));
            spans.push((keys.len() as u32, k));
            for s in 1..=k {
                let key = SenseKey::new(w, s);
                index.insert(key.clone(), keys.len() as u32);
                keys.push(key);
            }
        }
        UnitSpace {
            keys,
            index,
            words: spans,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn key(&self, unit: u32) -> &SenseKey {
        &self.keys[unit as usize]
    }

    pub fn keys(&self) -> &[SenseKey] {
        &self.keys
    }

    pub fn unit(&self, key: &SenseKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Uniform word, then uniform sense of that word.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let (first, k) = self.words[rng.random_range(0..self.words.len())];
        first + rng.random_range(0..k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RelationTriple {
    pub head: u32,
    pub relation: u32,
    pub tail: u32,
}

/// Latent relation parameters `x`, one row per named relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationModel {
    names: Vec<String>,
    dim: usize,
    latent: Vec<f64>,
}

impl RelationModel {
    pub fn zeros(names: Vec<String>, dim: usize) -> Self {
        let latent = vec![0.0; names.len() * dim];
        RelationModel { names, dim, latent }
    }

    pub fn from_latent(names: Vec<String>, dim: usize, latent: Vec<f64>) -> Result<Self> {
        if latent.len() != names.len() * dim {
            return Err(Error::InvalidConfig("latent size does not match relations".into()));
        }
        Ok(RelationModel { names, dim, latent })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn latent(&self, rel: u32) -> &[f64] {
        let i = rel as usize * self.dim;
        &self.latent[i..i + self.dim]
    }

    pub fn latent_mut(&mut self, rel: u32) -> &mut [f64] {
        let i = rel as usize * self.dim;
        &mut self.latent[i..i + self.dim]
    }

    pub fn vector(&self, rel: u32) -> Vec<f64> {
        relation_vector(self.latent(rel))
    }

    /// Bounded relation vector by name.
    pub fn vector_named(&self, name: &str) -> Option<Vec<f64>> {
        self.index(name).map(|r| self.vector(r))
    }

    /// Header `<count> <dimension>`, then `name x_1 .. x_D` per relation.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(out, "{} {}", self.names.len(), self.dim).map_err(io)?;
        for (i, name) in self.names.iter().enumerate() {
            write!(out, "{name}").map_err(io)?;
            for v in self.latent(i as u32) {
                write!(out, " {v}").map_err(io)?;
            }
            writeln!(out).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse(path, 1, "missing header"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::parse(path, 1, "bad header")))
            .collect::<Result<_>>()?;
        let [count, dim] = nums[..] else {
            return Err(Error::parse(path, 1, "header must be `<count> <dimension>`"));
        };
        let mut names = Vec::new();
        let mut latent = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut fields = line.split(' ');
            let name = fields.next().unwrap_or_default().to_string();
            let row: Vec<f64> = fields
                .map(|f| f.parse().map_err(|_| Error::parse(path, n + 2, "bad float")))
                .collect::<Result<_>>()?;
            if row.len() != dim {
                return Err(Error::parse(path, n + 2, "wrong number of components"));
            }
            names.push(name);
            latent.extend(row);
        }
        if names.len() != count {
            return Err(Error::parse(path, 1, "relation count does not match header"));
        }
        RelationModel::from_latent(names, dim, latent)
    }
}

/// Replaces the head (probability 1/2) or the tail with a uniformly random
/// word-sense pair, redrawing while the result is a known triple or has
/// head = tail. Gives up after `MAX_REDRAWS` and returns the last draw.
pub fn corrupt_triplet<R: Rng + ?Sized>(
    triple: &RelationTriple,
    space: &UnitSpace,
    known: &HashSet<RelationTriple>,
    rng: &mut R,
) -> RelationTriple {
    const MAX_REDRAWS: usize = 1000;
    let replace_head = rng.random_bool(0.5);
    let mut out = *triple;
    for _ in 0..MAX_REDRAWS {
        let unit = space.random_unit(rng);
        out = *triple;
        if replace_head {
            out.head = unit;
        } else {
            out.tail = unit;
        }
        if out != *triple && out.head != out.tail && !known.contains(&out) {
            break;
        }
    }
    out
}

/// One hinge term `γ + ‖h + r − t‖ − ‖h' + r − t'‖` before the `[·]₊`.
pub fn margin(
    embeddings: &[f64],
    relations: &RelationModel,
    positive: &RelationTriple,
    corrupted: &RelationTriple,
    gamma: f64,
) -> f64 {
    let dim = relations.dim();
    let r = relations.vector(positive.relation);
    let row = |u: u32| &embeddings[u as usize * dim..(u as usize + 1) * dim];
    let dist = |h: u32, t: u32| {
        row(h)
            .iter()
            .zip(&r)
            .zip(row(t))
            .map(|((a, b), c)| (a + b - c) * (a + b - c))
            .sum::<f64>()
            .sqrt()
    };
    gamma + dist(positive.head, positive.tail) - dist(corrupted.head, corrupted.tail)
}

/// `Σ [margin]₊` over `(positive, corrupted)` pairs; `embeddings` is the
/// row-major center-vector table indexed by unit.
pub fn relational_energy(
    pairs: &[(RelationTriple, RelationTriple)],
    embeddings: &[f64],
    relations: &RelationModel,
    gamma: f64,
) -> f64 {
    pairs
        .iter()
        .map(|(p, c)| margin(embeddings, relations, p, c, gamma).max(0.0))
        .sum()
}

/// Sparse gradient of the energy. Entries may repeat a unit or relation;
/// they add up.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyGradient {
    pub energy: f64,
    pub units: Vec<(u32, Vec<f64>)>,
    pub latent: Vec<(u32, Vec<f64>)>,
    /// Pairs whose margin was positive.
    pub active: usize,
}

/// Value and gradient of [`relational_energy`] with respect to the center
/// vectors and the latent relation parameters. The subgradient at the hinge
/// kink, and at zero distances, is taken as zero.
pub fn energy_gradient(
    pairs: &[(RelationTriple, RelationTriple)],
    embeddings: &[f64],
    relations: &RelationModel,
    gamma: f64,
) -> EnergyGradient {
    let dim = relations.dim();
    let row = |u: u32| &embeddings[u as usize * dim..(u as usize + 1) * dim];
    let mut out = EnergyGradient::default();
    for (pos, neg) in pairs {
        let x = relations.latent(pos.relation);
        let r = relation_vector(x);
        let diff = |t: &RelationTriple| -> Vec<f64> {
            row(t.head)
                .iter()
                .zip(&r)
                .zip(row(t.tail))
                .map(|((h, ri), tl)| h + ri - tl)
                .collect()
        };
        let e_pos = diff(pos);
        let e_neg = diff(neg);
        let (d_pos, d_neg) = (norm(&e_pos), norm(&e_neg));
        let m = gamma + d_pos - d_neg;
        if m <= 0.0 {
            continue;
        }
        out.energy += m;
        out.active += 1;
        let unit_dir = |e: &[f64], d: f64| -> Vec<f64> {
            if d > 0.0 {
                e.iter().map(|v| v / d).collect()
            } else {
                vec![0.0; dim]
            }
        };
        let g_pos = unit_dir(&e_pos, d_pos);
        let g_neg = unit_dir(&e_neg, d_neg);
        out.units.push((pos.head, g_pos.clone()));
        out.units.push((pos.tail, g_pos.iter().map(|v| -v).collect()));
        out.units.push((neg.head, g_neg.iter().map(|v| -v).collect()));
        out.units.push((neg.tail, g_neg.clone()));
        // dE/dr = g_pos − g_neg, chained through dr/dx = 2σ(x)(1 − σ(x)).
        let gx = g_pos
            .iter()
            .zip(&g_neg)
            .zip(x)
            .map(|((a, b), &xi)| {
                let xi = xi.clamp(-LATENT_LIMIT, LATENT_LIMIT);
                let s = sigmoid(xi);
                (a - b) * 2.0 * s * (1.0 - s)
            })
            .collect();
        out.latent.push((pos.relation, gx));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointConfig {
    /// Skip-gram settings; `seed` also drives relation sampling.
    pub skipgram: TrainConfig,
    /// Margin γ.
    pub gamma: f64,
    /// Weight α of the relation energy.
    pub alpha: f64,
    /// Corrupted triples drawn per positive triple and step.
    pub corruptions: usize,
    pub batch_size: usize,
    /// Skip-gram pair updates between relation minibatches.
    pub pairs_per_batch: u64,
    /// Energy steps use `alpha * relation_learning_rate`, decayed like the
    /// skip-gram rate. The default makes that product equal the default
    /// skip-gram rate at `alpha = 0.01`.
    pub relation_learning_rate: f64,
}

impl Default for JointConfig {
    fn default() -> Self {
        JointConfig {
            skipgram: TrainConfig::default(),
            gamma: 1.0,
            alpha: 0.01,
            corruptions: 1,
            batch_size: 64,
            pairs_per_batch: 1024,
            relation_learning_rate: 2.5,
        }
    }
}

impl JointConfig {
    pub fn validate(&self) -> Result<()> {
        self.skipgram.validate()?;
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidConfig("margin gamma must be positive".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::InvalidConfig("alpha must be non-negative".into()));
        }
        if self.corruptions == 0 || self.batch_size == 0 || self.pairs_per_batch == 0 {
            return Err(Error::InvalidConfig(
                "corruptions, batch size and pairs per batch must be positive".into(),
            ));
        }
        if !(self.relation_learning_rate > 0.0) {
            return Err(Error::InvalidConfig("relation learning rate must be positive".into()));
        }
        Ok(())
    }
}

/// Triples dropped before training, with the reason.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripleReport {
    pub accepted: usize,
    pub unknown_key: usize,
    pub self_loop: usize,
    pub duplicate: usize,
}

impl TripleReport {
    pub fn rejected(&self) -> usize {
        self.unknown_key + self.self_loop + self.duplicate
    }
}

/// Resolves raw triples against the unit space. `synonym` and `antonym`
/// always hold relation ids 0 and 1; other names follow first appearance.
pub fn resolve_triples(
    raw: &[RawTriple],
    space: &UnitSpace,
) -> (Vec<RelationTriple>, Vec<String>, TripleReport) {
    let mut names: Vec<String> = vec![SYNONYM.to_string(), ANTONYM.to_string()];
    let mut report = TripleReport::default();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in raw {
        let (Some(head), Some(tail)) = (space.unit(&t.head), space.unit(&t.tail)) else {
            report.unknown_key += 1;
            continue;
        };
        if head == tail {
            report.self_loop += 1;
            continue;
        }
        let relation = match names.iter().position(|n| *n == t.relation) {
            Some(i) => i as u32,
            None => {
                names.push(t.relation.clone());
                (names.len() - 1) as u32
            }
        };
        let triple = RelationTriple {
            head,
            relation,
            tail,
        };
        if !seen.insert(triple) {
            report.duplicate += 1;
            continue;
        }
        out.push(triple);
    }
    report.accepted = out.len();
    (out, names, report)
}

#[derive(Debug, Clone)]
pub struct JointModel {
    pub space: UnitSpace,
    pub model: SkipGramModel,
    pub relations: RelationModel,
    pub triples: Vec<RelationTriple>,
    pub triple_report: TripleReport,
    pub stats: JointStats,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct JointStats {
    pub skipgram: TrainStats,
    pub relation_batches: u64,
    /// Fraction of sampled margins still violated in the last minibatch.
    pub last_batch_active: f64,
}

impl JointModel {
    /// Center vectors keyed `word#sense`.
    pub fn table(&self) -> EmbeddingTable {
        EmbeddingTable::from_rows(self.model.dim(), self.space.keys().to_vec(), self.model.inputs().to_vec())
            .expect("unit space matches model rows")
    }
}

/// Unit space over the words of a tagged corpus. Words that only occur in
/// triples get no unit, so their triples are rejected.
pub fn unit_space_for(tagged: &TaggedCorpus, inventory: &SenseInventory) -> UnitSpace {
    let mut observed: HashMap<&str, u32> = HashMap::new();
    for &(w, s) in tagged.tokens() {
        let e = observed.entry(tagged.words()[w as usize].as_str()).or_insert(1);
        *e = (*e).max(s);
    }
    UnitSpace::new(tagged.words().iter().map(String::as_str), inventory, &observed)
}

fn apply_energy_step(
    grad: &EnergyGradient,
    model: &mut SkipGramModel,
    relations: &mut RelationModel,
    step: f64,
) {
    for (unit, g) in &grad.units {
        for (v, gi) in model.input_mut(*unit).iter_mut().zip(g) {
            *v -= step * gi;
        }
    }
    for (rel, g) in &grad.latent {
        for (x, gi) in relations.latent_mut(*rel).iter_mut().zip(g) {
            *x = (*x - step * gi).clamp(-LATENT_LIMIT, LATENT_LIMIT);
        }
    }
}

/// Minimizes `α·E − L` over the tagged corpus and the relation triples.
pub fn train_joint(
    tagged: &TaggedCorpus,
    inventory: &SenseInventory,
    raw_triples: &[RawTriple],
    config: &JointConfig,
) -> Result<JointModel> {
    config.validate()?;
    let space = unit_space_for(tagged, inventory);
    let corpus: Vec<u32> = tagged
        .tokens()
        .iter()
        .map(|&(w, s)| {
            space
                .unit(&SenseKey::new(tagged.words()[w as usize].clone(), s))
                .expect("every tagged token has a unit")
        })
        .collect();
    check_corpus(&corpus, space.len())?;
    let (triples, names, triple_report) = resolve_triples(raw_triples, &space);
    let known: HashSet<RelationTriple> = triples.iter().copied().collect();

    let mut counts = vec![0u64; space.len()];
    for &u in &corpus {
        counts[u as usize] += 1;
    }
    let sampler = NegativeSampler::new(&counts)?;

    let sg = &config.skipgram;
    let mut rng = ChaCha8Rng::seed_from_u64(sg.seed);
    let mut model = SkipGramModel::initialized(space.len(), sg.dim, &mut rng);
    let mut relations = RelationModel::zeros(names, sg.dim);
    // separate stream so that α = 0 reproduces plain skip-gram exactly
    let mut rel_rng = ChaCha8Rng::seed_from_u64(sg.seed ^ 0x5EED_0F_4E1A_7105);

    let energy_on = config.alpha > 0.0 && !triples.is_empty();
    let mut batches = 0u64;
    let mut last_active = 0.0;
    let mut batch = Vec::with_capacity(config.batch_size * config.corruptions);
    let skipgram = run_epochs(&mut model, &corpus, &sampler, sg, &mut rng, |model, pairs, lr| {
        if !energy_on || pairs % config.pairs_per_batch != 0 {
            return;
        }
        batch.clear();
        for _ in 0..config.batch_size {
            let t = triples[rel_rng.random_range(0..triples.len())];
            for _ in 0..config.corruptions {
                batch.push((t, corrupt_triplet(&t, &space, &known, &mut rel_rng)));
            }
        }
        let grad = energy_gradient(&batch, model.inputs(), &relations, config.gamma);
        let step = config.alpha * config.relation_learning_rate * lr / sg.learning_rate;
        apply_energy_step(&grad, model, &mut relations, step);
        batches += 1;
        last_active = grad.active as f64 / batch.len() as f64;
    })?;
    if !model.all_finite() {
        return Err(Error::Diverged { epoch: sg.epochs });
    }
    Ok(JointModel {
        space,
        model,
        relations,
        triples,
        triple_report,
        stats: JointStats {
            skipgram,
            relation_batches: batches,
            last_batch_active: last_active,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_vector_values() {
        assert_eq!(relation_vector(&[0.0]), vec![0.0]);
        let r = relation_vector(&[3f64.ln()]);
        assert!((r[0] - 0.5).abs() < 1e-15);
        let r = relation_vector(&[1e6, -1e6]);
        assert!(r[0] < 1.0 && r[1] > -1.0);
    }

    fn space(words: &[&str]) -> UnitSpace {
        UnitSpace::new(words.iter().copied(), &SenseInventory::default(), &HashMap::new())
    }

    #[test]
    fn hinge_terms() {
        // d(h+r,t)=0 and d(h'+r,t')=γ+1 -> 0
        let rel = RelationModel::zeros(vec!["synonym".into()], 1);
        let emb = vec![0.0, 0.0, 0.0, 2.0];
        let p = RelationTriple { head: 0, relation: 0, tail: 1 };
        let c = RelationTriple { head: 2, relation: 0, tail: 3 };
        assert_eq!(margin(&emb, &rel, &p, &c, 1.0), -1.0);
        assert_eq!(relational_energy(&[(p, c)], &emb, &rel, 1.0), 0.0);
        // γ=1, d(h+r,t)=2, d(h'+r,t')=1 -> 2
        let emb = vec![0.0, 2.0, 0.0, 1.0];
        assert_eq!(relational_energy(&[(p, c)], &emb, &rel, 1.0), 2.0);
        let g = energy_gradient(&[(p, c)], &emb, &rel, 1.0);
        assert_eq!(g.energy, 2.0);
        assert_eq!(g.active, 1);
    }

    #[test]
    fn satisfied_margin_has_no_gradient() {
        let rel = RelationModel::zeros(vec!["synonym".into()], 2);
        let emb = vec![0.0, 0.0, 0.1, 0.0, 0.0, 0.0, 5.0, 5.0];
        let p = RelationTriple { head: 0, relation: 0, tail: 1 };
        let c = RelationTriple { head: 2, relation: 0, tail: 3 };
        let g = energy_gradient(&[(p, c)], &emb, &rel, 1.0);
        assert!(g.units.is_empty() && g.latent.is_empty());
        assert_eq!(g.energy, 0.0);
    }

    #[test]
    fn corruption_changes_exactly_one_side() {
        let sp = space(&["a", "b", "c", "d", "e"]);
        let t = RelationTriple { head: 0, relation: 0, tail: 1 };
        let known: HashSet<_> = [t].into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let c = corrupt_triplet(&t, &sp, &known, &mut rng);
            assert_eq!(c.relation, t.relation);
            assert!((c.head == t.head) != (c.tail == t.tail));
            assert_ne!(c.head, c.tail);
        }
    }

    #[test]
    fn known_triples_are_filtered() {
        let sp = space(&["a", "b", "c", "d"]);
        let t = RelationTriple { head: 0, relation: 0, tail: 1 };
        let other = RelationTriple { head: 2, relation: 0, tail: 1 };
        let known: HashSet<_> = [t, other].into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let c = corrupt_triplet(&t, &sp, &known, &mut rng);
            assert!(!known.contains(&c));
        }
    }

    #[test]
    fn triple_resolution_reports_rejections() {
        let sp = space(&["a", "b"]);
        let raw = |h: &str, t: &str| RawTriple {
            head: SenseKey::new(h, 1),
            relation: "antonym".into(),
            tail: SenseKey::new(t, 1),
        };
        let (ok, names, report) =
            resolve_triples(&[raw("a", "b"), raw("a", "b"), raw("a", "zzz"), raw("a", "a")], &sp);
        assert_eq!(ok.len(), 1);
        assert_eq!(names[ok[0].relation as usize], "antonym");
        assert_eq!(report.duplicate, 1);
        assert_eq!(report.unknown_key, 1);
        assert_eq!(report.self_loop, 1);
        assert_eq!(report.rejected(), 3);
    }

    #[test]
    fn relation_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rel.txt");
        let m = RelationModel::from_latent(vec!["synonym".into(), "antonym".into()], 2, vec![0.1, -2.0, 3.5, 1e-9])
            .unwrap();
        m.save(&path).unwrap();
        assert_eq!(RelationModel::load(&path).unwrap(), m);
    }
}
