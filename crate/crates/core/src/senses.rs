//! Turning a single-sense corpus into a sense-tagged one.
//!
//! Every occurrence of a polysemous dictionary word is represented by the
//! TF·IDF-weighted sum of its context words' pre-trained vectors, divided by
//! the nominal window width `2N`. The occurrences of each word are clustered
//! with spherical k-means (k = number of dictionary senses), clusters are
//! paired with senses by greedy nearest-pair matching against gloss vectors,
//! and each occurrence is relabeled with the sense of its cluster.
//!
//! Sense indices in a tagged corpus are 1-based.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{normalize_tokenize, ContextWindow, TfIdfModel, Vocabulary};
use crate::embedding::{EmbeddingTable, SenseKey};
use crate::error::{Error, Result};
use crate::kmeans::spherical_kmeans;
use crate::linalg::euclidean;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sense {
    #[serde(deserialize_with = "crate::jsonl::string_or_number")]
    pub id: String,
    pub gloss: String,
    #[serde(default)]
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryEntry {
    pub word: String,
    pub senses: Vec<Sense>,
}

/// Dictionary senses per word. Words outside the inventory have one sense.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenseInventory {
    entries: BTreeMap<String, Vec<Sense>>,
}

impl SenseInventory {
    pub fn from_entries<I: IntoIterator<Item = DictionaryEntry>>(entries: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for entry in entries {
            if entry.senses.is_empty() {
                return Err(Error::InvalidConfig(format!("`{}` lists no senses", entry.word)));
            }
            let mut seen = HashSet::new();
            for s in &entry.senses {
                if !seen.insert(&s.id) {
                    return Err(Error::InvalidConfig(format!(
                        "`{}` repeats sense id `{}`",
                        entry.word, s.id
                    )));
                }
            }
            if map.insert(entry.word.clone(), entry.senses).is_some() {
                return Err(Error::InvalidConfig(format!("`{}` listed twice", entry.word)));
            }
        }
        Ok(SenseInventory { entries: map })
    }

    /// JSON Lines: `{"word": .., "senses": [{"id": .., "gloss": .., "examples": [..]}]}`.
    pub fn load_jsonl(path: &Path) -> Result<Self> {
        Self::from_entries(crate::jsonl::read_jsonl::<DictionaryEntry>(path)?)
    }

    pub fn save_jsonl(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (word, senses) in &self.entries {
            let entry = DictionaryEntry {
                word: word.clone(),
                senses: senses.clone(),
            };
            serde_json::to_writer(&mut out, &entry)?;
            writeln!(out).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn senses(&self, word: &str) -> Option<&[Sense]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Number of senses; 1 for words the inventory does not list.
    pub fn sense_count(&self, word: &str) -> u32 {
        self.entries.get(word).map_or(1, |s| s.len() as u32)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Pre-trained single-sense vectors addressed by vocabulary id.
pub struct WordVectors<'a> {
    table: &'a EmbeddingTable,
    rows: Vec<Option<usize>>,
}

impl<'a> WordVectors<'a> {
    /// Uses each word's lowest sense index (sense 0 in single-sense tables).
    pub fn new(table: &'a EmbeddingTable, vocab: &Vocabulary) -> Self {
        let rows = vocab
            .words()
            .iter()
            .map(|w| table.sense_rows(w).first().copied())
            .collect();
        WordVectors { table, rows }
    }

    pub fn get(&self, id: u32) -> Option<&'a [f64]> {
        let table = self.table;
        self.rows.get(id as usize).copied().flatten().map(|r| table.row(r))
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }
}

/// Counts of tokens that could not contribute to a context vector.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ContextCounters {
    /// Tokens without an idf entry (weighted 0).
    pub unknown_tokens: u64,
    /// Tokens without a pre-trained vector.
    pub missing_vectors: u64,
}

/// `ξ = (1/2N) Σ g_w v_w` over context positions, with `g_w` = count of `w`
/// in the window × idf(w). `None` when no context token is usable.
pub fn context_vector(
    window: &ContextWindow,
    half_width: usize,
    tfidf: &TfIdfModel,
    vectors: &WordVectors<'_>,
    counters: &mut ContextCounters,
) -> Option<Vec<f64>> {
    let mut xi = vec![0.0; vectors.dim()];
    let mut usable = 0;
    for &id in &window.context {
        let Some(idf) = tfidf.idf(id) else {
            counters.unknown_tokens += 1;
            continue;
        };
        let Some(v) = vectors.get(id) else {
            counters.missing_vectors += 1;
            continue;
        };
        let tf = window.context.iter().filter(|&&t| t == id).count() as f64;
        let g = tf * idf;
        for (x, vi) in xi.iter_mut().zip(v) {
            *x += g * vi;
        }
        usable += 1;
    }
    if usable == 0 {
        return None;
    }
    let width = (2 * half_width) as f64;
    xi.iter_mut().for_each(|x| *x /= width);
    Some(xi)
}

/// Unweighted mean of the vectors of every in-vocabulary token of the gloss
/// and example sentences.
pub fn gloss_vector(sense: &Sense, vocab: &Vocabulary, vectors: &WordVectors<'_>) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; vectors.dim()];
    let mut n = 0usize;
    let texts = std::iter::once(&sense.gloss).chain(&sense.examples);
    for text in texts {
        for tok in normalize_tokenize(text) {
            if let Some(v) = vocab.id(&tok).and_then(|id| vectors.get(id)) {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
                n += 1;
            }
        }
    }
    if n == 0 {
        return None;
    }
    sum.iter_mut().for_each(|s| *s /= n as f64);
    Some(sum)
}

/// Greedy matching on a square distance matrix: repeatedly take the smallest
/// entry among unmatched rows and columns (ties to the lowest `(row, col)`).
/// Returns `matched[row] = col`.
pub fn greedy_match(dist: &[Vec<f64>]) -> Vec<usize> {
    let k = dist.len();
    let mut row_used = vec![false; k];
    let mut col_used = vec![false; k];
    let mut matched = vec![usize::MAX; k];
    for _ in 0..k {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in (0..k).filter(|&i| !row_used[i]) {
            for j in (0..k).filter(|&j| !col_used[j]) {
                let d = dist[i][j];
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, _) = best.expect("an unmatched pair remains");
        row_used[i] = true;
        col_used[j] = true;
        matched[i] = j;
    }
    matched
}

/// Pairs cluster centroids with sense vectors by Euclidean distance.
/// Returns `sense[cluster]` (0-based).
pub fn match_clusters_to_senses(centroids: &[Vec<f64>], glosses: &[Vec<f64>]) -> Result<Vec<usize>> {
    if centroids.len() != glosses.len() {
        return Err(Error::InvalidConfig(format!(
            "{} clusters cannot be matched to {} senses",
            centroids.len(),
            glosses.len()
        )));
    }
    let dist: Vec<Vec<f64>> = centroids
        .iter()
        .map(|c| glosses.iter().map(|g| euclidean(c, g)).collect())
        .collect();
    Ok(greedy_match(&dist))
}

/// Token stream where each token carries a 1-based sense index.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedCorpus {
    words: Vec<String>,
    tokens: Vec<(u32, u32)>,
}

impl TaggedCorpus {
    pub fn new(words: Vec<String>, tokens: Vec<(u32, u32)>) -> Self {
        TaggedCorpus { words, tokens }
    }

    /// Tags every token with sense 1.
    pub fn untagged(vocab: &Vocabulary, corpus: &[u32]) -> Self {
        TaggedCorpus {
            words: vocab.words().to_vec(),
            tokens: corpus.iter().map(|&w| (w, 1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// `(word index, sense)` pairs; word indices refer to [`Self::words`].
    pub fn tokens(&self) -> &[(u32, u32)] {
        &self.tokens
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn key(&self, i: usize) -> SenseKey {
        let (w, s) = self.tokens[i];
        SenseKey::new(self.words[w as usize].clone(), s)
    }

    /// Whitespace-separated `word#sense` tokens, 1000 per line.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for chunk in self.tokens.chunks(1000) {
            let mut first = true;
            for &(w, s) in chunk {
                if !first {
                    out.write_all(b" ").map_err(|e| Error::io(path, e))?;
                }
                first = false;
                write!(out, "{}#{}", self.words[w as usize], s).map_err(|e| Error::io(path, e))?;
            }
            writeln!(out).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut words = Vec::new();
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut tokens = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            for tok in line.split_whitespace() {
                let key = SenseKey::parse(tok)
                    .filter(|k| k.sense >= 1)
                    .ok_or_else(|| Error::parse(path, n + 1, format!("bad tagged token `{tok}`")))?;
                let w = *index.entry(key.word.clone()).or_insert_with(|| {
                    words.push(key.word);
                    (words.len() - 1) as u32
                });
                tokens.push((w, key.sense));
            }
        }
        Ok(TaggedCorpus { words, tokens })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordClusters {
    pub word: String,
    /// Unit-norm centroids.
    pub centroids: Vec<Vec<f64>>,
    /// `cluster_sense[c]` is the 1-based sense matched to cluster `c`.
    pub cluster_sense: Vec<u32>,
    pub cluster_sizes: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenseClusterModel {
    pub words: BTreeMap<String, WordClusters>,
}

impl SenseClusterModel {
    pub fn save_jsonl(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for clusters in self.words.values() {
            serde_json::to_writer(&mut out, clusters)?;
            writeln!(out).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggerConfig {
    pub window: usize,
    pub seed: u64,
    /// Words seen fewer than `min_occurrences_per_sense * k` times are not
    /// clustered and keep sense 1.
    pub min_occurrences_per_sense: usize,
}

impl Default for TaggerConfig {
    fn default() -> Self {
        TaggerConfig {
            window: 5,
            seed: 1,
            min_occurrences_per_sense: 5,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TagDiagnostics {
    pub clustered_words: Vec<String>,
    /// Too few occurrences for k clusters.
    pub rare_words: Vec<String>,
    /// Some sense had no usable gloss token.
    pub unmatched_words: Vec<String>,
    /// Inventory words absent from the vocabulary.
    pub absent_words: Vec<String>,
    /// Words whose clustering left a cluster empty.
    pub empty_cluster_words: Vec<String>,
    /// Occurrences without a usable context (tagged 1, excluded from clustering).
    pub empty_contexts: u64,
    pub context: ContextCounters,
}

#[derive(Debug, Clone)]
pub struct SenseTagging {
    pub corpus: TaggedCorpus,
    pub clusters: SenseClusterModel,
    pub diagnostics: TagDiagnostics,
}

fn word_seed(seed: u64, word_id: u32) -> u64 {
    seed ^ (word_id as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Relabels every corpus position with a sense index.
pub fn relabel_corpus(
    corpus: &[u32],
    vocab: &Vocabulary,
    embeddings: &EmbeddingTable,
    tfidf: &TfIdfModel,
    inventory: &SenseInventory,
    config: &TaggerConfig,
) -> Result<SenseTagging> {
    if config.window == 0 {
        return Err(Error::InvalidConfig("window half-width must be at least 1".into()));
    }
    let vectors = WordVectors::new(embeddings, vocab);
    let mut diagnostics = TagDiagnostics::default();
    let mut targets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for word in inventory.words() {
        match vocab.id(word) {
            Some(id) if inventory.sense_count(word) >= 2 => {
                targets.insert(id, Vec::new());
            }
            Some(_) => {}
            None => diagnostics.absent_words.push(word.to_string()),
        }
    }
    for (pos, id) in corpus.iter().enumerate() {
        if let Some(p) = targets.get_mut(id) {
            p.push(pos);
        }
    }

    let mut tokens: Vec<(u32, u32)> = corpus.iter().map(|&w| (w, 1)).collect();
    let mut clusters = SenseClusterModel::default();
    for (&id, positions) in &targets {
        let word = vocab.word(id);
        let senses = inventory.senses(word).expect("target words come from the inventory");
        let k = senses.len();
        if positions.len() < config.min_occurrences_per_sense * k {
            diagnostics.rare_words.push(word.to_string());
            continue;
        }
        let glosses: Option<Vec<Vec<f64>>> =
            senses.iter().map(|s| gloss_vector(s, vocab, &vectors)).collect();
        let Some(glosses) = glosses else {
            diagnostics.unmatched_words.push(word.to_string());
            continue;
        };

        let mut points = Vec::with_capacity(positions.len());
        let mut point_pos = Vec::with_capacity(positions.len());
        for &pos in positions {
            let window = crate::corpus::window_at(corpus, pos, config.window);
            match context_vector(&window, config.window, tfidf, &vectors, &mut diagnostics.context) {
                Some(xi) => {
                    points.push(xi);
                    point_pos.push(pos);
                }
                None => diagnostics.empty_contexts += 1,
            }
        }
        if points.is_empty() {
            diagnostics.unmatched_words.push(word.to_string());
            continue;
        }
        let result = spherical_kmeans(&points, k, word_seed(config.seed, id))?;
        if !result.empty_clusters.is_empty() {
            diagnostics.empty_cluster_words.push(word.to_string());
        }
        let sense_of = match_clusters_to_senses(&result.centroids, &glosses)?;
        let mut sizes = vec![0usize; k];
        for (&pos, assignment) in point_pos.iter().zip(&result.assignments) {
            if let Some(c) = assignment {
                tokens[pos].1 = sense_of[*c] as u32 + 1;
                sizes[*c] += 1;
            }
        }
        diagnostics.clustered_words.push(word.to_string());
        clusters.words.insert(
            word.to_string(),
            WordClusters {
                word: word.to_string(),
                centroids: result.centroids,
                cluster_sense: sense_of.iter().map(|&s| s as u32 + 1).collect(),
                cluster_sizes: sizes,
            },
        );
    }
    Ok(SenseTagging {
        corpus: TaggedCorpus::new(vocab.words().to_vec(), tokens),
        clusters,
        diagnostics,
    })
}
