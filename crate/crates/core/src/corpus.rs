//! Text normalization, vocabulary construction and window-level TF·IDF.
//!
//! The corpus is handled as one flat token stream: line breaks carry no
//! meaning. Tokens below the vocabulary's `min_count` are removed from the
//! id stream entirely, so windows are formed over surviving tokens only.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};

const ONES: [&str; 20] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
];

const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

/// Largest integer rewritten into words; longer digit strings stay verbatim.
pub const MAX_SPELLED_NUMBER: u64 = 999_999;

fn push_below_thousand(n: u64, out: &mut Vec<String>) {
    debug_assert!(n < 1000);
    let hundreds = n / 100;
    let rest = n % 100;
    if hundreds > 0 {
        out.push(ONES[hundreds as usize].to_string());
        out.push("hundred".to_string());
    }
    if rest == 0 {
        return;
    }
    if rest < 20 {
        out.push(ONES[rest as usize].to_string());
    } else if rest % 10 == 0 {
        out.push(TENS[(rest / 10) as usize].to_string());
    } else {
        out.push(format!("{}-{}", TENS[(rest / 10) as usize], ONES[(rest % 10) as usize]));
    }
}

/// English words for `n` in `0..=999_999`, one token per word
/// ("twenty-one" stays a single token).
pub fn number_words(n: u64) -> Option<Vec<String>> {
    if n > MAX_SPELLED_NUMBER {
        return None;
    }
    if n == 0 {
        return Some(vec![ONES[0].to_string()]);
    }
    let mut out = Vec::new();
    let thousands = n / 1000;
    if thousands > 0 {
        push_below_thousand(thousands, &mut out);
        out.push("thousand".to_string());
    }
    push_below_thousand(n % 1000, &mut out);
    Some(out)
}

/// Lowercases, splits on whitespace, strips punctuation from token edges and
/// spells out standalone integers.
pub fn normalize_tokenize(raw: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for piece in raw.split_whitespace() {
        let lowered = piece.to_lowercase();
        let trimmed = lowered.trim_matches(|c: char| !c.is_alphanumeric());
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.bytes().all(|b| b.is_ascii_digit()) {
            let spelled = trimmed.parse::<u64>().ok().and_then(number_words);
            if let Some(words) = spelled {
                tokens.extend(words);
                continue;
            }
        }
        tokens.push(trimmed.to_string());
    }
    tokens
}

/// Token ↔ id mapping with occurrence counts. Ids are dense and ordered by
/// descending frequency, ties broken lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, u32>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Builds from `(token, count)` pairs, applying the id ordering rule.
    pub fn from_counts<I, S>(counts: I, min_count: usize, total_tokens: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        if min_count == 0 {
            return Err(Error::InvalidConfig("min_count must be at least 1".into()));
        }
        let mut entries: Vec<(String, u64)> = counts
            .into_iter()
            .map(|(w, c)| (w.into(), c))
            .filter(|(_, c)| *c >= min_count as u64)
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary { min_count });
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut words = Vec::with_capacity(entries.len());
        let mut freq = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (w, c)) in entries.into_iter().enumerate() {
            index.insert(w.clone(), i as u32);
            words.push(w);
            freq.push(c);
        }
        Ok(Vocabulary {
            words,
            counts: freq,
            index,
            total_tokens,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of tokens in the stream the vocabulary was built from.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Tokens that fell below `min_count`.
    pub fn dropped_tokens(&self) -> u64 {
        self.total_tokens - self.counts.iter().sum::<u64>()
    }

    /// Maps tokens to ids, silently dropping out-of-vocabulary tokens.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<u32> {
        tokens.iter().filter_map(|t| self.id(t.as_ref())).collect()
    }

    /// `token<TAB>id<TAB>count`, one line per entry, sorted by id.
    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (i, (w, c)) in self.words.iter().zip(&self.counts).enumerate() {
            writeln!(out, "{w}\t{i}\t{c}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_tsv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut words = Vec::new();
        let mut counts = Vec::new();
        let mut index = HashMap::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(path, n + 1, "expected token<TAB>id<TAB>count"));
            }
            let id: usize = fields[1]
                .parse()
                .map_err(|_| Error::parse(path, n + 1, "bad id"))?;
            let count: u64 = fields[2]
                .parse()
                .map_err(|_| Error::parse(path, n + 1, "bad count"))?;
            if id != words.len() {
                return Err(Error::parse(path, n + 1, "ids must be dense and sorted"));
            }
            if index.insert(fields[0].to_string(), id as u32).is_some() {
                return Err(Error::parse(path, n + 1, "duplicate token"));
            }
            words.push(fields[0].to_string());
            counts.push(count);
        }
        if words.is_empty() {
            return Err(Error::EmptyVocabulary { min_count: 1 });
        }
        let total_tokens = counts.iter().sum();
        Ok(Vocabulary {
            words,
            counts,
            index,
            total_tokens,
        })
    }
}

/// Counts token frequencies and keeps those reaching `min_count`.
pub fn build_vocabulary<S: AsRef<str>>(tokens: &[S], min_count: usize) -> Result<Vocabulary> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_ref()).or_default() += 1;
    }
    Vocabulary::from_counts(counts, min_count, tokens.len() as u64)
}

/// One position of the stream with its surrounding tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextWindow {
    pub center: u32,
    /// Up to `half_width` tokens on each side, left to right, center excluded.
    pub context: Vec<u32>,
    pub position: usize,
}

/// Iterator over every position of an id stream; edges are truncated.
pub struct Windows<'a> {
    corpus: &'a [u32],
    half_width: usize,
    next: usize,
}

impl Iterator for Windows<'_> {
    type Item = ContextWindow;

    fn next(&mut self) -> Option<ContextWindow> {
        let pos = self.next;
        if pos >= self.corpus.len() {
            return None;
        }
        self.next += 1;
        Some(window_at(self.corpus, pos, self.half_width))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.corpus.len() - self.next.min(self.corpus.len());
        (left, Some(left))
    }
}

impl ExactSizeIterator for Windows<'_> {}

pub fn window_bounds(len: usize, pos: usize, half_width: usize) -> Range<usize> {
    pos.saturating_sub(half_width)..(pos + half_width + 1).min(len)
}

pub fn window_at(corpus: &[u32], pos: usize, half_width: usize) -> ContextWindow {
    let range = window_bounds(corpus.len(), pos, half_width);
    let context = corpus[range.start..pos]
        .iter()
        .chain(&corpus[pos + 1..range.end])
        .copied()
        .collect();
    ContextWindow {
        center: corpus[pos],
        context,
        position: pos,
    }
}

pub fn iter_windows(corpus: &[u32], half_width: usize) -> Result<Windows<'_>> {
    if half_width == 0 {
        return Err(Error::InvalidConfig("window half-width must be at least 1".into()));
    }
    Ok(Windows {
        corpus,
        half_width,
        next: 0,
    })
}

/// Per-token window document frequencies for a range of window centers.
/// Shards over disjoint center ranges merge by addition.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowDocFreq {
    pub doc_freq: Vec<u64>,
    pub windows: u64,
}

impl WindowDocFreq {
    pub fn count(corpus: &[u32], vocab_len: usize, half_width: usize, centers: Range<usize>) -> Self {
        let mut doc_freq = vec![0u64; vocab_len];
        // stamp[t] = 1 + last window index in which t was counted
        let mut stamp = vec![0usize; vocab_len];
        let mut windows = 0u64;
        for pos in centers {
            let range = window_bounds(corpus.len(), pos, half_width);
            for (offset, &tok) in corpus[range.clone()].iter().enumerate() {
                if range.start + offset == pos {
                    continue;
                }
                let t = tok as usize;
                if stamp[t] != pos + 1 {
                    stamp[t] = pos + 1;
                    doc_freq[t] += 1;
                }
            }
            windows += 1;
        }
        WindowDocFreq { doc_freq, windows }
    }

    pub fn merge(mut self, other: &WindowDocFreq) -> Self {
        for (a, b) in self.doc_freq.iter_mut().zip(&other.doc_freq) {
            *a += b;
        }
        self.windows += other.windows;
        self
    }
}

/// Inverse document frequencies where each context window is one document.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfModel {
    idf: Vec<f64>,
    windows: u64,
}

impl TfIdfModel {
    /// `idf(w) = ln((1 + W) / (1 + df(w))) + 1`.
    pub fn from_doc_freq(df: &WindowDocFreq) -> Self {
        let w = df.windows as f64;
        let idf = df
            .doc_freq
            .iter()
            .map(|&d| ((1.0 + w) / (1.0 + d as f64)).ln() + 1.0)
            .collect();
        TfIdfModel {
            idf,
            windows: df.windows,
        }
    }

    pub fn from_idf(idf: Vec<f64>, windows: u64) -> Self {
        TfIdfModel { idf, windows }
    }

    /// `None` for ids outside the vocabulary the model was built on.
    pub fn idf(&self, id: u32) -> Option<f64> {
        self.idf.get(id as usize).copied()
    }

    pub fn idf_table(&self) -> &[f64] {
        &self.idf
    }

    pub fn windows(&self) -> u64 {
        self.windows
    }

    pub fn write_tsv(&self, vocab: &Vocabulary, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (i, v) in self.idf.iter().enumerate() {
            writeln!(out, "{}\t{}", vocab.word(i as u32), v).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}

pub fn window_tfidf(corpus: &[u32], vocab: &Vocabulary, half_width: usize) -> Result<TfIdfModel> {
    if half_width == 0 {
        return Err(Error::InvalidConfig("window half-width must be at least 1".into()));
    }
    let df = WindowDocFreq::count(corpus, vocab.len(), half_width, 0..corpus.len());
    Ok(TfIdfModel::from_doc_freq(&df))
}

/// Reads a UTF-8 text file and normalizes it into tokens.
pub fn read_corpus(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(normalize_tokenize(&text))
}

/// Writes tokens space-separated, wrapping lines every `per_line` tokens.
pub fn write_tokens<S: AsRef<str>>(tokens: &[S], path: &Path, per_line: usize) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for chunk in tokens.chunks(per_line.max(1)) {
        let line: Vec<&str> = chunk.iter().map(|t| t.as_ref()).collect();
        writeln!(out, "{}", line.join(" ")).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
