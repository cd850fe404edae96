//! Dense vectors keyed by `(word, sense index)` and their text format.
//!
//! File layout: a header line `<entry_count> <dimension>`, then one line per
//! entry, `word#<sense_index>` followed by the components. Floats are written
//! with the shortest representation that round-trips, so a write/read cycle
//! is lossless.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SenseKey {
    pub word: String,
    pub sense: u32,
}

impl SenseKey {
    pub fn new(word: impl Into<String>, sense: u32) -> Self {
        SenseKey {
            word: word.into(),
            sense,
        }
    }

    /// Parses `word#sense`; the last `#` separates the sense index.
    pub fn parse(s: &str) -> Option<Self> {
        let (word, sense) = s.rsplit_once('#')?;
        if word.is_empty() {
            return None;
        }
        Some(SenseKey::new(word, sense.parse().ok()?))
    }
}

impl fmt::Display for SenseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.word, self.sense)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    keys: Vec<SenseKey>,
    data: Vec<f64>,
    index: HashMap<SenseKey, usize>,
    // rows of each word, sorted by sense index
    by_word: HashMap<String, Vec<usize>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            keys: Vec::new(),
            data: Vec::new(),
            index: HashMap::new(),
            by_word: HashMap::new(),
        }
    }

    /// Builds a table from parallel keys and row-major data.
    pub fn from_rows(dim: usize, keys: Vec<SenseKey>, data: Vec<f64>) -> Result<Self> {
        if data.len() != keys.len() * dim {
            return Err(Error::InvalidConfig(format!(
                "{} keys with dimension {dim} need {} values, got {}",
                keys.len(),
                keys.len() * dim,
                data.len()
            )));
        }
        let mut table = EmbeddingTable::new(dim);
        table.data.reserve(data.len());
        for (key, row) in keys.into_iter().zip(data.chunks(dim.max(1))) {
            table.push(key, row)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, key: SenseKey, vector: &[f64]) -> Result<usize> {
        if vector.len() != self.dim {
            return Err(Error::InvalidConfig(format!(
                "vector for {key} has dimension {}, table has {}",
                vector.len(),
                self.dim
            )));
        }
        if self.index.contains_key(&key) {
            return Err(Error::InvalidConfig(format!("duplicate embedding key {key}")));
        }
        let row = self.keys.len();
        let rows = self.by_word.entry(key.word.clone()).or_default();
        let at = rows.partition_point(|&r| self.keys[r].sense < key.sense);
        rows.insert(at, row);
        self.index.insert(key.clone(), row);
        self.keys.push(key);
        self.data.extend_from_slice(vector);
        Ok(row)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[SenseKey] {
        &self.keys
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row_of(&self, word: &str, sense: u32) -> Option<usize> {
        self.index.get(&SenseKey::new(word, sense)).copied()
    }

    pub fn get(&self, word: &str, sense: u32) -> Option<&[f64]> {
        self.row_of(word, sense).map(|r| self.row(r))
    }

    /// Rows of every sense of `word`, ordered by sense index; empty if unknown.
    pub fn sense_rows(&self, word: &str) -> &[usize] {
        self.by_word.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.by_word.contains_key(word)
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.len(), self.dim)?;
        for (i, key) in self.keys.iter().enumerate() {
            write!(out, "{key}")?;
            for v in self.row(i) {
                write!(out, " {v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_text(&mut out).map_err(|e| Error::io(path, e))?;
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing header"))?
            .map_err(|e| Error::io(path, e))?;
        let mut parts = header.split_whitespace();
        let (count, dim) = match (parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(d), None) => (
                c.parse::<usize>()
                    .map_err(|_| Error::parse(path, 1, "bad entry count"))?,
                d.parse::<usize>()
                    .map_err(|_| Error::parse(path, 1, "bad dimension"))?,
            ),
            _ => return Err(Error::parse(path, 1, "header must be `<entry_count> <dimension>`")),
        };
        let mut table = EmbeddingTable::new(dim);
        let mut row = vec![0.0; dim];
        for (n, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let lineno = n + 2;
            let mut fields = line.split(' ');
            let key = fields
                .next()
                .and_then(SenseKey::parse)
                .ok_or_else(|| Error::parse(path, lineno, "expected `word#sense`"))?;
            let mut filled = 0;
            for field in fields {
                if filled == dim {
                    return Err(Error::parse(path, lineno, "too many components"));
                }
                row[filled] = field
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, "bad float"))?;
                filled += 1;
            }
            if filled != dim {
                return Err(Error::parse(path, lineno, "too few components"));
            }
            table
                .push(key, &row)
                .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        }
        if table.len() != count {
            return Err(Error::parse(
                path,
                1,
                format!("header promises {count} entries, found {}", table.len()),
            ));
        }
        Ok(table)
    }
}
