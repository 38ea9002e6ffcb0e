//! Computable similarity: normalized compression distance over a real
//! compressor, and a lookup-table oracle for fixed, externally measured
//! distances.

use std::collections::HashMap;
use std::io::Write;

use flate2::write::{DeflateEncoder, GzEncoder, ZlibEncoder};
use flate2::Compression;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("normalized compression distance is undefined for two empty inputs")]
    EmptyInputs,
    #[error("threshold must be a positive number, got {0}")]
    InvalidThreshold(f64),
    #[error("distance must be a finite nonnegative number, got {0}")]
    InvalidDistance(f64),
    #[error("unknown compressor `{0}` (expected deflate, zlib or gzip, optionally with `:LEVEL`)")]
    UnknownCompressor(String),
    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
}

/// Byte-level compressors from the deflate family. The size reported is the
/// length of the complete compressed stream, framing included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compressor {
    Deflate { level: u32 },
    Zlib { level: u32 },
    Gzip { level: u32 },
}

impl Default for Compressor {
    /// Raw deflate at level 9.
    fn default() -> Self {
        Compressor::Deflate { level: 9 }
    }
}

impl Compressor {
    /// Parses `deflate`, `zlib` or `gzip`, optionally followed by `:LEVEL`
    /// (0 to 9; the default level is 9).
    pub fn by_name(name: &str) -> Result<Self, DistanceError> {
        let unknown = || DistanceError::UnknownCompressor(name.to_string());
        let (family, level) = match name.split_once(':') {
            Some((f, l)) => (f, l.parse::<u32>().map_err(|_| unknown())?),
            None => (name, 9),
        };
        if level > 9 {
            return Err(unknown());
        }
        match family {
            "deflate" => Ok(Compressor::Deflate { level }),
            "zlib" => Ok(Compressor::Zlib { level }),
            "gzip" => Ok(Compressor::Gzip { level }),
            _ => Err(unknown()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Compressor::Deflate { level } => format!("deflate:{level}"),
            Compressor::Zlib { level } => format!("zlib:{level}"),
            Compressor::Gzip { level } => format!("gzip:{level}"),
        }
    }

    pub fn compressed_size(&self, data: &[u8]) -> usize {
        // Writes into a Vec cannot fail.
        fn finish<W: Write>(mut w: W, data: &[u8], done: impl FnOnce(W) -> std::io::Result<Vec<u8>>) -> usize {
            w.write_all(data).expect("in-memory write");
            done(w).expect("in-memory finish").len()
        }
        match *self {
            Compressor::Deflate { level } => {
                finish(DeflateEncoder::new(Vec::new(), Compression::new(level)), data, |e| e.finish())
            }
            Compressor::Zlib { level } => {
                finish(ZlibEncoder::new(Vec::new(), Compression::new(level)), data, |e| e.finish())
            }
            Compressor::Gzip { level } => {
                finish(GzEncoder::new(Vec::new(), Compression::new(level)), data, |e| e.finish())
            }
        }
    }
}

/// `(C(xy) - min(C(x), C(y))) / max(C(x), C(y))`, computed in the order given.
/// The result is not symmetrized.
pub fn ncd(compressor: &Compressor, x: &[u8], y: &[u8]) -> Result<f64, DistanceError> {
    if x.is_empty() && y.is_empty() {
        return Err(DistanceError::EmptyInputs);
    }
    let cx = compressor.compressed_size(x) as f64;
    let cy = compressor.compressed_size(y) as f64;
    let mut xy = Vec::with_capacity(x.len() + y.len());
    xy.extend_from_slice(x);
    xy.extend_from_slice(y);
    let cxy = compressor.compressed_size(&xy) as f64;
    Ok((cxy - cx.min(cy)) / cx.max(cy))
}

/// The similarity cut-off `p`; always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(p: f64) -> Result<Self, DistanceError> {
        if p > 0.0 {
            Ok(Threshold(p))
        } else {
            Err(DistanceError::InvalidThreshold(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Distances looked up by ordered word pair, with a fallback for pairs not
/// listed.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    entries: HashMap<(Vec<u8>, Vec<u8>), f64>,
    default: f64,
}

fn check_distance(d: f64) -> Result<f64, DistanceError> {
    if d.is_finite() && d >= 0.0 {
        Ok(d)
    } else {
        Err(DistanceError::InvalidDistance(d))
    }
}

impl DistanceTable {
    pub fn new(default: f64) -> Result<Self, DistanceError> {
        Ok(DistanceTable { entries: HashMap::new(), default: check_distance(default)? })
    }

    pub fn insert(&mut self, x: &[u8], y: &[u8], distance: f64) -> Result<Option<f64>, DistanceError> {
        Ok(self.entries.insert((x.to_vec(), y.to_vec()), check_distance(distance)?))
    }

    pub fn with(mut self, x: &[u8], y: &[u8], distance: f64) -> Result<Self, DistanceError> {
        self.insert(x, y, distance)?;
        Ok(self)
    }

    pub fn get(&self, x: &[u8], y: &[u8]) -> Option<f64> {
        // Borrowed-key lookup would need a custom key type; the tables are tiny.
        self.entries.get(&(x.to_vec(), y.to_vec())).copied()
    }

    pub fn default_distance(&self) -> f64 {
        self.default
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u8], &[u8], f64)> {
        self.entries.iter().map(|((x, y), d)| (x.as_slice(), y.as_slice(), *d))
    }

    /// Parses the tab-separated table format: one `default: <real>` header
    /// line and one `x<TAB>y<TAB>distance` line per entry. Blank lines are
    /// ignored; a pair may appear only once.
    pub fn parse(text: &str) -> Result<Self, DistanceError> {
        let table_err = |line: usize, message: String| DistanceError::Table { line, message };
        let mut default = None;
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            if let Some(value) = line.strip_prefix("default:") {
                if default.is_some() {
                    return Err(table_err(lineno, "duplicate `default:` header".into()));
                }
                let d: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| table_err(lineno, format!("invalid default `{}`", value.trim())))?;
                default = Some(check_distance(d).map_err(|e| table_err(lineno, e.to_string()))?);
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(table_err(lineno, "expected `x<TAB>y<TAB>distance`".into()));
            }
            let d: f64 = fields[2]
                .trim()
                .parse()
                .map_err(|_| table_err(lineno, format!("invalid distance `{}`", fields[2])))?;
            let d = check_distance(d).map_err(|e| table_err(lineno, e.to_string()))?;
            rows.push((lineno, fields[0], fields[1], d));
        }
        let default = default.ok_or_else(|| table_err(1, "missing `default:` header".into()))?;
        let mut table = DistanceTable::new(default)?;
        for (lineno, x, y, d) in rows {
            if table.insert(x.as_bytes(), y.as_bytes(), d)?.is_some() {
                return Err(table_err(lineno, format!("pair ({x}, {y}) listed twice")));
            }
        }
        Ok(table)
    }

    /// Serializes in the format read by [`DistanceTable::parse`], rows sorted.
    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<_> = self.entries().collect();
        rows.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut out = format!("default: {:?}\n", self.default);
        for (x, y, d) in rows {
            out.push_str(&format!(
                "{}\t{}\t{:?}\n",
                String::from_utf8_lossy(x),
                String::from_utf8_lossy(y),
                d
            ));
        }
        out
    }
}

/// A total, deterministic stand-in for the distance `d(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceOracle {
    Ncd(Compressor),
    Table(DistanceTable),
}

impl DistanceOracle {
    /// The NCD oracle maps the pair of empty words to `0.0`, the only case
    /// where [`ncd`] itself is undefined.
    pub fn distance(&self, x: &[u8], y: &[u8]) -> f64 {
        match self {
            DistanceOracle::Ncd(c) => ncd(c, x, y).unwrap_or(0.0),
            DistanceOracle::Table(t) => t.get(x, y).unwrap_or(t.default),
        }
    }

    /// `d(x, y) < p`, strictly.
    pub fn is_similar(&self, p: Threshold, x: &[u8], y: &[u8]) -> bool {
        self.distance(x, y) < p.value()
    }
}

pub fn oracle_distance(oracle: &DistanceOracle, x: &[u8], y: &[u8]) -> f64 {
    oracle.distance(x, y)
}

pub fn is_similar(oracle: &DistanceOracle, p: Threshold, x: &[u8], y: &[u8]) -> bool {
    oracle.is_similar(p, x, y)
}
