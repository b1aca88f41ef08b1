//! Seeded Zipfian workload generation and stream file I/O.
//!
//! Items are drawn i.i.d. with P(rank i) = i^(−ρ) / Σ_{j=1..U} j^(−ρ) by
//! inverse-CDF lookup over a precomputed cumulative table; the item id is the
//! rank (1-based). The generator algorithm is pinned and recorded in the
//! metadata sidecar so streams can be regenerated bit-for-bit.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::summary::Item;

/// Identifier of the pinned PRNG, recorded in stream metadata.
pub const GENERATOR_ID: &str = "chacha8";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipfSpec {
    /// Number of distinct items U; ids are 1..=U.
    pub universe: u64,
    /// Skew exponent ρ > 0.
    pub skew: f64,
    pub seed: u64,
    /// Stream length n.
    pub length: u64,
}

/// Inverse-CDF sampler over ranks 1..=U.
pub struct ZipfGenerator {
    cdf: Vec<f64>,
    rng: ChaCha8Rng,
}

impl ZipfGenerator {
    pub fn new(spec: &ZipfSpec) -> Result<Self, Error> {
        if spec.universe == 0 {
            return Err(Error::InvalidUniverse);
        }
        if !(spec.skew > 0.0 && spec.skew.is_finite()) {
            return Err(Error::InvalidSkew(spec.skew));
        }
        let mut cdf = Vec::with_capacity(spec.universe as usize);
        let mut acc = 0.0f64;
        for i in 1..=spec.universe {
            acc += (i as f64).powf(-spec.skew);
            cdf.push(acc);
        }
        for v in &mut cdf {
            *v /= acc;
        }
        Ok(Self { cdf, rng: ChaCha8Rng::seed_from_u64(spec.seed) })
    }

    pub fn next_item(&mut self) -> Item {
        // 53-bit uniform in [0, 1); the final cdf entry is exactly 1.0, so
        // the search always lands on a valid rank.
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let idx = self.cdf.partition_point(|&c| c <= u);
        debug_assert!(idx < self.cdf.len());
        idx as u64 + 1
    }
}

/// The full sequence for `spec`, identical for identical (seed, spec).
pub fn generate_zipf(spec: &ZipfSpec) -> Result<Vec<Item>, Error> {
    let mut gen = ZipfGenerator::new(spec)?;
    Ok((0..spec.length).map(|_| gen.next_item()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFormat {
    /// Raw little-endian u64 ids, no header.
    Binary,
    /// One decimal id per line.
    Text,
}

pub fn write_stream(path: &Path, stream: &[Item], format: StreamFormat) -> Result<(), Error> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    match format {
        StreamFormat::Binary => {
            for &item in stream {
                out.write_all(&item.to_le_bytes())?;
            }
        }
        StreamFormat::Text => {
            for &item in stream {
                writeln!(out, "{item}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_stream(path: &Path, format: StreamFormat) -> Result<Vec<Item>, Error> {
    match format {
        StreamFormat::Binary => {
            let bytes = fs::read(path)?;
            let tail = bytes.len() % 8;
            if tail != 0 {
                return Err(Error::Parse {
                    offset: (bytes.len() - tail) as u64,
                    reason: format!("truncated record: {tail} trailing bytes"),
                });
            }
            Ok(bytes
                .chunks_exact(8)
                .map(|c| u64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect())
        }
        StreamFormat::Text => {
            let mut reader = BufReader::new(fs::File::open(path)?);
            let mut stream = Vec::new();
            let mut line = String::new();
            let mut offset = 0u64;
            loop {
                line.clear();
                let read = reader.read_line(&mut line)?;
                if read == 0 {
                    return Ok(stream);
                }
                let id = line.trim().parse::<u64>().map_err(|e| Error::Parse {
                    offset,
                    reason: format!("invalid item id {:?}: {e}", line.trim_end()),
                })?;
                stream.push(id);
                offset += read as u64;
            }
        }
    }
}

/// Sidecar describing how a stream file was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamMetadata {
    pub universe: u64,
    pub skew: f64,
    pub seed: u64,
    pub length: u64,
    pub generator: String,
}

impl StreamMetadata {
    pub fn for_spec(spec: &ZipfSpec) -> Self {
        Self {
            universe: spec.universe,
            skew: spec.skew,
            seed: spec.seed,
            length: spec.length,
            generator: GENERATOR_ID.to_string(),
        }
    }
}

pub fn write_metadata(path: &Path, spec: &ZipfSpec) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(&StreamMetadata::for_spec(spec))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

pub fn read_metadata(path: &Path) -> Result<StreamMetadata, Error> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
