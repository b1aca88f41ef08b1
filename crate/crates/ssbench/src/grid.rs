//! Grid file parsing. A grid is a sequence of `[experiment]` stanzas of flat
//! `key = value` lines; n, k, rho, workers and mode take comma lists and the
//! cross product of one stanza's lists is the set of cells it contributes.
//!
//! ```text
//! # accuracy sweep
//! [experiment]
//! n = 10000000
//! k = 2000
//! rho = 1.1
//! workers = 1,2,4,8,16
//! mode = flat,hybrid
//! seed = 42
//! ```

use std::str::FromStr;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridExperiment {
    pub n: Vec<u64>,
    pub k: Vec<usize>,
    pub rho: Vec<f64>,
    pub workers: Vec<usize>,
    pub mode: Vec<String>,
    /// Universe size U for the Zipf draw.
    pub universe: u64,
    /// Stanza-level seed; the CLI may override it.
    pub seed: Option<u64>,
    /// Repetitions per cell; the CLI may override it.
    pub reps: Option<usize>,
    /// Process count P for hybrid cells; threads per process is workers / P.
    pub processes: usize,
}

impl Default for GridExperiment {
    fn default() -> Self {
        Self {
            n: Vec::new(),
            k: Vec::new(),
            rho: Vec::new(),
            workers: Vec::new(),
            mode: vec!["flat".to_string()],
            universe: 1_000_000,
            seed: None,
            reps: None,
            processes: 2,
        }
    }
}

fn parse_list<T: FromStr>(value: &str, lineno: usize) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .with_context(|| format!("line {lineno}: bad list element {:?}", part.trim()))
        })
        .collect()
}

fn parse_scalar<T: FromStr>(value: &str, lineno: usize) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .trim()
        .parse::<T>()
        .with_context(|| format!("line {lineno}: bad value {:?}", value.trim()))
}

fn validate(exp: &GridExperiment, stanza_line: usize) -> Result<()> {
    for (name, empty) in [
        ("n", exp.n.is_empty()),
        ("k", exp.k.is_empty()),
        ("rho", exp.rho.is_empty()),
        ("workers", exp.workers.is_empty()),
    ] {
        if empty {
            bail!("experiment at line {stanza_line} is missing `{name}`");
        }
    }
    if exp.k.contains(&0) {
        bail!("experiment at line {stanza_line}: k must be at least 1");
    }
    if exp.workers.contains(&0) {
        bail!("experiment at line {stanza_line}: workers must be at least 1");
    }
    if exp.rho.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
        bail!("experiment at line {stanza_line}: rho must be positive and finite");
    }
    if exp.universe == 0 {
        bail!("experiment at line {stanza_line}: universe must be at least 1");
    }
    if exp.processes == 0 {
        bail!("experiment at line {stanza_line}: processes must be at least 1");
    }
    if exp.reps == Some(0) {
        bail!("experiment at line {stanza_line}: reps must be at least 1");
    }
    for mode in &exp.mode {
        if spacesaving::mode::lookup(mode).is_none() {
            bail!(
                "experiment at line {stanza_line}: unknown mode {:?} (available: {})",
                mode,
                spacesaving::mode::names().join(", ")
            );
        }
    }
    Ok(())
}

pub fn parse_grid(text: &str) -> Result<Vec<GridExperiment>> {
    let mut experiments = Vec::new();
    let mut current: Option<(GridExperiment, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "[experiment]" {
            if let Some((exp, start)) = current.take() {
                validate(&exp, start)?;
                experiments.push(exp);
            }
            current = Some((GridExperiment::default(), lineno));
            continue;
        }
        let Some((exp, _)) = current.as_mut() else {
            bail!("line {lineno}: {line:?} appears before any [experiment] stanza");
        };
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {lineno}: expected `key = value`, got {line:?}");
        };
        match key.trim() {
            "n" => exp.n = parse_list(value, lineno)?,
            "k" => exp.k = parse_list(value, lineno)?,
            "rho" => exp.rho = parse_list(value, lineno)?,
            "workers" => exp.workers = parse_list(value, lineno)?,
            "mode" => {
                exp.mode = value.split(',').map(|m| m.trim().to_string()).collect();
            }
            "universe" => exp.universe = parse_scalar(value, lineno)?,
            "seed" => exp.seed = Some(parse_scalar(value, lineno)?),
            "reps" => exp.reps = Some(parse_scalar(value, lineno)?),
            "processes" => exp.processes = parse_scalar(value, lineno)?,
            other => bail!("line {lineno}: unknown key {other:?}"),
        }
    }
    if let Some((exp, start)) = current.take() {
        validate(&exp, start)?;
        experiments.push(exp);
    }
    if experiments.is_empty() {
        bail!("grid file contains no [experiment] stanza");
    }
    Ok(experiments)
}
