//! Trace ingestion, persistence, and deterministic synthetic generators.
//!
//! The on-disk trace format is UTF-8 text: one sample per line, `#`-prefixed
//! comment lines and blank lines ignored, decimal or scientific notation.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// A named, finite sequence of samples with an optional per-trace error
/// budget (used by comparison runs when no explicit ε is given).
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub name: String,
    pub values: Vec<f64>,
    pub default_eps: Option<f64>,
}

impl Trace {
    pub fn new(
        name: impl Into<String>,
        values: Vec<f64>,
        default_eps: Option<f64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation(
                "a trace needs at least one sample".into(),
            ));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "trace contains non-finite sample {bad}"
            )));
        }
        if let Some(eps) = default_eps {
            validate_eps(eps)?;
        }
        Ok(Self {
            name: name.into(),
            values,
            default_eps,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same trace with a different error budget attached.
    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        validate_eps(eps)?;
        self.default_eps = Some(eps);
        Ok(self)
    }
}

fn validate_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Validation(format!(
            "eps must be finite and non-negative, got {eps}"
        )));
    }
    Ok(())
}

/// Parse a trace file.
pub fn load_trace(path: &Path, name: &str, default_eps: Option<f64>) -> Result<Trace> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let display = path.display().to_string();
    let mut values = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            path: display.clone(),
            line: idx + 1,
            msg: format!("expected one number per line, got `{text}`"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                path: display,
                line: idx + 1,
                msg: format!("non-finite sample {value}"),
            });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::Validation(format!(
            "trace file `{display}` contains no samples"
        )));
    }
    Trace::new(name, values, default_eps)
}

/// Write a trace in the text format, one sample per line.
///
/// Values are printed in shortest round-trip form, so saving and reloading
/// reproduces them bit for bit.
pub fn save_trace(trace: &Trace, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for v in &trace.values {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

/// Constant signal of level `c`.
pub fn gen_constant(c: f64, n: usize) -> Result<Trace> {
    check_n(n)?;
    Trace::new("constant", vec![c; n], None)
}

/// Affine signal `x_k = a + b * k`.
pub fn gen_ramp(a: f64, b: f64, n: usize) -> Result<Trace> {
    check_n(n)?;
    let values = (0..n).map(|k| a + b * k as f64).collect();
    Trace::new("ramp", values, None)
}

/// Sinusoid `x_k = amplitude * sin(2π k / period)`.
pub fn gen_sine(amplitude: f64, period: f64, n: usize) -> Result<Trace> {
    check_n(n)?;
    if period <= 0.0 || !period.is_finite() {
        return Err(Error::Validation(format!(
            "period must be positive and finite, got {period}"
        )));
    }
    let values = (0..n)
        .map(|k| amplitude * (std::f64::consts::TAU * k as f64 / period).sin())
        .collect();
    Trace::new("sine", values, None)
}

/// Seeded random walk.
///
/// Steps come from a splitmix64 stream: each 64-bit output `u` maps to a
/// uniform real in [-1, 1) as `(u >> 11) * 2^-52 - 1`, is scaled by
/// `step_scale`, and accumulates from 0. The construction is fixed so that the
/// same seed reproduces the same trace everywhere, bit for bit.
pub fn gen_random_walk(seed: u64, step_scale: f64, n: usize) -> Result<Trace> {
    check_n(n)?;
    if !step_scale.is_finite() || step_scale < 0.0 {
        return Err(Error::Validation(format!(
            "step scale must be finite and non-negative, got {step_scale}"
        )));
    }
    let mut state = seed;
    let mut level = 0.0;
    let values = (0..n)
        .map(|_| {
            let u = splitmix64(&mut state);
            let step = (u >> 11) as f64 * 2f64.powi(-52) - 1.0;
            level += step_scale * step;
            level
        })
        .collect();
    Trace::new("walk", values, None)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Validation(
            "a generated trace needs at least one sample".into(),
        ));
    }
    Ok(())
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One manifest row: a named trace file and its error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    pub eps: f64,
}

/// A dataset manifest: which trace files to run and at what ε.
///
/// The file format is one `name,path,eps` line per dataset, with `#` comments
/// and blank lines ignored. Relative paths are resolved against the manifest's
/// own directory. Names must be unique.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let display = path.display().to_string();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: display.clone(),
            line: idx + 1,
            msg,
        };
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected `name,path,eps`, got `{text}`")));
        }
        let (name, raw_path, raw_eps) = (fields[0], fields[1], fields[2]);
        if name.is_empty() || raw_path.is_empty() {
            return Err(parse_err("name and path must be non-empty".into()));
        }
        let eps: f64 = raw_eps
            .parse()
            .map_err(|_| parse_err(format!("bad eps `{raw_eps}`")))?;
        if !eps.is_finite() || eps < 0.0 {
            return Err(parse_err(format!(
                "eps must be finite and non-negative, got {eps}"
            )));
        }
        if !seen.insert(name.to_owned()) {
            return Err(parse_err(format!("duplicate dataset name `{name}`")));
        }
        let entry_path = if Path::new(raw_path).is_absolute() {
            PathBuf::from(raw_path)
        } else {
            base.join(raw_path)
        };
        entries.push(ManifestEntry {
            name: name.to_owned(),
            path: entry_path,
            eps,
        });
    }
    if entries.is_empty() {
        return Err(Error::Validation(format!(
            "manifest `{display}` lists no datasets"
        )));
    }
    Ok(DatasetManifest { entries })
}

impl DatasetManifest {
    /// Load every listed trace with its ε attached.
    pub fn load_traces(&self) -> Result<Vec<Trace>> {
        self.entries
            .iter()
            .map(|e| load_trace(&e.path, &e.name, Some(e.eps)))
            .collect()
    }
}

/// A reference dataset: display name, source waveform record, error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSpec {
    pub name: &'static str,
    pub record: &'static str,
    pub eps: f64,
}

/// The five MGH/MF waveform datasets used by the reference evaluation, with
/// their per-signal error budgets in native units.
pub const MGH_DATASETS: [DatasetSpec; 5] = [
    DatasetSpec {
        name: "ECG",
        record: "mghdb/mgh012",
        eps: 0.1,
    },
    DatasetSpec {
        name: "PAP",
        record: "mghdb/mgh183",
        eps: 3.5,
    },
    DatasetSpec {
        name: "ART",
        record: "mghdb/mgh003",
        eps: 5.0,
    },
    DatasetSpec {
        name: "CVP",
        record: "mghdb/mgh239",
        eps: 2.5,
    },
    DatasetSpec {
        name: "RI",
        record: "mghdb/mgh022",
        eps: 0.15,
    },
];
