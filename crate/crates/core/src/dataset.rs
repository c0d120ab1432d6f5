//! Synthetic training corpus: seeded sampling of the analytic engine over
//! the 0–50 °C × 0–100 % box, deterministic split/normalization, and the
//! text formats that persist them.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fanger::{compute_pmv, PMV_MAX, PMV_MIN};
use crate::occupant::OccupantProfile;
use crate::sample::EnvironmentSample;

/// Sampling box for the corpus.
pub const TEMP_RANGE_C: (f64, f64) = (0.0, 50.0);
pub const RH_RANGE_PCT: (f64, f64) = (0.0, 100.0);

/// One labeled corpus record. Humidity is kept in percent here because the
/// corpus is a user-facing artifact; the engine converts at the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    pub air_temp_c: f64,
    pub rel_humidity_pct: f64,
    /// Clamped PMV label from the analytic engine with the default occupant.
    pub pmv: f64,
}

/// Affine input/target scaling constants. Input bounds are empirical over
/// the training split; target bounds are the fixed PMV clamp range so the
/// sigmoid head's codomain always covers the labels and a denormalized
/// output never depends on which corpus the model was trained on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationStats {
    pub input_min: [f64; 2],
    pub input_max: [f64; 2],
    pub target_min: f64,
    pub target_max: f64,
}

impl NormalizationStats {
    pub fn normalize_input(&self, input: [f64; 2]) -> [f64; 2] {
        [
            (input[0] - self.input_min[0]) / (self.input_max[0] - self.input_min[0]),
            (input[1] - self.input_min[1]) / (self.input_max[1] - self.input_min[1]),
        ]
    }

    pub fn normalize_target(&self, pmv: f64) -> f64 {
        (pmv - self.target_min) / (self.target_max - self.target_min)
    }

    pub fn denormalize_target(&self, normalized: f64) -> f64 {
        normalized * (self.target_max - self.target_min) + self.target_min
    }

    /// True when a raw (temperature, humidity-%) pair lies inside the box
    /// the stats were fitted on.
    pub fn input_in_domain(&self, input: [f64; 2]) -> bool {
        (self.input_min[0]..=self.input_max[0]).contains(&input[0])
            && (self.input_min[1]..=self.input_max[1]).contains(&input[1])
    }
}

/// Inputs and targets already normalized for training.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSplit {
    pub inputs: Vec<[f64; 2]>,
    pub targets: Vec<f64>,
}

impl NormalizedSplit {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// A generated corpus plus how many draws had to be repeated because the
/// clothing-temperature solve failed on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<SampleRecord>,
    pub resample_count: u64,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("record count must be at least 1")]
    InvalidCount,
    #[error("train fraction {0} must lie strictly between 0 and 1")]
    InvalidFraction(f64),
    #[error("split leaves an empty train or test side ({train} / {test})")]
    EmptySplit { train: usize, test: usize },
    #[error("feature {feature} is constant ({value}); cannot normalize a degenerate range")]
    DegenerateRange { feature: usize, value: f64 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> DatasetError {
    DatasetError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Draws `n` (temperature, humidity) points uniformly over the box from a
/// ChaCha stream seeded with `seed` and labels each with the analytic
/// engine under the default occupant. A draw whose solve does not converge
/// is redrawn from the same stream and counted, so the corpus size is
/// always exactly `n` and identical `(n, seed)` always reproduce the same
/// corpus bit for bit.
pub fn generate_dataset(n: usize, seed: u64) -> Result<Dataset, DatasetError> {
    if n == 0 {
        return Err(DatasetError::InvalidCount);
    }
    let occupant = OccupantProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    let mut resample_count = 0u64;
    while records.len() < n {
        let air_temp_c = rng.gen_range(TEMP_RANGE_C.0..=TEMP_RANGE_C.1);
        let rel_humidity_pct = rng.gen_range(RH_RANGE_PCT.0..=RH_RANGE_PCT.1);
        let sample = EnvironmentSample::indoor(air_temp_c, rel_humidity_pct / 100.0)
            .expect("box draw is a valid sample");
        match compute_pmv(&sample, &occupant) {
            Ok(result) => records.push(SampleRecord {
                air_temp_c,
                rel_humidity_pct,
                pmv: result.pmv,
            }),
            Err(_) => resample_count += 1,
        }
    }
    Ok(Dataset {
        records,
        resample_count,
    })
}

/// Shuffles deterministically, splits at `floor(n · train_fraction)`, fits
/// input bounds on the training side only, and normalizes both sides.
/// Targets use the fixed PMV clamp bounds.
pub fn split_and_normalize(
    records: &[SampleRecord],
    train_fraction: f64,
    seed: u64,
) -> Result<(NormalizedSplit, NormalizedSplit, NormalizationStats), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::InvalidFraction(train_fraction));
    }
    let mut indices: Vec<usize> = (0..records.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fisher-Yates, fixed order for reproducibility
    for i in (1..indices.len()).rev() {
        let j = rng.gen_range(0..=i);
        indices.swap(i, j);
    }
    let train_len = (records.len() as f64 * train_fraction).floor() as usize;
    let test_len = records.len() - train_len;
    if train_len == 0 || test_len == 0 {
        return Err(DatasetError::EmptySplit {
            train: train_len,
            test: test_len,
        });
    }

    let feature = |r: &SampleRecord| [r.air_temp_c, r.rel_humidity_pct];
    let mut input_min = [f64::INFINITY; 2];
    let mut input_max = [f64::NEG_INFINITY; 2];
    for &idx in &indices[..train_len] {
        let f = feature(&records[idx]);
        for d in 0..2 {
            input_min[d] = input_min[d].min(f[d]);
            input_max[d] = input_max[d].max(f[d]);
        }
    }
    for d in 0..2 {
        if input_max[d] <= input_min[d] {
            return Err(DatasetError::DegenerateRange {
                feature: d,
                value: input_min[d],
            });
        }
    }
    let stats = NormalizationStats {
        input_min,
        input_max,
        target_min: PMV_MIN,
        target_max: PMV_MAX,
    };

    let build = |slice: &[usize]| NormalizedSplit {
        inputs: slice
            .iter()
            .map(|&idx| stats.normalize_input(feature(&records[idx])))
            .collect(),
        targets: slice
            .iter()
            .map(|&idx| stats.normalize_target(records[idx].pmv))
            .collect(),
    };
    let train = build(&indices[..train_len]);
    let test = build(&indices[train_len..]);
    Ok((train, test, stats))
}

/// Formats a value with 9 significant digits, the corpus file convention.
pub fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

pub const DATASET_HEADER: &str = "temp_c,rh_pct,pmv";

/// Writes the corpus as comma-separated text: header line, one record per
/// line, 9 significant digits, newline-terminated.
pub fn write_dataset(path: &Path, records: &[SampleRecord]) -> Result<(), DatasetError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let result: std::io::Result<()> = (|| {
        writeln!(w, "{DATASET_HEADER}")?;
        for r in records {
            writeln!(
                w,
                "{},{},{}",
                format_value(r.air_temp_c),
                format_value(r.rel_humidity_pct),
                format_value(r.pmv)
            )?;
        }
        w.flush()
    })();
    result.map_err(|e| io_err(path, e))
}

/// Reads a corpus file written by [`write_dataset`].
pub fn read_dataset(path: &Path) -> Result<Vec<SampleRecord>, DatasetError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut lines = reader.lines().enumerate();
    match lines.next() {
        Some((_, Ok(header))) if header == DATASET_HEADER => {}
        Some((_, Ok(other))) => {
            return Err(parse_err(
                path,
                1,
                format!("expected header {DATASET_HEADER:?}, found {other:?}"),
            ))
        }
        Some((_, Err(e))) => return Err(io_err(path, e)),
        None => return Err(parse_err(path, 1, "empty file")),
    }
    for (idx, line) in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        let parse = |s: &str, name: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_err(path, lineno, format!("bad {name} value {s:?}")))
        };
        records.push(SampleRecord {
            air_temp_c: parse(fields[0], "temp_c")?,
            rel_humidity_pct: parse(fields[1], "rh_pct")?,
            pmv: parse(fields[2], "pmv")?,
        });
    }
    Ok(records)
}

pub const STATS_FORMAT_VERSION: u32 = 1;

/// Writes the normalization constants and the generator seed as a
/// versioned key-value document.
pub fn write_stats(path: &Path, stats: &NormalizationStats, seed: u64) -> Result<(), DatasetError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let result: std::io::Result<()> = (|| {
        writeln!(w, "format_version {STATS_FORMAT_VERSION}")?;
        writeln!(w, "seed {seed}")?;
        writeln!(w, "input_temp_min {}", format_value(stats.input_min[0]))?;
        writeln!(w, "input_temp_max {}", format_value(stats.input_max[0]))?;
        writeln!(w, "input_rh_min {}", format_value(stats.input_min[1]))?;
        writeln!(w, "input_rh_max {}", format_value(stats.input_max[1]))?;
        writeln!(w, "target_min {}", format_value(stats.target_min))?;
        writeln!(w, "target_max {}", format_value(stats.target_max))?;
        w.flush()
    })();
    result.map_err(|e| io_err(path, e))
}

/// Reads a stats document written by [`write_stats`], returning the stats
/// and the recorded seed. Unknown versions are rejected.
pub fn read_stats(path: &Path) -> Result<(NormalizationStats, u64), DatasetError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once(' ').ok_or_else(|| {
            parse_err(
                path,
                idx + 1,
                format!("expected `key value`, found {line:?}"),
            )
        })?;
        pairs.push((key.to_string(), value.to_string(), idx + 1));
    }
    let lookup = |key: &str| {
        pairs
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.clone(), *l))
            .ok_or_else(|| parse_err(path, 1, format!("missing key {key:?}")))
    };
    let (version, vline) = lookup("format_version")?;
    let version: u32 = version
        .parse()
        .map_err(|_| parse_err(path, vline, format!("bad format_version {version:?}")))?;
    if version != STATS_FORMAT_VERSION {
        return Err(parse_err(
            path,
            vline,
            format!("unsupported format_version {version}"),
        ));
    }
    let parse_f64 = |key: &str| -> Result<f64, DatasetError> {
        let (v, l) = lookup(key)?;
        v.parse::<f64>()
            .map_err(|_| parse_err(path, l, format!("bad {key} value {v:?}")))
    };
    let (seed, sline) = lookup("seed")?;
    let seed: u64 = seed
        .parse()
        .map_err(|_| parse_err(path, sline, format!("bad seed {seed:?}")))?;
    let stats = NormalizationStats {
        input_min: [parse_f64("input_temp_min")?, parse_f64("input_rh_min")?],
        input_max: [parse_f64("input_temp_max")?, parse_f64("input_rh_max")?],
        target_min: parse_f64("target_min")?,
        target_max: parse_f64("target_max")?,
    };
    Ok((stats, seed))
}
