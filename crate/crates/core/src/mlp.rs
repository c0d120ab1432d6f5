//! From-scratch feed-forward surrogate: 2 inputs, four ReLU hidden layers,
//! a sigmoid output head, trained with mini-batch Adam on mean squared
//! error, and serialized to a text weight format simple enough for a
//! constrained-device reimplementation to parse with no training code.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{NormalizationStats, NormalizedSplit};

pub const WEIGHTS_MAGIC: &str = "comfort-mlp";
pub const WEIGHTS_FORMAT_VERSION: u32 = 1;

/// Number of hidden layers is fixed by the architecture.
pub const HIDDEN_LAYERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Sigmoid,
}

impl Activation {
    fn as_str(&self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
        }
    }
}

/// Dense network parameters plus the normalization constants needed to map
/// raw (temperature, humidity-%) inputs to a PMV prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    /// `[2, h1, h2, h3, h4, 1]`.
    layer_dims: Vec<usize>,
    /// Per layer, row-major `out × in`.
    weights: Vec<Vec<f64>>,
    /// Per layer, length `out`.
    biases: Vec<Vec<f64>>,
    norm: NormalizationStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub batch_size: usize,
    pub epochs: usize,
    /// Seeds the per-epoch shuffle stream.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            batch_size: 64,
            epochs: 100,
            seed: 42,
        }
    }
}

/// Regression metrics in normalized target space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub mse: f64,
    pub mae: f64,
    pub r_squared: f64,
}

/// A denormalized PMV prediction; `out_of_domain` flags inputs outside the
/// box the normalization stats were fitted on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmvPrediction {
    pub pmv: f64,
    pub out_of_domain: bool,
}

#[derive(Debug, Error)]
pub enum MlpError {
    #[error("hidden layer widths must be positive")]
    InvalidWidth,
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("split is empty")]
    EmptySplit,
    #[error("training diverged at epoch {epoch}: loss or parameters became non-finite")]
    DivergedTraining { epoch: usize },
    #[error("R² is undefined: targets have zero variance")]
    UndefinedR2,
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

fn io_err(path: &Path, source: std::io::Error) -> MlpError {
    MlpError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> MlpError {
    MlpError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Builds a model with the four given hidden widths and seeded
/// scaled-uniform parameters: every weight and bias of a layer is drawn
/// from `U(-1/√fan_in, 1/√fan_in)`, weights row-major first, then biases,
/// layer by layer. Identical `(widths, seed)` give identical models.
pub fn init_model(
    hidden_widths: [usize; HIDDEN_LAYERS],
    seed: u64,
    norm: NormalizationStats,
) -> Result<MlpModel, MlpError> {
    if hidden_widths.contains(&0) {
        return Err(MlpError::InvalidWidth);
    }
    let mut layer_dims = Vec::with_capacity(HIDDEN_LAYERS + 2);
    layer_dims.push(2);
    layer_dims.extend_from_slice(&hidden_widths);
    layer_dims.push(1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for l in 0..layer_dims.len() - 1 {
        let fan_in = layer_dims[l];
        let fan_out = layer_dims[l + 1];
        let scale = 1.0 / (fan_in as f64).sqrt();
        let w: Vec<f64> = (0..fan_in * fan_out)
            .map(|_| rng.gen_range(-scale..scale))
            .collect();
        let b: Vec<f64> = (0..fan_out).map(|_| rng.gen_range(-scale..scale)).collect();
        weights.push(w);
        biases.push(b);
    }
    Ok(MlpModel {
        layer_dims,
        weights,
        biases,
        norm,
    })
}

impl MlpModel {
    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn norm_stats(&self) -> &NormalizationStats {
        &self.norm
    }

    /// Activation per parameterized layer: ReLU on hidden, sigmoid on the
    /// output head.
    pub fn activations(&self) -> Vec<Activation> {
        let layers = self.layer_dims.len() - 1;
        (0..layers)
            .map(|l| {
                if l + 1 == layers {
                    Activation::Sigmoid
                } else {
                    Activation::Relu
                }
            })
            .collect()
    }

    /// Total number of weights and biases.
    pub fn parameter_count(&self) -> usize {
        self.layer_dims.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
    }

    /// Reads a parameter by flat index (per layer: weights row-major, then
    /// biases). The flat order matches the weight-file layout.
    pub fn get_parameter(&self, mut index: usize) -> f64 {
        for l in 0..self.weights.len() {
            if index < self.weights[l].len() {
                return self.weights[l][index];
            }
            index -= self.weights[l].len();
            if index < self.biases[l].len() {
                return self.biases[l][index];
            }
            index -= self.biases[l].len();
        }
        panic!("parameter index out of range");
    }

    pub fn set_parameter(&mut self, mut index: usize, value: f64) {
        for l in 0..self.weights.len() {
            if index < self.weights[l].len() {
                self.weights[l][index] = value;
                return;
            }
            index -= self.weights[l].len();
            if index < self.biases[l].len() {
                self.biases[l][index] = value;
                return;
            }
            index -= self.biases[l].len();
        }
        panic!("parameter index out of range");
    }

    /// Pure forward pass on a normalized input; output lies in (0, 1).
    pub fn forward(&self, input: [f64; 2]) -> f64 {
        let mut activations = vec![input[0], input[1]];
        let layers = self.weights.len();
        for l in 0..layers {
            activations = self.layer_forward(l, &activations);
        }
        activations[0]
    }

    fn layer_forward(&self, l: usize, input: &[f64]) -> Vec<f64> {
        let fan_in = self.layer_dims[l];
        let fan_out = self.layer_dims[l + 1];
        let last = l + 1 == self.weights.len();
        let mut out = Vec::with_capacity(fan_out);
        for o in 0..fan_out {
            let row = &self.weights[l][o * fan_in..(o + 1) * fan_in];
            let mut z = self.biases[l][o];
            for (w, a) in row.iter().zip(input) {
                z += w * a;
            }
            out.push(if last { sigmoid(z) } else { z.max(0.0) });
        }
        out
    }

    /// Mean squared error of the forward pass over a set of samples;
    /// forward-only, no gradient machinery involved.
    pub fn mean_squared_loss(&self, inputs: &[[f64; 2]], targets: &[f64]) -> f64 {
        assert_eq!(inputs.len(), targets.len());
        assert!(!inputs.is_empty());
        let n = inputs.len() as f64;
        inputs
            .iter()
            .zip(targets)
            .map(|(x, y)| {
                let e = self.forward(*x) - y;
                e * e
            })
            .sum::<f64>()
            / n
    }

    /// Mean squared loss and its gradient with respect to every parameter
    /// (flat order), by backpropagation.
    pub fn loss_gradient(&self, inputs: &[[f64; 2]], targets: &[f64]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.parameter_count()];
        let mut ws = Workspace::new(&self.layer_dims);
        let loss = self.accumulate_gradient(inputs, targets, &mut grad, &mut ws);
        (loss, grad)
    }

    /// Backprop over a batch, adding the mean-loss gradient into `grad`
    /// (which must be zeroed by the caller) and returning the batch loss.
    fn accumulate_gradient(
        &self,
        inputs: &[[f64; 2]],
        targets: &[f64],
        grad: &mut [f64],
        ws: &mut Workspace,
    ) -> f64 {
        assert_eq!(inputs.len(), targets.len());
        let n = inputs.len() as f64;
        let layers = self.weights.len();
        let mut loss = 0.0;
        for (x, &y) in inputs.iter().zip(targets) {
            // forward, caching every activation
            ws.activations[0][0] = x[0];
            ws.activations[0][1] = x[1];
            for l in 0..layers {
                let fan_in = self.layer_dims[l];
                let last = l + 1 == layers;
                for o in 0..self.layer_dims[l + 1] {
                    let row = &self.weights[l][o * fan_in..(o + 1) * fan_in];
                    let mut z = self.biases[l][o];
                    for (w, a) in row.iter().zip(&ws.activations[l]) {
                        z += w * a;
                    }
                    ws.activations[l + 1][o] = if last { sigmoid(z) } else { z.max(0.0) };
                }
            }
            let prediction = ws.activations[layers][0];
            let error = prediction - y;
            loss += error * error / n;

            // output delta: d(mean loss)/dz through the sigmoid
            ws.deltas[layers - 1][0] = 2.0 * error / n * prediction * (1.0 - prediction);
            // hidden deltas: transpose-apply the next layer, gate by ReLU
            for l in (0..layers - 1).rev() {
                let next_fan_in = self.layer_dims[l + 1];
                for o in 0..next_fan_in {
                    let mut acc = 0.0;
                    for k in 0..self.layer_dims[l + 2] {
                        acc += self.weights[l + 1][k * next_fan_in + o] * ws.deltas[l + 1][k];
                    }
                    // ReLU gate: activation is zero exactly when z ≤ 0
                    ws.deltas[l][o] = if ws.activations[l + 1][o] > 0.0 {
                        acc
                    } else {
                        0.0
                    };
                }
            }
            // parameter gradients
            let mut offset = 0;
            for l in 0..layers {
                let fan_in = self.layer_dims[l];
                let fan_out = self.layer_dims[l + 1];
                for o in 0..fan_out {
                    let d = ws.deltas[l][o];
                    let base = offset + o * fan_in;
                    for i in 0..fan_in {
                        grad[base + i] += d * ws.activations[l][i];
                    }
                }
                offset += fan_out * fan_in;
                for o in 0..fan_out {
                    grad[offset + o] += ws.deltas[l][o];
                }
                offset += fan_out;
            }
        }
        loss
    }

    fn params_finite(&self) -> bool {
        self.weights
            .iter()
            .chain(self.biases.iter())
            .all(|v| v.iter().all(|p| p.is_finite()))
    }

    /// Normalizes a raw (temperature-°C, humidity-%) pair, runs the
    /// network, and denormalizes the output back to PMV units. Inputs
    /// outside the fitted box still produce a value but come back flagged.
    pub fn predict_pmv(&self, temp_c: f64, rh_pct: f64) -> PmvPrediction {
        let raw = [temp_c, rh_pct];
        let normalized = self.norm.normalize_input(raw);
        let output = self.forward(normalized);
        PmvPrediction {
            pmv: self.norm.denormalize_target(output),
            out_of_domain: !self.norm.input_in_domain(raw),
        }
    }

    /// Writes the portable weight file (see the README for the field
    /// order). Numbers carry 17 significant digits, enough to reproduce
    /// every f64 exactly on reload.
    pub fn save(&self, path: &Path) -> Result<(), MlpError> {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        let mut w = BufWriter::new(file);
        let result: std::io::Result<()> = (|| {
            writeln!(w, "{WEIGHTS_MAGIC} v{WEIGHTS_FORMAT_VERSION}")?;
            let dims: Vec<String> = self.layer_dims.iter().map(|d| d.to_string()).collect();
            writeln!(w, "layer_dims {}", dims.join(" "))?;
            let acts: Vec<&str> = self.activations().iter().map(|a| a.as_str()).collect();
            writeln!(w, "activations {}", acts.join(" "))?;
            writeln!(w, "input_temp_min {}", fmt17(self.norm.input_min[0]))?;
            writeln!(w, "input_temp_max {}", fmt17(self.norm.input_max[0]))?;
            writeln!(w, "input_rh_min {}", fmt17(self.norm.input_min[1]))?;
            writeln!(w, "input_rh_max {}", fmt17(self.norm.input_max[1]))?;
            writeln!(w, "target_min {}", fmt17(self.norm.target_min))?;
            writeln!(w, "target_max {}", fmt17(self.norm.target_max))?;
            for l in 0..self.weights.len() {
                let fan_in = self.layer_dims[l];
                let fan_out = self.layer_dims[l + 1];
                writeln!(w, "layer {l}")?;
                writeln!(w, "weights {fan_out} {fan_in}")?;
                for o in 0..fan_out {
                    let row: Vec<String> = self.weights[l][o * fan_in..(o + 1) * fan_in]
                        .iter()
                        .map(|v| fmt17(*v))
                        .collect();
                    writeln!(w, "{}", row.join(" "))?;
                }
                writeln!(w, "biases {fan_out}")?;
                let row: Vec<String> = self.biases[l].iter().map(|v| fmt17(*v)).collect();
                writeln!(w, "{}", row.join(" "))?;
            }
            writeln!(w, "end")?;
            w.flush()
        })();
        result.map_err(|e| io_err(path, e))
    }

    /// Reads a weight file written by [`MlpModel::save`], rejecting unknown
    /// format versions and any declared/actual size mismatch.
    pub fn load(path: &Path) -> Result<MlpModel, MlpError> {
        let file = File::open(path).map_err(|e| io_err(path, e))?;
        let reader = BufReader::new(file);
        let mut lines = Vec::new();
        for line in reader.lines() {
            lines.push(line.map_err(|e| io_err(path, e))?);
        }
        let mut cursor = LineCursor {
            path,
            lines: &lines,
            next: 0,
        };

        let magic = cursor.next_line()?;
        if magic.text != format!("{WEIGHTS_MAGIC} v{WEIGHTS_FORMAT_VERSION}") {
            return Err(parse_err(
                path,
                magic.number,
                format!("unsupported weight file header {:?}", magic.text),
            ));
        }

        let dims_line = cursor.expect_key("layer_dims")?;
        let layer_dims: Vec<usize> = dims_line
            .value
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(path, dims_line.number, format!("bad dimension {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        if layer_dims.len() != HIDDEN_LAYERS + 2
            || layer_dims.first() != Some(&2)
            || layer_dims.last() != Some(&1)
            || layer_dims.contains(&0)
        {
            return Err(parse_err(
                path,
                dims_line.number,
                format!("layer_dims {layer_dims:?} is not a [2, h1..h4, 1] architecture"),
            ));
        }

        let acts_line = cursor.expect_key("activations")?;
        let expected_acts: Vec<&str> = (0..layer_dims.len() - 1)
            .map(|l| {
                if l + 2 == layer_dims.len() {
                    "sigmoid"
                } else {
                    "relu"
                }
            })
            .collect();
        let found_acts: Vec<&str> = acts_line.value.split_whitespace().collect();
        if found_acts != expected_acts {
            return Err(parse_err(
                path,
                acts_line.number,
                format!("unsupported activation schedule {found_acts:?}"),
            ));
        }

        let mut read_stat = |key: &str| -> Result<f64, MlpError> {
            let line = cursor.expect_key(key)?;
            line.value.parse::<f64>().map_err(|_| {
                parse_err(
                    path,
                    line.number,
                    format!("bad {key} value {:?}", line.value),
                )
            })
        };
        let input_temp_min = read_stat("input_temp_min")?;
        let input_temp_max = read_stat("input_temp_max")?;
        let input_rh_min = read_stat("input_rh_min")?;
        let input_rh_max = read_stat("input_rh_max")?;
        let target_min = read_stat("target_min")?;
        let target_max = read_stat("target_max")?;
        let norm = NormalizationStats {
            input_min: [input_temp_min, input_rh_min],
            input_max: [input_temp_max, input_rh_max],
            target_min,
            target_max,
        };

        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..layer_dims.len() - 1 {
            let header = cursor.next_line()?;
            if header.text != format!("layer {l}") {
                return Err(parse_err(
                    path,
                    header.number,
                    format!("expected `layer {l}`, found {:?}", header.text),
                ));
            }
            let fan_in = layer_dims[l];
            let fan_out = layer_dims[l + 1];
            let wline = cursor.next_line()?;
            if wline.text != format!("weights {fan_out} {fan_in}") {
                return Err(parse_err(
                    path,
                    wline.number,
                    format!(
                        "layer {l}: expected `weights {fan_out} {fan_in}`, found {:?}",
                        wline.text
                    ),
                ));
            }
            let mut w = Vec::with_capacity(fan_out * fan_in);
            for _ in 0..fan_out {
                let row = cursor.next_line()?;
                let values: Vec<f64> = row
                    .text
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|_| {
                            parse_err(path, row.number, format!("layer {l}: bad weight {t:?}"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if values.len() != fan_in {
                    return Err(parse_err(
                        path,
                        row.number,
                        format!(
                            "layer {l}: expected {fan_in} weight values per row, found {}",
                            values.len()
                        ),
                    ));
                }
                w.extend(values);
            }
            let bline = cursor.next_line()?;
            if bline.text != format!("biases {fan_out}") {
                return Err(parse_err(
                    path,
                    bline.number,
                    format!(
                        "layer {l}: expected `biases {fan_out}`, found {:?}",
                        bline.text
                    ),
                ));
            }
            let brow = cursor.next_line()?;
            let b: Vec<f64> = brow
                .text
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| {
                        parse_err(path, brow.number, format!("layer {l}: bad bias {t:?}"))
                    })
                })
                .collect::<Result<_, _>>()?;
            if b.len() != fan_out {
                return Err(parse_err(
                    path,
                    brow.number,
                    format!(
                        "layer {l}: expected {fan_out} bias values, found {}",
                        b.len()
                    ),
                ));
            }
            weights.push(w);
            biases.push(b);
        }
        let endline = cursor.next_line()?;
        if endline.text != "end" {
            return Err(parse_err(
                path,
                endline.number,
                format!("expected `end`, found {:?}", endline.text),
            ));
        }
        Ok(MlpModel {
            layer_dims,
            weights,
            biases,
            norm,
        })
    }
}

struct NumberedLine<'a> {
    text: &'a str,
    number: usize,
}

struct KeyedLine<'a> {
    value: &'a str,
    number: usize,
}

struct LineCursor<'a> {
    path: &'a Path,
    lines: &'a [String],
    next: usize,
}

impl<'a> LineCursor<'a> {
    fn next_line(&mut self) -> Result<NumberedLine<'a>, MlpError> {
        while self.next < self.lines.len() {
            let idx = self.next;
            self.next += 1;
            if !self.lines[idx].is_empty() {
                return Ok(NumberedLine {
                    text: &self.lines[idx],
                    number: idx + 1,
                });
            }
        }
        Err(parse_err(
            self.path,
            self.lines.len() + 1,
            "unexpected end of file (truncated?)",
        ))
    }

    fn expect_key(&mut self, key: &str) -> Result<KeyedLine<'a>, MlpError> {
        let line = self.next_line()?;
        match line.text.split_once(' ') {
            Some((k, value)) if k == key => Ok(KeyedLine {
                value,
                number: line.number,
            }),
            _ => Err(parse_err(
                self.path,
                line.number,
                format!("expected `{key} ...`, found {:?}", line.text),
            )),
        }
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

struct Workspace {
    activations: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl Workspace {
    fn new(layer_dims: &[usize]) -> Self {
        Self {
            activations: layer_dims.iter().map(|&d| vec![0.0; d]).collect(),
            deltas: layer_dims[1..].iter().map(|&d| vec![0.0; d]).collect(),
        }
    }
}

/// Trains in place with mini-batch Adam and a seeded per-epoch shuffle,
/// returning the per-epoch mean training loss. Deterministic for a fixed
/// (model, split, config).
pub fn train(
    model: &mut MlpModel,
    split: &NormalizedSplit,
    config: &TrainConfig,
) -> Result<Vec<f64>, MlpError> {
    validate_config(config)?;
    if split.is_empty() {
        return Err(MlpError::EmptySplit);
    }
    let n = split.len();
    let params = model.parameter_count();
    let mut adam_m = vec![0.0; params];
    let mut adam_v = vec![0.0; params];
    let mut grad = vec![0.0; params];
    let mut ws = Workspace::new(&model.layer_dims);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut indices: Vec<usize> = (0..n).collect();
    let mut batch_inputs: Vec<[f64; 2]> = Vec::with_capacity(config.batch_size);
    let mut batch_targets: Vec<f64> = Vec::with_capacity(config.batch_size);
    let mut history = Vec::with_capacity(config.epochs);
    let mut step = 0u32;

    for epoch in 0..config.epochs {
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            indices.swap(i, j);
        }
        let mut epoch_sq_sum = 0.0;
        for chunk in indices.chunks(config.batch_size) {
            batch_inputs.clear();
            batch_targets.clear();
            for &idx in chunk {
                batch_inputs.push(split.inputs[idx]);
                batch_targets.push(split.targets[idx]);
            }
            grad.iter_mut().for_each(|g| *g = 0.0);
            let batch_loss =
                model.accumulate_gradient(&batch_inputs, &batch_targets, &mut grad, &mut ws);
            epoch_sq_sum += batch_loss * chunk.len() as f64;

            step += 1;
            let bias1 = 1.0 - config.adam_beta1.powi(step as i32);
            let bias2 = 1.0 - config.adam_beta2.powi(step as i32);
            let mut k = 0;
            for l in 0..model.weights.len() {
                for slot in model.weights[l]
                    .iter_mut()
                    .chain(model.biases[l].iter_mut())
                {
                    let g = grad[k];
                    adam_m[k] = config.adam_beta1 * adam_m[k] + (1.0 - config.adam_beta1) * g;
                    adam_v[k] = config.adam_beta2 * adam_v[k] + (1.0 - config.adam_beta2) * g * g;
                    let m_hat = adam_m[k] / bias1;
                    let v_hat = adam_v[k] / bias2;
                    *slot -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_epsilon);
                    k += 1;
                }
            }
        }
        let epoch_loss = epoch_sq_sum / n as f64;
        if !epoch_loss.is_finite() || !model.params_finite() {
            return Err(MlpError::DivergedTraining { epoch });
        }
        history.push(epoch_loss);
    }
    Ok(history)
}

fn validate_config(config: &TrainConfig) -> Result<(), MlpError> {
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(MlpError::InvalidConfig(format!(
            "learning_rate {} must be positive",
            config.learning_rate
        )));
    }
    for (name, beta) in [("beta1", config.adam_beta1), ("beta2", config.adam_beta2)] {
        if !(0.0..1.0).contains(&beta) {
            return Err(MlpError::InvalidConfig(format!(
                "{name} {beta} must lie in [0, 1)"
            )));
        }
    }
    if !(config.adam_epsilon.is_finite() && config.adam_epsilon > 0.0) {
        return Err(MlpError::InvalidConfig(format!(
            "epsilon {} must be positive",
            config.adam_epsilon
        )));
    }
    if config.batch_size == 0 {
        return Err(MlpError::InvalidConfig(
            "batch_size must be at least 1".into(),
        ));
    }
    if config.epochs == 0 {
        return Err(MlpError::InvalidConfig("epochs must be at least 1".into()));
    }
    Ok(())
}

/// MSE, MAE, and R² of the model on a normalized split, all in normalized
/// target space.
pub fn evaluate(model: &MlpModel, split: &NormalizedSplit) -> Result<Metrics, MlpError> {
    if split.is_empty() {
        return Err(MlpError::EmptySplit);
    }
    let n = split.len() as f64;
    let predictions: Vec<f64> = split.inputs.iter().map(|x| model.forward(*x)).collect();
    let mse = predictions
        .iter()
        .zip(&split.targets)
        .map(|(p, y)| (p - y) * (p - y))
        .sum::<f64>()
        / n;
    let mae = predictions
        .iter()
        .zip(&split.targets)
        .map(|(p, y)| (p - y).abs())
        .sum::<f64>()
        / n;
    let mean = split.targets.iter().sum::<f64>() / n;
    let ss_tot: f64 = split.targets.iter().map(|y| (y - mean) * (y - mean)).sum();
    if ss_tot == 0.0 {
        return Err(MlpError::UndefinedR2);
    }
    let ss_res: f64 = predictions
        .iter()
        .zip(&split.targets)
        .map(|(p, y)| (p - y) * (p - y))
        .sum();
    Ok(Metrics {
        mse,
        mae,
        r_squared: 1.0 - ss_res / ss_tot,
    })
}

/// Convenience free function mirroring [`MlpModel::predict_pmv`].
pub fn predict_pmv(model: &MlpModel, temp_c: f64, rh_pct: f64) -> PmvPrediction {
    model.predict_pmv(temp_c, rh_pct)
}
