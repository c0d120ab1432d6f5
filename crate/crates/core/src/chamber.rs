//! Discrete-time plant model of a small enclosed test chamber with a
//! heater, an exhaust fan, and an evaporative coolant, plus the closed
//! sense → decide → actuate loop and its duty/occupancy accounting.
//!
//! The plant is first-order: temperature and humidity relax toward ambient
//! with their own time constants, the heater adds a fixed per-step gain,
//! the coolant drops temperature while raising humidity (evaporative
//! cooling), and the exhaust fan mixes the chamber toward ambient. Every
//! coefficient lives in [`PlantParams`] so the model is swappable.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::classify::ComfortClass;
use crate::control::{ActuatorCommand, ControlError, Controller, PmvSource};
use crate::dataset::format_value;
use crate::mlp::MlpModel;
use crate::occupant::OccupantProfile;
use crate::sample::EnvironmentSample;

/// Plant and sensor coefficients. `Default` is the documented baseline: a
/// comfortable 24 °C / 50 % ambient, ten-second steps, ten-minute thermal
/// and fifteen-minute humidity time constants, and mild sensor noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantParams {
    /// Ambient (outside-the-chamber) temperature, °C. Default 24.0.
    pub ambient_temp_c: f64,
    /// Ambient relative humidity fraction. Default 0.5.
    pub ambient_rh_fraction: f64,
    /// Passive thermal relaxation time constant, seconds. Default 600.
    pub thermal_time_constant_s: f64,
    /// Passive humidity relaxation time constant, seconds. Default 900.
    pub humidity_time_constant_s: f64,
    /// Temperature added per step while the heater is on, °C. Default 0.2.
    pub heater_gain_c_per_step: f64,
    /// Temperature removed per step while the coolant is on, °C. Default 0.25.
    pub coolant_temp_drop_c_per_step: f64,
    /// Humidity fraction added per step while the coolant is on. Default 0.004.
    pub coolant_rh_rise_per_step: f64,
    /// Extra fraction of the gap to ambient closed per step while the
    /// exhaust fan runs, in [0, 1]. Default 0.05.
    pub exhaust_mixing_factor: f64,
    /// Wall-clock seconds per simulation step. Default 10.
    pub step_seconds: f64,
    /// Gaussian sensor noise on temperature, °C std. Default 0.1.
    pub sensor_noise_std_temp_c: f64,
    /// Gaussian sensor noise on humidity, fraction std. Default 0.005.
    pub sensor_noise_std_rh: f64,
    /// Seed for the sensor-noise stream. Default 42.
    pub noise_seed: u64,
}

impl Default for PlantParams {
    fn default() -> Self {
        Self {
            ambient_temp_c: 24.0,
            ambient_rh_fraction: 0.5,
            thermal_time_constant_s: 600.0,
            humidity_time_constant_s: 900.0,
            heater_gain_c_per_step: 0.2,
            coolant_temp_drop_c_per_step: 0.25,
            coolant_rh_rise_per_step: 0.004,
            exhaust_mixing_factor: 0.05,
            step_seconds: 10.0,
            sensor_noise_std_temp_c: 0.1,
            sensor_noise_std_rh: 0.005,
            noise_seed: 42,
        }
    }
}

impl PlantParams {
    /// Baseline with the sensor noise turned off, for deterministic
    /// comparisons against the noiseless plant state.
    pub fn noiseless() -> Self {
        Self {
            sensor_noise_std_temp_c: 0.0,
            sensor_noise_std_rh: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(SimError::InvalidParams(what.to_string()))
            }
        };
        check(
            self.ambient_temp_c.is_finite() && (-40.0..=80.0).contains(&self.ambient_temp_c),
            "ambient_temp_c must lie in [-40, 80]",
        )?;
        check(
            (0.0..=1.0).contains(&self.ambient_rh_fraction),
            "ambient_rh_fraction must lie in [0, 1]",
        )?;
        check(
            self.thermal_time_constant_s > 0.0 && self.humidity_time_constant_s > 0.0,
            "time constants must be positive",
        )?;
        check(
            self.heater_gain_c_per_step >= 0.0
                && self.coolant_temp_drop_c_per_step >= 0.0
                && self.coolant_rh_rise_per_step >= 0.0,
            "actuator gains must be non-negative",
        )?;
        check(
            (0.0..=1.0).contains(&self.exhaust_mixing_factor),
            "exhaust_mixing_factor must lie in [0, 1]",
        )?;
        check(self.step_seconds > 0.0, "step_seconds must be positive")?;
        check(
            self.sensor_noise_std_temp_c >= 0.0 && self.sensor_noise_std_rh >= 0.0,
            "sensor noise stds must be non-negative",
        )?;
        Ok(())
    }
}

/// Chamber state plus duty counters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChamberState {
    pub temp_c: f64,
    pub rh_fraction: f64,
    pub step_index: u64,
    pub cumulative_heater_steps: u64,
    pub cumulative_cooling_steps: u64,
}

impl ChamberState {
    pub fn new(temp_c: f64, rh_fraction: f64) -> Self {
        Self {
            temp_c,
            rh_fraction: rh_fraction.clamp(0.0, 1.0),
            step_index: 0,
            cumulative_heater_steps: 0,
            cumulative_cooling_steps: 0,
        }
    }

    pub fn at_ambient(params: &PlantParams) -> Self {
        Self::new(params.ambient_temp_c, params.ambient_rh_fraction)
    }
}

/// One trace row of a closed-loop run; temperature and humidity are the
/// sensed values the controller actually saw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub step: u64,
    pub temp_c: f64,
    pub rh_pct: f64,
    pub pmv: f64,
    pub class: ComfortClass,
    pub command: ActuatorCommand,
    pub held: bool,
}

/// Duty fractions and band occupancy over one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub steps: u64,
    pub heater_duty: f64,
    pub exhaust_duty: f64,
    pub coolant_duty: f64,
    /// Fraction of steps spent in each band, indexed per [`ComfortClass::ALL`].
    pub band_occupancy: [f64; 5],
    /// Steps where the decision was held because the solve failed.
    pub held_steps: u64,
}

impl EnergyReport {
    /// Structured text rendering: one `key value` line each, duty and
    /// occupancy fractions with six decimal places.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("steps {}\n", self.steps));
        out.push_str(&format!("heater_duty {:.6}\n", self.heater_duty));
        out.push_str(&format!("exhaust_duty {:.6}\n", self.exhaust_duty));
        out.push_str(&format!("coolant_duty {:.6}\n", self.coolant_duty));
        for class in ComfortClass::ALL {
            out.push_str(&format!(
                "occupancy_{} {:.6}\n",
                class.as_str().to_lowercase(),
                self.band_occupancy[class.index()]
            ));
        }
        out.push_str(&format!("held_steps {}\n", self.held_steps));
        out
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("step count must be at least 1")]
    InvalidSteps,
    #[error("invalid plant parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Control(#[from] ControlError),
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

fn io_err(path: &Path, source: std::io::Error) -> SimError {
    SimError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Advances the plant one step under a command. Pure and deterministic;
/// relaxation toward ambient happens first, then actuator effects, then
/// the exhaust mixing pull, and humidity is clamped to [0, 1] at the end.
pub fn plant_step(
    state: &ChamberState,
    command: ActuatorCommand,
    params: &PlantParams,
) -> ChamberState {
    let alpha_t = (params.step_seconds / params.thermal_time_constant_s).min(1.0);
    let alpha_h = (params.step_seconds / params.humidity_time_constant_s).min(1.0);

    let mut temp = state.temp_c + (params.ambient_temp_c - state.temp_c) * alpha_t;
    let mut rh = state.rh_fraction + (params.ambient_rh_fraction - state.rh_fraction) * alpha_h;

    if command.heater_on() {
        temp += params.heater_gain_c_per_step;
    }
    if command.coolant_on() {
        temp -= params.coolant_temp_drop_c_per_step;
        rh += params.coolant_rh_rise_per_step;
    }
    if command.exhaust_on() {
        // interpolation form so a mixing factor of 1 lands on ambient exactly
        let mix = params.exhaust_mixing_factor;
        temp = temp * (1.0 - mix) + params.ambient_temp_c * mix;
        rh = rh * (1.0 - mix) + params.ambient_rh_fraction * mix;
    }

    ChamberState {
        temp_c: temp,
        rh_fraction: rh.clamp(0.0, 1.0),
        step_index: state.step_index + 1,
        cumulative_heater_steps: state.cumulative_heater_steps + u64::from(command.heater_on()),
        cumulative_cooling_steps: state.cumulative_cooling_steps + u64::from(command.coolant_on()),
    }
}

/// Reads the chamber sensors: true state plus seeded Gaussian noise, with
/// the air velocity default and the radiant temperature equal to the
/// sensed air temperature.
pub fn read_sensor(
    state: &ChamberState,
    params: &PlantParams,
    rng: &mut ChaCha8Rng,
) -> EnvironmentSample {
    let mut temp = state.temp_c;
    let mut rh = state.rh_fraction;
    if params.sensor_noise_std_temp_c > 0.0 {
        let normal = Normal::new(0.0, params.sensor_noise_std_temp_c).expect("validated std");
        temp += normal.sample(rng);
    }
    if params.sensor_noise_std_rh > 0.0 {
        let normal = Normal::new(0.0, params.sensor_noise_std_rh).expect("validated std");
        rh += normal.sample(rng);
    }
    EnvironmentSample::indoor(temp.clamp(-40.0, 80.0), rh.clamp(0.0, 1.0))
        .expect("clamped reading is a valid sample")
}

/// Runs the closed loop for `n_steps`: sense, decide, actuate. Solver
/// failures never abort the run; they surface as held decisions in the
/// trace and in [`EnergyReport::held_steps`].
pub fn run_closed_loop(
    initial: ChamberState,
    params: &PlantParams,
    occupant: &OccupantProfile,
    source: PmvSource,
    model: Option<&MlpModel>,
    n_steps: u64,
) -> Result<(Vec<TraceRecord>, EnergyReport), SimError> {
    if n_steps == 0 {
        return Err(SimError::InvalidSteps);
    }
    params.validate()?;
    if source == PmvSource::Surrogate && model.is_none() {
        return Err(ControlError::MissingModel.into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.noise_seed);
    let mut controller = Controller::new();
    let mut state = initial;
    let mut trace = Vec::with_capacity(n_steps as usize);
    let mut heater = 0u64;
    let mut exhaust = 0u64;
    let mut coolant = 0u64;
    let mut held = 0u64;
    let mut occupancy = [0u64; 5];

    for step in 0..n_steps {
        let sample = read_sensor(&state, params, &mut rng);
        let decision = controller.step(&sample, occupant, source, model)?;
        heater += u64::from(decision.command.heater_on());
        exhaust += u64::from(decision.command.exhaust_on());
        coolant += u64::from(decision.command.coolant_on());
        held += u64::from(decision.held);
        occupancy[decision.comfort_class.index()] += 1;
        trace.push(TraceRecord {
            step,
            temp_c: sample.air_temp_c,
            rh_pct: sample.rel_humidity * 100.0,
            pmv: decision.pmv_used,
            class: decision.comfort_class,
            command: decision.command,
            held: decision.held,
        });
        state = plant_step(&state, decision.command, params);
    }

    let n = n_steps as f64;
    let report = EnergyReport {
        steps: n_steps,
        heater_duty: heater as f64 / n,
        exhaust_duty: exhaust as f64 / n,
        coolant_duty: coolant as f64 / n,
        band_occupancy: occupancy.map(|c| c as f64 / n),
        held_steps: held,
    };
    Ok((trace, report))
}

pub const TRACE_HEADER: &str = "step,temp_c,rh_pct,pmv,class,heater,exhaust,coolant";

/// Writes a run trace in the same comma-separated convention as the
/// dataset file.
pub fn write_trace(path: &Path, trace: &[TraceRecord]) -> Result<(), SimError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let result: std::io::Result<()> = (|| {
        writeln!(w, "{TRACE_HEADER}")?;
        for r in trace {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.step,
                format_value(r.temp_c),
                format_value(r.rh_pct),
                format_value(r.pmv),
                r.class,
                u8::from(r.command.heater_on()),
                u8::from(r.command.exhaust_on()),
                u8::from(r.command.coolant_on()),
            )?;
        }
        w.flush()
    })();
    result.map_err(|e| io_err(path, e))
}

pub const PLANT_FORMAT_VERSION: u32 = 1;

/// Writes plant parameters as a versioned key-value document.
pub fn write_plant_params(path: &Path, params: &PlantParams) -> Result<(), SimError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let result: std::io::Result<()> = (|| {
        writeln!(w, "format_version {PLANT_FORMAT_VERSION}")?;
        writeln!(w, "ambient_temp_c {}", params.ambient_temp_c)?;
        writeln!(w, "ambient_rh_fraction {}", params.ambient_rh_fraction)?;
        writeln!(
            w,
            "thermal_time_constant_s {}",
            params.thermal_time_constant_s
        )?;
        writeln!(
            w,
            "humidity_time_constant_s {}",
            params.humidity_time_constant_s
        )?;
        writeln!(
            w,
            "heater_gain_c_per_step {}",
            params.heater_gain_c_per_step
        )?;
        writeln!(
            w,
            "coolant_temp_drop_c_per_step {}",
            params.coolant_temp_drop_c_per_step
        )?;
        writeln!(
            w,
            "coolant_rh_rise_per_step {}",
            params.coolant_rh_rise_per_step
        )?;
        writeln!(w, "exhaust_mixing_factor {}", params.exhaust_mixing_factor)?;
        writeln!(w, "step_seconds {}", params.step_seconds)?;
        writeln!(
            w,
            "sensor_noise_std_temp_c {}",
            params.sensor_noise_std_temp_c
        )?;
        writeln!(w, "sensor_noise_std_rh {}", params.sensor_noise_std_rh)?;
        writeln!(w, "noise_seed {}", params.noise_seed)?;
        w.flush()
    })();
    result.map_err(|e| io_err(path, e))
}

/// Reads a plant-parameter document; keys may appear in any order, missing
/// keys fall back to the defaults, unknown keys are an error.
pub fn read_plant_params(path: &Path) -> Result<PlantParams, SimError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut params = PlantParams::default();
    let mut saw_version = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(' ').ok_or_else(|| SimError::Parse {
            path: path.display().to_string(),
            line: lineno,
            message: format!("expected `key value`, found {line:?}"),
        })?;
        let bad = |message: String| SimError::Parse {
            path: path.display().to_string(),
            line: lineno,
            message,
        };
        let parse_f64 = || {
            value
                .parse::<f64>()
                .map_err(|_| bad(format!("bad {key} value {value:?}")))
        };
        match key {
            "format_version" => {
                let v: u32 = value
                    .parse()
                    .map_err(|_| bad(format!("bad version {value:?}")))?;
                if v != PLANT_FORMAT_VERSION {
                    return Err(bad(format!("unsupported format_version {v}")));
                }
                saw_version = true;
            }
            "ambient_temp_c" => params.ambient_temp_c = parse_f64()?,
            "ambient_rh_fraction" => params.ambient_rh_fraction = parse_f64()?,
            "thermal_time_constant_s" => params.thermal_time_constant_s = parse_f64()?,
            "humidity_time_constant_s" => params.humidity_time_constant_s = parse_f64()?,
            "heater_gain_c_per_step" => params.heater_gain_c_per_step = parse_f64()?,
            "coolant_temp_drop_c_per_step" => params.coolant_temp_drop_c_per_step = parse_f64()?,
            "coolant_rh_rise_per_step" => params.coolant_rh_rise_per_step = parse_f64()?,
            "exhaust_mixing_factor" => params.exhaust_mixing_factor = parse_f64()?,
            "step_seconds" => params.step_seconds = parse_f64()?,
            "sensor_noise_std_temp_c" => params.sensor_noise_std_temp_c = parse_f64()?,
            "sensor_noise_std_rh" => params.sensor_noise_std_rh = parse_f64()?,
            "noise_seed" => {
                params.noise_seed = value
                    .parse()
                    .map_err(|_| bad(format!("bad seed {value:?}")))?
            }
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    if !saw_version {
        return Err(SimError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "missing format_version".into(),
        });
    }
    params.validate()?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn ambient_state_is_a_fixed_point() {
        let params = PlantParams::noiseless();
        let state = ChamberState::at_ambient(&params);
        let next = plant_step(&state, ActuatorCommand::Idle, &params);
        assert_eq!(next.temp_c, state.temp_c);
        assert_eq!(next.rh_fraction, state.rh_fraction);
        assert_eq!(next.step_index, 1);
    }

    #[test]
    fn heater_raises_temperature() {
        let params = PlantParams::noiseless();
        let state = ChamberState::at_ambient(&params);
        let next = plant_step(&state, ActuatorCommand::Heating, &params);
        assert!(next.temp_c > state.temp_c);
        assert_eq!(next.cumulative_heater_steps, 1);
    }

    #[test]
    fn full_mixing_snaps_to_ambient() {
        let params = PlantParams {
            exhaust_mixing_factor: 1.0,
            ..PlantParams::noiseless()
        };
        let state = ChamberState::new(40.0, 0.9);
        // exhaust alone does not exist as a command; cooling includes the
        // coolant, so zero its effect to isolate the mixing pull
        let params_iso = PlantParams {
            coolant_temp_drop_c_per_step: 0.0,
            coolant_rh_rise_per_step: 0.0,
            ..params
        };
        let next = plant_step(&state, ActuatorCommand::Cooling, &params_iso);
        assert_eq!(next.temp_c, params.ambient_temp_c);
        assert_eq!(next.rh_fraction, params.ambient_rh_fraction);
    }

    #[test]
    fn noiseless_sensor_reads_the_state_exactly() {
        let params = PlantParams::noiseless();
        let state = ChamberState::new(31.5, 0.62);
        let mut rng = ChaCha8Rng::seed_from_u64(params.noise_seed);
        let sample = read_sensor(&state, &params, &mut rng);
        assert_eq!(sample.air_temp_c, 31.5);
        assert_eq!(sample.rel_humidity, 0.62);
        assert_eq!(sample.mean_radiant_temp_c, 31.5);
    }

    #[test]
    fn sensor_noise_is_seed_deterministic_and_unbiased() {
        let params = PlantParams {
            sensor_noise_std_temp_c: 0.5,
            sensor_noise_std_rh: 0.0,
            ..PlantParams::default()
        };
        let state = ChamberState::new(24.0, 0.5);
        let read_all = || {
            let mut rng = ChaCha8Rng::seed_from_u64(params.noise_seed);
            (0..10_000)
                .map(|_| read_sensor(&state, &params, &mut rng).air_temp_c)
                .collect::<Vec<f64>>()
        };
        let a = read_all();
        let b = read_all();
        assert_eq!(a, b);
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        // 3σ/√n bound on the sample mean
        assert!((mean - 24.0).abs() < 3.0 * 0.5 / (a.len() as f64).sqrt());
    }

    #[test]
    fn comfortable_start_never_actuates() {
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        let initial = ChamberState::at_ambient(&params);
        let (trace, report) =
            run_closed_loop(initial, &params, &occupant, PmvSource::Analytic, None, 500).unwrap();
        assert_eq!(report.heater_duty, 0.0);
        assert_eq!(report.exhaust_duty, 0.0);
        assert_eq!(report.coolant_duty, 0.0);
        assert_eq!(
            report.band_occupancy[ComfortClass::Comfortable.index()],
            1.0
        );
        assert!(trace.iter().all(|r| r.command == ActuatorCommand::Idle));
    }

    #[test]
    fn hot_start_cools_out_of_hot_and_stays_out() {
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        let initial = ChamberState::new(32.34, 0.6222);
        let (trace, report) = run_closed_loop(
            initial,
            &params,
            &occupant,
            PmvSource::Analytic,
            None,
            10_000,
        )
        .unwrap();
        let last_hot = trace.iter().rposition(|r| r.class == ComfortClass::Hot);
        let first_not_hot = trace.iter().position(|r| r.class != ComfortClass::Hot);
        assert!(report.coolant_duty > 0.0);
        let first_not_hot = first_not_hot.expect("run must leave the Hot band");
        match last_hot {
            None => panic!("run must start Hot"),
            Some(last) => assert!(
                last < first_not_hot,
                "re-entered Hot at step {last} after leaving at {first_not_hot}"
            ),
        }
    }

    #[test]
    fn traces_are_bit_identical_across_runs() {
        let params = PlantParams::default(); // noisy, but seeded
        let occupant = OccupantProfile::default();
        let initial = ChamberState::new(30.0, 0.7);
        let run = || {
            run_closed_loop(initial, &params, &occupant, PmvSource::Analytic, None, 300).unwrap()
        };
        let (ta, ra) = run();
        let (tb, rb) = run();
        assert_eq!(ta, tb);
        assert_eq!(ra, rb);
    }

    #[test]
    fn duty_counters_conserve_the_step_count() {
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        let initial = ChamberState::new(5.0, 0.3);
        let n = 2_000;
        let (trace, report) =
            run_closed_loop(initial, &params, &occupant, PmvSource::Analytic, None, n).unwrap();
        let heater_steps = trace.iter().filter(|r| r.command.heater_on()).count() as u64;
        let idle_heater = trace.iter().filter(|r| !r.command.heater_on()).count() as u64;
        assert_eq!(heater_steps + idle_heater, n);
        assert!((report.heater_duty - heater_steps as f64 / n as f64).abs() < 1e-12);
        let occupancy_sum: f64 = report.band_occupancy.iter().sum();
        assert!((occupancy_sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn temperature_stays_bounded_over_long_runs() {
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        let lo = params.ambient_temp_c - 15.0;
        let hi = params.ambient_temp_c + 25.0;
        for start in [
            ChamberState::new(lo + 0.5, 0.2),
            ChamberState::new(hi - 0.5, 0.95),
        ] {
            let mut state = start;
            let mut controller = Controller::new();
            let mut rng = ChaCha8Rng::seed_from_u64(params.noise_seed);
            for _ in 0..100_000 {
                let sample = read_sensor(&state, &params, &mut rng);
                let decision = controller
                    .step(&sample, &occupant, PmvSource::Analytic, None)
                    .unwrap();
                state = plant_step(&state, decision.command, &params);
                assert!(
                    state.temp_c >= lo && state.temp_c <= hi,
                    "temp {} escaped at step {}",
                    state.temp_c,
                    state.step_index
                );
            }
        }
    }

    #[test]
    fn zero_steps_is_rejected() {
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        assert!(matches!(
            run_closed_loop(
                ChamberState::at_ambient(&params),
                &params,
                &occupant,
                PmvSource::Analytic,
                None,
                0
            ),
            Err(SimError::InvalidSteps)
        ));
    }

    #[test]
    fn surrogate_without_model_is_rejected() {
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        assert!(matches!(
            run_closed_loop(
                ChamberState::at_ambient(&params),
                &params,
                &occupant,
                PmvSource::Surrogate,
                None,
                10
            ),
            Err(SimError::Control(ControlError::MissingModel))
        ));
    }

    #[test]
    fn trace_file_has_header_and_rows() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let params = PlantParams::noiseless();
        let occupant = OccupantProfile::default();
        let (trace, _) = run_closed_loop(
            ChamberState::at_ambient(&params),
            &params,
            &occupant,
            PmvSource::Analytic,
            None,
            25,
        )
        .unwrap();
        write_trace(&path, &trace).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 26);
        assert!(lines[1].ends_with(",Comfortable,0,0,0"));
    }

    #[test]
    fn plant_params_file_round_trip_and_unknown_key() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("plant.cfg");
        let params = PlantParams {
            ambient_temp_c: 21.5,
            noise_seed: 9,
            ..PlantParams::default()
        };
        write_plant_params(&path, &params).unwrap();
        let back = read_plant_params(&path).unwrap();
        assert_eq!(params, back);

        std::fs::write(&path, "format_version 1\nbogus_key 1.0\n").unwrap();
        assert!(matches!(
            read_plant_params(&path),
            Err(SimError::Parse { .. })
        ));
    }

    #[test]
    fn report_renders_six_decimal_fractions() {
        let report = EnergyReport {
            steps: 3,
            heater_duty: 1.0 / 3.0,
            exhaust_duty: 0.0,
            coolant_duty: 0.0,
            band_occupancy: [1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0, 0.0],
            held_steps: 0,
        };
        let text = report.render();
        assert!(text.contains("heater_duty 0.333333\n"));
        assert!(text.contains("occupancy_comfortable 0.666667\n"));
        assert!(text.contains("steps 3\n"));
    }
}
