//! The analytic comfort engine: clothing-surface heat balance, convective
//! coefficient selection, and the predicted mean vote (PMV).

use thiserror::Error;

use crate::occupant::OccupantProfile;
use crate::psychro::vapor_pressure;
use crate::sample::EnvironmentSample;

/// PMV values are clamped to this range after evaluation. The raw index
/// leaves the sensation scale far behind at the edges of the 0–50 °C
/// domain, and a finite range is what makes min-max target normalization
/// possible downstream.
pub const PMV_MIN: f64 = -4.0;
pub const PMV_MAX: f64 = 4.0;

/// Skin temperature in °C as a function of internal heat production.
const SKIN_TEMP_BASE_C: f64 = 35.7;
const SKIN_TEMP_SLOPE: f64 = 0.028;

/// Radiative exchange coefficient, W/m²K⁴ (effective emissivity folded in).
const RADIATIVE_COEFF: f64 = 3.96e-8;

const TCL_INITIAL_GUESS_C: f64 = 25.0;
const TCL_STEP_TOLERANCE_C: f64 = 1e-5;
const TCL_MAX_ITERATIONS: u32 = 100;
/// Central-difference step for the residual derivative, °C.
const TCL_FD_STEP_C: f64 = 1e-4;

/// PMV and the intermediate quantities that produced it, kept for audit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmvResult {
    /// Predicted mean vote clamped to [`PMV_MIN`], [`PMV_MAX`]].
    pub pmv: f64,
    /// Unclamped vote, useful for strict-order checks near the scale ends.
    pub pmv_raw: f64,
    /// Clothing surface temperature at the balance root, °C.
    pub tcl_c: f64,
    /// Convective coefficient at the root, W/m²K.
    pub hc_wm2k: f64,
    /// Water vapor partial pressure, Pa.
    pub pa_pascal: f64,
    /// Newton iterations spent on the clothing-temperature solve.
    pub solver_iterations: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(
        "clothing temperature solve did not converge after {iterations} iterations \
         (last estimate {last_tcl_c} °C)"
    )]
    NonConvergence { iterations: u32, last_tcl_c: f64 },
}

/// Convective heat transfer coefficient in W/m²K: the larger of the
/// natural-convection estimate `2.38·|t_cl − t_a|^0.25` and the forced
/// estimate `12.1·√v_a`.
pub fn convective_coefficient(tcl_c: f64, sample: &EnvironmentSample) -> f64 {
    let natural = 2.38 * (tcl_c - sample.air_temp_c).abs().powf(0.25);
    let forced = 12.1 * sample.air_velocity_ms.sqrt();
    natural.max(forced)
}

/// Residual of the clothing-surface heat balance at a candidate t_cl.
///
/// The balance equates t_cl with the skin temperature minus the insulation
/// times the radiative-plus-convective loss from the clothing surface; the
/// residual is the right-hand side minus the candidate, so a root is a
/// self-consistent clothing temperature.
fn clothing_balance_residual(
    tcl_c: f64,
    sample: &EnvironmentSample,
    occupant: &OccupantProfile,
) -> f64 {
    let skin_temp = SKIN_TEMP_BASE_C
        - SKIN_TEMP_SLOPE * (occupant.metabolic_rate_wm2 - occupant.mechanical_work_wm2);
    let fcl = occupant.clothing_area_factor();
    let hc = convective_coefficient(tcl_c, sample);
    let radiative = RADIATIVE_COEFF
        * fcl
        * ((tcl_c + 273.0).powi(4) - (sample.mean_radiant_temp_c + 273.0).powi(4));
    let convective = fcl * hc * (tcl_c - sample.air_temp_c);
    skin_temp - occupant.clothing_insulation_m2kw * (radiative + convective) - tcl_c
}

/// Solves the clothing-surface heat balance for t_cl by Newton-Raphson with
/// a central finite-difference derivative, returning the root and the
/// iteration count.
///
/// Starts from 25 °C, re-evaluates the convective coefficient at every
/// candidate, and stops when one update moves less than 1e-5 °C. Running
/// out of the 100-iteration budget is an error, never a silent fallback:
/// a fabricated t_cl would corrupt every PMV computed from it.
pub fn solve_clothing_temperature(
    sample: &EnvironmentSample,
    occupant: &OccupantProfile,
) -> Result<(f64, u32), SolveError> {
    let mut tcl = TCL_INITIAL_GUESS_C;
    for iteration in 1..=TCL_MAX_ITERATIONS {
        let residual = clothing_balance_residual(tcl, sample, occupant);
        let derivative = (clothing_balance_residual(tcl + TCL_FD_STEP_C, sample, occupant)
            - clothing_balance_residual(tcl - TCL_FD_STEP_C, sample, occupant))
            / (2.0 * TCL_FD_STEP_C);
        if derivative == 0.0 || !derivative.is_finite() {
            return Err(SolveError::NonConvergence {
                iterations: iteration,
                last_tcl_c: tcl,
            });
        }
        let next = tcl - residual / derivative;
        if !next.is_finite() {
            return Err(SolveError::NonConvergence {
                iterations: iteration,
                last_tcl_c: tcl,
            });
        }
        if (next - tcl).abs() < TCL_STEP_TOLERANCE_C {
            return Ok((next, iteration));
        }
        tcl = next;
    }
    Err(SolveError::NonConvergence {
        iterations: TCL_MAX_ITERATIONS,
        last_tcl_c: tcl,
    })
}

/// Computes the predicted mean vote for one environment reading and one
/// occupant, returning the vote together with the intermediates.
///
/// The vote is the scaled thermal load on the body: internal heat
/// production minus the six loss terms (skin diffusion, sweat evaporation,
/// latent and dry respiration, clothing-surface radiation and convection).
/// The clamped value in [`PmvResult::pmv`] is what classification and
/// dataset labeling consume.
pub fn compute_pmv(
    sample: &EnvironmentSample,
    occupant: &OccupantProfile,
) -> Result<PmvResult, SolveError> {
    let (tcl_c, solver_iterations) = solve_clothing_temperature(sample, occupant)?;

    let pa = vapor_pressure(sample);
    let fcl = occupant.clothing_area_factor();
    let hc = convective_coefficient(tcl_c, sample);
    let m = occupant.metabolic_rate_wm2;
    let internal_heat = m - occupant.mechanical_work_wm2;
    let ta = sample.air_temp_c;

    let skin_diffusion = 3.05e-3 * (5733.0 - 6.99 * internal_heat - pa);
    let sweat_evaporation = 0.42 * (internal_heat - 58.15);
    let latent_respiration = 1.7e-5 * m * (5867.0 - pa);
    let dry_respiration = 0.0014 * m * (34.0 - ta);
    let radiative = RADIATIVE_COEFF
        * fcl
        * ((tcl_c + 273.0).powi(4) - (sample.mean_radiant_temp_c + 273.0).powi(4));
    let convective = fcl * hc * (tcl_c - ta);

    let load = internal_heat
        - skin_diffusion
        - sweat_evaporation
        - latent_respiration
        - dry_respiration
        - radiative
        - convective;
    let sensitivity = 0.303 * (-0.036 * m).exp() + 0.028;
    let pmv_raw = sensitivity * load;

    Ok(PmvResult {
        pmv: pmv_raw.clamp(PMV_MIN, PMV_MAX),
        pmv_raw,
        tcl_c,
        hc_wm2k: hc,
        pa_pascal: pa,
        solver_iterations,
    })
}
