//! Occupant-side variables of the comfort balance: metabolic rate,
//! mechanical work, and clothing.

use thiserror::Error;

/// Metabolic rate of one met, in W/m² of body surface.
pub const MET_WM2: f64 = 58.15;

/// Clothing insulation of one clo, in m²·K/W.
pub const CLO_M2KW: f64 = 0.155;

/// Ratio of clothed to nude body surface area for a given clothing
/// insulation, with the conventional piecewise-linear fit.
///
/// The two branches do not meet exactly at the 0.078 m²K/W breakpoint:
/// the upper branch sits 3.1e-4 below the lower one there.
pub fn clothing_area_factor(clothing_insulation_m2kw: f64) -> f64 {
    debug_assert!(clothing_insulation_m2kw >= 0.0);
    if clothing_insulation_m2kw <= 0.078 {
        1.00 + 1.290 * clothing_insulation_m2kw
    } else {
        1.05 + 0.645 * clothing_insulation_m2kw
    }
}

/// Human variables of the comfort balance. The clothing area factor is
/// derived from the insulation at construction and cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupantProfile {
    /// Metabolic rate M in W/m².
    pub metabolic_rate_wm2: f64,
    /// Effective mechanical work W in W/m².
    pub mechanical_work_wm2: f64,
    /// Clothing insulation I_cl in m²·K/W.
    pub clothing_insulation_m2kw: f64,
    clothing_area_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OccupantError {
    #[error("metabolic rate {0} W/m² must be finite and positive")]
    MetabolicRateInvalid(f64),
    #[error("mechanical work {0} W/m² must be finite and non-negative")]
    MechanicalWorkInvalid(f64),
    #[error("metabolic rate {metabolic} W/m² must exceed mechanical work {work} W/m²")]
    WorkExceedsMetabolicRate { metabolic: f64, work: f64 },
    #[error("clothing insulation {0} m²K/W must be finite and non-negative")]
    ClothingInsulationInvalid(f64),
}

impl OccupantProfile {
    pub fn new(
        metabolic_rate_wm2: f64,
        mechanical_work_wm2: f64,
        clothing_insulation_m2kw: f64,
    ) -> Result<Self, OccupantError> {
        if !metabolic_rate_wm2.is_finite() || metabolic_rate_wm2 <= 0.0 {
            return Err(OccupantError::MetabolicRateInvalid(metabolic_rate_wm2));
        }
        if !mechanical_work_wm2.is_finite() || mechanical_work_wm2 < 0.0 {
            return Err(OccupantError::MechanicalWorkInvalid(mechanical_work_wm2));
        }
        if metabolic_rate_wm2 <= mechanical_work_wm2 {
            return Err(OccupantError::WorkExceedsMetabolicRate {
                metabolic: metabolic_rate_wm2,
                work: mechanical_work_wm2,
            });
        }
        if !clothing_insulation_m2kw.is_finite() || clothing_insulation_m2kw < 0.0 {
            return Err(OccupantError::ClothingInsulationInvalid(
                clothing_insulation_m2kw,
            ));
        }
        Ok(Self {
            metabolic_rate_wm2,
            mechanical_work_wm2,
            clothing_insulation_m2kw,
            clothing_area_factor: clothing_area_factor(clothing_insulation_m2kw),
        })
    }

    /// Cached clothing area factor f_cl (dimensionless, ≥ 1).
    pub fn clothing_area_factor(&self) -> f64 {
        self.clothing_area_factor
    }
}

/// Seated office occupant: 1.2 met, no mechanical work, 0.5 clo. These are
/// the constants behind every default-labeled dataset and calibration check
/// in this crate.
impl Default for OccupantProfile {
    fn default() -> Self {
        Self::new(1.2 * MET_WM2, 0.0, 0.5 * CLO_M2KW).expect("default profile is valid")
    }
}
