//! PMV-to-actuator decision rules and the stateful controller that applies
//! them from either comfort source.
//!
//! The rule set is deliberately minimal: cooling (exhaust fan plus
//! evaporative coolant) fires only in the Hot band, heating only in the
//! Cold band, and the three middle bands actuate nothing. There is no
//! hysteresis beyond the bands themselves, so chattering near ±2 is
//! observable in the simulator rather than hidden.

use thiserror::Error;

use crate::classify::{classify_comfort, ComfortClass};
use crate::fanger::compute_pmv;
use crate::mlp::MlpModel;
use crate::occupant::OccupantProfile;
use crate::sample::EnvironmentSample;

/// On/off actuator state. Heating and the cooling pair are mutually
/// exclusive by construction; the co-activated state does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActuatorCommand {
    /// Everything off.
    Idle,
    /// Exhaust fan and evaporative coolant together.
    Cooling,
    /// Heater only.
    Heating,
}

impl ActuatorCommand {
    pub fn heater_on(&self) -> bool {
        matches!(self, ActuatorCommand::Heating)
    }

    pub fn exhaust_on(&self) -> bool {
        matches!(self, ActuatorCommand::Cooling)
    }

    pub fn coolant_on(&self) -> bool {
        matches!(self, ActuatorCommand::Cooling)
    }
}

/// Which engine produced the PMV behind a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmvSource {
    Analytic,
    Surrogate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlDecision {
    pub comfort_class: ComfortClass,
    pub command: ActuatorCommand,
    pub pmv_used: f64,
    pub source: PmvSource,
    /// True when this decision is a held copy of the previous one because
    /// the analytic solve failed on the current sample.
    pub held: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("surrogate source selected but no model was supplied")]
    MissingModel,
}

/// Memoryless decision rule: Hot → cooling pair, Cold → heater, everything
/// else idle.
pub fn decide(pmv: f64, source: PmvSource) -> ControlDecision {
    let comfort_class = classify_comfort(pmv);
    let command = match comfort_class {
        ComfortClass::Hot => ActuatorCommand::Cooling,
        ComfortClass::Cold => ActuatorCommand::Heating,
        _ => ActuatorCommand::Idle,
    };
    ControlDecision {
        comfort_class,
        command,
        pmv_used: pmv,
        source,
        held: false,
    }
}

/// One controller instance per control loop: holds the last decision so a
/// failed solve degrades to "keep doing what we were doing" instead of
/// fabricating a comfort value.
#[derive(Debug, Clone, Default)]
pub struct Controller {
    last: Option<ControlDecision>,
}

impl Controller {
    pub fn new() -> Self {
        Self::default()
    }

    /// Computes PMV from the selected source and applies [`decide`]. On an
    /// analytic non-convergence the previous decision is returned with the
    /// `held` flag set; before any successful step that fallback is the
    /// idle command.
    pub fn step(
        &mut self,
        sample: &EnvironmentSample,
        occupant: &OccupantProfile,
        source: PmvSource,
        model: Option<&MlpModel>,
    ) -> Result<ControlDecision, ControlError> {
        let pmv = match source {
            PmvSource::Analytic => compute_pmv(sample, occupant).map(|r| r.pmv),
            PmvSource::Surrogate => {
                let model = model.ok_or(ControlError::MissingModel)?;
                Ok(model
                    .predict_pmv(sample.air_temp_c, sample.rel_humidity * 100.0)
                    .pmv)
            }
        };
        Ok(self.resolve(pmv.map(|p| decide(p, source))))
    }

    /// Applies a fresh decision, or falls back to the held one.
    fn resolve(
        &mut self,
        outcome: Result<ControlDecision, crate::fanger::SolveError>,
    ) -> ControlDecision {
        match outcome {
            Ok(decision) => {
                self.last = Some(decision);
                decision
            }
            Err(_) => {
                let mut held = self.last.unwrap_or(ControlDecision {
                    comfort_class: ComfortClass::Comfortable,
                    command: ActuatorCommand::Idle,
                    pmv_used: 0.0,
                    source: PmvSource::Analytic,
                    held: true,
                });
                held.held = true;
                held
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fanger::SolveError;
    use proptest::prelude::*;

    #[test]
    fn hot_engages_the_cooling_pair() {
        let d = decide(2.5, PmvSource::Analytic);
        assert_eq!(d.comfort_class, ComfortClass::Hot);
        assert_eq!(d.command, ActuatorCommand::Cooling);
        assert!(d.command.exhaust_on() && d.command.coolant_on() && !d.command.heater_on());
    }

    #[test]
    fn cold_engages_the_heater() {
        let d = decide(-2.5, PmvSource::Analytic);
        assert_eq!(d.comfort_class, ComfortClass::Cold);
        assert_eq!(d.command, ActuatorCommand::Heating);
        assert!(d.command.heater_on() && !d.command.exhaust_on() && !d.command.coolant_on());
    }

    #[test]
    fn middle_bands_actuate_nothing() {
        for (pmv, class) in [
            (1.0, ComfortClass::Warm),
            (0.0, ComfortClass::Comfortable),
            (-1.0, ComfortClass::Cool),
        ] {
            let d = decide(pmv, PmvSource::Analytic);
            assert_eq!(d.comfort_class, class);
            assert_eq!(d.command, ActuatorCommand::Idle);
        }
    }

    #[test]
    fn surrogate_without_model_is_an_error() {
        let mut controller = Controller::new();
        let sample = EnvironmentSample::indoor(25.0, 0.5).unwrap();
        let occupant = OccupantProfile::default();
        assert!(matches!(
            controller.step(&sample, &occupant, PmvSource::Surrogate, None),
            Err(ControlError::MissingModel)
        ));
    }

    #[test]
    fn analytic_step_decides_from_the_engine() {
        let mut controller = Controller::new();
        let occupant = OccupantProfile::default();
        let comfortable = EnvironmentSample::indoor(25.0, 0.6099).unwrap();
        let d = controller
            .step(&comfortable, &occupant, PmvSource::Analytic, None)
            .unwrap();
        assert_eq!(d.comfort_class, ComfortClass::Comfortable);
        assert_eq!(d.command, ActuatorCommand::Idle);
        assert!(!d.held);

        let hot = EnvironmentSample::indoor(32.34, 0.6222).unwrap();
        let d = controller
            .step(&hot, &occupant, PmvSource::Analytic, None)
            .unwrap();
        assert_ne!(d.comfort_class, ComfortClass::Comfortable);
    }

    #[test]
    fn failed_solve_holds_the_previous_decision() {
        let mut controller = Controller::new();
        // first failure before any decision: safe idle
        let held = controller.resolve(Err(SolveError::NonConvergence {
            iterations: 100,
            last_tcl_c: 25.0,
        }));
        assert_eq!(held.command, ActuatorCommand::Idle);
        assert!(held.held);

        let fresh = controller.resolve(Ok(decide(3.0, PmvSource::Analytic)));
        assert_eq!(fresh.command, ActuatorCommand::Cooling);
        assert!(!fresh.held);

        let held = controller.resolve(Err(SolveError::NonConvergence {
            iterations: 100,
            last_tcl_c: 25.0,
        }));
        assert_eq!(held.command, ActuatorCommand::Cooling);
        assert_eq!(held.pmv_used, 3.0);
        assert!(held.held);
    }

    proptest! {
        // exactly one of the three actuation patterns, consistent with the
        // band, for every finite pmv
        #[test]
        fn band_and_command_are_consistent(pmv in -10.0..10.0f64) {
            let d = decide(pmv, PmvSource::Analytic);
            let is_hot = d.comfort_class == ComfortClass::Hot;
            let is_cold = d.comfort_class == ComfortClass::Cold;
            prop_assert_eq!(d.command == ActuatorCommand::Cooling, is_hot);
            prop_assert_eq!(d.command == ActuatorCommand::Heating, is_cold);
            prop_assert_eq!(d.command == ActuatorCommand::Idle, !is_hot && !is_cold);
            prop_assert!(!(d.command.heater_on() && (d.command.coolant_on() || d.command.exhaust_on())));
        }
    }
}
