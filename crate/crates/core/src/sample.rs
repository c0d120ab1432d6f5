//! Environment readings as the comfort engine consumes them.

use thiserror::Error;

/// Default indoor air velocity in m/s, used when a reading comes from a
/// sensor that measures only temperature and humidity.
pub const DEFAULT_AIR_VELOCITY_MS: f64 = 0.1;

/// One sensor reading: air temperature, relative humidity, plus the air
/// velocity and mean radiant temperature the comfort model needs.
///
/// Relative humidity is a fraction in `[0, 1]` everywhere inside the
/// library; user-facing surfaces accept percent and convert at the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentSample {
    /// Air temperature in °C.
    pub air_temp_c: f64,
    /// Relative humidity as a fraction in [0, 1].
    pub rel_humidity: f64,
    /// Air velocity in m/s.
    pub air_velocity_ms: f64,
    /// Mean radiant temperature in °C.
    pub mean_radiant_temp_c: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("air temperature {0} °C is outside the supported range [-40, 80]")]
    TemperatureOutOfRange(f64),
    #[error("relative humidity {0} is outside [0, 1]")]
    HumidityOutOfRange(f64),
    #[error("air velocity {0} m/s must be finite and non-negative")]
    AirVelocityInvalid(f64),
    #[error("mean radiant temperature {0} °C must be finite")]
    RadiantTemperatureInvalid(f64),
}

impl EnvironmentSample {
    /// Builds a fully specified sample, validating every field.
    pub fn new(
        air_temp_c: f64,
        rel_humidity: f64,
        air_velocity_ms: f64,
        mean_radiant_temp_c: f64,
    ) -> Result<Self, SampleError> {
        if !air_temp_c.is_finite() || !(-40.0..=80.0).contains(&air_temp_c) {
            return Err(SampleError::TemperatureOutOfRange(air_temp_c));
        }
        if !rel_humidity.is_finite() || !(0.0..=1.0).contains(&rel_humidity) {
            return Err(SampleError::HumidityOutOfRange(rel_humidity));
        }
        if !air_velocity_ms.is_finite() || air_velocity_ms < 0.0 {
            return Err(SampleError::AirVelocityInvalid(air_velocity_ms));
        }
        if !mean_radiant_temp_c.is_finite() {
            return Err(SampleError::RadiantTemperatureInvalid(mean_radiant_temp_c));
        }
        Ok(Self {
            air_temp_c,
            rel_humidity,
            air_velocity_ms,
            mean_radiant_temp_c,
        })
    }

    /// Builds a sample from a plain temperature/humidity reading, filling
    /// air velocity with [`DEFAULT_AIR_VELOCITY_MS`] and taking the mean
    /// radiant temperature equal to the air temperature.
    pub fn indoor(air_temp_c: f64, rel_humidity: f64) -> Result<Self, SampleError> {
        Self::new(
            air_temp_c,
            rel_humidity,
            DEFAULT_AIR_VELOCITY_MS,
            air_temp_c,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indoor_fills_defaults() {
        let s = EnvironmentSample::indoor(25.0, 0.5).unwrap();
        assert_eq!(s.air_velocity_ms, DEFAULT_AIR_VELOCITY_MS);
        assert_eq!(s.mean_radiant_temp_c, 25.0);
    }

    #[test]
    fn rejects_out_of_range_fields() {
        assert!(matches!(
            EnvironmentSample::indoor(100.0, 0.5),
            Err(SampleError::TemperatureOutOfRange(_))
        ));
        assert!(matches!(
            EnvironmentSample::indoor(25.0, 1.2),
            Err(SampleError::HumidityOutOfRange(_))
        ));
        assert!(matches!(
            EnvironmentSample::new(25.0, 0.5, -0.1, 25.0),
            Err(SampleError::AirVelocityInvalid(_))
        ));
        assert!(matches!(
            EnvironmentSample::new(25.0, 0.5, 0.1, f64::NAN),
            Err(SampleError::RadiantTemperatureInvalid(_))
        ));
        assert!(matches!(
            EnvironmentSample::indoor(f64::NAN, 0.5),
            Err(SampleError::TemperatureOutOfRange(_))
        ));
    }
}
