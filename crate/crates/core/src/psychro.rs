//! Psychrometrics: water vapor partial pressure from a Magnus–Tetens fit.

use crate::sample::EnvironmentSample;

/// Water vapor partial pressure in Pa.
///
/// Saturation pressure is the Magnus–Tetens form
/// `610.6 · exp(17.260·T / (273.3 + T))` with T in °C, scaled by the
/// fractional relative humidity. Monotone increasing in both temperature
/// and humidity.
pub fn vapor_pressure(sample: &EnvironmentSample) -> f64 {
    saturation_vapor_pressure(sample.air_temp_c) * sample.rel_humidity
}

/// Saturation vapor pressure in Pa at an air temperature in °C.
pub fn saturation_vapor_pressure(air_temp_c: f64) -> f64 {
    610.6 * (17.260 * air_temp_c / (273.3 + air_temp_c)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(t: f64, rh: f64) -> EnvironmentSample {
        EnvironmentSample::indoor(t, rh).unwrap()
    }

    #[test]
    fn zero_celsius_saturated_is_the_base_coefficient() {
        // exponent vanishes at 0 °C, so saturated air gives exactly 610.6 Pa
        assert!((vapor_pressure(&sample(0.0, 1.0)) - 610.6).abs() < 1e-12);
    }

    #[test]
    fn dry_air_has_zero_vapor_pressure() {
        assert_eq!(vapor_pressure(&sample(25.0, 0.0)), 0.0);
        assert_eq!(vapor_pressure(&sample(-10.0, 0.0)), 0.0);
    }

    #[test]
    fn room_temperature_half_humidity() {
        // 0.5 · 610.6 · exp(17.260·25/298.3), evaluated with 60-digit
        // arithmetic: 1297.02082221772707642 Pa
        let expected: f64 = 1_297.020_822_217_727;
        let p = vapor_pressure(&sample(25.0, 0.5));
        assert!((p - expected).abs() < 1e-9, "p = {p}");
    }

    proptest! {
        #[test]
        fn monotone_in_temperature_and_humidity(
            t in -40.0..79.0f64,
            rh in 0.01..0.99f64,
        ) {
            let base = vapor_pressure(&sample(t, rh));
            prop_assert!(vapor_pressure(&sample(t + 1.0, rh)) > base);
            prop_assert!(vapor_pressure(&sample(t, rh + 0.01)) > base);
        }
    }
}
