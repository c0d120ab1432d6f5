//! Built-in calibration battery behind `comfort check`.
//!
//! Analytic checks always run; the surrogate checks join in when a trained
//! model is supplied. The `reference_point_analytic` probe asserts the
//! published reference point 0.256 ± 0.25 at 23.45 °C / 45.67 %; with the
//! default office occupant the analytic engine places that point near
//! -0.46, so this check reports FAIL on a correct build (the default
//! occupant is pinned by the two calibration labels, which take priority).

use comfort_core::classify::{classify_comfort, ComfortClass};
use comfort_core::fanger::{compute_pmv, solve_clothing_temperature};
use comfort_core::mlp::MlpModel;
use comfort_core::occupant::OccupantProfile;
use comfort_core::sample::EnvironmentSample;

pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn analytic_pmv(temp_c: f64, rh_pct: f64) -> f64 {
    let sample = EnvironmentSample::indoor(temp_c, rh_pct / 100.0).expect("valid probe point");
    compute_pmv(&sample, &OccupantProfile::default())
        .expect("probe point converges")
        .pmv
}

/// Independent bracketing bisection on the clothing-surface balance,
/// written against the formula directly rather than the library solver.
fn bisect_tcl(temp_c: f64, occupant: &OccupantProfile) -> f64 {
    let va: f64 = 0.1;
    let icl = occupant.clothing_insulation_m2kw;
    let fcl = if icl <= 0.078 {
        1.00 + 1.290 * icl
    } else {
        1.05 + 0.645 * icl
    };
    let skin = 35.7 - 0.028 * (occupant.metabolic_rate_wm2 - occupant.mechanical_work_wm2);
    let residual = |tcl: f64| {
        let hc = (2.38 * (tcl - temp_c).abs().powf(0.25)).max(12.1 * va.sqrt());
        let rad = 3.96e-8 * fcl * ((tcl + 273.0).powi(4) - (temp_c + 273.0).powi(4));
        skin - icl * (rad + fcl * hc * (tcl - temp_c)) - tcl
    };
    let (mut lo, mut hi) = (0.0_f64, 60.0_f64);
    let mut f_lo = residual(lo);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        let f_mid = residual(mid);
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn run_battery(model: Option<&MlpModel>) -> Vec<CheckOutcome> {
    let mut outcomes = Vec::new();

    let comf = analytic_pmv(25.00, 60.99);
    outcomes.push(CheckOutcome {
        name: "calibration_comfortable_analytic",
        passed: classify_comfort(comf) == ComfortClass::Comfortable,
        detail: format!("pmv={comf:.4} class={}", classify_comfort(comf)),
    });

    let hot = analytic_pmv(32.34, 62.22);
    outcomes.push(CheckOutcome {
        name: "calibration_uncomfortable_analytic",
        passed: classify_comfort(hot) != ComfortClass::Comfortable,
        detail: format!("pmv={hot:.4} class={}", classify_comfort(hot)),
    });

    let reference = analytic_pmv(23.45, 45.67);
    outcomes.push(CheckOutcome {
        name: "reference_point_analytic",
        passed: (reference - 0.256).abs() <= 0.25,
        detail: format!("pmv={reference:.4} reference=0.256 tolerance=0.25"),
    });

    let occupant = OccupantProfile::default();
    let mut max_delta = 0.0_f64;
    let mut non_convergences = 0u32;
    for i in 0..20 {
        for j in 0..20 {
            let temp = 5.0 + 40.0 * i as f64 / 19.0;
            let rh = 0.05 + 0.9 * j as f64 / 19.0;
            let sample = EnvironmentSample::indoor(temp, rh).expect("grid point");
            match solve_clothing_temperature(&sample, &occupant) {
                Ok((newton, _)) => {
                    max_delta = max_delta.max((newton - bisect_tcl(temp, &occupant)).abs())
                }
                Err(_) => non_convergences += 1,
            }
        }
    }
    outcomes.push(CheckOutcome {
        name: "solver_oracle_grid",
        passed: max_delta < 1e-3 && non_convergences == 0,
        detail: format!("max_dtcl={max_delta:.2e} non_convergences={non_convergences}"),
    });

    let mut temp_violations = 0u32;
    let mut previous = f64::NEG_INFINITY;
    for i in 0..=60 {
        let temp = 10.0 + 0.5 * i as f64;
        let sample = EnvironmentSample::indoor(temp, 0.5).expect("sweep point");
        let raw = compute_pmv(&sample, &occupant)
            .expect("sweep converges")
            .pmv_raw;
        if raw <= previous {
            temp_violations += 1;
        }
        previous = raw;
    }
    outcomes.push(CheckOutcome {
        name: "monotonic_in_temperature",
        passed: temp_violations == 0,
        detail: format!("violations={temp_violations}"),
    });

    let mut rh_violations = 0u32;
    for temp in [20.0, 25.0, 30.0, 35.0, 40.0, 45.0] {
        let mut previous = f64::NEG_INFINITY;
        for j in 0..=20 {
            let sample = EnvironmentSample::indoor(temp, j as f64 * 0.05).expect("sweep point");
            let pmv = compute_pmv(&sample, &occupant)
                .expect("sweep converges")
                .pmv;
            if pmv < previous {
                rh_violations += 1;
            }
            previous = pmv;
        }
    }
    outcomes.push(CheckOutcome {
        name: "monotonic_in_humidity",
        passed: rh_violations == 0,
        detail: format!("violations={rh_violations}"),
    });

    if let Some(model) = model {
        let surr_comf = model.predict_pmv(25.00, 60.99).pmv;
        outcomes.push(CheckOutcome {
            name: "calibration_comfortable_surrogate",
            passed: classify_comfort(surr_comf) == ComfortClass::Comfortable,
            detail: format!("pmv={surr_comf:.4} class={}", classify_comfort(surr_comf)),
        });
        let surr_hot = model.predict_pmv(32.34, 62.22).pmv;
        outcomes.push(CheckOutcome {
            name: "calibration_uncomfortable_surrogate",
            passed: classify_comfort(surr_hot) != ComfortClass::Comfortable,
            detail: format!("pmv={surr_hot:.4} class={}", classify_comfort(surr_hot)),
        });
        let surr_ref = model.predict_pmv(23.45, 45.67).pmv;
        outcomes.push(CheckOutcome {
            name: "reference_point_surrogate_vs_analytic",
            passed: (surr_ref - reference).abs() <= 0.15,
            detail: format!("surrogate={surr_ref:.4} analytic={reference:.4} tolerance=0.15"),
        });
    }

    outcomes
}
