//! Seeded fixtures shared by the benchmarks.

use multiband_core::instances::{
    calibrated_uncertainty, generate_pap, CalibrationSpec, DeviationDistribution, PapParams,
};
use multiband_core::{canonicalize, CanonicalForm, CanonicalizeMode};

/// Canonical calibrated power-assignment instance with the default
/// 20 users and 50 transmitters, at the given hearing density.
pub fn pap(seed: u64, density: f64) -> CanonicalForm {
    let params = PapParams {
        seed,
        density,
        ..Default::default()
    };
    let lp = generate_pap(&params)
        .expect("default parameters generate")
        .lp();
    let dist = DeviationDistribution::LogNormalDb { sigma_db: 5.5 };
    let u = calibrated_uncertainty(&lp, &dist, &CalibrationSpec::default())
        .expect("default calibration");
    canonicalize(&lp, &u, CanonicalizeMode::SplitEqualities).expect("PAP rows are inequalities")
}

/// Half the power cap on every transmitter: feasible for the bounds and
/// usually not robust.
pub fn half_power(form: &CanonicalForm) -> Vec<f64> {
    form.lp.var_upper.iter().map(|u| 0.5 * u).collect()
}
