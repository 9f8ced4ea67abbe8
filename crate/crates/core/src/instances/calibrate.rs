//! Band profiles from a distribution of relative coefficient deviations.

use crate::model::{BandProfile, LinearProgram, MultiBandUncertaintySet};
use crate::Error;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::BTreeMap;

/// Distribution of the actual coefficient as a multiple of its nominal value.
#[derive(Debug, Clone, PartialEq)]
pub enum DeviationDistribution {
    /// `a = a_bar * 10^(D/10)` with `D ~ Normal(0, sigma_db)`.
    LogNormalDb { sigma_db: f64 },
    /// Observed relative deviations `r`, meaning `a = a_bar * (1 + r)`,
    /// each equally likely.
    Empirical { samples: Vec<f64> },
}

impl DeviationDistribution {
    pub fn check(&self) -> Result<(), Error> {
        match self {
            DeviationDistribution::LogNormalDb { sigma_db }
                if !(*sigma_db > 0.0 && sigma_db.is_finite()) =>
            {
                Err(Error::Calibration(format!(
                    "sigma_db must be positive, got {sigma_db}"
                )))
            }
            DeviationDistribution::Empirical { samples } if samples.is_empty() => Err(
                Error::Calibration("empirical distribution has no samples".into()),
            ),
            DeviationDistribution::Empirical { samples }
                if samples.iter().any(|s| !s.is_finite()) =>
            {
                Err(Error::Calibration(
                    "empirical samples must be finite".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// `P(r <= t)` for the relative deviation `r`.
    pub fn relative_cdf(&self, t: f64) -> f64 {
        match self {
            DeviationDistribution::LogNormalDb { sigma_db } => {
                if t <= -1.0 {
                    return 0.0;
                }
                let db = 10.0 * (1.0 + t).log10();
                Normal::new(0.0, *sigma_db).expect("checked sigma").cdf(db)
            }
            DeviationDistribution::Empirical { samples } => {
                samples.iter().filter(|&&s| s <= t).count() as f64 / samples.len() as f64
            }
        }
    }

    /// One draw of the multiplicative factor `a / a_bar`.
    pub fn sample_factor<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            DeviationDistribution::LogNormalDb { sigma_db } => {
                let normal = rand_distr::Normal::new(0.0, *sigma_db).expect("checked sigma");
                let db: f64 = rng.sample(normal);
                10f64.powf(db / 10.0)
            }
            DeviationDistribution::Empirical { samples } => {
                1.0 + samples[rng.random_range(0..samples.len())]
            }
        }
    }

    /// Errors unless some mass lies within `|r| <= max_rel`.
    pub fn check_truncation(&self, max_rel: f64) -> Result<(), Error> {
        self.check()?;
        if !(max_rel > 0.0 && max_rel.is_finite()) {
            return Err(Error::Calibration(format!(
                "truncation {max_rel} must be positive"
            )));
        }
        if let DeviationDistribution::Empirical { samples } = self {
            if !samples.iter().any(|r| r.abs() <= max_rel) {
                return Err(Error::Calibration(format!(
                    "no empirical sample within +/-{max_rel}"
                )));
            }
        }
        Ok(())
    }

    /// One draw of the factor conditioned on `|r| <= max_rel`
    /// (see [`check_truncation`](Self::check_truncation)).
    pub fn sample_factor_within<R: Rng + ?Sized>(&self, rng: &mut R, max_rel: f64) -> f64 {
        match self {
            DeviationDistribution::LogNormalDb { sigma_db } => {
                let normal = Normal::new(0.0, *sigma_db).expect("checked sigma");
                let lo = if max_rel >= 1.0 {
                    f64::NEG_INFINITY
                } else {
                    10.0 * (1.0 - max_rel).log10()
                };
                let hi = 10.0 * (1.0 + max_rel).log10();
                let (plo, phi) = (normal.cdf(lo), normal.cdf(hi));
                let db = normal
                    .inverse_cdf(plo + rng.random::<f64>() * (phi - plo))
                    .clamp(lo, hi);
                10f64.powf(db / 10.0).clamp(1.0 - max_rel, 1.0 + max_rel)
            }
            DeviationDistribution::Empirical { samples } => loop {
                let r = samples[rng.random_range(0..samples.len())];
                if r.abs() <= max_rel {
                    return 1.0 + r;
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSpec {
    pub num_neg: u32,
    pub num_pos: u32,
    /// Band width as a fraction of the nominal value.
    pub band_width_frac: f64,
    /// `l_k = floor(n * P_k * shrink)`.
    pub shrink: f64,
    /// `u_k = ceil(n * P_k * stretch)`.
    pub stretch: f64,
}

impl Default for CalibrationSpec {
    fn default() -> Self {
        CalibrationSpec {
            num_neg: 3,
            num_pos: 3,
            band_width_frac: 0.05,
            shrink: 0.8,
            stretch: 1.2,
        }
    }
}

impl CalibrationSpec {
    pub fn band_ids(&self) -> Vec<i32> {
        (-(self.num_neg as i32)..=self.num_pos as i32).collect()
    }

    fn check(&self) -> Result<(), Error> {
        if self.num_neg == 0 || self.num_pos == 0 {
            return Err(Error::Calibration(
                "need at least one negative and one positive band".into(),
            ));
        }
        if !(self.band_width_frac > 0.0 && self.band_width_frac.is_finite()) {
            return Err(Error::Calibration(format!(
                "band width {} must be positive",
                self.band_width_frac
            )));
        }
        if !(0.0..=1.0).contains(&self.shrink)
            || self.stretch < self.shrink
            || !self.stretch.is_finite()
        {
            return Err(Error::Calibration(format!(
                "need 0 <= shrink <= 1 and stretch >= shrink, got {} and {}",
                self.shrink, self.stretch
            )));
        }
        Ok(())
    }
}

/// Breakpoints `d^k = k * width * |a_bar|` for every band `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointRule {
    pub band_ids: Vec<i32>,
    pub width_frac: f64,
}

impl BreakpointRule {
    pub fn breakpoints(&self, nominal: f64) -> Vec<f64> {
        self.band_ids
            .iter()
            .map(|&k| k as f64 * self.width_frac * nominal.abs())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub profile: BandProfile,
    /// Probability of each band, in band order; sums to one.
    pub probabilities: Vec<f64>,
    pub rule: BreakpointRule,
}

/// Probability mass of each band `K-..K+` of relative width `w`.
///
/// Band `k > K-` covers `((k-1) w, k w]` and band `K-` covers everything up
/// to `K- w`; band `K+` also takes the mass above `K+ w`.
pub fn band_probabilities(dist: &DeviationDistribution, spec: &CalibrationSpec) -> Vec<f64> {
    let ids = spec.band_ids();
    let w = spec.band_width_frac;
    let last = ids.len() - 1;
    let cdf_at = |k: i32| dist.relative_cdf(k as f64 * w);
    ids.iter()
        .enumerate()
        .map(|(p, &k)| {
            let upper = if p == last { 1.0 } else { cdf_at(k) };
            let lower = if p == 0 { 0.0 } else { cdf_at(k - 1) };
            (upper - lower).max(0.0)
        })
        .collect()
}

/// Profile for a row with `n` uncertain coefficients.
pub fn calibrate_bands(
    dist: &DeviationDistribution,
    n: usize,
    spec: &CalibrationSpec,
) -> Result<Calibration, Error> {
    dist.check()?;
    spec.check()?;
    let ids = spec.band_ids();
    let probabilities = band_probabilities(dist, spec);
    let nf = n as f64;
    let mut lower: Vec<usize> = probabilities
        .iter()
        .map(|p| ((nf * p * spec.shrink).floor() as usize).min(n))
        .collect();
    let mut upper: Vec<usize> = probabilities
        .iter()
        .map(|p| ((nf * p * spec.stretch).ceil() as usize).min(n))
        .collect();
    let total: usize = lower.iter().sum();
    if total > n {
        for l in lower.iter_mut() {
            *l = *l * n / total;
        }
    }
    let zero = ids.iter().position(|&k| k == 0).expect("band 0 present");
    upper[zero] = n;
    if lower.iter().zip(&upper).any(|(l, u)| l > u) || lower.iter().sum::<usize>() > n {
        return Err(Error::Calibration(
            "lower counts exceed upper counts after rounding".into(),
        ));
    }
    Ok(Calibration {
        profile: BandProfile::new(ids.clone(), lower, upper),
        probabilities,
        rule: BreakpointRule {
            band_ids: ids,
            width_frac: spec.band_width_frac,
        },
    })
}

/// Makes every nonzero coefficient of `lp` uncertain. Each row gets a profile
/// calibrated on its own number of nonzeros, with `u_0` widened to the
/// number of columns.
pub fn calibrated_uncertainty(
    lp: &LinearProgram,
    dist: &DeviationDistribution,
    spec: &CalibrationSpec,
) -> Result<MultiBandUncertaintySet, Error> {
    let n = lp.num_vars();
    let mut cache: BTreeMap<usize, Calibration> = BTreeMap::new();
    let mut get = |size: usize| -> Result<Calibration, Error> {
        if let Some(c) = cache.get(&size) {
            return Ok(c.clone());
        }
        let c = calibrate_bands(dist, size, spec)?;
        cache.insert(size, c.clone());
        Ok(c)
    };
    let default = get(n)?;
    let mut u = MultiBandUncertaintySet::new(default.profile.clone().with_nominal_capacity(n));
    for (i, row) in lp.rows.iter().enumerate() {
        let nz: Vec<(usize, f64)> = row.iter().copied().filter(|&(_, a)| a != 0.0).collect();
        if nz.is_empty() {
            continue;
        }
        let cal = get(nz.len())?;
        let profile = cal.profile.with_nominal_capacity(n);
        if profile != u.profile {
            u.set_row_profile(i, profile);
        }
        for (j, a) in nz {
            u.insert(i, j, cal.rule.breakpoints(a));
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lognormal() -> DeviationDistribution {
        DeviationDistribution::LogNormalDb { sigma_db: 5.5 }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let p = band_probabilities(&lognormal(), &CalibrationSpec::default());
        assert_eq!(p.len(), 7);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn point_mass_at_zero() {
        let dist = DeviationDistribution::Empirical { samples: vec![0.0] };
        let cal = calibrate_bands(&dist, 10, &CalibrationSpec::default()).unwrap();
        assert_eq!(cal.profile.lower, vec![0, 0, 0, 8, 0, 0, 0]);
        assert_eq!(cal.profile.upper, vec![0, 0, 0, 10, 0, 0, 0]);
    }

    #[test]
    fn symmetric_samples_give_mirrored_interior_bands() {
        // mass 1/4 in each of (-2w,-w], (-w,0], (0,w], (w,2w]
        let w = 0.05;
        let dist = DeviationDistribution::Empirical {
            samples: vec![-1.5 * w, -0.5 * w, 0.5 * w, 1.5 * w],
        };
        let spec = CalibrationSpec {
            num_neg: 2,
            num_pos: 2,
            ..Default::default()
        };
        let p = band_probabilities(&dist, &spec);
        assert_eq!(p, vec![0.0, 0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn breakpoint_rule() {
        let rule = BreakpointRule {
            band_ids: vec![-1, 0, 1, 2],
            width_frac: 0.05,
        };
        assert_eq!(rule.breakpoints(-2.0), vec![-0.1, 0.0, 0.1, 0.2]);
    }

    #[test]
    fn bad_inputs() {
        let bad = DeviationDistribution::LogNormalDb { sigma_db: 0.0 };
        assert!(calibrate_bands(&bad, 5, &CalibrationSpec::default()).is_err());
        let spec = CalibrationSpec {
            num_pos: 0,
            ..Default::default()
        };
        assert!(calibrate_bands(&lognormal(), 5, &spec).is_err());
    }
}
