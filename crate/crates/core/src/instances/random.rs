//! Random small instances for property tests and benchmarks.

use crate::model::{BandProfile, LinearProgram, MultiBandUncertaintySet, RowSense, Sense};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub rows: usize,
    pub cols: usize,
    /// Number of negative and positive bands.
    pub neg_bands: u32,
    pub pos_bands: u32,
    /// Probability that a coefficient is nonzero.
    pub density: f64,
    /// Probability that a coefficient (zero or not) is uncertain.
    pub uncertain: f64,
    /// Probability that a row is stated as `>=` (negated, same feasible set).
    pub ge_rows: f64,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            rows: 3,
            cols: 4,
            neg_bands: 1,
            pos_bands: 2,
            density: 0.8,
            uncertain: 0.7,
            ge_rows: 0.0,
            seed: 0,
        }
    }
}

/// Random profile for rows with `n` columns of which `uncertain` are uncertain:
/// lower counts only on as many nonzero bands as there are uncertain columns.
pub fn random_profile<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    uncertain: usize,
    neg: u32,
    pos: u32,
) -> BandProfile {
    let ids: Vec<i32> = (-(neg as i32)..=pos as i32).collect();
    let mut lower = vec![0; ids.len()];
    let mut upper: Vec<usize> = ids.iter().map(|_| rng.random_range(0..=n)).collect();
    let zero = ids.iter().position(|&k| k == 0).expect("band 0");
    upper[zero] = n;
    let mut budget = uncertain;
    for p in 0..ids.len() {
        if budget == 0 || !rng.random_bool(0.3) {
            continue;
        }
        let l = rng.random_range(0..=budget.min(upper[p]).min(2));
        lower[p] = l;
        budget -= l;
    }
    BandProfile::new(ids, lower, upper)
}

/// Strictly increasing breakpoints with `d^0 = 0`, spread over `±scale`.
pub fn random_breakpoints<R: Rng + ?Sized>(rng: &mut R, ids: &[i32], scale: f64) -> Vec<f64> {
    let neg = ids.iter().filter(|&&k| k < 0).count();
    let pos = ids.iter().filter(|&&k| k > 0).count();
    let mut steps = |count: usize| -> Vec<f64> {
        let mut v: Vec<f64> = (0..count).map(|_| 0.05 + rng.random::<f64>()).collect();
        let mut acc = 0.0;
        for s in v.iter_mut() {
            acc += *s;
            *s = acc;
        }
        let total = acc.max(1e-12);
        v.iter().map(|s| s / total * scale).collect()
    };
    let down = steps(neg);
    let up = steps(pos);
    let mut out: Vec<f64> = down.iter().rev().map(|s| -s).collect();
    out.push(0.0);
    out.extend(up);
    out
}

/// A bounded random robust LP: `max c x` with nonnegative rows, positive
/// right-hand sides and `0 <= x <= 10`, so `x = 0` is always robust feasible.
/// All rows share one random profile.
pub fn random_instance(spec: &RandomSpec) -> (LinearProgram, MultiBandUncertaintySet) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (m, n) = (spec.rows, spec.cols);
    let c: Vec<f64> = (0..n).map(|_| rng.random_range(1..=10) as f64).collect();
    let mut lp = LinearProgram::new(Sense::Maximize, c).with_bounds(vec![0.0; n], vec![10.0; n]);
    let mut uncertain_cols: Vec<Vec<usize>> = Vec::new();
    for _ in 0..m {
        let mut coefs = Vec::new();
        for j in 0..n {
            if rng.random_bool(spec.density) {
                coefs.push((j, rng.random_range(1..=20) as f64 / 2.0));
            }
        }
        if coefs.is_empty() {
            coefs.push((rng.random_range(0..n), 1.0));
        }
        let rhs = rng.random_range(10..=40) as f64;
        lp.add_row(coefs, RowSense::Le, rhs);
        let mut cols: Vec<usize> = (0..n).filter(|_| rng.random_bool(spec.uncertain)).collect();
        cols.shuffle(&mut rng);
        uncertain_cols.push(cols);
    }
    let min_uncertain = uncertain_cols.iter().map(Vec::len).min().unwrap_or(0);
    let profile = random_profile(&mut rng, n, min_uncertain, spec.neg_bands, spec.pos_bands);
    let mut u = MultiBandUncertaintySet::new(profile.clone());
    for (i, cols) in uncertain_cols.iter().enumerate() {
        for &j in cols {
            let nominal = lp.coef(i, j).abs().max(1.0);
            // at most 90% downward so coefficients stay positive
            let d = random_breakpoints(&mut rng, &profile.band_ids, 0.9 * nominal);
            u.insert(i, j, d);
        }
    }
    if spec.ge_rows > 0.0 {
        negate_some_rows(&mut lp, &mut u, spec.ge_rows, &mut rng);
    }
    (lp, u)
}

/// States some rows as `-a x >= -b`, mirroring their uncertainty.
fn negate_some_rows<R: Rng + ?Sized>(
    lp: &mut LinearProgram,
    u: &mut MultiBandUncertaintySet,
    prob: f64,
    rng: &mut R,
) {
    for i in 0..lp.num_rows() {
        if !rng.random_bool(prob) {
            continue;
        }
        for c in lp.rows[i].iter_mut() {
            c.1 = -c.1;
        }
        lp.rhs[i] = -lp.rhs[i];
        lp.row_sense[i] = RowSense::Ge;
        let mirrored = u.profile_for(i).mirrored();
        let keys: Vec<(usize, usize)> = u
            .deviations
            .range((i, 0)..=(i, usize::MAX))
            .map(|(k, _)| *k)
            .collect();
        for key in keys {
            let d = u.deviations.get_mut(&key).expect("key listed");
            d.reverse();
            for v in d.iter_mut() {
                *v = -*v;
            }
        }
        u.set_row_profile(i, mirrored);
    }
}

/// A random point in `[0, 10]^n`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>() * 10.0).collect()
}
