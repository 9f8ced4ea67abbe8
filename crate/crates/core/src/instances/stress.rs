use super::protection::realization_rng;
use crate::model::{LinearProgram, MultiBandUncertaintySet, RowSense};
use crate::separation::nonnegative_point;
use crate::Error;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

/// Outcome of [`in_set_stress`].
#[derive(Debug, Clone, PartialEq)]
pub struct StressReport {
    pub samples: usize,
    /// Number of `(sample, row)` pairs where the scenario violated the row.
    pub failures: usize,
    /// Largest `lhs - b` seen over all samples and rows.
    pub worst_excess: f64,
    pub first_failure: Option<(usize, usize)>,
}

/// A random scenario of one row inside the uncertainty set: the deviation
/// of each uncertain column, by column.
///
/// Band counts are drawn so that every lower count is met and no upper count
/// is exceeded, with certain columns filling band 0 first. Each deviation is
/// the band's extreme value with probability 1/2, and otherwise uniform
/// inside the band.
pub fn sample_scenario<R: Rng + ?Sized>(
    row: usize,
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    rng: &mut R,
) -> Vec<(usize, f64)> {
    let view = u.row(row);
    let p = view.profile;
    let entries: Vec<(usize, &[f64])> = view.entries().collect();
    let mut counts = vec![0usize; p.num_bands()];
    if let Some(z) = p.zero_position() {
        counts[z] = lp.num_vars() - entries.len();
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.shuffle(rng);
    let mut band_of = vec![usize::MAX; entries.len()];
    let mut next = order.into_iter();
    let mut bands: Vec<usize> = (0..p.num_bands()).collect();
    bands.shuffle(rng);
    for &q in &bands {
        while counts[q] < p.lower[q] {
            let Some(e) = next.next() else { break };
            band_of[e] = q;
            counts[q] += 1;
        }
    }
    for e in next {
        let open: Vec<usize> = (0..p.num_bands())
            .filter(|&q| counts[q] < p.upper[q])
            .collect();
        if open.is_empty() {
            continue;
        }
        let q = open[rng.random_range(0..open.len())];
        band_of[e] = q;
        counts[q] += 1;
    }
    entries
        .iter()
        .zip(band_of)
        .map(|(&(j, d), q)| {
            let dev = match q {
                usize::MAX => 0.0,
                // the lowest band is the single value d[0]
                0 => d[0],
                _ if rng.random_bool(0.5) => d[q],
                _ => {
                    // uniform in (d[q-1], d[q]]
                    let t: f64 = 1.0 - rng.random::<f64>();
                    d[q - 1] + t * (d[q] - d[q - 1])
                }
            };
            (j, dev)
        })
        .collect()
}

/// Checks `x` against `samples` random scenarios of every row of a canonical
/// instance. A failure means `x` is not robust feasible.
pub fn in_set_stress(
    lp: &LinearProgram,
    u: &MultiBandUncertaintySet,
    x: &[f64],
    samples: usize,
    seed: u64,
) -> Result<StressReport, Error> {
    if let Some(row) = (0..lp.num_rows()).find(|&i| lp.row_sense[i] != RowSense::Le) {
        return Err(Error::NotCanonical { row });
    }
    let x = nonnegative_point(lp, x)?;
    let per_sample: Vec<(usize, f64, Option<usize>)> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = realization_rng(seed, s);
            let mut failures = 0;
            let mut worst = f64::NEG_INFINITY;
            let mut first = None;
            for i in 0..lp.num_rows() {
                let dev: f64 = sample_scenario(i, lp, u, &mut rng)
                    .iter()
                    .map(|&(j, d)| d * x[j])
                    .sum();
                let b = lp.rhs[i];
                let excess = lp.row_activity(i, &x) + dev - b;
                worst = worst.max(excess);
                if excess > 1e-6 * b.abs().max(1.0) {
                    failures += 1;
                    first.get_or_insert(i);
                }
            }
            (failures, worst, first)
        })
        .collect();
    Ok(StressReport {
        samples,
        failures: per_sample.iter().map(|s| s.0).sum(),
        worst_excess: per_sample
            .iter()
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max),
        first_failure: per_sample
            .iter()
            .enumerate()
            .find_map(|(s, r)| r.2.map(|i| (s, i))),
    })
}
