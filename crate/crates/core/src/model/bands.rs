use std::collections::BTreeMap;

/// Band index set with per-band cardinality bounds.
///
/// `band_ids` is sorted ascending and contains `0`; `lower[p]`/`upper[p]` bound
/// how many coefficients of a row may fall in band `band_ids[p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandProfile {
    pub band_ids: Vec<i32>,
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

impl BandProfile {
    pub fn new(band_ids: Vec<i32>, lower: Vec<usize>, upper: Vec<usize>) -> Self {
        BandProfile {
            band_ids,
            lower,
            upper,
        }
    }

    /// Bands `-neg..=pos` with no lower bounds and the given upper bounds.
    pub fn symmetric(neg: i32, pos: i32, upper: Vec<usize>) -> Self {
        let ids: Vec<i32> = (-neg..=pos).collect();
        let lower = vec![0; ids.len()];
        BandProfile::new(ids, lower, upper)
    }

    pub fn num_bands(&self) -> usize {
        self.band_ids.len()
    }

    pub fn position(&self, band: i32) -> Option<usize> {
        self.band_ids.iter().position(|&k| k == band)
    }

    pub fn zero_position(&self) -> Option<usize> {
        self.position(0)
    }

    pub fn lower_of(&self, band: i32) -> Option<usize> {
        self.position(band).map(|p| self.lower[p])
    }

    pub fn upper_of(&self, band: i32) -> Option<usize> {
        self.position(band).map(|p| self.upper[p])
    }

    pub fn lower_sum(&self) -> usize {
        self.lower.iter().sum()
    }

    /// Sum of lower counts over the nonzero bands.
    pub fn nonzero_lower_sum(&self) -> usize {
        self.band_ids
            .iter()
            .zip(&self.lower)
            .filter(|(&k, _)| k != 0)
            .map(|(_, &l)| l)
            .sum()
    }

    /// `max { u_k : k != 0 }`, or 0 when only band 0 exists.
    pub fn max_nonzero_upper(&self) -> usize {
        self.band_ids
            .iter()
            .zip(&self.upper)
            .filter(|(&k, _)| k != 0)
            .map(|(_, &u)| u)
            .max()
            .unwrap_or(0)
    }

    /// Profile seen by the negated row: band `k` becomes band `-k`.
    pub fn mirrored(&self) -> BandProfile {
        let n = self.band_ids.len();
        let mut ids = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for p in (0..n).rev() {
            ids.push(-self.band_ids[p]);
            lower.push(self.lower[p]);
            upper.push(self.upper[p]);
        }
        BandProfile::new(ids, lower, upper)
    }

    /// Sets `u_0 = n`.
    pub fn with_nominal_capacity(mut self, n: usize) -> Self {
        if let Some(p) = self.zero_position() {
            self.upper[p] = n;
        }
        self
    }
}

/// Multi-band uncertainty over the coefficient matrix of an LP.
///
/// Coefficients without an entry in `deviations` are certain. Each entry holds
/// one breakpoint per band of the row's profile, aligned with its `band_ids`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBandUncertaintySet {
    pub profile: BandProfile,
    pub row_profiles: BTreeMap<usize, BandProfile>,
    pub deviations: BTreeMap<(usize, usize), Vec<f64>>,
}

/// One row's slice of an uncertainty set.
#[derive(Debug, Clone, Copy)]
pub struct RowUncertainty<'a> {
    pub row: usize,
    pub profile: &'a BandProfile,
    set: &'a MultiBandUncertaintySet,
}

impl<'a> RowUncertainty<'a> {
    /// Uncertain coefficients of the row, ordered by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &'a [f64])> + 'a {
        let row = self.row;
        self.set
            .deviations
            .range((row, 0)..=(row, usize::MAX))
            .map(|(&(_, j), d)| (j, d.as_slice()))
    }

    pub fn num_uncertain(&self) -> usize {
        self.entries().count()
    }

    pub fn is_certain(&self) -> bool {
        self.entries().next().is_none()
    }

    pub fn breakpoints(&self, col: usize) -> Option<&'a [f64]> {
        self.set.deviations.get(&(self.row, col)).map(Vec::as_slice)
    }
}

impl MultiBandUncertaintySet {
    pub fn new(profile: BandProfile) -> Self {
        MultiBandUncertaintySet {
            profile,
            row_profiles: BTreeMap::new(),
            deviations: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.deviations.is_empty()
    }

    pub fn profile_for(&self, row: usize) -> &BandProfile {
        self.row_profiles.get(&row).unwrap_or(&self.profile)
    }

    pub fn set_row_profile(&mut self, row: usize, profile: BandProfile) {
        self.row_profiles.insert(row, profile);
    }

    pub fn insert(&mut self, row: usize, col: usize, breakpoints: Vec<f64>) {
        self.deviations.insert((row, col), breakpoints);
    }

    pub fn row(&self, row: usize) -> RowUncertainty<'_> {
        RowUncertainty {
            row,
            profile: self.profile_for(row),
            set: self,
        }
    }

    /// Largest breakpoint of `(row, col)`, i.e. `d^{K+}`.
    pub fn max_deviation(&self, row: usize, col: usize) -> Option<f64> {
        self.deviations
            .get(&(row, col))
            .and_then(|d| d.last().copied())
    }
}
