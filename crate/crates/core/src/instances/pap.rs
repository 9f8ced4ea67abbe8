//! Synthetic power assignment instances.
//!
//! Users and transmitters are scattered uniformly in a square. A user hears
//! a transmitter within the hearing radius with nominal fading
//! `max(dist, dmin)^-3.5`, rows are scaled so the strongest link is 1, and a
//! user is covered when `sum_j a_ij p_j >= delta_i`. The threshold is a fixed
//! fraction of what the user receives with every transmitter at full power,
//! so full power is always feasible, even against large fading losses.
//! This propagation model is invented for testing; it does not stand for
//! any real network.

use crate::model::{LinearProgram, RowSense, Sense};
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PapParams {
    pub num_tx: usize,
    pub num_users: usize,
    /// Side of the square area.
    pub area: f64,
    /// Expected number of transmitters within the hearing radius of a user.
    pub density: f64,
    pub seed: u64,
    pub path_loss_exponent: f64,
    pub pmax: f64,
    /// `delta_i` as a fraction of the full-power signal of user `i`.
    pub coverage_fraction: f64,
}

impl Default for PapParams {
    fn default() -> Self {
        PapParams {
            num_tx: 50,
            num_users: 20,
            area: 10.0,
            density: 6.0,
            seed: 1,
            path_loss_exponent: 3.5,
            pmax: 1.0,
            coverage_fraction: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PapInstance {
    pub tx_positions: Vec<(f64, f64)>,
    pub pmax: Vec<f64>,
    pub user_positions: Vec<(f64, f64)>,
    pub delta: Vec<f64>,
    /// Sparse fading rows, one per user: `(transmitter, a_bar)`.
    pub fading: Vec<Vec<(usize, f64)>>,
    /// Hearing radius finally used.
    pub radius: f64,
    /// How many times the radius had to grow before every user heard a transmitter.
    pub regenerations: usize,
}

impl PapInstance {
    /// Instance from an explicit dense fading matrix (rows are users).
    pub fn new(fading: Vec<Vec<f64>>, delta: Vec<f64>, pmax: Vec<f64>) -> Result<Self, Error> {
        if fading.len() != delta.len() || fading.iter().any(|r| r.len() != pmax.len()) {
            return Err(Error::Generation(
                "fading matrix does not match delta and pmax".into(),
            ));
        }
        if fading.iter().flatten().any(|&a| a < 0.0)
            || delta.iter().any(|&d| d <= 0.0)
            || pmax.iter().any(|&p| p <= 0.0)
        {
            return Err(Error::Generation(
                "need a >= 0, delta > 0 and pmax > 0".into(),
            ));
        }
        Ok(PapInstance {
            tx_positions: vec![(0.0, 0.0); pmax.len()],
            user_positions: vec![(0.0, 0.0); delta.len()],
            fading: fading
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .enumerate()
                        .filter(|&(_, a)| a > 0.0)
                        .collect()
                })
                .collect(),
            delta,
            pmax,
            radius: f64::INFINITY,
            regenerations: 0,
        })
    }

    pub fn num_tx(&self) -> usize {
        self.pmax.len()
    }

    pub fn num_users(&self) -> usize {
        self.delta.len()
    }

    /// `min 1'p  s.t.  A p >= delta,  0 <= p <= pmax`.
    pub fn lp(&self) -> LinearProgram {
        let n = self.num_tx();
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0; n])
            .with_bounds(vec![0.0; n], self.pmax.clone());
        for (row, &d) in self.fading.iter().zip(&self.delta) {
            lp.add_row(row.clone(), RowSense::Ge, d);
        }
        lp
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

pub fn generate_pap(params: &PapParams) -> Result<PapInstance, Error> {
    let p = params;
    if p.num_tx == 0 || p.num_users == 0 {
        return Err(Error::Generation(
            "need at least one transmitter and one user".into(),
        ));
    }
    if !(p.area > 0.0
        && p.density > 0.0
        && p.pmax > 0.0
        && p.coverage_fraction > 0.0
        && p.coverage_fraction <= 1.0)
    {
        return Err(Error::Generation(
            "area, density and pmax must be positive, coverage fraction in (0, 1]".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let point = |rng: &mut ChaCha8Rng| (rng.random::<f64>() * p.area, rng.random::<f64>() * p.area);
    let tx: Vec<(f64, f64)> = (0..p.num_tx).map(|_| point(&mut rng)).collect();
    let users: Vec<(f64, f64)> = (0..p.num_users).map(|_| point(&mut rng)).collect();
    let dmin = 0.01 * p.area;
    let mut radius = p.area * (p.density / (std::f64::consts::PI * p.num_tx as f64)).sqrt();
    let mut regenerations = 0;
    loop {
        let heard_by_all = users
            .iter()
            .all(|&u| tx.iter().any(|&t| dist(u, t) <= radius));
        if heard_by_all {
            break;
        }
        radius *= 1.25;
        regenerations += 1;
    }
    let mut fading = Vec::with_capacity(p.num_users);
    let mut delta = Vec::with_capacity(p.num_users);
    for &u in &users {
        let mut row: Vec<(usize, f64)> = tx
            .iter()
            .enumerate()
            .filter(|&(_, &t)| dist(u, t) <= radius)
            .map(|(j, &t)| (j, dist(u, t).max(dmin).powf(-p.path_loss_exponent)))
            .collect();
        let strongest = row.iter().map(|r| r.1).fold(0.0, f64::max);
        for r in row.iter_mut() {
            r.1 /= strongest;
        }
        let full: f64 = row.iter().map(|r| r.1 * p.pmax).sum();
        delta.push(p.coverage_fraction * full);
        fading.push(row);
    }
    Ok(PapInstance {
        tx_positions: tx,
        pmax: vec![p.pmax; p.num_tx],
        user_positions: users,
        delta,
        fading,
        radius,
        regenerations,
    })
}
