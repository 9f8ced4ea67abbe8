use super::{LpStatus, RobustSolution, Route};
use crate::model::Sense;
use serde::{Deserialize, Serialize};

/// Price of robustness in percent: the relative objective loss of the robust
/// optimum against the nominal one. `None` when the nominal optimum is zero.
pub fn price_of_robustness(sense: Sense, nominal: f64, robust: f64) -> Option<f64> {
    if nominal.abs() < 1e-12 {
        return None;
    }
    let loss = match sense {
        Sense::Maximize => nominal - robust,
        Sense::Minimize => robust - nominal,
    };
    Some(100.0 * loss / nominal.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    pub solve_ms: f64,
    pub separate_ms: f64,
}

/// Machine-readable summary of a robust solve. Timings are optional so that
/// reports of repeated runs can be compared byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: Route,
    pub status: LpStatus,
    pub objective: Option<f64>,
    pub x: Vec<f64>,
    pub rounds: usize,
    pub lp_iterations: usize,
    pub cuts_added: usize,
    pub objective_trace: Vec<f64>,
    pub lp_vars: usize,
    pub lp_rows: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl SolveReport {
    pub fn new(sol: &RobustSolution, with_timings: bool) -> Self {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        SolveReport {
            method: sol.route,
            status: sol.status,
            objective: sol.objective.is_finite().then_some(sol.objective),
            x: sol.x.clone(),
            rounds: sol.rounds,
            lp_iterations: sol.lp_iterations,
            cuts_added: sol.cuts_added,
            objective_trace: sol.objective_trace.clone(),
            lp_vars: sol.final_lp_size.0,
            lp_rows: sol.final_lp_size.1,
            timings: with_timings.then(|| Timings {
                total_ms: ms(sol.total_time),
                solve_ms: ms(sol.solve_time),
                separate_ms: ms(sol.separate_time),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn por_signs() {
        let p = price_of_robustness(Sense::Maximize, 10.0, 20.0 / 3.0).unwrap();
        assert!((p - 100.0 / 3.0).abs() < 1e-9);
        assert_eq!(price_of_robustness(Sense::Minimize, 4.0, 5.0), Some(25.0));
        assert_eq!(price_of_robustness(Sense::Minimize, 0.0, 5.0), None);
    }
}
