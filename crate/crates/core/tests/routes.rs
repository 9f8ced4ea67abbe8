mod common;

use common::*;
use multiband_core::instances::random::random_point;
use multiband_core::instances::PapInstance;
use multiband_core::separation::oracle::dev_relaxation_lp;
use multiband_core::{
    canonicalize, check_robust, solve_compact, solve_cutting_planes, worst_case_deviation,
    BandProfile, CanonicalizeMode, CompactOptions, CutLimits, LinearProgram, LpSolver, LpStatus,
    MultiBandUncertaintySet, RowSense, Sense, SimplexSolver,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn both_routes(lp: &LinearProgram, u: &MultiBandUncertaintySet) -> (f64, f64, Vec<f64>) {
    let canon = canonicalize(lp, u, CanonicalizeMode::SplitEqualities).unwrap();
    let mut s = SimplexSolver::default();
    let a = solve_compact(
        &canon.lp,
        &canon.uncertainty,
        &mut s,
        CompactOptions::default(),
    )
    .unwrap();
    let b =
        solve_cutting_planes(&canon.lp, &canon.uncertainty, &mut s, CutLimits::default()).unwrap();
    assert_eq!(a.status, LpStatus::Optimal);
    assert_eq!(b.status, LpStatus::Optimal);
    (a.objective, b.objective, a.x)
}

#[test]
fn routes_agree_with_mixed_row_senses() {
    for seed in 0..80 {
        let (lp, u) = small_instance(seed, 4, 5, 0.5);
        let (a, b, _) = both_routes(&lp, &u);
        assert!(
            (a - b).abs() <= 1e-6 * (1.0 + a.abs()),
            "seed {seed}: {a} vs {b}"
        );
    }
}

#[test]
fn elided_counterpart_has_the_same_optimum() {
    let mut s = SimplexSolver::default();
    for seed in 0..60 {
        let (lp, u) = small_instance(500 + seed, 3, 5, 0.0);
        let full = solve_compact(&lp, &u, &mut s, CompactOptions::default()).unwrap();
        let small = solve_compact(
            &lp,
            &u,
            &mut s,
            CompactOptions {
                elide_trivial_rows: true,
            },
        )
        .unwrap();
        assert!((full.objective - small.objective).abs() <= 1e-9 * (1.0 + full.objective.abs()));
    }
}

#[test]
fn robust_optimum_is_robust_by_enumeration_on_original_rows() {
    for seed in 0..60 {
        let (lp, u) = small_instance(900 + seed, 3, 4, 0.5);
        let (_, _, x) = both_routes(&lp, &u);
        assert!(robust_by_enumeration(&lp, &u, &x, 1e-7), "seed {seed}");
    }
}

#[test]
fn cut_loop_objective_is_monotone() {
    let mut s = SimplexSolver::default();
    for seed in 0..60 {
        let (lp, u) = small_instance(1300 + seed, 4, 6, 0.0);
        let r = solve_cutting_planes(&lp, &u, &mut s, CutLimits::default()).unwrap();
        assert_eq!(lp.sense, Sense::Maximize);
        for w in r.objective_trace.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs()),
                "seed {seed}: {:?}",
                r.objective_trace
            );
        }
    }
}

/// A profile that forces one coefficient into a lower band makes the robust
/// row looser than the nominal one.
#[test]
fn forced_lower_band_beats_the_nominal_optimum() {
    let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 3.0]);
    lp.add_row(vec![(0, 1.0), (1, 2.0)], RowSense::Le, 10.0);
    let mut u = MultiBandUncertaintySet::new(BandProfile::new(vec![-1, 0], vec![1, 0], vec![2, 2]));
    u.insert(0, 0, vec![-0.5, 0.0]);
    u.insert(0, 1, vec![-1.0, 0.0]);
    // the adversary must lower one coefficient and picks the cheaper loss:
    // robust row max(0.5 x0 + 2 x1, x0 + x1) <= 10, optimum x = (20/3, 10/3)
    let nominal = SimplexSolver::default().solve(&lp).unwrap().objective;
    assert!((nominal - 15.0).abs() < 1e-9);
    let (a, b, x) = both_routes(&lp, &u);
    assert!((a - 50.0 / 3.0).abs() < 1e-9, "{a}");
    assert!((b - 50.0 / 3.0).abs() < 1e-9, "{b}");
    assert!(robust_by_enumeration(&lp, &u, &x, 1e-9));
}

/// Two users, two transmitters, fading `[[1, .5], [.5, 1]]`, `delta = 1`, and
/// at most one coefficient per user may fade by 20%. By symmetry the optimum
/// has `p1 = p2 = p` with `1.5 p - 0.2 p = 1`, so the total is `20/13`.
#[test]
fn two_by_two_power_assignment() {
    let pap = PapInstance::new(
        vec![vec![1.0, 0.5], vec![0.5, 1.0]],
        vec![1.0, 1.0],
        vec![10.0, 10.0],
    )
    .unwrap();
    let lp = pap.lp();
    let mut u = MultiBandUncertaintySet::new(BandProfile::new(vec![-1, 0], vec![0, 0], vec![1, 2]));
    for (i, row) in lp.rows.iter().enumerate() {
        for &(j, a) in row {
            u.insert(i, j, vec![-0.2 * a, 0.0]);
        }
    }
    let mut s = SimplexSolver::default();
    assert!((s.solve(&lp).unwrap().objective - 4.0 / 3.0).abs() < 1e-12);
    let (a, b, x) = both_routes(&lp, &u);
    assert!((a - 20.0 / 13.0).abs() < 1e-9, "{a}");
    assert!((b - 20.0 / 13.0).abs() < 1e-9, "{b}");
    assert!((x[0] - 10.0 / 13.0).abs() < 1e-9 && (x[1] - 10.0 / 13.0).abs() < 1e-9);
}

/// The simplex duals of the assignment relaxation certify its optimum:
/// they are dual feasible and their objective equals the flow deviation.
#[test]
fn relaxation_duals_witness_strong_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut s = SimplexSolver::default();
    for seed in 0..100 {
        let (lp, u) = small_instance(1700 + seed, 1, 5, 0.0);
        let x = random_point(&mut rng, 5);
        let (relax, _) = dev_relaxation_lp(0, &lp, &u, &x).unwrap();
        let sol = s.solve(&relax).unwrap();
        let y = sol.duals.expect("duals");
        let dual_obj: f64 = relax.rhs.iter().zip(&y).map(|(b, y)| b * y).sum();
        let (dev, _) = worst_case_deviation(0, &lp, &u, &x).unwrap();
        assert!(
            (dual_obj - dev).abs() < 1e-8,
            "seed {seed}: dual {dual_obj} vs {dev}"
        );
        for (r, sense) in relax.row_sense.iter().enumerate() {
            match sense {
                RowSense::Le => assert!(y[r] >= -1e-9),
                RowSense::Ge => assert!(y[r] <= 1e-9),
                RowSense::Eq => {}
            }
        }
        let mut reduced = relax.objective.clone();
        for (r, row) in relax.rows.iter().enumerate() {
            for &(j, a) in row {
                reduced[j] -= a * y[r];
            }
        }
        assert!(
            reduced.iter().all(|&c| c <= 1e-8),
            "seed {seed}: {reduced:?}"
        );
    }
}

#[test]
fn canonical_rows_map_back_to_the_original_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for seed in 0..60 {
        let (mut lp, u) = small_instance(2100 + seed, 4, 4, 0.5);
        lp.row_sense[3] = RowSense::Eq;
        let canon = canonicalize(&lp, &u, CanonicalizeMode::SplitEqualities).unwrap();
        assert_eq!(canon.lp.num_rows(), lp.num_rows() + 1);
        assert!(canon.lp.is_canonical());
        assert!(canonicalize(&lp, &u, CanonicalizeMode::Strict).is_err());
        let x = random_point(&mut rng, 4);
        for (c, origin) in canon.origin.iter().enumerate() {
            let (i, sign) = (origin.row, if origin.negated { -1.0 } else { 1.0 });
            assert!((canon.lp.row_activity(c, &x) - sign * lp.row_activity(i, &x)).abs() < 1e-12);
            assert_eq!(canon.lp.rhs[c], sign * lp.rhs[i]);
            // worst case of the canonical row is the matching extreme of the original
            let (max, min) = deviation_range(&lp, &u, i, &x);
            let (dev, _) = worst_case_deviation(c, &canon.lp, &canon.uncertainty, &x).unwrap();
            let expected = if origin.negated { -min } else { max };
            assert!(
                (dev - expected).abs() < 1e-9,
                "seed {seed} row {c}: {dev} vs {expected}"
            );
        }
        let robust_canon = check_robust(&canon.lp, &canon.uncertainty, &x)
            .unwrap()
            .iter()
            .all(|c| !c.violated);
        assert_eq!(
            robust_canon,
            robust_by_enumeration(&lp, &u, &x, 1e-6),
            "seed {seed}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_agree(seed in 0u64..100_000, rows in 1usize..5, cols in 1usize..6, ge in 0.0f64..1.0) {
        let (lp, u) = small_instance(seed, rows, cols, ge);
        let (a, b, _) = both_routes(&lp, &u);
        prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()));
    }

    #[test]
    fn robust_optimum_never_beats_a_relaxed_set(seed in 0u64..100_000) {
        // dropping all uncertainty can only help, unless lower counts force
        // favourable deviations
        let (lp, u) = small_instance(seed, 3, 4, 0.0);
        prop_assume!((0..lp.num_rows()).all(|i| u.profile_for(i).nonzero_lower_sum() == 0));
        let mut s = SimplexSolver::default();
        let nominal = s.solve(&lp).unwrap().objective;
        let (a, _, _) = both_routes(&lp, &u);
        prop_assert!(a <= nominal + 1e-9 * (1.0 + nominal.abs()));
    }
}
