use crate::args::*;
use crate::fail::{status_code, CmdResult, Fail, OK};
use crate::output::{emit, opt, render_table, KvBlock};
use multiband_core::instances::{
    calibrate_bands, calibrated_uncertainty, compare as compare_routes, evaluate_protection,
    generate_pap, in_set_stress, CalibrationSpec, CompareOptions, CompareRow,
    DeviationDistribution, PapParams, ProtectionReport,
};
use multiband_core::model::io::{
    nominal_only_profile, parse_instance, parse_vector, write_instance, write_vector, Instance, Num,
};
use multiband_core::separation::{
    build_flow_instance, check_robust_with_tol, min_cost_flow, RobustnessCertificate,
};
use multiband_core::solver::{price_of_robustness, simplex_solve, ExecSolver, SolveReport};
use multiband_core::{
    build_compact, canonicalize, emit_cut, solve_compact, solve_cutting_planes, validate,
    CanonicalForm, CanonicalizeMode, CompactOptions, CutLimits, LpSolver, LpStatus,
    MultiBandUncertaintySet, SimplexSolver,
};
use serde::Serialize;
use std::io::Read as _;
use std::path::Path;
use std::time::Duration;

fn read_text(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path)
        .map_err(|e| Fail::from(e).context(format!("reading {}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, Fail> {
    let text = read_text(path)?;
    let inst =
        parse_instance(&text).map_err(|e| Fail::from(e).context(path.display().to_string()))?;
    let report = validate(&inst.lp, &inst.uncertainty);
    if !report.is_valid() {
        return Err(Fail::input(format!(
            "{}: invalid instance\n{report}",
            path.display()
        )));
    }
    Ok(inst)
}

fn read_point(path: &Path, n: usize) -> Result<Vec<f64>, Fail> {
    let text = read_text(path)?;
    let x = parse_vector(&text).map_err(|e| Fail::from(e).context(path.display().to_string()))?;
    if x.len() != n {
        return Err(Fail::input(format!(
            "{}: {} values, the instance has {n} variables",
            path.display(),
            x.len()
        )));
    }
    Ok(x)
}

fn canonical(inst: &Instance, model: &ModelArgs) -> Result<CanonicalForm, Fail> {
    let mode = if model.strict {
        CanonicalizeMode::Strict
    } else {
        CanonicalizeMode::SplitEqualities
    };
    Ok(canonicalize(&inst.lp, &inst.uncertainty, mode)?)
}

fn compact_options(model: &ModelArgs) -> CompactOptions {
    CompactOptions {
        elide_trivial_rows: model.elide_trivial_rows,
    }
}

fn make_solver(spec: &str) -> Result<Box<dyn LpSolver>, Fail> {
    match spec {
        "builtin" => Ok(Box::new(SimplexSolver::default())),
        _ => {
            let mut words = spec
                .strip_prefix("exec:")
                .unwrap_or_default()
                .split_whitespace();
            match words.next() {
                Some(program) => {
                    let mut exec = ExecSolver::new(program);
                    exec.args = words.map(str::to_string).collect();
                    Ok(Box::new(exec))
                }
                None => Err(Fail::input(format!(
                    "unknown solver `{spec}`; use builtin or exec:<program> [args]"
                ))),
            }
        }
    }
}

fn cut_limits(s: &SolverArgs) -> Result<CutLimits, Fail> {
    if !(s.tol > 0.0 && s.tol.is_finite()) {
        return Err(Fail::input(format!("tolerance {} must be positive", s.tol)));
    }
    let time_limit = match s.time_limit {
        Some(t) if t > 0.0 && t.is_finite() => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(Fail::input(format!("time limit {t} must be positive"))),
        None => None,
    };
    Ok(CutLimits {
        max_rounds: s.max_iter,
        tol: s.tol,
        time_limit,
    })
}

fn distribution(d: &DistArgs) -> Result<DeviationDistribution, Fail> {
    let dist = match &d.samples {
        Some(path) => {
            let text = read_text(path)?;
            let samples = parse_vector(&text)
                .map_err(|e| Fail::from(e).context(path.display().to_string()))?;
            DeviationDistribution::Empirical { samples }
        }
        None => DeviationDistribution::LogNormalDb {
            sigma_db: d.sigma_db,
        },
    };
    dist.check()?;
    Ok(dist)
}

fn calibration_spec(c: &CalibrationArgs) -> CalibrationSpec {
    CalibrationSpec {
        num_neg: c.neg,
        num_pos: c.pos,
        band_width_frac: c.width,
        shrink: c.shrink,
        stretch: c.stretch,
    }
}

/// Re-derives each certificate's deviation from the flow cost.
fn audit_certificates(
    canon: &CanonicalForm,
    x: &[f64],
    certs: &[RobustnessCertificate],
) -> Result<(), Fail> {
    for cert in certs {
        if canon.uncertainty.row(cert.row).is_certain() {
            continue;
        }
        let net = build_flow_instance(cert.row, &canon.lp, &canon.uncertainty, x)?;
        let flow =
            min_cost_flow(&net).map_err(|e| Fail::internal(format!("row {}: {e}", cert.row)))?;
        let dev = cert.worst_case_deviation;
        if (-flow.cost - dev).abs() > 1e-9 * (1.0 + dev.abs()) {
            return Err(Fail::internal(format!(
                "row {}: flow cost {} does not match the certificate deviation {dev}",
                cert.row, flow.cost
            )));
        }
    }
    Ok(())
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Serialize)]
struct ReformulateSummary {
    base_vars: usize,
    base_rows: usize,
    canonical_rows: usize,
    added_vars: usize,
    added_rows: usize,
    rlp_vars: usize,
    rlp_rows: usize,
}

pub fn reformulate(a: ReformulateArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let canon = canonical(&inst, &a.model)?;
    let cc = build_compact(&canon.lp, &canon.uncertainty, compact_options(&a.model))?;
    std::fs::write(&a.out, cc.write())
        .map_err(|e| Fail::from(e).context(format!("writing {}", a.out.display())))?;
    let s = ReformulateSummary {
        base_vars: inst.lp.num_vars(),
        base_rows: inst.lp.num_rows(),
        canonical_rows: canon.lp.num_rows(),
        added_vars: cc.added_vars(),
        added_rows: cc.added_rows(),
        rlp_vars: cc.rlp.num_vars(),
        rlp_rows: cc.rlp.num_rows(),
    };
    emit(&a.output, &s, || {
        let mut kv = KvBlock::default();
        kv.push("base vars", s.base_vars);
        kv.push("base rows", s.base_rows);
        kv.push("canonical rows", s.canonical_rows);
        kv.push("added vars", s.added_vars);
        kv.push("added rows", s.added_rows);
        kv.push("written to", a.out.display());
        kv.render()
    })?;
    Ok(OK)
}

#[derive(Serialize)]
struct SolveOutput {
    #[serde(flatten)]
    report: SolveReport,
    nominal_status: LpStatus,
    nominal_objective: Option<f64>,
    por_pct: Option<f64>,
}

pub fn solve(a: SolveArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let canon = canonical(&inst, &a.model)?;
    let limits = cut_limits(&a.solver)?;
    let mut solver = make_solver(&a.solver.solver)?;
    let nominal = solver.solve(&inst.lp)?;
    let sol = match a.method {
        Method::Compact => solve_compact(
            &canon.lp,
            &canon.uncertainty,
            &mut *solver,
            compact_options(&a.model),
        )?,
        Method::Cuts => solve_cutting_planes(&canon.lp, &canon.uncertainty, &mut *solver, limits)?,
    };
    if sol.status == LpStatus::Optimal {
        let certs = check_robust_with_tol(&canon.lp, &canon.uncertainty, &sol.x, limits.tol)?;
        if let Some(c) = certs.iter().find(|c| c.violated) {
            return Err(Fail::internal(format!(
                "the robust solution violates row {} by {}",
                c.row, c.violation_amount
            )));
        }
        audit_certificates(&canon, &sol.x, &certs)?;
        if let Some(path) = &a.x_out {
            std::fs::write(path, write_vector(&sol.x))
                .map_err(|e| Fail::from(e).context(format!("writing {}", path.display())))?;
        }
    }
    let nominal_objective = (nominal.status == LpStatus::Optimal).then_some(nominal.objective);
    let por_pct = match (nominal_objective, sol.status) {
        (Some(nom), LpStatus::Optimal) => price_of_robustness(inst.lp.sense, nom, sol.objective),
        _ => None,
    };
    let out = SolveOutput {
        report: SolveReport::new(&sol, a.output.timings),
        nominal_status: nominal.status,
        nominal_objective,
        por_pct,
    };
    emit(&a.output, &out, || {
        let r = &out.report;
        let mut kv = KvBlock::default();
        kv.push("method", format!("{:?}", r.method).to_lowercase());
        kv.push("solver", solver.name());
        kv.push("status", r.status);
        kv.push("objective", opt(r.objective, 9));
        kv.push("nominal objective", opt(out.nominal_objective, 9));
        kv.push("PoR%", opt(out.por_pct, 4));
        kv.push("rounds", r.rounds);
        kv.push("cuts added", r.cuts_added);
        kv.push("lp iterations", r.lp_iterations);
        kv.push(
            "final lp",
            format!("{} vars x {} rows", r.lp_vars, r.lp_rows),
        );
        kv.push("time ms", format!("{:.3}", ms(sol.total_time)));
        kv.push("solve ms", format!("{:.3}", ms(sol.solve_time)));
        kv.push("separate ms", format!("{:.3}", ms(sol.separate_time)));
        if r.x.len() <= 20 {
            let xs: Vec<String> = r.x.iter().map(|v| Num(*v).to_string()).collect();
            kv.push("x", xs.join(" "));
        }
        kv.render()
    })?;
    Ok(status_code(sol.status))
}

#[derive(Serialize)]
struct CertificateOut {
    row: usize,
    source_row: usize,
    negated: bool,
    lhs_nominal: f64,
    worst_case_deviation: f64,
    rhs: f64,
    violated: bool,
    violation_amount: f64,
    /// `(column, band)` of every uncertain coefficient.
    assignment: Vec<(usize, i32)>,
}

#[derive(Serialize)]
struct CutOut {
    row: usize,
    coefs: Vec<(usize, f64)>,
    rhs: f64,
}

#[derive(Serialize)]
struct SeparateOutput {
    robust: bool,
    rows: Vec<CertificateOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    cuts: Vec<CutOut>,
}

pub fn separate(a: SeparateArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let canon = canonical(&inst, &a.model)?;
    let x = read_point(&a.x, inst.lp.num_vars())?;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(Fail::input(format!("tolerance {} must be positive", a.tol)));
    }
    let certs = check_robust_with_tol(&canon.lp, &canon.uncertainty, &x, a.tol)?;
    audit_certificates(&canon, &x, &certs)?;
    let mut cuts = Vec::new();
    if a.cuts {
        for c in certs.iter().filter(|c| c.violated) {
            let cut = emit_cut(c, &canon.lp, &canon.uncertainty)?;
            if cut.lhs(&x) - cut.rhs <= 0.0 {
                return Err(Fail::internal(format!(
                    "cut of row {} does not cut off the point",
                    c.row
                )));
            }
            cuts.push(CutOut {
                row: c.row,
                coefs: cut.coefs,
                rhs: cut.rhs,
            });
        }
    }
    let out = SeparateOutput {
        robust: !certs.iter().any(|c| c.violated),
        rows: certs
            .iter()
            .map(|c| CertificateOut {
                row: c.row,
                source_row: canon.origin[c.row].row,
                negated: canon.origin[c.row].negated,
                lhs_nominal: c.lhs_nominal,
                worst_case_deviation: c.worst_case_deviation,
                rhs: c.rhs,
                violated: c.violated,
                violation_amount: c.violation_amount,
                assignment: c.assignment.clone(),
            })
            .collect(),
        cuts,
    };
    emit(&a.output, &out, || {
        let rows: Vec<Vec<String>> = out
            .rows
            .iter()
            .map(|c| {
                vec![
                    c.row.to_string(),
                    format!("{}{}", c.source_row, if c.negated { "-" } else { "" }),
                    format!("{:.6}", c.lhs_nominal),
                    format!("{:.6}", c.worst_case_deviation),
                    format!("{:.6}", c.rhs),
                    if c.violated {
                        "yes".into()
                    } else {
                        "no".into()
                    },
                    format!("{:.6}", c.violation_amount),
                ]
            })
            .collect();
        let mut text = render_table(
            &["row", "from", "a'x", "dev", "b", "violated", "excess"],
            &rows,
        );
        text.push_str(&format!("robust = {}\n", out.robust));
        if !out.cuts.is_empty() {
            // cut rows numbered after the canonical rows, in instance-file syntax
            text.push_str("[cuts]\n");
            let m = canon.lp.num_rows();
            for (idx, cut) in out.cuts.iter().enumerate() {
                text.push_str(&format!(
                    "row {} <= {}   # from row {}\n",
                    m + idx,
                    Num(cut.rhs),
                    cut.row
                ));
                for &(j, v) in &cut.coefs {
                    text.push_str(&format!("{} {j} {}\n", m + idx, Num(v)));
                }
            }
        }
        text
    })?;
    Ok(OK)
}

#[derive(Serialize)]
struct GenerateSummary {
    users: usize,
    transmitters: usize,
    nonzeros: usize,
    uncertain: usize,
    radius: f64,
    regenerations: usize,
    seed: u64,
}

pub fn generate(a: GenerateArgs) -> CmdResult {
    let params = PapParams {
        num_tx: a.tx,
        num_users: a.users,
        area: a.area,
        density: a.density,
        seed: a.seed,
        coverage_fraction: a.coverage,
        ..Default::default()
    };
    let pap = generate_pap(&params)?;
    let lp = pap.lp();
    let u = if a.nominal_only {
        MultiBandUncertaintySet::new(nominal_only_profile(lp.num_vars()))
    } else {
        calibrated_uncertainty(
            &lp,
            &distribution(&a.dist)?,
            &calibration_spec(&a.calibration),
        )?
    };
    std::fs::write(&a.out, write_instance(&lp, &u))
        .map_err(|e| Fail::from(e).context(format!("writing {}", a.out.display())))?;
    let s = GenerateSummary {
        users: pap.num_users(),
        transmitters: pap.num_tx(),
        nonzeros: lp.rows.iter().map(Vec::len).sum(),
        uncertain: u.deviations.len(),
        radius: pap.radius,
        regenerations: pap.regenerations,
        seed: a.seed,
    };
    emit(&a.output, &s, || {
        let mut kv = KvBlock::default();
        kv.push("users", s.users);
        kv.push("transmitters", s.transmitters);
        kv.push("nonzeros", s.nonzeros);
        kv.push("uncertain", s.uncertain);
        kv.push("radius", format!("{:.4}", s.radius));
        kv.push("regenerations", s.regenerations);
        kv.push("written to", a.out.display());
        kv.render()
    })?;
    Ok(OK)
}

#[derive(Serialize)]
struct BandOut {
    band: i32,
    probability: f64,
    lower: usize,
    upper: usize,
    /// Breakpoint as a fraction of the nominal coefficient.
    breakpoint_frac: f64,
}

pub fn calibrate(a: CalibrateArgs) -> CmdResult {
    let dist = distribution(&a.dist)?;
    let cal = calibrate_bands(&dist, a.n, &calibration_spec(&a.calibration))?;
    let bands: Vec<BandOut> = cal
        .profile
        .band_ids
        .iter()
        .enumerate()
        .map(|(p, &k)| BandOut {
            band: k,
            probability: cal.probabilities[p],
            lower: cal.profile.lower[p],
            upper: cal.profile.upper[p],
            breakpoint_frac: cal.rule.breakpoints(1.0)[p],
        })
        .collect();
    emit(&a.output, &bands, || {
        let rows: Vec<Vec<String>> = bands
            .iter()
            .map(|b| {
                vec![
                    b.band.to_string(),
                    format!("{:+.3}", b.breakpoint_frac),
                    format!("{:.6}", b.probability),
                    b.lower.to_string(),
                    b.upper.to_string(),
                ]
            })
            .collect();
        render_table(&["band", "d/a", "P", "l", "u"], &rows)
    })?;
    Ok(OK)
}

#[derive(Serialize)]
struct StressOut {
    samples: usize,
    failures: usize,
    worst_excess: f64,
}

#[derive(Serialize)]
struct EvaluateOutput {
    #[serde(flatten)]
    protection: ProtectionReport,
    truncate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    in_set: Option<StressOut>,
}

pub fn evaluate(a: EvaluateArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let x = read_point(&a.x, inst.lp.num_vars())?;
    let dist = distribution(&a.dist)?;
    let protection = evaluate_protection(&inst.lp, &x, &dist, a.realizations, a.seed, a.truncate)?;
    let in_set = match a.in_set {
        Some(samples) => {
            let canon = canonical(&inst, &a.model)?;
            let r = in_set_stress(&canon.lp, &canon.uncertainty, &x, samples, a.seed)?;
            Some(StressOut {
                samples: r.samples,
                failures: r.failures,
                worst_excess: r.worst_excess,
            })
        }
        None => None,
    };
    let out = EvaluateOutput {
        protection,
        truncate: a.truncate,
        in_set,
    };
    emit(&a.output, &out, || {
        let p = &out.protection;
        let mut kv = KvBlock::default();
        kv.push("realizations", p.realizations);
        kv.push("feasible", p.feasible_count);
        kv.push("Protect%", format!("{:.2}", p.protect_pct));
        kv.push("seed", p.seed);
        kv.push("truncate", opt(out.truncate, 4));
        let worst = p
            .row_violation_freq
            .iter()
            .enumerate()
            .filter(|(_, f)| **f > 0.0)
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)));
        if let Some((i, f)) = worst {
            kv.push("most violated row", format!("{i} ({:.1}%)", 100.0 * f));
        }
        if let Some(s) = &out.in_set {
            kv.push("in-set samples", s.samples);
            kv.push("in-set failures", s.failures);
            kv.push("in-set worst excess", format!("{:e}", s.worst_excess));
        }
        kv.render()
    })?;
    Ok(OK)
}

#[derive(Serialize)]
struct CompareLine {
    instance: String,
    #[serde(flatten)]
    row: CompareRow,
}

pub fn compare(a: CompareArgs) -> CmdResult {
    let dist = distribution(&a.dist)?;
    let opts = CompareOptions {
        realizations: a.realizations,
        seed: a.seed,
        cut_limits: cut_limits(&a.solver)?,
        compact: compact_options(&a.model),
        truncate: a.truncate,
    };
    let mut solver = make_solver(&a.solver.solver)?;
    let mut lines = Vec::new();
    let mut dt = Vec::new();
    for path in &a.instances {
        let inst = read_instance(path)?;
        let mut row = compare_routes(&inst.lp, &inst.uncertainty, &dist, &mut *solver, &opts)
            .map_err(|e| Fail::from(e).context(path.display().to_string()))?;
        let gap = (row.mb_objective - row.mb_cuts_objective).abs();
        if gap > 1e-6 * (1.0 + row.mb_objective.abs()) {
            return Err(Fail::internal(format!(
                "{}: compact optimum {} and cutting-plane optimum {} differ",
                path.display(),
                row.mb_objective,
                row.mb_cuts_objective
            )));
        }
        dt.push(row.timings.as_ref().map_or(0.0, |t| t.dt_pct));
        if !a.output.timings {
            row.timings = None;
        }
        lines.push(CompareLine {
            instance: path.display().to_string(),
            row,
        });
    }
    emit(&a.output, &lines, || {
        let rows: Vec<Vec<String>> = lines
            .iter()
            .zip(&dt)
            .map(|(l, dt)| {
                let r = &l.row;
                vec![
                    l.instance.clone(),
                    r.rows.to_string(),
                    r.cols.to_string(),
                    r.added_rows.to_string(),
                    r.added_vars.to_string(),
                    opt(r.por_mb, 2),
                    opt(r.por_bs, 2),
                    format!("{dt:.1}"),
                    format!("{:.1}", r.protect_nominal),
                    format!("{:.1}", r.protect_mb),
                    format!("{:.1}", r.protect_bs),
                ]
            })
            .collect();
        render_table(
            &[
                "instance",
                "|I|",
                "|J|",
                "|I+|",
                "|J+|",
                "PoR%(MB)",
                "PoR%(BS)",
                "dt%",
                "Prot%(nom)",
                "Prot%(MB)",
                "Prot%(BS)",
            ],
            &rows,
        )
    })?;
    Ok(OK)
}

/// The exec-solver protocol, served by the built-in simplex.
pub fn lp_solve() -> CmdResult {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text)?;
    let inst = parse_instance(&text)?;
    let sol = simplex_solve(&inst.lp);
    let join = |v: &[f64]| {
        v.iter()
            .map(|x| Num(*x).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("status {}", sol.status);
    println!("objective {}", Num(sol.objective));
    println!("x {}", join(&sol.x));
    if let Some(d) = &sol.duals {
        println!("duals {}", join(d));
    }
    Ok(OK)
}
