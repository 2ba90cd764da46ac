//! Centralized solvers and the exhaustive oracle used to benchmark the
//! distributed scheduler.

use crate::assemble::{build_window_qp, extract_primal, BuildSpec, Layout, ObjectiveKind, ZSpec};
use crate::model::{
    simulate_step, ClosedLoopTrace, PhaseTimes, Scenario, TraceDiagnostics, Window,
};
use crate::mpc::{run_closed_loop, shrink_window};
use crate::Error;
use degrade_sched_qp::{solve_qp, QpSolution, Status};
use serde::Serialize;
use std::time::Instant;

const EXACT_BINARY_GUARD: usize = 24;
const MIQP_NODE_CAP: usize = 200_000;

/// One window (or whole-horizon) mixed-integer plan.
struct MiqpPlan {
    z: Vec<Vec<bool>>,
    q: Vec<Vec<f64>>,
    /// Profit-form objective.
    objective: f64,
}

/// Branch-and-bound over the maintenance binaries with convex QP
/// relaxations. Minimization form internally; the returned objective is the
/// profit of the best integer plan.
fn solve_miqp_window(scn: &Scenario, window: Window, x_start: &[f64]) -> Result<MiqpPlan, Error> {
    let n = scn.n_units();
    let len = window.len;
    let nz = n * len;

    let relax = |zlb: &[Vec<f64>], zub: &[Vec<f64>]| -> Result<(QpSolution, Layout), Error> {
        let spec = BuildSpec {
            units: &scn.units,
            window,
            demand: Some(&scn.demand),
            price: &scn.price,
            lambda: None,
            z: ZSpec::Variable { lb: zlb, ub: zub },
            x_start,
            big_m: scn.big_m,
            soften: false,
            objective: ObjectiveKind::Profit,
        };
        let (qp, layout) = build_window_qp(&spec);
        let sol = solve_qp(&qp, 1e-8)?;
        Ok((sol, layout))
    };

    let mut stack = vec![(vec![vec![0.0; len]; n], vec![vec![1.0; len]; n])];
    let mut incumbent: Option<(f64, Vec<Vec<bool>>)> = None;
    let mut nodes = 0usize;
    while let Some((zlb, zub)) = stack.pop() {
        nodes += 1;
        if nodes > MIQP_NODE_CAP {
            return Err(Error::Internal(
                "centralized branch-and-bound node cap exceeded".to_string(),
            ));
        }
        let (sol, layout) = relax(&zlb, &zub)?;
        match sol.status {
            Status::Optimal => {}
            Status::Infeasible => continue,
            other => {
                return Err(Error::Internal(format!(
                    "centralized relaxation status {other:?}"
                )))
            }
        }
        if let Some((best, _)) = &incumbent {
            if sol.objective >= *best - 1e-9 * (1.0 + best.abs()) {
                continue;
            }
        }
        // most fractional unpinned maintenance entry; pinned entries follow
        // their node bounds regardless of solver drift
        let mut branch = None;
        let mut worst = 1e-9;
        for un in 0..n {
            for i in 0..len {
                if zlb[un][i] == zub[un][i] {
                    continue;
                }
                let v = sol.z[layout.z(un, i)];
                let frac = (v - v.round()).abs();
                if frac > worst {
                    worst = frac;
                    branch = Some((un, i));
                }
            }
        }
        match branch {
            None => {
                let z: Vec<Vec<bool>> = (0..n)
                    .map(|un| {
                        (0..len)
                            .map(|i| {
                                if zlb[un][i] == zub[un][i] {
                                    zlb[un][i] >= 0.5
                                } else {
                                    sol.z[layout.z(un, i)].round() >= 0.5
                                }
                            })
                            .collect()
                    })
                    .collect();
                // exact value at the fixed pattern
                if let Some(v) = fixed_z_value(scn, window, x_start, &z)? {
                    let better = match &incumbent {
                        Some((best, _)) => v < *best,
                        None => true,
                    };
                    if better {
                        incumbent = Some((v, z));
                    }
                }
            }
            Some((un, i)) => {
                let mut ub0 = zub.clone();
                ub0[un][i] = 0.0;
                let mut lb1 = zlb.clone();
                lb1[un][i] = 1.0;
                stack.push((lb1, zub.clone()));
                stack.push((zlb.clone(), ub0));
            }
        }
        let _ = nz;
    }
    let Some((_, z)) = incumbent else {
        return Err(Error::HardInfeasible {
            t: window.start,
            demand: f64::NAN,
            detail: ": no maintenance pattern admits a feasible plan".to_string(),
        });
    };
    plan_at_fixed_z(scn, window, x_start, &z)
}

/// Minimization-form value of the continuous problem at fixed maintenance,
/// or None when infeasible.
fn fixed_z_value(
    scn: &Scenario,
    window: Window,
    x_start: &[f64],
    z: &[Vec<bool>],
) -> Result<Option<f64>, Error> {
    let spec = BuildSpec {
        units: &scn.units,
        window,
        demand: Some(&scn.demand),
        price: &scn.price,
        lambda: None,
        z: ZSpec::Fixed(z),
        x_start,
        big_m: scn.big_m,
        soften: false,
        objective: ObjectiveKind::Profit,
    };
    let (qp, _) = build_window_qp(&spec);
    let sol = solve_qp(&qp, 1e-8)?;
    Ok(match sol.status {
        Status::Optimal => Some(sol.objective),
        _ => None,
    })
}

fn plan_at_fixed_z(
    scn: &Scenario,
    window: Window,
    x_start: &[f64],
    z: &[Vec<bool>],
) -> Result<MiqpPlan, Error> {
    let spec = BuildSpec {
        units: &scn.units,
        window,
        demand: Some(&scn.demand),
        price: &scn.price,
        lambda: None,
        z: ZSpec::Fixed(z),
        x_start,
        big_m: scn.big_m,
        soften: false,
        objective: ObjectiveKind::Profit,
    };
    let (qp, layout) = build_window_qp(&spec);
    let sol = solve_qp(&qp, 1e-8)?;
    if sol.status != Status::Optimal {
        return Err(Error::Internal(
            "incumbent maintenance pattern lost feasibility on re-solve".to_string(),
        ));
    }
    let n = scn.n_units();
    let mut q = Vec::with_capacity(n);
    let mut objective = 0.0;
    for un in 0..n {
        let primal = extract_primal(&layout, &sol.z, x_start[un], un);
        objective += crate::assemble::unit_profit(
            &scn.units[un],
            window,
            &scn.price,
            &primal.q,
            &primal.x,
        );
        q.push(primal.q);
    }
    Ok(MiqpPlan {
        z: z.to_vec(),
        q,
        objective,
    })
}

fn trace_from_plan(scn: &Scenario, plan: MiqpPlan, wall: f64) -> ClosedLoopTrace {
    let n = scn.n_units();
    let t_len = scn.t_len;
    let mut realized_x = vec![vec![0.0; t_len + 1]; n];
    let mut per_step = vec![0.0; t_len];
    for un in 0..n {
        realized_x[un][0] = scn.x0[un];
        let mut xv = scn.x0[un];
        for t in 0..t_len {
            let unit = &scn.units[un];
            let q = plan.q[un][t];
            per_step[t] += scn.price[t] * q - unit.a * q * q - unit.b * q - xv * xv;
            xv = simulate_step(unit, xv, q, plan.z[un][t]);
            realized_x[un][t + 1] = xv;
        }
    }
    let total_objective: f64 = per_step.iter().sum();
    debug_assert!(
        (total_objective - plan.objective).abs() <= 1e-6 * (1.0 + plan.objective.abs()),
        "plan objective drifted from the realized accounting"
    );
    ClosedLoopTrace {
        applied_z: plan.z,
        applied_q: plan.q,
        realized_x,
        per_step_objective: per_step,
        total_objective,
        benders_iterations: Vec::new(),
        runtime: PhaseTimes {
            total: wall,
            ..PhaseTimes::default()
        },
        warnings: Vec::new(),
        diagnostics: TraceDiagnostics {
            lb_monotone: true,
            ..TraceDiagnostics::default()
        },
        convergence: Vec::new(),
    }
}

/// Exact whole-horizon MIQP by branch-and-bound over every maintenance
/// binary. Guarded: N*T binaries must stay enumerable by the relaxation tree.
pub fn centralized_miqp(scn: &Scenario) -> Result<ClosedLoopTrace, Error> {
    let nz = scn.n_units() * scn.t_len;
    if nz > EXACT_BINARY_GUARD {
        return Err(Error::SizeGuard {
            method: "central".to_string(),
            detail: format!(
                "{nz} maintenance binaries exceed the exact-mode guard of {EXACT_BINARY_GUARD}; \
                 use the heuristic mode or the MPC baseline"
            ),
        });
    }
    let start = Instant::now();
    let window = Window {
        start: 0,
        len: scn.t_len,
    };
    let plan = solve_miqp_window(scn, window, &scn.x0)?;
    Ok(trace_from_plan(scn, plan, start.elapsed().as_secs_f64()))
}

/// Receding-horizon loop solving each window as one centralized MIQP.
pub fn centralized_mpc(scn: &Scenario) -> Result<ClosedLoopTrace, Error> {
    let per_window = scn.n_units() * (scn.horizon + 1);
    if per_window > EXACT_BINARY_GUARD {
        return Err(Error::SizeGuard {
            method: "central-mpc".to_string(),
            detail: format!(
                "{per_window} binaries per window exceed the exact-mode guard of {EXACT_BINARY_GUARD}"
            ),
        });
    }
    let start = Instant::now();
    let n = scn.n_units();
    let t_len = scn.t_len;
    let mut applied_z = vec![vec![false; t_len]; n];
    let mut applied_q = vec![vec![0.0; t_len]; n];
    let mut realized_x = vec![vec![0.0; t_len + 1]; n];
    let mut per_step = vec![0.0; t_len];
    let mut x_now = scn.x0.clone();
    for un in 0..n {
        realized_x[un][0] = scn.x0[un];
    }
    for tau in 0..t_len {
        let window = shrink_window(tau, scn.horizon, t_len);
        let plan = solve_miqp_window(scn, window, &x_now)?;
        for un in 0..n {
            let unit = &scn.units[un];
            let q = plan.q[un][0];
            let z = plan.z[un][0];
            applied_q[un][tau] = q;
            applied_z[un][tau] = z;
            per_step[tau] += scn.price[tau] * q - unit.a * q * q - unit.b * q
                - x_now[un] * x_now[un];
            x_now[un] = simulate_step(unit, x_now[un], q, z);
            realized_x[un][tau + 1] = x_now[un];
        }
    }
    let total_objective = per_step.iter().sum();
    Ok(ClosedLoopTrace {
        applied_z,
        applied_q,
        realized_x,
        per_step_objective: per_step,
        total_objective,
        benders_iterations: Vec::new(),
        runtime: PhaseTimes {
            total: start.elapsed().as_secs_f64(),
            ..PhaseTimes::default()
        },
        warnings: Vec::new(),
        diagnostics: TraceDiagnostics {
            lb_monotone: true,
            ..TraceDiagnostics::default()
        },
        convergence: Vec::new(),
    })
}

/// Heuristic whole-horizon mode for instances past the exact guard: round
/// the relaxed maintenance plan and re-solve production. Clearly non-exact.
pub fn centralized_heuristic(scn: &Scenario) -> Result<ClosedLoopTrace, Error> {
    let start = Instant::now();
    let window = Window {
        start: 0,
        len: scn.t_len,
    };
    let n = scn.n_units();
    let len = scn.t_len;
    let zlb = vec![vec![0.0; len]; n];
    let zub = vec![vec![1.0; len]; n];
    let spec = BuildSpec {
        units: &scn.units,
        window,
        demand: Some(&scn.demand),
        price: &scn.price,
        lambda: None,
        z: ZSpec::Variable { lb: &zlb, ub: &zub },
        x_start: &scn.x0,
        big_m: scn.big_m,
        soften: false,
        objective: ObjectiveKind::Profit,
    };
    let (qp, layout) = build_window_qp(&spec);
    let sol = solve_qp(&qp, 1e-8)?;
    if sol.status != Status::Optimal {
        return Err(Error::Internal(format!(
            "heuristic relaxation status {:?}",
            sol.status
        )));
    }
    let rounded: Vec<Vec<bool>> = (0..n)
        .map(|un| (0..len).map(|i| sol.z[layout.z(un, i)] >= 0.5).collect())
        .collect();
    let plan = match plan_at_fixed_z(scn, window, &scn.x0, &rounded) {
        Ok(p) => p,
        Err(_) => {
            // fall back to running everything
            let all_zero = vec![vec![false; len]; n];
            plan_at_fixed_z(scn, window, &scn.x0, &all_zero)?
        }
    };
    Ok(trace_from_plan(scn, plan, start.elapsed().as_secs_f64()))
}

/// Exhaustive search over every maintenance pattern and a production grid
/// (demand equality eliminates one unit). Independent of the QP machinery.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// Best plan found, None when no pattern admits a feasible plan.
    pub best: Option<OraclePlan>,
    /// Worst-case objective shortfall induced by the grid resolution.
    pub grid_tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct OraclePlan {
    pub objective: f64,
    pub z: Vec<Vec<bool>>,
    pub q: Vec<Vec<f64>>,
}

pub fn brute_force_oracle(scn: &Scenario, q_grid: usize) -> Result<OracleOutcome, Error> {
    let n = scn.n_units();
    let t_len = scn.t_len;
    if n > 2 || t_len > 4 || q_grid > 50 || q_grid < 2 {
        return Err(Error::SizeGuard {
            method: "brute_force_oracle".to_string(),
            detail: format!("N={n}, T={t_len}, grid={q_grid} outside N<=2, T<=4, 2<=grid<=50"),
        });
    }
    let mut best: Option<OraclePlan> = None;
    let patterns = 1u64 << (n * t_len);
    for mask in 0..patterns {
        let z: Vec<Vec<bool>> = (0..n)
            .map(|un| (0..t_len).map(|t| mask & (1 << (un * t_len + t)) != 0).collect())
            .collect();
        let mut q = vec![vec![0.0; t_len]; n];
        let mut found = f64::NEG_INFINITY;
        let mut best_q: Option<Vec<Vec<f64>>> = None;
        search_step(scn, &z, 0, &scn.x0.clone(), 0.0, &mut q, q_grid, &mut found, &mut best_q);
        if let Some(bq) = best_q {
            if best.as_ref().map_or(true, |b| found > b.objective) {
                best = Some(OraclePlan {
                    objective: found,
                    z: z.clone(),
                    q: bq,
                });
            }
        }
    }
    // curvature bound on the per-cell value loss of a grid with spacing
    // (q_max - q_min) / (grid - 1): quadratic terms lose at most a d^2 / 4;
    // the state chain adds 2 G B d per later step
    let mut grid_tolerance = 0.0;
    for unit in &scn.units {
        let d = (unit.q_max - unit.q_min) / (q_grid as f64 - 1.0);
        let direct = unit.a * d * d / 4.0;
        let chain = 2.0 * unit.threshold * unit.b_dyn * d * t_len as f64;
        grid_tolerance += (direct + chain) * t_len as f64;
    }
    Ok(OracleOutcome {
        best,
        grid_tolerance,
    })
}

#[allow(clippy::too_many_arguments)]
fn search_step(
    scn: &Scenario,
    z: &[Vec<bool>],
    t: usize,
    x_now: &[f64],
    value: f64,
    q: &mut [Vec<f64>],
    q_grid: usize,
    best: &mut f64,
    best_q: &mut Option<Vec<Vec<f64>>>,
) {
    let n = scn.n_units();
    if t == scn.t_len {
        if value > *best {
            *best = value;
            *best_q = Some(q.to_vec());
        }
        return;
    }
    let d = scn.demand[t];
    // feasible production interval per unit at this step, respecting the
    // threshold at the next state
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for un in 0..n {
        let unit = &scn.units[un];
        if z[un][t] {
            lo[un] = 0.0;
            hi[un] = 0.0;
        } else {
            let g_eff = crate::assemble::effective_threshold(unit);
            let head = (g_eff - unit.a_dyn * x_now[un]) / unit.b_dyn;
            lo[un] = unit.q_min;
            hi[un] = unit.q_max.min(head);
            if hi[un] < lo[un] - 1e-12 {
                return; // this pattern cannot run the unit legally
            }
        }
    }
    let step_value = |qs: &[f64]| -> f64 {
        let mut v = 0.0;
        for un in 0..n {
            let unit = &scn.units[un];
            v += scn.price[t] * qs[un] - unit.a * qs[un] * qs[un] - unit.b * qs[un]
                - x_now[un] * x_now[un];
        }
        v
    };
    let advance = |qs: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|un| simulate_step(&scn.units[un], x_now[un], qs[un], z[un][t]))
            .collect()
    };
    match n {
        1 => {
            let q0 = d;
            if q0 < lo[0] - 1e-9 || q0 > hi[0] + 1e-9 {
                return;
            }
            q[0][t] = q0;
            let x_next = advance(&[q0]);
            search_step(scn, z, t + 1, &x_next, value + step_value(&[q0]), q, q_grid, best, best_q);
        }
        2 => {
            // demand elimination: q2 = D - q1 within both units' intervals
            let lo1 = lo[0].max(d - hi[1]);
            let hi1 = hi[0].min(d - lo[1]);
            if hi1 < lo1 - 1e-9 {
                return;
            }
            let span = (hi1 - lo1).max(0.0);
            let points = if span == 0.0 { 1 } else { q_grid };
            for k in 0..points {
                let q1 = if points == 1 {
                    lo1.max(hi1.min((lo1 + hi1) / 2.0))
                } else {
                    lo1 + span * k as f64 / (points as f64 - 1.0)
                };
                let q2 = d - q1;
                q[0][t] = q1;
                q[1][t] = q2;
                let x_next = advance(&[q1, q2]);
                search_step(
                    scn,
                    z,
                    t + 1,
                    &x_next,
                    value + step_value(&[q1, q2]),
                    q,
                    q_grid,
                    best,
                    best_q,
                );
            }
        }
        _ => unreachable!("guarded above"),
    }
}

// ---------------------------------------------------------------------------
// comparison report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Distributed,
    CentralMpc,
    Central,
    CentralHeuristic,
}

impl Method {
    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "distributed" => Some(Method::Distributed),
            "central-mpc" => Some(Method::CentralMpc),
            "central" => Some(Method::Central),
            "central-heuristic" => Some(Method::CentralHeuristic),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Distributed => "distributed",
            Method::CentralMpc => "central-mpc",
            Method::Central => "central",
            Method::CentralHeuristic => "central-heuristic",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodRow {
    pub method: String,
    pub objective: f64,
    pub optimality_ratio: f64,
    pub wall_s: f64,
    pub exact: bool,
    pub phases: Option<PhaseTimes>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<MethodRow>,
    pub best_known: f64,
}

/// Run each method sequentially, recording objective and wall time; the
/// optimality ratio is relative to the best objective among the runs.
pub fn compare_report(scn: &Scenario, methods: &[Method]) -> Result<CompareReport, Error> {
    let mut rows = Vec::new();
    for m in methods {
        let start = Instant::now();
        let (trace, exact, phases) = match m {
            Method::Distributed => {
                let t = run_closed_loop(scn)?;
                let p = t.runtime.clone();
                (t, true, Some(p))
            }
            Method::CentralMpc => (centralized_mpc(scn)?, true, None),
            Method::Central => (centralized_miqp(scn)?, true, None),
            Method::CentralHeuristic => (centralized_heuristic(scn)?, false, None),
        };
        let wall = start.elapsed().as_secs_f64();
        rows.push(MethodRow {
            method: m.name().to_string(),
            objective: trace.total_objective,
            optimality_ratio: f64::NAN,
            wall_s: wall,
            exact,
            phases,
        });
    }
    let best_known = rows
        .iter()
        .map(|r| r.objective)
        .fold(f64::NEG_INFINITY, f64::max);
    for r in rows.iter_mut() {
        r.optimality_ratio = if best_known != 0.0 {
            r.objective / best_known
        } else {
            f64::NAN
        };
    }
    Ok(CompareReport { rows, best_known })
}

impl CompareReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<20} {:>16} {:>12} {:>12} {:>7}\n",
            "method", "objective", "ratio", "wall_s", "exact"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<20} {:>16.4} {:>12.4} {:>12.4} {:>7}\n",
                r.method, r.objective, r.optimality_ratio, r.wall_s, r.exact
            ));
        }
        out.push_str(&format!("best known objective: {:.4}\n", self.best_known));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::scenario_from_json;

    fn tiny_scenario(t_len: usize) -> Scenario {
        let demand: Vec<String> = (0..t_len).map(|t| format!("{}", 320.0 + 10.0 * t as f64)).collect();
        let price: Vec<String> = (0..t_len).map(|t| format!("{}", 20.0 + 0.3 * t as f64)).collect();
        let text = format!(
            r#"{{
            "units": [
                {{"a": 0.01, "b": 5.0, "q_min": 10.0, "q_max": 500.0, "A": 1.0, "B": 0.002, "G": 20.0}},
                {{"a": 0.012, "b": 6.0, "q_min": 10.0, "q_max": 400.0, "A": 1.0, "B": 0.002, "G": 25.0}}
            ],
            "T": {t_len}, "H": {h},
            "demand": [{d}],
            "price": [{p}]
        }}"#,
            t_len = t_len,
            h = t_len.max(2) - 1,
            d = demand.join(","),
            p = price.join(",")
        );
        scenario_from_json(&text, None).unwrap()
    }

    #[test]
    fn single_unit_follows_demand_no_maintenance() {
        // N=1: the demand equality pins production; with slack thresholds the
        // exact plan never maintains
        let text = r#"{
            "units": [{"a": 0.0095, "b": 8.0, "q_min": 100.0, "q_max": 1304.0, "A": 1.0, "B": 0.0001, "G": 10.0}],
            "T": 2, "H": 1,
            "demand": [631.0, 640.0],
            "price": [20.0, 20.0]
        }"#;
        let scn = scenario_from_json(text, None).unwrap();
        let trace = centralized_miqp(&scn).unwrap();
        assert!(trace.applied_z[0].iter().all(|z| !z));
        for t in 0..2 {
            assert!((trace.applied_q[0][t] - scn.demand[t]).abs() < 1e-6);
        }
        // hand value: sum_t P q - a q^2 - b q - x(t)^2
        let mut want = 0.0;
        let mut x = 0.0;
        for t in 0..2 {
            let q = scn.demand[t];
            want += 20.0 * q - 0.0095 * q * q - 8.0 * q - x * x;
            x += 0.0001 * q;
        }
        assert!((trace.total_objective - want).abs() < 1e-5);
    }

    #[test]
    fn miqp_matches_oracle_on_forced_maintenance() {
        // unit 1 must run at >= 120 when online and wears 0.48 per step
        // against G = 1.0: three straight days are impossible, so one
        // maintenance day (covered by unit 2 alone) is forced
        let text = r#"{
            "units": [
                {"a": 0.01, "b": 5.0, "q_min": 120.0, "q_max": 300.0, "A": 1.0, "B": 0.004, "G": 1.0},
                {"a": 0.012, "b": 6.0, "q_min": 0.0, "q_max": 150.0, "A": 1.0, "B": 0.0001, "G": 50.0}
            ],
            "T": 3, "H": 2,
            "demand": [140.0, 140.0, 140.0],
            "price": [20.0, 20.0, 20.0]
        }"#;
        let scn = scenario_from_json(text, None).unwrap();
        let exact = centralized_miqp(&scn).unwrap();
        let oracle = brute_force_oracle(&scn, 50).unwrap();
        let plan = oracle.best.expect("oracle finds a plan");
        assert!(
            exact.total_objective >= plan.objective - 1e-6 * (1.0 + plan.objective.abs()),
            "exact {} below oracle {}",
            exact.total_objective,
            plan.objective
        );
        let tol = oracle.grid_tolerance + 1e-3 * (1.0 + plan.objective.abs());
        assert!(
            exact.total_objective <= plan.objective + tol,
            "exact {} above oracle {} + tol {tol}",
            exact.total_objective,
            plan.objective
        );
        // maintenance did happen
        assert!(exact.applied_z[0].iter().any(|z| *z));
    }

    #[test]
    fn oracle_reports_infeasible_when_demand_exceeds_capacity() {
        let mut scn = tiny_scenario(2);
        scn.demand = vec![2000.0, 2000.0];
        let out = brute_force_oracle(&scn, 10).unwrap();
        assert!(out.best.is_none());
    }

    #[test]
    fn size_guards_reject_big_instances() {
        let scn = tiny_scenario(2);
        let mut big = scn.clone();
        big.t_len = 40;
        big.demand = vec![300.0; 40];
        big.price = vec![20.0; 40];
        assert!(matches!(
            centralized_miqp(&big),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            brute_force_oracle(&big, 10),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn single_window_mpc_equals_full_miqp() {
        let mut scn = tiny_scenario(2);
        scn.horizon = 1; // window covers the whole remaining period
        let mpc = centralized_mpc(&scn).unwrap();
        let full = centralized_miqp(&scn).unwrap();
        assert!(
            (mpc.total_objective - full.total_objective).abs()
                <= 1e-5 * (1.0 + full.total_objective.abs()),
            "mpc {} vs full {}",
            mpc.total_objective,
            full.total_objective
        );
    }

    #[test]
    fn compare_report_single_method() {
        let scn = tiny_scenario(2);
        let rep = compare_report(&scn, &[Method::Central]).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert!((rep.rows[0].optimality_ratio - 1.0).abs() < 1e-12);
        let text = rep.to_text();
        assert!(text.contains("central"));
    }
}
