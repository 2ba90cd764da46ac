//! Dual decomposition of the fixed-maintenance sub-problem: agents optimize
//! independently against a demand price, the coordinator updates the price
//! by subgradient steps on the demand residual.

use crate::agent::{solve_agent, AgentWindowProblem, AgentWindowSolution};
use crate::assemble::{
    build_window_qp, extract_gamma, extract_primal, unit_profit, BuildSpec, ObjectiveKind, ZSpec,
};
use crate::model::{Scenario, Window, WindowSolution};
use crate::Error;
use degrade_sched_qp::{solve_qp, Status};
use log::{debug, warn};
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub enum StepRule {
    /// alpha_i = alpha0 / sqrt(i + 1)
    Diminishing,
    /// Polyak step towards a known optimal dual value (testing aid).
    Polyak { target: f64 },
}

#[derive(Debug, Clone)]
pub struct DualState {
    pub lambda: Vec<f64>,
    pub iteration: usize,
    /// Max-norm demand residual per iteration.
    pub residual_history: Vec<f64>,
    pub alpha0: f64,
    pub step_rule: StepRule,
    /// Dual objective at the current prices; consulted by the Polyak rule.
    pub last_dual_value: f64,
}

impl DualState {
    pub fn new(lambda: Vec<f64>, alpha0: f64, step_rule: StepRule) -> Self {
        DualState {
            lambda,
            iteration: 0,
            residual_history: Vec::new(),
            alpha0,
            step_rule,
            last_dual_value: f64::INFINITY,
        }
    }
}

/// One subgradient step: `lambda += alpha_i * (total production - demand)`,
/// recording the residual and advancing the iteration counter.
pub fn update_multipliers(state: &mut DualState, q_total: &[f64], demand: &[f64]) {
    debug_assert_eq!(state.lambda.len(), q_total.len());
    debug_assert_eq!(state.lambda.len(), demand.len());
    let mut residual = 0.0_f64;
    let mut norm_sq = 0.0_f64;
    for (qt, d) in q_total.iter().zip(demand) {
        residual = residual.max((qt - d).abs());
        norm_sq += (qt - d) * (qt - d);
    }
    let alpha = match &state.step_rule {
        StepRule::Diminishing => state.alpha0 / ((state.iteration as f64) + 1.0).sqrt(),
        StepRule::Polyak { target } => {
            if norm_sq > 0.0 && state.last_dual_value.is_finite() {
                ((state.last_dual_value - target) / norm_sq).max(1e-12)
            } else {
                state.alpha0
            }
        }
    };
    for ((l, qt), d) in state.lambda.iter_mut().zip(q_total).zip(demand) {
        *l += alpha * (qt - d);
    }
    state.iteration += 1;
    state.residual_history.push(residual);
}

#[derive(Debug, Clone, Default)]
pub struct DualOptions {
    pub init_lambda: Option<Vec<f64>>,
    pub polyak_target: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DualOutcome {
    /// Demand-balanced primal solution (applied by the MPC loop).
    pub solution: WindowSolution,
    /// The exact sub-problem optimum the cuts must be evaluated at
    /// (pre-repair primal and multipliers).
    pub cut_basis: WindowSolution,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    /// Per-iteration (residual, lambda max-norm) pairs.
    pub history: Vec<(f64, f64)>,
}

/// Iterate agent solves against prices until the demand residual is within
/// tolerance. Returns the assembled window solution; `converged = false`
/// reports a stall or iteration-cap exit with the best iterate seen.
pub fn run_dual_decomposition(
    scn: &Scenario,
    z_fixed: &[Vec<bool>],
    x_start: &[f64],
    window: Window,
    opts: &DualOptions,
) -> Result<DualOutcome, Error> {
    let n = scn.n_units();
    if z_fixed.len() != n || x_start.len() != n {
        return Err(Error::Precondition(
            "z_fixed and x_start must cover every unit".to_string(),
        ));
    }
    let len = window.len;
    let demand_win: Vec<f64> = window.steps().map(|t| scn.demand[t]).collect();
    let price_win: Vec<f64> = window.steps().map(|t| scn.price[t]).collect();
    let lambda0 = opts
        .init_lambda
        .clone()
        .unwrap_or_else(|| vec![0.0; len]);
    if lambda0.len() != len {
        return Err(Error::Precondition("init_lambda length mismatch".to_string()));
    }
    let rule = match opts.polyak_target {
        Some(target) => StepRule::Polyak { target },
        None => StepRule::Diminishing,
    };
    let mut state = DualState::new(lambda0, scn.alpha0, rule);
    let mut history: Vec<(f64, f64)> = Vec::new();
    let mut best: Option<(f64, Vec<AgentWindowSolution>, Vec<f64>)> = None;

    for iter in 0..scn.dual_max_iter {
        let lambda = state.lambda.clone();
        let agents: Vec<Result<AgentWindowSolution, Error>> = scn
            .units
            .par_iter()
            .enumerate()
            .map(|(un, unit)| {
                let p = AgentWindowProblem {
                    unit,
                    window,
                    z_fixed: z_fixed[un].clone(),
                    lambda: lambda.clone(),
                    price: price_win.clone(),
                    x_start: x_start[un],
                    big_m: scn.big_m,
                };
                solve_agent(&p)
            })
            .collect();
        let mut solved = Vec::with_capacity(n);
        for a in agents {
            solved.push(a?);
        }
        let q_total: Vec<f64> = (0..len)
            .map(|i| solved.iter().map(|a| a.q[i]).sum())
            .collect();
        let residual = q_total
            .iter()
            .zip(&demand_win)
            .fold(0.0_f64, |m, (q, d)| m.max((q - d).abs()));
        let lnorm = state.lambda.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        history.push((residual, lnorm));
        let lag = lagrangian_value(&state.lambda, &demand_win, &solved);
        if residual <= scn.dual_tol {
            let lambda = state.lambda.clone();
            let outcome =
                assemble(scn, z_fixed, x_start, window, solved, lambda, &demand_win, &price_win);
            return Ok(DualOutcome {
                converged: true,
                iterations: iter + 1,
                residual,
                history,
                ..outcome
            });
        }
        if best.as_ref().map_or(true, |(r, _, _)| residual < *r) {
            best = Some((residual, solved, state.lambda.clone()));
        }
        // stall detection: the trailing window stopped improving
        let h = &state.residual_history;
        if h.len() >= 60 {
            let recent = h[h.len() - 20..].iter().cloned().fold(f64::INFINITY, f64::min);
            let before = h[..h.len() - 20].iter().cloned().fold(f64::INFINITY, f64::min);
            if recent >= before * (1.0 - 1e-3) && residual > scn.dual_tol {
                debug!("dual decomposition stalled at residual {residual:.3e}");
                break;
            }
        }
        state.last_dual_value = lag;
        update_multipliers(&mut state, &q_total, &demand_win);
    }
    let (residual, agents, lambda) = best.expect("at least one iterate");
    warn!(
        "dual decomposition did not converge: residual {residual:.3e} > tol {:.3e}",
        scn.dual_tol
    );
    let iterations = history.len();
    let outcome = assemble(scn, z_fixed, x_start, window, agents, lambda, &demand_win, &price_win);
    Ok(DualOutcome {
        converged: false,
        iterations,
        residual,
        history,
        ..outcome
    })
}

fn lagrangian_value(lambda: &[f64], demand: &[f64], agents: &[AgentWindowSolution]) -> f64 {
    lambda
        .iter()
        .zip(demand)
        .map(|(l, d)| l * d)
        .sum::<f64>()
        + agents.iter().map(|a| a.objective).sum::<f64>()
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    scn: &Scenario,
    z_fixed: &[Vec<bool>],
    x_start: &[f64],
    window: Window,
    agents: Vec<AgentWindowSolution>,
    lambda: Vec<f64>,
    demand_win: &[f64],
    price_win: &[f64],
) -> DualOutcome {
    let n = scn.n_units();
    let len = window.len;
    let raw = WindowSolution {
        window,
        z: z_fixed.to_vec(),
        q: agents.iter().map(|a| a.q.clone()).collect(),
        y_aux: agents.iter().map(|a| a.y_aux.clone()).collect(),
        q_aux: agents.iter().map(|a| a.q_aux.clone()).collect(),
        x: agents.iter().map(|a| a.x.clone()).collect(),
        delta: None,
        lambda: lambda.clone(),
        gamma: agents.iter().map(|a| a.gamma.clone()).collect(),
        objective: lagrangian_value(&lambda, demand_win, &agents),
    };

    // Exact demand balance: spread the residual over units with both
    // capacity and threshold headroom, then re-simulate the state chain and
    // the binary-consistent auxiliaries.
    let mut q = raw.q.clone();
    let mut x = raw.x.clone();
    let mut x_now = x_start.to_vec();
    for i in 0..len {
        let total: f64 = (0..n).map(|un| q[un][i]).sum();
        let mut gap = demand_win[i] - total;
        if gap.abs() > 1e-12 {
            for (un, unit) in scn.units.iter().enumerate() {
                if z_fixed[un][i] || gap.abs() < 1e-12 {
                    continue;
                }
                let g_eff = crate::assemble::effective_threshold(unit);
                let head = ((g_eff - unit.a_dyn * x_now[un]) / unit.b_dyn).max(0.0);
                let hi = unit.q_max.min(head);
                let room = if gap > 0.0 {
                    (hi - q[un][i]).max(0.0)
                } else {
                    -(q[un][i] - unit.q_min).max(0.0)
                };
                let take = if gap > 0.0 {
                    gap.min(room)
                } else {
                    gap.max(room)
                };
                q[un][i] += take;
                gap -= take;
            }
        }
        for (un, unit) in scn.units.iter().enumerate() {
            let next = if z_fixed[un][i] {
                0.0
            } else {
                unit.a_dyn * x_now[un] + unit.b_dyn * q[un][i]
            };
            x_now[un] = next;
            x[un][i + 1] = next;
        }
    }
    let y_aux: Vec<Vec<f64>> = (0..n)
        .map(|un| {
            (0..len)
                .map(|i| if z_fixed[un][i] { x[un][i] } else { 0.0 })
                .collect()
        })
        .collect();
    let q_aux: Vec<Vec<f64>> = (0..n)
        .map(|un| {
            (0..len)
                .map(|i| if z_fixed[un][i] { q[un][i] } else { 0.0 })
                .collect()
        })
        .collect();
    let mut balanced = raw.clone();
    balanced.q = q;
    balanced.x = x;
    balanced.y_aux = y_aux;
    balanced.q_aux = q_aux;
    balanced.objective = lambda
        .iter()
        .zip(demand_win)
        .map(|(l, d)| l * d)
        .sum::<f64>()
        + (0..n)
            .map(|un| {
                let w0 = Window { start: 0, len };
                unit_profit(&scn.units[un], w0, price_win, &balanced.q[un], &balanced.x[un])
                    - lambda
                        .iter()
                        .zip(&balanced.q[un])
                        .map(|(l, qv)| l * qv)
                        .sum::<f64>()
            })
            .sum::<f64>();

    DualOutcome {
        solution: balanced,
        cut_basis: raw,
        converged: false,
        iterations: 0,
        residual: f64::NAN,
        history: Vec::new(),
    }
}

/// Oracle: solve the fixed-maintenance sub-problem as one QP with the demand
/// equality kept explicit. The demand-row multipliers are the prices the
/// dual decomposition converges to.
pub fn centralized_subproblem(
    scn: &Scenario,
    z_fixed: &[Vec<bool>],
    x_start: &[f64],
    window: Window,
) -> Result<WindowSolution, Error> {
    let spec = BuildSpec {
        units: &scn.units,
        window,
        demand: Some(&scn.demand),
        price: &scn.price,
        lambda: None,
        z: ZSpec::Fixed(z_fixed),
        x_start,
        big_m: scn.big_m,
        soften: false,
        objective: ObjectiveKind::Profit,
    };
    let (qp, layout) = build_window_qp(&spec);
    let sol = solve_qp(&qp, 1e-8)?;
    if sol.status != Status::Optimal {
        return Err(Error::Internal(format!(
            "centralized sub-problem status {:?} although the schedule passed the feasibility check",
            sol.status
        )));
    }
    let n = scn.n_units();
    let mut q = Vec::with_capacity(n);
    let mut y_aux = Vec::with_capacity(n);
    let mut q_aux = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut gamma = Vec::with_capacity(n);
    let mut objective = 0.0;
    for un in 0..n {
        let primal = extract_primal(&layout, &sol.z, x_start[un], un);
        objective += unit_profit(&scn.units[un], window, &scn.price, &primal.q, &primal.x);
        gamma.push(extract_gamma(&layout, &sol, un));
        q.push(primal.q);
        y_aux.push(primal.y);
        q_aux.push(primal.qq);
        x.push(primal.x);
    }
    let lambda: Vec<f64> = (0..window.len)
        .map(|i| sol.mu_eq[layout.demand_row(i)])
        .collect();
    Ok(WindowSolution {
        window,
        z: z_fixed.to_vec(),
        q,
        y_aux,
        q_aux,
        x,
        delta: None,
        lambda,
        gamma,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::scenario_from_json;

    fn single_unit_scenario(demand: f64, price: f64) -> Scenario {
        let text = format!(
            r#"{{
            "units": [{{"a": 0.0095, "b": 8.0, "q_min": 220.0, "q_max": 1304.0, "A": 1.0, "B": 0.0036, "G": 500.0}}],
            "T": 1, "H": 1,
            "demand": [{demand}],
            "price": [{price}]
        }}"#
        );
        scenario_from_json(&text, None).unwrap()
    }

    fn two_unit_scenario(b2: f64, demand: f64) -> Scenario {
        let text = format!(
            r#"{{
            "units": [
                {{"a": 0.01, "b": 5.0, "q_min": 0.0, "q_max": 1000.0, "A": 1.0, "B": 0.001, "G": 100.0}},
                {{"a": 0.01, "b": {b2}, "q_min": 0.0, "q_max": 1000.0, "A": 1.0, "B": 0.001, "G": 100.0}}
            ],
            "T": 2, "H": 2,
            "demand": [{demand}, {demand}],
            "price": [20.0, 20.0]
        }}"#
        );
        scenario_from_json(&text, None).unwrap()
    }

    #[test]
    fn update_multipliers_examples() {
        let mut s = DualState::new(vec![0.0], 0.1, StepRule::Diminishing);
        update_multipliers(&mut s, &[110.0], &[100.0]);
        assert!((s.lambda[0] - 1.0).abs() < 1e-12);
        assert_eq!(s.iteration, 1);
        assert_eq!(s.residual_history.len(), 1);

        // zero subgradient leaves prices alone
        let before = s.lambda[0];
        update_multipliers(&mut s, &[100.0], &[100.0]);
        assert_eq!(s.lambda[0], before);

        // schedule: alpha_3 = 0.2 / sqrt(4) = 0.1
        let mut s = DualState::new(vec![0.0], 0.2, StepRule::Diminishing);
        s.iteration = 3;
        update_multipliers(&mut s, &[101.0], &[100.0]);
        assert!((s.lambda[0] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn demand_at_unconstrained_optimum_needs_no_price() {
        // D = (P - b) / (2a): the profit-maximizing output
        let q_star = (20.0 - 8.0) / (2.0 * 0.0095);
        let scn = single_unit_scenario(q_star, 20.0);
        let z = vec![vec![false]];
        let out = run_dual_decomposition(
            &scn,
            &z,
            &[0.0],
            Window { start: 0, len: 1 },
            &DualOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.solution.lambda[0].abs() < 1e-9);
        assert!((out.solution.q[0][0] - q_star).abs() < scn.dual_tol + 1e-6);
    }

    #[test]
    fn identical_units_split_demand_evenly() {
        let scn = two_unit_scenario(5.0, 600.0);
        let z = vec![vec![false; 2]; 2];
        let out = run_dual_decomposition(
            &scn,
            &z,
            &[0.0, 0.0],
            Window { start: 0, len: 2 },
            &DualOptions::default(),
        )
        .unwrap();
        assert!(out.converged, "residual {}", out.residual);
        for i in 0..2 {
            assert!(
                (out.solution.q[0][i] - out.solution.q[1][i]).abs() < 1.0,
                "asymmetric split {} vs {}",
                out.solution.q[0][i],
                out.solution.q[1][i]
            );
            let total = out.solution.q[0][i] + out.solution.q[1][i];
            assert!((total - 600.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cheaper_unit_produces_more() {
        let scn = two_unit_scenario(9.0, 500.0);
        let z = vec![vec![false; 2]; 2];
        let out = run_dual_decomposition(
            &scn,
            &z,
            &[0.0, 0.0],
            Window { start: 0, len: 2 },
            &DualOptions::default(),
        )
        .unwrap();
        assert!(out.converged);
        // equal marginal cost: P - b1 - 2 a q1 = P - b2 - 2 a q2 = lambda,
        // q1 + q2 = D  =>  q1 - q2 = (b2 - b1) / (2a) = 200
        let diff = out.solution.q[0][0] - out.solution.q[1][0];
        assert!((diff - 200.0).abs() < 1.5, "diff = {diff}");
        // hand oracle: q1 = (D + 200)/2 = 350
        assert!((out.solution.q[0][0] - 350.0).abs() < 1.0);
    }

    #[test]
    fn lagrangian_matches_centralized_subproblem() {
        let scn = two_unit_scenario(7.0, 700.0);
        let z = vec![vec![false; 2]; 2];
        let w = Window { start: 0, len: 2 };
        let dual = run_dual_decomposition(&scn, &z, &[0.5, 0.2], w, &DualOptions::default()).unwrap();
        let central = centralized_subproblem(&scn, &z, &[0.5, 0.2], w).unwrap();
        assert!(dual.converged);
        let gap = (dual.solution.objective - central.objective).abs();
        assert!(
            gap <= 1e-3 * (1.0 + central.objective.abs()),
            "duality gap {gap}: {} vs {}",
            dual.solution.objective,
            central.objective
        );
        // the converged price agrees with the demand-row multiplier
        for i in 0..2 {
            assert!(
                (dual.solution.lambda[i] - central.lambda[i]).abs() < 0.2,
                "lambda mismatch at {i}: {} vs {}",
                dual.solution.lambda[i],
                central.lambda[i]
            );
        }
    }

    #[test]
    fn single_producer_covers_demand_when_other_is_down() {
        let scn = two_unit_scenario(6.0, 400.0);
        let z = vec![vec![true, false], vec![false; 2]];
        let w = Window { start: 0, len: 2 };
        let dual = run_dual_decomposition(&scn, &z, &[0.0, 0.0], w, &DualOptions::default()).unwrap();
        assert!(dual.converged);
        assert!(dual.solution.q[0][0].abs() < 1e-9);
        assert!((dual.solution.q[1][0] - 400.0).abs() < 1e-6);
        let central = centralized_subproblem(&scn, &z, &[0.0, 0.0], w).unwrap();
        assert!((central.q[1][0] - 400.0).abs() < 1e-6);
    }

    #[test]
    fn polyak_rule_converges_with_known_target() {
        let scn = two_unit_scenario(9.0, 500.0);
        let z = vec![vec![false; 2]; 2];
        let w = Window { start: 0, len: 2 };
        let central = centralized_subproblem(&scn, &z, &[0.0, 0.0], w).unwrap();
        let out = run_dual_decomposition(
            &scn,
            &z,
            &[0.0, 0.0],
            w,
            &DualOptions {
                polyak_target: Some(central.objective),
                ..DualOptions::default()
            },
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 50, "iterations = {}", out.iterations);
        let gap = (out.solution.objective - central.objective).abs();
        assert!(gap <= 1e-3 * (1.0 + central.objective.abs()));
    }

    #[test]
    fn balanced_solution_meets_demand_exactly() {
        let scn = two_unit_scenario(7.5, 650.0);
        let z = vec![vec![false; 2]; 2];
        let w = Window { start: 0, len: 2 };
        let out = run_dual_decomposition(&scn, &z, &[0.0, 0.0], w, &DualOptions::default()).unwrap();
        for i in 0..2 {
            let total = out.solution.q[0][i] + out.solution.q[1][i];
            assert!(
                (total - scn.demand[i]).abs() < 1e-9,
                "repair left residual {}",
                total - scn.demand[i]
            );
        }
    }

    #[test]
    fn price_stays_within_marginal_cost_range() {
        let scn = two_unit_scenario(9.0, 1200.0);
        let z = vec![vec![false; 2]; 2];
        let w = Window { start: 0, len: 2 };
        let out = run_dual_decomposition(&scn, &z, &[0.0, 0.0], w, &DualOptions::default()).unwrap();
        let bound = 20.0 + 9.0 + 2.0 * 0.01 * 1000.0 + 10.0;
        for (_, lnorm) in &out.history {
            assert!(*lnorm <= bound, "lambda escaped: {lnorm}");
        }
    }
}
