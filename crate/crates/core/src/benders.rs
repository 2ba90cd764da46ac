//! The per-window decomposition loop: master proposal, feasibility check,
//! dual-decomposed sub-problem, optimality/feasibility cuts, epsilon
//! termination on per-step bounds.

use crate::cuts::{Cut, CutKind, CutPool};
use crate::dual::{run_dual_decomposition, DualOptions};
use crate::feasibility::{check_feasibility, feasibility_cut, FeasibilityCuts};
use crate::master::solve_master;
use crate::model::{PhaseTimes, Scenario, Window, WindowSolution};
use crate::Error;
use log::{debug, warn};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct BendersIterRecord {
    pub iteration: usize,
    pub lb_sum: f64,
    pub ub_sum: f64,
    pub gap: f64,
    pub optimality_cuts: usize,
    pub feasibility_cuts: usize,
}

#[derive(Debug, Clone)]
pub struct BendersState {
    pub pool: CutPool,
    /// Per-step lower bounds from the latest master solve.
    pub lb: Vec<f64>,
    /// Per-step upper bounds from the latest sub-problem cut replay.
    pub ub: Vec<f64>,
    pub history: Vec<BendersIterRecord>,
}

impl BendersState {
    fn new(len: usize) -> Self {
        BendersState {
            pool: CutPool::new(),
            lb: vec![f64::NEG_INFINITY; len],
            ub: vec![f64::INFINITY; len],
            history: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BendersOutcome {
    pub solution: WindowSolution,
    pub state: BendersState,
    pub iterations: usize,
    pub converged: bool,
    /// Residual sum of positive per-step bound gaps at exit.
    pub gap: f64,
    pub warnings: Vec<String>,
    pub phases: PhaseTimes,
    /// Per-step lower bounds stayed monotone across iterations.
    pub lb_monotone: bool,
    pub window_cuts_emitted: usize,
    /// Worst big-M auxiliary deviation across accepted sub-problem solves.
    pub max_bigm_deviation: f64,
}

/// Inclusive epsilon test on every window step.
pub fn termination_check(state: &BendersState, epsilon: f64) -> bool {
    state
        .lb
        .iter()
        .zip(&state.ub)
        .all(|(lb, ub)| *ub <= *lb + epsilon)
}

/// Optimality cut rows, one per window step, evaluated at the sub-problem
/// optimum: `phi . Z(t) + psi_sum <= U(t)`.
pub fn optimality_cut(ws: &WindowSolution, scn: &Scenario, window: Window) -> Vec<Cut> {
    let n = scn.n_units();
    let constants: Vec<Vec<crate::assemble::RowConstants>> = (0..n)
        .map(|un| {
            crate::assemble::switching_constants(
                &scn.units[un],
                ws.x[un][0],
                window.len,
                scn.big_m,
            )
        })
        .collect();
    let mut cuts = Vec::with_capacity(window.len);
    for i in 0..window.len {
        let t = window.start + i;
        let mut phi = vec![0.0; n];
        let mut psi_sum = 0.0;
        for un in 0..n {
            let unit = &scn.units[un];
            let g = &ws.gamma[un][i];
            let c = constants[un][i];
            phi[un] = -g[0] * c.m_state + g[1] * c.m_state + g[2] * c.m_state
                - g[3] * c.m_q_switch
                + g[4] * c.m_prod
                + g[5] * c.m_prod
                + g[6] * unit.q_max
                - g[7] * unit.q_min;
            let (qv, yv, qqv, xv) = (ws.q[un][i], ws.y_aux[un][i], ws.q_aux[un][i], ws.x[un][i]);
            let profit_term = scn.price[t] * qv
                - unit.a * qv * qv
                - unit.b * qv
                - xv * xv
                - ws.lambda[i] * qv;
            psi_sum += -profit_term
                + g[0] * yv
                + g[1] * (xv - yv - c.m_state)
                + g[2] * (yv - xv - c.m_state)
                + g[3] * qqv
                + g[4] * (qv - qqv - c.m_prod)
                + g[5] * (qqv - qv - c.m_prod)
                + g[6] * (qv - unit.q_max)
                + g[7] * (-qv + unit.q_min);
        }
        // the price-relaxation terms cancel against lambda * D at demand
        // balance; removing them here keeps every cut (and the bounds built
        // from cuts) on the plain negated-profit scale, comparable across
        // iterations with different prices
        psi_sum -= ws.lambda[i] * scn.demand[t];
        cuts.push(Cut {
            kind: CutKind::Optimality,
            t,
            phi,
            psi_sum,
        });
    }
    cuts
}

/// Run the decomposition on one window from the given start states.
pub fn run_benders_window(
    scn: &Scenario,
    x_start: &[f64],
    window: Window,
) -> Result<BendersOutcome, Error> {
    let n = scn.n_units();
    if window.last() >= scn.t_len {
        return Err(Error::Precondition(format!(
            "window {}..{} exceeds the planning period",
            window.start,
            window.last()
        )));
    }
    for (un, unit) in scn.units.iter().enumerate() {
        if x_start[un] > unit.threshold + 1e-9 {
            return Err(Error::Precondition(format!(
                "start state {} of unit {} exceeds its threshold {}",
                x_start[un],
                unit.id,
                unit.threshold
            )));
        }
    }

    let mut state = BendersState::new(window.len);
    let mut phases = PhaseTimes::default();
    let mut warnings = Vec::new();
    let u_floor = scn.u_floor(window.len);
    // seed with the capacity cover: any workable schedule keeps enough
    // un-maintained capacity to meet demand, so the master never wastes a
    // round proposing a plainly uncoverable outage pattern
    let qmax: Vec<f64> = scn.units.iter().map(|u| u.q_max).collect();
    let fleet = scn.sum_qmax();
    for t in window.steps() {
        state.pool.add_step_cuts([Cut {
            kind: CutKind::Feasibility,
            t,
            phi: qmax.clone(),
            psi_sum: scn.demand[t] - fleet,
        }]);
    }
    let mut lambda_warm: Option<Vec<f64>> = None;
    let mut incumbent: Option<(f64, WindowSolution)> = None;
    let mut lb_monotone = true;
    let mut window_cuts_emitted = 0usize;
    let mut max_bigm_deviation = 0.0_f64;
    let total_start = Instant::now();

    let mut iterations = 0usize;
    while iterations < scn.benders_max_iter {
        iterations += 1;

        let t0 = Instant::now();
        // the master may return any epsilon-optimal pattern; preferring the
        // lexicographically smallest keeps it from chasing sub-epsilon noise
        let tie_tol = 0.4 * scn.epsilon;
        let master = solve_master(&state.pool, n, window, u_floor, tie_tol)?;
        phases.master += t0.elapsed().as_secs_f64();
        debug!(
            "window t={} iter {iterations}: master proposes {:?} (objective {:.3})",
            window.start,
            master
                .z
                .iter()
                .map(|row| row.iter().map(|z| *z as u8).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            master.objective
        );
        for (i, u) in master.u.iter().enumerate() {
            if *u < state.lb[i] - tie_tol - 1e-6 * (1.0 + state.lb[i].abs()) {
                lb_monotone = false;
            }
            state.lb[i] = state.lb[i].max(*u);
        }

        let t0 = Instant::now();
        let feas = match check_feasibility(scn, &master.z, x_start, window) {
            Ok(f) => f,
            Err(Error::HardInfeasible { t, demand, .. }) => {
                // No unit is available at step t. Any workable schedule obeys
                // sum_n (1 - Z_n) q_max_n >= D, a valid cover cut; if none
                // exists the master will report the window hard-infeasible.
                phases.feasibility += t0.elapsed().as_secs_f64();
                let i = t - window.start;
                let phi: Vec<f64> = scn.units.iter().map(|u| u.q_max).collect();
                let psi_sum = demand - scn.sum_qmax();
                debug!("capacity cover cut at t={t} (demand {demand})");
                state.pool.add_step_cuts([Cut {
                    kind: CutKind::Feasibility,
                    t,
                    phi,
                    psi_sum,
                }]);
                let _ = i;
                push_history(&mut state, iterations);
                continue;
            }
            Err(e) => return Err(e),
        };
        phases.feasibility += t0.elapsed().as_secs_f64();

        if !feas.is_feasible() {
            let t0 = Instant::now();
            let cuts = feasibility_cut(&feas, scn, window)?;
            match cuts {
                FeasibilityCuts::PerStep(cs) => {
                    let violated = cs.iter().any(|c| {
                        let col: Vec<bool> =
                            (0..n).map(|un| master.z[un][c.t - window.start]).collect();
                        c.value_at(&col) > 1e-7
                    });
                    if !violated {
                        return Err(Error::Internal(
                            "feasibility cut does not exclude its generator".to_string(),
                        ));
                    }
                    state.pool.add_step_cuts(cs);
                }
                FeasibilityCuts::Window(wc) => {
                    if wc.value_at(window.start, &master.z) <= 1e-7 {
                        return Err(Error::Internal(
                            "window feasibility cut does not exclude its generator".to_string(),
                        ));
                    }
                    window_cuts_emitted += 1;
                    state.pool.add_window_cut(wc);
                }
            }
            phases.cuts += t0.elapsed().as_secs_f64();
            push_history(&mut state, iterations);
            continue;
        }

        let t0 = Instant::now();
        let dual = run_dual_decomposition(
            scn,
            &master.z,
            x_start,
            window,
            &DualOptions {
                init_lambda: lambda_warm.clone(),
                polyak_target: None,
            },
        )?;
        phases.agents += t0.elapsed().as_secs_f64();
        if !dual.converged {
            if dual.residual <= 10.0 * scn.dual_tol {
                warnings.push(format!(
                    "window t={}: dual decomposition accepted at residual {:.3e} (tolerance {:.3e})",
                    window.start, dual.residual, scn.dual_tol
                ));
            } else {
                return Err(Error::DualNonConvergence {
                    residual: dual.residual,
                    iterations: dual.iterations,
                    tol: scn.dual_tol,
                });
            }
        }
        lambda_warm = Some(dual.solution.lambda.clone());
        for un in 0..n {
            for i in 0..window.len {
                let z = dual.solution.z[un][i];
                let xv = dual.solution.x[un][i];
                let qv = dual.solution.q[un][i];
                let want_y = if z { xv } else { 0.0 };
                let want_q = if z { qv } else { 0.0 };
                max_bigm_deviation = max_bigm_deviation
                    .max((dual.solution.y_aux[un][i] - want_y).abs())
                    .max((dual.solution.q_aux[un][i] - want_q).abs());
            }
        }

        let t0 = Instant::now();
        let cuts = optimality_cut(&dual.cut_basis, scn, window);
        for (i, c) in cuts.iter().enumerate() {
            let col: Vec<bool> = (0..n).map(|un| master.z[un][i]).collect();
            state.ub[i] = c.value_at(&col);
        }
        phases.cuts += t0.elapsed().as_secs_f64();

        let ub_sum: f64 = state.ub.iter().sum();
        if incumbent.as_ref().map_or(true, |(b, _)| ub_sum < *b) {
            incumbent = Some((ub_sum, dual.solution.clone()));
        }
        push_history(&mut state, iterations);

        if termination_check(&state, scn.epsilon) {
            debug!(
                "window t={} converged after {iterations} Benders iterations",
                window.start
            );
            phases.total = total_start.elapsed().as_secs_f64();
            let gap = gap_sum(&state);
            return Ok(BendersOutcome {
                solution: dual.solution,
                state,
                iterations,
                converged: true,
                gap,
                warnings,
                phases,
                lb_monotone,
                window_cuts_emitted,
                max_bigm_deviation,
            });
        }
        state.pool.add_step_cuts(cuts);
    }

    phases.total = total_start.elapsed().as_secs_f64();
    let gap = gap_sum(&state);
    match incumbent {
        Some((_, solution)) => {
            warn!(
                "window t={}: Benders iteration cap {} reached, gap {gap:.3e}",
                window.start, scn.benders_max_iter
            );
            warnings.push(format!(
                "window t={}: iteration cap {} reached with gap {gap:.3e}; applying the incumbent",
                window.start, scn.benders_max_iter
            ));
            Ok(BendersOutcome {
                solution,
                state,
                iterations,
                converged: false,
                gap,
                warnings,
                phases,
                lb_monotone,
                window_cuts_emitted,
                max_bigm_deviation,
            })
        }
        None => Err(Error::Internal(format!(
            "window t={}: no feasible schedule found within the iteration cap",
            window.start
        ))),
    }
}

fn gap_sum(state: &BendersState) -> f64 {
    state
        .lb
        .iter()
        .zip(&state.ub)
        .map(|(lb, ub)| (ub - lb).max(0.0))
        .sum()
}

fn push_history(state: &mut BendersState, iteration: usize) {
    let lb_sum = state.lb.iter().sum();
    let ub_sum = state.ub.iter().sum();
    state.history.push(BendersIterRecord {
        iteration,
        lb_sum,
        ub_sum,
        gap: gap_sum(state),
        optimality_cuts: state.pool.optimality_count(),
        feasibility_cuts: state.pool.feasibility_count(),
    });
}
