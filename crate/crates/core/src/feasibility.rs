//! Feasibility check of a proposed maintenance schedule: the slack LP over
//! the window, and feasibility-cut generation from its duals.

use crate::assemble::{build_window_qp, extract_gamma, extract_primal, BuildSpec, ObjectiveKind, ZSpec};
use crate::cuts::{Cut, CutKind, WindowCut};
use crate::model::{Scenario, Window};
use crate::Error;
use degrade_sched_qp::{solve_lp, Status};
use log::debug;

/// Slack-LP outcome: total slack, per-cell slacks, the eight dual families,
/// and the primal values the cut constants are evaluated at.
#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub window: Window,
    /// Total slack; zero (within tolerance) means the schedule is feasible.
    pub f_value: f64,
    /// N x len slack matrix.
    pub delta: Vec<Vec<f64>>,
    /// N x len x 8 dual families of the softened rows.
    pub gamma_hat: Vec<Vec<[f64; 8]>>,
    pub q: Vec<Vec<f64>>,
    pub y_aux: Vec<Vec<f64>>,
    pub q_aux: Vec<Vec<f64>>,
    /// N x (len+1) states.
    pub x: Vec<Vec<f64>>,
    /// True when the dual solution shows the slack requirement is coupled
    /// through the state dynamics (threshold pressure); per-step cuts are not
    /// valid in that regime and a window-aggregated cut must be used.
    pub time_coupled: bool,
    /// Certified feasible by the greedy allocator without solving the LP.
    pub fast_path: bool,
}

pub const F_TOL: f64 = 1e-6;

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.f_value <= F_TOL
    }
}

/// Check whether fixed maintenance decisions admit a feasible production
/// plan over the window, starting from `x_start`.
///
/// Demand stays a hard equality, so a step where every unit is under
/// maintenance while demand is positive has no meaningful relaxation; that
/// case is surfaced as [`Error::HardInfeasible`] rather than absorbed into a
/// slack value.
pub fn check_feasibility(
    scn: &Scenario,
    z_fixed: &[Vec<bool>],
    x_start: &[f64],
    window: Window,
) -> Result<FeasibilityResult, Error> {
    let n = scn.n_units();
    if z_fixed.len() != n || z_fixed.iter().any(|row| row.len() != window.len) {
        return Err(Error::Precondition(format!(
            "z_fixed must be {n} x {}",
            window.len
        )));
    }
    for i in 0..window.len {
        let t = window.start + i;
        let d = scn.demand[t];
        if d > scn.sum_qmax() + 1e-9 {
            return Err(Error::HardInfeasible {
                t,
                demand: d,
                detail: ": demand exceeds the whole fleet's capacity".to_string(),
            });
        }
        if d > 0.0 && (0..n).all(|un| z_fixed[un][i]) {
            return Err(Error::HardInfeasible {
                t,
                demand: d,
                detail: ": every unit is scheduled for maintenance".to_string(),
            });
        }
    }

    if let Some(result) = fast_feasible(scn, z_fixed, x_start, window) {
        return Ok(result);
    }

    let spec = BuildSpec {
        units: &scn.units,
        window,
        demand: Some(&scn.demand),
        price: &scn.price,
        lambda: None,
        z: ZSpec::Fixed(z_fixed),
        x_start,
        big_m: scn.big_m,
        soften: true,
        objective: ObjectiveKind::SlackSum,
    };
    let (qp, layout) = build_window_qp(&spec);
    let sol = solve_lp(&qp, 1e-8)?;
    if sol.status != Status::Optimal {
        return Err(Error::Internal(format!(
            "slack LP ended with status {:?} on window starting at t={}",
            sol.status, window.start
        )));
    }

    let mut delta = Vec::with_capacity(n);
    let mut gamma_hat = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    let mut y_aux = Vec::with_capacity(n);
    let mut q_aux = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut f_value = 0.0;
    for un in 0..n {
        let primal = extract_primal(&layout, &sol.z, x_start[un], un);
        let d = primal.delta.clone().expect("softened problem carries slacks");
        f_value += d.iter().map(|v| v.max(0.0)).sum::<f64>();
        delta.push(d);
        gamma_hat.push(extract_gamma(&layout, &sol, un));
        q.push(primal.q);
        y_aux.push(primal.y);
        q_aux.push(primal.qq);
        x.push(primal.x);
    }

    // Dynamics multipliers, threshold-bound multipliers, or residual x-row
    // multipliers signal that slack at one step trades against constraints at
    // another: the per-step cut split is invalid then.
    let dual_tol = 1e-7;
    let mut time_coupled = false;
    for un in 0..n {
        for i in 0..window.len {
            if sol.mu_eq[layout.dyn_row(un, i)].abs() > dual_tol
                || sol.mu_ub[layout.x(un, i + 1)].abs() > dual_tol
                || gamma_hat[un][i][1] > dual_tol
                || gamma_hat[un][i][2] > dual_tol
            {
                time_coupled = true;
            }
        }
    }
    debug!(
        "feasibility window t={}..{}: F={f_value:.6e}, coupled={time_coupled}",
        window.start,
        window.last()
    );
    Ok(FeasibilityResult {
        window,
        f_value,
        delta,
        gamma_hat,
        q,
        y_aux,
        q_aux,
        x,
        time_coupled,
        fast_path: false,
    })
}

/// Greedy forward allocation that certifies feasibility without the LP in
/// the common case. Inconclusive (None) means the LP decides.
fn fast_feasible(
    scn: &Scenario,
    z_fixed: &[Vec<bool>],
    x_start: &[f64],
    window: Window,
) -> Option<FeasibilityResult> {
    let n = scn.n_units();
    let mut x_now = x_start.to_vec();
    let mut q = vec![vec![0.0; window.len]; n];
    let mut x = vec![vec![0.0; window.len + 1]; n];
    for un in 0..n {
        x[un][0] = x_start[un];
    }
    for i in 0..window.len {
        let d = scn.demand[window.start + i];
        let mut lo_sum = 0.0;
        let mut bounds = Vec::with_capacity(n);
        for (un, unit) in scn.units.iter().enumerate() {
            if z_fixed[un][i] {
                bounds.push((0.0, 0.0));
                continue;
            }
            // room under the threshold limits this step's production
            let g_eff = crate::assemble::effective_threshold(unit);
            let head = (g_eff - unit.a_dyn * x_now[un]) / unit.b_dyn;
            if head < unit.q_min - 1e-12 {
                return None; // threshold squeeze: the LP must judge this
            }
            let hi = unit.q_max.min(head);
            bounds.push((unit.q_min, hi));
            lo_sum += unit.q_min;
        }
        let hi_sum: f64 = bounds.iter().map(|b| b.1).sum();
        if d < lo_sum - 1e-9 || d > hi_sum + 1e-9 {
            return None;
        }
        // distribute the remainder proportionally to available headroom
        let mut rem = (d - lo_sum).max(0.0);
        let span: f64 = bounds.iter().map(|b| b.1 - b.0).sum();
        for (un, (lo, hi)) in bounds.iter().enumerate() {
            let share = if span > 0.0 { (hi - lo) / span } else { 0.0 };
            q[un][i] = lo + share * rem.min(span);
        }
        // fix rounding drift on the largest producer
        let total: f64 = (0..n).map(|un| q[un][i]).collect::<Vec<_>>().iter().sum();
        let drift = d - total;
        if drift.abs() > 1e-9 {
            let mut best = None;
            for (un, (lo, hi)) in bounds.iter().enumerate() {
                let room = if drift > 0.0 {
                    hi - q[un][i]
                } else {
                    q[un][i] - lo
                };
                if room >= drift.abs() {
                    best = Some(un);
                    break;
                }
            }
            match best {
                Some(un) => q[un][i] += drift,
                None => return None,
            }
        }
        rem = 0.0;
        let _ = rem;
        for (un, unit) in scn.units.iter().enumerate() {
            let next = if z_fixed[un][i] {
                0.0
            } else {
                unit.a_dyn * x_now[un] + unit.b_dyn * q[un][i]
            };
            if next > crate::assemble::effective_threshold(unit) + 1e-9 {
                return None;
            }
            x_now[un] = next;
            x[un][i + 1] = next;
        }
    }
    let y_aux: Vec<Vec<f64>> = (0..n)
        .map(|un| {
            (0..window.len)
                .map(|i| if z_fixed[un][i] { x[un][i] } else { 0.0 })
                .collect()
        })
        .collect();
    let q_aux = vec![vec![0.0; window.len]; n];
    Some(FeasibilityResult {
        window,
        f_value: 0.0,
        delta: vec![vec![0.0; window.len]; n],
        gamma_hat: vec![vec![[0.0; 8]; window.len]; n],
        q,
        y_aux,
        q_aux,
        x,
        time_coupled: false,
        fast_path: true,
    })
}

/// What feasibility_cut produced: independent per-step cuts in the
/// time-separable regime, or one window-aggregated cut otherwise.
#[derive(Debug, Clone)]
pub enum FeasibilityCuts {
    PerStep(Vec<Cut>),
    Window(WindowCut),
}

/// Build feasibility cuts from the slack LP's duals and primal values.
/// Requires an infeasible result (`f_value > tol`); a zero cut would signal
/// degenerate multipliers and is rejected.
pub fn feasibility_cut(
    r: &FeasibilityResult,
    scn: &Scenario,
    window: Window,
) -> Result<FeasibilityCuts, Error> {
    if r.f_value <= F_TOL {
        return Err(Error::Precondition(
            "feasibility_cut called on a feasible result".to_string(),
        ));
    }
    let n = scn.n_units();
    let constants: Vec<Vec<crate::assemble::RowConstants>> = (0..n)
        .map(|un| {
            crate::assemble::switching_constants(
                &scn.units[un],
                r.x[un][0],
                window.len,
                scn.big_m,
            )
        })
        .collect();
    let mut rows = Vec::new();
    for i in 0..window.len {
        let mut phi = vec![0.0; n];
        let mut psi_sum = 0.0;
        let mut slack_mass = 0.0;
        for un in 0..n {
            let unit = &scn.units[un];
            let g = &r.gamma_hat[un][i];
            let c = constants[un][i];
            phi[un] = -g[0] * c.m_state + g[1] * c.m_state + g[2] * c.m_state
                - g[3] * c.m_q_switch
                + g[4] * c.m_prod
                + g[5] * c.m_prod
                + g[6] * unit.q_max
                - g[7] * unit.q_min;
            let (qv, yv, qqv, xv) = (r.q[un][i], r.y_aux[un][i], r.q_aux[un][i], r.x[un][i]);
            psi_sum += g[0] * yv
                + g[1] * (xv - yv - c.m_state)
                + g[2] * (yv - xv - c.m_state)
                + g[3] * qqv
                + g[4] * (qv - qqv - c.m_prod)
                + g[5] * (qqv - qv - c.m_prod)
                + g[6] * (qv - unit.q_max)
                + g[7] * (-qv + unit.q_min);
            slack_mass += r.delta[un][i].max(0.0);
        }
        rows.push((slack_mass, Cut {
            kind: CutKind::Feasibility,
            t: window.start + i,
            phi,
            psi_sum,
        }));
    }

    if r.time_coupled {
        let cut = WindowCut {
            rows: rows.into_iter().map(|(_, c)| c).collect(),
        };
        // the aggregate must exclude the schedule that generated it
        return Ok(FeasibilityCuts::Window(cut));
    }
    // per-step cuts only where slack actually accumulated; elsewhere the cut
    // would not be violated by its generator
    let cuts: Vec<Cut> = rows
        .into_iter()
        .filter(|(mass, _)| *mass > F_TOL)
        .map(|(_, c)| c)
        .collect();
    if cuts.is_empty() {
        return Err(Error::Internal(
            "slack LP reported infeasibility but produced no usable cut (degenerate duals)"
                .to_string(),
        ));
    }
    Ok(FeasibilityCuts::PerStep(cuts))
}
