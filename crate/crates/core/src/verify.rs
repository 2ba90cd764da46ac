//! Invariant checks applied to every closed-loop trace.

use crate::model::{simulate_step, ClosedLoopTrace, Scenario};

/// Re-derive everything checkable from the applied inputs and report each
/// violated invariant as one line. Empty means the trace is sound.
pub fn verify_trace(scn: &Scenario, trace: &ClosedLoopTrace) -> Vec<String> {
    let mut out = Vec::new();
    let n = scn.n_units();
    let t_len = scn.t_len;

    if trace.applied_z.len() != n || trace.applied_q.len() != n || trace.realized_x.len() != n {
        out.push("trace unit dimension mismatch".to_string());
        return out;
    }

    // re-simulation reproduces the realized states bit-for-bit
    for un in 0..n {
        let unit = &scn.units[un];
        let mut x = scn.x0[un];
        if trace.realized_x[un][0] != x {
            out.push(format!("unit {}: realized_x[0] differs from x0", unit.id));
        }
        for t in 0..t_len {
            x = simulate_step(unit, x, trace.applied_q[un][t], trace.applied_z[un][t]);
            if trace.realized_x[un][t + 1] != x {
                out.push(format!(
                    "unit {}: realized_x[{}] = {} differs from re-simulation {}",
                    unit.id,
                    t + 1,
                    trace.realized_x[un][t + 1],
                    x
                ));
                break;
            }
        }
    }

    // demand balance at every realized step
    for t in 0..t_len {
        let total: f64 = (0..n).map(|un| trace.applied_q[un][t]).sum();
        if (total - scn.demand[t]).abs() > scn.dual_tol {
            out.push(format!(
                "demand balance violated at t={t}: |{total} - {}| > {}",
                scn.demand[t], scn.dual_tol
            ));
        }
    }

    // threshold safety over all realized states
    for un in 0..n {
        let g = scn.units[un].threshold;
        for (t, x) in trace.realized_x[un].iter().enumerate() {
            if *x > g + 1e-9 {
                out.push(format!(
                    "unit {}: state {x} exceeds threshold {g} at t={t}",
                    scn.units[un].id
                ));
                break;
            }
        }
    }

    // maintenance stops production and resets the state
    for un in 0..n {
        for t in 0..t_len {
            if trace.applied_z[un][t] {
                if trace.applied_q[un][t].abs() > 1e-9 {
                    out.push(format!(
                        "unit {}: produced {} during maintenance at t={t}",
                        scn.units[un].id, trace.applied_q[un][t]
                    ));
                }
                if trace.realized_x[un][t + 1] != 0.0 {
                    out.push(format!(
                        "unit {}: state did not reset after maintenance at t={t}",
                        scn.units[un].id
                    ));
                }
            }
        }
    }

    // objective accounting
    for t in 0..t_len {
        let mut v = 0.0;
        for un in 0..n {
            let unit = &scn.units[un];
            let q = trace.applied_q[un][t];
            let x = trace.realized_x[un][t];
            v += scn.price[t] * q - unit.a * q * q - unit.b * q - x * x;
        }
        if (v - trace.per_step_objective[t]).abs() > 1e-6 * (1.0 + v.abs()) {
            out.push(format!(
                "per-step objective mismatch at t={t}: {} vs recomputed {v}",
                trace.per_step_objective[t]
            ));
            break;
        }
    }
    let total: f64 = trace.per_step_objective.iter().sum();
    if (total - trace.total_objective).abs() > 1e-6 * (1.0 + total.abs()) {
        out.push(format!(
            "total objective {} differs from per-step sum {total}",
            trace.total_objective
        ));
    }

    out
}
