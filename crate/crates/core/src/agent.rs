//! Per-agent window sub-problem: fixed maintenance, price-adjusted profit
//! maximization, and positional extraction of the eight dual families that
//! optimality cuts are assembled from.

use crate::assemble::{build_window_qp, extract_gamma, extract_primal, BuildSpec, ObjectiveKind, ZSpec};
use crate::model::{UnitParams, Window};
use crate::Error;
use degrade_sched_qp::{solve_qp, QpProblem, Status};

/// One unit's window problem at fixed maintenance and prices.
#[derive(Debug, Clone)]
pub struct AgentWindowProblem<'a> {
    pub unit: &'a UnitParams,
    pub window: Window,
    /// Maintenance decisions over the window.
    pub z_fixed: Vec<bool>,
    /// Dual prices over the window.
    pub lambda: Vec<f64>,
    /// Market prices over the window (window-local slice).
    pub price: Vec<f64>,
    pub x_start: f64,
    pub big_m: f64,
}

#[derive(Debug, Clone)]
pub struct AgentWindowSolution {
    pub q: Vec<f64>,
    pub y_aux: Vec<f64>,
    pub q_aux: Vec<f64>,
    /// len+1 states, x[0] = window-start state.
    pub x: Vec<f64>,
    /// Eight multipliers per window step.
    pub gamma: Vec<[f64; 8]>,
    /// Window value of `sum_t (P q - a q^2 - b q - x^2 - lambda q)`.
    pub objective: f64,
}

impl AgentWindowProblem<'_> {
    fn check(&self) -> Result<(), Error> {
        let l = self.window.len;
        if self.z_fixed.len() != l || self.lambda.len() != l || self.price.len() != l {
            return Err(Error::Precondition(format!(
                "agent window vectors must all have length {l}"
            )));
        }
        if self.x_start < 0.0 {
            return Err(Error::Precondition("x_start must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Assemble the agent QP: minimize the negated price-adjusted profit subject
/// to the linearized dynamics and the eight big-M/capacity families, ordered
/// so that inequality row `8*(i) + f` carries gamma^{f+1} at window step i.
pub fn build_agent_qp(p: &AgentWindowProblem) -> Result<QpProblem, Error> {
    p.check()?;
    let z = vec![p.z_fixed.clone()];
    let spec = BuildSpec {
        units: std::slice::from_ref(p.unit),
        window: Window {
            start: 0,
            len: p.window.len,
        },
        demand: None,
        price: &p.price,
        lambda: Some(&p.lambda),
        z: ZSpec::Fixed(&z),
        x_start: &[p.x_start],
        big_m: p.big_m,
        soften: false,
        objective: ObjectiveKind::Profit,
    };
    let (qp, _) = build_window_qp(&spec);
    Ok(qp)
}

pub fn solve_agent(p: &AgentWindowProblem) -> Result<AgentWindowSolution, Error> {
    p.check()?;
    let z = vec![p.z_fixed.clone()];
    let spec = BuildSpec {
        units: std::slice::from_ref(p.unit),
        window: Window {
            start: 0,
            len: p.window.len,
        },
        demand: None,
        price: &p.price,
        lambda: Some(&p.lambda),
        z: ZSpec::Fixed(&z),
        x_start: &[p.x_start],
        big_m: p.big_m,
        soften: false,
        objective: ObjectiveKind::Profit,
    };
    let (qp, layout) = build_window_qp(&spec);
    let sol = solve_qp(&qp, 1e-8)?;
    match sol.status {
        Status::Optimal => {}
        Status::Infeasible => {
            return Err(Error::AgentInfeasible {
                unit: p.unit.id,
                window_start: p.window.start,
            })
        }
        other => {
            return Err(Error::Internal(format!(
                "agent solve for unit {} ended with status {other:?}",
                p.unit.id
            )))
        }
    }
    let mut primal = extract_primal(&layout, &sol.z, p.x_start, 0);
    let gamma = extract_gamma(&layout, &sol, 0);
    // maintained steps are exactly off; scrub solver-tolerance residue so the
    // binary structure holds bit-for-bit downstream
    for i in 0..p.window.len {
        if p.z_fixed[i] {
            primal.q[i] = 0.0;
            primal.qq[i] = 0.0;
        }
    }
    let mut objective = 0.0;
    for i in 0..p.window.len {
        let q = primal.q[i];
        objective += p.price[i] * q
            - p.unit.a * q * q
            - p.unit.b * q
            - primal.x[i] * primal.x[i]
            - p.lambda[i] * q;
    }
    Ok(AgentWindowSolution {
        q: primal.q,
        y_aux: primal.y,
        q_aux: primal.qq,
        x: primal.x,
        gamma,
        objective,
    })
}

/// Closed-form single-step optimum when no state or switching constraint is
/// active: the stationary point of the scalar concave profit, clamped to
/// capacity.
pub fn analytic_single_step(unit: &UnitParams, price: f64, lambda: f64) -> f64 {
    ((price - unit.b - lambda) / (2.0 * unit.a)).clamp(unit.q_min, unit.q_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::benchmark_scenario;

    fn problem<'a>(
        unit: &'a UnitParams,
        z: Vec<bool>,
        lambda: Vec<f64>,
        price: Vec<f64>,
        x_start: f64,
    ) -> AgentWindowProblem<'a> {
        let len = z.len();
        AgentWindowProblem {
            unit,
            window: Window { start: 0, len },
            z_fixed: z,
            lambda,
            price,
            x_start,
            big_m: 25_000.0,
        }
    }

    #[test]
    fn maintenance_forces_zero_production() {
        let scn = benchmark_scenario();
        let p = problem(&scn.units[0], vec![true], vec![0.0], vec![20.0], 1.0);
        let s = solve_agent(&p).unwrap();
        assert!(s.q[0].abs() < 1e-7);
        assert!((s.q_aux[0]).abs() < 1e-7);
        // maintenance resets the next state
        assert!(s.x[1].abs() < 1e-7);
        // Y must equal x during maintenance
        assert!((s.y_aux[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_step_interior_optimum_matches_analytic() {
        let scn = benchmark_scenario();
        let unit = &scn.units[3]; // a=0.0095, b=8.00
        let p = problem(unit, vec![false], vec![0.0], vec![20.0], 0.0);
        let s = solve_agent(&p).unwrap();
        let expect: f64 = (20.0 - 8.0) / (2.0 * 0.0095);
        assert!((expect - 631.5789473684211).abs() < 1e-9);
        assert!((s.q[0] - expect).abs() < 1e-5, "q = {}", s.q[0]);
        assert!(
            (s.objective - analytic_objective(unit, 20.0, 0.0, expect)).abs() < 1e-4
        );
    }

    fn analytic_objective(unit: &UnitParams, price: f64, x0: f64, q: f64) -> f64 {
        price * q - unit.a * q * q - unit.b * q - x0 * x0
    }

    #[test]
    fn price_equal_marginal_cost_floors_production() {
        let scn = benchmark_scenario();
        let unit = &scn.units[3];
        // lambda = P - b makes marginal profit nonpositive on the whole range
        let p = problem(unit, vec![false], vec![12.0], vec![20.0], 0.0);
        let s = solve_agent(&p).unwrap();
        assert!((s.q[0] - unit.q_min).abs() < 1e-6);
    }

    #[test]
    fn analytic_single_step_examples() {
        let scn = benchmark_scenario();
        let u6 = &scn.units[5]; // a=0.0075, b=10.45
        let q = analytic_single_step(u6, 20.0, 0.0);
        assert!((q - 636.6666666666666).abs() < 1e-9);
        assert_eq!(analytic_single_step(u6, u6.b, 0.0), u6.q_min);
        assert_eq!(analytic_single_step(u6, 20.0, 1e6), u6.q_min);
    }

    #[test]
    fn maintenance_mid_window_resets_state() {
        let scn = benchmark_scenario();
        let unit = &scn.units[0];
        let p = problem(
            unit,
            vec![false, true, false],
            vec![0.0; 3],
            vec![25.0; 3],
            0.5,
        );
        let s = solve_agent(&p).unwrap();
        // state right after the maintained step is zero
        assert!(s.x[2].abs() < 1e-6, "x = {:?}", s.x);
        // big-M consistency at binary maintenance
        for i in 0..3 {
            let zi = [false, true, false][i];
            let want_y = if zi { s.x[i] } else { 0.0 };
            let want_q = if zi { s.q[i] } else { 0.0 };
            assert!((s.y_aux[i] - want_y).abs() < 1e-6);
            assert!((s.q_aux[i] - want_q).abs() < 1e-6);
        }
    }

    #[test]
    fn threshold_binds_when_start_state_is_high() {
        let scn = benchmark_scenario();
        let mut unit = scn.units[0].clone();
        unit.threshold = 9.0;
        // x_start close to G: producing at the unconstrained optimum would
        // push the next state past the threshold, so the binding equality
        // q = (G - A x) / B caps the step
        let x_start = 7.0;
        let p = problem(&unit, vec![false], vec![0.0], vec![40.0], x_start);
        let s = solve_agent(&p).unwrap();
        let q_bound = (unit.threshold - unit.a_dyn * x_start) / unit.b_dyn;
        assert!(q_bound < unit.q_max);
        // the solver keeps a hair of threshold margin, worth ~0.19 here
        assert!((s.q[0] - q_bound).abs() < 0.25, "q = {}, bound = {q_bound}", s.q[0]);
        assert!(s.x[1] <= unit.threshold + 1e-7);
        // the state-threshold bound is active, so production is limited even
        // though the price is very attractive
        assert!(s.q[0] < analytic_single_step(&unit, 40.0, 0.0));
    }

    #[test]
    fn no_capacity_pressure_means_zero_capacity_duals() {
        let scn = benchmark_scenario();
        let unit = &scn.units[1];
        // generous threshold, interior production
        let p = problem(unit, vec![false, false], vec![0.0; 2], vec![20.0; 2], 0.0);
        let s = solve_agent(&p).unwrap();
        for g in &s.gamma {
            assert!(g[6].abs() < 1e-7, "gamma7 = {}", g[6]);
            assert!(g[7].abs() < 1e-7, "gamma8 = {}", g[7]);
        }
    }

    #[test]
    fn objective_concavity_under_feasible_perturbations() {
        let scn = benchmark_scenario();
        let unit = &scn.units[2];
        let p = problem(unit, vec![false; 3], vec![0.5; 3], vec![22.0; 3], 0.2);
        let s = solve_agent(&p).unwrap();
        let base = s.objective;
        // perturb production in feasible directions; profit cannot improve
        for dir in [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.5, 0.5, -0.5]] {
            let step = 1.0;
            let q2: Vec<f64> = s.q.iter().zip(dir).map(|(q, d)| q + step * d).collect();
            if q2
                .iter()
                .any(|q| *q < unit.q_min || *q > unit.q_max)
            {
                continue;
            }
            let mut x = p.x_start;
            let mut val = 0.0;
            let mut ok = true;
            for i in 0..3 {
                val += p.price[i] * q2[i]
                    - unit.a * q2[i] * q2[i]
                    - unit.b * q2[i]
                    - x * x
                    - p.lambda[i] * q2[i];
                x = unit.a_dyn * x + unit.b_dyn * q2[i];
                if x > unit.threshold {
                    ok = false;
                    break;
                }
            }
            if ok {
                assert!(val <= base + 1e-6, "perturbation improved: {val} > {base}");
            }
        }
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let scn = benchmark_scenario();
        let p = problem(&scn.units[0], vec![false, false], vec![0.0], vec![20.0], 0.0);
        assert!(matches!(
            build_agent_qp(&p),
            Err(Error::Precondition(_))
        ));
    }
}
