//! Solver contract tests: hand-derived optima, dual values, statuses, and
//! randomized strictly-convex problems checked against KKT conditions.

use degrade_sched_qp::{
    dump_problem, kkt_residuals, solve_lp, solve_qp, solve_qp_with, Mat, QpError, QpProblem,
    SolveOptions, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn empty(n: usize) -> (Mat, Vec<f64>) {
    (Mat::zeros(0, n), vec![])
}

fn free(n: usize) -> (Vec<f64>, Vec<f64>) {
    (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n])
}

/// min (z-5)^2 over 0 <= z <= 10: interior optimum, all duals zero.
#[test]
fn scalar_interior_optimum() {
    let (a_eq, b_eq) = empty(1);
    let (a_in, b_in) = empty(1);
    let p = QpProblem::new(
        Mat::from_rows(&[vec![2.0]]),
        vec![-10.0],
        a_eq,
        b_eq,
        a_in,
        b_in,
        vec![0.0],
        vec![10.0],
    )
    .unwrap();
    let s = solve_qp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.z[0] - 5.0).abs() < 1e-7);
    assert!(s.mu_lb[0].abs() < 1e-6 && s.mu_ub[0].abs() < 1e-6);
    assert!(s.kkt_residual <= 1e-8);
}

/// min (z-5)^2 s.t. z <= 3: bound active, inequality dual 2(5-3) = 4.
#[test]
fn scalar_constrained_dual() {
    let (a_eq, b_eq) = empty(1);
    let (lb, ub) = free(1);
    let p = QpProblem::new(
        Mat::from_rows(&[vec![2.0]]),
        vec![-10.0],
        a_eq,
        b_eq,
        Mat::from_rows(&[vec![1.0]]),
        vec![3.0],
        lb,
        ub,
    )
    .unwrap();
    let s = solve_qp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.z[0] - 3.0).abs() < 1e-8);
    assert!((s.mu_in[0] - 4.0).abs() < 1e-6);
    assert!(s.kkt_residual <= 1e-8);
}

/// min z1^2 + z2^2 s.t. z1 + z2 = 2 -> (1,1) by symmetry.
#[test]
fn symmetric_equality() {
    let (a_in, b_in) = empty(2);
    let (lb, ub) = free(2);
    let p = QpProblem::new(
        Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]),
        vec![0.0, 0.0],
        Mat::from_rows(&[vec![1.0, 1.0]]),
        vec![2.0],
        a_in,
        b_in,
        lb,
        ub,
    )
    .unwrap();
    let s = solve_qp(&p, 1e-8).unwrap();
    assert!((s.z[0] - 1.0).abs() < 1e-8 && (s.z[1] - 1.0).abs() < 1e-8);
    // stationarity: 2z + mu = 0 -> mu = -2
    assert!((s.mu_eq[0] + 2.0).abs() < 1e-6);
}

/// min delta s.t. delta >= 0 -> 0.
#[test]
fn lp_nonnegativity_binds() {
    let (a_eq, b_eq) = empty(1);
    let (a_in, b_in) = empty(1);
    let p = QpProblem::lp(vec![1.0], a_eq, b_eq, a_in, b_in, vec![0.0], vec![f64::INFINITY])
        .unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!(s.z[0].abs() < 1e-8);
    assert!((s.mu_lb[0] - 1.0).abs() < 1e-6);
}

/// min -z s.t. z <= 7, z >= 0 -> z = 7 with dual 1 on the cap.
#[test]
fn lp_vertex_dual() {
    let (a_eq, b_eq) = empty(1);
    let p = QpProblem::lp(
        vec![-1.0],
        a_eq,
        b_eq,
        Mat::from_rows(&[vec![1.0]]),
        vec![7.0],
        vec![0.0],
        vec![f64::INFINITY],
    )
    .unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.z[0] - 7.0).abs() < 1e-8);
    assert!((s.mu_in[0] - 1.0).abs() < 1e-6);
}

/// Contradictory bounds: infeasible status, not an Err.
#[test]
fn lp_contradictory_bounds() {
    let (a_eq, b_eq) = empty(1);
    let (a_in, b_in) = empty(1);
    let p = QpProblem::lp(vec![0.0], a_eq, b_eq, a_in, b_in, vec![1.0], vec![0.0]).unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Infeasible);
    assert!(s.infeasibility >= 1.0 - 1e-9);
}

/// Row-wise contradiction (z >= 2 and z <= 1 as general rows).
#[test]
fn lp_infeasible_rows() {
    let (a_eq, b_eq) = empty(1);
    let (lb, ub) = free(1);
    let p = QpProblem::lp(
        vec![0.0],
        a_eq,
        b_eq,
        Mat::from_rows(&[vec![-1.0], vec![1.0]]),
        vec![-2.0, 1.0],
        lb,
        ub,
    )
    .unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Infeasible);
    assert!(s.infeasibility > 0.5);
}

#[test]
fn lp_unbounded() {
    let (a_eq, b_eq) = empty(1);
    let (a_in, b_in) = empty(1);
    let p = QpProblem::lp(
        vec![-1.0],
        a_eq,
        b_eq,
        a_in,
        b_in,
        vec![0.0],
        vec![f64::INFINITY],
    )
    .unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Unbounded);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let r = QpProblem::new(
        Mat::zeros(2, 2),
        vec![0.0],
        Mat::zeros(0, 1),
        vec![],
        Mat::zeros(0, 1),
        vec![],
        vec![0.0],
        vec![1.0],
    );
    assert!(matches!(r, Err(QpError::DimensionMismatch(_))));
}

#[test]
fn non_psd_is_rejected() {
    let (a_eq, b_eq) = empty(1);
    let (a_in, b_in) = empty(1);
    let (lb, ub) = free(1);
    let p = QpProblem::new(
        Mat::from_rows(&[vec![-1.0]]),
        vec![0.0],
        a_eq,
        b_eq,
        a_in,
        b_in,
        lb,
        ub,
    )
    .unwrap();
    assert!(matches!(solve_qp(&p, 1e-8), Err(QpError::NotPsd { .. })));
}

/// kkt_residuals on a perturbed point: gradient of (z-5)^2 at 5.1 is 0.2.
#[test]
fn residual_report_of_perturbed_point() {
    let (a_eq, b_eq) = empty(1);
    let (a_in, b_in) = empty(1);
    let p = QpProblem::new(
        Mat::from_rows(&[vec![2.0]]),
        vec![-10.0],
        a_eq,
        b_eq,
        a_in,
        b_in,
        vec![0.0],
        vec![10.0],
    )
    .unwrap();
    let mut s = solve_qp(&p, 1e-8).unwrap();
    s.z[0] = 5.1;
    let rep = kkt_residuals(&p, &s).unwrap();
    assert!((rep.stationarity - 0.2).abs() < 1e-9);

    // infeasible point z = 11 against ub = 10: primal residual 1
    s.z[0] = 11.0;
    let rep = kkt_residuals(&p, &s).unwrap();
    assert!((rep.primal - 1.0).abs() < 1e-12);
}

/// Strong duality and two-start agreement on random strictly convex QPs.
#[test]
fn random_strictly_convex_qps() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..40 {
        let n = rng.random_range(2..6);
        // H = L L' + I
        let mut h = Mat::zeros(n, n);
        let l: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let mut v = 0.0;
                for k in 0..n {
                    v += l[i][k] * l[j][k];
                }
                h[(i, j)] = v + if i == j { 1.0 } else { 0.0 };
            }
        }
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let mi = rng.random_range(1..4);
        let mut a_in = Mat::zeros(mi, n);
        let mut b_in = vec![0.0; mi];
        for r in 0..mi {
            for j in 0..n {
                a_in[(r, j)] = rng.random_range(-1.0..1.0);
            }
            b_in[r] = rng.random_range(0.1..2.0);
        }
        let p = QpProblem::new(
            h,
            g,
            Mat::zeros(0, n),
            vec![],
            a_in,
            b_in,
            vec![-10.0; n],
            vec![10.0; n],
        )
        .unwrap();
        let s1 = solve_qp(&p, 1e-8).unwrap();
        assert_eq!(s1.status, Status::Optimal, "trial {trial}");
        assert!(s1.kkt_residual <= 1e-7, "trial {trial}: {}", s1.kkt_residual);

        let s2 = solve_qp_with(
            &p,
            &SolveOptions {
                start_jitter: Some(trial as u64 + 1),
                ..SolveOptions::default()
            },
        )
        .unwrap();
        for i in 0..n {
            assert!(
                (s1.z[i] - s2.z[i]).abs() <= 1e-7,
                "two starts disagree on trial {trial}"
            );
        }

        // strong duality: primal - dual gap at the returned multipliers
        let dual_obj = dual_objective(&p, &s1);
        assert!(
            (s1.objective - dual_obj).abs() <= 1e-6 * (1.0 + s1.objective.abs()),
            "duality gap on trial {trial}: {} vs {}",
            s1.objective,
            dual_obj
        );

        // stationarity agrees with finite differences along feasible directions
        finite_difference_check(&p, &s1, &mut rng);
    }
}

fn dual_objective(p: &QpProblem, s: &degrade_sched_qp::QpSolution) -> f64 {
    // L(z, mu) evaluated at the primal-dual pair; equals the dual function
    // value when stationarity holds.
    let mut v = p.objective_at(&s.z);
    if !p.a_eq.is_empty() {
        let r = p.a_eq.matvec(&s.z);
        for (i, ri) in r.iter().enumerate() {
            v += s.mu_eq[i] * (ri - p.b_eq[i]);
        }
    }
    if !p.a_in.is_empty() {
        let r = p.a_in.matvec(&s.z);
        for (i, ri) in r.iter().enumerate() {
            v += s.mu_in[i] * (ri - p.b_in[i]);
        }
    }
    for i in 0..p.dim() {
        if p.lb[i].is_finite() {
            v += s.mu_lb[i] * (p.lb[i] - s.z[i]);
        }
        if p.ub[i].is_finite() {
            v += s.mu_ub[i] * (s.z[i] - p.ub[i]);
        }
    }
    v
}

fn finite_difference_check(
    p: &QpProblem,
    s: &degrade_sched_qp::QpSolution,
    rng: &mut ChaCha8Rng,
) {
    let n = p.dim();
    let eps = 1e-6;
    for _ in 0..10 {
        let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let zp: Vec<f64> = s.z.iter().zip(&dir).map(|(z, d)| z + eps * d).collect();
        // only check directions that stay feasible
        let mut ok = true;
        if !p.a_in.is_empty() {
            let r = p.a_in.matvec(&zp);
            for (ri, bi) in r.iter().zip(&p.b_in) {
                if *ri > *bi {
                    ok = false;
                }
            }
        }
        for i in 0..n {
            if zp[i] < p.lb[i] || zp[i] > p.ub[i] {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let df = (p.objective_at(&zp) - p.objective_at(&s.z)) / eps;
        // objective cannot decrease to first order from an optimum
        assert!(df >= -1e-5 * (1.0 + df.abs()));
    }
}

/// Equality-only QP exercises the direct Newton path (no inequalities).
#[test]
fn equality_only_qp() {
    let (a_in, b_in) = empty(3);
    let (lb, ub) = free(3);
    let p = QpProblem::new(
        Mat::from_rows(&[
            vec![2.0, 0.0, 0.0],
            vec![0.0, 4.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ]),
        vec![-2.0, 0.0, 1.0],
        Mat::from_rows(&[vec![1.0, 1.0, 1.0]]),
        vec![3.0],
        a_in,
        b_in,
        lb,
        ub,
    )
    .unwrap();
    let s = solve_qp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Optimal);
    // KKT: 2z1 - 2 + y = 0; 4z2 + y = 0; 2z3 + 1 + y = 0; sum = 3
    // => z1 = (2 - y)/2, z2 = -y/4, z3 = -(1+y)/2; sum = 3 -> y = -2
    assert!((s.mu_eq[0] + 2.0).abs() < 1e-6);
    assert!((s.z[0] - 2.0).abs() < 1e-7);
    assert!((s.z[1] - 0.5).abs() < 1e-7);
    assert!((s.z[2] - 0.5).abs() < 1e-7);
}

/// Degenerate LP: duplicated active constraints should still produce valid
/// (if non-unique) multipliers and flag degeneracy or keep residuals small.
#[test]
fn degenerate_lp_duals_remain_valid() {
    let (a_eq, b_eq) = empty(2);
    let p = QpProblem::lp(
        vec![-1.0, -1.0],
        a_eq,
        b_eq,
        Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 0.0]]),
        vec![1.0, 1.0, 1.0],
        vec![0.0, 0.0],
        vec![f64::INFINITY, f64::INFINITY],
    )
    .unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective + 1.0).abs() < 1e-7);
    let rep = kkt_residuals(&p, &s).unwrap();
    assert!(rep.max() <= 1e-6);
}

#[test]
fn dump_lists_rows_and_bounds() {
    let (a_eq, b_eq) = empty(1);
    let p = QpProblem::lp(
        vec![-1.0],
        a_eq,
        b_eq,
        Mat::from_rows(&[vec![1.0]]),
        vec![7.0],
        vec![0.0],
        vec![f64::INFINITY],
    )
    .unwrap();
    let text = dump_problem(&p);
    assert!(text.contains("MINIMIZE"));
    assert!(text.contains("L0"));
    assert!(text.contains("BOUNDS"));
}
