//! Benders master problem: binary maintenance decisions and epigraph values
//! under the accumulated cuts, solved per time step by branch-and-bound with
//! LP relaxations, plus an exhaustive-enumeration oracle with the identical
//! contract.
//!
//! Every constraint of a per-step cut is local to its step, so the master
//! separates into `len` problems of `N` binaries. Window-aggregated
//! feasibility cuts couple the steps; when any are present the whole window
//! is solved as one joint binary program with the same machinery.

use crate::cuts::{Cut, CutKind, CutPool};
use crate::model::Window;
use crate::Error;
use degrade_sched_qp::{solve_lp, Mat, QpProblem, Status};

#[derive(Debug, Clone)]
pub struct MasterSolution {
    /// N x len maintenance proposal.
    pub z: Vec<Vec<bool>>,
    /// Epigraph value per window step.
    pub u: Vec<f64>,
    /// Sum of the epigraph values.
    pub objective: f64,
}

const INTEGRALITY_TOL: f64 = 1e-9;
const NODE_CAP: usize = 100_000;

fn tie_window(tie_tol: f64, v: f64) -> f64 {
    tie_tol.max(1e-6 * (1.0 + v.abs()))
}

fn feas_tol(c: &Cut) -> f64 {
    1e-9 * (1.0 + c.psi_sum.abs())
}

struct StepCtx<'a> {
    opt: Vec<&'a Cut>,
    feas: Vec<&'a Cut>,
    n: usize,
    u_floor: f64,
    tie_tol: f64,
}

impl StepCtx<'_> {
    fn feasible(&self, z: &[bool]) -> bool {
        self.feas.iter().all(|c| c.value_at(z) <= feas_tol(c))
    }

    /// Exact epigraph value at a binary point (None if cut-infeasible).
    fn value(&self, z: &[bool]) -> Option<f64> {
        if !self.feasible(z) {
            return None;
        }
        let mut u = self.u_floor;
        for c in &self.opt {
            u = u.max(c.value_at(z));
        }
        Some(u)
    }

    fn lp_relaxation(&self, zlb: &[f64], zub: &[f64]) -> QpProblem {
        let n = self.n;
        let dim = n + 1;
        let mut g = vec![0.0; dim];
        g[n] = 1.0;
        let rows = self.opt.len() + self.feas.len();
        let mut a_in = Mat::zeros(rows, dim);
        let mut b_in = vec![0.0; rows];
        for (r, c) in self.opt.iter().enumerate() {
            for j in 0..n {
                a_in[(r, j)] = c.phi[j];
            }
            a_in[(r, n)] = -1.0;
            b_in[r] = -c.psi_sum;
        }
        for (k, c) in self.feas.iter().enumerate() {
            let r = self.opt.len() + k;
            for j in 0..n {
                a_in[(r, j)] = c.phi[j];
            }
            b_in[r] = -c.psi_sum;
        }
        let mut lb = zlb.to_vec();
        let mut ub = zub.to_vec();
        lb.push(self.u_floor);
        ub.push(f64::INFINITY);
        QpProblem::lp(g, Mat::zeros(0, dim), vec![], a_in, b_in, lb, ub)
            .expect("master relaxation dimensions")
    }

    /// Depth-first branch-and-bound with best-bound pruning. Returns the
    /// optimal value and one optimal point, or None when every binary point
    /// is excluded by the feasibility cuts.
    fn branch_and_bound(&self, fix: &[Option<bool>]) -> Result<Option<(f64, Vec<bool>)>, Error> {
        let n = self.n;
        let mut base_lb = vec![0.0; n];
        let mut base_ub = vec![1.0; n];
        for (j, f) in fix.iter().enumerate() {
            if let Some(v) = f {
                base_lb[j] = if *v { 1.0 } else { 0.0 };
                base_ub[j] = base_lb[j];
            }
        }
        let mut stack = vec![(base_lb, base_ub)];
        let mut incumbent: Option<(f64, Vec<bool>)> = None;
        let mut nodes = 0usize;
        while let Some((zlb, zub)) = stack.pop() {
            nodes += 1;
            if nodes > NODE_CAP {
                return Err(Error::Internal(
                    "master branch-and-bound node cap exceeded".to_string(),
                ));
            }
            let lp = self.lp_relaxation(&zlb, &zub);
            let rel = solve_lp(&lp, 1e-8)?;
            match rel.status {
                Status::Optimal => {}
                Status::Infeasible => continue,
                other => {
                    return Err(Error::Internal(format!(
                        "master relaxation status {other:?}"
                    )))
                }
            }
            if let Some((best, _)) = &incumbent {
                if rel.objective >= *best - 1e-9 * (1.0 + best.abs()) {
                    continue;
                }
            }
            // most fractional unpinned entry, lowest index on ties
            let mut branch = None;
            let mut worst = INTEGRALITY_TOL;
            for j in 0..n {
                if zlb[j] == zub[j] {
                    continue;
                }
                let frac = (rel.z[j] - rel.z[j].round()).abs();
                if frac > worst {
                    worst = frac;
                    branch = Some(j);
                }
            }
            match branch {
                None => {
                    let z: Vec<bool> = (0..n)
                        .map(|j| {
                            if zlb[j] == zub[j] {
                                zlb[j] >= 0.5
                            } else {
                                rel.z[j].round() >= 0.5
                            }
                        })
                        .collect();
                    if let Some(v) = self.value(&z) {
                        let better = match &incumbent {
                            Some((best, _)) => v < *best,
                            None => true,
                        };
                        if better {
                            incumbent = Some((v, z));
                        }
                    }
                }
                Some(j) => {
                    let (mut lb1, mut ub0) = (zlb.clone(), zub.clone());
                    lb1[j] = 1.0;
                    ub0[j] = 0.0;
                    stack.push((lb1, zub.clone()));
                    stack.push((zlb.clone(), ub0));
                }
            }
        }
        Ok(incumbent)
    }

    /// Lexicographically smallest optimal point: fix entries front-to-back,
    /// preferring 0 whenever an optimal completion exists.
    fn lex_smallest_optimum(&self, v_star: f64) -> Result<Option<Vec<bool>>, Error> {
        let n = self.n;
        let mut fix: Vec<Option<bool>> = vec![None; n];
        for j in 0..n {
            fix[j] = Some(false);
            let ok = match self.branch_and_bound(&fix)? {
                Some((v, _)) => v <= v_star + tie_window(self.tie_tol, v_star),
                None => false,
            };
            if !ok {
                fix[j] = Some(true);
            }
        }
        let z: Vec<bool> = fix.into_iter().map(|f| f.unwrap()).collect();
        Ok(self.value(&z).map(|_| z))
    }

    fn solve(&self) -> Result<Option<(Vec<bool>, f64)>, Error> {
        if self.opt.is_empty() {
            // epigraph clamps to the floor for every point: pick the
            // lexicographically smallest cut-feasible pattern directly
            for k in 0..(1u64 << self.n) {
                let z = lex_point(k, self.n);
                if self.feasible(&z) {
                    return Ok(Some((z, self.u_floor)));
                }
            }
            return Ok(None);
        }
        let Some((v_star, _)) = self.branch_and_bound(&vec![None; self.n])? else {
            return Ok(None);
        };
        let z = self
            .lex_smallest_optimum(v_star)?
            .ok_or_else(|| Error::Internal("lex pass lost feasibility".to_string()))?;
        let u = self.value(&z).expect("lex point is feasible");
        Ok(Some((z, u)))
    }
}

/// k-th point in lexicographic order over (z_1, ..., z_n).
fn lex_point(k: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| k & (1 << (n - 1 - j)) != 0).collect()
}

fn split_cuts<'a>(pool: &'a CutPool, t: usize, n: usize) -> Result<(Vec<&'a Cut>, Vec<&'a Cut>), Error> {
    let mut opt = Vec::new();
    let mut feas = Vec::new();
    for c in pool.cuts_at(t) {
        if c.phi.len() != n {
            return Err(Error::Precondition(format!(
                "cut at t={t} has {} coefficients, expected {n}",
                c.phi.len()
            )));
        }
        match c.kind {
            CutKind::Optimality => opt.push(c),
            CutKind::Feasibility => feas.push(c),
        }
    }
    Ok((opt, feas))
}

/// Solve the master over one window. `u_floor` is the epigraph lower bound
/// used while a step has no optimality cut.
pub fn solve_master(
    pool: &CutPool,
    n_units: usize,
    window: Window,
    u_floor: f64,
    tie_tol: f64,
) -> Result<MasterSolution, Error> {
    if pool.window_cuts.is_empty() {
        let mut z = vec![vec![false; window.len]; n_units];
        let mut u = vec![0.0; window.len];
        for i in 0..window.len {
            let t = window.start + i;
            let (opt, feas) = split_cuts(pool, t, n_units)?;
            let ctx = StepCtx {
                opt,
                feas,
                n: n_units,
                u_floor,
                tie_tol,
            };
            match ctx.solve()? {
                Some((zt, ut)) => {
                    for un in 0..n_units {
                        z[un][i] = zt[un];
                    }
                    u[i] = ut;
                }
                None => return Err(Error::HardInfeasible {
                    t,
                    demand: f64::NAN,
                    detail: ": feasibility cuts exclude every maintenance pattern".to_string(),
                }),
            }
        }
        let objective = u.iter().sum();
        return Ok(MasterSolution { z, u, objective });
    }
    solve_master_joint(pool, n_units, window, u_floor, tie_tol)
}

/// Exhaustive oracle with the same contract as [`solve_master`].
pub fn enumerate_master(
    pool: &CutPool,
    n_units: usize,
    window: Window,
    u_floor: f64,
    tie_tol: f64,
) -> Result<MasterSolution, Error> {
    if n_units > 20 {
        return Err(Error::SizeGuard {
            method: "enumerate_master".to_string(),
            detail: format!("{n_units} units exceeds the 20-unit enumeration cap"),
        });
    }
    if !pool.window_cuts.is_empty() {
        return enumerate_master_joint(pool, n_units, window, u_floor, tie_tol);
    }
    let mut z = vec![vec![false; window.len]; n_units];
    let mut u = vec![0.0; window.len];
    for i in 0..window.len {
        let t = window.start + i;
        let (opt, feas) = split_cuts(pool, t, n_units)?;
        let ctx = StepCtx {
            opt,
            feas,
            n: n_units,
            u_floor,
            tie_tol,
        };
        let mut best: Option<f64> = None;
        for k in 0..(1u64 << n_units) {
            let zt = lex_point(k, n_units);
            if let Some(v) = ctx.value(&zt) {
                if best.map_or(true, |b| v < b) {
                    best = Some(v);
                }
            }
        }
        let Some(v_star) = best else {
            return Err(Error::HardInfeasible {
                t,
                demand: f64::NAN,
                detail: ": feasibility cuts exclude every maintenance pattern".to_string(),
            });
        };
        // lexicographically first point within the tie tolerance
        let mut chosen = None;
        for k in 0..(1u64 << n_units) {
            let zt = lex_point(k, n_units);
            if let Some(v) = ctx.value(&zt) {
                if v <= v_star + tie_window(tie_tol, v_star) {
                    chosen = Some((zt, v));
                    break;
                }
            }
        }
        let (zt, ut) = chosen.expect("an optimal point exists");
        for un in 0..n_units {
            z[un][i] = zt[un];
        }
        u[i] = ut;
    }
    let objective = u.iter().sum();
    Ok(MasterSolution { z, u, objective })
}

// --- joint solves used when window-aggregated feasibility cuts exist -------

struct JointCtx<'a> {
    pool: &'a CutPool,
    n: usize,
    window: Window,
    u_floor: f64,
    tie_tol: f64,
}

impl JointCtx<'_> {
    fn zvar(&self, i: usize, un: usize) -> usize {
        i * self.n + un
    }

    fn dim(&self) -> usize {
        self.n * self.window.len + self.window.len
    }

    fn col<'z>(&self, z: &'z [bool], i: usize) -> Vec<bool> {
        (0..self.n).map(|un| z[self.zvar(i, un)]).collect()
    }

    fn feasible(&self, z: &[bool]) -> bool {
        for c in &self.pool.step_cuts {
            if c.kind == CutKind::Feasibility {
                let i = c.t - self.window.start;
                if c.value_at(&self.col(z, i)) > feas_tol(c) {
                    return false;
                }
            }
        }
        for wc in &self.pool.window_cuts {
            let v: f64 = wc
                .rows
                .iter()
                .map(|c| c.value_at(&self.col(z, c.t - self.window.start)))
                .sum();
            let tol: f64 = 1e-9 * (1.0 + wc.rows.iter().map(|c| c.psi_sum.abs()).sum::<f64>());
            if v > tol {
                return false;
            }
        }
        true
    }

    fn value(&self, z: &[bool]) -> Option<(f64, Vec<f64>)> {
        if !self.feasible(z) {
            return None;
        }
        let mut u = vec![self.u_floor; self.window.len];
        for c in &self.pool.step_cuts {
            if c.kind == CutKind::Optimality {
                let i = c.t - self.window.start;
                u[i] = u[i].max(c.value_at(&self.col(z, i)));
            }
        }
        Some((u.iter().sum(), u))
    }

    fn lp_relaxation(&self, zlb: &[f64], zub: &[f64]) -> QpProblem {
        let nz = self.n * self.window.len;
        let dim = self.dim();
        let mut g = vec![0.0; dim];
        for i in 0..self.window.len {
            g[nz + i] = 1.0;
        }
        let nrows = self.pool.step_cuts.len() + self.pool.window_cuts.len();
        let mut a_in = Mat::zeros(nrows, dim);
        let mut b_in = vec![0.0; nrows];
        for (r, c) in self.pool.step_cuts.iter().enumerate() {
            let i = c.t - self.window.start;
            for un in 0..self.n {
                a_in[(r, self.zvar(i, un))] = c.phi[un];
            }
            if c.kind == CutKind::Optimality {
                a_in[(r, nz + i)] = -1.0;
            }
            b_in[r] = -c.psi_sum;
        }
        for (k, wc) in self.pool.window_cuts.iter().enumerate() {
            let r = self.pool.step_cuts.len() + k;
            let mut rhs = 0.0;
            for c in &wc.rows {
                let i = c.t - self.window.start;
                for un in 0..self.n {
                    a_in[(r, self.zvar(i, un))] += c.phi[un];
                }
                rhs -= c.psi_sum;
            }
            b_in[r] = rhs;
        }
        let mut lb = zlb.to_vec();
        let mut ub = zub.to_vec();
        lb.extend(std::iter::repeat(self.u_floor).take(self.window.len));
        ub.extend(std::iter::repeat(f64::INFINITY).take(self.window.len));
        QpProblem::lp(g, Mat::zeros(0, dim), vec![], a_in, b_in, lb, ub)
            .expect("joint master relaxation dimensions")
    }

    fn branch_and_bound(&self, fix: &[Option<bool>]) -> Result<Option<(f64, Vec<bool>)>, Error> {
        let nz = self.n * self.window.len;
        let mut base_lb = vec![0.0; nz];
        let mut base_ub = vec![1.0; nz];
        for (j, f) in fix.iter().enumerate() {
            if let Some(v) = f {
                base_lb[j] = if *v { 1.0 } else { 0.0 };
                base_ub[j] = base_lb[j];
            }
        }
        let mut stack = vec![(base_lb, base_ub)];
        let mut incumbent: Option<(f64, Vec<bool>)> = None;
        let mut nodes = 0usize;
        while let Some((zlb, zub)) = stack.pop() {
            nodes += 1;
            if nodes > NODE_CAP {
                return Err(Error::Internal(
                    "joint master branch-and-bound node cap exceeded".to_string(),
                ));
            }
            let lp = self.lp_relaxation(&zlb, &zub);
            let rel = solve_lp(&lp, 1e-8)?;
            match rel.status {
                Status::Optimal => {}
                Status::Infeasible => continue,
                other => {
                    return Err(Error::Internal(format!(
                        "joint master relaxation status {other:?} (kkt {:.3e})\n{}",
                        rel.kkt_residual,
                        degrade_sched_qp::dump_problem(&lp)
                    )))
                }
            }
            if let Some((best, _)) = &incumbent {
                if rel.objective >= *best - 1e-9 * (1.0 + best.abs()) {
                    continue;
                }
            }
            let mut branch = None;
            let mut worst = INTEGRALITY_TOL;
            for j in 0..nz {
                if zlb[j] == zub[j] {
                    continue;
                }
                let frac = (rel.z[j] - rel.z[j].round()).abs();
                if frac > worst {
                    worst = frac;
                    branch = Some(j);
                }
            }
            match branch {
                None => {
                    let z: Vec<bool> = (0..nz)
                        .map(|j| {
                            if zlb[j] == zub[j] {
                                zlb[j] >= 0.5
                            } else {
                                rel.z[j].round() >= 0.5
                            }
                        })
                        .collect();
                    if let Some((v, _)) = self.value(&z) {
                        let better = match &incumbent {
                            Some((best, _)) => v < *best,
                            None => true,
                        };
                        if better {
                            incumbent = Some((v, z));
                        }
                    }
                }
                Some(j) => {
                    let (mut lb1, mut ub0) = (zlb.clone(), zub.clone());
                    lb1[j] = 1.0;
                    ub0[j] = 0.0;
                    stack.push((lb1, zub.clone()));
                    stack.push((zlb.clone(), ub0));
                }
            }
        }
        Ok(incumbent)
    }

    fn into_solution(&self, zflat: &[bool]) -> MasterSolution {
        let (objective, u) = self.value(zflat).expect("solution must be feasible");
        let mut z = vec![vec![false; self.window.len]; self.n];
        for i in 0..self.window.len {
            for un in 0..self.n {
                z[un][i] = zflat[self.zvar(i, un)];
            }
        }
        MasterSolution { z, u, objective }
    }
}

fn solve_master_joint(
    pool: &CutPool,
    n_units: usize,
    window: Window,
    u_floor: f64,
    tie_tol: f64,
) -> Result<MasterSolution, Error> {
    let ctx = JointCtx {
        pool,
        n: n_units,
        window,
        u_floor,
        tie_tol,
    };
    let nz = n_units * window.len;
    let Some((v_star, _)) = ctx.branch_and_bound(&vec![None; nz])? else {
        return Err(Error::HardInfeasible {
            t: window.start,
            demand: f64::NAN,
            detail: ": feasibility cuts exclude every maintenance pattern in the window"
                .to_string(),
        });
    };
    // lexicographic pass in (step, unit) order
    let mut fix: Vec<Option<bool>> = vec![None; nz];
    for j in 0..nz {
        fix[j] = Some(false);
        let ok = match ctx.branch_and_bound(&fix)? {
            Some((v, _)) => v <= v_star + tie_window(ctx.tie_tol, v_star),
            None => false,
        };
        if !ok {
            fix[j] = Some(true);
        }
    }
    let zflat: Vec<bool> = fix.into_iter().map(|f| f.unwrap()).collect();
    Ok(ctx.into_solution(&zflat))
}

fn enumerate_master_joint(
    pool: &CutPool,
    n_units: usize,
    window: Window,
    u_floor: f64,
    tie_tol: f64,
) -> Result<MasterSolution, Error> {
    let nz = n_units * window.len;
    if nz > 22 {
        return Err(Error::SizeGuard {
            method: "enumerate_master".to_string(),
            detail: format!("{nz} window binaries exceeds the joint enumeration cap"),
        });
    }
    let ctx = JointCtx {
        pool,
        n: n_units,
        window,
        u_floor,
        tie_tol,
    };
    let mut best: Option<f64> = None;
    for k in 0..(1u64 << nz) {
        let z = lex_point(k, nz);
        if let Some((v, _)) = ctx.value(&z) {
            if best.map_or(true, |b| v < b) {
                best = Some(v);
            }
        }
    }
    let Some(v_star) = best else {
        return Err(Error::HardInfeasible {
            t: window.start,
            demand: f64::NAN,
            detail: ": feasibility cuts exclude every maintenance pattern in the window"
                .to_string(),
        });
    };
    for k in 0..(1u64 << nz) {
        let z = lex_point(k, nz);
        if let Some((v, _)) = ctx.value(&z) {
            if v <= v_star + tie_window(tie_tol, v_star) {
                return Ok(ctx.into_solution(&z));
            }
        }
    }
    unreachable!("an optimal point exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::WindowCut;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cut(kind: CutKind, t: usize, phi: Vec<f64>, psi_sum: f64) -> Cut {
        Cut {
            kind,
            t,
            phi,
            psi_sum,
        }
    }

    #[test]
    fn empty_pool_prefers_no_maintenance() {
        let pool = CutPool::new();
        let w = Window { start: 0, len: 3 };
        let s = solve_master(&pool, 4, w, -100.0, 0.0).unwrap();
        assert!(s.z.iter().all(|row| row.iter().all(|z| !z)));
        assert!(s.u.iter().all(|u| (*u + 100.0).abs() < 1e-12));
        let e = enumerate_master(&pool, 4, w, -100.0, 0.0).unwrap();
        assert_eq!(s.z, e.z);
    }

    #[test]
    fn single_cut_flips_profitable_unit() {
        let mut pool = CutPool::new();
        pool.add_step_cuts([cut(CutKind::Optimality, 0, vec![-10.0, 0.0, 0.0], 5.0)]);
        let w = Window { start: 0, len: 1 };
        let s = solve_master(&pool, 3, w, -1000.0, 0.0).unwrap();
        assert!(s.z[0][0] && !s.z[1][0] && !s.z[2][0]);
        assert!((s.u[0] + 5.0).abs() < 1e-9);
        let e = enumerate_master(&pool, 3, w, -1000.0, 0.0).unwrap();
        assert_eq!(s.z, e.z);
        assert!((s.objective - e.objective).abs() < 1e-9);
    }

    #[test]
    fn feasibility_cuts_exclude_full_maintenance() {
        let n = 3;
        let mut pool = CutPool::new();
        // sum z <= 2  ->  z1 + z2 + z3 - 2 <= 0
        pool.add_step_cuts([cut(CutKind::Feasibility, 0, vec![1.0; n], -2.0)]);
        let w = Window { start: 0, len: 1 };
        let s = solve_master(&pool, n, w, -10.0, 0.0).unwrap();
        let total: usize = (0..n).filter(|un| s.z[*un][0]).count();
        assert!(total <= 2);
    }

    #[test]
    fn all_points_excluded_is_master_infeasible() {
        let mut pool = CutPool::new();
        // z1 + z2 >= 1 and z1 + z2 <= 0 cannot both hold
        pool.add_step_cuts([
            cut(CutKind::Feasibility, 2, vec![-1.0, -1.0], 1.0),
            cut(CutKind::Feasibility, 2, vec![1.0, 1.0], 0.0),
        ]);
        let w = Window { start: 2, len: 1 };
        let err = solve_master(&pool, 2, w, -10.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::HardInfeasible { t: 2, .. }));
    }

    #[test]
    fn ties_break_to_lexicographically_smallest() {
        let mut pool = CutPool::new();
        // a cut satisfied by every point with the same value: u >= 1
        pool.add_step_cuts([cut(CutKind::Optimality, 0, vec![0.0, 0.0], 1.0)]);
        let w = Window { start: 0, len: 1 };
        let s = solve_master(&pool, 2, w, -10.0, 0.0).unwrap();
        assert!(!s.z[0][0] && !s.z[1][0]);
        assert!((s.u[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn objective_monotone_as_cuts_accumulate() {
        let mut pool = CutPool::new();
        let w = Window { start: 0, len: 2 };
        let mut prev = f64::NEG_INFINITY;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..6 {
            for t in 0..2 {
                let phi: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
                let psi = rng.random_range(-3.0..3.0);
                pool.add_step_cuts([cut(CutKind::Optimality, t, phi, psi)]);
            }
            let s = solve_master(&pool, 3, w, -100.0, 0.0).unwrap();
            assert!(s.objective >= prev - 1e-9);
            prev = s.objective;
        }
    }

    #[test]
    fn window_cut_forces_joint_solve() {
        let mut pool = CutPool::new();
        // the aggregate requires at least one maintenance across two steps:
        // sum_t (1 - z1(t) - z2(t)) <= 0  ->  rows with phi = -1 each
        pool.add_window_cut(WindowCut {
            rows: vec![
                cut(CutKind::Feasibility, 0, vec![-1.0, -1.0], 0.5),
                cut(CutKind::Feasibility, 1, vec![-1.0, -1.0], 0.5),
            ],
        });
        let w = Window { start: 0, len: 2 };
        let s = solve_master(&pool, 2, w, -10.0, 0.0).unwrap();
        let total: usize = s
            .z
            .iter()
            .map(|row| row.iter().filter(|z| **z).count())
            .sum();
        assert!(total >= 1);
        let e = enumerate_master(&pool, 2, w, -10.0, 0.0).unwrap();
        assert_eq!(s.z, e.z);
    }

    #[test]
    fn branch_and_bound_matches_enumeration_on_random_pools() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let n = rng.random_range(2..7);
            let w = Window {
                start: rng.random_range(0..5),
                len: rng.random_range(1..3),
            };
            let mut pool = CutPool::new();
            for i in 0..w.len {
                let t = w.start + i;
                for _ in 0..rng.random_range(0..5) {
                    let phi: Vec<f64> = (0..n).map(|_| rng.random_range(-20.0..20.0)).collect();
                    let psi = rng.random_range(-10.0..10.0);
                    pool.add_step_cuts([cut(CutKind::Optimality, t, phi, psi)]);
                }
                for _ in 0..rng.random_range(0..3) {
                    let phi: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
                    // keep the all-zero point feasible so the instance stays solvable
                    let psi = -rng.random_range(0.0..5.0);
                    pool.add_step_cuts([cut(CutKind::Feasibility, t, phi, psi)]);
                }
            }
            let u_floor = -1000.0;
            let s = solve_master(&pool, n, w, u_floor, 0.0).unwrap();
            let e = enumerate_master(&pool, n, w, u_floor, 0.0).unwrap();
            assert!(
                (s.objective - e.objective).abs() <= 1e-6 * (1.0 + e.objective.abs()),
                "objective mismatch on trial {trial}: {} vs {}",
                s.objective,
                e.objective
            );
            assert_eq!(s.z, e.z, "schedule mismatch on trial {trial}");
        }
    }
}
