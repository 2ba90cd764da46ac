//! Dense convex quadratic/linear programming with dual multiplier extraction.
//!
//! Problems take the form
//!
//! ```text
//!     minimize    1/2 z' H z + g' z
//!     subject to  Aeq z  = beq
//!                 Ain z <= bin
//!                 lb <= z <= ub        (entries may be infinite)
//! ```
//!
//! solved by a primal-dual interior-point method with a Mehrotra-style
//! predictor-corrector step and a final active-set polish. Every solve
//! reports the multipliers of all constraint groups; downstream cut
//! generation is built entirely from those duals.

mod ipm;
mod linalg;

pub use linalg::{dot, norm_inf, Mat};

/// Problem data. Construct through [`QpProblem::new`] so dimensions are
/// checked once, up front.
#[derive(Debug, Clone)]
pub struct QpProblem {
    pub hmat: Mat,
    pub g: Vec<f64>,
    pub a_eq: Mat,
    pub b_eq: Vec<f64>,
    pub a_in: Mat,
    pub b_in: Vec<f64>,
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QpError {
    DimensionMismatch(String),
    NotPsd { pivot: f64 },
}

impl std::fmt::Display for QpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QpError::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            QpError::NotPsd { pivot } => {
                write!(f, "quadratic cost is not positive semidefinite (pivot {pivot:.3e})")
            }
        }
    }
}

impl std::error::Error for QpError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub z: Vec<f64>,
    pub mu_eq: Vec<f64>,
    pub mu_in: Vec<f64>,
    /// Multiplier of `z_i <= ub_i`; zero where the bound is infinite.
    pub mu_ub: Vec<f64>,
    /// Multiplier of `z_i >= lb_i`; zero where the bound is infinite.
    pub mu_lb: Vec<f64>,
    pub status: Status,
    pub objective: f64,
    /// Max KKT violation of the returned point (absolute).
    pub kkt_residual: f64,
    /// For `Infeasible`: smallest total constraint violation achievable.
    pub infeasibility: f64,
    pub degenerate: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol_kkt: f64,
    pub max_iter: usize,
    pub tol_psd: f64,
    /// Perturb the starting point (seeded); exists so tests can confirm
    /// solution uniqueness from different starts.
    pub start_jitter: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_kkt: 1e-8,
            max_iter: 100,
            tol_psd: 1e-9,
            start_jitter: None,
        }
    }
}

impl QpProblem {
    pub fn new(
        hmat: Mat,
        g: Vec<f64>,
        a_eq: Mat,
        b_eq: Vec<f64>,
        a_in: Mat,
        b_in: Vec<f64>,
        lb: Vec<f64>,
        ub: Vec<f64>,
    ) -> Result<Self, QpError> {
        let d = g.len();
        if hmat.rows() != d || hmat.cols() != d {
            return Err(QpError::DimensionMismatch(format!(
                "hmat is {}x{}, expected {d}x{d}",
                hmat.rows(),
                hmat.cols()
            )));
        }
        if a_eq.rows() != b_eq.len() || (!a_eq.is_empty() && a_eq.cols() != d) {
            return Err(QpError::DimensionMismatch(format!(
                "a_eq {}x{} vs b_eq {} vs d {d}",
                a_eq.rows(),
                a_eq.cols(),
                b_eq.len()
            )));
        }
        if a_in.rows() != b_in.len() || (!a_in.is_empty() && a_in.cols() != d) {
            return Err(QpError::DimensionMismatch(format!(
                "a_in {}x{} vs b_in {} vs d {d}",
                a_in.rows(),
                a_in.cols(),
                b_in.len()
            )));
        }
        if lb.len() != d || ub.len() != d {
            return Err(QpError::DimensionMismatch(format!(
                "bounds {}/{} vs d {d}",
                lb.len(),
                ub.len()
            )));
        }
        for i in 0..d {
            for j in 0..i {
                if (hmat[(i, j)] - hmat[(j, i)]).abs() > 1e-9 * (1.0 + hmat.norm_inf()) {
                    return Err(QpError::DimensionMismatch(format!(
                        "hmat not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(QpProblem {
            hmat,
            g,
            a_eq,
            b_eq,
            a_in,
            b_in,
            lb,
            ub,
        })
    }

    /// LP constructor: zero quadratic term.
    pub fn lp(
        g: Vec<f64>,
        a_eq: Mat,
        b_eq: Vec<f64>,
        a_in: Mat,
        b_in: Vec<f64>,
        lb: Vec<f64>,
        ub: Vec<f64>,
    ) -> Result<Self, QpError> {
        let d = g.len();
        Self::new(Mat::zeros(d, d), g, a_eq, b_eq, a_in, b_in, lb, ub)
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn objective_at(&self, z: &[f64]) -> f64 {
        0.5 * dot(z, &self.hmat.matvec(z)) + dot(&self.g, z)
    }
}

/// Solve a convex QP at the default iteration budget.
pub fn solve_qp(p: &QpProblem, tol_kkt: f64) -> Result<QpSolution, QpError> {
    solve_qp_with(
        p,
        &SolveOptions {
            tol_kkt,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_qp_with(p: &QpProblem, opts: &SolveOptions) -> Result<QpSolution, QpError> {
    check_psd(&p.hmat, opts.tol_psd)?;
    Ok(ipm::solve(p, opts))
}

/// Solve an LP (`hmat` must be zero).
pub fn solve_lp(p: &QpProblem, tol: f64) -> Result<QpSolution, QpError> {
    if p.hmat.norm_inf() != 0.0 {
        return Err(QpError::DimensionMismatch(
            "solve_lp requires a zero quadratic term".to_string(),
        ));
    }
    solve_qp(p, tol)
}

/// Cheap PSD screen: shifted Cholesky. A symmetric matrix whose smallest
/// eigenvalue is >= -tol passes once shifted by a small multiple of its scale.
fn check_psd(h: &Mat, tol_psd: f64) -> Result<(), QpError> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let scale = h.norm_inf().max(1.0);
    let shift = tol_psd * scale + 1e-14 * scale;
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] += shift;
    }
    // plain Cholesky on the shifted matrix
    for j in 0..n {
        let mut s = a[(j, j)];
        for k in 0..j {
            let v = a[(j, k)];
            s -= v * v;
        }
        if s <= 0.0 {
            return Err(QpError::NotPsd { pivot: s - shift });
        }
        let ljj = s.sqrt();
        a[(j, j)] = ljj;
        for i in j + 1..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= a[(i, k)] * a[(j, k)];
            }
            a[(i, j)] = v / ljj;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct KktReport {
    pub stationarity: f64,
    pub primal: f64,
    pub dual: f64,
    pub complementarity: f64,
}

impl KktReport {
    pub fn max(&self) -> f64 {
        self.stationarity
            .max(self.primal)
            .max(self.dual)
            .max(self.complementarity)
    }
}

/// Recompute KKT residuals of a candidate solution from scratch.
pub fn kkt_residuals(p: &QpProblem, s: &QpSolution) -> Result<KktReport, QpError> {
    let d = p.dim();
    if s.z.len() != d
        || s.mu_eq.len() != p.b_eq.len()
        || s.mu_in.len() != p.b_in.len()
        || s.mu_lb.len() != d
        || s.mu_ub.len() != d
    {
        return Err(QpError::DimensionMismatch(
            "solution does not match problem".to_string(),
        ));
    }
    let mut grad = p.hmat.matvec(&s.z);
    for i in 0..d {
        grad[i] += p.g[i];
    }
    if !p.a_eq.is_empty() {
        let t = p.a_eq.t_matvec(&s.mu_eq);
        for i in 0..d {
            grad[i] += t[i];
        }
    }
    if !p.a_in.is_empty() {
        let t = p.a_in.t_matvec(&s.mu_in);
        for i in 0..d {
            grad[i] += t[i];
        }
    }
    for i in 0..d {
        grad[i] += s.mu_ub[i] - s.mu_lb[i];
    }
    let stationarity = norm_inf(&grad);

    let mut primal = 0.0_f64;
    if !p.a_eq.is_empty() {
        let r = p.a_eq.matvec(&s.z);
        for (ri, bi) in r.iter().zip(&p.b_eq) {
            primal = primal.max((ri - bi).abs());
        }
    }
    let mut complementarity = 0.0_f64;
    if !p.a_in.is_empty() {
        let r = p.a_in.matvec(&s.z);
        for (i, (ri, bi)) in r.iter().zip(&p.b_in).enumerate() {
            primal = primal.max(ri - bi);
            complementarity = complementarity.max((s.mu_in[i] * (ri - bi)).abs());
        }
    }
    for i in 0..d {
        if p.lb[i].is_finite() {
            primal = primal.max(p.lb[i] - s.z[i]);
            complementarity = complementarity.max((s.mu_lb[i] * (p.lb[i] - s.z[i])).abs());
        }
        if p.ub[i].is_finite() {
            primal = primal.max(s.z[i] - p.ub[i]);
            complementarity = complementarity.max((s.mu_ub[i] * (s.z[i] - p.ub[i])).abs());
        }
    }
    let mut dual = 0.0_f64;
    for v in s.mu_in.iter().chain(&s.mu_lb).chain(&s.mu_ub) {
        dual = dual.max(-v);
    }
    Ok(KktReport {
        stationarity,
        primal: primal.max(0.0),
        dual: dual.max(0.0),
        complementarity,
    })
}

/// Plain-text listing of a problem for offline inspection.
pub fn dump_problem(p: &QpProblem) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let d = p.dim();
    let _ = writeln!(out, "* QP dump: {} vars, {} eq, {} ineq", d, p.b_eq.len(), p.b_in.len());
    let _ = writeln!(out, "MINIMIZE");
    for i in 0..d {
        if p.g[i] != 0.0 {
            let _ = writeln!(out, "  g z{} {:+.12e}", i, p.g[i]);
        }
    }
    for i in 0..d {
        for j in 0..d {
            if p.hmat[(i, j)] != 0.0 {
                let _ = writeln!(out, "  H z{} z{} {:+.12e}", i, j, p.hmat[(i, j)]);
            }
        }
    }
    let _ = writeln!(out, "ROWS");
    for r in 0..p.a_eq.rows() {
        let terms: Vec<String> = p
            .a_eq
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| format!("{v:+.6e} z{j}"))
            .collect();
        let _ = writeln!(out, "  E{} : {} = {:.12e}", r, terms.join(" "), p.b_eq[r]);
    }
    for r in 0..p.a_in.rows() {
        let terms: Vec<String> = p
            .a_in
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| format!("{v:+.6e} z{j}"))
            .collect();
        let _ = writeln!(out, "  L{} : {} <= {:.12e}", r, terms.join(" "), p.b_in[r]);
    }
    let _ = writeln!(out, "BOUNDS");
    for i in 0..d {
        let _ = writeln!(out, "  {} <= z{} <= {}", p.lb[i], i, p.ub[i]);
    }
    out
}
