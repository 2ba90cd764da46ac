//! Shared assembly of window optimization problems.
//!
//! Every continuous solve in the pipeline (agent sub-problem, feasibility
//! slack LP, centralized sub-problem, centralized MIQP relaxation) is the
//! same window structure with different knobs: whether maintenance is data or
//! a variable, whether big-M rows carry slack variables, and which objective
//! applies. One builder keeps row ordering identical everywhere, which is
//! what makes positional dual extraction safe.

use crate::model::{UnitParams, Window};
use degrade_sched_qp::{Mat, QpProblem, QpSolution};

/// Variable layout. Per unit block: q(0..L), Y(0..L), Q(0..L), x(1..=L),
/// then optionally delta(0..L) and z(0..L).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    pub n: usize,
    pub len: usize,
    pub has_delta: bool,
    pub has_z: bool,
    pub has_demand: bool,
}

impl Layout {
    fn stride(&self) -> usize {
        let mut s = 4 * self.len;
        if self.has_delta {
            s += self.len;
        }
        if self.has_z {
            s += self.len;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n * self.stride()
    }

    pub fn q(&self, n: usize, i: usize) -> usize {
        n * self.stride() + i
    }

    pub fn y(&self, n: usize, i: usize) -> usize {
        n * self.stride() + self.len + i
    }

    pub fn qq(&self, n: usize, i: usize) -> usize {
        n * self.stride() + 2 * self.len + i
    }

    /// State x(start+i) for i in 1..=len.
    pub fn x(&self, n: usize, i: usize) -> usize {
        debug_assert!((1..=self.len).contains(&i));
        n * self.stride() + 3 * self.len + (i - 1)
    }

    pub fn delta(&self, n: usize, i: usize) -> usize {
        debug_assert!(self.has_delta);
        n * self.stride() + 4 * self.len + i
    }

    pub fn z(&self, n: usize, i: usize) -> usize {
        debug_assert!(self.has_z);
        let off = if self.has_delta { 5 } else { 4 };
        n * self.stride() + off * self.len + i
    }

    /// Inequality row of constraint family `fam` (0..8 for gamma^1..gamma^8).
    pub fn gamma_row(&self, n: usize, i: usize, fam: usize) -> usize {
        (n * self.len + i) * 8 + fam
    }

    pub fn dyn_row(&self, n: usize, i: usize) -> usize {
        n * self.len + i
    }

    pub fn demand_row(&self, i: usize) -> usize {
        debug_assert!(self.has_demand);
        self.n * self.len + i
    }
}

pub(crate) enum ObjectiveKind {
    /// Negated profit (minimization of cost minus revenue).
    Profit,
    /// Sum of slack variables (feasibility check).
    SlackSum,
}

pub(crate) enum ZSpec<'a> {
    /// Maintenance fixed as data (N x len).
    Fixed(&'a [Vec<bool>]),
    /// Maintenance relaxed to boxed variables with per-entry bounds
    /// (branch-and-bound nodes tighten these).
    Variable {
        lb: &'a [Vec<f64>],
        ub: &'a [Vec<f64>],
    },
}

pub(crate) struct BuildSpec<'a> {
    pub units: &'a [UnitParams],
    pub window: Window,
    /// Full demand series; demand equality rows are added when present.
    pub demand: Option<&'a [f64]>,
    /// Full price series.
    pub price: &'a [f64],
    /// Window-local price adjustment (dual decomposition lambda).
    pub lambda: Option<&'a [f64]>,
    pub z: ZSpec<'a>,
    pub x_start: &'a [f64],
    pub big_m: f64,
    /// Relax the eight big-M/capacity rows with a shared per-(unit,step)
    /// slack.
    pub soften: bool,
    pub objective: ObjectiveKind,
}

/// Threshold used inside window problems: a hair below the physical limit.
/// The closed loop otherwise rides the exact boundary (production throttled
/// so the next state lands on G), leaving follow-up windows feasible or
/// infeasible only at solver-noise level.
pub(crate) fn effective_threshold(unit: &UnitParams) -> f64 {
    unit.threshold - 1e-4 * (1.0 + unit.threshold)
}

/// Switching-row constants for one unit across a window: the constant of
/// the `Y <= Z m` / `Y vs x` rows, of the `Q <= Z m` row, and of the
/// `Q vs q` rows, per window step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RowConstants {
    pub m_state: f64,
    pub m_q_switch: f64,
    pub m_prod: f64,
}

/// The state rows only have to dominate states actually reachable from
/// `x_start` (never more than `A^i x_start + sum A^k B q_max`, never more
/// than the threshold), and the `Q vs q` rows anything capacity admits.
/// `Q <= Z m` needs nothing at all: production is forced to zero during
/// maintenance, so `Q = Z q` vanishes at every binary point and a near-zero
/// constant is valid. These constants multiply the maintenance variable in
/// every cut, so a loose constant directly overstates the value of flipping
/// a decision and sends the master chasing phantoms; at the first step the
/// reachable bound is `x_start` itself and a cut prices a reset exactly.
/// The margins keep dominating rows strictly slack at reachable points so
/// no multiplier mass parks on them.
pub(crate) fn switching_constants(
    unit: &UnitParams,
    x_start: f64,
    len: usize,
    big_m: f64,
) -> Vec<RowConstants> {
    let m_prod = (1.05 * unit.q_max).min(big_m) + 1e-2;
    let mut out = Vec::with_capacity(len);
    let mut reach = x_start;
    for _ in 0..len {
        let m_state = (1.05 * reach.min(unit.threshold)).min(big_m) + 1e-2;
        out.push(RowConstants {
            m_state,
            m_q_switch: 1e-6,
            m_prod,
        });
        reach = unit.a_dyn * reach + unit.b_dyn * unit.q_max;
    }
    out
}

pub(crate) fn build_window_qp(spec: &BuildSpec) -> (QpProblem, Layout) {
    let n = spec.units.len();
    let len = spec.window.len;
    let layout = Layout {
        n,
        len,
        has_delta: spec.soften,
        has_z: matches!(spec.z, ZSpec::Variable { .. }),
        has_demand: spec.demand.is_some(),
    };
    let dim = layout.dim();

    let mut hmat = Mat::zeros(dim, dim);
    let mut g = vec![0.0; dim];
    match spec.objective {
        ObjectiveKind::Profit => {
            for (un, unit) in spec.units.iter().enumerate() {
                for i in 0..len {
                    let t = spec.window.start + i;
                    let qj = layout.q(un, i);
                    hmat[(qj, qj)] = 2.0 * unit.a;
                    g[qj] = unit.b - spec.price[t] + spec.lambda.map_or(0.0, |l| l[i]);
                    // state cost applies to in-window steps; x(start) is data
                    // and x(start+len) is the costless terminal state
                    if i >= 1 {
                        let xj = layout.x(un, i);
                        hmat[(xj, xj)] = 2.0;
                    }
                }
            }
        }
        ObjectiveKind::SlackSum => {
            for un in 0..n {
                for i in 0..len {
                    g[layout.delta(un, i)] = 1.0;
                }
            }
        }
    }

    // equalities: dynamics rows per unit, then demand rows
    let n_eq = n * len + if spec.demand.is_some() { len } else { 0 };
    let mut a_eq = Mat::zeros(n_eq, dim);
    let mut b_eq = vec![0.0; n_eq];
    for (un, unit) in spec.units.iter().enumerate() {
        for i in 0..len {
            let r = layout.dyn_row(un, i);
            a_eq[(r, layout.x(un, i + 1))] = 1.0;
            a_eq[(r, layout.q(un, i))] = -unit.b_dyn;
            a_eq[(r, layout.y(un, i))] = unit.a_dyn;
            a_eq[(r, layout.qq(un, i))] = unit.b_dyn;
            if i == 0 {
                b_eq[r] = unit.a_dyn * spec.x_start[un];
            } else {
                a_eq[(r, layout.x(un, i))] = -unit.a_dyn;
            }
        }
    }
    if let Some(demand) = spec.demand {
        for i in 0..len {
            let r = layout.demand_row(i);
            for un in 0..n {
                a_eq[(r, layout.q(un, i))] = 1.0;
            }
            b_eq[r] = demand[spec.window.start + i];
        }
    }

    // inequalities: the eight constraint families per (unit, step)
    let n_in = n * len * 8;
    let mut a_in = Mat::zeros(n_in, dim);
    let mut b_in = vec![0.0; n_in];
    for (un, unit) in spec.units.iter().enumerate() {
        let constants = switching_constants(unit, spec.x_start[un], len, spec.big_m);
        for i in 0..len {
            let RowConstants {
                m_state,
                m_q_switch,
                m_prod,
            } = constants[i];
            let q = layout.q(un, i);
            let y = layout.y(un, i);
            let qq = layout.qq(un, i);
            let zv = match &spec.z {
                ZSpec::Fixed(z) => Some(if z[un][i] { 1.0 } else { 0.0 }),
                ZSpec::Variable { .. } => None,
            };
            // (coefficient of z, base rhs) per family; rows are written as
            //   lhs + coef_z * z <= rhs
            // and for fixed z the z term moves to the right-hand side.
            let mut emit = |fam: usize, cols: &[(usize, f64)], coef_z: f64, rhs: f64| {
                let r = layout.gamma_row(un, i, fam);
                for &(c, v) in cols {
                    a_in[(r, c)] = v;
                }
                if spec.soften {
                    a_in[(r, layout.delta(un, i))] = -1.0;
                }
                match zv {
                    Some(z) => b_in[r] = rhs - coef_z * z,
                    None => {
                        a_in[(r, layout.z(un, i))] = coef_z;
                        b_in[r] = rhs;
                    }
                }
            };
            let x_data = if i == 0 { Some(spec.x_start[un]) } else { None };
            // gamma^1: Y <= z M
            emit(0, &[(y, 1.0)], -m_state, 0.0);
            // gamma^2: Y >= x - (1-z) M  ->  x - Y + z M <= M
            match x_data {
                Some(x0) => emit(1, &[(y, -1.0)], m_state, m_state - x0),
                None => emit(1, &[(y, -1.0), (layout.x(un, i), 1.0)], m_state, m_state),
            }
            // gamma^3: Y <= x + (1-z) M  ->  Y - x + z M <= M
            match x_data {
                Some(x0) => emit(2, &[(y, 1.0)], m_state, m_state + x0),
                None => emit(2, &[(y, 1.0), (layout.x(un, i), -1.0)], m_state, m_state),
            }
            // gamma^4: Q <= z M
            emit(3, &[(qq, 1.0)], -m_q_switch, 0.0);
            // gamma^5: Q >= q - (1-z) M  ->  q - Q + z M <= M
            emit(4, &[(q, 1.0), (qq, -1.0)], m_prod, m_prod);
            // gamma^6: Q <= q + (1-z) M  ->  Q - q + z M <= M
            emit(5, &[(qq, 1.0), (q, -1.0)], m_prod, m_prod);
            // gamma^7: q <= (1-z) q_max
            emit(6, &[(q, 1.0)], unit.q_max, unit.q_max);
            // gamma^8: q >= (1-z) q_min  ->  -q - z q_min <= -q_min
            emit(7, &[(q, -1.0)], -unit.q_min, -unit.q_min);
        }
    }

    // bounds: q, Y, Q, delta >= 0; x <= G; z in given box
    let mut lb = vec![f64::NEG_INFINITY; dim];
    let mut ub = vec![f64::INFINITY; dim];
    for (un, unit) in spec.units.iter().enumerate() {
        for i in 0..len {
            lb[layout.q(un, i)] = 0.0;
            lb[layout.y(un, i)] = 0.0;
            lb[layout.qq(un, i)] = 0.0;
            ub[layout.x(un, i + 1)] = effective_threshold(unit);
            if spec.soften {
                lb[layout.delta(un, i)] = 0.0;
            }
            if let ZSpec::Variable { lb: zl, ub: zu } = &spec.z {
                lb[layout.z(un, i)] = zl[un][i];
                ub[layout.z(un, i)] = zu[un][i];
            }
        }
    }

    let qp = QpProblem::new(hmat, g, a_eq, b_eq, a_in, b_in, lb, ub)
        .expect("window assembly produced inconsistent dimensions");
    (qp, layout)
}

/// Primal values of one unit pulled out of a solution vector.
pub(crate) struct UnitPrimal {
    pub q: Vec<f64>,
    pub y: Vec<f64>,
    pub qq: Vec<f64>,
    /// len+1 states with x[0] = window-start state.
    pub x: Vec<f64>,
    pub delta: Option<Vec<f64>>,
}

pub(crate) fn extract_primal(layout: &Layout, z: &[f64], x_start: f64, un: usize) -> UnitPrimal {
    let len = layout.len;
    let mut x = Vec::with_capacity(len + 1);
    x.push(x_start);
    for i in 1..=len {
        x.push(z[layout.x(un, i)]);
    }
    UnitPrimal {
        q: (0..len).map(|i| z[layout.q(un, i)]).collect(),
        y: (0..len).map(|i| z[layout.y(un, i)]).collect(),
        qq: (0..len).map(|i| z[layout.qq(un, i)]).collect(),
        x,
        delta: layout
            .has_delta
            .then(|| (0..len).map(|i| z[layout.delta(un, i)]).collect()),
    }
}

/// Extract the eight multiplier families for one unit, then shift multiplier
/// mass off the big-M rows wherever an equivalent multiplier exists on a
/// plain bound or on the opposing row of an active pair. Any valid dual
/// vector yields a valid cut; the minimal-mass choice avoids +-M coefficients
/// appearing in cuts for constraints whose pressure really sits on a simple
/// bound, which would otherwise make the master wander.
pub(crate) fn extract_gamma(layout: &Layout, sol: &QpSolution, un: usize) -> Vec<[f64; 8]> {
    let len = layout.len;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut gam = [0.0_f64; 8];
        for (f, gf) in gam.iter_mut().enumerate() {
            *gf = sol.mu_in[layout.gamma_row(un, i, f)].max(0.0);
        }
        // delta-row stationarity pins the multiplier sum when the slack is
        // strictly positive; mass shifts are only admissible otherwise
        let locked = layout.has_delta && sol.z[layout.delta(un, i)] > 1e-9;
        if !locked {
            let beta_y = sol.mu_lb[layout.y(un, i)].max(0.0);
            let s = gam[0].min(beta_y);
            gam[0] -= s;
            let beta_q = sol.mu_lb[layout.qq(un, i)].max(0.0);
            let s = gam[3].min(beta_q);
            gam[3] -= s;
            let s = gam[1].min(gam[2]);
            gam[1] -= s;
            gam[2] -= s;
            let s = gam[4].min(gam[5]);
            gam[4] -= s;
            gam[5] -= s;
            let s = gam[6].min(gam[7]);
            gam[6] -= s;
            gam[7] -= s;
        }
        out.push(gam);
    }
    out
}

/// Profit earned by one unit over a window (includes the data term at the
/// first step; excludes the costless terminal state).
pub(crate) fn unit_profit(
    unit: &UnitParams,
    window: Window,
    price: &[f64],
    q: &[f64],
    x: &[f64],
) -> f64 {
    let mut v = 0.0;
    for i in 0..window.len {
        let p = price[window.start + i];
        v += p * q[i] - unit.a * q[i] * q[i] - unit.b * q[i] - x[i] * x[i];
    }
    v
}
