//! Cut storage shared by the master, feasibility, and Benders modules.

/// A single per-step cut over the maintenance vector Z(t).
///
/// Optimality cuts impose `phi . Z(t) + psi_sum <= U(t)`; feasibility cuts
/// impose `phi . Z(t) + psi_sum <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub kind: CutKind,
    /// Absolute time step the cut constrains.
    pub t: usize,
    /// One coefficient per unit.
    pub phi: Vec<f64>,
    pub psi_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    Optimality,
    Feasibility,
}

impl Cut {
    pub fn value_at(&self, z_t: &[bool]) -> f64 {
        debug_assert_eq!(z_t.len(), self.phi.len());
        let mut v = self.psi_sum;
        for (p, z) in self.phi.iter().zip(z_t) {
            if *z {
                v += p;
            }
        }
        v
    }
}

/// A feasibility cut whose rows must hold *summed over the window*:
/// `sum_t (phi(t) . Z(t) + psi_sum(t)) <= 0`.
///
/// Emitted instead of per-step cuts when the slack LP's dual solution shows
/// the infeasibility is coupled through the state dynamics; a per-step split
/// would then wrongly exclude schedules that repair the problem at another
/// step.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowCut {
    pub rows: Vec<Cut>,
}

impl WindowCut {
    /// Evaluate against a full window schedule (unit-major, len columns).
    pub fn value_at(&self, window_start: usize, z: &[Vec<bool>]) -> f64 {
        self.rows
            .iter()
            .map(|c| {
                let i = c.t - window_start;
                let col: Vec<bool> = z.iter().map(|zn| zn[i]).collect();
                c.value_at(&col)
            })
            .sum()
    }
}

/// Accumulated cuts for one MPC window.
#[derive(Debug, Clone, Default)]
pub struct CutPool {
    pub step_cuts: Vec<Cut>,
    pub window_cuts: Vec<WindowCut>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_step_cuts(&mut self, cuts: impl IntoIterator<Item = Cut>) {
        self.step_cuts.extend(cuts);
    }

    pub fn add_window_cut(&mut self, cut: WindowCut) {
        self.window_cuts.push(cut);
    }

    pub fn cuts_at(&self, t: usize) -> impl Iterator<Item = &Cut> {
        self.step_cuts.iter().filter(move |c| c.t == t)
    }

    pub fn optimality_count(&self) -> usize {
        self.step_cuts
            .iter()
            .filter(|c| c.kind == CutKind::Optimality)
            .count()
    }

    pub fn feasibility_count(&self) -> usize {
        self.step_cuts
            .iter()
            .filter(|c| c.kind == CutKind::Feasibility)
            .count()
            + self.window_cuts.len()
    }
}
