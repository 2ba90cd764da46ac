//! Domain types, scenario schema and validation, the synthetic demand/price
//! generator, and the seven-unit benchmark instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::ScenarioError;

/// One production unit: cost, capacity, and degradation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitParams {
    /// 1-based unit index.
    pub id: usize,
    /// Quadratic production-cost coefficient (currency/unit^2), strictly positive.
    pub a: f64,
    /// Linear production-cost coefficient (currency/unit).
    pub b: f64,
    pub q_min: f64,
    pub q_max: f64,
    /// State-transition coefficient.
    pub a_dyn: f64,
    /// Production-to-degradation coefficient.
    pub b_dyn: f64,
    /// Degradation threshold the state must stay below.
    pub threshold: f64,
}

/// A fully resolved problem instance. Demand/price series are explicit here;
/// generator parameters from the schema are resolved at load time.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub units: Vec<UnitParams>,
    /// Planning-period length in steps; decisions cover t = 0..T-1.
    pub t_len: usize,
    /// Prediction-horizon length.
    pub horizon: usize,
    pub big_m: f64,
    /// Benders termination tolerance.
    pub epsilon: f64,
    /// Subgradient base step size.
    pub alpha0: f64,
    /// Demand-residual convergence tolerance.
    pub dual_tol: f64,
    pub dual_max_iter: usize,
    pub benders_max_iter: usize,
    pub x0: Vec<f64>,
    pub demand: Vec<f64>,
    pub price: Vec<f64>,
}

/// A prediction window: decision steps `start ..= start + len - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub len: usize,
}

impl Window {
    pub fn steps(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }

    /// Last decision step (inclusive).
    pub fn last(&self) -> usize {
        self.start + self.len - 1
    }
}

/// Per-window primal results: maintenance, production, auxiliaries, states,
/// prices, and the eight dual-multiplier families per unit and step.
#[derive(Debug, Clone)]
pub struct WindowSolution {
    pub window: Window,
    /// N x len maintenance decisions.
    pub z: Vec<Vec<bool>>,
    /// N x len production.
    pub q: Vec<Vec<f64>>,
    /// N x len auxiliary Z*x.
    pub y_aux: Vec<Vec<f64>>,
    /// N x len auxiliary Z*q.
    pub q_aux: Vec<Vec<f64>>,
    /// N x (len+1) states; x[n][0] is the window-start state.
    pub x: Vec<Vec<f64>>,
    /// Slack matrix, present only for feasibility-check runs.
    pub delta: Option<Vec<Vec<f64>>>,
    /// Dual price per window step.
    pub lambda: Vec<f64>,
    /// N x len x 8 constraint multipliers.
    pub gamma: Vec<Vec<[f64; 8]>>,
    /// Window objective (profit form).
    pub objective: f64,
}

/// Wall time per phase, in seconds.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PhaseTimes {
    pub master: f64,
    pub feasibility: f64,
    pub agents: f64,
    pub cuts: f64,
    pub total: f64,
}

/// Worst-case invariant deviations observed while a trace was produced.
#[derive(Debug, Clone, Default, Serialize)]
pub struct TraceDiagnostics {
    pub max_demand_residual: f64,
    pub max_threshold_excess: f64,
    pub max_bigm_deviation: f64,
    pub lb_monotone: bool,
    pub window_cuts_emitted: usize,
}

/// Realized trajectory over the planning period.
#[derive(Debug, Clone)]
pub struct ClosedLoopTrace {
    /// N x T applied maintenance decisions.
    pub applied_z: Vec<Vec<bool>>,
    /// N x T applied production.
    pub applied_q: Vec<Vec<f64>>,
    /// N x (T+1) realized states, `realized_x[n][0] = x0[n]`.
    pub realized_x: Vec<Vec<f64>>,
    pub per_step_objective: Vec<f64>,
    pub total_objective: f64,
    /// Benders iterations per window.
    pub benders_iterations: Vec<usize>,
    pub runtime: PhaseTimes,
    pub warnings: Vec<String>,
    pub diagnostics: TraceDiagnostics,
    /// Per-window convergence history rows (window start, iteration,
    /// lb_sum, ub_sum, gap, optimality cuts, feasibility cuts).
    pub convergence: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub window_start: usize,
    pub iteration: usize,
    pub lb_sum: f64,
    pub ub_sum: f64,
    pub gap: f64,
    pub optimality_cuts: usize,
    pub feasibility_cuts: usize,
}

/// One degradation step: `(1 - Z) * (A x + B q)`.
pub fn simulate_step(unit: &UnitParams, x: f64, q: f64, z: bool) -> f64 {
    debug_assert!(x >= 0.0 && q >= 0.0);
    if z {
        0.0
    } else {
        unit.a_dyn * x + unit.b_dyn * q
    }
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitFile {
    a: f64,
    b: f64,
    q_min: f64,
    q_max: f64,
    #[serde(rename = "A")]
    a_dyn: f64,
    #[serde(rename = "B")]
    b_dyn: f64,
    #[serde(rename = "G")]
    threshold: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DemandGenFile {
    base: Option<f64>,
    amp: Option<f64>,
    noise: Option<f64>,
    period: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PriceGenFile {
    p0: Option<f64>,
    p1: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    units: Vec<UnitFile>,
    #[serde(rename = "T")]
    t_len: usize,
    #[serde(rename = "H")]
    horizon: usize,
    #[serde(rename = "big_M", skip_serializing_if = "Option::is_none")]
    big_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    benders_max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    demand: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    demand_gen: Option<DemandGenFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    price: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    price_gen: Option<PriceGenFile>,
}

/// Parse, resolve generators, fill defaults, validate.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    load_scenario_with_seed(path, None)
}

/// Same as [`load_scenario`] but overriding the generator seed (no effect on
/// scenarios that carry explicit series).
pub fn load_scenario_with_seed(path: &Path, seed: Option<u64>) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::Parse(format!("{}: {e}", path.display())))?;
    scenario_from_json(&text, seed)
}

pub fn scenario_from_json(text: &str, seed: Option<u64>) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    resolve(file, seed)
}

pub fn save_scenario(scn: &Scenario, path: &Path) -> Result<(), ScenarioError> {
    let text = scenario_to_json(scn);
    std::fs::write(path, text).map_err(|e| ScenarioError::Parse(format!("{}: {e}", path.display())))
}

/// Serialize with explicit demand/price arrays (generator parameters are
/// resolved away at load time).
pub fn scenario_to_json(scn: &Scenario) -> String {
    let file = ScenarioFile {
        units: scn
            .units
            .iter()
            .map(|u| UnitFile {
                a: u.a,
                b: u.b,
                q_min: u.q_min,
                q_max: u.q_max,
                a_dyn: u.a_dyn,
                b_dyn: u.b_dyn,
                threshold: u.threshold,
            })
            .collect(),
        t_len: scn.t_len,
        horizon: scn.horizon,
        big_m: Some(scn.big_m),
        epsilon: Some(scn.epsilon),
        alpha0: Some(scn.alpha0),
        dual_tol: Some(scn.dual_tol),
        dual_max_iter: Some(scn.dual_max_iter),
        benders_max_iter: Some(scn.benders_max_iter),
        x0: Some(scn.x0.clone()),
        demand: Some(scn.demand.clone()),
        demand_gen: None,
        price: Some(scn.price.clone()),
        price_gen: None,
    };
    serde_json::to_string_pretty(&file).expect("scenario serialization cannot fail")
}

fn resolve(file: ScenarioFile, seed_override: Option<u64>) -> Result<Scenario, ScenarioError> {
    let units: Vec<UnitParams> = file
        .units
        .iter()
        .enumerate()
        .map(|(i, u)| UnitParams {
            id: i + 1,
            a: u.a,
            b: u.b,
            q_min: u.q_min,
            q_max: u.q_max,
            a_dyn: u.a_dyn,
            b_dyn: u.b_dyn,
            threshold: u.threshold,
        })
        .collect();
    let sum_qmax: f64 = units.iter().map(|u| u.q_max).sum();

    let demand = match (&file.demand, &file.demand_gen) {
        (Some(_), Some(_)) => {
            return Err(ScenarioError::Parse(
                "scenario has both `demand` and `demand_gen`".to_string(),
            ))
        }
        (Some(d), None) => d.clone(),
        (None, gen) => {
            let gen = gen.as_ref().cloned_or_default();
            generate_demand(&gen, sum_qmax, file.t_len, seed_override)
        }
    };
    let price = match (&file.price, &file.price_gen) {
        (Some(_), Some(_)) => {
            return Err(ScenarioError::Parse(
                "scenario has both `price` and `price_gen`".to_string(),
            ))
        }
        (Some(p), None) => p.clone(),
        (None, gen) => {
            let gen = gen.as_ref().cloned_or_default();
            let p0 = gen.p0.unwrap_or(18.0);
            let p1 = gen.p1.unwrap_or(14.0);
            demand.iter().map(|d| p0 + p1 * d / sum_qmax).collect()
        }
    };

    let n = units.len();
    let big_m = file.big_m.unwrap_or_else(|| {
        10.0 * units
            .iter()
            .map(|u| u.threshold.max(u.q_max))
            .fold(0.0_f64, f64::max)
    });
    let max_price = price.iter().fold(0.0_f64, |m, p| m.max(*p));
    let epsilon = file
        .epsilon
        .unwrap_or(1e-4 * (file.horizon as f64 + 1.0) * max_price.max(1.0) * sum_qmax.max(1.0));
    // Aggregate inverse price sensitivity: a near-Newton subgradient step.
    let alpha0 = file
        .alpha0
        .unwrap_or_else(|| 1.0 / units.iter().map(|u| 1.0 / (2.0 * u.a)).sum::<f64>());
    let max_d = demand.iter().fold(0.0_f64, |m, d| m.max(*d));
    let dual_tol = file.dual_tol.unwrap_or(1e-4 * max_d.max(1.0));
    let scn = Scenario {
        units,
        t_len: file.t_len,
        horizon: file.horizon,
        big_m,
        epsilon,
        alpha0,
        dual_tol,
        dual_max_iter: file.dual_max_iter.unwrap_or(500),
        benders_max_iter: file.benders_max_iter.unwrap_or(50),
        x0: file.x0.unwrap_or_else(|| vec![0.0; n]),
        demand,
        price,
    };
    scn.validate()?;
    Ok(scn)
}

trait ClonedOrDefault {
    type Out;
    fn cloned_or_default(&self) -> Self::Out;
}

impl ClonedOrDefault for Option<&DemandGenFile> {
    type Out = DemandGenFile;
    fn cloned_or_default(&self) -> DemandGenFile {
        match self {
            Some(g) => DemandGenFile {
                base: g.base,
                amp: g.amp,
                noise: g.noise,
                period: g.period,
                seed: g.seed,
            },
            None => DemandGenFile::default(),
        }
    }
}

impl ClonedOrDefault for Option<&PriceGenFile> {
    type Out = PriceGenFile;
    fn cloned_or_default(&self) -> PriceGenFile {
        match self {
            Some(g) => PriceGenFile { p0: g.p0, p1: g.p1 },
            None => PriceGenFile::default(),
        }
    }
}

fn generate_demand(
    gen: &DemandGenFile,
    sum_qmax: f64,
    t_len: usize,
    seed_override: Option<u64>,
) -> Vec<f64> {
    let base = gen.base.unwrap_or(0.6 * sum_qmax);
    let amp = gen.amp.unwrap_or(0.15 * sum_qmax);
    let noise = gen.noise.unwrap_or(0.05 * sum_qmax);
    let period = gen.period.unwrap_or(28.0);
    let seed = seed_override.unwrap_or_else(|| gen.seed.unwrap_or(0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..t_len)
        .map(|t| {
            let wave = base + amp * (2.0 * std::f64::consts::PI * t as f64 / period).sin();
            let eps = if noise > 0.0 {
                rng.random_range(-noise..=noise)
            } else {
                0.0
            };
            wave + eps
        })
        .collect()
}

impl Scenario {
    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn sum_qmax(&self) -> f64 {
        self.units.iter().map(|u| u.q_max).sum()
    }

    /// Lower bound on any achievable per-step epigraph value (minimization
    /// form); keeps the first master bounded before any optimality cut exists.
    pub fn u_floor(&self, window_len: usize) -> f64 {
        let pmax = self.price.iter().fold(0.0_f64, |m, p| m.max(p.abs()));
        let bmax = self.units.iter().fold(0.0_f64, |m, u| m.max(u.b.abs()));
        let rent = self
            .units
            .iter()
            .fold(0.0_f64, |m, u| m.max(2.0 * u.a * u.q_max));
        -(window_len as f64) * (pmax + bmax + rent + 1.0) * self.sum_qmax().max(1.0)
    }

    /// Every invariant the schema promises, each violation as its own line.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut violations: Vec<String> = Vec::new();
        if self.units.is_empty() {
            violations.push("at least one unit required".to_string());
        }
        for u in &self.units {
            if !(u.q_min >= 0.0) {
                violations.push(format!("q_min >= 0 violated for unit {} (q_min={})", u.id, u.q_min));
            }
            if !(u.q_min < u.q_max) {
                violations.push(format!(
                    "q_min < q_max violated for unit {} (q_min={}, q_max={})",
                    u.id, u.q_min, u.q_max
                ));
            }
            if !(u.a > 0.0) {
                violations.push(format!("a > 0 violated for unit {} (a={})", u.id, u.a));
            }
            if !(u.a_dyn >= 1.0) {
                violations.push(format!("A >= 1 violated for unit {} (A={})", u.id, u.a_dyn));
            }
            if !(u.b_dyn > 0.0) {
                violations.push(format!("B > 0 violated for unit {} (B={})", u.id, u.b_dyn));
            }
            if !(u.threshold > 0.0) {
                violations.push(format!("G > 0 violated for unit {} (G={})", u.id, u.threshold));
            }
        }
        if self.t_len < 1 {
            violations.push(format!("T >= 1 violated (T={})", self.t_len));
        }
        if !(1 <= self.horizon && self.horizon <= self.t_len) {
            violations.push(format!(
                "1 <= H <= T violated (H={}, T={})",
                self.horizon, self.t_len
            ));
        }
        if self.demand.len() != self.t_len {
            violations.push(format!(
                "demand length {} != T {}",
                self.demand.len(),
                self.t_len
            ));
        }
        if self.price.len() != self.t_len {
            violations.push(format!(
                "price length {} != T {}",
                self.price.len(),
                self.t_len
            ));
        }
        let cap = self.sum_qmax();
        for (t, d) in self.demand.iter().enumerate() {
            if *d < 0.0 {
                violations.push(format!("D(t) >= 0 violated at t={t} (D={d})"));
                break;
            }
        }
        for (t, d) in self.demand.iter().enumerate() {
            if *d > cap + 1e-9 {
                violations.push(format!(
                    "D(t) <= total capacity violated at t={t} (D={d}, capacity={cap})"
                ));
                break;
            }
        }
        let min_big_m = self
            .units
            .iter()
            .map(|u| u.threshold.max(u.q_max))
            .fold(0.0_f64, f64::max);
        if self.big_m < min_big_m {
            violations.push(format!(
                "big_M >= max(G, q_max) violated (big_M={}, needed {min_big_m})",
                self.big_m
            ));
        }
        if self.x0.len() != self.units.len() {
            violations.push(format!(
                "x0 length {} != unit count {}",
                self.x0.len(),
                self.units.len()
            ));
        } else {
            for (u, x) in self.units.iter().zip(&self.x0) {
                if *x < 0.0 || *x > u.threshold {
                    violations.push(format!(
                        "0 <= x0 <= G violated for unit {} (x0={x}, G={})",
                        u.id, u.threshold
                    ));
                }
            }
        }
        if !(self.epsilon > 0.0) {
            violations.push(format!("epsilon > 0 violated (epsilon={})", self.epsilon));
        }
        if !(self.alpha0 > 0.0) {
            violations.push(format!("alpha0 > 0 violated (alpha0={})", self.alpha0));
        }
        if !(self.dual_tol > 0.0) {
            violations.push(format!("dual_tol > 0 violated (dual_tol={})", self.dual_tol));
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Invalid(violations))
        }
    }
}

/// The seven-unit benchmark: published unit parameters, staggered thresholds
/// (`G_n = 5 (8 + n)`), 196 daily steps, and the seeded demand/price
/// generator. The staggering spreads maintenance across units; the scale
/// keeps the fleet able to cover demand between maintenance days (a unit at
/// typical output wears through `G_n` in one to three weeks).
pub fn benchmark_scenario() -> Scenario {
    benchmark_scenario_with(7, 196, 13, 0)
}

/// Benchmark variant restricted to the first `n_units` units with custom
/// period length, horizon, and generator seed. Demand scales with the reduced
/// fleet capacity.
pub fn benchmark_scenario_with(n_units: usize, t_len: usize, horizon: usize, seed: u64) -> Scenario {
    assert!((1..=7).contains(&n_units));
    const A: [f64; 7] = [0.0105, 0.0090, 0.0090, 0.0095, 0.0085, 0.0075, 0.0090];
    const B: [f64; 7] = [15.37, 11.29, 8.80, 8.00, 11.40, 10.45, 10.03];
    const QMAX: [f64; 7] = [2080.0, 1292.0, 1450.0, 1304.0, 1016.0, 1374.0, 1160.0];
    const QMIN: [f64; 7] = [150.0, 155.0, 175.0, 220.0, 225.0, 130.0, 300.0];
    const BDYN: [f64; 7] = [0.0054, 0.0031, 0.0045, 0.0036, 0.0090, 0.0040, 0.0045];
    let units: Vec<UnitFile> = (0..n_units)
        .map(|n| UnitFile {
            a: A[n],
            b: B[n],
            q_min: QMIN[n],
            q_max: QMAX[n],
            a_dyn: 1.0,
            b_dyn: BDYN[n],
            threshold: 5.0 * (8.0 + (n as f64 + 1.0)),
        })
        .collect();
    let file = ScenarioFile {
        units,
        t_len,
        horizon,
        big_m: None,
        epsilon: None,
        alpha0: None,
        dual_tol: None,
        dual_max_iter: None,
        benders_max_iter: None,
        x0: None,
        demand: None,
        demand_gen: Some(DemandGenFile {
            seed: Some(seed),
            ..DemandGenFile::default()
        }),
        price: None,
        price_gen: None,
    };
    resolve(file, None).expect("benchmark scenario must validate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit1() -> UnitParams {
        benchmark_scenario().units[0].clone()
    }

    #[test]
    fn benchmark_matches_published_parameters() {
        let scn = benchmark_scenario();
        assert_eq!(scn.units.len(), 7);
        assert_eq!(scn.units[0].a, 0.0105);
        assert_eq!(scn.units[6].q_min, 300.0);
        assert_eq!(scn.units[3].b, 8.00);
        assert_eq!(scn.units[4].b_dyn, 0.0090);
        assert_eq!(scn.t_len, 196);
        assert!(scn.units.iter().all(|u| u.a_dyn == 1.0));
        // staggered thresholds, unit 7 highest
        assert_eq!(scn.units[6].threshold, 75.0);
        for w in scn.units.windows(2) {
            assert!(w[0].threshold < w[1].threshold);
        }
        scn.validate().unwrap();
    }

    #[test]
    fn benchmark_demand_within_capacity_and_reproducible() {
        let s1 = benchmark_scenario();
        let s2 = benchmark_scenario();
        assert_eq!(s1.demand, s2.demand);
        assert_eq!(s1.price, s2.price);
        let cap = s1.sum_qmax();
        for (d, p) in s1.demand.iter().zip(&s1.price) {
            assert!(*d >= 0.0 && *d <= cap);
            assert!(*p > 0.0);
        }
        // price co-moves with demand
        let dmax = s1
            .demand
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let pmax = s1
            .price
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(dmax, pmax);
    }

    #[test]
    fn simulate_step_examples() {
        let u = unit1();
        assert!((simulate_step(&u, 0.5, 1000.0, false) - 5.9).abs() < 1e-12);
        assert_eq!(simulate_step(&u, 3.7, 512.0, true), 0.0);
        assert_eq!(simulate_step(&u, 0.0, 0.0, false), 0.0);
    }

    #[test]
    fn validation_flags_bad_capacity_ordering() {
        let mut scn = benchmark_scenario_with(2, 4, 2, 1);
        scn.units[1].q_min = 200.0;
        scn.units[1].q_max = 100.0;
        let err = scn.validate().unwrap_err();
        let text = err.to_string();
        assert!(text.contains("q_min < q_max violated"), "{text}");
        assert!(text.contains("unit 2"), "{text}");
    }

    #[test]
    fn validation_flags_nonpositive_a_and_bad_horizon() {
        let mut scn = benchmark_scenario_with(2, 4, 2, 1);
        scn.units[0].a = -0.1;
        scn.horizon = 9;
        let err = scn.validate().unwrap_err();
        let text = err.to_string();
        assert!(text.contains("a > 0 violated for unit 1"), "{text}");
        assert!(text.contains("1 <= H <= T violated"), "{text}");
    }

    #[test]
    fn json_round_trip_is_identity() {
        let scn = benchmark_scenario_with(3, 12, 4, 9);
        let text = scenario_to_json(&scn);
        let back = scenario_from_json(&text, None).unwrap();
        assert_eq!(scn, back);
    }

    #[test]
    fn missing_x0_defaults_to_zero() {
        let text = r#"{
            "units": [{"a": 0.01, "b": 5.0, "q_min": 10.0, "q_max": 100.0, "A": 1.0, "B": 0.01, "G": 5.0}],
            "T": 3, "H": 2,
            "demand": [50.0, 60.0, 40.0],
            "price": [10.0, 11.0, 9.0]
        }"#;
        let scn = scenario_from_json(text, None).unwrap();
        assert_eq!(scn.x0, vec![0.0]);
        assert_eq!(scn.dual_max_iter, 500);
        assert!(scn.big_m >= 1000.0);
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        let err = scenario_from_json("{ not json", None).unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(_)));
    }

    #[test]
    fn seed_override_changes_generated_series() {
        let s0 = benchmark_scenario_with(3, 20, 4, 0);
        let s1 = benchmark_scenario_with(3, 20, 4, 1);
        assert_ne!(s0.demand, s1.demand);
    }

    proptest! {
        // Monotone in x and q while running; maintenance always resets.
        #[test]
        fn simulate_step_monotone(x1 in 0.0..50.0_f64, x2 in 0.0..50.0_f64,
                                  q1 in 0.0..2000.0_f64, q2 in 0.0..2000.0_f64) {
            let u = unit1();
            let (xl, xh) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
            let (ql, qh) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
            prop_assert!(simulate_step(&u, xl, ql, false) <= simulate_step(&u, xh, qh, false));
            prop_assert_eq!(simulate_step(&u, x1, q1, true), 0.0);
        }
    }
}
