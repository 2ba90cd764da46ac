use degrade_sched_core::benders::run_benders_window;
use degrade_sched_core::model::{scenario_from_json, Window};

fn main() {
    env_logger::init();
    let text = r#"{
        "units": [
            {"a": 0.01, "b": 5.0, "q_min": 10.0, "q_max": 500.0, "A": 1.0, "B": 0.0005, "G": 50.0},
            {"a": 0.012, "b": 6.0, "q_min": 10.0, "q_max": 400.0, "A": 1.0, "B": 0.0006, "G": 50.0}
        ],
        "T": 4, "H": 3,
        "demand": [300.0, 350.0, 320.0, 280.0],
        "price": [20.0, 21.0, 20.5, 19.5]
    }"#;
    let scn = scenario_from_json(text, None).unwrap();
    let w = Window { start: 0, len: 4 };
    let out = run_benders_window(&scn, &[0.0, 0.0], w).unwrap();
    println!(
        "converged={} iterations={} gap={:.4}",
        out.converged, out.iterations, out.gap
    );
    println!("epsilon = {}", scn.epsilon);
    for rec in &out.state.history {
        println!(
            "  iter {}: lb={:.3} ub={:.3} gap={:.3} K={} L={}",
            rec.iteration, rec.lb_sum, rec.ub_sum, rec.gap, rec.optimality_cuts, rec.feasibility_cuts
        );
    }
    println!("z = {:?}", out.solution.z);
    for c in degrade_sched_core::benders::optimality_cut(&out.solution, &scn, w) {
        println!("cut t={} phi={:?} psi={:.3}", c.t, c.phi, c.psi_sum);
    }
}
