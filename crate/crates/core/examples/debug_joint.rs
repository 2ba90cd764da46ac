use degrade_sched_core::benders::run_benders_window;
use degrade_sched_core::model::{scenario_from_json, Window};

fn main() {
    env_logger::init();
    let text = r#"{
        "units": [
            {"a": 0.01, "b": 5.0, "q_min": 50.0, "q_max": 500.0, "A": 1.0, "B": 0.01, "G": 2.0},
            {"a": 0.012, "b": 6.0, "q_min": 0.0, "q_max": 800.0, "A": 1.0, "B": 0.0001, "G": 50.0}
        ],
        "T": 3, "H": 2,
        "demand": [300.0, 300.0, 300.0],
        "price": [20.0, 20.0, 20.0]
    }"#;
    let scn = scenario_from_json(text, None).unwrap();
    let w = Window { start: 0, len: 3 };
    match run_benders_window(&scn, &[1.8, 0.0], w) {
        Ok(out) => println!(
            "converged={} iters={} z={:?}",
            out.converged, out.iterations, out.solution.z
        ),
        Err(e) => println!("error: {e}"),
    }
}
