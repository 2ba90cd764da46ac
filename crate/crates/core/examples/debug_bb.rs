use degrade_sched_core::baselines::centralized_miqp;
use degrade_sched_core::model::scenario_from_json;

fn main() {
    env_logger::init();
    let text = r#"{
        "units": [
            {"a": 0.01, "b": 5.0, "q_min": 10.0, "q_max": 500.0, "A": 1.0, "B": 0.002, "G": 20.0},
            {"a": 0.012, "b": 6.0, "q_min": 10.0, "q_max": 400.0, "A": 1.0, "B": 0.002, "G": 25.0}
        ],
        "T": 2, "H": 1,
        "demand": [320.0, 330.0],
        "price": [20.0, 20.3]
    }"#;
    let scn = scenario_from_json(text, None).unwrap();
    match centralized_miqp(&scn) {
        Ok(t) => println!("objective = {}", t.total_objective),
        Err(e) => println!("error: {e}"),
    }
}
