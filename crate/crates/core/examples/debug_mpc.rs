use degrade_sched_core::model::scenario_from_json;
use degrade_sched_core::mpc::run_closed_loop;

fn main() {
    env_logger::init();
    let text = r#"{
        "units": [
            {"a": 0.01, "b": 5.0, "q_min": 10.0, "q_max": 500.0, "A": 1.0, "B": 0.004, "G": 1.2},
            {"a": 0.012, "b": 6.0, "q_min": 10.0, "q_max": 400.0, "A": 1.0, "B": 0.0005, "G": 8.0}
        ],
        "T": 8, "H": 5,
        "demand": [300.0, 350.0, 320.0, 280.0, 300.0, 340.0, 310.0, 290.0],
        "price": [20.0, 21.0, 20.5, 19.5, 20.0, 21.5, 20.2, 19.8]
    }"#;
    let scn = scenario_from_json(text, None).unwrap();
    let trace = run_closed_loop(&scn).unwrap();
    for t in 0..8 {
        println!(
            "t={t}: z=({},{}) q=({:.1},{:.1}) x=({:.3},{:.3}) iters={}",
            trace.applied_z[0][t] as u8,
            trace.applied_z[1][t] as u8,
            trace.applied_q[0][t],
            trace.applied_q[1][t],
            trace.realized_x[0][t],
            trace.realized_x[1][t],
            trace.benders_iterations[t]
        );
    }
    println!("objective = {:.1}", trace.total_objective);
    let exact = degrade_sched_core::baselines::centralized_miqp(&scn).unwrap();
    println!("exact objective = {:.1}", exact.total_objective);
    let cmpc = degrade_sched_core::baselines::centralized_mpc(&scn).unwrap();
    println!("central-mpc objective = {:.1}", cmpc.total_objective);
    for t in 0..8 {
        println!(
            "  cmpc t={t}: z=({},{}) q=({:.1},{:.1})",
            cmpc.applied_z[0][t] as u8,
            cmpc.applied_z[1][t] as u8,
            cmpc.applied_q[0][t],
            cmpc.applied_q[1][t]
        );
    }
    for t in 0..8 {
        println!(
            "  exact t={t}: z=({},{}) q=({:.1},{:.1})",
            exact.applied_z[0][t] as u8,
            exact.applied_z[1][t] as u8,
            exact.applied_q[0][t],
            exact.applied_q[1][t]
        );
    }
}
// appended comparison
