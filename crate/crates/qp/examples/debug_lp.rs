use degrade_sched_qp::{solve_lp, Mat, QpProblem};
fn main() {
    env_logger::init();
    let n = 18;
    let mut g = vec![0.0; n];
    for j in 12..18 { g[j] = 1.0; }
    let mut a_in = Mat::zeros(23, n);
    let mut b_in = vec![0.0; 23];
    a_in[(0, 0)] = 500.0;
    a_in[(0, 1)] = 400.0;
    b_in[0] = 600.0;
    a_in[(1, 2)] = 500.0;
    a_in[(1, 3)] = 400.0;
    b_in[1] = 550.0;
    a_in[(2, 4)] = 500.0;
    a_in[(2, 5)] = 400.0;
    b_in[2] = 580.0;
    a_in[(3, 6)] = 500.0;
    a_in[(3, 7)] = 400.0;
    b_in[3] = 620.0;
    a_in[(4, 8)] = 500.0;
    a_in[(4, 9)] = 400.0;
    b_in[4] = 600.0;
    a_in[(5, 10)] = 500.0;
    a_in[(5, 11)] = 400.0;
    b_in[5] = 560.0;
    a_in[(6, 0)] = -5.512297;
    a_in[(6, 1)] = -0.02939543;
    a_in[(6, 12)] = -1.0;
    b_in[6] = 3828.923304713;
    a_in[(7, 2)] = -698.6767;
    a_in[(7, 3)] = -0.6106919;
    a_in[(7, 13)] = -1.0;
    b_in[7] = 4728.833499757;
    a_in[(8, 4)] = 24896.9;
    a_in[(8, 5)] = -1.04309;
    a_in[(8, 14)] = -1.0;
    b_in[8] = 28306.63340467;
    a_in[(9, 6)] = -433.16;
    a_in[(9, 7)] = -1.123673;
    a_in[(9, 15)] = -1.0;
    b_in[9] = 3495.221371212;
    a_in[(10, 8)] = -431.6922;
    a_in[(10, 9)] = -0.8076136;
    a_in[(10, 16)] = -1.0;
    b_in[10] = 3862.604346636;
    a_in[(11, 10)] = 22993.91;
    a_in[(11, 11)] = 2.381446e-05;
    a_in[(11, 17)] = -1.0;
    b_in[11] = 26875.04064585;
    a_in[(12, 0)] = 19265.04;
    a_in[(12, 1)] = -0.04127656;
    a_in[(12, 12)] = -1.0;
    b_in[12] = 22385.04200257;
    a_in[(13, 2)] = 17648.34;
    a_in[(13, 3)] = -0.8421502;
    a_in[(13, 13)] = -1.0;
    b_in[13] = 21428.32084501;
    a_in[(14, 4)] = -2.003201;
    a_in[(14, 5)] = -1.366634;
    a_in[(14, 14)] = -1.0;
    b_in[14] = 4267.257779122;
    a_in[(15, 6)] = 20030.28;
    a_in[(15, 7)] = -1.539484;
    a_in[(15, 15)] = -1.0;
    b_in[15] = 22868.71186385;
    a_in[(16, 8)] = 19344.59;
    a_in[(16, 9)] = -1.149797;
    a_in[(16, 16)] = -1.0;
    b_in[16] = 22464.31561231;
    a_in[(17, 10)] = -3.620469e-10;
    a_in[(17, 11)] = 3.980069e-07;
    a_in[(17, 17)] = -1.0;
    b_in[17] = 4835.815273141;
    a_in[(18, 0)] = -0.406746;
    a_in[(18, 2)] = -1.656746;
    a_in[(18, 4)] = -1.656746;
    a_in[(18, 6)] = -1.656746;
    a_in[(18, 8)] = -1.656746;
    a_in[(18, 10)] = -1.656746;
    b_in[18] = -1.190694444413;
    a_in[(19, 0)] = -0.406746;
    a_in[(19, 2)] = -1.656746;
    a_in[(19, 4)] = -1.656746;
    a_in[(19, 6)] = -1.656746;
    a_in[(19, 8)] = -1.656746;
    a_in[(19, 10)] = 202.7537;
    b_in[19] = 201.9598107326;
    a_in[(20, 0)] = -0.406746;
    a_in[(20, 2)] = -1.656746;
    a_in[(20, 4)] = -1.656746;
    a_in[(20, 6)] = -1.656746;
    a_in[(20, 8)] = 196.8983;
    b_in[20] = 196.5012084048;
    a_in[(21, 0)] = -0.4067456;
    a_in[(21, 2)] = -1.656745;
    a_in[(21, 4)] = -1.656745;
    a_in[(21, 6)] = 220.9993;
    b_in[21] = 220.999038606;
    a_in[(22, 4)] = 4.355263;
    a_in[(22, 6)] = -1.656744;
    a_in[(22, 8)] = -1.656744;
    a_in[(22, 10)] = -1.656744;
    b_in[22] = 4.355045025295;
    let mut lb = vec![0.0; n];
    let mut ub = vec![0.0; n];
    ub[1] = 1.0; ub[2] = 1.0;
    for j in [3usize, 5, 7, 9] { lb[j] = 1.0; ub[j] = 1.0; }
    for j in 12..18 { lb[j] = -207900.0; ub[j] = f64::INFINITY; }
    let p = QpProblem::lp(g, Mat::zeros(0, n), vec![], a_in, b_in, lb, ub).unwrap();
    let s = solve_lp(&p, 1e-8).unwrap();
    println!("status={:?} obj={} infeas={:.6e} kkt={:.3e} iters={}", s.status, s.objective, s.infeasibility, s.kkt_residual, s.iterations);
}