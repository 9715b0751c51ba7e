//! Validate the analytic 10x10 differential of the endpoint chart
//! against central finite differences, and watch its smallest singular
//! value dip at a conjugate point.
//!
//! Run with: `cargo run --example jacobian_check`

use carnot_geo::conjugacy::full_differential_scaled;
use carnot_geo::extremal::{to_frame_chart, ExtremalParams};
use carnot_geo::oracle::{exp_singularity_probe, fd_jacobian};

fn main() {
    let p = ExtremalParams::canonical(1.0, 0.9, 2.2, 1.3).unwrap();
    let chart = to_frame_chart(&p).unwrap();

    let analytic = full_differential_scaled(&chart);
    for h in [1e-3, 1e-4, 1e-5] {
        let fd = fd_jacobian(&chart, h);
        let mut worst = 0.0f64;
        for i in 0..10 {
            for j in 0..10 {
                worst = worst.max((fd[(i, j)] - analytic[(i, j)]).abs());
            }
        }
        println!("h = {h:7.1e}: worst entry gap {worst:.3e} (O(h^2))");
    }

    // The probe dips by orders of magnitude at conjugate times. Here the
    // scaled angles hit (2pi, pi) at s = pi, where the first factor is
    // singular.
    let q = ExtremalParams::canonical(1.0, 1.0, 2.0, 1.0).unwrap();
    println!("\n s      probe sigma_min/sigma_max");
    for &s in &[2.0, 2.8, std::f64::consts::PI, 3.5, 4.0] {
        let probe = exp_singularity_probe(&q, s, 1e-5).unwrap();
        println!("{s:6.4}  {probe:.3e}");
    }
}
