//! Evaluate a geodesic through its closed form and cross-check the
//! endpoint against brute-force integration of the horizontal system.
//!
//! Run with: `cargo run --example geodesic_trajectory`

use carnot_geo::extremal::{control, trajectory, ExtremalParams};
use carnot_geo::oracle::{integrate, IntegratorConfig};

fn main() {
    // Two rotating pairs on the standard frame, frequencies 2*phi.
    let p = ExtremalParams::canonical(1.0, 0.6, 1.9, 0.7).unwrap();
    let speed = (p.r1().powi(2) + p.r2().powi(2)).sqrt();
    println!("sub-Riemannian speed: {speed:.6}");
    println!("control at s = 0: {:?}", control(&p, 0.0).0);

    println!("\n s      |x(s)|      |t(s)|");
    for i in 0..=10 {
        let s = 0.5 * i as f64;
        let g = trajectory(&p, s);
        println!("{s:4.1}  {:10.6}  {:10.6}", g.x.norm(), g.t.norm());
    }

    // The closed form is the flow of dx = u ds, dt = 1/2 x wedge u ds.
    let cfg = IntegratorConfig {
        step: 1e-4,
        max_time: 10.0,
    };
    let s_end = 4.0;
    let closed = trajectory(&p, s_end);
    let stepped = integrate(&p, s_end, &cfg).unwrap();
    let defect = ((closed.x - stepped.x).norm() + (closed.t - stepped.t).norm()) / closed.norm();
    println!("\nRK4 endpoint defect at s = {s_end}: {defect:.3e} (order step^4)");
}
