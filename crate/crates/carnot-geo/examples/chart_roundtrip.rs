//! The three coordinate systems of an extremal: raw pairs (a, b), the
//! frame chart, and the initial covector, with exact round trips.
//!
//! Run with: `cargo run --example chart_roundtrip`

use carnot_geo::extremal::{
    chart_endpoint, from_covector, to_covector, to_frame_chart, trajectory, ExtremalParams,
};

fn main() {
    let p = ExtremalParams::canonical(1.2, 0.8, 1.5, 0.6).unwrap();
    println!("genericity: {:?}", p.genericity());

    // Frame chart: orthonormal frame plus (r1, r2, phi1, phi2).
    let chart = to_frame_chart(&p).unwrap();
    println!(
        "chart coordinates: r = ({}, {}), phi = ({}, {})",
        chart.r1, chart.r2, chart.phi1, chart.phi2
    );
    let gamma = chart_endpoint(&chart);
    let endpoint = trajectory(&p, 1.0);
    println!(
        "chart endpoint matches trajectory(1): {:.3e}",
        (gamma.x - endpoint.x).norm() + (gamma.t - endpoint.t).norm()
    );

    // Covector chart: xi = a1 + a2, tau with eigenvalues ±2i·phi_k.
    let c = to_covector(&p).unwrap();
    println!("\nxi  = {:?}", c.xi.0);
    println!("tau = {:?}", c.tau.0);
    let q = from_covector(&c, 1e-9).unwrap();
    let err = (q.a1 - p.a1).norm()
        + (q.b1 - p.b1).norm()
        + (q.a2 - p.a2).norm()
        + (q.b2 - p.b2).norm()
        + (q.phi1 - p.phi1).abs()
        + (q.phi2 - p.phi2).abs();
    println!("covector round-trip error: {err:.3e}");
}
