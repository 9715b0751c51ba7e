//! Conjugate-point detection along an extremal: the two matrix factors,
//! the quartic, and the zero scan bracketing candidate cut times.
//!
//! Run with: `cargo run --example conjugate_scan`

use carnot_geo::conjugacy::{find_d_zeros, is_conjugate, s_star, SINGULARITY_TOL};
use carnot_geo::extremal::ExtremalParams;

fn main() {
    let p = ExtremalParams::canonical(1.0, 1.0, std::f64::consts::SQRT_2, 1.0).unwrap();

    println!(" s     det M1        det M2        sigma_full   conj");
    for i in 1..=12 {
        let s = 0.5 * i as f64;
        let r = is_conjugate(&p, s, SINGULARITY_TOL).unwrap();
        println!(
            "{s:4.1}  {:12.4e}  {:12.4e}  {:10.3e}  {}",
            r.det_m1,
            r.det_m2,
            r.sigma_min_full,
            if r.is_conjugate() { "yes" } else { "" }
        );
    }

    // Zeros of the scanned quartic past the rank-4 threshold time.
    let s0 = s_star(p.phi1, p.phi2).unwrap();
    let zeros = find_d_zeros(&p, s0, s0 + 30.0, 30_000).unwrap();
    println!("\nrank-4 threshold s* = {s0:.6}");
    println!("quartic zeros in [s*, s*+30]:");
    for z in &zeros {
        let r = is_conjugate(&p, *z, SINGULARITY_TOL).unwrap();
        println!("  s = {z:<12.8} sigma(M1) = {:.3e}", r.sigma_min_m1);
    }
}
