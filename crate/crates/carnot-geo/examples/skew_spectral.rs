//! Spectral machinery on bivectors: eigenvalue pairs, invariant planes,
//! Pfaffian, and the plane-rotation form of the exponential.
//!
//! Run with: `cargo run --example skew_spectral`

use carnot_geo::algebra::{pfaffian, skew_exp, spectral, wedge, Bivector4, Point4};

fn main() {
    let u = Point4([0.5, 0.5, 0.5, 0.5]);
    let v = Point4([0.5, -0.5, 0.5, -0.5]);
    let tau = wedge(&u, &v).scale(2.0) + Bivector4::basis(0, 3);
    println!("coefficients: {:?}", tau.0);
    println!("pfaffian: {:.6} (nonzero means rank 4)", pfaffian(&tau));

    let sd = spectral(&tau, 1e-10);
    println!(
        "eigenvalues: ±2i·{:.6}, ±2i·{:.6} (flags: zero={}, repeated={})",
        sd.phi1, sd.phi2, sd.zero_eigenvalue, sd.repeated
    );
    println!("plane 1 frame: {:?}", sd.plane1.0 .0);
    println!("               {:?}", sd.plane1.1 .0);
    let recon_err = (sd.reconstruct() - tau).norm();
    println!("reconstruction error: {recon_err:.3e}");

    // e^{-s tau} rotates each invariant plane by angle 2 phi_k s.
    let s = 0.8;
    let rot = skew_exp(&tau, s);
    println!("\ne^(-s tau) at s = {s}:");
    for i in 0..4 {
        println!(
            "  [{:9.6} {:9.6} {:9.6} {:9.6}]",
            rot[(i, 0)],
            rot[(i, 1)],
            rot[(i, 2)],
            rot[(i, 3)]
        );
    }
    let ortho = (rot * rot.transpose() - nalgebra::Matrix4::identity()).norm();
    println!("orthogonality defect: {ortho:.3e}, det = {:.12}", rot.determinant());
}
