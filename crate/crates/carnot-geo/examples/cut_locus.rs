//! The candidate cut locus: stratum classification, exact vertical
//! distances, rational cut times, and repeated hits along an extremal.
//!
//! Run with: `cargo run --example cut_locus`

use carnot_geo::algebra::{Bivector4, GroupElement, Point4};
use carnot_geo::cutlocus::{
    classify_c4, cut_time_rational, find_c4_hits, rank_and_subgroup, vertical_distance,
    CLASSIFY_TOL,
};
use carnot_geo::extremal::ExtremalParams;

fn main() {
    // Stratum classification of a few points.
    let samples = [
        ("x in one eigenplane", GroupElement::new(
            Point4::basis(0),
            Bivector4::basis(0, 1).scale(2.0) + Bivector4::basis(2, 3),
        )),
        ("equal eigenvalue pairs", GroupElement::new(
            Point4([1.0, 0.0, 1.0, 0.0]),
            Bivector4::basis(0, 1) + Bivector4::basis(2, 3),
        )),
        ("rank 2, x in kernel", GroupElement::new(Point4::basis(0), Bivector4::basis(2, 3))),
        ("x split across planes", GroupElement::new(
            Point4([1.0, 0.0, 1.0, 0.0]),
            Bivector4::basis(0, 1).scale(2.0) + Bivector4::basis(2, 3),
        )),
    ];
    for (label, g) in &samples {
        let c = classify_c4(g, CLASSIFY_TOL);
        let sub = rank_and_subgroup(g, CLASSIFY_TOL);
        println!(
            "{label:26} -> {:?} (lambda = {:.3}, {:.3}; rank {}, in_H {})",
            c.tag, c.lambda1, c.lambda2, sub.rank, sub.in_h
        );
    }

    // Exact distance to vertical points.
    println!("\nd(0, t1 x1^y1 + t2 x2^y2) = sqrt(4 pi max + 8 pi min):");
    for (t1, t2) in [(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)] {
        println!("  ({t1}, {t2}) -> {:.6}", vertical_distance(t1, t2).unwrap());
    }

    // Rational frequency ratio 2: the cut time is exact when the slow
    // radius dominates.
    let p = ExtremalParams::canonical(1.0, 1.0, 2.0, 1.0).unwrap();
    println!("\ncut time for ratio 2/1, r = (1,1): {:?}", cut_time_rational(&p, 2, 1).unwrap());
    let q = ExtremalParams::canonical(2.0, 1.0, 2.0, 1.0).unwrap();
    println!("cut time for ratio 2/1, r = (2,1): {:?}", cut_time_rational(&q, 2, 1).unwrap());

    // Every non-rectilinear extremal meets the candidate set over and
    // over; list the first few hits for an irrational ratio.
    let irr = ExtremalParams::canonical(1.0, 1.0, std::f64::consts::SQRT_2, 1.0).unwrap();
    let hits = find_c4_hits(&irr, 20.0, 1e-3, None).unwrap();
    println!("\nhits along the (sqrt2, 1) extremal up to s = 20:");
    for h in hits.iter().take(8) {
        println!("  s = {:<11.6} {:?} (rank {})", h.s, h.stratum.tag, h.rank_t);
    }
}
