//! The sinc-like special functions behind extremal trajectories, with
//! series fallbacks at every removable singularity.
//!
//! The basic family is
//!
//! ```text
//! t(φ) = sin φ / φ
//! u(φ) = (φ - sin φ cos φ) / 4φ²
//! v(φ) = (sin φ - φ cos φ) / 2φ²
//! z(x, y) = (y cos y sin x - x cos x sin y) / 2y(x² - y²)
//! ```
//!
//! `z` is never evaluated through that raw quotient: the product-to-sum
//! identity `y z(x,y) = ¼(t(x-y) - t(x+y)) = x z(y,x)` removes both
//! singular loci `x = ±y` and, combined with a series in the second
//! argument, keeps full precision down to the origin. The limits
//! `z(x,0) = v(x)` and `z(φ,φ) = u(φ)` then hold automatically.
//!
//! `f`, `g`, `h` are the raw trajectory coefficients of the unrotated
//! basis. They exist only to cross-check the change of basis and refuse
//! the neighborhoods of their singular loci instead of implementing
//! fallbacks.
//!
//! `quartic_a`, `quartic_b`, `quartic_d` assemble the quartic whose zeros
//! along an extremal are the candidate cut times.

use crate::{Error, Result};

/// Arguments below this magnitude go through power series.
const SERIES_RADIUS: f64 = 0.5;

/// Second arguments below this magnitude send `z` (and its partials)
/// through the series in the second argument. The plain difference
/// quotient loses ~4 digits once both arguments are this small.
const Z_SERIES_RADIUS: f64 = 0.05;

/// `f`/`g`/`h` refuse arguments closer than this to their singular loci.
const CROSS_CHECK_GUARD: f64 = 1e-3;

/// An ordered pair of angular parameters, `φ₁ ≥ φ₂ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiPair {
    phi1: f64,
    phi2: f64,
}

impl PhiPair {
    pub fn new(phi1: f64, phi2: f64) -> Result<PhiPair> {
        if !(phi1.is_finite() && phi2.is_finite()) || phi2 < 0.0 || phi1 < phi2 {
            return Err(Error::InvalidParams(format!(
                "need phi1 >= phi2 >= 0, got ({phi1}, {phi2})"
            )));
        }
        Ok(PhiPair { phi1, phi2 })
    }

    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    pub fn phi2(&self) -> f64 {
        self.phi2
    }

    pub fn scaled(&self, s: f64) -> PhiPair {
        PhiPair {
            phi1: self.phi1 * s,
            phi2: self.phi2 * s,
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn binomial(n: usize, j: usize) -> f64 {
    factorial(n) / (factorial(j) * factorial(n - j))
}

/// n-th derivative of `sin φ / φ` by the Leibniz rule on `sin φ · φ⁻¹`.
fn sinc_deriv_closed(n: usize, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let sin_derivs = [s, c, -s, -c];
    let mut sum = 0.0;
    for j in 0..=n {
        let m = n - j;
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += binomial(n, j) * sin_derivs[j % 4] * sign * factorial(m) * phi.powi(-(m as i64 as i32) - 1);
    }
    sum
}

/// n-th derivative of `sin φ / φ` from `Σ (-1)^k φ^{2k}/(2k+1)!`,
/// truncated below 1e-18.
fn sinc_deriv_series(n: usize, phi: f64) -> f64 {
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut inv_fact = 1.0; // 1/(2k+1)!
    for k in 0..40usize {
        if 2 * k >= n {
            let mut fall = 1.0;
            for i in 0..n {
                fall *= (2 * k - i) as f64;
            }
            let term = sign * inv_fact * fall * phi.powi((2 * k - n) as i32);
            sum += term;
            if 2 * k > n + 4 && term.abs() < 1e-18 * (1.0 + sum.abs()) {
                break;
            }
        }
        sign = -sign;
        inv_fact /= ((2 * k + 2) * (2 * k + 3)) as f64;
    }
    sum
}

/// n-th derivative of `t(φ) = sin φ / φ`, entire in φ.
///
/// The Leibniz closed form cancels to `n! φ^-(n+1)` times machine epsilon
/// absolutely, so the series radius grows with the derivative order.
pub fn t_deriv(n: usize, phi: f64) -> f64 {
    if phi.abs() < SERIES_RADIUS + 0.15 * n as f64 {
        sinc_deriv_series(n, phi)
    } else {
        sinc_deriv_closed(n, phi)
    }
}

/// `t(φ) = sin φ / φ`, with `t(0) = 1`.
pub fn t(phi: f64) -> f64 {
    t_deriv(0, phi)
}

/// `u(φ) = (φ - sin φ cos φ) / 4φ²`, with `u(0) = 0`.
pub fn u(phi: f64) -> f64 {
    if phi.abs() < SERIES_RADIUS {
        // Σ_{k≥1} (-1)^{k+1} 4^{k-1} φ^{2k-1}/(2k+1)!
        let mut sum = 0.0;
        let mut sign = 1.0;
        let mut pow4 = 1.0;
        let mut inv_fact = 1.0 / 6.0; // 1/(2k+1)! at k = 1
        for k in 1..40usize {
            let term = sign * pow4 * inv_fact * phi.powi(2 * k as i32 - 1);
            sum += term;
            if term.abs() < 1e-18 * (1.0 + sum.abs()) {
                break;
            }
            sign = -sign;
            pow4 *= 4.0;
            inv_fact /= ((2 * k + 2) * (2 * k + 3)) as f64;
        }
        sum
    } else {
        (phi - phi.sin() * phi.cos()) / (4.0 * phi * phi)
    }
}

/// `v(φ) = (sin φ - φ cos φ) / 2φ² = -t'(φ)/2`, with `v(0) = 0`.
pub fn v(phi: f64) -> f64 {
    -0.5 * t_deriv(1, phi)
}

/// `z(x, y)` through the stable product-to-sum form.
pub fn z(x: f64, y: f64) -> f64 {
    if y.abs() <= Z_SERIES_RADIUS {
        z_series_second(x, y)
    } else if x.abs() <= Z_SERIES_RADIUS {
        // y z(x,y) = x z(y,x)
        (x / y) * z_series_second(y, x)
    } else {
        (t(x - y) - t(x + y)) / (4.0 * y)
    }
}

/// Expansion of `z(x, ·)` around a small second argument:
/// `z(x,y) = -½ [t'(x) + t'''(x) y²/3! + t⁽⁵⁾(x) y⁴/5! + t⁽⁷⁾(x) y⁶/7!]`.
fn z_series_second(x: f64, y: f64) -> f64 {
    let y2 = y * y;
    -0.5 * (t_deriv(1, x)
        + t_deriv(3, x) * y2 / 6.0
        + t_deriv(5, x) * y2 * y2 / 120.0
        + t_deriv(7, x) * y2 * y2 * y2 / 5040.0)
}

/// Partial derivatives `(∂₁z, ∂₂z)(x, y)`.
///
/// Away from small `y` these come from differentiating the product-to-sum
/// form; below the series radius the expansion above is differentiated
/// term by term. Either way they match central finite differences of `z`.
pub fn z_partials(x: f64, y: f64) -> (f64, f64) {
    if y.abs() <= Z_SERIES_RADIUS {
        let y2 = y * y;
        let d1 = -0.5
            * (t_deriv(2, x)
                + t_deriv(4, x) * y2 / 6.0
                + t_deriv(6, x) * y2 * y2 / 120.0);
        let d2 = -0.5
            * (t_deriv(3, x) * y / 3.0
                + t_deriv(5, x) * y2 * y / 30.0
                + t_deriv(7, x) * y2 * y2 * y / 840.0);
        (d1, d2)
    } else {
        let d1 = (v(x + y) - v(x - y)) / (2.0 * y);
        let d2 = (0.5 * (v(x - y) + v(x + y)) - z(x, y)) / y;
        (d1, d2)
    }
}

fn cross_check_domain(x: f64, y: f64) -> Result<()> {
    if x.min(y) < CROSS_CHECK_GUARD || (x - y).abs() < CROSS_CHECK_GUARD {
        return Err(Error::Domain(format!(
            "cross-check functions need min(x,y) >= {CROSS_CHECK_GUARD} and |x-y| >= {CROSS_CHECK_GUARD}, got ({x}, {y})"
        )));
    }
    Ok(())
}

/// Raw-basis trajectory coefficient `f(x, y)`; cross-check only.
pub fn f(x: f64, y: f64) -> Result<f64> {
    cross_check_domain(x, y)?;
    let (p, m) = (x + y, x - y);
    Ok(0.125
        * ((1.0 / x - 1.0 / y) * p.sin().powi(2) / p
            + (1.0 / x + 1.0 / y) * m.sin().powi(2) / m))
}

/// Raw-basis trajectory coefficient `g(x, y)`; cross-check only.
pub fn g(x: f64, y: f64) -> Result<f64> {
    cross_check_domain(x, y)?;
    let (p, m) = (x + y, x - y);
    Ok(0.125
        * ((1.0 / x + 1.0 / y) * m.sin() * m.cos() / m
            + (1.0 / y - 1.0 / x) * p.sin() * p.cos() / p
            - 2.0 * x.sin() * x.cos() / (x * y)))
}

/// Raw-basis trajectory coefficient `h(x, y)`; cross-check only.
pub fn h(x: f64, y: f64) -> Result<f64> {
    cross_check_domain(x, y)?;
    let (p, m) = (x + y, x - y);
    Ok(0.125
        * ((1.0 / x + 1.0 / y) * m.sin().powi(2) / m
            - (1.0 / x - 1.0 / y) * p.sin().powi(2) / p
            + 2.0 * (y.sin().powi(2) - x.sin().powi(2)) / (x * y)))
}

/// Quartic coefficient `a(x, y) = t(x) u(x) (t(x) z(x,y) - t(y) u(x))`.
pub fn quartic_a(x: f64, y: f64) -> f64 {
    t(x) * u(x) * (t(x) * z(x, y) - t(y) * u(x))
}

/// Quartic coefficient `b(x, y) = t(y) z(x,y) (t(x) z(x,y) - t(y) u(x))`.
pub fn quartic_b(x: f64, y: f64) -> f64 {
    t(y) * z(x, y) * (t(x) * z(x, y) - t(y) * u(x))
}

/// The scanned quartic
/// `d(s) = a(φ₁s,φ₂s) r₁⁴ + [b(φ₁s,φ₂s) - b(φ₂s,φ₁s)] r₁²r₂² - a(φ₂s,φ₁s) r₂⁴`,
/// whose zeros along a generic extremal are the candidate cut times.
pub fn quartic_d(s: f64, r1: f64, r2: f64, phi1: f64, phi2: f64) -> f64 {
    let (x, y) = (phi1 * s, phi2 * s);
    let r1sq = r1 * r1;
    let r2sq = r2 * r2;
    quartic_a(x, y) * r1sq * r1sq + (quartic_b(x, y) - quartic_b(y, x)) * r1sq * r2sq
        - quartic_a(y, x) * r2sq * r2sq
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn t_exact_points() {
        assert!(t(PI).abs() < 1e-15);
        assert_relative_eq!(t(PI / 2.0), 2.0 / PI, epsilon = 1e-15);
        assert_eq!(t(0.0), 1.0);
    }

    #[test]
    fn u_v_exact_points() {
        assert_relative_eq!(u(PI), 1.0 / (4.0 * PI), epsilon = 1e-15);
        assert_relative_eq!(v(PI), 1.0 / (2.0 * PI), epsilon = 1e-15);
        assert_eq!(u(0.0), 0.0);
        assert_eq!(v(0.0), 0.0);
    }

    #[test]
    fn u_v_slope_at_origin() {
        // u(φ)/φ and v(φ)/φ approach 1/6 with O(φ²) corrections.
        for &phi in &[1e-8, 1e-4, 1e-2] {
            assert!((u(phi) / phi - 1.0 / 6.0).abs() <= 0.05 * phi * phi + 1e-13);
            assert!((v(phi) / phi - 1.0 / 6.0).abs() <= 0.05 * phi * phi + 1e-13);
        }
    }

    #[test]
    fn series_and_closed_branches_agree_on_annulus() {
        // Each derivative order switches branch at its own radius; compare
        // both evaluations across that radius, with the closed branch
        // charged its cancellation level n!·φ^-(n+1)·ε.
        for n in 0..=7usize {
            let radius = 0.5 + 0.15 * n as f64;
            for i in 0..=20 {
                let phi = radius - 0.05 + 0.005 * i as f64;
                let a = sinc_deriv_series(n, phi);
                let b = sinc_deriv_closed(n, phi);
                let cond = factorial(n) * phi.powi(-(n as i32) - 1);
                let tol = 5e-14 * (1.0 + cond) + 1e-12 * b.abs();
                assert!((a - b).abs() <= tol, "n={n} phi={phi}: {a} vs {b}");
            }
        }
        for i in 0..=20 {
            let phi = 0.45 + 0.005 * i as f64;
            let direct = (phi - phi.sin() * phi.cos()) / (4.0 * phi * phi);
            assert_relative_eq!(u(phi), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn z_reference_value() {
        // z(π, π/2) = 4/(3π²)
        assert_relative_eq!(z(PI, PI / 2.0), 4.0 / (3.0 * PI * PI), epsilon = 1e-13);
    }

    #[test]
    fn z_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = rng.gen_range(0.01..30.0);
            // z(x, y) -> v(x) as y -> 0
            assert!((z(x, 1e-5) - v(x)).abs() < 1e-9, "x={x}");
            assert!((z(x, 1e-9) - v(x)).abs() < 1e-12, "x={x}");
            // z(y, x) -> 0 as y -> 0
            assert!(z(1e-9, x).abs() < 1e-9, "x={x}");
            // z(φ, φ) = u(φ)
            assert!((z(x, x) - u(x)).abs() < 1e-13 * (1.0 + u(x).abs()), "x={x}");
        }
    }

    #[test]
    fn z_product_to_sum_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for i in 0..100_000 {
            let (x, y) = if i % 10 == 0 {
                // Force the near-diagonal region.
                let x: f64 = rng.gen_range(0.001..50.0);
                (x, x + rng.gen_range(-1e-3..1e-3))
            } else {
                (rng.gen_range(0.0..50.0), rng.gen_range(1e-6..50.0))
            };
            let zv = z(x, y);
            let rhs = 0.25 * (t(x - y) - t(x + y));
            assert!(
                (y * zv - rhs).abs() <= 1e-12 * (1.0 + zv.abs()),
                "({x},{y}): {} vs {}",
                y * zv,
                rhs
            );
            // x z(y,x) = y z(x,y)
            let sym = x * z(y, x);
            assert!(
                (sym - y * zv).abs() <= 1e-12 * (1.0 + (y * zv).abs()),
                "({x},{y})"
            );
        }
    }

    #[test]
    fn z_partials_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 1e-5;
        for _ in 0..2000 {
            let x = rng.gen_range(0.1..20.0);
            let y = rng.gen_range(0.1..20.0);
            let (d1, d2) = z_partials(x, y);
            let fd1 = (z(x + h, y) - z(x - h, y)) / (2.0 * h);
            let fd2 = (z(x, y + h) - z(x, y - h)) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-6, "d1 at ({x},{y}): {d1} vs {fd1}");
            assert!((d2 - fd2).abs() < 1e-6, "d2 at ({x},{y}): {d2} vs {fd2}");
        }
    }

    #[test]
    fn z_partial_reference_value() {
        // Frozen from a 50-digit evaluation of the symbolic derivative.
        let (d1, d2) = z_partials(PI, PI / 2.0);
        assert_relative_eq!(d1, -0.07167007651822109, epsilon = 1e-13);
        assert_relative_eq!(d2, -0.028668030607288435, epsilon = 1e-13);
    }

    #[test]
    fn z_partial_chain_rule_identity() {
        // ∂x[y z(x,y)] = ¼(t'(x-y) - t'(x+y))
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..2000 {
            let x = rng.gen_range(0.05..30.0);
            let y = rng.gen_range(0.05..30.0);
            let (d1, _) = z_partials(x, y);
            let lhs = y * d1;
            let rhs = 0.25 * (t_deriv(1, x - y) - t_deriv(1, x + y));
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "({x},{y})");
        }
    }

    #[test]
    fn cross_check_functions_refuse_singular_neighborhoods() {
        assert!(f(1.0, 1.0 + 1e-4).is_err());
        assert!(g(1e-4, 1.0).is_err());
        assert!(h(1.0, 1e-4).is_err());
        assert!(f(2.0, 1.0).is_ok());
    }

    #[test]
    fn cross_check_limits_toward_zero_second_argument() {
        // f(x,y) -> sin(x) v(x), g(x,y) -> 0, h(x,y) -> 0 as y -> 0.
        for &x in &[1.3f64, 2.0, 3.5, 5.7] {
            let lim = x.sin() * v(x);
            let mut last_err = f64::INFINITY;
            for &y in &[0.1, 0.02, 0.004] {
                let err = (f(x, y).unwrap() - lim).abs();
                assert!(err < last_err, "f not converging at x={x}, y={y}");
                last_err = err;
            }
            assert!(last_err < 5e-3);
            assert!(g(x, 0.004).unwrap().abs() < 5e-3);
            assert!(h(x, 0.004).unwrap().abs() < 5e-3);
        }
    }

    #[test]
    fn lemma_identities_after_clearing_denominators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let p1: f64 = rng.gen_range(0.01..30.0);
            let p2: f64 = rng.gen_range(0.01..30.0);
            if (p1 - p2).abs() < 1e-3 || p1.min(p2) < 1e-3 {
                continue;
            }
            let (s1, c1) = p1.sin_cos();
            let (s2, c2) = p2.sin_cos();
            let lead = 2.0 * p1 * p2 * (p1 * p1 - p2 * p2);
            let checks = [
                (
                    lead * f(p1, p2).unwrap(),
                    -(p1 * p1 + p2 * p2) * s1 * c1 * s2 * c2
                        + p1 * p2 * (s1 * s1 * c2 * c2 + c1 * c1 * s2 * s2),
                ),
                (
                    lead * g(p1, p2).unwrap(),
                    -p1 * p1 * s1 * c1 * s2 * s2 + p2 * p2 * s1 * c1 * c2 * c2
                        - p1 * p2 * (c1 * c1 - s1 * s1) * s2 * c2,
                ),
                (
                    lead * g(p2, p1).unwrap(),
                    -p1 * p1 * c1 * c1 * s2 * c2
                        + p2 * p2 * s1 * s1 * s2 * c2
                        + p1 * p2 * s1 * c1 * (c2 * c2 - s2 * s2),
                ),
                (
                    lead * h(p1, p2).unwrap(),
                    p1 * p1 * c1 * c1 * s2 * s2 + p2 * p2 * s1 * s1 * c2 * c2
                        - 2.0 * p1 * p2 * s1 * c1 * s2 * c2,
                ),
            ];
            for (k, (lhs, rhs)) in checks.iter().enumerate() {
                assert!(
                    (lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()),
                    "identity {k} at ({p1},{p2}): {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn u_positive_on_range() {
        for i in 1..=100_000 {
            let phi = 100.0 * i as f64 / 100_000.0;
            assert!(u(phi) > 0.0, "u({phi}) = {}", u(phi));
        }
    }

    #[test]
    fn taylor_leading_term_near_origin() {
        // u(x)u(y) - z(x,y)z(y,x) = xy(x²-y²)²/18900 + o(|(x,y)|⁷)
        let eps = 1e-2;
        let (x, y) = (2.0 * eps, eps);
        let lhs = u(x) * u(y) - z(x, y) * z(y, x);
        let lead = x * y * (x * x - y * y).powi(2) / 18900.0;
        assert_relative_eq!(lhs / lead, 1.0, epsilon = 1e-2);
    }

    #[test]
    fn quartic_a_degenerate_zeros() {
        for &y in &[0.3, 1.0, 2.5] {
            assert!(quartic_a(PI, y).abs() < 1e-16, "a(pi,{y})");
        }
        for &x in &[0.7, 1.9, 4.1] {
            let scale = (t(x) * u(x)).abs() * (t(x).abs() * z(x, x).abs() + u(x).abs());
            assert!(quartic_a(x, x).abs() <= 1e-15 * (1.0 + scale), "a({x},{x})");
        }
    }

    #[test]
    fn quartic_b_reference_value() {
        assert_relative_eq!(
            quartic_b(PI, PI / 2.0),
            -4.0 / (3.0 * PI.powi(5)),
            epsilon = 1e-13
        );
    }

    #[test]
    fn quartic_d_lattice_zeros_and_s1_specialization() {
        // sin(φ₁s) = sin(φ₂s) = 0 kills every term.
        assert!(quartic_d(PI, 1.3, 0.7, 2.0, 1.0).abs() < 1e-15);
        assert!(quartic_d(2.0 * PI, 0.9, 1.1, 3.0, 1.0).abs() < 1e-15);
        // s = 1 is the plain quartic in (r₁², r₂²).
        let (r1, r2, p1, p2) = (1.2f64, 0.8f64, 2.7, 1.1);
        let direct = quartic_a(p1, p2) * r1.powi(4)
            + (quartic_b(p1, p2) - quartic_b(p2, p1)) * r1 * r1 * r2 * r2
            - quartic_a(p2, p1) * r2.powi(4);
        assert_relative_eq!(quartic_d(1.0, r1, r2, p1, p2), direct, epsilon = 1e-14);
    }

    #[test]
    fn phi_pair_ordering() {
        assert!(PhiPair::new(2.0, 1.0).is_ok());
        assert!(PhiPair::new(1.0, 2.0).is_err());
        assert!(PhiPair::new(1.0, -0.5).is_err());
        assert_eq!(PhiPair::new(3.0, 1.5).unwrap().scaled(2.0).phi1(), 6.0);
    }

    mod properties {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn product_to_sum_everywhere(x in 0.0f64..50.0, y in 1e-6f64..50.0) {
                let zv = z(x, y);
                let rhs = 0.25 * (t(x - y) - t(x + y));
                prop_assert!((y * zv - rhs).abs() <= 1e-12 * (1.0f64).max(zv.abs()));
                prop_assert!((x * z(y, x) - y * zv).abs() <= 1e-12 * (1.0f64).max((y * zv).abs()));
            }

            #[test]
            fn quartic_swaps_sign_under_index_exchange(
                r1 in 0.1f64..3.0,
                r2 in 0.1f64..3.0,
                phi1 in 0.05f64..8.0,
                phi2 in 0.05f64..8.0,
                s in 0.1f64..5.0,
            ) {
                let d = quartic_d(s, r1, r2, phi1, phi2);
                let swapped = quartic_d(s, r2, r1, phi2, phi1);
                let scale = quartic_a(phi1 * s, phi2 * s).abs() * r1.powi(4)
                    + quartic_a(phi2 * s, phi1 * s).abs() * r2.powi(4)
                    + 1e-6;
                prop_assert!((d + swapped).abs() <= 1e-12 * scale.max(d.abs()));
            }
        }
    }
}
