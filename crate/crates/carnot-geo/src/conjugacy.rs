//! Conjugate-point detection along generic extremals.
//!
//! A point `Γ(u,v,r,φ)` is conjugate to the origin exactly when the 10x10
//! differential of the endpoint map in the moving `(α, β)` basis is
//! singular, which factorizes into a 4x4 block `M1` and a 6x6 block `M2`.
//! `det M1 = 0` is further equivalent to the span condition
//! `t²x ∈ span{x}` and to the quartic
//!
//! ```text
//! a(φ₁,φ₂) r₁⁴ + [b(φ₁,φ₂) - b(φ₂,φ₁)] r₁²r₂² - a(φ₂,φ₁) r₂⁴ = 0,
//! ```
//!
//! whose zeros along an extremal ([`find_d_zeros`]) are the candidate
//! hits of the conjectured cut locus. Time-s conjugacy reduces to the
//! time-1 matrices through the reparametrization `(r, φ) -> (sr, sφ)`.
//!
//! Whether a detected zero is the *first* conjugate point is not decided
//! here; reports list all bracketed zeros in order.

use nalgebra::{Matrix4, SMatrix};

use crate::algebra::{pfaffian, Bivector4, Point4};
use crate::extremal::{trajectory, ExtremalParams, FrameChart};
use crate::specfun;
use crate::{Error, Result};

/// Relative singular-value threshold declaring a matrix singular.
/// Determinants of 6x6 trig-entry matrices underflow; relative singular
/// values are scale-free.
pub const SINGULARITY_TOL: f64 = 1e-8;

/// Diagnostic record of the conjugacy state at one time along an extremal.
///
/// The `sigma_min_*` fields are relative smallest singular values
/// (`σ_min/σ_max`) of the corresponding matrices at the scaled parameters.
#[derive(Debug, Clone)]
pub struct ConjugacyReport {
    pub s: f64,
    pub det_m1: f64,
    pub det_m2: f64,
    /// Quartic residual at the scaled parameters, `s⁴·d(s)`.
    pub quartic_d: f64,
    pub sigma_min_m1: f64,
    pub sigma_min_m2: f64,
    pub sigma_min_full: f64,
    /// Rank of the vertical component t(s).
    pub rank_t: usize,
    pub pfaffian_t: f64,
    pub conjugate_m1: bool,
    pub conjugate_m2: bool,
    pub rank4: bool,
}

impl ConjugacyReport {
    pub fn is_conjugate(&self) -> bool {
        self.conjugate_m1 || self.conjugate_m2
    }
}

/// The 4x4 factor of the conjugacy condition.
pub fn matrix_m1(r1: f64, r2: f64, phi1: f64, phi2: f64) -> Matrix4<f64> {
    let (t1, t2) = (specfun::t(phi1), specfun::t(phi2));
    let (u1, u2) = (specfun::u(phi1), specfun::u(phi2));
    let z12 = specfun::z(phi1, phi2);
    let z21 = specfun::z(phi2, phi1);
    let (r1s, r2s) = (r1 * r1, r2 * r2);
    Matrix4::from_rows(&[
        [-t1, 0.0, -r2s * t2, 0.0].into(),
        [0.0, -t2, 0.0, -r1s * t1].into(),
        [z21, -z12, r2s * u2, -r1s * u1].into(),
        [z12, -z21, -r1s * u1, r2s * u2].into(),
    ])
}

/// The 6x6 factor of the conjugacy condition.
pub fn matrix_m2(r1: f64, r2: f64, phi1: f64, phi2: f64) -> SMatrix<f64, 6, 6> {
    let (t1, t2) = (specfun::t(phi1), specfun::t(phi2));
    let (u1, u2) = (specfun::u(phi1), specfun::u(phi2));
    let (v1, v2) = (specfun::v(phi1), specfun::v(phi2));
    let z12 = specfun::z(phi1, phi2);
    let z21 = specfun::z(phi2, phi1);
    let (dz12_1, dz12_2) = specfun::z_partials(phi1, phi2);
    let (dz21_1, dz21_2) = specfun::z_partials(phi2, phi1);
    let (r1s, r2s) = (r1 * r1, r2 * r2);
    SMatrix::<f64, 6, 6>::from_row_slice(&[
        0.0,
        -r2s * t2,
        t1,
        0.0,
        -2.0 * v1,
        0.0,
        0.0,
        r1s * t1,
        0.0,
        t2,
        0.0,
        -2.0 * v2,
        -r2s * z21,
        -r2s * z12,
        2.0 * u1,
        0.0,
        phi1.cos() / phi1 * v1,
        0.0,
        -r2s * u2,
        r1s * u1,
        z12,
        z12,
        dz12_1,
        dz12_2,
        -r1s * u1,
        r2s * u2,
        -z21,
        -z21,
        -dz21_2,
        -dz21_1,
        r1s * z12,
        r1s * z21,
        0.0,
        2.0 * u2,
        0.0,
        phi2.cos() / phi2 * v2,
    ])
}

/// The 10x10 differential of the endpoint map in the moving basis.
///
/// Row order: `α₁, β₁, α₂, β₂`, then
/// `α₁∧β₁, α₁∧α₂, α₁∧β₂, β₁∧α₂, β₁∧β₂, α₂∧β₂`.
/// Column order: the six frame rotations `u₁v₁, u₂v₂, u₁v₂, u₂v₁, u₁u₂,
/// v₁v₂`, then `∂r₁, ∂r₂, ∂φ₁, ∂φ₂`.
///
/// Positive scale factors `1/r₁`, `1/r₂`, `1/(r₁r₂)` of the columns are
/// dropped since they do not change singularity; [`column_scale_factors`]
/// reinstates them for comparison with finite differences.
#[rustfmt::skip]
pub fn full_differential(chart: &FrameChart) -> SMatrix<f64, 10, 10> {
    let (r1, r2, phi1, phi2) = (chart.r1, chart.r2, chart.phi1, chart.phi2);
    let (t1, t2) = (specfun::t(phi1), specfun::t(phi2));
    let (u1, u2) = (specfun::u(phi1), specfun::u(phi2));
    let (v1, v2) = (specfun::v(phi1), specfun::v(phi2));
    let z12 = specfun::z(phi1, phi2);
    let z21 = specfun::z(phi2, phi1);
    let (dz12_1, dz12_2) = specfun::z_partials(phi1, phi2);
    let (dz21_1, dz21_2) = specfun::z_partials(phi2, phi1);
    let (r1s, r2s) = (r1 * r1, r2 * r2);
    let (cu1, cu2) = (phi1.cos() / phi1 * v1, phi2.cos() / phi2 * v2);
    SMatrix::<f64, 10, 10>::from_row_slice(&[
        // u1v1   u2v2   u1v2       u2v1       u1u2       v1v2       r1        r2        phi1     phi2
        -t1,      0.0,   -r2s * t2, 0.0,       0.0,       0.0,       0.0,      0.0,      0.0,     0.0,     // α₁
        0.0,      0.0,   0.0,       0.0,       0.0,       -r2s * t2, t1,       0.0,      -2.0*v1, 0.0,     // β₁
        0.0,      -t2,   0.0,       -r1s * t1, 0.0,       0.0,       0.0,      0.0,      0.0,     0.0,     // α₂
        0.0,      0.0,   0.0,       0.0,       0.0,       r1s * t1,  0.0,      t2,       0.0,     -2.0*v2, // β₂
        0.0,      0.0,   0.0,       0.0,       -r2s*z21,  -r2s*z12,  2.0 * u1, 0.0,      cu1,     0.0,     // α₁∧β₁
        z21,      -z12,  r2s * u2,  -r1s * u1, 0.0,       0.0,       0.0,      0.0,      0.0,     0.0,     // α₁∧α₂
        0.0,      0.0,   0.0,       0.0,       -r2s*u2,   r1s * u1,  z12,      z12,      dz12_1,  dz12_2,  // α₁∧β₂
        0.0,      0.0,   0.0,       0.0,       -r1s*u1,   r2s * u2,  -z21,     -z21,     -dz21_2, -dz21_1, // β₁∧α₂
        z12,      -z21,  -r1s * u1, r2s * u2,  0.0,       0.0,       0.0,      0.0,      0.0,     0.0,     // β₁∧β₂
        0.0,      0.0,   0.0,       0.0,       r1s * z12, r1s * z21, 0.0,      2.0 * u2, 0.0,     cu2,     // α₂∧β₂
    ])
}

/// The positive column factors dropped from [`full_differential`]. The
/// true differential in the moving basis is the normalized matrix with
/// column `j` multiplied by `factors[j]`.
pub fn column_scale_factors(r1: f64, r2: f64) -> [f64; 10] {
    let inv12 = 1.0 / (r1 * r2);
    [
        1.0,
        1.0,
        inv12,
        inv12,
        inv12,
        inv12,
        1.0 / r1,
        1.0 / r2,
        1.0,
        1.0,
    ]
}

/// [`full_differential`] with the dropped factors reinstated; matches the
/// central finite differences of the endpoint map entry by entry.
pub fn full_differential_scaled(chart: &FrameChart) -> SMatrix<f64, 10, 10> {
    let mut m = full_differential(chart);
    let factors = column_scale_factors(chart.r1, chart.r2);
    for (j, f) in factors.iter().enumerate() {
        for i in 0..10 {
            m[(i, j)] *= f;
        }
    }
    m
}

/// Rows of the 10x10 differential forming `M1` (paired with its first
/// four columns); the complementary rows and columns form `M2`.
pub const M1_ROWS: [usize; 4] = [0, 2, 5, 8];
pub const M2_ROWS: [usize; 6] = [1, 3, 4, 6, 7, 9];

/// Quartic residual at time 1; vanishes exactly where `det M1` does.
pub fn quartic_residual(r1: f64, r2: f64, phi1: f64, phi2: f64) -> f64 {
    specfun::quartic_d(1.0, r1, r2, phi1, phi2)
}

/// Span condition `t²x ∈ span{x}`: true when the component of `t²x`
/// orthogonal to `x` is below `tol` relative to `‖t²x‖`, or when `t²x`
/// is negligible outright.
pub fn span_test(x: &Point4, t: &Bivector4, tol: f64) -> bool {
    let xn = x.norm_squared();
    assert!(xn > 0.0, "span_test requires x != 0");
    let t2x = t.apply(&t.apply(x));
    let floor = tol * t.norm_squared() * x.norm();
    let n = t2x.norm();
    if n <= floor {
        return true;
    }
    let residual = t2x - x.scale(t2x.dot(x) / xn);
    residual.norm() <= tol * n
}

fn sigma_ratio<const R: usize>(m: &SMatrix<f64, R, R>) -> f64 {
    let dm = nalgebra::DMatrix::from_column_slice(R, R, m.as_slice());
    let svd = dm.svd(false, false);
    let max = svd.singular_values.max();
    if max == 0.0 {
        return 0.0;
    }
    let min = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    min / max
}

/// Rank of a bivector from the relative singular values of its matrix
/// view (0, 2 or 4).
pub fn bivector_rank(t: &Bivector4, tol: f64) -> usize {
    let svd = t.matrix().svd(false, false);
    let max = svd.singular_values.max();
    if max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol * max)
        .count()
}

/// Conjugacy diagnostics of `γ(·, p)` at time `s`, through the time-1
/// matrices at the scaled parameters `(s·r, s·φ)`.
pub fn is_conjugate(p: &ExtremalParams, s: f64, tol: f64) -> Result<ConjugacyReport> {
    p.require_generic()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "time must be positive, got {s}"
        )));
    }
    let (r1, r2) = (p.r1() * s, p.r2() * s);
    let (phi1, phi2) = (p.phi1 * s, p.phi2 * s);
    let m1 = matrix_m1(r1, r2, phi1, phi2);
    let m2 = matrix_m2(r1, r2, phi1, phi2);
    let chart = FrameChart::standard(r1, r2, phi1, phi2)?;
    let full = full_differential(&chart);
    let sig1 = sigma_ratio(&m1);
    let sig2 = sigma_ratio(&m2);
    let endpoint = trajectory(p, s);
    let rank_t = bivector_rank(&endpoint.t, tol);
    Ok(ConjugacyReport {
        s,
        det_m1: m1.determinant(),
        det_m2: m2.determinant(),
        quartic_d: quartic_residual(r1, r2, phi1, phi2),
        sigma_min_m1: sig1,
        sigma_min_m2: sig2,
        sigma_min_full: sigma_ratio(&full),
        rank_t,
        pfaffian_t: pfaffian(&endpoint.t),
        conjugate_m1: sig1 <= tol,
        conjugate_m2: sig2 <= tol,
        rank4: rank_t == 4,
    })
}

/// Worker count for grid scans: `CARNOT_GEO_THREADS` when set, otherwise
/// the available parallelism, capped at 8.
pub(crate) fn scan_workers() -> usize {
    std::env::var("CARNOT_GEO_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
                .min(8)
        })
}

/// Bisection refinement of a sign change of `f` on `[a, b]` down to a few
/// ulps in the abscissa.
fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
    }
    0.5 * (a + b)
}

/// All sign-change-bracketed zeros of `s ↦ d(s, p)` on a uniform grid
/// over `[s_min, s_max]` with `grid` intervals, refined by bisection.
/// Tangential (even-order) zeros carry no sign change and may be missed.
///
/// The grid is split into contiguous slabs scanned concurrently (capped
/// by `CARNOT_GEO_THREADS`); every interval is examined exactly once, so
/// the sorted result does not depend on the partitioning.
pub fn find_d_zeros(p: &ExtremalParams, s_min: f64, s_max: f64, grid: usize) -> Result<Vec<f64>> {
    find_d_zeros_with_workers(p, s_min, s_max, grid, scan_workers())
}

/// [`find_d_zeros`] with an explicit worker count; the result must not
/// depend on it.
pub fn find_d_zeros_with_workers(
    p: &ExtremalParams,
    s_min: f64,
    s_max: f64,
    grid: usize,
    workers: usize,
) -> Result<Vec<f64>> {
    p.require_generic()?;
    if !(s_min > 0.0 && s_max > s_min) || grid == 0 {
        return Err(Error::Config(format!(
            "need 0 < s_min < s_max and grid >= 1, got [{s_min}, {s_max}] with grid {grid}"
        )));
    }
    let (r1, r2) = (p.r1(), p.r2());
    let (phi1, phi2) = (p.phi1, p.phi2);
    let d = move |s: f64| specfun::quartic_d(s, r1, r2, phi1, phi2);
    let step = (s_max - s_min) / grid as f64;
    let point = move |i: usize| {
        if i == grid {
            s_max
        } else {
            s_min + i as f64 * step
        }
    };

    let workers = workers.min(grid).max(1);
    let chunk = grid.div_ceil(workers);
    let mut roots: Vec<f64> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(grid);
            if lo >= hi {
                break;
            }
            let d = &d;
            handles.push(scope.spawn(move || {
                let mut found = Vec::new();
                let mut sa = point(lo);
                let mut fa = d(sa);
                for i in lo..hi {
                    let sb = point(i + 1);
                    let fb = d(sb);
                    if fa == 0.0 {
                        found.push(sa);
                    } else if fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
                        found.push(bisect(d, sa, sb, fa));
                    }
                    sa = sb;
                    fa = fb;
                }
                if hi == grid && fa == 0.0 {
                    found.push(sa);
                }
                found
            }));
        }
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    });
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    Ok(roots)
}

/// The time `s*` past which the vertical component of every extremal
/// with these angular parameters has rank 4: the unique root of
/// `g(s) = (φ₁-φ₂)s - 2 - 2/(φ₂ s - 1)` on `s > 1/φ₂`, where `g` is
/// strictly increasing. The returned value satisfies `g(s*) ∈ [0, 1e-9]`,
/// so the rank criterion holds at `s*` itself.
pub fn s_star(phi1: f64, phi2: f64) -> Result<f64> {
    if !(phi2 > 0.0 && phi1 > phi2) {
        return Err(Error::InvalidParams(format!(
            "need 0 < phi2 < phi1, got ({phi1}, {phi2})"
        )));
    }
    let g = |s: f64| (phi1 - phi2) * s - 2.0 - 2.0 / (phi2 * s - 1.0);
    let base = 1.0 / phi2;
    let mut delta = base.max(1.0);
    let mut lo = base + delta;
    while g(lo) >= 0.0 {
        delta *= 0.5;
        lo = base + delta;
        if delta < 1e-300 {
            return Ok(lo);
        }
    }
    let mut hi = lo * 2.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..500 {
        if g(hi) <= 1e-9 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::sample_generic as random_generic;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn m1_singular_when_both_sines_vanish() {
        let det = matrix_m1(1.0, 1.0, 2.0 * PI, PI).determinant();
        assert!(det.abs() < 1e-16, "det = {det}");
    }

    #[test]
    fn det_m1_equals_quartic_residual() {
        // The column reduction of M1 lands exactly on the quartic, so the
        // determinant computed by LU must agree with the composed form.
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..500 {
            let r1 = rng.gen_range(0.2..2.0);
            let r2 = rng.gen_range(0.2..2.0);
            let phi2 = rng.gen_range(0.1..6.0);
            let phi1 = phi2 + rng.gen_range(0.05..6.0);
            let det = matrix_m1(r1, r2, phi1, phi2).determinant();
            let quartic = quartic_residual(r1, r2, phi1, phi2);
            let scale = (specfun::quartic_a(phi1, phi2).abs() * r1.powi(4)
                + specfun::quartic_a(phi2, phi1).abs() * r2.powi(4)
                + 1e-3)
                .max(det.abs());
            assert!(
                (det - quartic).abs() <= 1e-9 * scale,
                "({r1},{r2},{phi1},{phi2}): det {det} vs quartic {quartic}"
            );
        }
    }

    #[test]
    fn reduced_2x2_shares_the_zero_set() {
        // det M1 = -det of the reduced 2x2 whenever some sine is nonzero.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let r1 = rng.gen_range(0.2..2.0);
            let r2 = rng.gen_range(0.2..2.0);
            let phi2 = rng.gen_range(0.1..6.0);
            let phi1 = phi2 + rng.gen_range(0.05..6.0);
            let (t1, t2) = (specfun::t(phi1), specfun::t(phi2));
            let (u1, u2) = (specfun::u(phi1), specfun::u(phi2));
            let z12 = specfun::z(phi1, phi2);
            let z21 = specfun::z(phi2, phi1);
            let (r1s, r2s) = (r1 * r1, r2 * r2);
            let reduced = nalgebra::Matrix2::new(
                r2s * (t2 * z21 - t1 * u2),
                r1s * (t1 * z12 - t2 * u1),
                r2s * t2 * z12 + r1s * t1 * u1,
                r1s * t1 * z21 + r2s * t2 * u2,
            )
            .determinant();
            let det = matrix_m1(r1, r2, phi1, phi2).determinant();
            assert!(
                (det + reduced).abs() <= 1e-9 * (det.abs() + reduced.abs() + 1e-3),
                "({r1},{r2},{phi1},{phi2})"
            );
        }
    }

    #[test]
    fn m2_transcription_at_reference_point() {
        // Keyed-in copy of the displayed 6x6 at (r1,r2,phi1,phi2)=(1,1,2,1).
        let (r1, r2, phi1, phi2) = (1.0, 1.0, 2.0f64, 1.0f64);
        let (t1, t2) = (specfun::t(phi1), specfun::t(phi2));
        let (u1, u2) = (specfun::u(phi1), specfun::u(phi2));
        let (v1, v2) = (specfun::v(phi1), specfun::v(phi2));
        let z12 = specfun::z(phi1, phi2);
        let z21 = specfun::z(phi2, phi1);
        let (d1_12, d2_12) = specfun::z_partials(phi1, phi2);
        let (d1_21, d2_21) = specfun::z_partials(phi2, phi1);
        #[rustfmt::skip]
        let expected = [
            [0.0,  -t2,  t1,       0.0,      -2.0 * v1,              0.0],
            [0.0,   t1,  0.0,      t2,        0.0,                   -2.0 * v2],
            [-z21, -z12, 2.0 * u1, 0.0,       phi1.cos() / phi1 * v1, 0.0],
            [-u2,   u1,  z12,      z12,       d1_12,                  d2_12],
            [-u1,   u2,  -z21,     -z21,      -d2_21,                 -d1_21],
            [z12,   z21, 0.0,      2.0 * u2,  0.0,                    phi2.cos() / phi2 * v2],
        ];
        let m2 = matrix_m2(r1, r2, phi1, phi2);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m2[(i, j)], expected[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn full_differential_block_structure_and_det_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let r1 = rng.gen_range(0.3..2.0);
            let r2 = rng.gen_range(0.3..2.0);
            let phi2 = rng.gen_range(0.1..4.0);
            let phi1 = phi2 + rng.gen_range(0.05..4.0);
            let chart = FrameChart::standard(r1, r2, phi1, phi2).unwrap();
            let full = full_differential(&chart);
            // Columns 1-4 live in the span of the M1 rows and vice versa.
            for j in 0..4 {
                for &i in M2_ROWS.iter() {
                    assert_eq!(full[(i, j)], 0.0, "structural zero ({i},{j})");
                }
            }
            for j in 4..10 {
                for &i in M1_ROWS.iter() {
                    assert_eq!(full[(i, j)], 0.0, "structural zero ({i},{j})");
                }
            }
            let det_full = full.determinant().abs();
            let product = (matrix_m1(r1, r2, phi1, phi2).determinant()
                * matrix_m2(r1, r2, phi1, phi2).determinant())
            .abs();
            assert!(
                (det_full - product).abs() <= 1e-8 * product.max(1e-30),
                "({r1},{r2},{phi1},{phi2}): {det_full} vs {product}"
            );
        }
    }

    #[test]
    fn span_test_examples() {
        let e1 = Point4::basis(0);
        let e12 = Bivector4::basis(0, 1);
        assert!(span_test(&e1, &e12, 1e-8));

        let x = Point4::basis(0) + Point4::basis(2);
        let t = Bivector4::basis(0, 1).scale(2.0) + Bivector4::basis(2, 3);
        assert!(!span_test(&x, &t, 1e-8));
    }

    #[test]
    fn is_conjugate_small_time_clear() {
        let p = ExtremalParams::canonical(1.0, 1.0, 2.0, 1.0).unwrap();
        let report = is_conjugate(&p, 0.3, SINGULARITY_TOL).unwrap();
        assert!(!report.is_conjugate());
        assert!(report.rank4);
    }

    #[test]
    fn is_conjugate_at_double_lattice() {
        // sφ₁ = 2π, sφ₂ = π: both sines vanish and M1 is singular.
        let p = ExtremalParams::canonical(1.0, 1.0, 2.0, 1.0).unwrap();
        let report = is_conjugate(&p, PI, SINGULARITY_TOL).unwrap();
        assert!(report.conjugate_m1);
    }

    #[test]
    fn nongeneric_is_rejected() {
        let p = ExtremalParams::canonical(1.0, 1.0, 2.0, 2.0).unwrap();
        assert!(is_conjugate(&p, 1.0, 1e-8).is_err());
        assert!(find_d_zeros(&p, 0.1, 10.0, 100).is_err());
    }

    #[test]
    fn d_zeros_scan_irrational_sample() {
        let p = ExtremalParams::canonical(1.0, 1.0, std::f64::consts::SQRT_2, 1.0).unwrap();
        let s0 = s_star(p.phi1, p.phi2).unwrap();
        let roots = find_d_zeros(&p, s0, s0 + 40.0, 40_000).unwrap();
        assert!(roots.len() >= 2, "found {}", roots.len());
        // Refined roots sit below 1e-10 of the local scale.
        let d = |s: f64| specfun::quartic_d(s, 1.0, 1.0, p.phi1, p.phi2);
        let h = 40.0 / 40_000.0;
        for &root in &roots {
            let local = d(root - h).abs().max(d(root + h).abs());
            assert!(d(root).abs() <= 1e-10 * local.max(1e-12), "root {root}");
        }
    }

    #[test]
    fn d_zeros_independent_of_partitioning() {
        let p = ExtremalParams::canonical(1.0, 1.0, std::f64::consts::SQRT_2, 1.0).unwrap();
        let s0 = s_star(p.phi1, p.phi2).unwrap();
        let reference = find_d_zeros_with_workers(&p, s0, s0 + 25.0, 25_000, 1).unwrap();
        for workers in [2, 3, 7, 16] {
            let got = find_d_zeros_with_workers(&p, s0, s0 + 25.0, 25_000, workers).unwrap();
            assert_eq!(got, reference, "workers = {workers}");
        }
    }

    #[test]
    fn d_zero_values_at_rational_lattice() {
        // For φ₁/φ₂ = 2 the lattice times kπ/φ₂ annihilate d outright.
        let (r1, r2, phi1, phi2) = (1.3, 0.8, 2.0, 1.0);
        for k in 1..=4 {
            let s = k as f64 * PI;
            assert!(specfun::quartic_d(s, r1, r2, phi1, phi2).abs() < 1e-15);
        }
    }

    #[test]
    fn s_star_contract() {
        let g =
            |phi1: f64, phi2: f64, s: f64| phi1 * s - (2.0 + phi2 * s + 2.0 / (phi2 * s - 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let phi2 = rng.gen_range(0.05..4.0);
            let phi1 = phi2 + rng.gen_range(0.05..4.0);
            let s = s_star(phi1, phi2).unwrap();
            assert!(phi2 * s > 1.0);
            let res = g(phi1, phi2, s);
            assert!((0.0..=1e-9).contains(&res), "residual {res}");
        }
        // At (10, 1) the criterion fails at s = 1, so s* > 1.
        let s = s_star(10.0, 1.0).unwrap();
        assert!(s > 1.0);
    }

    #[test]
    fn s_star_monotone_in_phi1() {
        let mut last = f64::INFINITY;
        for &phi1 in &[1.5, 2.0, 3.0, 5.0, 9.0] {
            let s = s_star(phi1, 1.0).unwrap();
            assert!(s < last, "s*({phi1},1) = {s} not below {last}");
            last = s;
        }
    }

    #[test]
    fn span_test_passes_at_quartic_roots_along_extremals() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let mut confirmed = 0;
        while confirmed < 25 {
            let p = random_generic(&mut rng);
            let s0 = s_star(p.phi1, p.phi2).unwrap();
            let roots = find_d_zeros(&p, s0, s0 + 30.0, 30_000).unwrap();
            for &root in roots.iter().take(3) {
                let g = trajectory(&p, root);
                if bivector_rank(&g.t, 1e-8) == 4 && g.x.norm() > 1e-8 {
                    assert!(span_test(&g.x, &g.t, 1e-6), "span test fails at root {root}");
                    confirmed += 1;
                }
            }
        }
    }

    #[test]
    fn report_sigma_fields_are_relative() {
        let p = ExtremalParams::canonical(1.0, 1.0, 2.0, 1.0).unwrap();
        let r = is_conjugate(&p, 0.4, 1e-8).unwrap();
        for sig in [r.sigma_min_m1, r.sigma_min_m2, r.sigma_min_full] {
            assert!((0.0..=1.0).contains(&sig));
        }
        assert_relative_eq!(r.quartic_d, r.det_m1, epsilon = 1e-12);
    }
}
