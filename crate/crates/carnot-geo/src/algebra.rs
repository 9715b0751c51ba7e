//! Exterior algebra on R^4, the group law, and spectral machinery for
//! 4x4 skew-symmetric matrices.
//!
//! Bivectors are stored as six coefficients on the ordered orthonormal
//! basis `e1∧e2, e1∧e3, e1∧e4, e2∧e3, e2∧e4, e3∧e4`; the matrix view
//! `u∧v ≃ uv^T - vu^T` is computed on demand.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Index pairs (i, j) with i < j for the six bivector basis elements.
pub const BIVECTOR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A vector in R^4.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point4(pub [f64; 4]);

impl Point4 {
    pub const ZERO: Point4 = Point4([0.0; 4]);

    /// Standard basis vector `e_i`, zero-indexed.
    pub fn basis(i: usize) -> Point4 {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Point4(v)
    }

    pub fn dot(&self, other: &Point4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, c: f64) -> Point4 {
        Point4([self.0[0] * c, self.0[1] * c, self.0[2] * c, self.0[3] * c])
    }

    /// Normalized copy; returns `None` for vectors below `floor`.
    pub fn normalized(&self, floor: f64) -> Option<Point4> {
        let n = self.norm();
        (n > floor).then(|| self.scale(1.0 / n))
    }

    pub fn to_na(&self) -> Vector4<f64> {
        Vector4::from_column_slice(&self.0)
    }

    pub fn from_na(v: &Vector4<f64>) -> Point4 {
        Point4([v[0], v[1], v[2], v[3]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Add for Point4 {
    type Output = Point4;
    fn add(self, rhs: Point4) -> Point4 {
        Point4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Point4 {
    type Output = Point4;
    fn sub(self, rhs: Point4) -> Point4 {
        Point4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Point4 {
    type Output = Point4;
    fn neg(self) -> Point4 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Point4 {
    type Output = Point4;
    fn mul(self, c: f64) -> Point4 {
        self.scale(c)
    }
}

/// An element of Λ²R^4, identified with a 4x4 skew-symmetric matrix.
///
/// The six coefficients live on the orthonormal basis listed in
/// [`BIVECTOR_PAIRS`] order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bivector4(pub [f64; 6]);

impl Bivector4 {
    pub const ZERO: Bivector4 = Bivector4([0.0; 6]);

    /// Basis bivector `e_i ∧ e_j`, zero-indexed, i < j.
    pub fn basis(i: usize, j: usize) -> Bivector4 {
        let k = BIVECTOR_PAIRS
            .iter()
            .position(|&p| p == (i, j))
            .expect("basis requires i < j < 4");
        let mut c = [0.0; 6];
        c[k] = 1.0;
        Bivector4(c)
    }

    /// Matrix view: skew-symmetric with `m[i][j]` the coefficient on
    /// `e_i ∧ e_j` for i < j.
    pub fn matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (k, &(i, j)) in BIVECTOR_PAIRS.iter().enumerate() {
            m[(i, j)] = self.0[k];
            m[(j, i)] = -self.0[k];
        }
        m
    }

    /// Coefficients of the skew part of `m`. Exact inverse of [`matrix`]
    /// on skew-symmetric input.
    ///
    /// [`matrix`]: Bivector4::matrix
    pub fn from_matrix(m: &Matrix4<f64>) -> Bivector4 {
        Bivector4(std::array::from_fn(|k| {
            let (i, j) = BIVECTOR_PAIRS[k];
            0.5 * (m[(i, j)] - m[(j, i)])
        }))
    }

    /// Inner product making the `e_i ∧ e_j` an orthonormal system.
    pub fn dot(&self, other: &Bivector4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, c: f64) -> Bivector4 {
        Bivector4(std::array::from_fn(|k| self.0[k] * c))
    }

    /// Action on a vector through the matrix view.
    pub fn apply(&self, v: &Point4) -> Point4 {
        Point4::from_na(&(self.matrix() * v.to_na()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Add for Bivector4 {
    type Output = Bivector4;
    fn add(self, rhs: Bivector4) -> Bivector4 {
        Bivector4(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl AddAssign for Bivector4 {
    fn add_assign(&mut self, rhs: Bivector4) {
        for k in 0..6 {
            self.0[k] += rhs.0[k];
        }
    }
}

impl Sub for Bivector4 {
    type Output = Bivector4;
    fn sub(self, rhs: Bivector4) -> Bivector4 {
        Bivector4(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Neg for Bivector4 {
    type Output = Bivector4;
    fn neg(self) -> Bivector4 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Bivector4 {
    type Output = Bivector4;
    fn mul(self, c: f64) -> Bivector4 {
        self.scale(c)
    }
}

/// Wedge product `u ∧ v`, the bivector with matrix view `uv^T - vu^T`.
pub fn wedge(u: &Point4, v: &Point4) -> Bivector4 {
    Bivector4(std::array::from_fn(|k| {
        let (i, j) = BIVECTOR_PAIRS[k];
        u.0[i] * v.0[j] - u.0[j] * v.0[i]
    }))
}

/// Pfaffian `t12 t34 - t13 t24 + t14 t23`; its square is the determinant
/// of the matrix view, so it is nonzero exactly on rank-4 bivectors.
pub fn pfaffian(t: &Bivector4) -> f64 {
    let c = &t.0;
    c[0] * c[5] - c[1] * c[4] + c[2] * c[3]
}

/// A group element (x, t) of the step-2 group.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupElement {
    pub x: Point4,
    pub t: Bivector4,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        x: Point4::ZERO,
        t: Bivector4::ZERO,
    };

    pub fn new(x: Point4, t: Bivector4) -> GroupElement {
        GroupElement { x, t }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            x: -self.x,
            t: -self.t,
        }
    }

    /// Norm of the pair (x, t) in the product inner product.
    pub fn norm(&self) -> f64 {
        (self.x.norm_squared() + self.t.norm_squared()).sqrt()
    }
}

/// Group law `(x,t)·(ξ,τ) = (x+ξ, t+τ+½ x∧ξ)`.
pub fn group_mul(p: &GroupElement, q: &GroupElement) -> GroupElement {
    GroupElement {
        x: p.x + q.x,
        t: p.t + q.t + wedge(&p.x, &q.x).scale(0.5),
    }
}

/// Spectral decomposition of a skew-symmetric matrix: eigenvalues
/// `±2iφ₁, ±2iφ₂` with `φ₁ ≥ φ₂ ≥ 0` and orthonormal plane frames
/// `(x₁,y₁), (x₂,y₂)` such that `τ = 2φ₁ x₁∧y₁ + 2φ₂ x₂∧y₂`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub phi1: f64,
    pub phi2: f64,
    pub plane1: (Point4, Point4),
    pub plane2: (Point4, Point4),
    /// `φ₂ < tol`: the matrix has rank ≤ 2.
    pub zero_eigenvalue: bool,
    /// `φ₁ - φ₂ < tol`: the eigenvalue pairs coincide and the planes are
    /// not unique.
    pub repeated: bool,
}

impl SpectralData {
    /// `2φ₁ x₁∧y₁ + 2φ₂ x₂∧y₂`; reproduces the input when no flag is set.
    pub fn reconstruct(&self) -> Bivector4 {
        wedge(&self.plane1.0, &self.plane1.1).scale(2.0 * self.phi1)
            + wedge(&self.plane2.0, &self.plane2.1).scale(2.0 * self.phi2)
    }

    pub fn flagged(&self) -> bool {
        self.zero_eigenvalue || self.repeated
    }
}

/// Eigenvalue half-magnitudes (φ₁, φ₂) of a bivector, φ₁ ≥ φ₂ ≥ 0.
///
/// Roots of `λ⁴ + (‖τ‖²_F/2) λ² + Pf(τ)² = 0` through the stable quadratic
/// formula on λ².
pub fn eigenvalue_halves(t: &Bivector4) -> (f64, f64) {
    // Half the squared Frobenius norm of the matrix view, which is the
    // squared coefficient norm.
    let p = t.norm_squared();
    let q = pfaffian(t).powi(2);
    let disc = (p * p - 4.0 * q).max(0.0).sqrt();
    let mu_big = 0.5 * (p + disc);
    let mu_small = if mu_big > 0.0 { q / mu_big } else { 0.0 };
    (0.5 * mu_big.sqrt(), 0.5 * mu_small.sqrt())
}

/// Orthonormalize `v` against the accepted vectors, returning the residual
/// direction if its norm survives `floor`.
fn gram_schmidt_step(v: &Point4, accepted: &[Point4], floor: f64) -> Option<Point4> {
    let mut w = *v;
    // Two passes keep the result orthogonal at working precision.
    for _ in 0..2 {
        for a in accepted {
            w = w - a.scale(w.dot(a));
        }
    }
    w.normalized(floor)
}

/// Pick, among the columns of `m`, the one with the largest residual after
/// orthogonalization against `accepted`.
fn pivoted_column(m: &Matrix4<f64>, accepted: &[Point4]) -> Point4 {
    let mut best: Option<(f64, Point4)> = None;
    for j in 0..4 {
        let col = Point4([m[(0, j)], m[(1, j)], m[(2, j)], m[(3, j)]]);
        let mut w = col;
        for a in accepted {
            w = w - a.scale(w.dot(a));
        }
        let n = w.norm();
        if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
            best = Some((n, w));
        }
    }
    let (n, w) = best.unwrap();
    w.scale(1.0 / n)
}

/// Spectral decomposition of `τ` with degeneracy flags.
///
/// Planes come from the spectral projectors `(τ² + 4φ_k² I)/(4(φ_k² - φ_j²))`
/// of the negative-semidefinite symmetric matrix τ², orthonormalized by
/// pivoted Gram-Schmidt; the in-plane partner is `y_k = -τ x_k / (2φ_k)`,
/// which fixes the orientation so that reconstruction holds. Degenerate
/// spectra are reported through flags, not failures.
pub fn spectral(t: &Bivector4, tol: f64) -> SpectralData {
    let (phi1, phi2) = eigenvalue_halves(t);
    let zero_eigenvalue = phi2 < tol;
    let repeated = phi1 - phi2 < tol;
    let m = t.matrix();
    let msq = m * m;

    let floor = 1e-14 * (1.0 + phi1 * phi1);

    let (plane1, plane2);
    if phi1 < tol {
        // Zero matrix: any orthonormal frame reconstructs 0.
        plane1 = (Point4::basis(0), Point4::basis(1));
        plane2 = (Point4::basis(2), Point4::basis(3));
    } else if !repeated {
        // Projector onto the φ1-plane.
        let p1 = (msq + Matrix4::identity() * (4.0 * phi2 * phi2))
            / (4.0 * (phi2 * phi2 - phi1 * phi1));
        let x1 = pivoted_column(&p1, &[]);
        let y1 = partner(&m, &x1, phi1, &[x1], floor);
        let x2 = if zero_eigenvalue {
            // Kernel plane: complement of the φ1-plane.
            pivoted_column(&Matrix4::identity(), &[x1, y1])
        } else {
            let p2 = (msq + Matrix4::identity() * (4.0 * phi1 * phi1))
                / (4.0 * (phi1 * phi1 - phi2 * phi2));
            pivoted_column(&p2, &[x1, y1])
        };
        let y2 = partner(&m, &x2, phi2, &[x1, y1, x2], floor);
        plane1 = (x1, y1);
        plane2 = (x2, y2);
    } else {
        // Near-equal pairs: the projector formula is ill-conditioned, but
        // any invariant splitting reconstructs to within the gap. Start
        // from the pivot axis with the largest image under τ.
        let x1 = pivoted_column(&Matrix4::identity(), &[]);
        let y1 = partner(&m, &x1, phi1, &[x1], floor);
        let x2 = pivoted_column(&Matrix4::identity(), &[x1, y1]);
        let y2 = partner(&m, &x2, phi2, &[x1, y1, x2], floor);
        plane1 = (x1, y1);
        plane2 = (x2, y2);
    }

    SpectralData {
        phi1,
        phi2,
        plane1,
        plane2,
        zero_eigenvalue,
        repeated,
    }
}

/// In-plane partner `-τ x / (2φ)`, orthonormalized against the frame built
/// so far; falls back to frame completion when the image degenerates.
fn partner(m: &Matrix4<f64>, x: &Point4, phi: f64, accepted: &[Point4], floor: f64) -> Point4 {
    if phi > 0.0 {
        let image = Point4::from_na(&(m * x.to_na())).scale(-1.0 / (2.0 * phi));
        if let Some(y) = gram_schmidt_step(&image, accepted, floor) {
            return y;
        }
    }
    pivoted_column(&Matrix4::identity(), accepted)
}

/// Rotation `e^{-sτ}`.
///
/// Uses the spectral plane-rotation form away from degenerate spectra and
/// falls back to a scaling-and-squaring series when the eigenvalue pairs are
/// closer than 1e-8 (where plane extraction is ill-conditioned).
pub fn skew_exp(t: &Bivector4, s: f64) -> Matrix4<f64> {
    let (phi1, phi2) = eigenvalue_halves(t);
    if phi1 - phi2 < 1e-8 || phi2 < 1e-8 {
        return exp_series(&(t.matrix() * (-s)));
    }
    let sd = spectral(t, 1e-12);
    skew_exp_spectral(&sd, s)
}

/// Plane-rotation form of `e^{-sτ}` given a spectral decomposition:
/// `Σ_k (x_k x_k^T + y_k y_k^T) cos(2φ_k s) - (x_k y_k^T - y_k x_k^T) sin(2φ_k s)`.
pub fn skew_exp_spectral(sd: &SpectralData, s: f64) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    for (phi, (x, y)) in [(sd.phi1, &sd.plane1), (sd.phi2, &sd.plane2)] {
        let (xn, yn) = (x.to_na(), y.to_na());
        let sym = xn * xn.transpose() + yn * yn.transpose();
        let skew = xn * yn.transpose() - yn * xn.transpose();
        let a = 2.0 * phi * s;
        out += sym * a.cos() - skew * a.sin();
    }
    out
}

/// Matrix exponential by scaling-and-squaring with a truncated power series.
fn exp_series(m: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = m.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(squarings as i32);
    let mut result = Matrix4::identity();
    let mut term = Matrix4::identity();
    let mut k = 1.0;
    while term.norm() > 1e-18 {
        term = term * scaled / k;
        result += term;
        k += 1.0;
        if k > 60.0 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn e(i: usize) -> Point4 {
        Point4::basis(i)
    }

    #[test]
    fn wedge_basis_case() {
        let w = wedge(&e(0), &e(1));
        assert_eq!(w.0, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn wedge_self_is_zero() {
        let u = Point4([1.0, -2.0, 3.0, 0.5]);
        assert_eq!(wedge(&u, &u), Bivector4::ZERO);
    }

    #[test]
    fn wedge_bilinearity_expansion() {
        // (e1+e3) ∧ (e2+e4) = e12 + e14 - e23 + e34
        let w = wedge(&(e(0) + e(2)), &(e(1) + e(3)));
        assert_eq!(w.0, [1.0, 0.0, 1.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn group_identity_and_inverse() {
        let g = GroupElement::new(Point4([1.0, 2.0, 3.0, 4.0]), Bivector4([1.0; 6]));
        assert_eq!(group_mul(&GroupElement::IDENTITY, &g), g);
        assert_eq!(group_mul(&g, &g.inverse()), GroupElement::IDENTITY);
    }

    #[test]
    fn group_law_plugin() {
        let g = group_mul(
            &GroupElement::new(e(0), Bivector4::ZERO),
            &GroupElement::new(e(1), Bivector4::ZERO),
        );
        assert_eq!(g.x, e(0) + e(1));
        assert_eq!(g.t, wedge(&e(0), &e(1)).scale(0.5));
    }

    #[test]
    fn pfaffian_cases() {
        assert_eq!(pfaffian(&Bivector4::basis(0, 1)), 0.0);
        let t = Bivector4::basis(0, 1) + Bivector4::basis(2, 3);
        assert_eq!(pfaffian(&t), 1.0);
        let t = Bivector4::basis(0, 1).scale(3.0) + Bivector4::basis(2, 3).scale(-2.0);
        assert_eq!(pfaffian(&t), -6.0);
    }

    #[test]
    fn skew_exp_zero_is_identity() {
        let m = skew_exp(&Bivector4::ZERO, 3.7);
        assert_relative_eq!(m, Matrix4::identity(), epsilon = 1e-15);
    }

    /// Truncated power-series summation, the independent oracle for the
    /// spectral path of the exponential. Halves the time argument until
    /// the series is well conditioned, then squares back.
    fn exp_oracle(t: &Bivector4, s: f64) -> Matrix4<f64> {
        if (s * t.norm()).abs() > 1.0 {
            let half = exp_oracle(t, s / 2.0);
            return half * half;
        }
        let m = t.matrix() * (-s);
        let mut result = Matrix4::identity();
        let mut term = Matrix4::identity();
        for k in 1..200 {
            term = term * m / (k as f64);
            result += term;
            if term.norm() < 1e-30 {
                break;
            }
        }
        result
    }

    #[test]
    fn skew_exp_quarter_turn() {
        // e^{-(π/2) e1∧e2} maps e1 to e2.
        let t = Bivector4::basis(0, 1);
        let m = skew_exp(&t, std::f64::consts::FRAC_PI_2);
        let image = Point4::from_na(&(m * e(0).to_na()));
        assert_relative_eq!((image - e(1)).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(m, exp_oracle(&t, std::f64::consts::FRAC_PI_2), epsilon = 1e-12);
    }

    #[test]
    fn skew_exp_block_rotations() {
        let t = Bivector4::basis(0, 1).scale(2.0) + Bivector4::basis(2, 3);
        for &s in &[0.3, 1.7, -2.2, 8.0] {
            let m = skew_exp(&t, s);
            assert_relative_eq!(m, exp_oracle(&t, s), epsilon = 1e-12);
            // Orthogonal with determinant 1.
            assert_relative_eq!(m * m.transpose(), Matrix4::identity(), epsilon = 1e-12);
            assert_relative_eq!(m.determinant(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn skew_exp_spectral_and_series_paths_agree() {
        // Away from degenerate spectra both evaluation paths are valid
        // and must coincide.
        let t = Bivector4([0.9, -0.4, 0.2, 0.7, -0.1, 1.3]);
        let sd = spectral(&t, 1e-10);
        assert!(!sd.flagged());
        for &s in &[0.2, 1.0, 3.5, -2.0] {
            let via_spectral = skew_exp_spectral(&sd, s);
            let via_series = exp_series(&(t.matrix() * (-s)));
            assert_relative_eq!(via_spectral, via_series, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectral_canonical_form() {
        let t = Bivector4::basis(0, 1).scale(2.0) + Bivector4::basis(2, 3);
        let sd = spectral(&t, 1e-10);
        assert_relative_eq!(sd.phi1, 1.0, epsilon = 1e-14);
        assert_relative_eq!(sd.phi2, 0.5, epsilon = 1e-14);
        assert!(!sd.flagged());
        // Plane 1 is span{e1,e2}: components outside vanish.
        assert!(sd.plane1.0 .0[2].abs() < 1e-12 && sd.plane1.0 .0[3].abs() < 1e-12);
        assert!(sd.plane1.1 .0[2].abs() < 1e-12 && sd.plane1.1 .0[3].abs() < 1e-12);
        assert_relative_eq!((sd.reconstruct() - t).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_rank_deficient() {
        let sd = spectral(&Bivector4::basis(0, 1), 1e-10);
        assert_relative_eq!(sd.phi1, 0.5, epsilon = 1e-14);
        assert_relative_eq!(sd.phi2, 0.0, epsilon = 1e-14);
        assert!(sd.zero_eigenvalue);
    }

    #[test]
    fn spectral_repeated() {
        let t = Bivector4::basis(0, 1) + Bivector4::basis(2, 3);
        let sd = spectral(&t, 1e-10);
        assert!(sd.repeated);
        assert_relative_eq!(sd.phi1, 0.5, epsilon = 1e-14);
        assert_relative_eq!(sd.phi2, 0.5, epsilon = 1e-14);
        // The splitting is not unique but must still reconstruct.
        assert_relative_eq!((sd.reconstruct() - t).norm(), 0.0, epsilon = 1e-10);
    }

    fn arb_point() -> impl Strategy<Value = Point4> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Point4)
    }

    fn arb_bivector() -> impl Strategy<Value = Bivector4> {
        prop::array::uniform6(-3.0f64..3.0).prop_map(Bivector4)
    }

    proptest! {
        #[test]
        fn wedge_antisymmetric_and_bilinear(u in arb_point(), v in arb_point(), w in arb_point(), a in -2.0f64..2.0) {
            let uv = wedge(&u, &v);
            let vu = wedge(&v, &u);
            prop_assert_eq!(uv, -vu);
            let lhs = wedge(&(u.scale(a) + w), &v);
            let rhs = uv.scale(a) + wedge(&w, &v);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn group_mul_associative(
            x in prop::array::uniform3(arb_point()),
            t in prop::array::uniform3(arb_bivector()),
        ) {
            let g: Vec<GroupElement> = (0..3).map(|i| GroupElement::new(x[i], t[i])).collect();
            let lhs = group_mul(&group_mul(&g[0], &g[1]), &g[2]);
            let rhs = group_mul(&g[0], &group_mul(&g[1], &g[2]));
            let scale = 1.0 + lhs.norm();
            prop_assert!((lhs.x - rhs.x).norm() + (lhs.t - rhs.t).norm() <= 1e-14 * scale);
        }

        #[test]
        fn pfaffian_squared_is_det(t in arb_bivector()) {
            let det = t.matrix().determinant();
            let pf2 = pfaffian(&t).powi(2);
            prop_assert!((pf2 - det).abs() <= 1e-10 * (1.0 + det.abs()));
        }

        #[test]
        fn skew_exp_one_parameter_group(t in arb_bivector(), s in -10.0f64..10.0, sp in -10.0f64..10.0) {
            let prod = skew_exp(&t, s) * skew_exp(&t, sp);
            let sum = skew_exp(&t, s + sp);
            prop_assert!((prod - sum).norm() <= 1e-11 * (1.0 + sum.norm()));
        }

        #[test]
        fn spectral_reconstruction(t in arb_bivector()) {
            let sd = spectral(&t, 1e-9);
            if !sd.flagged() {
                let err = (sd.reconstruct() - t).norm();
                prop_assert!(err <= 1e-10 * (1.0 + t.norm()));
                // Frames are orthonormal.
                let frame = [sd.plane1.0, sd.plane1.1, sd.plane2.0, sd.plane2.1];
                for i in 0..4 {
                    for j in 0..4 {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        prop_assert!((frame[i].dot(&frame[j]) - expect).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
