//! Extremal controls and trajectories, in the raw `(a, b)` basis, the
//! rotated `(α, β)` basis, and the covector chart, plus the maps between
//! them.
//!
//! An extremal from the origin is driven by
//!
//! ```text
//! u(s) = a₁ cos(2φ₁ s) + b₁ sin(2φ₁ s) + a₂ cos(2φ₂ s) + b₂ sin(2φ₂ s)
//! ```
//!
//! with `a₁, b₁, a₂, b₂` pairwise orthogonal, `|a_k| = |b_k| = r_k` and
//! `φ₁ ≥ φ₂ ≥ 0`. The rotated vectors
//!
//! ```text
//! α_k = a_k sin φ_k - b_k cos φ_k,   β_k = a_k cos φ_k + b_k sin φ_k
//! ```
//!
//! reduce the endpoint to four wedge terms with coefficients `u` and `z`,
//! which is the canonical evaluation path here ([`trajectory`]); the raw
//! six-term form with `f`, `g`, `h` coefficients ([`trajectory_raw`])
//! exists to cross-check the change of basis.
//!
//! Frequencies are parametrized throughout by the half-angles `φ_k`; where
//! other conventions write a frequency `λ_k`, the relation is `λ_k = 2φ_k`.

use serde::{Deserialize, Serialize};

use crate::algebra::{self, wedge, Bivector4, GroupElement, Point4};
use crate::specfun;
use crate::{Error, Result};

/// Relative drift accepted silently by the validating constructors.
const DRIFT_ACCEPT: f64 = 1e-10;
/// Relative drift repaired by Gram-Schmidt; anything larger is rejected.
const DRIFT_REPAIR: f64 = 1e-6;
/// Relative threshold below which `r_k` or a frequency gap counts as zero
/// in the genericity classification.
const DEGENERACY_EPS: f64 = 1e-12;

/// Initial data `(a₁, b₁, a₂, b₂, φ₁, φ₂)` of an extremal control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub a1: Point4,
    pub b1: Point4,
    pub a2: Point4,
    pub b2: Point4,
    pub phi1: f64,
    pub phi2: f64,
}

/// Genericity classes of an extremal control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Genericity {
    /// `r₁, r₂ > 0` and `φ₁ > φ₂ > 0`: the control span has dimension 4.
    Generic,
    /// A single active pair at positive frequency; every point along it is
    /// conjugate.
    Abnormal,
    /// One oscillating pair plus a constant drift (`φ₂ = 0`, both radii
    /// positive): confined to a rank-3 subgroup.
    SingleFrequency,
    /// `φ₁ = φ₂ > 0` with both radii positive: confined to the subgroup
    /// generated by `a₁+a₂` and `b₁+b₂`.
    EqualFrequencies,
    /// Constant control: a horizontal line.
    Rectilinear,
}

impl ExtremalParams {
    /// Validating constructor.
    ///
    /// Requires `φ₁ ≥ φ₂ ≥ 0`, pairwise orthogonality and `|a_k| = |b_k|`.
    /// Drift up to 1e-10 relative is accepted as-is, drift up to 1e-6 is
    /// repaired by Gram-Schmidt, anything larger is rejected.
    pub fn new(
        a1: Point4,
        b1: Point4,
        a2: Point4,
        b2: Point4,
        phi1: f64,
        phi2: f64,
    ) -> Result<ExtremalParams> {
        specfun::PhiPair::new(phi1, phi2)?;
        for v in [&a1, &b1, &a2, &b2] {
            if !v.is_finite() {
                return Err(Error::InvalidParams("non-finite vector entry".into()));
            }
        }
        let p = ExtremalParams {
            a1,
            b1,
            a2,
            b2,
            phi1,
            phi2,
        };
        let drift = p.frame_drift();
        if drift <= DRIFT_ACCEPT {
            Ok(p)
        } else if drift <= DRIFT_REPAIR {
            Ok(p.repaired())
        } else {
            Err(Error::InvalidParams(format!(
                "frame drift {drift:.2e} exceeds the repairable bound {DRIFT_REPAIR:.0e}"
            )))
        }
    }

    /// Parameters on the standard frame: `a₁ = r₁e₁, b₁ = r₁e₂,
    /// a₂ = r₂e₃, b₂ = r₂e₄`.
    pub fn canonical(r1: f64, r2: f64, phi1: f64, phi2: f64) -> Result<ExtremalParams> {
        if r1 < 0.0 || r2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "radii must be nonnegative, got ({r1}, {r2})"
            )));
        }
        ExtremalParams::new(
            Point4::basis(0) * r1,
            Point4::basis(1) * r1,
            Point4::basis(2) * r2,
            Point4::basis(3) * r2,
            phi1,
            phi2,
        )
    }

    /// Worst relative violation of orthogonality and norm matching.
    fn frame_drift(&self) -> f64 {
        let vs = [&self.a1, &self.b1, &self.a2, &self.b2];
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let scale = vs[i].norm() * vs[j].norm();
                if scale > 0.0 {
                    worst = worst.max(vs[i].dot(vs[j]).abs() / scale);
                }
            }
        }
        for (a, b) in [(&self.a1, &self.b1), (&self.a2, &self.b2)] {
            let scale = a.norm().max(b.norm());
            if scale > 0.0 {
                worst = worst.max((a.norm() - b.norm()).abs() / scale);
            }
        }
        worst
    }

    /// Gram-Schmidt repair in the order a₁, b₁, a₂, b₂, then norm
    /// averaging within each pair.
    fn repaired(&self) -> ExtremalParams {
        let mut out = [self.a1, self.b1, self.a2, self.b2];
        for i in 0..4 {
            for j in 0..i {
                let nj = out[j].norm_squared();
                if nj > 0.0 {
                    out[i] = out[i] - out[j].scale(out[i].dot(&out[j]) / nj);
                }
            }
        }
        for k in 0..2 {
            let (i, j) = (2 * k, 2 * k + 1);
            let r = 0.5 * (out[i].norm() + out[j].norm());
            for idx in [i, j] {
                if let Some(unit) = out[idx].normalized(0.0) {
                    out[idx] = unit.scale(r);
                }
            }
        }
        ExtremalParams {
            a1: out[0],
            b1: out[1],
            a2: out[2],
            b2: out[3],
            phi1: self.phi1,
            phi2: self.phi2,
        }
    }

    pub fn r1(&self) -> f64 {
        0.5 * (self.a1.norm() + self.b1.norm())
    }

    pub fn r2(&self) -> f64 {
        0.5 * (self.a2.norm() + self.b2.norm())
    }

    /// Parameters of the reparametrized curve:
    /// `γ(s, a, b, φ) = γ(1, sa, sb, sφ)`.
    pub fn scaled(&self, s: f64) -> ExtremalParams {
        ExtremalParams {
            a1: self.a1 * s,
            b1: self.b1 * s,
            a2: self.a2 * s,
            b2: self.b2 * s,
            phi1: self.phi1 * s,
            phi2: self.phi2 * s,
        }
    }

    /// Genericity classification by the degenerate cases `r_k = 0`,
    /// `φ₂ = 0`, `φ₁ = φ₂`. Generic extremals are exactly those whose
    /// control span `{u(0), u'(0), u''(0), u'''(0)}` has dimension 4.
    pub fn genericity(&self) -> Genericity {
        let (r1, r2) = (self.r1(), self.r2());
        let r_scale = r1.max(r2).max(1.0) * DEGENERACY_EPS;
        let phi_scale = self.phi1.max(1.0) * DEGENERACY_EPS;
        let r1_zero = r1 <= r_scale;
        let r2_zero = r2 <= r_scale;
        let phi2_zero = self.phi2 <= phi_scale;
        let equal_freq = self.phi1 - self.phi2 <= phi_scale;

        if r1_zero && r2_zero {
            return Genericity::Rectilinear;
        }
        if r1_zero || r2_zero {
            // One active pair: oscillating is abnormal, constant is a line.
            let active_phi_zero = if r1_zero {
                phi2_zero
            } else {
                self.phi1 <= phi_scale
            };
            return if active_phi_zero {
                Genericity::Rectilinear
            } else {
                Genericity::Abnormal
            };
        }
        if self.phi1 <= phi_scale {
            return Genericity::Rectilinear;
        }
        if equal_freq {
            return Genericity::EqualFrequencies;
        }
        if phi2_zero {
            return Genericity::SingleFrequency;
        }
        Genericity::Generic
    }

    pub fn is_generic(&self) -> bool {
        self.genericity() == Genericity::Generic
    }

    pub(crate) fn require_generic(&self) -> Result<()> {
        match self.genericity() {
            Genericity::Generic => Ok(()),
            other => Err(Error::NonGeneric(other)),
        }
    }

    /// Dimension of `span{u(0), u'(0), u''(0), u'''(0)}`; 4 exactly on
    /// generic extremals.
    pub fn control_span_dimension(&self, tol: f64) -> usize {
        let cols = [
            self.a1 + self.a2,
            self.b1 * (2.0 * self.phi1) + self.b2 * (2.0 * self.phi2),
            self.a1 * (-4.0 * self.phi1 * self.phi1)
                + self.a2 * (-4.0 * self.phi2 * self.phi2),
            self.b1 * (-8.0 * self.phi1.powi(3)) + self.b2 * (-8.0 * self.phi2.powi(3)),
        ];
        let m = nalgebra::Matrix4::from_columns(&[
            cols[0].to_na(),
            cols[1].to_na(),
            cols[2].to_na(),
            cols[3].to_na(),
        ]);
        let svd = m.svd(false, false);
        let smax = svd.singular_values.max();
        if smax == 0.0 {
            return 0;
        }
        svd.singular_values
            .iter()
            .filter(|&&s| s > tol * smax)
            .count()
    }
}

/// The extremal control `u(s)`; constant sub-Riemannian speed
/// `√(r₁² + r₂²)`.
pub fn control(p: &ExtremalParams, s: f64) -> Point4 {
    let (s1, c1) = (2.0 * p.phi1 * s).sin_cos();
    let (s2, c2) = (2.0 * p.phi2 * s).sin_cos();
    p.a1 * c1 + p.b1 * s1 + p.a2 * c2 + p.b2 * s2
}

/// Time-dependent rotated vectors
/// `α_k^s = s[a_k sin(φ_k s) - b_k cos(φ_k s)]`,
/// `β_k^s = s[a_k cos(φ_k s) + b_k sin(φ_k s)]`.
fn rotated_at(p: &ExtremalParams, s: f64) -> [Point4; 4] {
    let (s1, c1) = (p.phi1 * s).sin_cos();
    let (s2, c2) = (p.phi2 * s).sin_cos();
    [
        (p.a1 * s1 - p.b1 * c1) * s,
        (p.a1 * c1 + p.b1 * s1) * s,
        (p.a2 * s2 - p.b2 * c2) * s,
        (p.a2 * c2 + p.b2 * s2) * s,
    ]
}

/// The extremal trajectory through the rotated-basis closed form
///
/// ```text
/// x(s) = t(φ₁s) β₁^s + t(φ₂s) β₂^s
/// t(s) = u(φ₁s) α₁^s∧β₁^s + z(φ₁s,φ₂s) α₁^s∧β₂^s
///      + z(φ₂s,φ₁s) α₂^s∧β₁^s + u(φ₂s) α₂^s∧β₂^s
/// ```
///
/// Degenerate parameters evaluate through the limits of `z`, so rank-3
/// and equal-frequency extremals need no special casing.
pub fn trajectory(p: &ExtremalParams, s: f64) -> GroupElement {
    let [al1, be1, al2, be2] = rotated_at(p, s);
    let (x1, y1) = (p.phi1 * s, p.phi2 * s);
    let x = be1 * specfun::t(x1) + be2 * specfun::t(y1);
    let t = wedge(&al1, &be1).scale(specfun::u(x1))
        + wedge(&al1, &be2).scale(specfun::z(x1, y1))
        + wedge(&al2, &be1).scale(specfun::z(y1, x1))
        + wedge(&al2, &be2).scale(specfun::u(y1));
    GroupElement::new(x, t)
}

/// The same trajectory through the six-term raw-basis form with `f`, `g`,
/// `h` coefficients. Cross-check only: errors inside the excluded
/// neighborhoods of those functions.
pub fn trajectory_raw(p: &ExtremalParams, s: f64) -> Result<GroupElement> {
    let (x1, y1) = (p.phi1 * s, p.phi2 * s);
    let (sn1, cs1) = x1.sin_cos();
    let (sn2, cs2) = y1.sin_cos();
    let x = (p.a1 * cs1 + p.b1 * sn1) * (s * specfun::t(x1))
        + (p.a2 * cs2 + p.b2 * sn2) * (s * specfun::t(y1));
    let ssq = s * s;
    let t = wedge(&p.a1, &p.b1).scale(ssq * specfun::u(x1))
        + wedge(&p.a1, &p.a2).scale(ssq * specfun::f(x1, y1)?)
        + wedge(&p.a1, &p.b2).scale(ssq * specfun::g(x1, y1)?)
        - wedge(&p.b1, &p.a2).scale(ssq * specfun::g(y1, x1)?)
        + wedge(&p.b1, &p.b2).scale(ssq * specfun::h(x1, y1)?)
        + wedge(&p.a2, &p.b2).scale(ssq * specfun::u(y1));
    Ok(GroupElement::new(x, t))
}

/// Rotated basis `(α₁, β₁, α₂, β₂)` at time 1.
pub fn rotate_basis(p: &ExtremalParams) -> (Point4, Point4, Point4, Point4) {
    let [al1, be1, al2, be2] = rotated_at(p, 1.0);
    (al1, be1, al2, be2)
}

/// Inverse of [`rotate_basis`]:
/// `a_k = α_k sin φ_k + β_k cos φ_k`, `b_k = β_k sin φ_k - α_k cos φ_k`.
pub fn unrotate_basis(
    al1: &Point4,
    be1: &Point4,
    al2: &Point4,
    be2: &Point4,
    phi1: f64,
    phi2: f64,
) -> (Point4, Point4, Point4, Point4) {
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    (
        *al1 * s1 + *be1 * c1,
        *be1 * s1 - *al1 * c1,
        *al2 * s2 + *be2 * c2,
        *be2 * s2 - *al2 * c2,
    )
}

/// A point of the frame manifold: an orthonormal 4-frame `(u₁,v₁,u₂,v₂)`
/// together with coordinates `(r₁, r₂, φ₁, φ₂)`, `r_k > 0`,
/// `φ₁ > φ₂ > 0` strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameChart {
    pub u1: Point4,
    pub v1: Point4,
    pub u2: Point4,
    pub v2: Point4,
    pub r1: f64,
    pub r2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl FrameChart {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        u1: Point4,
        v1: Point4,
        u2: Point4,
        v2: Point4,
        r1: f64,
        r2: f64,
        phi1: f64,
        phi2: f64,
    ) -> Result<FrameChart> {
        if !(r1 > 0.0 && r2 > 0.0 && phi2 > 0.0 && phi1 > phi2) {
            return Err(Error::InvalidParams(format!(
                "chart coordinates must satisfy r > 0 and phi1 > phi2 > 0, got r=({r1},{r2}) phi=({phi1},{phi2})"
            )));
        }
        let frame = [u1, v1, u2, v2];
        for i in 0..4 {
            for j in i..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (frame[i].dot(&frame[j]) - expect).abs() > 1e-12 {
                    return Err(Error::InvalidParams(format!(
                        "frame is not orthonormal within 1e-12 at pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(FrameChart {
            u1,
            v1,
            u2,
            v2,
            r1,
            r2,
            phi1,
            phi2,
        })
    }

    /// Chart with the given coordinates on the standard frame.
    pub fn standard(r1: f64, r2: f64, phi1: f64, phi2: f64) -> Result<FrameChart> {
        FrameChart::new(
            Point4::basis(0),
            Point4::basis(1),
            Point4::basis(2),
            Point4::basis(3),
            r1,
            r2,
            phi1,
            phi2,
        )
    }

    /// The frame scaled into `(α₁, β₁, α₂, β₂) = (r₁u₁, r₁v₁, r₂u₂, r₂v₂)`.
    pub fn alpha_beta(&self) -> [Point4; 4] {
        [
            self.u1 * self.r1,
            self.v1 * self.r1,
            self.u2 * self.r2,
            self.v2 * self.r2,
        ]
    }
}

/// Endpoint map of the chart:
/// `Γ = (r₁T₁v₁ + r₂T₂v₂, r₁²U₁ u₁∧v₁ + r₁r₂Z₁₂ u₁∧v₂ + r₁r₂Z₂₁ u₂∧v₁ + r₂²U₂ u₂∧v₂)`.
pub fn chart_endpoint(chart: &FrameChart) -> GroupElement {
    chart_endpoint_raw(
        &chart.u1,
        &chart.v1,
        &chart.u2,
        &chart.v2,
        chart.r1,
        chart.r2,
        chart.phi1,
        chart.phi2,
    )
}

/// [`chart_endpoint`] on raw components, without revalidating the frame.
/// Finite-difference probes perturb charts along rotations and coordinate
/// shifts that can graze the strict chart bounds, so they evaluate
/// through this entry.
#[allow(clippy::too_many_arguments)]
pub fn chart_endpoint_raw(
    u1: &Point4,
    v1: &Point4,
    u2: &Point4,
    v2: &Point4,
    r1: f64,
    r2: f64,
    phi1: f64,
    phi2: f64,
) -> GroupElement {
    let (t1, t2) = (specfun::t(phi1), specfun::t(phi2));
    let (uu1, uu2) = (specfun::u(phi1), specfun::u(phi2));
    let z12 = specfun::z(phi1, phi2);
    let z21 = specfun::z(phi2, phi1);
    let x = *v1 * (r1 * t1) + *v2 * (r2 * t2);
    let t = wedge(u1, v1).scale(r1 * r1 * uu1)
        + wedge(u1, v2).scale(r1 * r2 * z12)
        + wedge(u2, v1).scale(r1 * r2 * z21)
        + wedge(u2, v2).scale(r2 * r2 * uu2);
    GroupElement::new(x, t)
}

/// Chart coordinates of a generic extremal: `u_k = α_k/r_k`, `v_k = β_k/r_k`.
pub fn to_frame_chart(p: &ExtremalParams) -> Result<FrameChart> {
    p.require_generic()?;
    let (r1, r2) = (p.r1(), p.r2());
    let (al1, be1, al2, be2) = rotate_basis(p);
    FrameChart::new(
        al1 * (1.0 / r1),
        be1 * (1.0 / r1),
        al2 * (1.0 / r2),
        be2 * (1.0 / r2),
        r1,
        r2,
        p.phi1,
        p.phi2,
    )
}

/// An initial covector `(ξ, τ)` of the Hamiltonian system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub xi: Point4,
    pub tau: Bivector4,
}

impl Covector {
    /// Membership in the nondegenerate set: `ξ ≠ 0`, four distinct
    /// nonzero eigenvalues, and nonvanishing projections of `ξ` on both
    /// eigenplanes.
    pub fn is_nondegenerate(&self, tol: f64) -> bool {
        from_covector(self, tol).is_ok()
    }
}

/// Covector of a generic extremal: `ξ = r₁x₁ + r₂x₂ = a₁ + a₂` and
/// `τ = 2φ₁ x₁∧y₁ + 2φ₂ x₂∧y₂` with `x_k = a_k/r_k`, `y_k = b_k/r_k`.
pub fn to_covector(p: &ExtremalParams) -> Result<Covector> {
    p.require_generic()?;
    let (r1, r2) = (p.r1(), p.r2());
    let xi = p.a1 + p.a2;
    let tau = wedge(&p.a1, &p.b1).scale(2.0 * p.phi1 / (r1 * r1))
        + wedge(&p.a2, &p.b2).scale(2.0 * p.phi2 / (r2 * r2));
    Ok(Covector { xi, tau })
}

/// Extremal parameters of a nondegenerate covector.
///
/// The spectral planes of `τ` fix `φ₁ > φ₂ > 0`; inside each plane the
/// frame is rotated to the unique position with `⟨y_k, ξ⟩ = 0` and
/// `⟨x_k, ξ⟩ > 0`, and then `r_k = ⟨x_k, ξ⟩`, `a_k = r_k x_k`,
/// `b_k = r_k y_k`.
pub fn from_covector(c: &Covector, tol: f64) -> Result<ExtremalParams> {
    let sd = algebra::spectral(&c.tau, tol);
    if sd.flagged() {
        return Err(Error::NondegeneracyViolation(format!(
            "tau eigenvalues are degenerate at tolerance {tol:.1e} (phi = ({}, {}))",
            sd.phi1, sd.phi2
        )));
    }
    let mut pairs: [(Point4, Point4); 2] = [sd.plane1, sd.plane2];
    let mut r = [0.0f64; 2];
    for (k, (x, y)) in pairs.iter_mut().enumerate() {
        let (px, py) = (x.dot(&c.xi), y.dot(&c.xi));
        let proj = px.hypot(py);
        if proj <= tol {
            return Err(Error::NondegeneracyViolation(format!(
                "xi projects onto eigenplane {} with norm {proj:.2e} <= tol",
                k + 1
            )));
        }
        // In-plane rotation by θ = atan2(py, px) sends x to the direction
        // of the projection of ξ and keeps x∧y fixed.
        let (sin_th, cos_th) = (py / proj, px / proj);
        let new_x = *x * cos_th + *y * sin_th;
        let new_y = *y * cos_th - *x * sin_th;
        *x = new_x;
        *y = new_y;
        r[k] = proj;
    }
    ExtremalParams::new(
        pairs[0].0 * r[0],
        pairs[0].1 * r[0],
        pairs[1].0 * r[1],
        pairs[1].1 * r[1],
        sd.phi1,
        sd.phi2,
    )
}
