//! The candidate cut locus: stratum classification, subgroup membership,
//! exact vertical distances, and rational-ratio cut times.
//!
//! The candidate set is the union of three strata of points fixed by a
//! nontrivial orthogonal symmetry acting trivially on `ker t`:
//!
//! - `Σ₁`: rank-4 vertical part with distinct eigenvalue pairs and the
//!   horizontal part inside one eigenplane;
//! - `Σ₂`: rank-4 vertical part with equal eigenvalue pairs, any
//!   horizontal part;
//! - `Σ₃`: rank-2 vertical part with the horizontal part inside its
//!   kernel plane.
//!
//! On rank-4 points membership in `Σ₁ ∪ Σ₂` is equivalent to the span
//! condition `t²x ∈ span{x}`; on rank-2 points that equivalence fails,
//! which is why the classifier works from the spectral data directly.

use serde::{Deserialize, Serialize};

use crate::algebra::{spectral, GroupElement, Point4};
use crate::conjugacy::{self, bivector_rank, find_d_zeros, s_star};
use crate::extremal::{trajectory, ExtremalParams};
use crate::specfun;
use crate::{Error, Result};

/// Classification tolerance: eigenvalue-pair equality is declared below
/// `CLASSIFY_TOL·(λ₁+λ₂)` and in-plane membership below
/// `CLASSIFY_TOL·‖x‖`, the spectral noise floor.
pub const CLASSIFY_TOL: f64 = 1e-8;

/// Stratum tag of a point relative to the candidate cut locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StratumTag {
    NotInC4,
    Sigma1,
    Sigma2,
    Sigma3,
}

impl std::fmt::Display for StratumTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StratumTag::NotInC4 => "NotInC4",
            StratumTag::Sigma1 => "Sigma1",
            StratumTag::Sigma2 => "Sigma2",
            StratumTag::Sigma3 => "Sigma3",
        };
        f.write_str(s)
    }
}

/// Stratum classification with its spectral witnesses.
#[derive(Debug, Clone)]
pub struct CutStratum {
    pub tag: StratumTag,
    /// Eigenvalue magnitudes of the vertical part, `λ₁ ≥ λ₂ ≥ 0`.
    pub lambda1: f64,
    pub lambda2: f64,
    /// Orthonormal eigenplane frames of the vertical part.
    pub plane1: (Point4, Point4),
    pub plane2: (Point4, Point4),
    /// Norms of the projections of x onto the two eigenplanes.
    pub x_split: [f64; 2],
}

impl CutStratum {
    pub fn in_c4(&self) -> bool {
        self.tag != StratumTag::NotInC4
    }
}

fn plane_projection_norm(x: &Point4, plane: &(Point4, Point4)) -> f64 {
    x.dot(&plane.0).hypot(x.dot(&plane.1))
}

/// Classify a point against the candidate cut locus.
///
/// All comparisons are relative: eigenvalue-pair equality below a
/// `tol`-sized deviation of `t²` from a scalar matrix (equivalent to
/// `λ₁-λ₂ ≲ tol·(λ₁+λ₂)` but without the square-root noise amplification
/// of the eigenvalue gap), rank deficiency below `tol·λ₁`, and plane
/// membership below `tol·‖x‖`. A horizontal part below `tol·√λ₁` counts
/// as zero, matching the scaling of the two layers.
pub fn classify_c4(g: &GroupElement, tol: f64) -> CutStratum {
    let sd = spectral(&g.t, f64::MIN_POSITIVE);
    let (lambda1, lambda2) = (2.0 * sd.phi1, 2.0 * sd.phi2);
    let x_split = [
        plane_projection_norm(&g.x, &sd.plane1),
        plane_projection_norm(&g.x, &sd.plane2),
    ];
    let report = |tag| CutStratum {
        tag,
        lambda1,
        lambda2,
        plane1: sd.plane1,
        plane2: sd.plane2,
        x_split,
    };

    if lambda1 <= tol * (1.0 + g.t.norm()) {
        // Vanishing vertical part: only the identity symmetry fixes it.
        return report(StratumTag::NotInC4);
    }
    let xn = g.x.norm();
    let x_negligible = xn <= tol * lambda1.sqrt();
    if lambda2 > tol * lambda1 {
        // Rank 4. Equal pairs exactly when t² is a scalar matrix.
        let tsq = g.t.matrix() * g.t.matrix();
        let dev = (tsq - nalgebra::Matrix4::identity() * (tsq.trace() / 4.0)).norm();
        if dev <= tol * tsq.norm() {
            return report(StratumTag::Sigma2);
        }
        let in_plane1 = x_split[1] <= tol * xn;
        let in_plane2 = x_split[0] <= tol * xn;
        if x_negligible || in_plane1 || in_plane2 {
            return report(StratumTag::Sigma1);
        }
        return report(StratumTag::NotInC4);
    }
    // Rank 2: the kernel is the second plane.
    if x_negligible || x_split[0] <= tol * xn {
        return report(StratumTag::Sigma3);
    }
    report(StratumTag::NotInC4)
}

/// Rank of the vertical part, membership in the union of strict
/// subgroups, and the dimension of the smallest subspace whose subgroup
/// contains the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupReport {
    pub rank: usize,
    /// True exactly when rank ≤ 2, i.e. the point lies in a strict
    /// subgroup.
    pub in_h: bool,
    /// Dimension of the minimal ambient subspace (4 when `in_h` is
    /// false).
    pub min_subgroup_dim: usize,
}

pub fn rank_and_subgroup(g: &GroupElement, tol: f64) -> SubgroupReport {
    let rank = bivector_rank(&g.t, tol);
    let in_h = rank <= 2;
    let min_subgroup_dim = match rank {
        4 => 4,
        2 => {
            // The vertical part is decomposable; its plane is the first
            // spectral plane. x outside that plane costs one dimension.
            let sd = spectral(&g.t, f64::MIN_POSITIVE);
            let xn = g.x.norm();
            let outside = (xn * xn - plane_projection_norm(&g.x, &sd.plane1).powi(2))
                .max(0.0)
                .sqrt();
            if outside > tol * xn.max(1e-300) {
                3
            } else {
                2
            }
        }
        _ => usize::from(g.x.norm() > 0.0),
    };
    SubgroupReport {
        rank,
        in_h,
        min_subgroup_dim,
    }
}

/// Exact distance from the origin to the vertical point
/// `t₁ x₁∧y₁ + t₂ x₂∧y₂`: `√(4π·max + 8π·min)` for positive
/// coefficients (inputs sorted internally).
pub fn vertical_distance(t1: f64, t2: f64) -> Result<f64> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Domain(format!(
            "vertical coefficients must be positive, got ({t1}, {t2})"
        )));
    }
    let pi = std::f64::consts::PI;
    Ok((4.0 * pi * t1.max(t2) + 8.0 * pi * t1.min(t2)).sqrt())
}

/// Cut time of an extremal: exact value or an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CutTime {
    Exact(f64),
    UpperBound(f64),
}

impl CutTime {
    pub fn time(&self) -> f64 {
        match *self {
            CutTime::Exact(t) | CutTime::UpperBound(t) => t,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CutTime::Exact(_))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Cut time of a generic extremal whose frequency ratio carries the
/// rational certificate `φ₁/φ₂ = p/q` with `p > q ≥ 1` coprime.
///
/// - `p/q = 2` and `r₂² ≥ r₁²/2`: exact cut time `π/φ₂`, reached on the
///   vertical axis;
/// - `p/q = 2` and `r₂² < r₁²/2`: strict upper bound `π/φ₂`;
/// - otherwise: strict upper bound `πq/φ₂`, the first vanishing time of
///   the horizontal part.
///
/// Rationality is never inferred from floats; without a certificate
/// consistent with the parameters this errors.
pub fn cut_time_rational(p: &ExtremalParams, num: u64, den: u64) -> Result<CutTime> {
    p.require_generic()?;
    if num == 0 || den == 0 || num <= den || gcd(num, den) != 1 {
        return Err(Error::IrrationalRatio(format!(
            "certificate must be coprime with p > q >= 1, got {num}/{den}"
        )));
    }
    let mismatch = (p.phi1 * den as f64 - p.phi2 * num as f64).abs();
    if mismatch > 1e-9 * p.phi1 * den as f64 {
        return Err(Error::IrrationalRatio(format!(
            "phi1/phi2 = {} does not match certificate {num}/{den}",
            p.phi1 / p.phi2
        )));
    }
    let pi = std::f64::consts::PI;
    if num == 2 && den == 1 {
        let (r1, r2) = (p.r1(), p.r2());
        if r2 * r2 >= 0.5 * r1 * r1 {
            Ok(CutTime::Exact(pi / p.phi2))
        } else {
            Ok(CutTime::UpperBound(pi / p.phi2))
        }
    } else {
        Ok(CutTime::UpperBound(pi * den as f64 / p.phi2))
    }
}

/// One candidate cut-locus hit along an extremal.
#[derive(Debug, Clone)]
pub struct C4Hit {
    pub s: f64,
    pub stratum: CutStratum,
    /// Quartic scan value at the hit, for auditing near-tangential zeros.
    pub quartic_d: f64,
    pub rank_t: usize,
}

/// Candidate cut-locus hits along a generic extremal up to `s_max`.
///
/// Scans the quartic for sign-change zeros on `[s*, s_max]` at
/// resolution `grid_step` — past `s*` the vertical part always has rank
/// 4, so each zero lands in `Σ₁ ∪ Σ₂` — and classifies each refined
/// zero. With a rational certificate the lattice times `kπq/φ₂` (where
/// the horizontal part vanishes and the quartic zero is tangential) are
/// included as well. Hits are reported with their rank and stratum
/// rather than silently filtered, so near-tangential cases stay
/// auditable.
pub fn find_c4_hits(
    p: &ExtremalParams,
    s_max: f64,
    grid_step: f64,
    ratio: Option<(u64, u64)>,
) -> Result<Vec<C4Hit>> {
    p.require_generic()?;
    if !(grid_step > 0.0 && s_max.is_finite()) {
        return Err(Error::Config(format!(
            "need a positive grid step and finite s_max, got {grid_step}, {s_max}"
        )));
    }
    let s0 = s_star(p.phi1, p.phi2)?;
    let mut times: Vec<f64> = Vec::new();
    if s_max > s0 {
        let grid = ((s_max - s0) / grid_step).ceil() as usize;
        times = find_d_zeros(p, s0, s_max, grid.max(1))?;
    }
    if let Some((num, den)) = ratio {
        // Validates the certificate as a side effect.
        cut_time_rational(p, num, den)?;
        let period = std::f64::consts::PI * den as f64 / p.phi2;
        let mut k = 1;
        while k as f64 * period <= s_max {
            times.push(k as f64 * period);
            k += 1;
        }
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    }
    let (r1, r2) = (p.r1(), p.r2());
    Ok(times
        .into_iter()
        .map(|s| {
            let g = trajectory(p, s);
            C4Hit {
                s,
                stratum: classify_c4(&g, CLASSIFY_TOL),
                quartic_d: specfun::quartic_d(s, r1, r2, p.phi1, p.phi2),
                rank_t: conjugacy::bivector_rank(&g.t, CLASSIFY_TOL),
            }
        })
        .collect())
}
