//! Independent brute-force validators: fixed-step RK4 integration of the
//! horizontal system, finite-difference Jacobians of the endpoint chart,
//! and combinatorial minimization for vertical targets.
//!
//! Nothing here reuses the closed forms it checks: the integrator sees
//! only the control, the Jacobian sees only endpoint evaluations, and the
//! vertical minimizer enumerates lattice candidates.

use nalgebra::SMatrix;

use crate::algebra::{wedge, Bivector4, GroupElement, Point4};
use crate::extremal::{chart_endpoint_raw, control, ExtremalParams, FrameChart};
use crate::{Error, Result};

/// Hard cap on integration steps.
const MAX_STEPS: f64 = 1e8;

/// Fixed-step integrator configuration. Classical fixed-step RK4 is the
/// only method; the fixed step keeps outputs byte-stable across runs.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    /// Step size in time units.
    pub step: f64,
    /// Latest admissible end time.
    pub max_time: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-4,
            max_time: 1e3,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self, s_end: f64) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Config(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(s_end >= 0.0 && s_end.is_finite()) {
            return Err(Error::Config(format!(
                "end time must be nonnegative, got {s_end}"
            )));
        }
        if s_end > self.max_time {
            return Err(Error::Config(format!(
                "end time {s_end} exceeds configured max {}",
                self.max_time
            )));
        }
        if s_end / self.step > MAX_STEPS {
            return Err(Error::Config(format!(
                "{} steps exceed the {MAX_STEPS:.0} cap",
                (s_end / self.step).ceil()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct State {
    x: Point4,
    t: Bivector4,
}

/// Right side of the horizontal system `ẋ = u, ṫ = ½ x∧u`.
fn rhs(p: &ExtremalParams, s: f64, state: &State) -> State {
    let u = control(p, s);
    State {
        x: u,
        t: wedge(&state.x, &u).scale(0.5),
    }
}

fn axpy(a: f64, d: &State, y: &State) -> State {
    State {
        x: y.x + d.x * a,
        t: y.t + d.t * a,
    }
}

/// Classical RK4 integration of the horizontal system with the extremal
/// control; global error O(step⁴). The grid lands exactly on `s_end` by a
/// shortened final step.
pub fn integrate(p: &ExtremalParams, s_end: f64, cfg: &IntegratorConfig) -> Result<GroupElement> {
    cfg.validate(s_end)?;
    let mut state = State {
        x: Point4::ZERO,
        t: Bivector4::ZERO,
    };
    let mut s = 0.0;
    let n_full = (s_end / cfg.step).floor() as u64;
    for i in 0..=n_full {
        let h = if i < n_full { cfg.step } else { s_end - s };
        if h <= 0.0 {
            break;
        }
        let k1 = rhs(p, s, &state);
        let k2 = rhs(p, s + 0.5 * h, &axpy(0.5 * h, &k1, &state));
        let k3 = rhs(p, s + 0.5 * h, &axpy(0.5 * h, &k2, &state));
        let k4 = rhs(p, s + h, &axpy(h, &k3, &state));
        state = State {
            x: state.x + (k1.x + k2.x * 2.0 + k3.x * 2.0 + k4.x) * (h / 6.0),
            t: state.t + (k1.t + k2.t * 2.0 + k3.t * 2.0 + k4.t) * (h / 6.0),
        };
        s += h;
    }
    Ok(GroupElement::new(state.x, state.t))
}

/// The ten admissible chart directions, in the column order of the
/// analytic differential: six frame rotations then four coordinates.
#[derive(Debug, Clone, Copy)]
enum ChartDirection {
    Rotate(usize, usize),
    Coordinate(usize),
}

const DIRECTIONS: [ChartDirection; 10] = [
    ChartDirection::Rotate(0, 1), // u1 v1
    ChartDirection::Rotate(2, 3), // u2 v2
    ChartDirection::Rotate(0, 3), // u1 v2
    ChartDirection::Rotate(2, 1), // u2 v1
    ChartDirection::Rotate(0, 2), // u1 u2
    ChartDirection::Rotate(1, 3), // v1 v2
    ChartDirection::Coordinate(0),
    ChartDirection::Coordinate(1),
    ChartDirection::Coordinate(2),
    ChartDirection::Coordinate(3),
];

fn perturbed_endpoint(chart: &FrameChart, dir: ChartDirection, eps: f64) -> GroupElement {
    let mut frame = [chart.u1, chart.v1, chart.u2, chart.v2];
    let mut coords = [chart.r1, chart.r2, chart.phi1, chart.phi2];
    match dir {
        ChartDirection::Rotate(j, k) => {
            let (sin_e, cos_e) = eps.sin_cos();
            let a = frame[j];
            let b = frame[k];
            frame[j] = a * cos_e + b * sin_e;
            frame[k] = b * cos_e - a * sin_e;
        }
        ChartDirection::Coordinate(i) => coords[i] += eps,
    }
    chart_endpoint_raw(
        &frame[0], &frame[1], &frame[2], &frame[3], coords[0], coords[1], coords[2], coords[3],
    )
}

/// Components of a group element in the moving basis attached to a chart:
/// `(α₁, β₁, α₂, β₂)` for the horizontal part and the six wedges
/// `α₁∧β₁, α₁∧α₂, α₁∧β₂, β₁∧α₂, β₁∧β₂, α₂∧β₂` for the vertical part.
pub fn moving_basis_components(chart: &FrameChart, g: &GroupElement) -> [f64; 10] {
    let [al1, be1, al2, be2] = chart.alpha_beta();
    let pairs = [
        (al1, be1),
        (al1, al2),
        (al1, be2),
        (be1, al2),
        (be1, be2),
        (al2, be2),
    ];
    let mut out = [0.0; 10];
    for (i, v) in [al1, be1, al2, be2].iter().enumerate() {
        out[i] = g.x.dot(v) / v.norm_squared();
    }
    for (i, (a, b)) in pairs.iter().enumerate() {
        let w = wedge(a, b);
        out[4 + i] = g.t.dot(&w) / w.norm_squared();
    }
    out
}

/// Central-difference Jacobian of the endpoint map along the six frame
/// rotations and four coordinates, expressed in the moving basis of the
/// analytic differential (with its scale factors reinstated).
pub fn fd_jacobian(chart: &FrameChart, h: f64) -> SMatrix<f64, 10, 10> {
    assert!(
        (1e-7..=1e-3).contains(&h),
        "finite-difference step {h} outside [1e-7, 1e-3]"
    );
    let mut jac = SMatrix::<f64, 10, 10>::zeros();
    for (j, &dir) in DIRECTIONS.iter().enumerate() {
        let plus = perturbed_endpoint(chart, dir, h);
        let minus = perturbed_endpoint(chart, dir, -h);
        let cp = moving_basis_components(chart, &plus);
        let cm = moving_basis_components(chart, &minus);
        for i in 0..10 {
            jac[(i, j)] = (cp[i] - cm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Minimal length over lattice candidates reaching the vertical target
/// `t₁ x₁∧y₁ + t₂ x₂∧y₂`: candidates assign radii `r_k² = 4 n_k π t`
/// over integers `n₁ > n₂ ≥ 1` up to `N` and both plane pairings. The
/// optimum is `(n₁, n₂) = (2, 1)` with the larger coefficient on the
/// slower frequency, so the result is independent of `N ≥ 3`.
pub fn vertical_min_enumeration(t1: f64, t2: f64, n_max: u32) -> Result<f64> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Domain(format!(
            "vertical coefficients must be positive, got ({t1}, {t2})"
        )));
    }
    if n_max < 3 {
        return Err(Error::Config(format!("need N >= 3, got {n_max}")));
    }
    let (hi, lo) = if t1 >= t2 { (t1, t2) } else { (t2, t1) };
    let mut best = f64::INFINITY;
    for n1 in 2..=n_max {
        for n2 in 1..n1 {
            for (ta, tb) in [(hi, lo), (lo, hi)] {
                let len_sq = 4.0 * std::f64::consts::PI * (n1 as f64 * ta + n2 as f64 * tb);
                best = best.min(len_sq.sqrt());
            }
        }
    }
    Ok(best)
}

/// Smallest relative singular value `σ_min/σ_max` of the finite-difference
/// Jacobian at the scaled chart of `γ(·, p)` at time `s`; dips where the
/// endpoint map degenerates.
pub fn exp_singularity_probe(p: &ExtremalParams, s: f64, h: f64) -> Result<f64> {
    p.require_generic()?;
    if s.is_nan() || s <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "time must be positive, got {s}"
        )));
    }
    let scaled = p.scaled(s);
    let chart = crate::extremal::to_frame_chart(&scaled)?;
    let jac = fd_jacobian(&chart, h);
    let dm = nalgebra::DMatrix::from_column_slice(10, 10, jac.as_slice());
    let svd = dm.svd(false, false);
    let max = svd.singular_values.max();
    if max == 0.0 {
        return Ok(0.0);
    }
    let min = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(min / max)
}
