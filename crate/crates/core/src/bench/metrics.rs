//! Accuracy, singularity and interpolation-quality metrics.

use crate::convert::{quat_to_matrix, Rotation};
use crate::error::Result;
use crate::interp::{InterpMethod, Interpolator};
use crate::repr::Representation;
use crate::rng::Rng;
use crate::so3::{geodesic_distance, sample_uniform, RotationMatrix, UnitQuaternion};
use crate::Mat3;

use super::BenchConfig;

/// Derivative samples are spread over `[DERIV_T_MIN, 1 − DERIV_T_MIN]`.
pub const DERIV_T_MIN: f64 = 0.01;

/// Frobenius gap above which `R(q)` and `R(−q)` count as different.
pub const DOUBLE_COVER_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityResult {
    pub eps_stab: f64,
    pub failures: usize,
    pub samples: usize,
}

/// Mean geodesic error of `matrix → repr → matrix`; a failed conversion counts as π.
pub(crate) fn stability(repr: &dyn Representation, cfg: &BenchConfig, rng: &mut Rng) -> StabilityResult {
    let mut sum = 0.0;
    let mut failures = 0;
    for _ in 0..cfg.n_stability {
        let r = repr.stability_sample(rng);
        match repr.round_trip(&Rotation::Matrix(r)) {
            Ok(back) => sum += geodesic_distance(&r, &back),
            Err(_) => {
                failures += 1;
                sum += std::f64::consts::PI;
            }
        }
    }
    StabilityResult {
        eps_stab: sum / cfg.n_stability as f64,
        failures,
        samples: cfg.n_stability,
    }
}

/// Fraction of problematic-region samples whose perturbed parameters do not
/// survive a trip through the rotation.
///
/// Each sample `p` is perturbed by a uniform direction of norm
/// `cfg.perturbation_norm` and projected back to valid parameters `p̃`. The
/// sample counts when re-encoding `R(p̃)` lands more than `cfg.tau` away from `p̃`
/// in chart coordinates, i.e. the chart cannot tell nearby parameters apart.
pub(crate) fn gimbal(repr: &dyn Representation, cfg: &BenchConfig, rng: &mut Rng) -> Result<f64> {
    let mut hits = 0usize;
    for _ in 0..cfg.m_singularity {
        let p = repr.singular_sample(rng)?;
        let d = rng.direction(p.len(), cfg.perturbation_norm);
        let raw: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a + b).collect();
        let moved = repr.project(&raw)?;
        let flagged = match repr.decode(&moved).and_then(|r| repr.encode(&r)) {
            Ok(back) => !(repr.param_distance(&back, &moved) <= cfg.tau),
            Err(_) => true,
        };
        hits += flagged as usize;
    }
    Ok(hits as f64 / cfg.m_singularity as f64)
}

/// Fraction of Haar quaternions where `‖to_matrix(q) − to_matrix(−q)‖_F` exceeds
/// [`DOUBLE_COVER_TOL`] for the supplied converter.
pub fn double_cover_check_with(
    cfg: &BenchConfig,
    rng: &mut Rng,
    to_matrix: impl Fn(&UnitQuaternion) -> Result<Mat3>,
) -> f64 {
    let mut hits = 0usize;
    for _ in 0..cfg.m_singularity {
        let q = sample_uniform(rng);
        let differs = match (to_matrix(&q), to_matrix(&q.negate())) {
            (Ok(a), Ok(b)) => !((a - b).norm() <= DOUBLE_COVER_TOL),
            _ => true,
        };
        hits += differs as usize;
    }
    hits as f64 / cfg.m_singularity as f64
}

pub(crate) fn double_cover_for(repr: &dyn Representation, cfg: &BenchConfig, rng: &mut Rng) -> f64 {
    double_cover_check_with(cfg, rng, |q| {
        repr.round_trip(&Rotation::Quaternion(*q)).map(|r| r.into_inner())
    })
}

/// Shipped conversion, `R(q)` with no intermediate representation.
pub(crate) fn shipped_quat_to_matrix(q: &UnitQuaternion) -> Result<Mat3> {
    Ok(quat_to_matrix(q).into_inner())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathMetrics {
    pub path_length: f64,
    pub geodesic_length: f64,
    pub eps_geo: f64,
}

/// Polyline length through `cfg.k_path` uniform samples and its relative excess
/// over the geodesic distance between the endpoints.
pub fn path_metrics(
    path: &dyn Interpolator,
    r1: &RotationMatrix,
    r2: &RotationMatrix,
    cfg: &BenchConfig,
) -> Result<PathMetrics> {
    let k = cfg.k_path;
    let mut length = 0.0;
    let mut prev = path.eval(0.0)?;
    for i in 1..k {
        let cur = path.eval(i as f64 / (k - 1) as f64)?;
        length += geodesic_distance(&prev, &cur);
        prev = cur;
    }
    let geo = geodesic_distance(r1, r2);
    Ok(PathMetrics {
        path_length: length,
        geodesic_length: geo,
        eps_geo: (length - geo).abs() / (geo + cfg.delta_reg),
    })
}

/// Coefficient of variation of the angular speed at `cfg.k_deriv` interior points,
/// estimated by central differences with step `cfg.dt`.
pub fn derivative_continuity(path: &dyn Interpolator, cfg: &BenchConfig) -> Result<f64> {
    let k = cfg.k_deriv;
    let span = 1.0 - 2.0 * DERIV_T_MIN;
    let mut speeds = Vec::with_capacity(k);
    for i in 0..k {
        let t = if k == 1 {
            0.5
        } else {
            DERIV_T_MIN + span * i as f64 / (k - 1) as f64
        };
        let a = path.eval(t - cfg.dt)?;
        let b = path.eval(t + cfg.dt)?;
        speeds.push(geodesic_distance(&a, &b) / (2.0 * cfg.dt));
    }
    let mean = speeds.iter().sum::<f64>() / k as f64;
    let var = speeds.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / k as f64;
    Ok(var.sqrt() / (mean + cfg.delta_reg))
}

/// Haar endpoint pairs shared by every interpolation family.
pub fn endpoint_pairs(cfg: &BenchConfig, rng: &mut Rng) -> Vec<(RotationMatrix, RotationMatrix)> {
    (0..cfg.n_pairs)
        .map(|_| {
            (
                quat_to_matrix(&sample_uniform(rng)),
                quat_to_matrix(&sample_uniform(rng)),
            )
        })
        .collect()
}

/// Means over endpoint pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpSummary {
    pub path_length: f64,
    pub geodesic_length: f64,
    pub eps_geo: f64,
    pub sigma_deriv: f64,
}

pub fn summarize_interpolation(
    method: InterpMethod,
    pairs: &[(RotationMatrix, RotationMatrix)],
    cfg: &BenchConfig,
) -> Result<InterpSummary> {
    let mut acc = InterpSummary {
        path_length: 0.0,
        geodesic_length: 0.0,
        eps_geo: 0.0,
        sigma_deriv: 0.0,
    };
    for (r1, r2) in pairs {
        let path = method.build(r1, r2)?;
        let pm = path_metrics(path.as_ref(), r1, r2, cfg)?;
        acc.path_length += pm.path_length;
        acc.geodesic_length += pm.geodesic_length;
        acc.eps_geo += pm.eps_geo;
        acc.sigma_deriv += derivative_continuity(path.as_ref(), cfg)?;
    }
    let n = pairs.len() as f64;
    acc.path_length /= n;
    acc.geodesic_length /= n;
    acc.eps_geo /= n;
    acc.sigma_deriv /= n;
    Ok(acc)
}
