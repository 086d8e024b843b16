//! Named representation strategies for the benchmark.
//!
//! A [`Representation`] bundles everything the metric suites need to know about one
//! way of storing a rotation: its native round trip, its parameter chart, its
//! interpolation family and its timing kernels. [`Registry`] looks them up by tag.

use std::f64::consts::{FRAC_PI_2, PI};
use std::hint::black_box;

use crate::bench::timing::{measure, Timing, TimingPlan};
use crate::compose::{
    compose_axis_angle, compose_euler, compose_rotation_vector, compose_sixd, matrix_mul, quat_mul,
};
use crate::convert::{
    axis_angle_to_matrix, convert, euler_to_matrix, exp_map, log_map, matrix_to_axis_angle,
    matrix_to_euler, matrix_to_quat, matrix_to_sixd, quat_to_matrix, sixd_to_matrix, ReprKind,
    Rotation,
};
use crate::error::{Result, RotError};
use crate::interp::{
    linear_euler, linear_rotation_vector, linear_sixd, matrix_geodesic, slerp, InterpMethod,
    Interpolator,
};
use crate::rng::Rng;
use crate::so3::{
    project_to_so3, sample_uniform, AxisAngle, EulerAngles, EulerConvention, RotationMatrix,
    RotationVector, SixD, UnitQuaternion,
};
use crate::{Mat3, Vec3};

/// Half-width of the β exclusion around ±π/2 used for Euler stability samples.
pub const EULER_STABILITY_MARGIN: f64 = 0.05;
/// Half-width of the β band sampled for Euler gimbal susceptibility.
pub const EULER_GIMBAL_BAND: f64 = 0.01;

pub trait Representation: Send + Sync {
    /// Registry key, e.g. `quaternion`.
    fn tag(&self) -> &'static str;

    /// Human-readable row label.
    fn label(&self) -> &'static str;

    fn storage_bytes(&self) -> usize;

    fn hardware_score(&self) -> Option<f64>;

    fn ml_score(&self) -> Option<f64>;

    /// Distributions over rotations rather than point representations.
    fn is_probabilistic(&self) -> bool {
        false
    }

    /// Conversion target; `None` when the representation is not a point on SO(3).
    fn kind(&self) -> Option<ReprKind>;

    /// Rotation from an arbitrary source through this representation and back to a matrix.
    fn round_trip(&self, src: &Rotation) -> Result<RotationMatrix> {
        let kind = self.kind().ok_or_else(|| self.unsupported("round trip"))?;
        convert(src, kind)?.to_matrix()
    }

    /// Rotation for the stability suite.
    fn stability_sample(&self, rng: &mut Rng) -> RotationMatrix {
        quat_to_matrix(&sample_uniform(rng))
    }

    /// Parameters of `r` in the representation's chart.
    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>>;

    fn decode(&self, p: &[f64]) -> Result<RotationMatrix>;

    /// Nearest valid parameter vector after a raw perturbation.
    fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        Ok(p.to_vec())
    }

    /// Distance between two parameter vectors in chart coordinates.
    fn param_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    /// Parameter point in the representation's problematic region.
    fn singular_sample(&self, rng: &mut Rng) -> Result<Vec<f64>> {
        self.encode(&quat_to_matrix(&sample_uniform(rng)))
    }

    fn interp_method(&self) -> Option<InterpMethod>;

    fn interpolator(&self, r1: &RotationMatrix, r2: &RotationMatrix) -> Result<Box<dyn Interpolator>> {
        self.interp_method()
            .ok_or_else(|| self.unsupported("interpolation"))?
            .build(r1, r2)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing>;

    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing>;

    /// Per-rotation cost of composing a batch element-wise and converting each
    /// result to a rotation matrix.
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing>;

    #[doc(hidden)]
    fn unsupported(&self, what: &str) -> RotError {
        RotError::Unsupported(format!("{} has no {what}", self.tag()))
    }
}

fn haar(rng: &mut Rng) -> RotationMatrix {
    quat_to_matrix(&sample_uniform(rng))
}

fn expect_len(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(RotError::InvalidConfig(format!(
            "expected {n} parameters, got {}",
            p.len()
        )));
    }
    Ok(())
}

fn wrapped_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// Pre-generated operands shared by the timing kernels.
fn operands<T>(plan: &TimingPlan, rng: &mut Rng, mut f: impl FnMut(&RotationMatrix) -> T) -> Vec<(T, T)> {
    (0..plan.pool_size())
        .map(|_| (f(&haar(rng)), f(&haar(rng))))
        .collect()
}

fn interp_operands<T>(
    plan: &TimingPlan,
    rng: &mut Rng,
    mut f: impl FnMut(&RotationMatrix) -> T,
) -> Vec<(T, T, f64)> {
    (0..plan.pool_size())
        .map(|_| (f(&haar(rng)), f(&haar(rng)), rng.uniform()))
        .collect()
}

fn batch_timing<T, C, M>(plan: &TimingPlan, pairs: Vec<(T, T)>, compose: C, to_matrix: M) -> Timing
where
    C: Fn(&T, &T) -> T,
    M: Fn(&T) -> RotationMatrix,
{
    let b = plan.batch;
    let batches: Vec<&[(T, T)]> = pairs.chunks_exact(b).collect();
    let mut out = vec![RotationMatrix::identity(); b];
    let mut timing = measure(plan, &batches, |batch| {
        for (slot, (x, y)) in out.iter_mut().zip(batch.iter()) {
            *slot = to_matrix(&compose(x, y));
        }
        black_box(&out);
    });
    timing.micros /= b as f64;
    timing
}

fn batch_pairs<T>(plan: &TimingPlan, rng: &mut Rng, f: impl FnMut(&RotationMatrix) -> T) -> Vec<(T, T)> {
    let n = plan.batch * plan.batch_pool_size();
    let mut f = f;
    (0..n).map(|_| (f(&haar(rng)), f(&haar(rng)))).collect()
}

/// Intrinsic ZYX Euler angles.
pub struct Euler;

impl Representation for Euler {
    fn tag(&self) -> &'static str {
        "euler"
    }
    fn label(&self) -> &'static str {
        "Euler"
    }
    fn storage_bytes(&self) -> usize {
        24
    }
    fn hardware_score(&self) -> Option<f64> {
        Some(0.6)
    }
    fn ml_score(&self) -> Option<f64> {
        Some(0.3)
    }
    fn kind(&self) -> Option<ReprKind> {
        Some(ReprKind::Euler(EulerConvention::ZYX))
    }

    /// Haar samples rejected within the margin of `|β| = π/2`.
    fn stability_sample(&self, rng: &mut Rng) -> RotationMatrix {
        loop {
            let r = haar(rng);
            let e = matrix_to_euler(&r, EulerConvention::ZYX).expect("ZYX is supported");
            if e.beta.abs() <= FRAC_PI_2 - EULER_STABILITY_MARGIN {
                return r;
            }
        }
    }

    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>> {
        Ok(matrix_to_euler(r, EulerConvention::ZYX)?.angles().to_vec())
    }
    fn decode(&self, p: &[f64]) -> Result<RotationMatrix> {
        expect_len(p, 3)?;
        Ok(euler_to_matrix(&EulerAngles::zyx(p[0], p[1], p[2])))
    }
    fn param_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| wrapped_diff(*x, *y).powi(2))
            .sum::<f64>()
            .sqrt()
    }
    /// `α, γ` uniform on the circle, `β` uniform in the band around `π/2`.
    fn singular_sample(&self, rng: &mut Rng) -> Result<Vec<f64>> {
        Ok(vec![
            rng.uniform_range(-PI, PI),
            rng.uniform_range(FRAC_PI_2 - EULER_GIMBAL_BAND, FRAC_PI_2 + EULER_GIMBAL_BAND),
            rng.uniform_range(-PI, PI),
        ])
    }

    fn interp_method(&self) -> Option<InterpMethod> {
        Some(InterpMethod::LinearEuler)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = operands(plan, rng, |r| matrix_to_euler(r, EulerConvention::ZYX).unwrap());
        Some(measure(plan, &ops, |(a, b)| black_box(compose_euler(a, b))))
    }
    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = interp_operands(plan, rng, |r| matrix_to_euler(r, EulerConvention::ZYX).unwrap());
        Some(measure(plan, &ops, |(a, b, t)| black_box(linear_euler(a, b, *t))))
    }
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let pairs = batch_pairs(plan, rng, |r| matrix_to_euler(r, EulerConvention::ZYX).unwrap());
        Some(batch_timing(
            plan,
            pairs,
            |a, b| compose_euler(a, b).unwrap_or(*a),
            euler_to_matrix,
        ))
    }
}

/// Unit axis with an angle in `[0, π]`.
pub struct AxisAngleRepr;

impl Representation for AxisAngleRepr {
    fn tag(&self) -> &'static str {
        "axis-angle"
    }
    fn label(&self) -> &'static str {
        "Axis-angle"
    }
    fn storage_bytes(&self) -> usize {
        24
    }
    fn hardware_score(&self) -> Option<f64> {
        Some(0.8)
    }
    fn ml_score(&self) -> Option<f64> {
        Some(0.7)
    }
    fn kind(&self) -> Option<ReprKind> {
        Some(ReprKind::AxisAngle)
    }

    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>> {
        let aa = matrix_to_axis_angle(r);
        let u = aa.axis();
        Ok(vec![u.x, u.y, u.z, aa.angle()])
    }
    fn decode(&self, p: &[f64]) -> Result<RotationMatrix> {
        expect_len(p, 4)?;
        Ok(axis_angle_to_matrix(&AxisAngle::new(Vec3::new(p[0], p[1], p[2]), p[3])?))
    }
    fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        expect_len(p, 4)?;
        let u = Vec3::new(p[0], p[1], p[2]).normalize();
        Ok(vec![u.x, u.y, u.z, p[3]])
    }

    fn interp_method(&self) -> Option<InterpMethod> {
        Some(InterpMethod::LinearRotationVector)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = operands(plan, rng, matrix_to_axis_angle);
        Some(measure(plan, &ops, |(a, b)| black_box(compose_axis_angle(a, b))))
    }
    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = interp_operands(plan, rng, matrix_to_axis_angle);
        Some(measure(plan, &ops, |(a, b, t)| {
            black_box(linear_rotation_vector(
                &a.to_rotation_vector(),
                &b.to_rotation_vector(),
                *t,
            ))
        }))
    }
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let pairs = batch_pairs(plan, rng, matrix_to_axis_angle);
        Some(batch_timing(plan, pairs, compose_axis_angle, axis_angle_to_matrix))
    }
}

pub struct Quaternion;

impl Representation for Quaternion {
    fn tag(&self) -> &'static str {
        "quaternion"
    }
    fn label(&self) -> &'static str {
        "Quaternion"
    }
    fn storage_bytes(&self) -> usize {
        32
    }
    fn hardware_score(&self) -> Option<f64> {
        Some(0.9)
    }
    fn ml_score(&self) -> Option<f64> {
        Some(0.8)
    }
    fn kind(&self) -> Option<ReprKind> {
        Some(ReprKind::Quaternion)
    }

    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>> {
        Ok(matrix_to_quat(r).to_array().to_vec())
    }
    fn decode(&self, p: &[f64]) -> Result<RotationMatrix> {
        expect_len(p, 4)?;
        Ok(quat_to_matrix(&UnitQuaternion::new(p[0], p[1], p[2], p[3])?))
    }
    fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        expect_len(p, 4)?;
        Ok(UnitQuaternion::normalize(p[0], p[1], p[2], p[3])?.to_array().to_vec())
    }

    fn interp_method(&self) -> Option<InterpMethod> {
        Some(InterpMethod::Slerp)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = operands(plan, rng, matrix_to_quat);
        Some(measure(plan, &ops, |(a, b)| black_box(quat_mul(a, b))))
    }
    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = interp_operands(plan, rng, matrix_to_quat);
        Some(measure(plan, &ops, |(a, b, t)| black_box(slerp(a, b, *t))))
    }
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let pairs = batch_pairs(plan, rng, matrix_to_quat);
        Some(batch_timing(plan, pairs, quat_mul, quat_to_matrix))
    }
}

pub struct Matrix;

impl Representation for Matrix {
    fn tag(&self) -> &'static str {
        "matrix"
    }
    fn label(&self) -> &'static str {
        "Rotation matrix"
    }
    fn storage_bytes(&self) -> usize {
        72
    }
    fn hardware_score(&self) -> Option<f64> {
        Some(0.7)
    }
    fn ml_score(&self) -> Option<f64> {
        Some(0.6)
    }
    fn kind(&self) -> Option<ReprKind> {
        Some(ReprKind::Matrix)
    }

    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>> {
        Ok(r.to_row_major().to_vec())
    }
    fn decode(&self, p: &[f64]) -> Result<RotationMatrix> {
        expect_len(p, 9)?;
        RotationMatrix::new(Mat3::from_row_slice(p))
    }
    fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        expect_len(p, 9)?;
        Ok(project_to_so3(&Mat3::from_row_slice(p))?.to_row_major().to_vec())
    }

    fn interp_method(&self) -> Option<InterpMethod> {
        Some(InterpMethod::MatrixGeodesic)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = operands(plan, rng, |r| *r);
        Some(measure(plan, &ops, |(a, b)| black_box(matrix_mul(a, b))))
    }
    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = interp_operands(plan, rng, |r| *r);
        Some(measure(plan, &ops, |(a, b, t)| black_box(matrix_geodesic(a, b, *t))))
    }
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let pairs = batch_pairs(plan, rng, |r| *r);
        Some(batch_timing(plan, pairs, matrix_mul, |r| *r))
    }
}

/// Rotation vector `θu` with `‖v‖ ≤ π`, mapped through exp/log.
pub struct ExpMap;

impl Representation for ExpMap {
    fn tag(&self) -> &'static str {
        "exp-map"
    }
    fn label(&self) -> &'static str {
        "Exponential map"
    }
    fn storage_bytes(&self) -> usize {
        24
    }
    fn hardware_score(&self) -> Option<f64> {
        Some(0.6)
    }
    fn ml_score(&self) -> Option<f64> {
        Some(0.7)
    }
    fn kind(&self) -> Option<ReprKind> {
        Some(ReprKind::RotationVector)
    }

    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>> {
        Ok(log_map(r).vector().as_slice().to_vec())
    }
    fn decode(&self, p: &[f64]) -> Result<RotationMatrix> {
        expect_len(p, 3)?;
        Ok(exp_map(&RotationVector::new(p[0], p[1], p[2])))
    }

    fn interp_method(&self) -> Option<InterpMethod> {
        Some(InterpMethod::LinearRotationVector)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = operands(plan, rng, log_map);
        Some(measure(plan, &ops, |(a, b)| black_box(compose_rotation_vector(a, b))))
    }
    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = interp_operands(plan, rng, log_map);
        Some(measure(plan, &ops, |(a, b, t)| black_box(linear_rotation_vector(a, b, *t))))
    }
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let pairs = batch_pairs(plan, rng, log_map);
        Some(batch_timing(plan, pairs, compose_rotation_vector, exp_map))
    }
}

/// First two columns of the rotation matrix, recovered by Gram-Schmidt.
pub struct SixDRepr;

impl Representation for SixDRepr {
    fn tag(&self) -> &'static str {
        "6d"
    }
    fn label(&self) -> &'static str {
        "6D continuous"
    }
    fn storage_bytes(&self) -> usize {
        48
    }
    fn hardware_score(&self) -> Option<f64> {
        Some(0.5)
    }
    fn ml_score(&self) -> Option<f64> {
        Some(0.9)
    }
    fn kind(&self) -> Option<ReprKind> {
        Some(ReprKind::SixD)
    }

    fn encode(&self, r: &RotationMatrix) -> Result<Vec<f64>> {
        Ok(matrix_to_sixd(r).to_array().to_vec())
    }
    fn decode(&self, p: &[f64]) -> Result<RotationMatrix> {
        expect_len(p, 6)?;
        sixd_to_matrix(&SixD::new(Vec3::new(p[0], p[1], p[2]), Vec3::new(p[3], p[4], p[5]))?)
    }
    fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        let r = self.decode(p)?;
        self.encode(&r)
    }

    fn interp_method(&self) -> Option<InterpMethod> {
        Some(InterpMethod::LinearSixd)
    }

    fn time_composition(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = operands(plan, rng, matrix_to_sixd);
        Some(measure(plan, &ops, |(a, b)| black_box(compose_sixd(a, b))))
    }
    fn time_interpolation(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let ops = interp_operands(plan, rng, matrix_to_sixd);
        Some(measure(plan, &ops, |(a, b, t)| black_box(linear_sixd(a, b, *t))))
    }
    fn time_batch(&self, plan: &TimingPlan, rng: &mut Rng) -> Option<Timing> {
        let pairs = batch_pairs(plan, rng, matrix_to_sixd);
        Some(batch_timing(
            plan,
            pairs,
            |a, b| compose_sixd(a, b).unwrap_or(*a),
            |s| sixd_to_matrix(s).unwrap_or_else(|_| RotationMatrix::identity()),
        ))
    }
}

/// Matrix Fisher densities, listed for storage and heuristic comparison only.
pub struct Fisher;

impl Representation for Fisher {
    fn tag(&self) -> &'static str {
        "fisher"
    }
    fn label(&self) -> &'static str {
        "Matrix Fisher"
    }
    fn storage_bytes(&self) -> usize {
        72
    }
    fn hardware_score(&self) -> Option<f64> {
        None
    }
    fn ml_score(&self) -> Option<f64> {
        None
    }
    fn is_probabilistic(&self) -> bool {
        true
    }
    fn kind(&self) -> Option<ReprKind> {
        None
    }
    fn encode(&self, _r: &RotationMatrix) -> Result<Vec<f64>> {
        Err(self.unsupported("parameter chart"))
    }
    fn decode(&self, _p: &[f64]) -> Result<RotationMatrix> {
        Err(self.unsupported("parameter chart"))
    }
    fn interp_method(&self) -> Option<InterpMethod> {
        None
    }
    fn time_composition(&self, _plan: &TimingPlan, _rng: &mut Rng) -> Option<Timing> {
        None
    }
    fn time_interpolation(&self, _plan: &TimingPlan, _rng: &mut Rng) -> Option<Timing> {
        None
    }
    fn time_batch(&self, _plan: &TimingPlan, _rng: &mut Rng) -> Option<Timing> {
        None
    }
}

/// Representations keyed by tag, iterated in registration order.
pub struct Registry {
    entries: Vec<Box<dyn Representation>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// Euler, axis-angle, quaternion, matrix, exp-map, 6D, Fisher.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Euler));
        r.register(Box::new(AxisAngleRepr));
        r.register(Box::new(Quaternion));
        r.register(Box::new(Matrix));
        r.register(Box::new(ExpMap));
        r.register(Box::new(SixDRepr));
        r.register(Box::new(Fisher));
        r
    }

    /// Adds `repr`, replacing any entry with the same tag in place.
    pub fn register(&mut self, repr: Box<dyn Representation>) {
        match self.entries.iter().position(|e| e.tag() == repr.tag()) {
            Some(i) => self.entries[i] = repr,
            None => self.entries.push(repr),
        }
    }

    pub fn get(&self, tag: &str) -> Result<&dyn Representation> {
        self.entries
            .iter()
            .find(|e| e.tag() == tag)
            .map(|e| e.as_ref())
            .ok_or_else(|| RotError::UnknownRepresentation(tag.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Representation> {
        self.entries.iter().map(|e| e.as_ref())
    }

    pub fn tags(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.tag()).collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}
