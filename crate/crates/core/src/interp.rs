//! Interpolation families between two rotations.
//!
//! Every family implements [`Interpolator`]; [`InterpMethod::build`] constructs one
//! from rotation-matrix endpoints so the benchmark can treat them uniformly.

use std::fmt;
use std::str::FromStr;

use crate::compose::{quat_conjugate, quat_mul};
use crate::convert::{
    euler_to_matrix, exp_map, log_map, matrix_to_euler, matrix_to_quat, matrix_to_sixd,
    quat_to_matrix, sixd_to_matrix,
};
use crate::error::{Result, RotError};
use crate::probdist::{fisher_blend, fisher_mode, MatrixFisher};
use crate::so3::{EulerAngles, EulerConvention, RotationMatrix, RotationVector, SixD, UnitQuaternion};

/// Below this quaternion half-angle separation slerp falls back to nlerp.
pub const SLERP_NLERP_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InterpMethod {
    Slerp,
    Nlerp,
    MatrixGeodesic,
    LinearRotationVector,
    LinearSixd,
    LinearEuler,
    FisherBlend,
}

impl InterpMethod {
    pub const ALL: [InterpMethod; 7] = [
        InterpMethod::Slerp,
        InterpMethod::Nlerp,
        InterpMethod::MatrixGeodesic,
        InterpMethod::LinearRotationVector,
        InterpMethod::LinearSixd,
        InterpMethod::LinearEuler,
        InterpMethod::FisherBlend,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InterpMethod::Slerp => "slerp",
            InterpMethod::Nlerp => "nlerp",
            InterpMethod::MatrixGeodesic => "matrix-geodesic",
            InterpMethod::LinearRotationVector => "linear-rotation-vector",
            InterpMethod::LinearSixd => "linear-sixd",
            InterpMethod::LinearEuler => "linear-euler",
            InterpMethod::FisherBlend => "fisher-blend",
        }
    }

    /// Interpolator between two rotations, each endpoint mapped into the method's
    /// native representation. Fisher blending uses `10·R` as endpoint parameters.
    pub fn build(self, r1: &RotationMatrix, r2: &RotationMatrix) -> Result<Box<dyn Interpolator>> {
        Ok(match self {
            InterpMethod::Slerp => Box::new(SlerpPath::new(matrix_to_quat(r1), matrix_to_quat(r2))),
            InterpMethod::Nlerp => Box::new(NlerpPath::new(matrix_to_quat(r1), matrix_to_quat(r2))),
            InterpMethod::MatrixGeodesic => Box::new(MatrixGeodesicPath::new(*r1, *r2)),
            InterpMethod::LinearRotationVector => {
                Box::new(LinearRotationVectorPath::new(log_map(r1), log_map(r2)))
            }
            InterpMethod::LinearSixd => {
                Box::new(LinearSixdPath::new(matrix_to_sixd(r1), matrix_to_sixd(r2))?)
            }
            InterpMethod::LinearEuler => Box::new(LinearEulerPath::new(
                matrix_to_euler(r1, EulerConvention::ZYX)?,
                matrix_to_euler(r2, EulerConvention::ZYX)?,
            )?),
            InterpMethod::FisherBlend => Box::new(FisherBlendPath::new(
                MatrixFisher::new(r1.matrix() * 10.0)?,
                MatrixFisher::new(r2.matrix() * 10.0)?,
            )),
        })
    }
}

impl fmt::Display for InterpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterpMethod {
    type Err = RotError;

    fn from_str(s: &str) -> Result<Self> {
        InterpMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| RotError::Unsupported(format!("unknown interpolation method `{s}`")))
    }
}

/// A path `t ↦ R(t)` with `R(0)` and `R(1)` at the endpoints.
pub trait Interpolator: Send + Sync {
    fn method(&self) -> InterpMethod;

    fn eval(&self, t: f64) -> Result<RotationMatrix>;

    /// The path point in the method's native component layout.
    fn components(&self, t: f64) -> Result<Vec<f64>>;
}

fn hemisphere(q1: &UnitQuaternion, q2: &UnitQuaternion) -> UnitQuaternion {
    if q1.dot(q2) < 0.0 {
        q2.negate()
    } else {
        *q2
    }
}

/// Separation angle υ on S³, `2·atan2(‖q1 − q2‖, ‖q1 + q2‖)`.
fn separation(q1: &UnitQuaternion, q2: &UnitQuaternion) -> f64 {
    let a = q1.to_array();
    let b = q2.to_array();
    let (mut d2, mut s2) = (0.0, 0.0);
    for i in 0..4 {
        d2 += (a[i] - b[i]) * (a[i] - b[i]);
        s2 += (a[i] + b[i]) * (a[i] + b[i]);
    }
    2.0 * d2.sqrt().atan2(s2.sqrt())
}

fn blend4(q1: &UnitQuaternion, q2: &UnitQuaternion, w1: f64, w2: f64) -> [f64; 4] {
    let a = q1.to_array();
    let b = q2.to_array();
    [
        w1 * a[0] + w2 * b[0],
        w1 * a[1] + w2 * b[1],
        w1 * a[2] + w2 * b[2],
        w1 * a[3] + w2 * b[3],
    ]
}

/// Normalized affine blend on the hemisphere-corrected pair.
pub fn nlerp(q1: &UnitQuaternion, q2: &UnitQuaternion, t: f64) -> Result<UnitQuaternion> {
    let q2 = hemisphere(q1, q2);
    let [w, x, y, z] = blend4(q1, &q2, 1.0 - t, t);
    UnitQuaternion::normalize(w, x, y, z).map_err(|_| RotError::Interpolation {
        t,
        reason: "quaternion blend vanished".into(),
    })
}

/// Constant-speed great-arc interpolation, falling back to [`nlerp`] when the
/// hemisphere-corrected endpoints are closer than [`SLERP_NLERP_THRESHOLD`].
pub fn slerp(q1: &UnitQuaternion, q2: &UnitQuaternion, t: f64) -> UnitQuaternion {
    let q2 = hemisphere(q1, q2);
    let upsilon = separation(q1, &q2);
    if upsilon == 0.0 {
        return *q1;
    }
    if upsilon < SLERP_NLERP_THRESHOLD {
        // After the hemisphere fix the blend cannot vanish.
        return nlerp(q1, &q2, t).unwrap_or(*q1);
    }
    let s = upsilon.sin();
    let w1 = ((1.0 - t) * upsilon).sin() / s;
    let w2 = (t * upsilon).sin() / s;
    let [w, x, y, z] = blend4(q1, &q2, w1, w2);
    UnitQuaternion::normalize(w, x, y, z).unwrap_or(*q1)
}

/// `R1 exp(t log(R1ᵀ R2))`.
pub fn matrix_geodesic(r1: &RotationMatrix, r2: &RotationMatrix, t: f64) -> RotationMatrix {
    MatrixGeodesicPath::new(*r1, *r2).at(t)
}

pub fn linear_rotation_vector(v1: &RotationVector, v2: &RotationVector, t: f64) -> RotationMatrix {
    exp_map(&RotationVector(v1.vector() * (1.0 - t) + v2.vector() * t))
}

/// Affine blend of both 6D columns followed by Gram-Schmidt.
pub fn linear_sixd(s1: &SixD, s2: &SixD, t: f64) -> Result<RotationMatrix> {
    let blend = SixD {
        a1: s1.a1 * (1.0 - t) + s2.a1 * t,
        a2: s1.a2 * (1.0 - t) + s2.a2 * t,
    };
    sixd_to_matrix(&blend).map_err(|e| RotError::Interpolation {
        t,
        reason: e.to_string(),
    })
}

/// Component-wise linear blend of Euler angles sharing a convention.
pub fn linear_euler(e1: &EulerAngles, e2: &EulerAngles, t: f64) -> RotationMatrix {
    let lerp = |a: f64, b: f64| a * (1.0 - t) + b * t;
    euler_to_matrix(&EulerAngles::new(
        lerp(e1.alpha, e2.alpha),
        lerp(e1.beta, e2.beta),
        lerp(e1.gamma, e2.gamma),
        e1.convention,
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct SlerpPath {
    q1: UnitQuaternion,
    q2: UnitQuaternion,
}

impl SlerpPath {
    pub fn new(q1: UnitQuaternion, q2: UnitQuaternion) -> Self {
        Self { q1, q2 }
    }

    pub fn at(&self, t: f64) -> UnitQuaternion {
        slerp(&self.q1, &self.q2, t)
    }
}

impl Interpolator for SlerpPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::Slerp
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        Ok(quat_to_matrix(&self.at(t)))
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.at(t).to_array().to_vec())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NlerpPath {
    q1: UnitQuaternion,
    q2: UnitQuaternion,
}

impl NlerpPath {
    pub fn new(q1: UnitQuaternion, q2: UnitQuaternion) -> Self {
        Self { q1, q2 }
    }
}

impl Interpolator for NlerpPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::Nlerp
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        Ok(quat_to_matrix(&nlerp(&self.q1, &self.q2, t)?))
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        Ok(nlerp(&self.q1, &self.q2, t)?.to_array().to_vec())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MatrixGeodesicPath {
    r1: RotationMatrix,
    delta: RotationVector,
}

impl MatrixGeodesicPath {
    pub fn new(r1: RotationMatrix, r2: RotationMatrix) -> Self {
        let rel = RotationMatrix::new_unchecked(r1.matrix().transpose() * r2.matrix());
        Self {
            r1,
            delta: log_map(&rel),
        }
    }

    pub fn at(&self, t: f64) -> RotationMatrix {
        let step = exp_map(&RotationVector(self.delta.vector() * t));
        RotationMatrix::new_unchecked(self.r1.matrix() * step.matrix())
    }
}

impl Interpolator for MatrixGeodesicPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::MatrixGeodesic
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        Ok(self.at(t))
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.at(t).to_row_major().to_vec())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LinearRotationVectorPath {
    v1: RotationVector,
    v2: RotationVector,
}

impl LinearRotationVectorPath {
    pub fn new(v1: RotationVector, v2: RotationVector) -> Self {
        Self { v1, v2 }
    }
}

impl Interpolator for LinearRotationVectorPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::LinearRotationVector
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        Ok(linear_rotation_vector(&self.v1, &self.v2, t))
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        let v = self.v1.vector() * (1.0 - t) + self.v2.vector() * t;
        Ok(v.as_slice().to_vec())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LinearSixdPath {
    s1: SixD,
    s2: SixD,
}

impl LinearSixdPath {
    /// Endpoints are replaced by the first two columns of their Gram-Schmidt rotation.
    pub fn new(s1: SixD, s2: SixD) -> Result<Self> {
        Ok(Self {
            s1: matrix_to_sixd(&sixd_to_matrix(&s1)?),
            s2: matrix_to_sixd(&sixd_to_matrix(&s2)?),
        })
    }
}

impl Interpolator for LinearSixdPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::LinearSixd
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        linear_sixd(&self.s1, &self.s2, t)
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        Ok(matrix_to_sixd(&self.eval(t)?).to_array().to_vec())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LinearEulerPath {
    e1: EulerAngles,
    e2: EulerAngles,
}

impl LinearEulerPath {
    pub fn new(e1: EulerAngles, e2: EulerAngles) -> Result<Self> {
        if e1.convention != e2.convention {
            return Err(RotError::Unsupported(format!(
                "Euler endpoints use different conventions ({} vs {})",
                e1.convention, e2.convention
            )));
        }
        Ok(Self { e1, e2 })
    }
}

impl Interpolator for LinearEulerPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::LinearEuler
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        Ok(linear_euler(&self.e1, &self.e2, t))
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        let a = self.e1.angles();
        let b = self.e2.angles();
        Ok((0..3).map(|i| a[i] * (1.0 - t) + b[i] * t).collect())
    }
}

/// Blend of Fisher parameters; the rotation view of the path is the blend's mode.
#[derive(Clone, Copy, Debug)]
pub struct FisherBlendPath {
    f1: MatrixFisher,
    f2: MatrixFisher,
}

impl FisherBlendPath {
    pub fn new(f1: MatrixFisher, f2: MatrixFisher) -> Self {
        Self { f1, f2 }
    }

    pub fn at(&self, t: f64) -> MatrixFisher {
        fisher_blend(&self.f1, &self.f2, t)
    }
}

impl Interpolator for FisherBlendPath {
    fn method(&self) -> InterpMethod {
        InterpMethod::FisherBlend
    }
    fn eval(&self, t: f64) -> Result<RotationMatrix> {
        fisher_mode(&self.at(t)).map_err(|e| RotError::Interpolation {
            t,
            reason: e.to_string(),
        })
    }
    fn components(&self, t: f64) -> Result<Vec<f64>> {
        let f = *self.at(t).parameter();
        Ok((0..3).flat_map(|i| (0..3).map(move |j| f[(i, j)])).collect())
    }
}

/// Relative rotation between consecutive quaternions without building matrices.
pub fn quat_step_angle(a: &UnitQuaternion, b: &UnitQuaternion) -> f64 {
    let d = quat_mul(&quat_conjugate(a), b);
    2.0 * d.vector().norm().atan2(d.w().abs())
}
