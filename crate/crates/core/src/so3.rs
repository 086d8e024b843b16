//! Rotation value types, validity checks, the geodesic metric and Haar sampling.

use std::fmt;

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RotError};
use crate::rng::Rng;
use crate::{Mat3, Vec3};

/// Tolerance on ‖RᵀR − I‖_F and |det R − 1| for a matrix to count as a rotation.
pub const ROTATION_TOL: f64 = 1e-9;
/// Axis-angle angles at or below this are treated as the identity.
pub const ZERO_ANGLE: f64 = 1e-12;

/// Unit quaternion, scalar first: `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Accepts components whose norm is within 1e-6 of 1 and renormalizes them.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < 1e-12 {
            return Err(RotError::Degenerate("zero quaternion".into()));
        }
        if (n - 1.0).abs() > 1e-6 {
            return Err(RotError::NotUnit { norm: n });
        }
        Ok(Self::from_unnormalized(w, x, y, z, n))
    }

    /// Normalizes any non-zero 4-vector.
    pub fn normalize(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < 1e-12 {
            return Err(RotError::Degenerate("zero quaternion".into()));
        }
        Ok(Self::from_unnormalized(w, x, y, z, n))
    }

    fn from_unnormalized(w: f64, x: f64, y: f64, z: f64, n: f64) -> Self {
        let inv = 1.0 / n;
        Self {
            w: w * inv,
            x: x * inv,
            y: y * inv,
            z: z * inv,
        }
    }

    /// Trusts the caller that the components are unit-norm.
    pub const fn new_unchecked(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn vector(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// The antipodal representative; same rotation.
    pub fn negate(&self) -> Self {
        Self::new_unchecked(-self.w, -self.x, -self.y, -self.z)
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// 3×3 orthonormal matrix with determinant +1, `(i, j)` indexing is row/column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(Mat3);

impl RotationMatrix {
    pub fn identity() -> Self {
        Self(Mat3::identity())
    }

    /// Validates `m` at [`ROTATION_TOL`].
    pub fn new(m: Mat3) -> Result<Self> {
        let check = validate(&m);
        if check.passed {
            Ok(Self(m))
        } else {
            Err(RotError::InvalidRotation {
                orthogonality: check.orthogonality,
                determinant: check.determinant,
            })
        }
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(Mat3::from_fn(|i, j| rows[i][j]))
    }

    pub const fn new_unchecked(m: Mat3) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_inner(self) -> Mat3 {
        self.0
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        let m = &self.0;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }

    /// Row-major flat copy.
    pub fn to_row_major(&self) -> [f64; 9] {
        let r = self.rows();
        [
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
        ]
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.0 * p
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

/// Euler axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// Whether the elementary rotations are about the moving (intrinsic) or fixed (extrinsic) frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    Intrinsic,
    Extrinsic,
}

/// Ordered axis triple plus frame flag. Angles `(alpha, beta, gamma)` belong to the
/// first, second and third axis of the sequence.
///
/// Intrinsic `(a1, a2, a3)` evaluates `R_a1(alpha) R_a2(beta) R_a3(gamma)`; extrinsic
/// reverses the product to `R_a3(gamma) R_a2(beta) R_a1(alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EulerConvention {
    axes: [Axis; 3],
    frame: Frame,
}

impl EulerConvention {
    /// Aerospace yaw-pitch-roll: `Rz(alpha) Ry(beta) Rx(gamma)`.
    pub const ZYX: Self = Self {
        axes: [Axis::Z, Axis::Y, Axis::X],
        frame: Frame::Intrinsic,
    };
    /// `Rx(alpha) Ry(beta) Rz(gamma)`.
    pub const XYZ: Self = Self {
        axes: [Axis::X, Axis::Y, Axis::Z],
        frame: Frame::Intrinsic,
    };

    /// Any of the twelve sequences where consecutive axes differ.
    pub fn new(axes: [Axis; 3], frame: Frame) -> Result<Self> {
        if axes[0] == axes[1] || axes[1] == axes[2] {
            return Err(RotError::UnsupportedConvention(format!(
                "{}{}{}: consecutive axes must differ",
                axes[0].letter(),
                axes[1].letter(),
                axes[2].letter()
            )));
        }
        Ok(Self { axes, frame })
    }

    /// All twelve sequences in the given frame.
    pub fn all(frame: Frame) -> Vec<Self> {
        let axes = [Axis::X, Axis::Y, Axis::Z];
        let mut out = Vec::with_capacity(12);
        for &a in &axes {
            for &b in &axes {
                for &c in &axes {
                    if let Ok(conv) = Self::new([a, b, c], frame) {
                        out.push(conv);
                    }
                }
            }
        }
        out
    }

    pub fn axes(&self) -> [Axis; 3] {
        self.axes
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn extrinsic(self) -> Self {
        Self {
            frame: Frame::Extrinsic,
            ..self
        }
    }
}

impl fmt::Display for EulerConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.axes;
        let name = format!("{}{}{}", a.letter(), b.letter(), c.letter());
        match self.frame {
            Frame::Intrinsic => f.write_str(&name),
            Frame::Extrinsic => write!(f, "{}-extrinsic", name.to_lowercase()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub convention: EulerConvention,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64, convention: EulerConvention) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            convention,
        }
    }

    pub fn zyx(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha, beta, gamma, EulerConvention::ZYX)
    }

    pub fn xyz(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha, beta, gamma, EulerConvention::XYZ)
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }
}

/// Unit axis and angle in `[0, π]`. The axis is `(0, 0, 1)` for the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    axis: Vec3,
    angle: f64,
}

impl AxisAngle {
    /// Normalizes the axis and reduces the angle to `[0, π]`, flipping the axis when
    /// the reduced angle is negative.
    pub fn new(axis: Vec3, angle: f64) -> Result<Self> {
        if !angle.is_finite() || !axis.iter().all(|c| c.is_finite()) {
            return Err(RotError::Degenerate("non-finite axis-angle".into()));
        }
        let mut angle = angle.rem_euclid(std::f64::consts::TAU);
        let mut axis = axis;
        if angle > std::f64::consts::PI {
            angle = std::f64::consts::TAU - angle;
            axis = -axis;
        }
        if angle <= ZERO_ANGLE {
            return Ok(Self::identity());
        }
        let n = axis.norm();
        if n < 1e-12 {
            return Err(RotError::Degenerate("zero rotation axis".into()));
        }
        Ok(Self {
            axis: axis / n,
            angle,
        })
    }

    pub fn identity() -> Self {
        Self {
            axis: Vec3::z(),
            angle: 0.0,
        }
    }

    pub(crate) fn new_unchecked(axis: Vec3, angle: f64) -> Self {
        Self { axis, angle }
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_rotation_vector(&self) -> RotationVector {
        RotationVector(self.axis * self.angle)
    }
}

/// Exponential coordinates `v = θ u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationVector(pub Vec3);

impl RotationVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self(Vec3::new(x, y, z))
    }

    pub fn angle(&self) -> f64 {
        self.0.norm()
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }

    /// Same rotation with `‖v‖ ≤ π`.
    pub fn canonical(&self) -> Self {
        let theta = self.0.norm();
        if theta <= std::f64::consts::PI {
            return *self;
        }
        let axis = self.0 / theta;
        let t = theta.rem_euclid(std::f64::consts::TAU);
        if t > std::f64::consts::PI {
            Self(-axis * (std::f64::consts::TAU - t))
        } else {
            Self(axis * t)
        }
    }

    pub fn to_axis_angle(&self) -> AxisAngle {
        let theta = self.0.norm();
        if theta <= ZERO_ANGLE {
            return AxisAngle::identity();
        }
        AxisAngle::new(self.0 / theta, theta).unwrap_or_else(|_| AxisAngle::identity())
    }
}

/// First two columns of a rotation, before Gram-Schmidt recovery.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SixD {
    pub a1: Vec3,
    pub a2: Vec3,
}

impl SixD {
    pub fn new(a1: Vec3, a2: Vec3) -> Result<Self> {
        let s = Self { a1, a2 };
        s.check()?;
        Ok(s)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let n1 = self.a1.norm();
        if !(n1 > 1e-12) {
            return Err(RotError::Degenerate(format!("6D first column has norm {n1:e}")));
        }
        let b1 = self.a1 / n1;
        let rejection = self.a2 - b1 * b1.dot(&self.a2);
        let nr = rejection.norm();
        if !(nr > 1e-12) {
            return Err(RotError::Degenerate(format!(
                "6D columns are parallel (rejection norm {nr:e})"
            )));
        }
        Ok(())
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.a1.x, self.a1.y, self.a1.z, self.a2.x, self.a2.y, self.a2.z,
        ]
    }
}

/// Residuals of a candidate rotation matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    /// ‖RᵀR − I‖_F
    pub orthogonality: f64,
    /// |det R − 1|
    pub determinant: f64,
    pub passed: bool,
}

pub fn validate(m: &Mat3) -> ValidationReport {
    let orthogonality = (m.transpose() * m - Mat3::identity()).norm();
    let determinant = (m.determinant() - 1.0).abs();
    let passed = orthogonality <= ROTATION_TOL && determinant <= ROTATION_TOL;
    ValidationReport {
        orthogonality,
        determinant,
        passed: passed && m.iter().all(|v| v.is_finite()),
    }
}

/// Frobenius-nearest rotation `U diag(1, 1, det(UVᵀ)) Vᵀ`.
pub fn project_to_so3(m: &Mat3) -> Result<RotationMatrix> {
    let (u, s, v_t) = svd3(m)?;
    let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(smin >= 1e-12) {
        return Err(RotError::Degenerate(format!(
            "rank-deficient matrix (smallest singular value {smin:e})"
        )));
    }
    Ok(RotationMatrix(special_orthogonal_factor(&u, &s, &v_t)))
}

/// Full SVD with finite-input check; singular values are not assumed sorted.
pub(crate) fn svd3(m: &Mat3) -> Result<(Mat3, Vec3, Mat3)> {
    if !m.iter().all(|v| v.is_finite()) {
        return Err(RotError::Degenerate("non-finite matrix".into()));
    }
    let svd = SVD::new(*m, true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => Ok((u, svd.singular_values, v_t)),
        _ => Err(RotError::Degenerate("SVD did not converge".into())),
    }
}

/// `U D Vᵀ` with `D` flipping the column of the smallest singular value when
/// `det(UVᵀ) < 0`.
pub(crate) fn special_orthogonal_factor(u: &Mat3, s: &Vec3, v_t: &Mat3) -> Mat3 {
    let d = (u * v_t).determinant();
    if d >= 0.0 {
        return u * v_t;
    }
    let imin = s.imin();
    let mut u = *u;
    for r in 0..3 {
        u[(r, imin)] = -u[(r, imin)];
    }
    u * v_t
}

/// Rotation angle of `r1ᵀ r2`, in `[0, π]`.
///
/// Evaluated as `atan2(sin θ, cos θ)` with `sin θ = ‖vee(D − Dᵀ)‖ / 2` and
/// `cos θ = (tr D − 1) / 2`, the latter clamped to `[−1, 1]`. Equal to the arccos
/// form on SO(3) but keeps full relative precision near `θ = 0`.
pub fn geodesic_distance(r1: &RotationMatrix, r2: &RotationMatrix) -> f64 {
    angle_of(&(r1.0.transpose() * r2.0))
}

pub(crate) fn angle_of(d: &Mat3) -> f64 {
    let c = ((d.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let sv = Vec3::new(
        d[(2, 1)] - d[(1, 2)],
        d[(0, 2)] - d[(2, 0)],
        d[(1, 0)] - d[(0, 1)],
    );
    let s = 0.5 * sv.norm();
    s.atan2(c)
}

/// Haar-uniform rotation: four Box–Muller normals, normalized.
pub fn sample_uniform(rng: &mut Rng) -> UnitQuaternion {
    loop {
        let w = rng.standard_normal();
        let x = rng.standard_normal();
        let y = rng.standard_normal();
        let z = rng.standard_normal();
        if let Ok(q) = UnitQuaternion::normalize(w, x, y, z) {
            return q;
        }
    }
}

/// Sandwich product `q p q*`, expanded as `p + w t + v × t` with `t = 2 v × p`.
pub fn rotate_vector(q: &UnitQuaternion, p: &Vec3) -> Vec3 {
    let v = q.vector();
    let t = 2.0 * v.cross(p);
    p + q.w * t + v.cross(&t)
}

/// Representative with `w > 0`; for `w = 0` the first non-zero of `(x, y, z)` is made positive.
pub fn canonicalize(q: &UnitQuaternion) -> UnitQuaternion {
    let positive = if q.w != 0.0 {
        q.w > 0.0
    } else if q.x != 0.0 {
        q.x > 0.0
    } else if q.y != 0.0 {
        q.y > 0.0
    } else {
        q.z >= 0.0
    };
    if positive {
        *q
    } else {
        q.negate()
    }
}
