//! Conversions between every rotation representation.
//!
//! Spoke conversions are implemented directly; [`convert`] routes any pair through
//! the quaternion or matrix hub with the fewest hops.

use std::f64::consts::PI;

use crate::error::{Result, RotError};
use crate::so3::{
    angle_of, canonicalize, Axis, AxisAngle, EulerAngles, EulerConvention, Frame,
    RotationMatrix, RotationVector, SixD, UnitQuaternion, ZERO_ANGLE,
};
use crate::{Mat3, Vec3};

/// Below this angle the forward maps switch to their Taylor expansions.
pub const SMALL_ANGLE: f64 = 1e-4;
/// Below this angle the log map returns the first-order vee of the skew part.
pub const LOG_NEAR_IDENTITY: f64 = 1e-7;
/// Above `π − LOG_NEAR_PI` the log map extracts the axis from the symmetric part.
pub const LOG_NEAR_PI: f64 = 1e-6;
/// `|cos β|` below this resolves Euler extraction by the gimbal convention `γ = 0`.
pub const GIMBAL_BAND: f64 = 1e-7;

pub fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`skew`] applied to `m − mᵀ`, i.e. `(m32 − m23, m13 − m31, m21 − m12)`.
pub fn vee_antisymmetric(m: &Mat3) -> Vec3 {
    Vec3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    )
}

pub fn axis_angle_to_quat(aa: &AxisAngle) -> UnitQuaternion {
    let theta = aa.angle();
    let half = 0.5 * theta;
    let s = if theta < SMALL_ANGLE {
        half - theta * theta * theta / 48.0
    } else {
        half.sin()
    };
    let u = aa.axis();
    UnitQuaternion::new_unchecked(half.cos(), u.x * s, u.y * s, u.z * s)
}

/// Angle in `[0, π]` of the canonical representative, `2·atan2(‖v‖, |w|)`.
pub fn quat_to_axis_angle(q: &UnitQuaternion) -> AxisAngle {
    let q = canonicalize(q);
    let v = q.vector();
    let s = v.norm();
    let theta = 2.0 * s.atan2(q.w().abs());
    if theta <= ZERO_ANGLE {
        return AxisAngle::identity();
    }
    AxisAngle::new_unchecked(v / s, theta)
}

/// Rodrigues: `I + sin θ [u]× + (1 − cos θ)[u]×²`.
pub fn axis_angle_to_matrix(aa: &AxisAngle) -> RotationMatrix {
    let k = skew(&aa.axis());
    let (s, c) = aa.angle().sin_cos();
    RotationMatrix::new_unchecked(Mat3::identity() + k * s + k * k * (1.0 - c))
}

pub fn matrix_to_axis_angle(r: &RotationMatrix) -> AxisAngle {
    log_map(r).to_axis_angle()
}

/// `(w² − ‖v‖²) I + 2 v vᵀ + 2 w [v]×`, divided by `‖q‖²` so slightly non-unit input
/// still yields a rotation. Even in `q`, so `q` and `−q` give bit-identical output.
pub fn quat_to_matrix(q: &UnitQuaternion) -> RotationMatrix {
    let (w, x, y, z) = (q.w(), q.x(), q.y(), q.z());
    let inv = 1.0 / (w * w + x * x + y * y + z * z);
    let d = w * w - (x * x + y * y + z * z);
    let (xx, yy, zz) = (x * x, y * y, z * z);
    let (xy, xz, yz) = (x * y, x * z, y * z);
    let (wx, wy, wz) = (w * x, w * y, w * z);
    let m = Mat3::new(
        d + 2.0 * xx,
        2.0 * xy - 2.0 * wz,
        2.0 * xz + 2.0 * wy,
        2.0 * xy + 2.0 * wz,
        d + 2.0 * yy,
        2.0 * yz - 2.0 * wx,
        2.0 * xz - 2.0 * wy,
        2.0 * yz + 2.0 * wx,
        d + 2.0 * zz,
    );
    RotationMatrix::new_unchecked(m * inv)
}

/// Shoemake: trace branch when `tr R > 0`, otherwise the branch of the largest
/// diagonal entry. Output is canonicalized.
pub fn matrix_to_quat(r: &RotationMatrix) -> UnitQuaternion {
    let m = r.matrix();
    let tr = m.trace();
    let (w, x, y, z);
    if tr > 0.0 {
        let s = 2.0 * (1.0 + tr).sqrt();
        w = 0.25 * s;
        x = (m[(2, 1)] - m[(1, 2)]) / s;
        y = (m[(0, 2)] - m[(2, 0)]) / s;
        z = (m[(1, 0)] - m[(0, 1)]) / s;
    } else if m[(0, 0)] >= m[(1, 1)] && m[(0, 0)] >= m[(2, 2)] {
        let s = 2.0 * (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt();
        w = (m[(2, 1)] - m[(1, 2)]) / s;
        x = 0.25 * s;
        y = (m[(0, 1)] + m[(1, 0)]) / s;
        z = (m[(0, 2)] + m[(2, 0)]) / s;
    } else if m[(1, 1)] >= m[(2, 2)] {
        let s = 2.0 * (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt();
        w = (m[(0, 2)] - m[(2, 0)]) / s;
        x = (m[(0, 1)] + m[(1, 0)]) / s;
        y = 0.25 * s;
        z = (m[(1, 2)] + m[(2, 1)]) / s;
    } else {
        let s = 2.0 * (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt();
        w = (m[(1, 0)] - m[(0, 1)]) / s;
        x = (m[(0, 2)] + m[(2, 0)]) / s;
        y = (m[(1, 2)] + m[(2, 1)]) / s;
        z = 0.25 * s;
    }
    let n = (w * w + x * x + y * y + z * z).sqrt();
    canonicalize(&UnitQuaternion::new_unchecked(w / n, x / n, y / n, z / n))
}

pub fn elementary(axis: Axis, angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    match axis {
        Axis::X => Mat3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
        Axis::Y => Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
        Axis::Z => Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
    }
}

pub fn euler_to_matrix(e: &EulerAngles) -> RotationMatrix {
    let [a1, a2, a3] = e.convention.axes();
    let r1 = elementary(a1, e.alpha);
    let r2 = elementary(a2, e.beta);
    let r3 = elementary(a3, e.gamma);
    let m = match e.convention.frame() {
        Frame::Intrinsic => r1 * r2 * r3,
        Frame::Extrinsic => r3 * r2 * r1,
    };
    RotationMatrix::new_unchecked(m)
}

fn wrap_angle(a: f64) -> f64 {
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Extraction for ZYX and XYZ sequences, either frame. Extrinsic `xyz` shares
/// its matrix with intrinsic ZYX under `alpha ↔ gamma`, and likewise for `zyx`/XYZ.
pub fn matrix_to_euler(r: &RotationMatrix, convention: EulerConvention) -> Result<EulerAngles> {
    let axes = convention.axes();
    let zyx = [Axis::Z, Axis::Y, Axis::X];
    let xyz = [Axis::X, Axis::Y, Axis::Z];
    let m = r.matrix();
    let angles = match (axes, convention.frame()) {
        (a, Frame::Intrinsic) if a == zyx => extract_zyx(m),
        (a, Frame::Intrinsic) if a == xyz => extract_xyz(m),
        (a, Frame::Extrinsic) if a == xyz => {
            let [g, b, al] = extract_zyx(m);
            [al, b, g]
        }
        (a, Frame::Extrinsic) if a == zyx => {
            let [g, b, al] = extract_xyz(m);
            [al, b, g]
        }
        _ => return Err(RotError::UnsupportedConvention(convention.to_string())),
    };
    Ok(EulerAngles::new(angles[0], angles[1], angles[2], convention))
}

/// `R = Rz(α) Ry(β) Rx(γ)`.
fn extract_zyx(m: &Mat3) -> [f64; 3] {
    let cb = m[(0, 0)].hypot(m[(1, 0)]);
    let beta = (-m[(2, 0)]).atan2(cb);
    if cb < GIMBAL_BAND {
        // γ = 0 ⇒ R = Rz(α) Ry(β): R12 = −sin α, R22 = cos α.
        let alpha = (-m[(0, 1)]).atan2(m[(1, 1)]);
        return [wrap_angle(alpha), beta, 0.0];
    }
    let alpha = m[(1, 0)].atan2(m[(0, 0)]);
    let gamma = m[(2, 1)].atan2(m[(2, 2)]);
    [wrap_angle(alpha), beta, wrap_angle(gamma)]
}

/// `R = Rx(α) Ry(β) Rz(γ)`.
fn extract_xyz(m: &Mat3) -> [f64; 3] {
    let cb = m[(1, 2)].hypot(m[(2, 2)]);
    let beta = m[(0, 2)].atan2(cb);
    if cb < GIMBAL_BAND {
        // γ = 0 ⇒ R = Rx(α) Ry(β): R32 = sin α, R22 = cos α.
        let alpha = m[(2, 1)].atan2(m[(1, 1)]);
        return [wrap_angle(alpha), beta, 0.0];
    }
    let alpha = (-m[(1, 2)]).atan2(m[(2, 2)]);
    let gamma = (-m[(0, 1)]).atan2(m[(0, 0)]);
    [wrap_angle(alpha), beta, wrap_angle(gamma)]
}

/// Rodrigues on `v = θu` with the coefficients `sin θ/θ` and `(1 − cos θ)/θ²`
/// replaced by `1 − θ²/6` and `1/2 − θ²/24` below [`SMALL_ANGLE`].
pub fn exp_map(v: &RotationVector) -> RotationMatrix {
    let v = v.vector();
    let theta2 = v.norm_squared();
    let theta = theta2.sqrt();
    let (a, b) = if theta < SMALL_ANGLE {
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        let half = (0.5 * theta).sin();
        (theta.sin() / theta, 2.0 * half * half / theta2)
    };
    let k = skew(&v);
    RotationMatrix::new_unchecked(Mat3::identity() + k * a + k * k * b)
}

/// Inverse of [`exp_map`] on the chart `‖v‖ ≤ π`.
pub fn log_map(r: &RotationMatrix) -> RotationVector {
    let m = r.matrix();
    let w = vee_antisymmetric(m);
    let theta = angle_of(m);
    if theta < LOG_NEAR_IDENTITY {
        return RotationVector(0.5 * w);
    }
    if theta > PI - LOG_NEAR_PI {
        return RotationVector(near_pi_axis(m, theta, &w) * theta);
    }
    // θ/(2 sin θ) with 2 sin θ = ‖w‖.
    RotationVector(w * (theta / w.norm()))
}

/// Axis of a rotation near π from `(R + Rᵀ)/2 = cos θ I + (1 − cos θ) u uᵀ`,
/// reading the dominant diagonal entry and fixing the sign against the skew part.
fn near_pi_axis(m: &Mat3, theta: f64, w: &Vec3) -> Vec3 {
    let c = theta.cos();
    let sym = (m + m.transpose()) * 0.5;
    let uu = (sym - Mat3::identity() * c) / (1.0 - c);
    let k = (0..3)
        .max_by(|&i, &j| uu[(i, i)].total_cmp(&uu[(j, j)]))
        .unwrap_or(0);
    let uk = uu[(k, k)].max(0.0).sqrt();
    let mut u = Vec3::zeros();
    for j in 0..3 {
        u[j] = if j == k { uk } else { uu[(k, j)] / uk };
    }
    let u = u / u.norm();
    if u.dot(w) < 0.0 {
        -u
    } else {
        u
    }
}

/// Gram-Schmidt: `b1 = â1`, `b2` the normalized rejection of `a2`, `b3 = b1 × b2`.
pub fn sixd_to_matrix(s: &SixD) -> Result<RotationMatrix> {
    let n1 = s.a1.norm();
    if !(n1 > 1e-12) {
        return Err(RotError::Degenerate(format!(
            "6D first column has norm {n1:e}"
        )));
    }
    let b1 = s.a1 / n1;
    let rej = s.a2 - b1 * b1.dot(&s.a2);
    let n2 = rej.norm();
    if !(n2 > 1e-12) {
        return Err(RotError::Degenerate(format!(
            "6D columns are parallel (rejection norm {n2:e})"
        )));
    }
    let b2 = rej / n2;
    let b3 = b1.cross(&b2);
    Ok(RotationMatrix::new_unchecked(Mat3::from_columns(&[b1, b2, b3])))
}

pub fn matrix_to_sixd(r: &RotationMatrix) -> SixD {
    let m = r.matrix();
    SixD {
        a1: m.column(0).into_owned(),
        a2: m.column(1).into_owned(),
    }
}

/// `(cos(θ/2), v·sin(θ/2)/θ)`, with `sin(θ/2)/θ ≈ 1/2 − θ²/48` below [`SMALL_ANGLE`].
pub fn rotation_vector_to_quat(v: &RotationVector) -> UnitQuaternion {
    let v = v.vector();
    let theta = v.norm();
    let half = 0.5 * theta;
    let k = if theta < SMALL_ANGLE {
        0.5 - theta * theta / 48.0
    } else {
        half.sin() / theta
    };
    UnitQuaternion::new_unchecked(half.cos(), v.x * k, v.y * k, v.z * k)
}

/// Canonical rotation vector (`‖v‖ ≤ π`) of `±q`.
pub fn quat_to_rotation_vector(q: &UnitQuaternion) -> RotationVector {
    let q = canonicalize(q);
    let u = q.vector();
    let n = u.norm();
    if n == 0.0 {
        return RotationVector(Vec3::zeros());
    }
    RotationVector(u * (2.0 * n.atan2(q.w()) / n))
}

/// A rotation in any supported representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation {
    Quaternion(UnitQuaternion),
    Matrix(RotationMatrix),
    Euler(EulerAngles),
    AxisAngle(AxisAngle),
    RotationVector(RotationVector),
    SixD(SixD),
}

/// Destination tag for [`convert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReprKind {
    Quaternion,
    Matrix,
    Euler(EulerConvention),
    AxisAngle,
    RotationVector,
    SixD,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Hub {
    Quaternion,
    Matrix,
}

impl ReprKind {
    fn hub(self) -> Hub {
        match self {
            ReprKind::Quaternion | ReprKind::AxisAngle | ReprKind::RotationVector => Hub::Quaternion,
            ReprKind::Matrix | ReprKind::Euler(_) | ReprKind::SixD => Hub::Matrix,
        }
    }
}

impl Rotation {
    pub fn kind(&self) -> ReprKind {
        match self {
            Rotation::Quaternion(_) => ReprKind::Quaternion,
            Rotation::Matrix(_) => ReprKind::Matrix,
            Rotation::Euler(e) => ReprKind::Euler(e.convention),
            Rotation::AxisAngle(_) => ReprKind::AxisAngle,
            Rotation::RotationVector(_) => ReprKind::RotationVector,
            Rotation::SixD(_) => ReprKind::SixD,
        }
    }

    pub fn to_matrix(&self) -> Result<RotationMatrix> {
        match convert(self, ReprKind::Matrix)? {
            Rotation::Matrix(m) => Ok(m),
            _ => unreachable!("convert returns the requested kind"),
        }
    }

    pub fn to_quaternion(&self) -> Result<UnitQuaternion> {
        match convert(self, ReprKind::Quaternion)? {
            Rotation::Quaternion(q) => Ok(q),
            _ => unreachable!("convert returns the requested kind"),
        }
    }
}

enum HubValue {
    Quaternion(UnitQuaternion),
    Matrix(RotationMatrix),
}

fn to_hub(src: &Rotation) -> Result<HubValue> {
    Ok(match src {
        Rotation::Quaternion(q) => HubValue::Quaternion(*q),
        Rotation::AxisAngle(aa) => HubValue::Quaternion(axis_angle_to_quat(aa)),
        Rotation::RotationVector(v) => HubValue::Quaternion(rotation_vector_to_quat(v)),
        Rotation::Matrix(m) => HubValue::Matrix(*m),
        Rotation::Euler(e) => HubValue::Matrix(euler_to_matrix(e)),
        Rotation::SixD(s) => HubValue::Matrix(sixd_to_matrix(s)?),
    })
}

/// Hub-and-spoke conversion. Quaternion-side spokes (axis-angle, rotation vector)
/// and matrix-side spokes (Euler, 6D) meet through one hub switch at most.
pub fn convert(src: &Rotation, dst: ReprKind) -> Result<Rotation> {
    if src.kind() == dst {
        return Ok(*src);
    }
    let hub = to_hub(src)?;
    let hub = match (hub, dst.hub()) {
        (HubValue::Quaternion(q), Hub::Matrix) => HubValue::Matrix(quat_to_matrix(&q)),
        // Direct matrix → spoke paths avoid a quaternion hop for the log map.
        (HubValue::Matrix(m), Hub::Quaternion) if dst == ReprKind::RotationVector => {
            return Ok(Rotation::RotationVector(log_map(&m)));
        }
        (HubValue::Matrix(m), Hub::Quaternion) => HubValue::Quaternion(matrix_to_quat(&m)),
        (h, _) => h,
    };
    Ok(match (hub, dst) {
        (HubValue::Quaternion(q), ReprKind::Quaternion) => Rotation::Quaternion(q),
        (HubValue::Quaternion(q), ReprKind::AxisAngle) => Rotation::AxisAngle(quat_to_axis_angle(&q)),
        (HubValue::Quaternion(q), ReprKind::RotationVector) => {
            Rotation::RotationVector(quat_to_rotation_vector(&q))
        }
        (HubValue::Matrix(m), ReprKind::Matrix) => Rotation::Matrix(m),
        (HubValue::Matrix(m), ReprKind::Euler(conv)) => Rotation::Euler(matrix_to_euler(&m, conv)?),
        (HubValue::Matrix(m), ReprKind::SixD) => Rotation::SixD(matrix_to_sixd(&m)),
        _ => unreachable!("hub matches destination after the switch"),
    })
}
