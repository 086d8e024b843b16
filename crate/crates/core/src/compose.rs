//! Composition and inversion in each representation.
//!
//! Quaternions and matrices compose natively. Axis-angle and rotation vectors go
//! through the quaternion hub, Euler angles and 6D through the matrix hub.

use crate::convert::{
    axis_angle_to_quat, euler_to_matrix, matrix_to_euler, matrix_to_sixd, quat_to_axis_angle,
    quat_to_rotation_vector, rotation_vector_to_quat, sixd_to_matrix, Rotation,
};
use crate::error::{Result, RotError};
use crate::so3::{project_to_so3, AxisAngle, EulerAngles, RotationMatrix, RotationVector, SixD, UnitQuaternion, ROTATION_TOL};
use crate::Mat3;

/// Hamilton product `pq` (apply `q`, then `p`), renormalized.
pub fn quat_mul(p: &UnitQuaternion, q: &UnitQuaternion) -> UnitQuaternion {
    let (p0, p1, p2, p3) = (p.w(), p.x(), p.y(), p.z());
    let (q0, q1, q2, q3) = (q.w(), q.x(), q.y(), q.z());
    let w = p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3;
    let x = p0 * q1 + q0 * p1 + p2 * q3 - p3 * q2;
    let y = p0 * q2 + q0 * p2 + p3 * q1 - p1 * q3;
    let z = p0 * q3 + q0 * p3 + p1 * q2 - p2 * q1;
    let inv = 1.0 / (w * w + x * x + y * y + z * z).sqrt();
    UnitQuaternion::new_unchecked(w * inv, x * inv, y * inv, z * inv)
}

pub fn quat_conjugate(q: &UnitQuaternion) -> UnitQuaternion {
    UnitQuaternion::new_unchecked(q.w(), -q.x(), -q.y(), -q.z())
}

/// Equal to the conjugate for unit quaternions.
pub fn quat_inverse(q: &UnitQuaternion) -> UnitQuaternion {
    quat_conjugate(q)
}

/// `r1 r2`, re-projected onto SO(3) only when the orthogonality residual exceeds 1e-9.
pub fn matrix_mul(r1: &RotationMatrix, r2: &RotationMatrix) -> RotationMatrix {
    let m = r1.matrix() * r2.matrix();
    let residual = (m.transpose() * m - Mat3::identity()).norm();
    if residual > ROTATION_TOL {
        if let Ok(p) = project_to_so3(&m) {
            return p;
        }
    }
    RotationMatrix::new_unchecked(m)
}

pub fn matrix_inverse(r: &RotationMatrix) -> RotationMatrix {
    r.transpose()
}

pub fn compose_euler(a: &EulerAngles, b: &EulerAngles) -> Result<EulerAngles> {
    let m = matrix_mul(&euler_to_matrix(a), &euler_to_matrix(b));
    matrix_to_euler(&m, a.convention)
}

pub fn compose_axis_angle(a: &AxisAngle, b: &AxisAngle) -> AxisAngle {
    quat_to_axis_angle(&quat_mul(&axis_angle_to_quat(a), &axis_angle_to_quat(b)))
}

pub fn compose_rotation_vector(a: &RotationVector, b: &RotationVector) -> RotationVector {
    quat_to_rotation_vector(&quat_mul(
        &rotation_vector_to_quat(a),
        &rotation_vector_to_quat(b),
    ))
}

pub fn compose_sixd(a: &SixD, b: &SixD) -> Result<SixD> {
    let m = matrix_mul(&sixd_to_matrix(a)?, &sixd_to_matrix(b)?);
    Ok(matrix_to_sixd(&m))
}

/// `x1 ∘ x2` in the representation both operands share.
pub fn compose_in(x1: &Rotation, x2: &Rotation) -> Result<Rotation> {
    Ok(match (x1, x2) {
        (Rotation::Quaternion(a), Rotation::Quaternion(b)) => Rotation::Quaternion(quat_mul(a, b)),
        (Rotation::Matrix(a), Rotation::Matrix(b)) => Rotation::Matrix(matrix_mul(a, b)),
        (Rotation::Euler(a), Rotation::Euler(b)) if a.convention == b.convention => {
            Rotation::Euler(compose_euler(a, b)?)
        }
        (Rotation::AxisAngle(a), Rotation::AxisAngle(b)) => {
            Rotation::AxisAngle(compose_axis_angle(a, b))
        }
        (Rotation::RotationVector(a), Rotation::RotationVector(b)) => {
            Rotation::RotationVector(compose_rotation_vector(a, b))
        }
        (Rotation::SixD(a), Rotation::SixD(b)) => Rotation::SixD(compose_sixd(a, b)?),
        _ => {
            return Err(RotError::Unsupported(format!(
                "cannot compose {:?} with {:?}",
                x1.kind(),
                x2.kind()
            )))
        }
    })
}

/// Group inverse in the operand's own representation.
pub fn inverse_in(x: &Rotation) -> Result<Rotation> {
    use crate::convert::convert;
    Ok(match x {
        Rotation::Quaternion(q) => Rotation::Quaternion(quat_inverse(q)),
        Rotation::Matrix(m) => Rotation::Matrix(matrix_inverse(m)),
        Rotation::AxisAngle(aa) => Rotation::AxisAngle(AxisAngle::new(-aa.axis(), aa.angle())?),
        Rotation::RotationVector(v) => Rotation::RotationVector(RotationVector(-v.vector())),
        Rotation::Euler(_) | Rotation::SixD(_) => {
            let m = x.to_matrix()?;
            convert(&Rotation::Matrix(matrix_inverse(&m)), x.kind())?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convert::{convert, elementary, quat_to_matrix, ReprKind};
    use crate::rng::Rng;
    use crate::so3::{geodesic_distance, rotate_vector, sample_uniform, validate, Axis, EulerConvention};
    use crate::Vec3;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close_q(a: &UnitQuaternion, b: &UnitQuaternion, tol: f64) -> bool {
        a.to_array().iter().zip(b.to_array()).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn quat_mul_examples() {
        let mut rng = Rng::new(1);
        let q = sample_uniform(&mut rng);
        assert!(close_q(&quat_mul(&q, &UnitQuaternion::IDENTITY), &q, 1e-15));
        let i = UnitQuaternion::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let j = UnitQuaternion::new(0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(quat_mul(&i, &j).to_array(), [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(quat_mul(&j, &i).to_array(), [0.0, 0.0, 0.0, -1.0]);
        for _ in 0..1000 {
            let p = sample_uniform(&mut rng);
            let q = sample_uniform(&mut rng);
            let lhs = quat_to_matrix(&quat_mul(&p, &q));
            let rhs = quat_to_matrix(&p).matrix() * quat_to_matrix(&q).matrix();
            assert!((lhs.matrix() - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn quat_inverse_examples() {
        let q = UnitQuaternion::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2).unwrap();
        assert_eq!(quat_conjugate(&q).to_array(), [FRAC_1_SQRT_2, 0.0, 0.0, -FRAC_1_SQRT_2]);
        let mut rng = Rng::new(2);
        for _ in 0..1000 {
            let q = sample_uniform(&mut rng);
            assert!(close_q(&quat_mul(&q, &quat_inverse(&q)), &UnitQuaternion::IDENTITY, 1e-15));
            let p = Vec3::new(rng.standard_normal(), rng.standard_normal(), rng.standard_normal());
            let back = rotate_vector(&quat_conjugate(&q), &rotate_vector(&q, &p));
            assert!((back - p).norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_mul_examples() {
        let mut rng = Rng::new(3);
        let r = quat_to_matrix(&sample_uniform(&mut rng));
        assert_eq!(matrix_mul(&r, &RotationMatrix::identity()), r);
        let rz = |a: f64| RotationMatrix::new_unchecked(elementary(Axis::Z, a));
        let ab = matrix_mul(&rz(0.4), &rz(1.3));
        assert!((ab.matrix() - rz(1.7).matrix()).norm() < 1e-13);
    }

    #[test]
    fn chained_matrix_composition_stays_valid() {
        let mut rng = Rng::new(4);
        let mut acc = RotationMatrix::identity();
        for _ in 0..10_000 {
            acc = matrix_mul(&acc, &quat_to_matrix(&sample_uniform(&mut rng)));
        }
        let projected = project_to_so3(acc.matrix()).unwrap();
        assert!(validate(projected.matrix()).orthogonality < 1e-9);
        assert!(validate(acc.matrix()).passed);
    }

    #[test]
    fn matrix_mul_reprojects_drifted_input() {
        let mut m = Mat3::identity();
        m[(0, 0)] = 1.0 + 1e-7;
        let drifted = RotationMatrix::new_unchecked(m);
        let out = matrix_mul(&drifted, &RotationMatrix::identity());
        assert!(validate(out.matrix()).passed);
    }

    #[test]
    fn compose_in_examples() {
        let a = Rotation::Euler(EulerAngles::zyx(0.1, 0.0, 0.0));
        let b = Rotation::Euler(EulerAngles::zyx(0.2, 0.0, 0.0));
        let Rotation::Euler(e) = compose_in(&a, &b).unwrap() else { panic!() };
        assert_abs_diff_eq!(e.alpha, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(e.beta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.gamma, 0.0, epsilon = 1e-12);

        let v = Rotation::RotationVector(RotationVector::new(0.0, 0.0, 1.0));
        let Rotation::RotationVector(out) = compose_in(&v, &v).unwrap() else { panic!() };
        assert!((out.vector() - Vec3::new(0.0, 0.0, 2.0)).norm() < 1e-12);

        let mut rng = Rng::new(5);
        for _ in 0..100 {
            let r1 = quat_to_matrix(&sample_uniform(&mut rng));
            let r2 = quat_to_matrix(&sample_uniform(&mut rng));
            let s1 = convert(&Rotation::Matrix(r1), ReprKind::SixD).unwrap();
            let s2 = convert(&Rotation::Matrix(r2), ReprKind::SixD).unwrap();
            let out = compose_in(&s1, &s2).unwrap().to_matrix().unwrap();
            let reference = RotationMatrix::new_unchecked(r1.matrix() * r2.matrix());
            assert!(geodesic_distance(&out, &reference) < 1e-9);
        }
    }

    #[test]
    fn compose_in_rejects_mixed_kinds() {
        let a = Rotation::Quaternion(UnitQuaternion::IDENTITY);
        let b = Rotation::Matrix(RotationMatrix::identity());
        assert!(compose_in(&a, &b).is_err());
        let c = Rotation::Euler(EulerAngles::zyx(0.0, 0.0, 0.0));
        let d = Rotation::Euler(EulerAngles::new(0.0, 0.0, 0.0, EulerConvention::XYZ));
        assert!(compose_in(&c, &d).is_err());
    }

    #[test]
    fn inverse_in_every_representation() {
        let mut rng = Rng::new(6);
        let kinds = [
            ReprKind::Quaternion,
            ReprKind::Matrix,
            ReprKind::Euler(EulerConvention::ZYX),
            ReprKind::AxisAngle,
            ReprKind::RotationVector,
            ReprKind::SixD,
        ];
        for _ in 0..100 {
            let r = quat_to_matrix(&sample_uniform(&mut rng));
            for kind in kinds {
                let x = convert(&Rotation::Matrix(r), kind).unwrap();
                let inv = inverse_in(&x).unwrap();
                let id = compose_in(&x, &inv).unwrap().to_matrix().unwrap();
                assert!(geodesic_distance(&id, &RotationMatrix::identity()) < 1e-9, "{kind:?}");
            }
        }
    }
}
