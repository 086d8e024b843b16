use proptest::prelude::*;

use rotkit::compose::{compose_in, inverse_in, quat_mul};
use rotkit::convert::{
    convert, euler_to_matrix, exp_map, log_map, matrix_to_euler, matrix_to_quat, quat_to_matrix,
    sixd_to_matrix, ReprKind, Rotation,
};
use rotkit::interp::{matrix_geodesic, slerp, InterpMethod};
use rotkit::probdist::{bingham_log_density_unnorm, Bingham};
use rotkit::registration::{horn_align, PointSet, RigidTransform};
use rotkit::so3::{canonicalize, geodesic_distance, project_to_so3, validate};
use rotkit::{EulerAngles, EulerConvention, Mat3, Mat4, RotationMatrix, RotationVector, SixD, UnitQuaternion, Vec3, Vec4};

fn quat() -> impl Strategy<Value = UnitQuaternion> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("away from zero", |c| c.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|[w, x, y, z]| UnitQuaternion::normalize(w, x, y, z).unwrap())
}

fn rotation() -> impl Strategy<Value = RotationMatrix> {
    quat().prop_map(|q| quat_to_matrix(&q))
}

fn vec3(r: f64) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-r..r).prop_map(Vec3::from)
}

fn orthogonal4() -> impl Strategy<Value = Mat4> {
    prop::array::uniform16(-1.0f64..1.0).prop_filter_map("full rank", |a| {
        let m = Mat4::from_row_slice(&a);
        let qr = m.qr();
        let q = qr.q();
        ((q.transpose() * q - Mat4::identity()).norm() < 1e-12 && m.determinant().abs() > 1e-6).then_some(q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quaternion_matrix_round_trip(q in quat()) {
        let back = matrix_to_quat(&quat_to_matrix(&q));
        let c = canonicalize(&q);
        for (a, b) in back.to_array().iter().zip(c.to_array()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_is_even_in_q(q in quat()) {
        prop_assert_eq!(quat_to_matrix(&q), quat_to_matrix(&q.negate()));
    }

    #[test]
    fn conversions_preserve_the_rotation(r in rotation()) {
        let kinds = [
            ReprKind::Quaternion,
            ReprKind::AxisAngle,
            ReprKind::RotationVector,
            ReprKind::SixD,
            ReprKind::Matrix,
        ];
        for k in kinds {
            let x = convert(&Rotation::Matrix(r), k).unwrap();
            prop_assert!(geodesic_distance(&x.to_matrix().unwrap(), &r) < 1e-12, "{:?}", k);
            for k2 in kinds {
                let y = convert(&x, k2).unwrap();
                prop_assert!(geodesic_distance(&y.to_matrix().unwrap(), &r) < 1e-12);
            }
        }
    }

    #[test]
    fn euler_round_trip_off_gimbal(a in -3.1f64..3.1, b in -1.5f64..1.5, g in -3.1f64..3.1) {
        for conv in [EulerConvention::ZYX, EulerConvention::XYZ, EulerConvention::ZYX.extrinsic(), EulerConvention::XYZ.extrinsic()] {
            let e = EulerAngles::new(a, b, g, conv);
            let back = matrix_to_euler(&euler_to_matrix(&e), conv).unwrap();
            prop_assert!((back.alpha - a).abs() < 1e-9);
            prop_assert!((back.beta - b).abs() < 1e-9);
            prop_assert!((back.gamma - g).abs() < 1e-9);
        }
    }

    #[test]
    fn euler_extraction_reconstructs_anywhere(r in rotation()) {
        let e = matrix_to_euler(&r, EulerConvention::ZYX).unwrap();
        prop_assert!(geodesic_distance(&euler_to_matrix(&e), &r) < 1e-9);
    }

    #[test]
    fn log_inverts_exp_inside_the_ball(v in vec3(1.8)) {
        prop_assume!(v.norm() < std::f64::consts::PI - 1e-6);
        let back = log_map(&exp_map(&RotationVector(v)));
        prop_assert!((back.vector() - v).norm() < 1e-9);
    }

    #[test]
    fn exp_inverts_log(r in rotation()) {
        let v = log_map(&r);
        prop_assert!(v.angle() <= std::f64::consts::PI + 1e-15);
        prop_assert!(geodesic_distance(&exp_map(&v), &r) < 1e-12);
    }

    #[test]
    fn gram_schmidt_lands_in_so3(a1 in vec3(2.0), a2 in vec3(2.0)) {
        prop_assume!(a1.norm() > 1e-3 && a1.cross(&a2).norm() > 1e-3);
        let r = sixd_to_matrix(&SixD::new(a1, a2).unwrap()).unwrap();
        let v = validate(r.matrix());
        prop_assert!(v.orthogonality < 1e-12 && v.determinant < 1e-12);
        prop_assert!((r.matrix().column(0) - a1.normalize()).norm() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent(a in prop::array::uniform9(-1.0f64..1.0)) {
        let m = Mat3::from_row_slice(&a);
        prop_assume!(m.determinant().abs() > 1e-3);
        let r = project_to_so3(&m).unwrap();
        let again = project_to_so3(r.matrix()).unwrap();
        prop_assert!((again.matrix() - r.matrix()).norm() < 1e-12);
    }

    #[test]
    fn quaternion_product_is_associative(a in quat(), b in quat(), c in quat()) {
        let l = quat_mul(&quat_mul(&a, &b), &c);
        let r = quat_mul(&a, &quat_mul(&b, &c));
        for (x, y) in l.to_array().iter().zip(r.to_array()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_matches_matrix_product_in_every_representation(a in rotation(), b in rotation()) {
        let want = RotationMatrix::new_unchecked(a.matrix() * b.matrix());
        let kinds = [
            ReprKind::Quaternion,
            ReprKind::AxisAngle,
            ReprKind::RotationVector,
            ReprKind::SixD,
            ReprKind::Matrix,
            ReprKind::Euler(EulerConvention::ZYX),
        ];
        for k in kinds {
            let x = convert(&Rotation::Matrix(a), k).unwrap();
            let y = convert(&Rotation::Matrix(b), k).unwrap();
            let got = compose_in(&x, &y).unwrap().to_matrix().unwrap();
            prop_assert!(geodesic_distance(&got, &want) < 1e-9, "{:?}", k);
            let inv = inverse_in(&x).unwrap().to_matrix().unwrap();
            prop_assert!(geodesic_distance(&inv, &a.transpose()) < 1e-9);
        }
    }

    #[test]
    fn geodesic_distance_is_a_bi_invariant_metric(a in rotation(), b in rotation(), c in rotation(), g in rotation()) {
        let d = geodesic_distance;
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!((0.0..=std::f64::consts::PI).contains(&d(&a, &b)));
        let ga = RotationMatrix::new_unchecked(g.matrix() * a.matrix());
        let gb = RotationMatrix::new_unchecked(g.matrix() * b.matrix());
        prop_assert!((d(&ga, &gb) - d(&a, &b)).abs() < 1e-9);
    }

    #[test]
    fn slerp_ignores_endpoint_signs(a in quat(), b in quat(), t in 0.0f64..1.0) {
        let r = quat_to_matrix(&slerp(&a, &b, t));
        for (x, y) in [(a.negate(), b), (a, b.negate()), (a.negate(), b.negate())] {
            prop_assert!(geodesic_distance(&quat_to_matrix(&slerp(&x, &y, t)), &r) < 1e-9);
        }
    }

    #[test]
    fn slerp_and_matrix_geodesic_coincide(a in rotation(), b in rotation(), t in 0.0f64..1.0) {
        prop_assume!(geodesic_distance(&a, &b) < std::f64::consts::PI - 1e-4);
        let s = quat_to_matrix(&slerp(&matrix_to_quat(&a), &matrix_to_quat(&b), t));
        prop_assert!(geodesic_distance(&s, &matrix_geodesic(&a, &b, t)) < 1e-9);
    }

    #[test]
    fn every_interpolator_hits_its_endpoints(a in rotation(), b in rotation()) {
        for m in InterpMethod::ALL {
            let p = m.build(&a, &b).unwrap();
            prop_assert!(geodesic_distance(&p.eval(0.0).unwrap(), &a) < 1e-9, "{}", m);
            prop_assert!(geodesic_distance(&p.eval(1.0).unwrap(), &b) < 1e-9, "{}", m);
        }
    }

    #[test]
    fn bingham_is_antipodally_symmetric(m in orthogonal4(), z1 in -50.0f64..0.0, z2 in -50.0f64..0.0, z3 in -50.0f64..0.0, q in quat()) {
        let mut z = [z1, z2, z3];
        z.sort_by(|a, b| b.total_cmp(a));
        let b = Bingham::new(m, Vec4::new(0.0, z[0], z[1], z[2])).unwrap();
        prop_assert_eq!(bingham_log_density_unnorm(&b, &q), bingham_log_density_unnorm(&b, &q.negate()));
    }

    #[test]
    fn horn_recovers_any_rigid_motion(r in rotation(), t in vec3(5.0), pts in prop::collection::vec(vec3(1.0), 4..40)) {
        let src = PointSet::new(pts).unwrap();
        let spread = {
            let c = src.centroid();
            let s: Mat3 = src.points().iter().map(|p| (p - c) * (p - c).transpose()).sum();
            let mut e = s.symmetric_eigenvalues();
            e.as_mut_slice().sort_by(|a, b| a.total_cmp(b));
            e[1]
        };
        prop_assume!(spread > 1e-2);
        let g = RigidTransform { rotation: r, translation: t };
        let a = horn_align(&src, &src.transformed(&g)).unwrap();
        prop_assert!(geodesic_distance(&a.transform.rotation, &r) < 1e-8);
        prop_assert!((a.transform.translation - t).norm() < 1e-8);
    }
}
