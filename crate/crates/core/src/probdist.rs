//! Matrix Fisher and Bingham orientation densities, unnormalized.

use crate::error::{Result, RotError};
use crate::so3::{canonicalize, special_orthogonal_factor, svd3, RotationMatrix, UnitQuaternion};
use crate::{Mat3, Mat4, Vec4};

/// Density on SO(3) proportional to `exp(tr(Fᵀ R))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixFisher {
    f: Mat3,
}

impl MatrixFisher {
    pub fn new(f: Mat3) -> Result<Self> {
        if !f.iter().all(|v| v.is_finite()) {
            return Err(RotError::Degenerate("non-finite Fisher parameter".into()));
        }
        Ok(Self { f })
    }

    pub fn parameter(&self) -> &Mat3 {
        &self.f
    }
}

pub fn fisher_log_density_unnorm(d: &MatrixFisher, r: &RotationMatrix) -> f64 {
    // tr(Fᵀ R) = Σ F_ij R_ij
    d.f.component_mul(r.matrix()).sum()
}

/// Maximizer of `tr(Fᵀ R)` over SO(3): `U diag(1, 1, det(UVᵀ)) Vᵀ` from `F = U Σ Vᵀ`.
pub fn fisher_mode(d: &MatrixFisher) -> Result<RotationMatrix> {
    let (u, s, v_t) = svd3(&d.f)?;
    let rank = s.iter().filter(|&&x| x >= 1e-12).count();
    if rank < 3 {
        return Err(RotError::RankDeficient { rank });
    }
    Ok(RotationMatrix::new_unchecked(special_orthogonal_factor(&u, &s, &v_t)))
}

/// Singular values of `F`, descending.
pub fn fisher_concentration(d: &MatrixFisher) -> [f64; 3] {
    let mut s: Vec<f64> = match svd3(&d.f) {
        Ok((_, s, _)) => s.iter().map(|x| x.abs()).collect(),
        Err(_) => vec![f64::NAN; 3],
    };
    s.sort_by(|a, b| b.total_cmp(a));
    [s[0], s[1], s[2]]
}

/// Affine blend `(1 − t) F1 + t F2` of natural parameters.
pub fn fisher_blend(f1: &MatrixFisher, f2: &MatrixFisher, t: f64) -> MatrixFisher {
    MatrixFisher {
        f: f1.f * (1.0 - t) + f2.f * t,
    }
}

/// Antipodally symmetric density on S³ proportional to `exp(qᵀ M diag(Z) Mᵀ q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bingham {
    m: Mat4,
    z: Vec4,
}

impl Bingham {
    /// Requires orthogonal `M` and `0 = z0 ≥ z1 ≥ z2 ≥ z3`.
    pub fn new(m: Mat4, z: Vec4) -> Result<Self> {
        let orth = (m.transpose() * m - Mat4::identity()).norm();
        if !(orth <= 1e-9) {
            return Err(RotError::InvalidBingham(format!(
                "M is not orthogonal (residual {orth:e})"
            )));
        }
        if z[0] != 0.0 {
            return Err(RotError::InvalidBingham(format!("z0 must be 0, got {}", z[0])));
        }
        if !(z[0] >= z[1] && z[1] >= z[2] && z[2] >= z[3]) {
            return Err(RotError::InvalidBingham(format!(
                "concentrations must be non-increasing, got {:?}",
                z.as_slice()
            )));
        }
        Ok(Self { m, z })
    }

    pub fn orientation(&self) -> &Mat4 {
        &self.m
    }

    pub fn concentrations(&self) -> &Vec4 {
        &self.z
    }
}

/// `qᵀ M diag(Z) Mᵀ q`, summed as `Σ zᵢ (mᵢ · q)²` so that `f(q) = f(−q)` holds bit-for-bit.
pub fn bingham_log_density_unnorm(b: &Bingham, q: &UnitQuaternion) -> f64 {
    let qv = Vec4::from(q.to_array());
    (0..4)
        .map(|i| {
            let p = b.m.column(i).dot(&qv);
            b.z[i] * p * p
        })
        .sum()
}

/// Column of `M` paired with `z0`, canonicalized.
pub fn bingham_mode(b: &Bingham) -> Result<UnitQuaternion> {
    if b.z[0] == b.z[1] {
        return Err(RotError::NonUniqueMode(b.z[0]));
    }
    let c = b.m.column(0);
    Ok(canonicalize(&UnitQuaternion::normalize(c[0], c[1], c[2], c[3])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convert::quat_to_matrix;
    use crate::rng::Rng;
    use crate::so3::{sample_uniform, validate};
    use crate::Vec3;

    fn haar(rng: &mut Rng) -> RotationMatrix {
        quat_to_matrix(&sample_uniform(rng))
    }

    #[test]
    fn fisher_density_examples() {
        let mut rng = Rng::new(1);
        let zero = MatrixFisher::new(Mat3::zeros()).unwrap();
        let scaled = MatrixFisher::new(Mat3::identity() * 3.0).unwrap();
        for _ in 0..100 {
            let r = haar(&mut rng);
            assert_eq!(fisher_log_density_unnorm(&zero, &r), 0.0);
            let v = fisher_log_density_unnorm(&scaled, &r);
            assert!((v - 3.0 * r.trace()).abs() < 1e-14);
            assert!(v <= 9.0 + 1e-12);
        }
        assert_eq!(fisher_log_density_unnorm(&scaled, &RotationMatrix::identity()), 9.0);
    }

    #[test]
    fn fisher_mode_dominates_samples() {
        let mut rng = Rng::new(2);
        let f = MatrixFisher::new(Mat3::from_fn(|_, _| rng.standard_normal())).unwrap();
        let mode = fisher_mode(&f).unwrap();
        let best = fisher_log_density_unnorm(&f, &mode);
        for _ in 0..10_000 {
            assert!(fisher_log_density_unnorm(&f, &haar(&mut rng)) <= best + 1e-9);
        }
    }

    #[test]
    fn fisher_mode_examples() {
        let f = MatrixFisher::new(Mat3::identity() * 5.0).unwrap();
        assert!((fisher_mode(&f).unwrap().matrix() - Mat3::identity()).norm() < 1e-12);
        let mut rng = Rng::new(3);
        for _ in 0..100 {
            let r0 = haar(&mut rng);
            let f = MatrixFisher::new(r0.matrix() * 5.0).unwrap();
            assert!((fisher_mode(&f).unwrap().matrix() - r0.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn fisher_mode_applies_determinant_correction() {
        let f = MatrixFisher::new(Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))).unwrap();
        let mode = fisher_mode(&f).unwrap();
        assert!(validate(mode.matrix()).passed);
        let best = fisher_log_density_unnorm(&f, &mode);
        // Over SO(3), tr(diag(1,1,−1) R) peaks at 1 (e.g. R = I).
        assert!((best - 1.0).abs() < 1e-12);
        let mut rng = Rng::new(4);
        for _ in 0..10_000 {
            assert!(fisher_log_density_unnorm(&f, &haar(&mut rng)) <= best + 1e-9);
        }
    }

    #[test]
    fn fisher_mode_reports_rank() {
        let f = MatrixFisher::new(Mat3::from_diagonal(&Vec3::new(2.0, 1.0, 0.0))).unwrap();
        assert_eq!(fisher_mode(&f), Err(RotError::RankDeficient { rank: 2 }));
        let f = MatrixFisher::new(Mat3::zeros()).unwrap();
        assert_eq!(fisher_mode(&f), Err(RotError::RankDeficient { rank: 0 }));
    }

    #[test]
    fn fisher_concentration_examples() {
        let f = MatrixFisher::new(Mat3::from_diagonal(&Vec3::new(1.0, 3.0, 2.0))).unwrap();
        let s = fisher_concentration(&f);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14);
        assert_eq!(fisher_concentration(&MatrixFisher::new(Mat3::zeros()).unwrap()), [0.0; 3]);
        let mut rng = Rng::new(5);
        let f = MatrixFisher::new(haar(&mut rng).matrix() * 5.0).unwrap();
        for s in fisher_concentration(&f) {
            assert!((s - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fisher_invariances() {
        let mut rng = Rng::new(6);
        let f = MatrixFisher::new(Mat3::from_fn(|_, _| rng.standard_normal())).unwrap();
        let mode = fisher_mode(&f).unwrap();
        for lambda in [0.1, 2.0, 50.0] {
            let g = MatrixFisher::new(f.parameter() * lambda).unwrap();
            assert!((fisher_mode(&g).unwrap().matrix() - mode.matrix()).norm() < 1e-12);
        }
        for _ in 0..100 {
            let q = haar(&mut rng);
            let r = haar(&mut rng);
            let qf = MatrixFisher::new(q.matrix() * f.parameter()).unwrap();
            let qr = RotationMatrix::new_unchecked(q.matrix() * r.matrix());
            let lhs = fisher_log_density_unnorm(&qf, &qr);
            assert!((lhs - fisher_log_density_unnorm(&f, &r)).abs() < 1e-12);
        }
    }

    #[test]
    fn bingham_examples() {
        let b = Bingham::new(Mat4::identity(), Vec4::new(0.0, -1.0, -2.0, -3.0)).unwrap();
        let e1 = UnitQuaternion::IDENTITY;
        let e4 = UnitQuaternion::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(bingham_log_density_unnorm(&b, &e1), 0.0);
        assert_eq!(bingham_log_density_unnorm(&b, &e4), -3.0);
        assert_eq!(bingham_mode(&b).unwrap(), UnitQuaternion::IDENTITY);

        let mut rng = Rng::new(7);
        for _ in 0..1000 {
            let q = sample_uniform(&mut rng);
            assert_eq!(
                bingham_log_density_unnorm(&b, &q).to_bits(),
                bingham_log_density_unnorm(&b, &q.negate()).to_bits()
            );
        }
    }

    #[test]
    fn bingham_mode_column_read_off() {
        let m = Mat4::new(
            0.0, 0.0, 0.0, 1.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            1.0, 0.0, 0.0, 0.0,
        );
        let b = Bingham::new(m, Vec4::new(0.0, -1.0, -1.0, -1.0)).unwrap();
        assert_eq!(bingham_mode(&b).unwrap().to_array(), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn bingham_validation() {
        assert!(Bingham::new(Mat4::identity() * 2.0, Vec4::new(0.0, -1.0, -2.0, -3.0)).is_err());
        assert!(Bingham::new(Mat4::identity(), Vec4::new(-1.0, -1.0, -2.0, -3.0)).is_err());
        assert!(Bingham::new(Mat4::identity(), Vec4::new(0.0, -2.0, -1.0, -3.0)).is_err());
        let tie = Bingham::new(Mat4::identity(), Vec4::new(0.0, 0.0, -1.0, -3.0)).unwrap();
        assert!(matches!(bingham_mode(&tie), Err(RotError::NonUniqueMode(_))));
    }

    #[test]
    fn bingham_mode_dominates_sphere_samples() {
        let mut rng = Rng::new(8);
        // Random orthogonal M from the QR factor of a Gaussian matrix.
        let g = Mat4::from_fn(|_, _| rng.standard_normal());
        let m = g.qr().q();
        let b = Bingham::new(m, Vec4::new(0.0, -0.5, -4.0, -9.0)).unwrap();
        let mode = bingham_mode(&b).unwrap();
        let best = bingham_log_density_unnorm(&b, &mode);
        for _ in 0..10_000 {
            let q = sample_uniform(&mut rng);
            assert!(bingham_log_density_unnorm(&b, &q) <= best + 1e-9);
        }
    }
}
