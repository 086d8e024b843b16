//! Closed-form quaternion alignment of corresponded point sets and point-to-point ICP.

use nalgebra::SymmetricEigen;

use crate::convert::quat_to_matrix;
use crate::error::{Result, RotError};
use crate::so3::{canonicalize, RotationMatrix, UnitQuaternion};
use crate::{Mat3, Mat4, Vec3, Vec4};

pub const DEFAULT_ICP_MAX_ITER: usize = 100;
pub const DEFAULT_ICP_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Vec3>,
}

impl PointSet {
    pub fn new(points: Vec<Vec3>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(RotError::Degenerate(format!("point {i} has non-finite coordinates")));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Vec3 {
        let sum: Vec3 = self.points.iter().sum();
        sum / self.points.len().max(1) as f64
    }

    pub fn transformed(&self, g: &RigidTransform) -> Self {
        Self {
            points: self.points.iter().map(|p| g.apply(p)).collect(),
        }
    }
}

/// `p ↦ R p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation: RotationMatrix,
    pub translation: Vec3,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: RotationMatrix::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation.apply(p) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: RotationMatrix::new_unchecked(self.rotation.matrix() * other.rotation.matrix()),
            translation: self.rotation.apply(&other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -rt.apply(&self.translation),
        }
    }
}

/// Eigen-decomposition of a symmetric 4×4 matrix, eigenvalues descending and
/// eigenvectors stored as the matching columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SymEigen4 {
    pub values: Vec4,
    pub vectors: Mat4,
}

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below
/// `1e-12 · ‖m‖_F` (at most 50 sweeps).
pub fn eig_sym4(m: &Mat4) -> Result<SymEigen4> {
    let scale = m.norm();
    let asym = (m - m.transpose()).norm();
    if !(asym <= 1e-9 * scale.max(1.0)) {
        return Err(RotError::NotSymmetric(asym));
    }
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = Mat4::identity();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let mut j = Mat4::identity();
                j[(p, p)] = c;
                j[(q, q)] = c;
                j[(p, q)] = s;
                j[(q, p)] = -s;
                a = j.transpose() * a * j;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                v *= j;
            }
        }
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = Vec4::from_fn(|k, _| a[(order[k], order[k])]);
    let vectors = Mat4::from_fn(|r, k| v[(r, order[k])]);
    Ok(SymEigen4 { values, vectors })
}

/// Rigid alignment plus the RMS of `‖R pᵢ + t − qᵢ‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alignment {
    pub transform: RigidTransform,
    pub quaternion: UnitQuaternion,
    pub rms: f64,
}

/// Horn's closed-form least-squares alignment of `source` onto `target`.
///
/// The optimal rotation is the top eigenvector of the symmetric matrix built from
/// the centred cross-covariance `H = Σ p'ᵢ q'ᵢᵀ`:
///
/// ```text
/// M = | tr H   Δᵀ                |     Δ = (H23 − H32, H31 − H13, H12 − H21)
///     | Δ      H + Hᵀ − tr(H) I  |
/// ```
pub fn horn_align(source: &PointSet, target: &PointSet) -> Result<Alignment> {
    if source.len() != target.len() {
        return Err(RotError::SizeMismatch {
            source_len: source.len(),
            target_len: target.len(),
        });
    }
    if source.len() < 3 {
        return Err(RotError::TooFewPoints(source.len()));
    }
    let pc = source.centroid();
    let qc = target.centroid();

    let mut h = Mat3::zeros();
    let mut scatter = Mat3::zeros();
    for (p, q) in source.points().iter().zip(target.points()) {
        let dp = p - pc;
        let dq = q - qc;
        h += dp * dq.transpose();
        scatter += dp * dp.transpose();
    }
    let mut spread = SymmetricEigen::new(scatter).eigenvalues;
    spread.as_mut_slice().sort_by(|a, b| a.total_cmp(b));
    if spread[1] <= 1e-12 * scatter.trace().max(1e-300) {
        return Err(RotError::Degenerate(
            "source points are collinear (rank-1 scatter)".into(),
        ));
    }

    let tr = h.trace();
    let delta = Vec3::new(
        h[(1, 2)] - h[(2, 1)],
        h[(2, 0)] - h[(0, 2)],
        h[(0, 1)] - h[(1, 0)],
    );
    let lower = h + h.transpose() - Mat3::identity() * tr;
    let mut m = Mat4::zeros();
    m[(0, 0)] = tr;
    for i in 0..3 {
        m[(0, i + 1)] = delta[i];
        m[(i + 1, 0)] = delta[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = lower[(i, j)];
        }
    }
    let eig = eig_sym4(&m)?;
    let top = eig.vectors.column(0);
    let q = canonicalize(&UnitQuaternion::normalize(top[0], top[1], top[2], top[3])?);
    let rotation = quat_to_matrix(&q);
    let translation = qc - rotation.apply(&pc);
    let transform = RigidTransform {
        rotation,
        translation,
    };
    let rms = rms_error(source.points(), target.points(), &transform);
    Ok(Alignment {
        transform,
        quaternion: q,
        rms,
    })
}

fn rms_error(source: &[Vec3], target: &[Vec3], g: &RigidTransform) -> f64 {
    let sum: f64 = source
        .iter()
        .zip(target)
        .map(|(p, q)| (g.apply(p) - q).norm_squared())
        .sum();
    (sum / source.len().max(1) as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IcpResult {
    pub transform: RigidTransform,
    pub iterations: usize,
    pub rms: f64,
    /// Nearest-neighbour RMS before the first iteration, then after each one.
    pub rms_history: Vec<f64>,
}

/// Exact nearest neighbour of every point of `from` in `to`, O(nm).
fn nearest_neighbours(from: &[Vec3], to: &[Vec3]) -> Vec<Vec3> {
    from.iter()
        .map(|p| {
            let mut best = to[0];
            let mut best_d = f64::INFINITY;
            for q in to {
                let d = (p - q).norm_squared();
                if d < best_d {
                    best_d = d;
                    best = *q;
                }
            }
            best
        })
        .collect()
}

fn nn_rms(from: &[Vec3], to: &[Vec3]) -> f64 {
    let nn = nearest_neighbours(from, to);
    let sum: f64 = from.iter().zip(&nn).map(|(p, q)| (p - q).norm_squared()).sum();
    (sum / from.len() as f64).sqrt()
}

/// Point-to-point ICP: match every moved source point to its nearest target point,
/// solve [`horn_align`] on the matches, move the source, repeat until the RMS
/// improvement is below `tol` or `max_iter` iterations have run.
pub fn icp(source: &PointSet, target: &PointSet, max_iter: usize, tol: f64) -> Result<IcpResult> {
    for set in [source, target] {
        if set.len() < 3 {
            return Err(RotError::TooFewPoints(set.len()));
        }
    }
    let mut moved: Vec<Vec3> = source.points().to_vec();
    let mut total = RigidTransform::identity();
    let mut prev = nn_rms(&moved, target.points());
    let mut history = vec![prev];
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let matches = nearest_neighbours(&moved, target.points());
        let step = horn_align(
            &PointSet { points: moved.clone() },
            &PointSet { points: matches },
        )
        .map_err(|e| RotError::DegenerateIteration {
            iteration: iterations,
            reason: e.to_string(),
        })?;
        for p in moved.iter_mut() {
            *p = step.transform.apply(p);
        }
        total = step.transform.then_after(&total);
        let rms = nn_rms(&moved, target.points());
        history.push(rms);
        let improvement = prev - rms;
        prev = rms;
        if improvement < tol {
            break;
        }
    }
    Ok(IcpResult {
        transform: total,
        iterations,
        rms: prev,
        rms_history: history,
    })
}
