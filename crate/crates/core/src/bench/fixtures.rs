//! Deliberately broken kernels for checking that the metrics can see defects.

use crate::convert::{exp_map, quat_to_matrix, vee_antisymmetric, Rotation};
use crate::error::Result;
use crate::so3::{RotationMatrix, RotationVector, UnitQuaternion};
use crate::Mat3;

/// `R(q)` with `1e-9·sign(w)` added to the top-left entry, so `q` and `−q` disagree.
pub fn sign_sensitive_quat_to_matrix(q: &UnitQuaternion) -> Result<Mat3> {
    let mut m = quat_to_matrix(q).into_inner();
    m[(0, 0)] += 1e-9 * q.w().signum();
    Ok(m)
}

/// Log map without small-angle or near-π handling:
/// `θ = arccos((tr R − 1)/2)`, `v = θ/(2 sin θ) · vee(R − Rᵀ)`.
pub fn branchless_log_map(r: &RotationMatrix) -> RotationVector {
    let m = r.matrix();
    let theta = ((m.trace() - 1.0) / 2.0).acos();
    let w = vee_antisymmetric(m);
    RotationVector(w * (theta / (2.0 * theta.sin())))
}

/// Rotation-vector round trip through [`branchless_log_map`].
pub fn branchless_rotation_vector_round_trip(src: &Rotation) -> Result<RotationMatrix> {
    let r = src.to_matrix()?;
    Ok(exp_map(&branchless_log_map(&r)))
}
