//! Rotation representations on SO(3): conversions, composition, interpolation,
//! orientation densities, rigid registration and a comparative benchmark suite.

pub mod bench;
pub mod compose;
pub mod convert;
pub mod error;
pub mod interp;
pub mod probdist;
pub mod registration;
pub mod repr;
pub mod rng;
pub mod so3;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
pub type Vec4 = nalgebra::Vector4<f64>;
pub type Mat4 = nalgebra::Matrix4<f64>;

pub use convert::{convert, ReprKind, Rotation};
pub use error::{Result, RotError};
pub use rng::Rng;
pub use so3::{
    AxisAngle, EulerAngles, EulerConvention, RotationMatrix, RotationVector, SixD, UnitQuaternion,
};
