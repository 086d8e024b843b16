//! Edge-case taxonomy and round-trip failure statistics.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::convert::{axis_angle_to_matrix, Rotation};
use crate::error::Result;
use crate::rng::Rng;
use crate::so3::{
    canonicalize, geodesic_distance, sample_uniform, AxisAngle, EulerAngles, RotationMatrix,
};

use super::BenchConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeFamily {
    Identity,
    SmallAngle,
    NearPi,
    NearGimbal,
    Antipodal,
    Random,
}

impl EdgeFamily {
    pub const ALL: [EdgeFamily; 6] = [
        EdgeFamily::Identity,
        EdgeFamily::SmallAngle,
        EdgeFamily::NearPi,
        EdgeFamily::NearGimbal,
        EdgeFamily::Antipodal,
        EdgeFamily::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeFamily::Identity => "identity",
            EdgeFamily::SmallAngle => "small-angle",
            EdgeFamily::NearPi => "near-pi",
            EdgeFamily::NearGimbal => "near-gimbal",
            EdgeFamily::Antipodal => "antipodal",
            EdgeFamily::Random => "random",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeCase {
    pub family: EdgeFamily,
    pub input: Rotation,
}

/// Family sizes for `n` cases: six near-equal shares, the remainder going to the
/// earliest families (200 → 34/34/33/33/33/33).
pub fn family_sizes(n: usize) -> [usize; 6] {
    let base = n / 6;
    let extra = n % 6;
    std::array::from_fn(|i| base + (i < extra) as usize)
}

/// Point `i` of `n` on a log scale from `lo` to `hi`.
fn log_spaced(i: usize, n: usize, lo: f64, hi: f64) -> f64 {
    if n <= 1 {
        return lo;
    }
    (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()
}

fn about(rng: &mut Rng, angle: f64) -> RotationMatrix {
    axis_angle_to_matrix(&AxisAngle::new(rng.unit_vector(), angle).expect("unit axis"))
}

/// Edge cases in family order.
///
/// Small angles and distances below π are log-spaced over `[1e-6, 1e-3]`, the
/// near-π family starts at exactly π, near-gimbal cases are ZYX angles with
/// `β = ±π/2` offset by log-spaced amounts down to zero, and antipodal cases feed
/// non-canonical quaternions `−q` (with `w < 0`) to the conversion.
pub fn edge_cases(n: usize, rng: &mut Rng) -> Vec<EdgeCase> {
    let sizes = family_sizes(n);
    let mut out = Vec::with_capacity(n);
    for (family, &count) in EdgeFamily::ALL.iter().zip(&sizes) {
        for i in 0..count {
            let input = match family {
                EdgeFamily::Identity => Rotation::Matrix(RotationMatrix::identity()),
                EdgeFamily::SmallAngle => {
                    Rotation::Matrix(about(rng, log_spaced(i, count, 1e-6, 1e-3)))
                }
                EdgeFamily::NearPi => {
                    let eps = if i == 0 {
                        0.0
                    } else {
                        log_spaced(i - 1, count - 1, 1e-12, 1e-3)
                    };
                    Rotation::Matrix(about(rng, PI - eps))
                }
                EdgeFamily::NearGimbal => {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    let offset = if i < 2 {
                        0.0
                    } else {
                        let magnitude = log_spaced(i - 2, count - 2, 1e-12, 1e-2);
                        magnitude * rng.uniform_range(-1.0, 1.0).signum()
                    };
                    Rotation::Euler(EulerAngles::zyx(
                        rng.uniform_range(-PI, PI),
                        sign * FRAC_PI_2 + offset,
                        rng.uniform_range(-PI, PI),
                    ))
                }
                EdgeFamily::Antipodal => {
                    let q = canonicalize(&sample_uniform(rng));
                    Rotation::Quaternion(q.negate())
                }
                EdgeFamily::Random => Rotation::Quaternion(sample_uniform(rng)),
            };
            out.push(EdgeCase {
                family: *family,
                input,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessResult {
    pub f_rate: f64,
    /// Mean error over non-failing cases; absent when every case failed.
    pub eps_avg: Option<f64>,
    pub eps_max: Option<f64>,
    /// Failures per family, in [`EdgeFamily::ALL`] order.
    pub failures: [usize; 6],
    pub cases: usize,
}

/// Runs `round_trip` on every edge case. A case fails when the call errors or the
/// geodesic error against the input exceeds `cfg.failure_threshold`.
pub fn robustness_with(
    cfg: &BenchConfig,
    rng: &mut Rng,
    round_trip: impl Fn(&Rotation) -> Result<RotationMatrix>,
) -> RobustnessResult {
    let cases = edge_cases(cfg.n_edge, rng);
    let mut failures = [0usize; 6];
    let (mut sum, mut max, mut ok) = (0.0f64, 0.0f64, 0usize);
    for case in &cases {
        let err = case
            .input
            .to_matrix()
            .and_then(|want| round_trip(&case.input).map(|got| geodesic_distance(&want, &got)));
        match err {
            Ok(e) if e <= cfg.failure_threshold => {
                sum += e;
                max = max.max(e);
                ok += 1;
            }
            _ => {
                let idx = EdgeFamily::ALL.iter().position(|f| *f == case.family).unwrap();
                failures[idx] += 1;
            }
        }
    }
    let failed: usize = failures.iter().sum();
    RobustnessResult {
        f_rate: failed as f64 / cases.len() as f64,
        eps_avg: (ok > 0).then(|| sum / ok as f64),
        eps_max: (ok > 0).then_some(max),
        failures,
        cases: cases.len(),
    }
}
