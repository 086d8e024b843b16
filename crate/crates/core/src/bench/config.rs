use serde::{Deserialize, Serialize};

use crate::error::{Result, RotError};

use super::timing::TimingPlan;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub seed: u64,
    /// Haar samples for the round-trip stability suite.
    pub n_stability: usize,
    /// Samples for gimbal susceptibility and the double-cover check.
    pub m_singularity: usize,
    /// Edge cases in the robustness taxonomy.
    pub n_edge: usize,
    /// Uniform samples along each interpolation path.
    pub k_path: usize,
    /// Interior points for derivative continuity.
    pub k_deriv: usize,
    /// Central-difference step.
    pub dt: f64,
    /// Rotation motion threshold for gimbal susceptibility, radians.
    pub tau: f64,
    pub perturbation_norm: f64,
    /// Denominator regularizer for relative metrics.
    pub delta_reg: f64,
    pub warmup: usize,
    pub trials: usize,
    pub batch: usize,
    /// Round-trip error beyond which a robustness case fails, radians.
    pub failure_threshold: f64,
    /// Haar endpoint pairs for interpolation metrics.
    pub n_pairs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_stability: 1000,
            m_singularity: 5000,
            n_edge: 200,
            k_path: 100,
            k_deriv: 50,
            dt: 1e-3,
            tau: 1e-3,
            perturbation_norm: 1e-6,
            delta_reg: 1e-8,
            warmup: 100,
            trials: 1000,
            batch: 100,
            failure_threshold: 0.1,
            n_pairs: 100,
        }
    }
}

impl BenchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_stability", self.n_stability),
            ("m_singularity", self.m_singularity),
            ("n_edge", self.n_edge),
            ("k_path", self.k_path),
            ("k_deriv", self.k_deriv),
            ("warmup", self.warmup),
            ("trials", self.trials),
            ("batch", self.batch),
            ("n_pairs", self.n_pairs),
        ];
        for (name, v) in counts {
            if v < 1 {
                return Err(RotError::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        let tolerances = [
            ("dt", self.dt),
            ("tau", self.tau),
            ("perturbation_norm", self.perturbation_norm),
            ("delta_reg", self.delta_reg),
            ("failure_threshold", self.failure_threshold),
        ];
        for (name, v) in tolerances {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RotError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.dt > super::metrics::DERIV_T_MIN {
            return Err(RotError::InvalidConfig(format!(
                "dt = {} would step outside [0, 1] from the first derivative sample",
                self.dt
            )));
        }
        Ok(())
    }

    pub fn timing_plan(&self) -> TimingPlan {
        TimingPlan::new(self.warmup, self.trials, self.batch)
    }
}
