//! Comparative benchmark: per-representation accuracy, singularity, interpolation,
//! robustness and timing metrics plus the heuristic score table.
//!
//! Every suite draws from its own [`Rng`] stream derived from the configured seed
//! and the representation tag, so non-timing results are reproducible and do not
//! depend on which other suites ran.

mod config;
pub mod fixtures;
pub mod metrics;
mod report;
pub mod robustness;
pub mod timing;

use std::str::FromStr;

pub use config::BenchConfig;
pub use metrics::{
    derivative_continuity, double_cover_check_with, endpoint_pairs, path_metrics,
    summarize_interpolation, InterpSummary, PathMetrics, StabilityResult,
};
pub use report::{BenchReport, Cell};
pub use robustness::{edge_cases, robustness_with, EdgeCase, EdgeFamily, RobustnessResult};
pub use timing::{Timing, TimingPlan};

use crate::error::{Result, RotError};
use crate::repr::{Registry, Representation};
use crate::rng::Rng;

/// Memory-alignment score from the storage size in bytes.
pub fn a_mem(storage_bytes: usize) -> f64 {
    match storage_bytes {
        32 => 1.0,
        24 => 0.9,
        48 => 0.7,
        72 => 0.3,
        _ => 0.5,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Heuristics {
    pub a_mem: f64,
    pub h_opt: Option<f64>,
    pub c_ml: Option<f64>,
}

pub fn heuristics_of(repr: &dyn Representation) -> Heuristics {
    Heuristics {
        a_mem: a_mem(repr.storage_bytes()),
        h_opt: repr.hardware_score(),
        c_ml: repr.ml_score(),
    }
}

pub fn heuristic_scores(tag: &str) -> Result<Heuristics> {
    Ok(heuristics_of(Registry::builtin().get(tag)?))
}

/// FNV-1a, used only to derive stable per-suite stream ids.
fn stream_id(suite: &str, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes().chain([0u8]).chain(tag.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn suite_rng(cfg: &BenchConfig, suite: &str, tag: &str) -> Rng {
    Rng::new(cfg.seed).fork(stream_id(suite, tag))
}

pub fn stability_suite(tag: &str, cfg: &BenchConfig) -> Result<StabilityResult> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    let _g = timing::metric_section();
    Ok(metrics::stability(repr, cfg, &mut suite_rng(cfg, "stability", tag)))
}

pub fn gimbal_susceptibility(tag: &str, cfg: &BenchConfig) -> Result<f64> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    let _g = timing::metric_section();
    metrics::gimbal(repr, cfg, &mut suite_rng(cfg, "gimbal", tag))
}

/// Antipodal consistency of the shipped quaternion → matrix conversion.
pub fn double_cover_check(cfg: &BenchConfig) -> Result<f64> {
    cfg.validate()?;
    let _g = timing::metric_section();
    Ok(double_cover_check_with(
        cfg,
        &mut suite_rng(cfg, "double-cover", "quaternion"),
        metrics::shipped_quat_to_matrix,
    ))
}

/// Interpolation means for the representation's own interpolator.
pub fn interpolation_suite(tag: &str, cfg: &BenchConfig) -> Result<InterpSummary> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    let method = repr.interp_method().ok_or_else(|| repr.unsupported("interpolation"))?;
    let _g = timing::metric_section();
    let pairs = shared_pairs(cfg);
    summarize_interpolation(method, &pairs, cfg)
}

/// Endpoint pairs used by every interpolation metric for this seed.
pub fn shared_pairs(cfg: &BenchConfig) -> Vec<(crate::RotationMatrix, crate::RotationMatrix)> {
    endpoint_pairs(cfg, &mut suite_rng(cfg, "pairs", ""))
}

pub fn robustness_suite(tag: &str, cfg: &BenchConfig) -> Result<RobustnessResult> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    if repr.kind().is_none() {
        return Err(repr.unsupported("round trip"));
    }
    let _g = timing::metric_section();
    Ok(robustness_with(cfg, &mut edge_rng(cfg), |src| repr.round_trip(src)))
}

/// Edge cases are shared by every representation.
pub fn edge_rng(cfg: &BenchConfig) -> Rng {
    suite_rng(cfg, "edge-cases", "")
}

pub fn time_composition(tag: &str, cfg: &BenchConfig) -> Result<Option<Timing>> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    let _g = timing::timing_section();
    Ok(repr.time_composition(&cfg.timing_plan(), &mut suite_rng(cfg, "t-comp", tag)))
}

pub fn time_interpolation(tag: &str, cfg: &BenchConfig) -> Result<Option<Timing>> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    let _g = timing::timing_section();
    Ok(repr.time_interpolation(&cfg.timing_plan(), &mut suite_rng(cfg, "t-interp", tag)))
}

pub fn batch_efficiency(tag: &str, cfg: &BenchConfig) -> Result<Option<Timing>> {
    cfg.validate()?;
    let reg = Registry::builtin();
    let repr = reg.get(tag)?;
    let _g = timing::timing_section();
    Ok(repr.time_batch(&cfg.timing_plan(), &mut suite_rng(cfg, "t-batch", tag)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Stability,
    Singularity,
    Interp,
    Robustness,
    Timing,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Stability,
        Suite::Singularity,
        Suite::Interp,
        Suite::Robustness,
        Suite::Timing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Stability => "stability",
            Suite::Singularity => "singularity",
            Suite::Interp => "interp",
            Suite::Robustness => "robustness",
            Suite::Timing => "timing",
        }
    }
}

impl FromStr for Suite {
    type Err = RotError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| RotError::InvalidConfig(format!("unknown suite `{s}`")))
    }
}

/// Storage and heuristic columns plus every non-timing suite in `suites`.
fn metric_row(repr: &dyn Representation, cfg: &BenchConfig, suites: &[Suite], pairs: &[(crate::RotationMatrix, crate::RotationMatrix)]) -> BenchReport {
    let tag = repr.tag();
    let h = heuristics_of(repr);
    let mut row = BenchReport::new(tag, repr.storage_bytes(), h.a_mem);
    row.h_opt = h.h_opt;
    row.c_ml = h.c_ml;
    if repr.is_probabilistic() {
        return row;
    }
    if suites.contains(&Suite::Stability) {
        let s = metrics::stability(repr, cfg, &mut suite_rng(cfg, "stability", tag));
        row.eps_stab = Some(s.eps_stab);
    }
    if suites.contains(&Suite::Singularity) {
        match metrics::gimbal(repr, cfg, &mut suite_rng(cfg, "gimbal", tag)) {
            Ok(v) => row.s_gimbal = Some(v),
            Err(e) => row.push_error("singularity", e),
        }
        row.s_double = Some(metrics::double_cover_for(
            repr,
            cfg,
            &mut suite_rng(cfg, "double-cover", tag),
        ));
    }
    if suites.contains(&Suite::Interp) {
        if let Some(method) = repr.interp_method() {
            match summarize_interpolation(method, pairs, cfg) {
                Ok(s) => {
                    row.path_length = Some(s.path_length);
                    row.eps_geo = Some(s.eps_geo);
                    row.sigma_deriv = Some(s.sigma_deriv);
                }
                Err(e) => row.push_error("interp", e),
            }
        }
    }
    if suites.contains(&Suite::Robustness) {
        let r = robustness_with(cfg, &mut edge_rng(cfg), |src| repr.round_trip(src));
        row.f_rate = Some(r.f_rate);
        row.eps_avg = r.eps_avg;
        row.eps_max = r.eps_max;
    }
    row
}

fn timing_columns(repr: &dyn Representation, cfg: &BenchConfig, row: &mut BenchReport) {
    let tag = repr.tag();
    let plan = cfg.timing_plan();
    let comp = repr.time_composition(&plan, &mut suite_rng(cfg, "t-comp", tag));
    let interp = repr.time_interpolation(&plan, &mut suite_rng(cfg, "t-interp", tag));
    let batch = repr.time_batch(&plan, &mut suite_rng(cfg, "t-batch", tag));
    let all = [comp, interp, batch];
    row.t_comp = comp.map(|t| t.micros);
    row.t_interp = interp.map(|t| t.micros);
    row.t_batch = batch.map(|t| t.micros);
    if all.iter().any(Option::is_some) {
        row.timing_low_confidence = Some(all.iter().flatten().any(|t| t.low_confidence));
    }
}

/// One row per registered representation. Metric suites run on one worker
/// thread per row; timing runs afterwards on the calling thread, one kernel at a
/// time, with every other benchmark section in the process excluded.
pub fn run_suites(registry: &Registry, cfg: &BenchConfig, suites: &[Suite]) -> Result<Vec<BenchReport>> {
    cfg.validate()?;
    let mut rows: Vec<BenchReport> = {
        let _g = timing::metric_section();
        let pairs = if suites.contains(&Suite::Interp) {
            shared_pairs(cfg)
        } else {
            Vec::new()
        };
        std::thread::scope(|s| {
            let handles: Vec<_> = registry
                .iter()
                .map(|repr| {
                    let pairs = &pairs;
                    s.spawn(move || metric_row(repr, cfg, suites, pairs))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("metric worker panicked"))
                .collect()
        })
    };
    if suites.contains(&Suite::Timing) {
        let _g = timing::timing_section();
        for (repr, row) in registry.iter().zip(rows.iter_mut()) {
            timing_columns(repr, cfg, row);
        }
    }
    Ok(rows)
}

/// Every suite for the built-in representations.
pub fn full_table(cfg: &BenchConfig) -> Result<Vec<BenchReport>> {
    run_suites(&Registry::builtin(), cfg, &Suite::ALL)
}
