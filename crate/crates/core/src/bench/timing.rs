//! Wall-clock harness: unmeasured warmup, then one monotonic-clock span around
//! `trials` calls on pre-generated operands.

use std::hint::black_box;
use std::sync::{OnceLock, RwLock, RwLockReadGuard, RwLockWriteGuard};
use std::time::{Duration, Instant};

/// Timer resolution above which a measurement is flagged.
pub const LOW_CONFIDENCE_RESOLUTION: Duration = Duration::from_nanos(10);

const OPERAND_POOL: usize = 1024;
const BATCH_POOL: usize = 16;

static BENCH_LOCK: RwLock<()> = RwLock::new(());

/// Shared by metric suites; any number may run at once.
pub(crate) fn metric_section() -> RwLockReadGuard<'static, ()> {
    BENCH_LOCK.read().unwrap_or_else(|e| e.into_inner())
}

/// Exclusive: no other benchmark section runs in this process while held.
pub(crate) fn timing_section() -> RwLockWriteGuard<'static, ()> {
    BENCH_LOCK.write().unwrap_or_else(|e| e.into_inner())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimingPlan {
    pub warmup: usize,
    pub trials: usize,
    pub batch: usize,
}

impl TimingPlan {
    pub fn new(warmup: usize, trials: usize, batch: usize) -> Self {
        Self {
            warmup,
            trials: trials.max(1),
            batch: batch.max(1),
        }
    }

    /// Number of distinct operand sets generated before timing.
    pub fn pool_size(&self) -> usize {
        self.trials.min(OPERAND_POOL)
    }

    pub fn batch_pool_size(&self) -> usize {
        self.trials.min(BATCH_POOL)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Timing {
    /// Mean wall-clock time per call.
    pub micros: f64,
    pub trials: usize,
    pub low_confidence: bool,
}

/// Smallest non-zero step observed between consecutive clock reads.
pub fn timer_resolution() -> Duration {
    static RES: OnceLock<Duration> = OnceLock::new();
    *RES.get_or_init(|| {
        let mut best = Duration::MAX;
        for _ in 0..200 {
            let a = Instant::now();
            let mut b = Instant::now();
            while b == a {
                b = Instant::now();
            }
            best = best.min(b - a);
        }
        best
    })
}

/// Runs `op` over `items` cyclically: `plan.warmup` unmeasured calls, then
/// `plan.trials` calls inside a single timed span.
pub fn measure<T, R>(plan: &TimingPlan, items: &[T], mut op: impl FnMut(&T) -> R) -> Timing {
    assert!(!items.is_empty(), "timing needs at least one operand");
    let n = items.len();
    let mut idx = 0;
    for _ in 0..plan.warmup {
        black_box(op(black_box(&items[idx])));
        idx += 1;
        if idx == n {
            idx = 0;
        }
    }
    idx = 0;
    let start = Instant::now();
    for _ in 0..plan.trials {
        black_box(op(black_box(&items[idx])));
        idx += 1;
        if idx == n {
            idx = 0;
        }
    }
    let elapsed = start.elapsed();
    Timing {
        micros: elapsed.as_secs_f64() * 1e6 / plan.trials as f64,
        trials: plan.trials,
        low_confidence: plan.trials < 2 || timer_resolution() > LOW_CONFIDENCE_RESOLUTION,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_is_flagged() {
        let t = measure(&TimingPlan::new(0, 1, 1), &[1u64], |x| x.wrapping_mul(3));
        assert!(t.low_confidence);
        assert_eq!(t.trials, 1);
        assert!(t.micros >= 0.0);
    }

    #[test]
    fn slower_kernel_measures_slower() {
        let plan = TimingPlan::new(10, 200, 1);
        let items: Vec<f64> = (0..64).map(|i| i as f64 * 0.01).collect();
        let fast = measure(&plan, &items, |x| x + 1.0);
        let slow = measure(&plan, &items, |x| {
            let mut acc = *x;
            for _ in 0..2000 {
                acc = (acc + 0.1).sin();
            }
            acc
        });
        assert!(slow.micros > fast.micros);
    }

    #[test]
    fn pools_are_bounded_by_trials() {
        let p = TimingPlan::new(0, 5, 3);
        assert_eq!(p.pool_size(), 5);
        assert_eq!(TimingPlan::new(0, 100_000, 1).pool_size(), OPERAND_POOL);
        assert_eq!(p.batch_pool_size(), 5);
    }
}
