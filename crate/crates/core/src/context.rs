//! Resource limits and shared run state.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{AlgebraError, Result};

/// Default cap on the number of generators an ideal power or product may
/// produce before deduplication.
pub const DEFAULT_GENERATOR_CAP: usize = 20_000;

/// Default upper bound for I-adic order searches.
pub const DEFAULT_NU_CAP: u32 = 32;

/// Persistent storage for reduced Gröbner bases, keyed by a content hash.
/// Implementations must make writes atomic; a missing key is the only form
/// of invalidation.
pub trait BasisStore: Send + Sync {
    fn load(&self, key: &str) -> Option<Vec<String>>;
    fn save(&self, key: &str, basis: &[String]);
}

/// Limits and counters shared by every computation of one job.
pub struct Ctx {
    max_steps: Option<u64>,
    deadline: Option<Instant>,
    started: Instant,
    steps: AtomicU64,
    pub generator_cap: usize,
    pub nu_cap: u32,
    store: Option<Arc<dyn BasisStore>>,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::unlimited()
    }
}

impl Ctx {
    pub fn unlimited() -> Self {
        Ctx {
            max_steps: None,
            deadline: None,
            started: Instant::now(),
            steps: AtomicU64::new(0),
            generator_cap: DEFAULT_GENERATOR_CAP,
            nu_cap: DEFAULT_NU_CAP,
            store: None,
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn with_step_limit(mut self, steps: u64) -> Self {
        self.max_steps = Some(steps);
        self
    }

    pub fn with_store(mut self, store: Arc<dyn BasisStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn with_nu_cap(mut self, cap: u32) -> Self {
        self.nu_cap = cap;
        self
    }

    pub fn with_generator_cap(mut self, cap: usize) -> Self {
        self.generator_cap = cap;
        self
    }

    pub fn store(&self) -> Option<&Arc<dyn BasisStore>> {
        self.store.as_ref()
    }

    /// Count `n` reduction steps and enforce the limits.
    pub fn tick(&self, n: u64) -> Result<()> {
        let done = self.steps.fetch_add(n, Ordering::Relaxed) + n;
        if let Some(max) = self.max_steps {
            if done > max {
                return Err(AlgebraError::Budget(format!("step limit {max} reached")));
            }
        }
        self.check_time()?;
        Ok(())
    }

    pub fn check_time(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(AlgebraError::Budget("time limit reached".into()));
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}
