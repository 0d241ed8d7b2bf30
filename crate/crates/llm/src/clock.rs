use std::sync::atomic::{AtomicI64, Ordering};

use chrono::{DateTime, Utc};

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Deterministic clock for replayed runs: starts at a fixed instant and
/// advances one second per reading.
pub struct LogicalClock {
    next: AtomicI64,
}

/// 2024-01-01T00:00:00Z
pub const LOGICAL_EPOCH: i64 = 1_704_067_200;

impl Default for LogicalClock {
    fn default() -> Self {
        Self::starting_at(LOGICAL_EPOCH)
    }
}

impl LogicalClock {
    pub fn starting_at(unix_seconds: i64) -> Self {
        Self { next: AtomicI64::new(unix_seconds) }
    }
}

impl Clock for LogicalClock {
    fn now(&self) -> DateTime<Utc> {
        let t = self.next.fetch_add(1, Ordering::SeqCst);
        DateTime::from_timestamp(t, 0).expect("logical clock within range")
    }
}
