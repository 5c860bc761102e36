use serde::{Deserialize, Serialize};

/// Affine batch latency: `fixed_ms + per_state_ms * batch_size`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatencyModel {
    pub fixed_ms: f64,
    pub per_state_ms: f64,
}

/// Fit to a measured GPU throughput curve: 38 states/s at
/// size 1, roughly 24x that at size 32.
pub const TABLE_FIT: LatencyModel = LatencyModel {
    fixed_ms: 26.0,
    per_state_ms: 0.28,
};

impl Default for LatencyModel {
    fn default() -> Self {
        TABLE_FIT
    }
}

impl LatencyModel {
    pub fn new(fixed_ms: f64, per_state_ms: f64) -> Self {
        assert!(fixed_ms >= 0.0 && per_state_ms >= 0.0, "negative latency");
        LatencyModel {
            fixed_ms,
            per_state_ms,
        }
    }

    pub fn latency_ms(&self, batch_size: usize) -> f64 {
        self.fixed_ms + self.per_state_ms * batch_size as f64
    }

    pub fn batches_per_second(&self, batch_size: usize) -> f64 {
        1000.0 / self.latency_ms(batch_size)
    }

    /// States evaluated per second at the given batch size.
    pub fn throughput(&self, batch_size: usize) -> f64 {
        assert!(batch_size >= 1);
        batch_size as f64 * self.batches_per_second(batch_size)
    }

    /// Simulated evaluator time for a run of `batches` calls totalling
    /// `states` positions.
    pub fn total_ms(&self, batches: u64, states: u64) -> f64 {
        self.fixed_ms * batches as f64 + self.per_state_ms * states as f64
    }
}
