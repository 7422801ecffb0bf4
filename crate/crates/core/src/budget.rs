//! Cooperative resource limits for long enumerations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Limits checked between units of work (enumeration partitions, MITM passes).
#[derive(Clone, Debug)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_memory_bytes: u64,
    /// Largest `log2` of a space that may be enumerated exhaustively.
    pub max_enumeration_log2: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self { deadline: None, max_memory_bytes: 2 << 30, max_enumeration_log2: 44 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { deadline: None, max_memory_bytes: u64::MAX, max_enumeration_log2: 64 }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn with_memory_mb(mut self, mb: u64) -> Self {
        self.max_memory_bytes = mb.saturating_mul(1 << 20);
        self
    }

    pub fn with_enumeration_log2(mut self, log2: u32) -> Self {
        self.max_enumeration_log2 = log2;
        self
    }

    pub fn check_time(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded(format!("time limit reached during {what}"))),
            _ => Ok(()),
        }
    }

    pub fn check_enumeration(&self, log2: usize, what: &str) -> Result<()> {
        if log2 > self.max_enumeration_log2 as usize {
            return Err(Error::BudgetExceeded(format!(
                "{what} needs 2^{log2} steps, cap is 2^{}",
                self.max_enumeration_log2
            )));
        }
        Ok(())
    }
}
