//! Budget pairs for semi-decision procedures.
//!
//! Machine runs are bounded by a step budget; stage enumerations of c.e.
//! sets are bounded separately, because materializing stage `s` of a
//! program-backed set costs up to `s` runs of `s` steps each. Every verdict
//! a check emits is relative to the budgets it ran under, and reports carry
//! them.

use serde::{Deserialize, Serialize};

use crate::kernel::StepBudget;
use crate::nat::Nat;

pub const DEFAULT_STEPS: u64 = 100_000;
pub const DEFAULT_STAGES: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Per-run step budget for machine evaluation.
    pub steps: StepBudget,
    /// Stage bound for enumerations of c.e. sets.
    pub stages: Nat,
}

impl Budgets {
    pub const fn new(steps: u64, stages: Nat) -> Self {
        Budgets {
            steps: StepBudget::new(steps),
            stages,
        }
    }
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets::new(DEFAULT_STEPS, DEFAULT_STAGES)
    }
}
