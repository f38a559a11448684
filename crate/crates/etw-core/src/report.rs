//! Deterministic JSON reports: given the same instance and budgets, the
//! canonical section is byte-identical across runs and platforms. Wall
//! times live in a separate metadata section that byte comparisons strip.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::budgets::Budgets;
use crate::nat::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: "etw".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Verified,
    Refuted,
    Unknown,
}

/// One check record. Witnesses serialize finite sets as sorted lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub verdict: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub budget_steps: u64,
    pub budget_stages: Nat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturation_stage: Option<Nat>,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, verdict: VerdictKind, budgets: Budgets) -> Self {
        CheckRecord {
            check: check.into(),
            verdict,
            witness: None,
            budget_steps: budgets.steps.steps(),
            budget_stages: budgets.stages,
            saturation_stage: None,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_saturation(mut self, stage: Nat) -> Self {
        self.saturation_stage = Some(stage);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Metadata {
    pub wall_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub instance_digest: String,
    pub defaults: BudgetRecord,
    pub checks: Vec<CheckRecord>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub steps: u64,
    pub stages: Nat,
}

impl From<Budgets> for BudgetRecord {
    fn from(b: Budgets) -> Self {
        BudgetRecord {
            steps: b.steps.steps(),
            stages: b.stages,
        }
    }
}

impl Report {
    pub fn new(instance_digest: impl Into<String>, budgets: Budgets) -> Self {
        Report {
            tool: ToolInfo::default(),
            instance_digest: instance_digest.into(),
            defaults: budgets.into(),
            checks: Vec::new(),
            metadata: Metadata::default(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    /// Exit status: 0 all verified, 1 some refuted, 2 some unknown.
    pub fn exit_status(&self) -> i32 {
        if self
            .checks
            .iter()
            .any(|c| c.verdict == VerdictKind::Refuted)
        {
            1
        } else if self
            .checks
            .iter()
            .any(|c| c.verdict == VerdictKind::Unknown)
        {
            2
        } else {
            0
        }
    }

    /// The canonical bytes: everything except the metadata section, with
    /// stable key order. Two runs over identical inputs must agree on this
    /// bit for bit.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        #[derive(Serialize)]
        struct Canonical<'a> {
            tool: &'a ToolInfo,
            instance_digest: &'a str,
            defaults: &'a BudgetRecord,
            checks: &'a [CheckRecord],
        }
        serde_json::to_vec_pretty(&Canonical {
            tool: &self.tool,
            instance_digest: &self.instance_digest,
            defaults: &self.defaults,
            checks: &self.checks,
        })
        .expect("report serialization cannot fail")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Hex digest of instance text, pinning reports to their inputs.
pub fn digest_text(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
