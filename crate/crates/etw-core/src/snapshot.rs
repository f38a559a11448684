//! Resumable enumeration jobs and their snapshot format.
//!
//! Snapshots are versioned binary files: the magic prefix `ETWSNAP1`, a
//! little-endian u32 payload length, the JSON-encoded job, and the first 8
//! bytes of the payload's SHA-256. Resuming a snapshot continues exactly as
//! an uninterrupted run would, since every job's state is a pure function
//! of its definition and its stage counter plus accumulated output.

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

use crate::domains::{alpha_c, DomainBasis};
use crate::kernel::{image_stage, we_stage, ProgramIndex};
use crate::nat::Nat;
use crate::numberings::CeSet;
use crate::spaces::{IndexSetJob, Space};
use crate::trees::{sigma_t_stage, Tree};

pub const MAGIC: &[u8; 8] = b"ETWSNAP1";

/// A resumable enumeration job: one variant per long-running stage
/// construction the workbench runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Job {
    /// Stages of `W_e`.
    WeEnum {
        index: ProgramIndex,
        stage: Nat,
        produced: BTreeSet<Nat>,
    },
    /// Stages of `im(phi_e)`.
    ImageEnum {
        index: ProgramIndex,
        stage: Nat,
        produced: BTreeSet<Nat>,
    },
    /// Index-set enumeration over a space.
    IndexSet {
        space: Box<Space>,
        job: IndexSetJob,
    },
    /// The tree normalizer's stage construction.
    SigmaT {
        tree: Tree,
        input: CeSet,
        stage: Nat,
        produced: BTreeSet<Nat>,
    },
    /// The element-approximation recursion over a domain.
    AlphaC {
        domain: DomainBasis,
        input: CeSet,
        stage: Nat,
        current: Nat,
    },
}

impl Job {
    /// Advances the job by `stages` further stages.
    pub fn advance(&mut self, stages: Nat) {
        match self {
            Job::WeEnum {
                index,
                stage,
                produced,
            } => {
                *stage += stages;
                let p = crate::kernel::decode_program(index);
                *produced = we_stage(&p, *stage);
            }
            Job::ImageEnum {
                index,
                stage,
                produced,
            } => {
                *stage += stages;
                let p = crate::kernel::decode_program(index);
                *produced = image_stage(&p, *stage);
            }
            Job::IndexSet { space, job } => {
                let target = job.stage + stages;
                job.run_to(space, target);
            }
            Job::SigmaT {
                tree,
                input,
                stage,
                produced,
            } => {
                *stage += stages;
                *produced = sigma_t_stage(tree, input, *stage);
            }
            Job::AlphaC {
                domain,
                input,
                stage,
                current,
            } => {
                *stage += stages;
                *current = alpha_c(domain, input, *stage).limit_index();
            }
        }
    }

    pub fn stage(&self) -> Nat {
        match self {
            Job::WeEnum { stage, .. }
            | Job::ImageEnum { stage, .. }
            | Job::SigmaT { stage, .. }
            | Job::AlphaC { stage, .. } => *stage,
            Job::IndexSet { job, .. } => job.stage,
        }
    }

    /// The job's result as a report witness value.
    pub fn result_value(&self) -> serde_json::Value {
        match self {
            Job::WeEnum { produced, stage, .. } | Job::ImageEnum { produced, stage, .. } => {
                json!({ "stage": stage, "set": produced })
            }
            Job::IndexSet { job, .. } => {
                json!({ "stage": job.stage, "set": job.produced })
            }
            Job::SigmaT { produced, stage, .. } => {
                json!({ "stage": stage, "set": produced })
            }
            Job::AlphaC { stage, current, .. } => {
                json!({ "stage": stage, "index": current })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SnapshotError {
    #[error("missing or wrong magic prefix")]
    BadMagic,
    #[error("truncated snapshot")]
    Truncated,
    #[error("checksum mismatch")]
    BadChecksum,
    #[error("malformed payload: {0}")]
    BadPayload(String),
}

/// Serializes a job into the snapshot wire format.
pub fn encode_snapshot(job: &Job) -> Vec<u8> {
    let payload = serde_json::to_vec(job).expect("job serialization cannot fail");
    let mut out = Vec::with_capacity(payload.len() + 20);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    out.extend_from_slice(&payload);
    let mut h = Sha256::new();
    h.update(&payload);
    out.extend_from_slice(&h.finalize()[..8]);
    out
}

/// Parses and validates a snapshot.
pub fn decode_snapshot(bytes: &[u8]) -> Result<Job, SnapshotError> {
    if bytes.len() < MAGIC.len() + 4 {
        return Err(if bytes.starts_with(&MAGIC[..bytes.len().min(8)]) {
            SnapshotError::Truncated
        } else {
            SnapshotError::BadMagic
        });
    }
    if &bytes[..8] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let need = 12 + len + 8;
    if bytes.len() < need {
        return Err(SnapshotError::Truncated);
    }
    let payload = &bytes[12..12 + len];
    let mut h = Sha256::new();
    h.update(payload);
    if h.finalize()[..8] != bytes[12 + len..need] {
        return Err(SnapshotError::BadChecksum);
    }
    serde_json::from_slice(payload).map_err(|e| SnapshotError::BadPayload(e.to_string()))
}
