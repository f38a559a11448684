//! wn-families: families of c.e. sets with a partial computable normalizer,
//! their domain enumerators and standard principal numberings.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::ceset::CeSet;
use super::funcs::{ComputableCeSequence, SigmaApply, SigmaFn, TotalFn};
use crate::budgets::Budgets;
use crate::nat::Nat;

/// A wn-family: the normalizer `sigma`, an optional explicit domain
/// enumerator `h0` (synthesized by dovetailing when absent), and, on the
/// explicit tier, the full list of member sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WnFamily {
    pub sigma: SigmaFn,
    pub h0: Option<TotalFn>,
    pub explicit_members: Option<Vec<BTreeSet<Nat>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("explicit member {member:?}: normalizer output {output:?} is not that member")]
    NormalizerMismatch {
        member: BTreeSet<Nat>,
        output: Option<BTreeSet<Nat>>,
    },
    #[error("normalizer produced a non-member {output:?} on probe index {probe}")]
    NonMemberOutput {
        probe: Nat,
        output: BTreeSet<Nat>,
    },
    #[error("explicit family must have at least one member")]
    Empty,
}

impl WnFamily {
    /// Builds an explicit-tier family, verifying both wn-conditions against
    /// the member list: the normalizer fixes every member (checked through
    /// its structural application) and maps probe sets into the family.
    pub fn explicit(
        sigma: SigmaFn,
        members: Vec<BTreeSet<Nat>>,
        budgets: Budgets,
    ) -> Result<WnFamily, FamilyError> {
        if members.is_empty() {
            return Err(FamilyError::Empty);
        }
        for m in &members {
            let w = CeSet::Finite(m.clone());
            match sigma.apply_set(&w, budgets) {
                Some(SigmaApply::Defined(out)) => {
                    // exact for structurally finite outputs, stage-saturated
                    // for program-backed ones
                    let out_set = out
                        .limit_if_finite()
                        .unwrap_or_else(|| out.stage(budgets.stages));
                    if &out_set != m {
                        return Err(FamilyError::NormalizerMismatch {
                            member: m.clone(),
                            output: Some(out_set),
                        });
                    }
                }
                Some(SigmaApply::Diverged) => {
                    return Err(FamilyError::NormalizerMismatch {
                        member: m.clone(),
                        output: None,
                    })
                }
                // machine-level sigma: condition (ii) is budget-checked via
                // wn_check on demand rather than at construction
                Some(SigmaApply::Unsupported) | None => {}
            }
        }
        Ok(WnFamily {
            sigma,
            h0: None,
            explicit_members: Some(members),
        })
    }

    /// A symbolic family: conditions are only ever budget-checkable.
    pub fn symbolic(sigma: SigmaFn, h0: Option<TotalFn>) -> WnFamily {
        WnFamily {
            sigma,
            h0,
            explicit_members: None,
        }
    }

    pub fn members(&self) -> Option<&[BTreeSet<Nat>]> {
        self.explicit_members.as_deref()
    }

    /// The domain enumerator: the given one, or the canonical dovetailer
    /// over Cantor-ordered (input, step) pairs.
    pub fn h0(&self) -> TotalFn {
        self.h0
            .clone()
            .unwrap_or_else(|| h0_from_sigma(&self.sigma))
    }

    /// Index of an explicit member equal to the given set.
    pub fn member_index(&self, set: &BTreeSet<Nat>) -> Option<usize> {
        self.explicit_members
            .as_ref()?
            .iter()
            .position(|m| m == set)
    }
}

/// The canonical domain enumerator of a normalizer: dovetails
/// (input, step) pairs in Cantor order, hitting exactly the inputs where
/// sigma converges; total, with range equal to sigma's domain.
pub fn h0_from_sigma(sigma: &SigmaFn) -> TotalFn {
    TotalFn::SigmaDovetail {
        sigma: Box::new(sigma.clone()),
    }
}

/// Per-candidate verdict of the wn-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WnVerdict {
    /// sigma produced a member; when the candidate itself denotes a member,
    /// it was verified equal to the output.
    Verified {
        member: usize,
        /// condition (ii) was vacuous: the candidate is not a member.
        vacuous: bool,
    },
    Refuted {
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

/// Checks the wn-conditions for each candidate set against an explicit
/// family: if the candidate denotes a member, the normalizer must be defined
/// on it and reproduce it; either way a defined output must be a member.
pub fn wn_check(family: &WnFamily, candidates: &[CeSet], budgets: Budgets) -> Vec<WnVerdict> {
    candidates
        .iter()
        .map(|c| wn_check_one(family, c, budgets))
        .collect()
}

fn wn_check_one(family: &WnFamily, candidate: &CeSet, budgets: Budgets) -> WnVerdict {
    let Some(members) = family.members() else {
        return WnVerdict::Unknown {
            reason: "symbolic family: conditions are budget-only".into(),
        };
    };
    // what the candidate denotes, exactly when structurally finite,
    // otherwise saturated at budget
    let (cand_set, cand_exact) = match candidate.limit_if_finite() {
        Some(s) => (s, true),
        None => (candidate.stage(budgets.stages), false),
    };
    let cand_member = members.iter().position(|m| *m == cand_set);

    // apply sigma: through the index when the candidate is a genuine
    // program, structurally otherwise
    let applied = match candidate {
        CeSet::Program(pc) => match pc.index().to_u64() {
            Some(n) => family.sigma.apply_index(n, budgets),
            None => family
                .sigma
                .apply_set(candidate, budgets)
                .unwrap_or(SigmaApply::Unsupported),
        },
        _ => family
            .sigma
            .apply_set(candidate, budgets)
            .unwrap_or(SigmaApply::Unsupported),
    };

    match applied {
        SigmaApply::Unsupported => WnVerdict::Unknown {
            reason: "normalizer not evaluable on this candidate at desk scale".into(),
        },
        SigmaApply::Diverged => match (cand_member, cand_exact) {
            (Some(_), true) => WnVerdict::Refuted {
                reason: "candidate denotes a member but sigma diverged within budget".into(),
            },
            _ => WnVerdict::Unknown {
                reason: "sigma diverged within budget".into(),
            },
        },
        SigmaApply::Defined(out) => {
            let (out_set, out_exact) = match out.limit_if_finite() {
                Some(s) => (s, true),
                None => (out.stage(budgets.stages), false),
            };
            let out_member = members.iter().position(|m| *m == out_set);
            match out_member {
                None if out_exact => WnVerdict::Refuted {
                    reason: format!("sigma output {out_set:?} is not a member"),
                },
                None => WnVerdict::Unknown {
                    reason: "sigma output matched no member at budget".into(),
                },
                Some(idx) => match cand_member {
                    Some(_) => {
                        if out_set == cand_set {
                            WnVerdict::Verified {
                                member: idx,
                                vacuous: false,
                            }
                        } else if cand_exact && out_exact {
                            WnVerdict::Refuted {
                                reason: format!(
                                    "candidate denotes member {cand_set:?} but sigma output {out_set:?}"
                                ),
                            }
                        } else {
                            WnVerdict::Unknown {
                                reason: "candidate/output equality undecided at budget".into(),
                            }
                        }
                    }
                    None => WnVerdict::Verified {
                        member: idx,
                        vacuous: true,
                    },
                },
            }
        }
    }
}

/// The standard principal numbering `gamma(n) = W_{sigma(h0(n))}` of a
/// wn-family.
#[derive(Debug, Clone)]
pub struct PrincipalNumbering {
    pub family: WnFamily,
}

impl PrincipalNumbering {
    pub fn new(family: WnFamily) -> Self {
        PrincipalNumbering { family }
    }

    /// The set `gamma(n)` denotes, evaluated under a budget.
    pub fn gamma(&self, n: Nat, budgets: Budgets) -> Option<CeSet> {
        let h0 = self.family.h0();
        let m = h0.eval(n, budgets.steps).value()?;
        match self.family.sigma.apply_index(m, budgets) {
            SigmaApply::Defined(w) => Some(w),
            _ => None,
        }
    }

    /// On the explicit tier: which member `gamma(n)` denotes.
    pub fn gamma_member(&self, n: Nat, budgets: Budgets) -> Option<usize> {
        let w = self.gamma(n, budgets)?;
        let set = w
            .limit_if_finite()
            .unwrap_or_else(|| w.stage(budgets.stages));
        self.family.member_index(&set)
    }

    /// Searches the least `n_bound` such that `gamma(0..=n_bound)` covers
    /// every explicit member; reports it together with first-hit indices.
    pub fn surjectivity_bound(
        &self,
        budgets: Budgets,
        max_n: Nat,
    ) -> Option<(Nat, Vec<Nat>)> {
        let first = self.member_first_hits(budgets, max_n)?;
        let hits: Option<Vec<Nat>> = first.into_iter().collect();
        let hits = hits?;
        let bound = hits.iter().max().copied().unwrap_or(0);
        Some((bound, hits))
    }

    /// First gamma-index denoting each explicit member, scanning up to
    /// `search_bound`. The backbone of the surjectivity and reduction
    /// checks.
    pub fn member_first_hits(
        &self,
        budgets: Budgets,
        search_bound: Nat,
    ) -> Option<Vec<Option<Nat>>> {
        let members = self.family.members()?;
        let mut first: Vec<Option<Nat>> = vec![None; members.len()];
        for n in 0..=search_bound {
            if first.iter().all(|h| h.is_some()) {
                break;
            }
            if let Some(idx) = self.gamma_member(n, budgets) {
                if first[idx].is_none() {
                    first[idx] = Some(n);
                }
            }
        }
        Some(first)
    }

    /// Reduction of a computable sequence into the numbering: for each
    /// sampled `i`, finds `f(i)` with `gamma(f(i)) = V_i` (set equality on
    /// the explicit tier), witnessing that gamma is principal.
    pub fn reduce_sequence(
        &self,
        sequence: &ComputableCeSequence,
        samples: &[Nat],
        budgets: Budgets,
        search_bound: Nat,
    ) -> Option<Vec<(Nat, Nat)>> {
        let members = self.family.members()?;
        let first = self.member_first_hits(budgets, search_bound)?;
        let mut out = Vec::new();
        for &i in samples {
            let target = sequence.member(i, budgets.steps)?;
            let target_set = target.stage(budgets.stages);
            let idx = members.iter().position(|mem| *mem == target_set)?;
            out.push((i, first[idx]?));
        }
        Some(out)
    }
}
