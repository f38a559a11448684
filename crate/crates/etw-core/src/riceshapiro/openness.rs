//! Openness of point classes on explicit modular spaces: monotonicity of
//! the induced set class, upward closure, the forward direction of the
//! index-set characterization, and the inspectable trace of the
//! non-openness argument.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::budgets::Budgets;
use crate::nat::Nat;
use crate::spaces::{
    eff_open_points, point_of_index, point_profile, specialization_leq, ModularWitness,
    PointId, Space,
};

/// Monotonicity of a class of sets over an explicit family: `A ⊆ B`,
/// `A ∈ K̂`, `B` in the family implies `B ∈ K̂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonotoneVerdict {
    Monotone,
    Violated {
        smaller: BTreeSet<Nat>,
        larger: BTreeSet<Nat>,
    },
}

pub fn monotone_check(members: &[BTreeSet<Nat>], k_hat: &BTreeSet<usize>) -> MonotoneVerdict {
    for &a in k_hat {
        for (b_idx, b) in members.iter().enumerate() {
            if members[a].is_subset(b) && !k_hat.contains(&b_idx) {
                return MonotoneVerdict::Violated {
                    smaller: members[a].clone(),
                    larger: b.clone(),
                };
            }
        }
    }
    MonotoneVerdict::Monotone
}

/// Upward closure of a point class under the specialisation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureVerdict {
    Closed,
    Violated { inside: PointId, above: PointId },
}

pub fn upward_closure_check(space: &Space, k: &BTreeSet<PointId>) -> ClosureVerdict {
    for &a in k {
        for b in 0..space.points.len() {
            if specialization_leq(space, a, b).unwrap_or(false) && !k.contains(&b) {
                return ClosureVerdict::Violated {
                    inside: a,
                    above: b,
                };
            }
        }
    }
    ClosureVerdict::Closed
}

/// Forward Rice-Shapiro direction on an explicit modular space: an open
/// class is represented by the witness indices of its member `b_n`'s, and
/// the representation re-verifies exhaustively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RsForwardOutcome {
    Represented {
        /// Witness indices `{n : b_n ∈ K}`.
        indices: BTreeSet<usize>,
    },
    NotOpen {
        inside: PointId,
        above: PointId,
    },
    RepresentationMismatch {
        indices: BTreeSet<usize>,
        covered: BTreeSet<PointId>,
    },
}

pub fn rs_forward(
    space: &Space,
    witness: &ModularWitness,
    k: &BTreeSet<PointId>,
    budgets: Budgets,
) -> RsForwardOutcome {
    if let ClosureVerdict::Violated { inside, above } = upward_closure_check(space, k) {
        return RsForwardOutcome::NotOpen { inside, above };
    }
    let indices: BTreeSet<usize> = (0..witness.len())
        .filter(|&n| k.contains(&witness.b[n]))
        .collect();
    let mut covered: BTreeSet<PointId> = BTreeSet::new();
    for &n in &indices {
        covered.extend(eff_open_points(space, &witness.o[n], budgets));
    }
    if covered == *k {
        RsForwardOutcome::Represented { indices }
    } else {
        RsForwardOutcome::RepresentationMismatch { indices, covered }
    }
}

/// One record of the non-openness trace at presentation stage `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonOpenRecord {
    pub m: Nat,
    /// The presentation stage `V_m` of the chosen point's A-set.
    pub v_m: BTreeSet<Nat>,
    /// `U_m`: indices whose point lies in the intersection of the `V_m`
    /// basic opens, up to the report bound.
    pub u_m: BTreeSet<Nat>,
    /// Minimal witness index `n` with `a ∈ O_n` and `b_n` in the
    /// intersection, preferring one whose `b_n` is outside the class.
    pub n_m: Option<usize>,
    /// An index in `U_m` outside `Ix(K)`, the leak the argument feeds on.
    pub h_m: Nat,
    /// When every eligible `b_n` sits inside the class, that is itself a
    /// monotonicity violation; recorded instead of silently proceeding.
    pub closure_violation: Option<(PointId, PointId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonOpenOutcome {
    /// The class is open at the chosen point: some witness open containing
    /// it stays inside the class.
    OpenAt { separating: usize },
    Trace { records: Vec<NonOpenRecord> },
    /// The machinery could not produce a leak (cannot happen on a space
    /// whose modular witness verifies, kept for honesty).
    Stuck { m: Nat },
}

/// Emits the inspectable machinery of the non-openness argument for a point
/// `a` of `k` at which the class fails to be open.
pub fn non_open_witness(
    space: &Space,
    witness: &ModularWitness,
    k: &BTreeSet<PointId>,
    a: PointId,
    stage_bound: Nat,
    index_bound: Nat,
    budgets: Budgets,
) -> NonOpenOutcome {
    // precondition: every witness open containing a meets the complement
    for n in 0..witness.len() {
        let o_n = eff_open_points(space, &witness.o[n], budgets);
        if o_n.contains(&a) && o_n.is_subset(k) {
            return NonOpenOutcome::OpenAt { separating: n };
        }
    }
    let a_profile = point_profile(space, a);
    let a_set = crate::numberings::CeSet::Finite(a_profile);
    let ix_k: BTreeSet<Nat> = (0..=index_bound)
        .filter(|&i| k.contains(&point_of_index(space, i)))
        .collect();
    let mut records = Vec::new();
    for m in 0..=stage_bound {
        let v_m = a_set.stage(m);
        let all_points: BTreeSet<PointId> = (0..space.points.len()).collect();
        let intersection: BTreeSet<PointId> = v_m
            .iter()
            .fold(all_points, |acc, &i| {
                acc.intersection(&space.basis.eval(i)).copied().collect()
            });
        let u_m: BTreeSet<Nat> = (0..=index_bound)
            .filter(|&i| intersection.contains(&point_of_index(space, i)))
            .collect();
        // candidates: n with a ∈ O_n and b_n in the intersection
        let mut eligible: Vec<usize> = Vec::new();
        for n in 0..witness.len() {
            let o_n = eff_open_points(space, &witness.o[n], budgets);
            if o_n.contains(&a) && intersection.contains(&witness.b[n]) {
                eligible.push(n);
            }
        }
        let outside = eligible
            .iter()
            .copied()
            .find(|&n| !k.contains(&witness.b[n]));
        let (n_m, closure_violation) = match outside {
            Some(n) => (Some(n), None),
            None => {
                // every eligible b_n lies in K; each then witnesses a
                // monotonicity violation against a complement point of its
                // own open
                let violation = eligible.iter().copied().find_map(|n| {
                    let o_n = eff_open_points(space, &witness.o[n], budgets);
                    o_n.iter()
                        .find(|x| !k.contains(x))
                        .map(|&x| (witness.b[n], x))
                });
                (eligible.first().copied(), violation)
            }
        };
        // the leak: an index of an intersection point outside the class
        let h_m = match u_m.iter().copied().find(|i| !ix_k.contains(i)) {
            Some(h) => h,
            None => return NonOpenOutcome::Stuck { m },
        };
        records.push(NonOpenRecord {
            m,
            v_m,
            u_m,
            n_m,
            h_m,
            closure_violation,
        });
    }
    NonOpenOutcome::Trace { records }
}

/// Independent re-verification of a trace record against the space.
pub fn reverify_record(
    space: &Space,
    witness: &ModularWitness,
    k: &BTreeSet<PointId>,
    a: PointId,
    rec: &NonOpenRecord,
    budgets: Budgets,
) -> bool {
    let all_points: BTreeSet<PointId> = (0..space.points.len()).collect();
    let intersection: BTreeSet<PointId> = rec
        .v_m
        .iter()
        .fold(all_points, |acc, &i| {
            acc.intersection(&space.basis.eval(i)).copied().collect()
        });
    // h_m lies in U_m and outside Ix(K)
    let h_ok = rec.u_m.contains(&rec.h_m)
        && intersection.contains(&point_of_index(space, rec.h_m))
        && !k.contains(&point_of_index(space, rec.h_m));
    // n_m satisfies both listed conditions when present
    let n_ok = match rec.n_m {
        None => true,
        Some(n) => {
            let o_n = eff_open_points(space, &witness.o[n], budgets);
            o_n.contains(&a) && intersection.contains(&witness.b[n])
        }
    };
    // a recorded closure violation really is one
    let v_ok = match rec.closure_violation {
        None => true,
        Some((inside, above)) => {
            k.contains(&inside)
                && !k.contains(&above)
                && specialization_leq(space, inside, above).unwrap_or(false)
        }
    };
    h_ok && n_ok && v_ok
}
