//! Modular witnesses and their checks: a computable sequence of computable
//! elements `b_n` with effectively open sets `O_n` such that `b_n` lies
//! below `O_n` in the specialisation order and every basic open is covered
//! by the `O_i` of its member `b_i`'s.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::space::{
    eff_open_points, specialization_leq, EffOpenSet, PointId, Space, SpaceTier,
};
use crate::budgets::Budgets;
use crate::nat::Nat;

/// The two Req-2 sequences, represented by their finite distinct prefix and
/// extended cyclically (an explicit finite space only has finitely many
/// distinct pairs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularWitness {
    pub b: Vec<PointId>,
    pub o: Vec<EffOpenSet>,
}

impl ModularWitness {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModularVerdict {
    Verified,
    /// Clause (a) failure: `b_n` is not below some point of `O_n`.
    RefutedBelow {
        n: usize,
        point: PointId,
    },
    /// Clause (b) failure at basis index `m`.
    RefutedCovering {
        m: Nat,
        missing: Option<PointId>,
        extra: Option<PointId>,
    },
    Unknown {
        reason: String,
    },
}

/// Exhaustive modular check on the explicit tier.
pub fn modular_check(space: &Space, witness: &ModularWitness, budgets: Budgets) -> ModularVerdict {
    if space.tier != SpaceTier::ExplicitFinite {
        return ModularVerdict::Unknown {
            reason: "symbolic tier: sampled checks only".into(),
        };
    }
    if witness.b.len() != witness.o.len() {
        return ModularVerdict::Unknown {
            reason: "witness sequences have different lengths".into(),
        };
    }
    let denotations: Vec<BTreeSet<PointId>> = witness
        .o
        .iter()
        .map(|o| eff_open_points(space, o, budgets))
        .collect();
    // (a) b_n ≤ every point of O_n
    for (n, o_set) in denotations.iter().enumerate() {
        for &x in o_set {
            if !specialization_leq(space, witness.b[n], x).unwrap_or(false) {
                return ModularVerdict::RefutedBelow { n, point: x };
            }
        }
    }
    // (b) α(m) = ∪ { O_i : b_i ∈ α(m) }
    for &m in space.basis.reps() {
        let alpha_m = space.basis.eval(m);
        let mut union: BTreeSet<PointId> = BTreeSet::new();
        for (i, &b_i) in witness.b.iter().enumerate() {
            if alpha_m.contains(&b_i) {
                union.extend(denotations[i].iter().copied());
            }
        }
        if union != alpha_m {
            let missing = alpha_m.difference(&union).next().copied();
            let extra = union.difference(&alpha_m).next().copied();
            return ModularVerdict::RefutedCovering { m, missing, extra };
        }
    }
    ModularVerdict::Verified
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntersectionIdentityVerdict {
    Verified {
        lhs: BTreeSet<PointId>,
    },
    Refuted {
        lhs: BTreeSet<PointId>,
        rhs: BTreeSet<PointId>,
    },
}

/// The modular intersection identity: for finite `V`,
/// `⋂_{i∈V} α(i) = ∪ { O_j : b_j ∈ ⋂_{i∈V} α(i) }`.
/// For empty `V` both sides are the whole space.
pub fn intersection_identity_check(
    space: &Space,
    witness: &ModularWitness,
    v: &BTreeSet<Nat>,
    budgets: Budgets,
) -> IntersectionIdentityVerdict {
    let all_points: BTreeSet<PointId> = (0..space.points.len()).collect();
    let lhs: BTreeSet<PointId> = v
        .iter()
        .fold(all_points, |acc, &i| {
            acc.intersection(&space.basis.eval(i)).copied().collect()
        });
    let mut rhs: BTreeSet<PointId> = BTreeSet::new();
    for (j, &b_j) in witness.b.iter().enumerate() {
        if lhs.contains(&b_j) {
            rhs.extend(eff_open_points(space, &witness.o[j], budgets));
        }
    }
    if lhs == rhs {
        IntersectionIdentityVerdict::Verified { lhs }
    } else {
        IntersectionIdentityVerdict::Refuted { lhs, rhs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::from_tree::build_x_t;
    use crate::trees::{FiniteSeq, Tree};

    fn seq(v: &[Nat]) -> FiniteSeq {
        FiniteSeq::from(v.to_vec())
    }

    fn fixture() -> (Space, ModularWitness) {
        let t = Tree::explicit([seq(&[]), seq(&[0]), seq(&[1]), seq(&[0, 0])]).unwrap();
        build_x_t(&t).unwrap()
    }

    #[test]
    fn tree_space_witness_passes() {
        let (space, witness) = fixture();
        assert_eq!(
            modular_check(&space, &witness, Budgets::default()),
            ModularVerdict::Verified
        );
    }

    #[test]
    fn oversized_open_fails_below_clause() {
        let (space, mut witness) = fixture();
        // replace some O_n of a non-root b_n by the whole space
        let deep = witness
            .b
            .iter()
            .position(|&b| {
                (0..space.points.len())
                    .any(|x| !specialization_leq(&space, b, x).unwrap())
            })
            .expect("a non-bottom witness element exists");
        let all: Vec<Nat> = space.basis.reps().to_vec();
        witness.o[deep] = EffOpenSet::finite(all);
        assert!(matches!(
            modular_check(&space, &witness, Budgets::default()),
            ModularVerdict::RefutedBelow { .. }
        ));
    }

    #[test]
    fn intersection_identity_on_empty_v_is_whole_space() {
        let (space, witness) = fixture();
        match intersection_identity_check(&space, &witness, &BTreeSet::new(), Budgets::default())
        {
            IntersectionIdentityVerdict::Verified { lhs } => {
                assert_eq!(lhs.len(), space.points.len());
            }
            other => panic!("expected verified, got {other:?}"),
        }
    }

    #[test]
    fn intersection_identity_all_small_v() {
        let (space, witness) = fixture();
        let reps = space.basis.reps().to_vec();
        for &i in &reps {
            for &j in &reps {
                let v = BTreeSet::from([i, j]);
                assert!(matches!(
                    intersection_identity_check(&space, &witness, &v, Budgets::default()),
                    IntersectionIdentityVerdict::Verified { .. }
                ));
            }
        }
    }
}
