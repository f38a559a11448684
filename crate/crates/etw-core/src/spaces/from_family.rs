//! From a wn-family to an effectively enumerable T0-space: points are the
//! classes of the principal numbering (one per distinct member on the
//! explicit tier), the basic open at `n` collects the classes whose member
//! contains `D_n`, and the transferred normalizer witnesses that the A-sets
//! again form a wn-family.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::space::{dn_basis_table, BasisNumbering, GFn, PointId, Space, SpaceTier};
use crate::nat::{dn_decode, Nat};
use crate::numberings::{CeSet, SigmaFn, WnFamily};

/// The constructed space together with its transfer data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XsData {
    /// `gamma*(i) = {n : D_n ⊆ member_i}`: the A-set of class `i`.
    pub gamma_star: Vec<BTreeSet<Nat>>,
    /// The transferred normalizer for the A-set family.
    pub sigma_star: SigmaFn,
    /// The member set of each class: the homeomorphism `[i] ↦ γ(i)`.
    pub class_member: Vec<BTreeSet<Nat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum XsError {
    #[error("the construction needs an explicit-tier family")]
    NotExplicit,
    #[error("family universe is too wide (elements must stay below 20)")]
    UniverseTooWide,
}

/// Builds the space of an explicit wn-family.
pub fn build_x_s(family: &WnFamily) -> Result<(Space, XsData), XsError> {
    let members = family.members().ok_or(XsError::NotExplicit)?;
    let universe: BTreeSet<Nat> = members.iter().flatten().copied().collect();
    if universe.iter().max().copied().unwrap_or(0) >= 20 {
        return Err(XsError::UniverseTooWide);
    }
    let (table, empty_rep) = dn_basis_table(members);
    let nonempty: BTreeSet<Nat> = table.keys().copied().collect();
    let gamma_star: Vec<BTreeSet<Nat>> = members
        .iter()
        .map(|m| {
            // finite: D_n ⊆ m forces n's bits inside m
            let bound = 1u64 << (m.iter().max().map(|x| x + 1).unwrap_or(0));
            (0..bound).filter(|&n| dn_decode(n).is_subset(m)).collect()
        })
        .collect();
    let points: Vec<String> = members.iter().map(|m| format!("[{m:?}]")).collect();
    let space = Space {
        name: "X_S".into(),
        tier: SpaceTier::ExplicitFinite,
        points,
        basis: BasisNumbering::from_table(table, empty_rep),
        g: GFn::DnOr,
        nonempty: CeSet::Finite(nonempty),
        symbolic_membership: None,
        provenance: format!("from-family({} members)", members.len()),
    };
    let data = XsData {
        gamma_star,
        sigma_star: SigmaFn::SubsetsOfUnion(Box::new(family.sigma.clone())),
        class_member: members.to_vec(),
    };
    Ok((space, data))
}

/// Outcome of checking the homeomorphism between a family (as a subspace of
/// the powerset with the Scott topology) and its constructed space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomeomorphismVerdict {
    Verified {
        checked_indices: Nat,
    },
    /// The point map is not a bijection onto the members.
    RefutedBijection {
        class: PointId,
    },
    /// A basic open fails to match through the point map at index `n`.
    RefutedOpen {
        n: Nat,
        expected: Vec<BTreeSet<Nat>>,
        got: Vec<BTreeSet<Nat>>,
    },
}

/// Verifies that `f([i]) = member_i` matches basic opens pointwise below the
/// index bound: `β(n) = {V ∈ S : D_n ⊆ V}` must equal the image of
/// `α_S(n)`.
pub fn homeomorphism_check(space: &Space, data: &XsData, bound: Nat) -> HomeomorphismVerdict {
    // bijectivity: distinct classes carry distinct members
    for i in 0..data.class_member.len() {
        for j in i + 1..data.class_member.len() {
            if data.class_member[i] == data.class_member[j] {
                return HomeomorphismVerdict::RefutedBijection { class: j };
            }
        }
    }
    for n in 0..bound {
        let dn = dn_decode(n);
        let expected: Vec<BTreeSet<Nat>> = data
            .class_member
            .iter()
            .filter(|m| dn.is_subset(m))
            .cloned()
            .collect();
        let got: Vec<BTreeSet<Nat>> = space
            .basis
            .eval(n)
            .iter()
            .map(|&p| data.class_member[p].clone())
            .collect();
        let expected_sorted: BTreeSet<_> = expected.iter().cloned().collect();
        let got_sorted: BTreeSet<_> = got.iter().cloned().collect();
        if expected_sorted != got_sorted {
            return HomeomorphismVerdict::RefutedOpen { n, expected, got };
        }
    }
    HomeomorphismVerdict::Verified {
        checked_indices: bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budgets::Budgets;
    use crate::kernel::finite_set_index;
    use crate::numberings::{wn_check, WnVerdict};
    use crate::spaces::space::{ee_space_check, EeVerdict};

    const B: Budgets = Budgets::new(100_000, 1_000);

    fn subsets01() -> WnFamily {
        WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0, 1])),
            vec![
                BTreeSet::new(),
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([0, 1]),
            ],
            B,
        )
        .unwrap()
    }

    #[test]
    fn singleton_empty_family_gives_one_point() {
        let fam = WnFamily::explicit(
            SigmaFn::ConstIndex(finite_set_index(&BTreeSet::new())),
            vec![BTreeSet::new()],
            B,
        )
        .unwrap();
        let (space, data) = build_x_s(&fam).unwrap();
        assert_eq!(space.points.len(), 1);
        // A-set of the class of ∅ is {n : D_n ⊆ ∅} = {0}
        assert_eq!(data.gamma_star[0], BTreeSet::from([0]));
    }

    #[test]
    fn subsets01_space_has_four_points_and_dn_basis() {
        let (space, _) = build_x_s(&subsets01()).unwrap();
        assert_eq!(space.points.len(), 4);
        // α_S at the code of {0} holds the classes containing 0
        let n = crate::nat::dn_encode(&BTreeSet::from([0])).unwrap();
        let open = space.basis.eval(n);
        assert_eq!(open.len(), 2); // {0} and {0,1}
        assert!(matches!(
            ee_space_check(&space, Budgets::default()),
            EeVerdict::Verified { .. }
        ));
    }

    #[test]
    fn transferred_normalizer_fixes_a_sets() {
        let fam = subsets01();
        let (_, data) = build_x_s(&fam).unwrap();
        // the A-set family with sigma*: every gamma*(i) is normalized to
        // itself
        let a_set_family = WnFamily::explicit(
            data.sigma_star.clone(),
            data.gamma_star.clone(),
            B,
        )
        .expect("sigma* fixes the A-sets");
        let candidates: Vec<CeSet> = data
            .gamma_star
            .iter()
            .map(|s| CeSet::Finite(s.clone()))
            .collect();
        for v in wn_check(&a_set_family, &candidates, B) {
            assert!(
                matches!(v, WnVerdict::Verified { vacuous: false, .. }),
                "unexpected verdict {v:?}"
            );
        }
    }

    #[test]
    fn homeomorphism_verified_below_bound_8() {
        let (space, data) = build_x_s(&subsets01()).unwrap();
        assert!(matches!(
            homeomorphism_check(&space, &data, 8),
            HomeomorphismVerdict::Verified { .. }
        ));
    }

    #[test]
    fn fault_injected_basis_is_caught() {
        let (mut space, data) = build_x_s(&subsets01()).unwrap();
        // swap the basis table entries at codes 1 and 2
        let mut table = std::collections::BTreeMap::new();
        for &n in space.basis.reps() {
            let v = space.basis.eval(n);
            if !v.is_empty() {
                let swapped = match n {
                    1 => 2,
                    2 => 1,
                    other => other,
                };
                table.insert(swapped, v);
            }
        }
        space.basis = BasisNumbering::from_table(table, 1 << 2);
        assert!(matches!(
            homeomorphism_check(&space, &data, 8),
            HomeomorphismVerdict::RefutedOpen { .. }
        ));
    }
}
