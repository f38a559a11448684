//! The product family `S* = {c(A × B) : A, B ∈ S}` with its transferred
//! normalizer, and the diagonal-class demonstration: the index set of
//! `{c(A × A)}` is enumerable through positivity, while effective openness
//! of the diagonal forces effective discreteness of the base family.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::budgets::Budgets;
use crate::nat::{checked_pair, dn_encode, unpair, Nat};
use crate::numberings::{
    effective_discreteness_check, CeSet, DiscretenessResult, SigmaApply, SigmaFn, WnFamily,
};

/// The product family of an explicit base family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFamily {
    pub base: WnFamily,
    pub sigma_star: SigmaFn,
    /// The explicit members `c(A × B)`, deduplicated.
    pub members: Vec<BTreeSet<Nat>>,
    /// Which (A, B) pairs produced each member.
    pub factor_pairs: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("product construction needs an explicit-tier base family")]
    NotExplicit,
    #[error("a pair code left the data domain")]
    PairOverflow,
}

/// The coded product `c(A × B)`.
pub fn coded_product(a: &BTreeSet<Nat>, b: &BTreeSet<Nat>) -> Option<BTreeSet<Nat>> {
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            out.insert(checked_pair(x, y)?);
        }
    }
    Some(out)
}

/// Builds `S*` from an explicit base.
pub fn product_family(base: &WnFamily) -> Result<ProductFamily, ProductError> {
    let members = base.members().ok_or(ProductError::NotExplicit)?;
    let mut star_members: Vec<BTreeSet<Nat>> = Vec::new();
    let mut factor_pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            let prod = coded_product(a, b).ok_or(ProductError::PairOverflow)?;
            match star_members.iter().position(|m| *m == prod) {
                Some(k) => factor_pairs[k].push((i, j)),
                None => {
                    star_members.push(prod);
                    factor_pairs.push(vec![(i, j)]);
                }
            }
        }
    }
    Ok(ProductFamily {
        base: base.clone(),
        sigma_star: SigmaFn::ProductStar(Box::new(base.sigma.clone())),
        members: star_members,
        factor_pairs,
    })
}

impl ProductFamily {
    /// The product family as an explicit wn-family (for wn-checks).
    pub fn as_family(&self) -> WnFamily {
        WnFamily {
            sigma: self.sigma_star.clone(),
            h0: None,
            explicit_members: Some(self.members.clone()),
        }
    }
}

/// The Prop-5.4 projection: elements appearing as either coordinate of a
/// pair in `D_i`.
pub fn projection_support(d_i: &BTreeSet<Nat>) -> BTreeSet<Nat> {
    let mut out = BTreeSet::new();
    for &c in d_i {
        let (x, y) = unpair(c);
        out.insert(x);
        out.insert(y);
    }
    out
}

/// `h` of the projection argument on D-codes: `D_{h(i)}` is the projection
/// support of `D_i`. Fails (`None`) when the support leaves the 64-bit
/// D-code domain.
pub fn projection_code(i: Nat) -> Option<Nat> {
    dn_encode(&projection_support(&crate::nat::dn_decode(i)))
}

/// Report of the diagonal-class demonstration over an explicit base family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalDemo {
    /// Member ids (into the product family) of the diagonal class.
    pub diagonal_members: BTreeSet<usize>,
    /// Ix(K) below the bound, enumerated through the positivity route:
    /// equality of the two projected factors.
    pub ix_enumerated: BTreeSet<Nat>,
    /// Ix(K) below the bound by brute force over the member list.
    pub ix_brute: BTreeSet<Nat>,
    /// Discreteness of the base family: when it is effectively discrete the
    /// projection argument yields no contradiction, as the demonstration
    /// shows.
    pub base_discreteness_witnessed: bool,
}

/// Runs the demonstration: enumerate the diagonal index set both ways and
/// check the base family's effective discreteness.
pub fn diagonal_class_demo(
    product: &ProductFamily,
    bound: Nat,
    budgets: Budgets,
) -> Result<DiagonalDemo, ProductError> {
    let base_members = product.base.members().ok_or(ProductError::NotExplicit)?;
    // K = {c(A × A) : A ∈ S}
    let mut diagonal_members = BTreeSet::new();
    for a in base_members {
        let d = coded_product(a, a).ok_or(ProductError::PairOverflow)?;
        if let Some(k) = product.members.iter().position(|m| *m == d) {
            diagonal_members.insert(k);
        }
    }
    // the product numbering gamma*(n) over the cyclic member numbering
    let member_of = |n: Nat| (n % product.members.len() as Nat) as usize;
    // positivity route: n ∈ Ix(K) iff the two projected factors of
    // gamma*(n), normalized through sigma, denote equal sets
    let mut ix_enumerated = BTreeSet::new();
    for n in 0..=bound {
        let m = &product.members[member_of(n)];
        let w = CeSet::Finite(m.clone());
        let a_part = CeSet::Project1(Box::new(w.clone()));
        let b_part = CeSet::Project2(Box::new(w));
        let norm = |part: CeSet| -> Option<BTreeSet<Nat>> {
            match product.base.sigma.apply_set(&part, budgets) {
                Some(SigmaApply::Defined(out)) => {
                    Some(out.limit_if_finite().unwrap_or_else(|| out.stage(budgets.stages)))
                }
                _ => None,
            }
        };
        if let (Some(a), Some(b)) = (norm(a_part), norm(b_part)) {
            if a == b {
                ix_enumerated.insert(n);
            }
        }
    }
    // brute force
    let ix_brute: BTreeSet<Nat> = (0..=bound)
        .filter(|&n| diagonal_members.contains(&member_of(n)))
        .collect();
    let base_discreteness_witnessed = matches!(
        effective_discreteness_check(
            base_members,
            base_members.iter().flatten().max().copied().unwrap_or(0)
        ),
        DiscretenessResult::Witness { .. }
    );
    Ok(DiagonalDemo {
        diagonal_members,
        ix_enumerated,
        ix_brute,
        base_discreteness_witnessed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::pair;
    use crate::numberings::{wn_check, WnVerdict};

    const B: Budgets = Budgets::new(1_000_000, 1_000);

    fn subsets0() -> WnFamily {
        WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0])),
            vec![BTreeSet::new(), BTreeSet::from([0])],
            B,
        )
        .unwrap()
    }

    fn two_singletons() -> WnFamily {
        WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0, 1])),
            vec![BTreeSet::from([0]), BTreeSet::from([1])],
            B,
        )
        .unwrap()
    }

    #[test]
    fn singleton_base_gives_singleton_product() {
        let base = WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0])),
            vec![BTreeSet::from([0])],
            B,
        )
        .unwrap();
        let p = product_family(&base).unwrap();
        assert_eq!(p.members, vec![BTreeSet::from([pair(0, 0)])]);
    }

    #[test]
    fn products_of_subsets0_collapse_to_two() {
        // S = {∅, {0}}: four formal products collapse to {∅, {pair(0,0)}}
        let p = product_family(&subsets0()).unwrap();
        assert_eq!(p.members.len(), 2);
        assert!(p.members.contains(&BTreeSet::new()));
        assert!(p.members.contains(&BTreeSet::from([pair(0, 0)])));
    }

    #[test]
    fn product_members_pass_wn_check() {
        let p = product_family(&two_singletons()).unwrap();
        let fam = p.as_family();
        let candidates: Vec<CeSet> = p
            .members
            .iter()
            .map(|m| CeSet::Finite(m.clone()))
            .collect();
        for (i, v) in wn_check(&fam, &candidates, B).into_iter().enumerate() {
            assert!(
                matches!(v, WnVerdict::Verified { vacuous: false, .. }),
                "member {i}: {v:?}"
            );
        }
    }

    #[test]
    fn projection_support_examples() {
        // D_i = {pair(0,1)}: support {0, 1}
        let d = BTreeSet::from([pair(0, 1)]);
        assert_eq!(projection_support(&d), BTreeSet::from([0, 1]));
        let code = dn_encode(&d).unwrap();
        assert_eq!(projection_code(code), dn_encode(&BTreeSet::from([0, 1])));
    }

    #[test]
    fn diagonal_demo_on_two_singletons() {
        let p = product_family(&two_singletons()).unwrap();
        let demo = diagonal_class_demo(&p, 40, B).unwrap();
        assert_eq!(demo.ix_enumerated, demo.ix_brute);
        assert!(demo.base_discreteness_witnessed);
        // the diagonal members are exactly c({0}x{0}) and c({1}x{1})
        assert_eq!(demo.diagonal_members.len(), 2);
    }
}
