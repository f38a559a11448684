//! Total and partial function witnesses.
//!
//! The classical constructions manufacture computable index functions
//! (normalizers, selectors, enumerators of domains). Here each one is either
//! a genuine register program or a native realization of the same effective
//! procedure; native forms exist because index arithmetic is far beyond what
//! a unary-arithmetic machine can do inside desk budgets, while the
//! procedures themselves are straightforwardly computable.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::ceset::CeSet;
use crate::budgets::Budgets;
use crate::kernel::{decode_program, run, EvalResult, ProgramIndex, StepBudget};
use crate::nat::{unpair, Nat};
use crate::trees::Tree;

/// Outcome of evaluating a budgeted function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FnOutcome {
    Value(Nat),
    Exhausted,
}

impl FnOutcome {
    pub fn value(self) -> Option<Nat> {
        match self {
            FnOutcome::Value(v) => Some(v),
            FnOutcome::Exhausted => None,
        }
    }
}

/// A total function on the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TotalFn {
    /// A register program expected to be total (enforced only by budget).
    Program(ProgramIndex),
    /// A finite table extended cyclically; the workhorse for strongly
    /// computable sequences over explicit families.
    Table { values: Vec<Nat> },
    /// Dovetail enumeration of a partial function's domain: the i-th Cantor
    /// pair (n, t) with sigma converging on n within t steps yields n.
    SigmaDovetail { sigma: Box<SigmaFn> },
}

impl TotalFn {
    pub fn table(values: Vec<Nat>) -> TotalFn {
        TotalFn::Table { values }
    }

    pub fn eval(&self, i: Nat, budget: StepBudget) -> FnOutcome {
        match self {
            TotalFn::Program(e) => {
                let p = decode_program(e);
                match run(&p, i, budget) {
                    EvalResult::Halted(v) => FnOutcome::Value(v),
                    EvalResult::Exhausted => FnOutcome::Exhausted,
                }
            }
            TotalFn::Table { values } => {
                if values.is_empty() {
                    FnOutcome::Exhausted
                } else {
                    FnOutcome::Value(values[(i % values.len() as Nat) as usize])
                }
            }
            TotalFn::SigmaDovetail { sigma } => {
                // a structurally total normalizer has full domain, and the
                // canonical enumeration of it is the identity
                if sigma.is_total() {
                    return FnOutcome::Value(i);
                }
                let mut hits = 0;
                for j in 0..=budget.steps() {
                    let (n, t) = unpair(j);
                    if sigma.converges_within(n, t) {
                        if hits == i {
                            return FnOutcome::Value(n);
                        }
                        hits += 1;
                    }
                }
                FnOutcome::Exhausted
            }
        }
    }
}

/// A computable sequence of c.e. sets: `V_i = W_{selector(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputableCeSequence {
    pub selector: TotalFn,
}

impl ComputableCeSequence {
    pub fn member(&self, i: Nat, budget: StepBudget) -> Option<CeSet> {
        let idx = self.selector.eval(i, budget).value()?;
        Some(CeSet::program(ProgramIndex::from(idx)))
    }
}

/// A strongly computable sequence of finite sets: `V_i = D_{selector(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongFiniteSequence {
    pub selector: TotalFn,
}

impl StrongFiniteSequence {
    pub fn member(&self, i: Nat, budget: StepBudget) -> Option<BTreeSet<Nat>> {
        let code = self.selector.eval(i, budget).value()?;
        Some(crate::nat::dn_decode(code))
    }
}

/// Result of applying a normalizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaApply {
    /// sigma is defined here and denotes this set.
    Defined(CeSet),
    /// Not observed to converge within the budget.
    Diverged,
    /// The combination (machine-level sigma on a synthesized set) cannot be
    /// evaluated; verdicts must stay Unknown.
    Unsupported,
}

/// A partial computable normalizer: takes an index (or, structurally, the
/// set it denotes) and returns a member description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaFn {
    /// A register program on indices.
    Program(ProgramIndex),
    /// Constantly one index.
    ConstIndex(ProgramIndex),
    /// `W_{sigma(n)} = W_n ∩ F`, the normalizer of the family of subsets
    /// of `F`; synthesized from the s-m-n combinator behind the scenes.
    IntersectionWith(BTreeSet<Nat>),
    /// The stage construction for a tree's family of partial-path codes;
    /// defined where the construction's limit is nonempty.
    TreeStages(Tree),
    /// The product-space normalizer of a family-to-space transfer:
    /// `W_{sigma*(m)} = {n : D_n ⊆ W_{sigma(g(m))}}` with
    /// `W_{g(m)} = ∪_{n∈W_m} D_n`.
    SubsetsOfUnion(Box<SigmaFn>),
    /// The normalizer of the product family `S*`:
    /// `W_{sigma*(n)} = c(W_{sigma(a(n))} × W_{sigma(b(n))})` with `a`, `b`
    /// the coordinate projections.
    ProductStar(Box<SigmaFn>),
}

impl SigmaFn {
    /// Applies sigma to a genuine index.
    pub fn apply_index(&self, n: Nat, budgets: Budgets) -> SigmaApply {
        match self {
            SigmaFn::Program(e) => {
                let p = decode_program(e);
                match run(&p, n, budgets.steps) {
                    EvalResult::Halted(v) => {
                        SigmaApply::Defined(CeSet::program(ProgramIndex::from(v)))
                    }
                    EvalResult::Exhausted => SigmaApply::Diverged,
                }
            }
            SigmaFn::ConstIndex(e) => SigmaApply::Defined(CeSet::program(e.clone())),
            _ => self
                .apply_set(&CeSet::program(ProgramIndex::from(n)), budgets)
                .unwrap_or(SigmaApply::Unsupported),
        }
    }

    /// Applies sigma structurally to the set a candidate denotes. `None`
    /// when this sigma only acts on genuine indices.
    pub fn apply_set(&self, w: &CeSet, budgets: Budgets) -> Option<SigmaApply> {
        match self {
            SigmaFn::Program(_) => None,
            SigmaFn::ConstIndex(e) => Some(SigmaApply::Defined(CeSet::program(e.clone()))),
            SigmaFn::IntersectionWith(f) => Some(SigmaApply::Defined(CeSet::Intersect(
                Box::new(w.clone()),
                f.clone(),
            ))),
            SigmaFn::TreeStages(tree) => {
                let out = CeSet::TreeSigma {
                    tree: tree.clone(),
                    input: Box::new(w.clone()),
                };
                // defined iff something is eventually produced
                let observed = match out.limit_if_finite() {
                    Some(limit) => !limit.is_empty(),
                    None => !out.stage(budgets.stages).is_empty(),
                };
                if observed {
                    Some(SigmaApply::Defined(out))
                } else {
                    Some(SigmaApply::Diverged)
                }
            }
            SigmaFn::SubsetsOfUnion(base) => {
                let g = CeSet::DnUnion(Box::new(w.clone()));
                match base.apply_set(&g, budgets)? {
                    SigmaApply::Defined(inner) => {
                        Some(SigmaApply::Defined(CeSet::DnSubsets(Box::new(inner))))
                    }
                    other => Some(other),
                }
            }
            SigmaFn::ProductStar(base) => {
                let a = CeSet::Project1(Box::new(w.clone()));
                let b = CeSet::Project2(Box::new(w.clone()));
                let sa = match base.apply_set(&a, budgets)? {
                    SigmaApply::Defined(s) => s,
                    other => return Some(other),
                };
                let sb = match base.apply_set(&b, budgets)? {
                    SigmaApply::Defined(s) => s,
                    other => return Some(other),
                };
                Some(SigmaApply::Defined(CeSet::PairImage(
                    Box::new(sa),
                    Box::new(sb),
                )))
            }
        }
    }

    /// Whether sigma is defined everywhere by its very shape.
    pub fn is_total(&self) -> bool {
        match self {
            SigmaFn::Program(_) | SigmaFn::TreeStages(_) => false,
            SigmaFn::ConstIndex(_) | SigmaFn::IntersectionWith(_) => true,
            SigmaFn::SubsetsOfUnion(b) | SigmaFn::ProductStar(b) => b.is_total(),
        }
    }

    /// Convergence of sigma on `n` within `t` steps, the predicate the
    /// domain dovetailer enumerates. Native normalizers converge instantly.
    pub fn converges_within(&self, n: Nat, t: Nat) -> bool {
        match self {
            SigmaFn::Program(e) => {
                let p = decode_program(e);
                matches!(run(&p, n, StepBudget::new(t)), EvalResult::Halted(_))
            }
            SigmaFn::TreeStages(tree) => {
                let out = CeSet::TreeSigma {
                    tree: tree.clone(),
                    input: Box::new(CeSet::program(ProgramIndex::from(n))),
                };
                !out.stage(t).is_empty()
            }
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{encode_program, finite_set_program, loop_program};

    const B: Budgets = Budgets::new(100_000, 1_000);
    const STEPS: StepBudget = StepBudget::new(100_000);

    #[test]
    fn table_eval_cycles() {
        let f = TotalFn::table(vec![3, 1, 4]);
        assert_eq!(f.eval(0, STEPS), FnOutcome::Value(3));
        assert_eq!(f.eval(4, STEPS), FnOutcome::Value(1));
    }

    #[test]
    fn intersection_sigma_normalizes() {
        let sigma = SigmaFn::IntersectionWith(BTreeSet::from([0, 1]));
        let w = CeSet::finite([0, 2]);
        match sigma.apply_set(&w, B).unwrap() {
            SigmaApply::Defined(out) => {
                assert_eq!(out.limit_if_finite(), Some(BTreeSet::from([0])));
            }
            other => panic!("expected defined, got {other:?}"),
        }
    }

    #[test]
    fn dovetail_hits_domain_of_total_sigma() {
        // native sigma has full domain: h0 enumerates every n
        let h0 = TotalFn::SigmaDovetail {
            sigma: Box::new(SigmaFn::IntersectionWith(BTreeSet::new())),
        };
        let mut seen = BTreeSet::new();
        for i in 0..200 {
            if let FnOutcome::Value(n) = h0.eval(i, STEPS) {
                seen.insert(n);
            }
        }
        for n in 0..=10 {
            assert!(seen.contains(&n), "h0 misses {n}");
        }
    }

    #[test]
    fn dovetail_of_singleton_domain() {
        // sigma defined exactly on {3}: a program halting only there
        let sig_prog = finite_set_program(&BTreeSet::from([3]));
        let sigma = SigmaFn::Program(encode_program(&sig_prog));
        let h0 = TotalFn::SigmaDovetail {
            sigma: Box::new(sigma),
        };
        for i in 0..20 {
            match h0.eval(i, STEPS) {
                FnOutcome::Value(n) => assert_eq!(n, 3),
                FnOutcome::Exhausted => panic!("dovetailer exhausted at {i}"),
            }
        }
    }

    #[test]
    fn dovetail_of_empty_domain_exhausts() {
        let sigma = SigmaFn::Program(encode_program(&loop_program()));
        let h0 = TotalFn::SigmaDovetail {
            sigma: Box::new(sigma),
        };
        assert_eq!(h0.eval(0, StepBudget::new(2_000)), FnOutcome::Exhausted);
    }
}
