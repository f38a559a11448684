//! Computably enumerable sets with stage access.
//!
//! A `CeSet` is either the domain `W_e` of a program, an explicitly listed
//! finite set, or an effective combination of such sets. Every form exposes
//! monotone finite stages whose union is the denoted set:
//!
//! * `Program`: stage `s` is `W_e^s = {x <= s : phi_e(x) halts within s}`,
//!   the standard presentation;
//! * `Finite`: stage `s` lists the members `<= s`, the presentation an
//!   idealized O(1) membership machine would produce;
//! * combinators compute their stages structurally from the inner stages.
//!
//! Combinators stand in for the index-level uniformity arguments (s-m-n
//! compositions) of the constructions they implement: each one is an honest
//! effective operation on c.e. sets, evaluated natively so that desk-scale
//! budgets reach the interesting stages.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use crate::kernel::{decode_program, run_steps, Program, ProgramIndex, Simulation, StepBudget};
use crate::nat::{checked_pair, dn_decode, unpair, Nat};
use crate::trees::{sigma_t_stage, Tree};

/// A computably enumerable set with stage access.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CeSet {
    /// `W_e` for a program index.
    Program(ProgramCe),
    /// An explicitly given finite set.
    Finite(BTreeSet<Nat>),
    /// `W ∩ F` for finite `F`; realizes the intersection normalizer.
    Intersect(Box<CeSet>, BTreeSet<Nat>),
    Union(Box<CeSet>, Box<CeSet>),
    /// `{x : ∃y pair(x,y) ∈ W}`.
    Project1(Box<CeSet>),
    /// `{y : ∃x pair(x,y) ∈ W}`.
    Project2(Box<CeSet>),
    /// `{pair(a,b) : a ∈ A, b ∈ B}`, the coded product `c(A × B)`.
    PairImage(Box<CeSet>, Box<CeSet>),
    /// `∪_{m ∈ W} D_m`.
    DnUnion(Box<CeSet>),
    /// `{n : D_n ⊆ W}`.
    DnSubsets(Box<CeSet>),
    /// The stage construction of a tree's normalizer applied to `input`.
    TreeSigma { tree: Tree, input: Box<CeSet> },
}

impl CeSet {
    pub fn program(index: ProgramIndex) -> CeSet {
        CeSet::Program(ProgramCe::new(index))
    }

    pub fn from_program(p: &Program) -> CeSet {
        CeSet::program(crate::kernel::encode_program(p))
    }

    pub fn finite<I: IntoIterator<Item = Nat>>(elems: I) -> CeSet {
        CeSet::Finite(elems.into_iter().collect())
    }

    /// Stage `s` of the canonical presentation. Monotone in `s`.
    pub fn stage(&self, s: Nat) -> BTreeSet<Nat> {
        match self {
            CeSet::Program(pc) => pc.stage(s),
            CeSet::Finite(f) => f.iter().copied().filter(|&x| x <= s).collect(),
            CeSet::Intersect(a, f) => a.stage_within(s, f),
            CeSet::Union(a, b) => a.stage(s).union(&b.stage(s)).copied().collect(),
            CeSet::Project1(a) => a.stage(s).iter().map(|&n| unpair(n).0).collect(),
            CeSet::Project2(a) => a.stage(s).iter().map(|&n| unpair(n).1).collect(),
            CeSet::PairImage(a, b) => {
                let xs = a.stage(s);
                let ys = b.stage(s);
                let mut out = BTreeSet::new();
                for &x in &xs {
                    for &y in &ys {
                        if let Some(c) = checked_pair(x, y) {
                            out.insert(c);
                        }
                    }
                }
                out
            }
            CeSet::DnUnion(a) => a.stage(s).iter().flat_map(|&m| dn_decode(m)).collect(),
            CeSet::DnSubsets(a) => {
                let u = a.stage(s);
                (0..=s).filter(|&n| dn_decode(n).is_subset(&u)).collect()
            }
            CeSet::TreeSigma { tree, input } => sigma_t_stage(tree, input, s),
        }
    }

    /// The exact denoted set, when it is structurally finite (no program
    /// leaves). Programs are never structurally finite, whatever their
    /// semantics.
    pub fn limit_if_finite(&self) -> Option<BTreeSet<Nat>> {
        match self {
            CeSet::Program(_) => None,
            CeSet::Finite(f) => Some(f.clone()),
            CeSet::Intersect(a, f) => {
                Some(a.limit_if_finite()?.intersection(f).copied().collect())
            }
            CeSet::Union(a, b) => {
                Some(&a.limit_if_finite()? | &b.limit_if_finite()?)
            }
            CeSet::Project1(a) => {
                Some(a.limit_if_finite()?.iter().map(|&n| unpair(n).0).collect())
            }
            CeSet::Project2(a) => {
                Some(a.limit_if_finite()?.iter().map(|&n| unpair(n).1).collect())
            }
            CeSet::PairImage(a, b) => {
                let xs = a.limit_if_finite()?;
                let ys = b.limit_if_finite()?;
                let mut out = BTreeSet::new();
                for &x in &xs {
                    for &y in &ys {
                        out.insert(checked_pair(x, y)?);
                    }
                }
                Some(out)
            }
            CeSet::DnUnion(a) => Some(
                a.limit_if_finite()?
                    .iter()
                    .flat_map(|&m| dn_decode(m))
                    .collect(),
            ),
            CeSet::DnSubsets(a) => {
                let u = a.limit_if_finite()?;
                // all subsets of u, re-encoded; u is small on the explicit tier
                let elems: Vec<Nat> = u.iter().copied().collect();
                if elems.len() > 20 {
                    return None;
                }
                let mut out = BTreeSet::new();
                for mask in 0u32..(1 << elems.len()) {
                    let subset: BTreeSet<Nat> = elems
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &x)| x)
                        .collect();
                    out.insert(crate::nat::dn_encode(&subset)?);
                }
                Some(out)
            }
            CeSet::TreeSigma { tree, input } => {
                let w = input.limit_if_finite()?;
                let bound = w.iter().max().copied().unwrap_or(0) + 1;
                // by the chain property the construction stabilizes once the
                // input stages stop changing; run a stabilization sweep past
                // the last input event
                Some(sigma_t_stage(tree, &CeSet::Finite(w), bound + 2 * bound + 2))
            }
        }
    }

    /// Stage at `budget` together with the saturation stage: the least stage
    /// whose value already equals the budget stage (found by bisection, which
    /// is sound because stages are monotone).
    pub fn saturate(&self, budget: Nat) -> (BTreeSet<Nat>, Nat) {
        let full = self.stage(budget);
        let mut lo = 0;
        let mut hi = budget;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.stage(mid) == full {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        (full, lo)
    }

    /// Bounded equality at a budget: do the two sets agree below `bound`
    /// at stage `budget`? Reports are always tagged with both parameters.
    pub fn eq_below(&self, other: &CeSet, bound: Nat, budget: Nat) -> bool {
        let cut = |s: BTreeSet<Nat>| -> BTreeSet<Nat> {
            s.into_iter().filter(|&x| x <= bound).collect()
        };
        cut(self.stage(budget)) == cut(other.stage(budget))
    }

    /// Stage `s` restricted to a finite universe of candidate elements;
    /// agrees with `stage(s) ∩ universe` but only pays for the candidates.
    fn stage_within(&self, s: Nat, universe: &BTreeSet<Nat>) -> BTreeSet<Nat> {
        match self {
            CeSet::Program(pc) => universe
                .iter()
                .copied()
                .filter(|&x| x <= s && pc.halts_within_pub(x, s))
                .collect(),
            CeSet::Finite(f) => f
                .iter()
                .copied()
                .filter(|x| *x <= s && universe.contains(x))
                .collect(),
            CeSet::Intersect(a, f) => {
                let narrowed: BTreeSet<Nat> = universe.intersection(f).copied().collect();
                a.stage_within(s, &narrowed)
            }
            CeSet::Union(a, b) => {
                let mut out = a.stage_within(s, universe);
                out.extend(b.stage_within(s, universe));
                out
            }
            _ => self
                .stage(s)
                .intersection(universe)
                .copied()
                .collect(),
        }
    }

    /// Stage indices at which this set's stages can change, when they can be
    /// read off structurally (finite-backed sets). A sound superset; `None`
    /// when stages must be walked literally.
    pub fn event_hints(&self) -> Option<Vec<Nat>> {
        match self {
            CeSet::Finite(f) => Some(f.iter().copied().collect()),
            CeSet::Intersect(a, _) => a.event_hints(),
            CeSet::Union(a, b) => {
                let mut h = a.event_hints()?;
                h.extend(b.event_hints()?);
                h.sort_unstable();
                h.dedup();
                Some(h)
            }
            _ => None,
        }
    }
}

/// `W_e` with memoized, resumable per-input simulations.
#[derive(Debug, Clone)]
pub struct ProgramCe {
    index: ProgramIndex,
    program: Arc<Program>,
    cache: Arc<Mutex<ProgCache>>,
}

impl PartialEq for ProgramCe {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}
impl Eq for ProgramCe {}

impl std::hash::Hash for ProgramCe {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

impl Serialize for ProgramCe {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.index.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProgramCe {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(ProgramCe::new(ProgramIndex::deserialize(d)?))
    }
}

#[derive(Debug, Default)]
struct ProgCache {
    slots: Vec<Slot>,
}

#[derive(Debug, Clone)]
enum Slot {
    Unstarted,
    Running(Box<Simulation>),
    Halted { steps: u64 },
    /// Program has operands beyond the fast interpreter; queries run fresh.
    Fresh,
}

/// Inputs above this bound are simulated from scratch instead of cached.
const CACHE_INPUTS: Nat = 1 << 16;

impl ProgramCe {
    pub fn new(index: ProgramIndex) -> Self {
        let program = Arc::new(decode_program(&index));
        ProgramCe {
            index,
            program,
            cache: Arc::new(Mutex::new(ProgCache::default())),
        }
    }

    pub fn index(&self) -> &ProgramIndex {
        &self.index
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    /// Does the program halt on `x` within `s` steps (with `x <= s`)?
    pub fn halts_within_pub(&self, x: Nat, s: Nat) -> bool {
        if x > s {
            return false;
        }
        if x < CACHE_INPUTS {
            let mut cache = self.cache.lock().unwrap();
            cache.halts_within(&self.program, x, s)
        } else {
            run_steps(&self.program, x, StepBudget::new(s)).is_some()
        }
    }

    fn stage(&self, s: Nat) -> BTreeSet<Nat> {
        let mut out = BTreeSet::new();
        let cached_top = s.min(CACHE_INPUTS.saturating_sub(1));
        {
            let mut cache = self.cache.lock().unwrap();
            for x in 0..=cached_top {
                if cache.halts_within(&self.program, x, s) {
                    out.insert(x);
                }
            }
        }
        for x in CACHE_INPUTS..=s.max(CACHE_INPUTS) {
            if x > s {
                break;
            }
            if run_steps(&self.program, x, StepBudget::new(s)).is_some() {
                out.insert(x);
            }
        }
        out
    }
}

impl ProgCache {
    fn halts_within(&mut self, program: &Program, x: Nat, s: Nat) -> bool {
        let idx = x as usize;
        if self.slots.len() <= idx {
            self.slots.resize(idx + 1, Slot::Unstarted);
        }
        loop {
            match &mut self.slots[idx] {
                Slot::Halted { steps } => return *steps <= s,
                Slot::Fresh => {
                    return run_steps(program, x, StepBudget::new(s)).is_some();
                }
                Slot::Running(sim) => {
                    if sim.halted().is_none() && sim.steps() < s {
                        sim.advance(s);
                    }
                    if sim.halted().is_some() {
                        let steps = sim.steps();
                        self.slots[idx] = Slot::Halted { steps };
                        return steps <= s;
                    }
                    return false;
                }
                Slot::Unstarted => {
                    self.slots[idx] = match Simulation::start(program, x) {
                        Some(sim) => Slot::Running(Box::new(sim)),
                        None => Slot::Fresh,
                    };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{
        const_program, finite_set_program, id_program, loop_program, we_stage,
    };
    use crate::nat::pair;

    #[test]
    fn program_stage_matches_we_stage_exactly() {
        // the presentation law: stage(i) = W_e^i, bit for bit
        for p in [
            id_program(),
            loop_program(),
            const_program(3),
            finite_set_program(&BTreeSet::from([1, 4, 9])),
        ] {
            let ce = CeSet::from_program(&p);
            for s in [0u64, 1, 2, 5, 17, 60, 300] {
                assert_eq!(ce.stage(s), we_stage(&p, s), "s = {s}");
            }
        }
    }

    #[test]
    fn finite_stage_is_clamped() {
        let ce = CeSet::finite([1, 5, 100]);
        assert_eq!(ce.stage(0), BTreeSet::new());
        assert_eq!(ce.stage(5), BTreeSet::from([1, 5]));
        assert_eq!(ce.stage(1000), BTreeSet::from([1, 5, 100]));
    }

    #[test]
    fn stages_monotone_across_combinators() {
        let base = CeSet::finite([pair(0, 1), pair(2, 3), pair(1, 1)]);
        let sets = [
            CeSet::Project1(Box::new(base.clone())),
            CeSet::Project2(Box::new(base.clone())),
            CeSet::DnUnion(Box::new(base.clone())),
            CeSet::DnSubsets(Box::new(base.clone())),
            CeSet::PairImage(Box::new(base.clone()), Box::new(base.clone())),
        ];
        for set in &sets {
            for s in 0..40 {
                assert!(
                    set.stage(s).is_subset(&set.stage(s + 1)),
                    "stage monotonicity failed at {s} for {set:?}"
                );
            }
        }
    }

    #[test]
    fn projections_and_pair_image() {
        let base = CeSet::finite([pair(0, 1), pair(2, 3)]);
        assert_eq!(
            CeSet::Project1(Box::new(base.clone())).limit_if_finite(),
            Some(BTreeSet::from([0, 2]))
        );
        assert_eq!(
            CeSet::Project2(Box::new(base.clone())).limit_if_finite(),
            Some(BTreeSet::from([1, 3]))
        );
        let prod = CeSet::PairImage(
            Box::new(CeSet::finite([0, 1])),
            Box::new(CeSet::finite([1])),
        );
        assert_eq!(
            prod.limit_if_finite(),
            Some(BTreeSet::from([pair(0, 1), pair(1, 1)]))
        );
    }

    #[test]
    fn dn_union_and_subsets() {
        // D_5 = {0,2}, D_2 = {1}
        let u = CeSet::DnUnion(Box::new(CeSet::finite([5, 2])));
        assert_eq!(u.limit_if_finite(), Some(BTreeSet::from([0, 1, 2])));
        let subs = CeSet::DnSubsets(Box::new(CeSet::finite([0, 1]))); // the set {0,1}... D-codes of subsets of {0,1}
        let inner: BTreeSet<Nat> = CeSet::finite([0, 1]).limit_if_finite().unwrap();
        assert_eq!(inner, BTreeSet::from([0, 1]));
        assert_eq!(
            subs.limit_if_finite(),
            Some(BTreeSet::from([0, 1, 2, 3])),
            "subsets of {{0,1}} have the D-codes 0..3"
        );
    }

    #[test]
    fn saturation_stage_is_minimal() {
        let p = finite_set_program(&BTreeSet::from([2, 6]));
        let ce = CeSet::from_program(&p);
        let (full, sat) = ce.saturate(500);
        assert_eq!(full, BTreeSet::from([2, 6]));
        assert_eq!(ce.stage(sat), full);
        assert_ne!(ce.stage(sat - 1), full);
    }

    #[test]
    fn intersect_realizes_normalizer() {
        let w = CeSet::finite([0, 2, 7]);
        let nd = CeSet::Intersect(Box::new(w), BTreeSet::from([0, 1]));
        assert_eq!(nd.limit_if_finite(), Some(BTreeSet::from([0])));
    }

    #[test]
    fn eq_below_reports_bounded_equality() {
        let a = CeSet::finite([1, 2, 100]);
        let b = CeSet::finite([1, 2, 200]);
        assert!(a.eq_below(&b, 50, 1000));
        assert!(!a.eq_below(&b, 150, 1000));
    }
}
