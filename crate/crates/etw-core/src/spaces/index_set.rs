//! Index sets of effectively open classes: the dovetailing enumerator and
//! the brute-force oracle on explicit spaces.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::space::{point_of_index, EffOpenSet, PointId, Space};
use crate::nat::Nat;

/// An enumeration job for `Ix(K) = {n : point(n) ∈ K}` where `K` is the
/// effectively open class given by a c.e. set of basis indices. Dovetails
/// the stage of the index set against the point numbering; restartable and
/// snapshotable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSetJob {
    pub open: EffOpenSet,
    pub stage: Nat,
    pub produced: BTreeSet<Nat>,
}

impl IndexSetJob {
    pub fn new(open: EffOpenSet) -> Self {
        IndexSetJob {
            open,
            stage: 0,
            produced: BTreeSet::new(),
        }
    }

    /// Runs the enumeration until `stage` reaches `stages`. Membership in a
    /// structurally finite open is decidable outright; program-backed opens
    /// are consulted at the current stage.
    pub fn run_to(&mut self, space: &Space, stages: Nat) {
        let exact = self.open.index_set.limit_if_finite();
        while self.stage < stages {
            self.stage += 1;
            let indices = match &exact {
                Some(limit) => limit.clone(),
                None => self.open.index_set.stage(self.stage),
            };
            let covered: BTreeSet<PointId> =
                indices.iter().flat_map(|&i| space.basis.eval(i)).collect();
            for n in 0..=self.stage {
                if covered.contains(&point_of_index(space, n)) {
                    self.produced.insert(n);
                }
            }
        }
    }
}

/// Brute-force `Ix(K)` below an index bound, for a class given directly as
/// a set of points.
pub fn brute_force_ix(space: &Space, class: &BTreeSet<PointId>, bound: Nat) -> BTreeSet<Nat> {
    (0..=bound)
        .filter(|&n| class.contains(&point_of_index(space, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budgets::Budgets;
    use crate::kernel::{encode_program, loop_program};
    use crate::numberings::CeSet;
    use crate::spaces::from_tree::build_x_t;
    use crate::spaces::space::eff_open_denotation;
    use crate::trees::{FiniteSeq, Tree};

    fn fixture_space() -> Space {
        let t = Tree::explicit([
            FiniteSeq::from(vec![]),
            FiniteSeq::from(vec![0]),
            FiniteSeq::from(vec![1]),
            FiniteSeq::from(vec![0, 0]),
        ])
        .unwrap();
        build_x_t(&t).unwrap().0
    }

    #[test]
    fn whole_space_class_enumerates_every_index() {
        let space = fixture_space();
        // the root's basic open is the whole space
        let root_code = 0u64;
        let mut job = IndexSetJob::new(EffOpenSet::finite([root_code]));
        job.run_to(&space, 50);
        assert_eq!(job.produced, (0..=50).collect::<BTreeSet<_>>());
    }

    #[test]
    fn empty_class_enumerates_nothing() {
        let space = fixture_space();
        let empty_w = CeSet::program(encode_program(&loop_program()));
        let mut job = IndexSetJob::new(EffOpenSet { index_set: empty_w });
        job.run_to(&space, 60);
        assert!(job.produced.is_empty());
    }

    #[test]
    fn enumerator_matches_brute_force_on_basic_opens() {
        let space = fixture_space();
        let budgets = Budgets::default();
        for &i in space.basis.reps() {
            let open = EffOpenSet::finite([i]);
            let (class, _) = eff_open_denotation(&space, &open, budgets);
            let mut job = IndexSetJob::new(open);
            job.run_to(&space, 40);
            let oracle = brute_force_ix(&space, &class, 40);
            assert_eq!(job.produced, oracle, "basis index {i}");
        }
    }
}
