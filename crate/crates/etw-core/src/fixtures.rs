//! Built-in fixtures: named programs, trees, families and domains usable
//! from the CLI without an instance file, plus the exhaustive small-tree
//! suite the verification harness sweeps.

use std::collections::BTreeSet;

use crate::budgets::Budgets;
use crate::domains::DomainBasis;
use crate::kernel::{
    const_program, finite_set_index, id_program, loop_program, second_component_program,
    sum_of_components_program, Program,
};
use crate::nat::Nat;
use crate::numberings::{SigmaFn, WnFamily};
use crate::trees::{inseparable_tree, FiniteSeq, Tree};

fn seq(v: &[Nat]) -> FiniteSeq {
    FiniteSeq::from(v.to_vec())
}

/// Named built-in programs.
pub fn builtin_program(name: &str) -> Option<Program> {
    Some(match name {
        "id" => id_program(),
        "loop" => loop_program(),
        "const5" => const_program(5),
        "succ" => Program::new(vec![crate::kernel::Instr::succ(1)]).unwrap(),
        "proj2" => second_component_program(),
        "add" => sum_of_components_program(),
        _ => return None,
    })
}

/// Named built-in trees. `fixture1` is the standard 4-vertex example; the
/// `insep-depth-k` family truncates the separating tree.
pub fn builtin_tree(name: &str) -> Option<Tree> {
    Some(match name {
        "fixture1" => {
            Tree::explicit([seq(&[]), seq(&[0]), seq(&[1]), seq(&[0, 0])]).unwrap()
        }
        "root" => Tree::explicit([seq(&[])]).unwrap(),
        "chain2" => Tree::explicit([seq(&[]), seq(&[0])]).unwrap(),
        "wide3" => Tree::explicit([seq(&[]), seq(&[0]), seq(&[1]), seq(&[2])]).unwrap(),
        "inseparable" => inseparable_tree(),
        "insep-depth4" => inseparable_tree().truncate(4, 1).ok()?,
        "insep-depth6" => inseparable_tree().truncate(6, 1).ok()?,
        _ => return None,
    })
}

/// Named built-in wn-families.
pub fn builtin_family(name: &str) -> Option<WnFamily> {
    let b = Budgets::default();
    Some(match name {
        "subsets01" => WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0, 1])),
            vec![
                BTreeSet::new(),
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([0, 1]),
            ],
            b,
        )
        .ok()?,
        "two-singletons" => WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0, 1])),
            vec![BTreeSet::from([0]), BTreeSet::from([1])],
            b,
        )
        .ok()?,
        "singleton-empty" => WnFamily::explicit(
            SigmaFn::ConstIndex(finite_set_index(&BTreeSet::new())),
            vec![BTreeSet::new()],
            b,
        )
        .ok()?,
        "subsets0" => WnFamily::explicit(
            SigmaFn::IntersectionWith(BTreeSet::from([0])),
            vec![BTreeSet::new(), BTreeSet::from([0])],
            b,
        )
        .ok()?,
        _ => return None,
    })
}

/// Named built-in domains, all with at most 6 elements.
pub fn builtin_domain(name: &str) -> Option<DomainBasis> {
    let d = |labels: &[&str], pairs: &[(usize, usize)]| {
        DomainBasis::new(labels.iter().map(|s| s.to_string()).collect(), pairs).ok()
    };
    match name {
        "point" => d(&["bot"], &[]),
        "chain3" => d(&["bot", "a", "b"], &[(0, 1), (1, 2)]),
        "diamond" => d(&["bot", "a", "b", "top"], &[(0, 1), (0, 2), (1, 3), (2, 3)]),
        "flat3" => d(&["bot", "a", "b", "c"], &[(0, 1), (0, 2), (0, 3)]),
        "pentagon" => d(
            &["bot", "a", "b", "c", "top"],
            &[(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)],
        ),
        "m3" => d(
            &["bot", "a", "b", "c", "top"],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        ),
        "chain6" => d(
            &["bot", "a", "b", "c", "d", "e"],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
        ),
        "twochains" => d(&["bot", "a1", "a2", "b1"], &[(0, 1), (1, 2), (0, 3)]),
        _ => None,
    }
}

pub fn builtin_domain_names() -> &'static [&'static str] {
    &[
        "point",
        "chain3",
        "diamond",
        "flat3",
        "pentagon",
        "m3",
        "chain6",
        "twochains",
    ]
}

pub fn builtin_tree_names() -> &'static [&'static str] {
    &[
        "fixture1",
        "root",
        "chain2",
        "wide3",
        "inseparable",
        "insep-depth4",
        "insep-depth6",
    ]
}

pub fn builtin_family_names() -> &'static [&'static str] {
    &["subsets01", "two-singletons", "singleton-empty", "subsets0"]
}

pub fn builtin_program_names() -> &'static [&'static str] {
    &["id", "loop", "const5", "succ", "proj2", "add"]
}

/// Every tree with at most `max_vertices` vertices over the branching
/// alphabet `{0..=width}`, generated by closing under single-vertex
/// extensions and deduplicating.
pub fn all_trees_up_to(max_vertices: usize, width: Nat) -> Vec<Tree> {
    let root: BTreeSet<FiniteSeq> = BTreeSet::from([FiniteSeq::empty()]);
    let mut seen: BTreeSet<BTreeSet<FiniteSeq>> = BTreeSet::from([root.clone()]);
    let mut frontier = vec![root];
    while let Some(current) = frontier.pop() {
        if current.len() >= max_vertices {
            continue;
        }
        for parent in current.iter().cloned().collect::<Vec<_>>() {
            for e in 0..=width {
                let child = parent.child(e);
                if current.contains(&child) {
                    continue;
                }
                let mut next = current.clone();
                next.insert(child);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    seen.into_iter()
        .map(|vs| Tree::explicit(vs).expect("generated trees are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_suite_counts() {
        // over a unary alphabet the trees are chains: one per size
        assert_eq!(all_trees_up_to(4, 0).len(), 4);
        // over {0,1,2}: 1 + 3 + 12 + 55 + 273 + 1428 trees up to 6 vertices
        assert_eq!(all_trees_up_to(6, 2).len(), 1772);
    }

    #[test]
    fn builtins_resolve() {
        for name in builtin_program_names() {
            assert!(builtin_program(name).is_some(), "{name}");
        }
        for name in builtin_tree_names() {
            assert!(builtin_tree(name).is_some(), "{name}");
        }
        for name in builtin_family_names() {
            assert!(builtin_family(name).is_some(), "{name}");
        }
        for name in builtin_domain_names() {
            assert!(builtin_domain(name).is_some(), "{name}");
        }
    }

    #[test]
    fn insep_truncations_are_nonempty_at_every_level() {
        let t = builtin_tree("insep-depth6").unwrap();
        let vs = t.vertices().unwrap();
        for d in 0..=6 {
            assert!(vs.iter().any(|v| v.len() == d), "depth {d}");
        }
    }
}
