//! Trees over `ω^{<ω}`: downward closed, nonempty vertex sets. Explicit
//! finite trees carry their vertices; symbolic trees decide membership by a
//! 0/1-valued program on delta codes; the builtin tree separates a disjoint
//! pair of c.e. sets and has no computable infinite path.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::seq::{delta_code, delta_encode, FiniteSeq};
use crate::kernel::{decode_program, run, EvalResult, ProgramIndex, StepBudget};
use crate::nat::Nat;

/// How deep the builtin separating tree consults the stage approximations:
/// vertex `τ` is tested against `A` and `B` at stage `|τ|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tree {
    /// Finite vertex list; downward closure and nonemptiness are validated.
    Explicit { vertices: BTreeSet<FiniteSeq> },
    /// Membership by a total 0/1-valued program on delta codes, consulted
    /// under a per-query step budget.
    Program {
        index: ProgramIndex,
        query_budget: Nat,
    },
    /// Binary tree of sequences consistent with separating
    /// `A = {e : phi_e(e) = 0}` from `B = {e : phi_e(e) = 1}` at stage
    /// approximations; computable, infinite, no computable infinite path.
    Inseparable,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("explicit tree must contain the empty sequence")]
    MissingRoot,
    #[error("explicit tree is not downward closed: {vertex} present, parent missing")]
    NotDownwardClosed { vertex: FiniteSeq },
    #[error("vertex {vertex} is not in the tree")]
    NotAVertex { vertex: FiniteSeq },
    #[error("membership program did not halt 0/1 on {vertex} within budget")]
    MembershipUndecided { vertex: FiniteSeq },
}

impl Tree {
    pub fn explicit(vertices: impl IntoIterator<Item = FiniteSeq>) -> Result<Tree, TreeError> {
        let vertices: BTreeSet<FiniteSeq> = vertices.into_iter().collect();
        if !vertices.contains(&FiniteSeq::empty()) {
            return Err(TreeError::MissingRoot);
        }
        for v in &vertices {
            if let Some(p) = v.parent() {
                if !vertices.contains(&p) {
                    return Err(TreeError::NotDownwardClosed { vertex: v.clone() });
                }
            }
        }
        Ok(Tree::Explicit { vertices })
    }

    /// Membership decision. Explicit and builtin trees are total; program
    /// trees report an undecided query as an error.
    pub fn contains(&self, v: &FiniteSeq) -> Result<bool, TreeError> {
        match self {
            Tree::Explicit { vertices } => Ok(vertices.contains(v)),
            Tree::Program {
                index,
                query_budget,
            } => {
                let code = match delta_encode(v) {
                    Ok(c) => c,
                    // beyond the data domain the vertex is certainly absent
                    // from any set a budgeted program can accept
                    Err(_) => return Ok(false),
                };
                let p = decode_program(index);
                match run(&p, code, StepBudget::new(*query_budget)) {
                    EvalResult::Halted(0) => Ok(false),
                    EvalResult::Halted(_) => Ok(true),
                    EvalResult::Exhausted => {
                        Err(TreeError::MembershipUndecided { vertex: v.clone() })
                    }
                }
            }
            Tree::Inseparable => Ok(inseparable_contains(v)),
        }
    }

    /// Explicit vertex list, when available.
    pub fn vertices(&self) -> Option<&BTreeSet<FiniteSeq>> {
        match self {
            Tree::Explicit { vertices } => Some(vertices),
            _ => None,
        }
    }

    /// Truncates any tree to the explicit tree of its vertices of length at
    /// most `depth`, over entries bounded by `width`.
    pub fn truncate(&self, depth: usize, width: Nat) -> Result<Tree, TreeError> {
        let mut vertices = BTreeSet::from([FiniteSeq::empty()]);
        let mut frontier = vec![FiniteSeq::empty()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for v in frontier {
                for e in 0..=width {
                    let c = v.child(e);
                    if self.contains(&c)? {
                        vertices.insert(c.clone());
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        Tree::explicit(vertices)
    }
}

/// Membership in the builtin separating tree: entries must be 0/1 and, for
/// every `i < |τ|`, if `i` is seen in `A` (resp. `B`) by stage `|τ|` then
/// `τ(i)` must be 1 (resp. 0). Stages are monotone, so this is downward
/// closed; the separating conditions keep every level inhabited.
fn inseparable_contains(v: &FiniteSeq) -> bool {
    if v.entries().iter().any(|&e| e > 1) {
        return false;
    }
    let stage = v.len() as Nat;
    for (i, &bit) in v.entries().iter().enumerate() {
        match self_halting_value(i as Nat, stage) {
            Some(0) if bit != 1 => return false,
            Some(1) if bit != 0 => return false,
            _ => {}
        }
    }
    true
}

/// `phi_e(e)` within `stage` steps, when it halts.
fn self_halting_value(e: Nat, stage: Nat) -> Option<Nat> {
    let p = decode_program(&ProgramIndex::from(e));
    run(&p, e, StepBudget::new(stage)).halted()
}

/// The partial path determined by a vertex: its downward closure
/// `p_x = {y : y ⊑ x}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartialPath {
    vertices: Vec<FiniteSeq>,
}

impl PartialPath {
    /// The path of a vertex of `tree`.
    pub fn of_vertex(tree: &Tree, x: &FiniteSeq) -> Result<PartialPath, TreeError> {
        if !tree.contains(x)? {
            return Err(TreeError::NotAVertex { vertex: x.clone() });
        }
        Ok(PartialPath {
            vertices: x.prefixes(),
        })
    }

    /// Vertices in prefix order, root first.
    pub fn vertices(&self) -> &[FiniteSeq] {
        &self.vertices
    }

    /// The deepest vertex.
    pub fn tip(&self) -> &FiniteSeq {
        self.vertices.last().expect("partial paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Delta codes of the member vertices.
    pub fn delta_codes(&self) -> BTreeSet<Nat> {
        self.vertices.iter().map(delta_code).collect()
    }
}

/// Delta-code sets of all nonempty finite partial paths of an explicit tree;
/// by the vertex/path correspondence there is exactly one per vertex.
pub fn s_t_members(tree: &Tree) -> Result<Vec<BTreeSet<Nat>>, TreeError> {
    let vertices = tree
        .vertices()
        .ok_or(TreeError::NotAVertex {
            vertex: FiniteSeq::empty(),
        })?
        .clone();
    let mut out = Vec::new();
    for v in &vertices {
        out.push(PartialPath::of_vertex(tree, v)?.delta_codes());
    }
    Ok(out)
}

/// The builtin computable tree without computable infinite paths.
pub fn inseparable_tree() -> Tree {
    Tree::Inseparable
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::seq::prefix_leq;

    fn seq(v: &[Nat]) -> FiniteSeq {
        FiniteSeq::from(v.to_vec())
    }

    fn fixture_tree() -> Tree {
        Tree::explicit([seq(&[]), seq(&[0]), seq(&[1]), seq(&[0, 0])]).unwrap()
    }

    #[test]
    fn explicit_tree_validation() {
        assert!(matches!(
            Tree::explicit([seq(&[0])]),
            Err(TreeError::MissingRoot)
        ));
        assert!(matches!(
            Tree::explicit([seq(&[]), seq(&[0, 0])]),
            Err(TreeError::NotDownwardClosed { .. })
        ));
    }

    #[test]
    fn path_of_root_is_singleton() {
        let t = fixture_tree();
        let p = PartialPath::of_vertex(&t, &seq(&[])).unwrap();
        assert_eq!(p.vertices(), &[seq(&[])]);
    }

    #[test]
    fn path_of_vertex_is_prefix_closure() {
        let t = fixture_tree();
        let p = PartialPath::of_vertex(&t, &seq(&[0, 0])).unwrap();
        assert_eq!(p.vertices(), &[seq(&[]), seq(&[0]), seq(&[0, 0])]);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn path_of_non_vertex_is_error() {
        let t = fixture_tree();
        assert!(matches!(
            PartialPath::of_vertex(&t, &seq(&[2])),
            Err(TreeError::NotAVertex { .. })
        ));
    }

    /// Brute-force oracle: enumerate all nonempty downward closed,
    /// prefix-linear subsets of the vertex set directly.
    fn partial_paths_oracle(tree: &Tree) -> BTreeSet<Vec<FiniteSeq>> {
        let vs: Vec<FiniteSeq> = tree.vertices().unwrap().iter().cloned().collect();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << vs.len()) {
            let subset: Vec<FiniteSeq> = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| v.clone())
                .collect();
            let downward = subset.iter().all(|v| {
                v.parent()
                    .map(|p| subset.contains(&p))
                    .unwrap_or(true)
            });
            let linear = subset
                .iter()
                .all(|a| subset.iter().all(|b| prefix_leq(a, b) || prefix_leq(b, a)));
            if downward && linear {
                out.insert(subset);
            }
        }
        out
    }

    #[test]
    fn vertex_path_bijection_against_oracle() {
        let t = fixture_tree();
        let oracle = partial_paths_oracle(&t);
        assert_eq!(oracle.len(), t.vertices().unwrap().len());
        for v in t.vertices().unwrap() {
            let p = PartialPath::of_vertex(&t, v).unwrap();
            let mut sorted = p.vertices().to_vec();
            sorted.sort();
            assert!(oracle.contains(&sorted), "p_{v} missing from oracle");
        }
    }

    #[test]
    fn s_t_members_one_per_vertex() {
        let t = fixture_tree();
        let members = s_t_members(&t).unwrap();
        assert_eq!(members.len(), 4);
        let chain = Tree::explicit([seq(&[]), seq(&[0])]).unwrap();
        let members = s_t_members(&chain).unwrap();
        assert_eq!(members.len(), 2);
        assert!(members.contains(&BTreeSet::from([0])));
        assert!(members.contains(&BTreeSet::from([0, delta_code(&seq(&[0]))])));
        let root_only = Tree::explicit([seq(&[])]).unwrap();
        assert_eq!(s_t_members(&root_only).unwrap().len(), 1);
    }

    #[test]
    fn inseparable_root_and_closure() {
        let t = inseparable_tree();
        assert!(t.contains(&seq(&[])).unwrap());
        // downward closure, exhaustively to depth 8
        let trunc = t.truncate(8, 1).unwrap();
        let vs = trunc.vertices().unwrap();
        for v in vs {
            if let Some(p) = v.parent() {
                assert!(vs.contains(&p));
            }
            assert!(t.contains(v).unwrap());
        }
        // a vertex at every depth <= 8
        for d in 0..=8 {
            assert!(
                vs.iter().any(|v| v.len() == d),
                "no vertex at depth {d}"
            );
        }
        // non-binary entries are rejected
        assert!(!t.contains(&seq(&[2])).unwrap());
    }
}
