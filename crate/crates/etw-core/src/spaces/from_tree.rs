//! From a tree to a modular T0-space: points are the nonempty finite partial
//! paths (one per vertex), the basic open at a vertex's delta code collects
//! the paths through that vertex, and the modular witness pairs each vertex
//! with its own basic open.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::modular::ModularWitness;
use super::space::{BasisNumbering, EffOpenSet, GFn, PointId, Space, SpaceTier};
use crate::numberings::CeSet;
use crate::trees::{delta_code, delta_decode, prefix_leq, Tree, TreeError};

/// Builds the explicit space of an explicit tree, together with its modular
/// witness: with `c_1 < c_2 < ...` the delta codes of the vertices,
/// `b_n` is the path of the vertex at `c_n` and `O_n` its basic open.
pub fn build_x_t(tree: &Tree) -> Result<(Space, ModularWitness), TreeError> {
    let vertices = tree
        .vertices()
        .ok_or(TreeError::NotAVertex {
            vertex: crate::trees::FiniteSeq::empty(),
        })?
        .clone();
    // points in ascending delta-code order
    let mut coded: Vec<(u64, crate::trees::FiniteSeq)> = vertices
        .iter()
        .map(|v| (delta_code(v), v.clone()))
        .collect();
    coded.sort_by_key(|(c, _)| *c);
    let point_of_vertex: BTreeMap<crate::trees::FiniteSeq, PointId> = coded
        .iter()
        .enumerate()
        .map(|(i, (_, v))| (v.clone(), i))
        .collect();
    let points: Vec<String> = coded.iter().map(|(_, v)| format!("p{v}")).collect();

    let mut table: BTreeMap<u64, BTreeSet<PointId>> = BTreeMap::new();
    for (code, v) in &coded {
        // the basic open at v: all paths passing through v, i.e. the points
        // of vertices extending v
        let open: BTreeSet<PointId> = coded
            .iter()
            .filter(|(_, w)| prefix_leq(v, w))
            .map(|(_, w)| point_of_vertex[w])
            .collect();
        table.insert(*code, open);
    }
    // the least index denoting the empty set: the first non-vertex code
    let empty_rep = (0..).find(|&n| !vertices.contains(&delta_decode(n))).unwrap();

    // g: comparable vertices intersect to the deeper one, incomparable ones
    // to the empty set
    let mut lists: BTreeMap<(u64, u64), Vec<u64>> = BTreeMap::new();
    for (ci, vi) in &coded {
        for (cj, vj) in &coded {
            let k = if prefix_leq(vi, vj) {
                *cj
            } else if prefix_leq(vj, vi) {
                *ci
            } else {
                empty_rep
            };
            lists.insert((*ci, *cj), vec![k]);
        }
    }

    let codes: Vec<u64> = coded.iter().map(|(c, _)| *c).collect();
    let space = Space {
        name: "X_T".into(),
        tier: SpaceTier::ExplicitFinite,
        points,
        basis: BasisNumbering::from_table(table, empty_rep),
        g: GFn::precomputed(lists, empty_rep),
        nonempty: CeSet::Finite(codes.iter().copied().collect()),
        symbolic_membership: None,
        provenance: format!("from-tree({} vertices)", coded.len()),
    };
    let witness = ModularWitness {
        b: (0..coded.len()).collect(),
        o: codes.iter().map(|&c| EffOpenSet::finite([c])).collect(),
    };
    Ok((space, witness))
}

/// The point id of a vertex in a space built by [`build_x_t`].
pub fn point_of_vertex(space: &Space, v: &crate::trees::FiniteSeq) -> Option<PointId> {
    let label = format!("p{v}");
    space.points.iter().position(|p| *p == label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budgets::Budgets;
    use crate::nat::Nat;
    use crate::spaces::space::{ee_space_check, specialization_leq, EeVerdict};
    use crate::trees::FiniteSeq;

    fn seq(v: &[Nat]) -> FiniteSeq {
        FiniteSeq::from(v.to_vec())
    }

    fn fixture_tree() -> Tree {
        Tree::explicit([seq(&[]), seq(&[0]), seq(&[1]), seq(&[0, 0])]).unwrap()
    }

    #[test]
    fn single_vertex_tree_gives_one_point_space() {
        let t = Tree::explicit([seq(&[])]).unwrap();
        let (space, witness) = build_x_t(&t).unwrap();
        assert_eq!(space.points.len(), 1);
        assert_eq!(witness.len(), 1);
        assert!(matches!(
            ee_space_check(&space, Budgets::default()),
            EeVerdict::Verified { .. }
        ));
    }

    #[test]
    fn fixture_tree_space_shape() {
        let (space, _) = build_x_t(&fixture_tree()).unwrap();
        assert_eq!(space.points.len(), 4);
        // the basic open at (0) holds the paths through (0): p(0), p(0,0)
        let zero = delta_code(&seq(&[0]));
        let open = space.basis.eval(zero);
        assert_eq!(open.len(), 2);
        let p0 = point_of_vertex(&space, &seq(&[0])).unwrap();
        let p00 = point_of_vertex(&space, &seq(&[0, 0])).unwrap();
        assert_eq!(open, BTreeSet::from([p0, p00]));
    }

    #[test]
    fn ee_check_passes_on_fixture_trees() {
        for t in [
            fixture_tree(),
            Tree::explicit([seq(&[]), seq(&[0])]).unwrap(),
            Tree::explicit([seq(&[]), seq(&[0]), seq(&[1]), seq(&[2])]).unwrap(),
        ] {
            let (space, _) = build_x_t(&t).unwrap();
            assert!(matches!(
                ee_space_check(&space, Budgets::default()),
                EeVerdict::Verified { .. }
            ));
        }
    }

    #[test]
    fn specialization_coincides_with_prefix_order() {
        let t = fixture_tree();
        let (space, _) = build_x_t(&t).unwrap();
        let vs: Vec<FiniteSeq> = t.vertices().unwrap().iter().cloned().collect();
        for a in &vs {
            for b in &vs {
                let pa = point_of_vertex(&space, a).unwrap();
                let pb = point_of_vertex(&space, b).unwrap();
                assert_eq!(
                    specialization_leq(&space, pa, pb).unwrap(),
                    prefix_leq(a, b),
                    "{a} vs {b}"
                );
            }
        }
    }
}
