//! Effectively enumerable T0-spaces, effectively open sets, modular
//! witnesses, and the space constructions from trees and wn-families.

pub mod from_family;
pub mod from_tree;
pub mod index_set;
pub mod modular;
pub mod space;

pub use from_family::{build_x_s, homeomorphism_check, HomeomorphismVerdict, XsData, XsError};
pub use from_tree::{build_x_t, point_of_vertex};
pub use index_set::{brute_force_ix, IndexSetJob};
pub use modular::{
    intersection_identity_check, modular_check, IntersectionIdentityVerdict, ModularVerdict,
    ModularWitness,
};
pub use space::{
    computable_element, dn_basis_table, ee_space_check, eff_open_denotation, eff_open_points,
    point_of_index,
    point_profile, principal_open_numbering, specialization_leq, symbolic_membership,
    BasisNumbering, ComputableElement, EeVerdict, EffOpenSet, GFn, PointId, Space, SpaceError,
    SpaceTier,
};
