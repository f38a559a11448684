//! Finite sequences, the Kleene-Brouwer machinery, trees and the stage
//! construction of their normalizers.

pub mod seq;
pub mod sigma_t;
pub mod tree;

pub use seq::{
    delta_code, delta_decode, delta_encode, kb_leq, lex_leq, prefix_leq, DeltaOverflow, FiniteSeq,
};
pub use sigma_t::{sigma_t_limit, sigma_t_stage, SigmaTState};
pub use tree::{inseparable_tree, s_t_members, PartialPath, Tree, TreeError};
