//! Computable sequences of c.e. sets, numberings, wn-families, index sets
//! and the effectiveness notions on families of finite sets.

pub mod ceset;
pub mod discrete;
pub mod family;
pub mod funcs;

pub use ceset::{CeSet, ProgramCe};
pub use discrete::{
    classical_rice_shapiro_oracle, effective_discreteness_check, positivity_check,
    ClassicalRsOutcome, DiscretenessResult, PositiveWitness, PositivityVerdict,
};
pub use family::{
    h0_from_sigma, wn_check, FamilyError, PrincipalNumbering, WnFamily, WnVerdict,
};
pub use funcs::{
    ComputableCeSequence, FnOutcome, SigmaApply, SigmaFn, StrongFiniteSequence, TotalFn,
};
