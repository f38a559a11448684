//! etw-core: a step-bounded computability workbench.
//!
//! The crate models partial computable functions by a four-instruction
//! register machine with a bijective Gödel numbering, and builds on top of it
//! the objects of effective topology at desk scale: computably enumerable
//! sets with stage access, wn-families and their principal numberings,
//! trees with the Kleene-Brouwer machinery, effectively enumerable
//! T0-spaces, weakly effective domains, and the generalized Rice-Shapiro
//! checks.
//!
//! Every semi-decidable property is answered with a tri-state verdict
//! (verified / refuted / unknown at budget); universal claims are only ever
//! decided on explicit finite instances, where brute-force oracles are
//! feasible.

pub mod budgets;
pub mod domains;
pub mod fixtures;
pub mod instance;
pub mod kernel;
pub mod nat;
pub mod numberings;
pub mod report;
pub mod riceshapiro;
pub mod snapshot;
pub mod spaces;
pub mod trees;

pub use budgets::Budgets;
pub use nat::Nat;
