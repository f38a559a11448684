//! The branching construction, monotonicity and openness checks, both desk
//! directions of the generalized index-set characterization, and the
//! product-family counterexample machinery.

pub mod branching;
pub mod openness;
pub mod product;

pub use branching::{
    branching, verify_equation, BranchingError, BranchingInstance, BranchingOutcome,
    IndexPredicate, RFn,
};
pub use openness::{
    monotone_check, non_open_witness, reverify_record, rs_forward, upward_closure_check,
    ClosureVerdict, MonotoneVerdict, NonOpenOutcome, NonOpenRecord, RsForwardOutcome,
};
pub use product::{
    coded_product, diagonal_class_demo, product_family, projection_code, projection_support,
    DiagonalDemo, ProductError, ProductFamily,
};
