//! Step-bounded model of partial computable functions: the register machine,
//! its Gödel numbering, budgeted evaluation, s-m-n and fixed points.

pub mod code;
pub mod machine;
pub mod smn;
pub mod text;

pub use code::{decode_program, encode_program, ProgramIndex};
pub use machine::{run, run_steps, EvalResult, Instr, Program, ProgramError, Simulation, StepBudget};
pub use smn::{
    compose, const_program, finite_set_index, finite_set_program, fixpoint, id_program,
    image_stage, loop_program, run_index, second_component_program, smn,
    sum_of_components_program, union_with_finite_set, we_stage, FixpointError,
};
pub use text::{parse_program_text, ParseProgramError};
