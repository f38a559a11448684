//! Syntactic program transformations: sequential composition, the s-m-n
//! construction, stage enumerations of `W_e` and `im(phi_e)`, and a
//! value-level fixed-point search for total transformers.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::BTreeSet;

use super::code::{decode_program, encode_program, ProgramIndex};
use super::machine::{run, run_steps, EvalResult, Instr, Program, StepBudget};
use crate::nat::Nat;

/// Concatenates `prefix ++ body`, shifting the body's jump targets.
///
/// A body jump past its own end lands past the concatenated end, so halting
/// behaviour is preserved.
pub fn compose(prefix: &Program, body: &Program) -> Program {
    let mut instrs = prefix.instructions().to_vec();
    let shifted = body.shift_targets(prefix.len() as Nat);
    instrs.extend_from_slice(shifted.instructions());
    Program::new(instrs).expect("composition preserves well-formedness")
}

/// The empty program: computes the identity.
pub fn id_program() -> Program {
    Program::empty()
}

/// A one-instruction self-jump: diverges on every input, so `W_e` is empty.
pub fn loop_program() -> Program {
    Program::new(vec![Instr::jump_if_equal(1, 1, 1)]).unwrap()
}

/// Outputs the constant `k` on every input. Length `k + 1`.
pub fn const_program(k: Nat) -> Program {
    let mut instrs = vec![Instr::zero(1)];
    instrs.extend(std::iter::repeat_n(Instr::succ(1), k as usize));
    Program::new(instrs).unwrap()
}

/// Halts exactly on the members of `set` (any output); diverges elsewhere.
pub fn finite_set_program(set: &BTreeSet<Nat>) -> Program {
    let mut instrs = Vec::new();
    // total length: per element c, (c + 2) instructions, plus the final loop
    let total: Nat = set.iter().map(|c| c + 2).sum::<Nat>() + 1;
    for &c in set {
        instrs.push(Instr::zero(2));
        instrs.extend(std::iter::repeat_n(Instr::succ(2), c as usize));
        instrs.push(Instr::jump_if_equal(1, 2, total + 1));
    }
    let here = instrs.len() as Nat + 1;
    instrs.push(Instr::jump_if_equal(1, 1, here));
    Program::new(instrs).unwrap()
}

/// Halts on members of `set` and additionally on the domain of `body`;
/// realizes `W = set ∪ W_body` syntactically. The scratch register is chosen
/// above every register `body` names, and is zeroed before `body` runs.
pub fn union_with_finite_set(set: &BTreeSet<Nat>, body: &Program) -> Program {
    let scratch = body.max_small_register() + 1;
    let prefix_len: Nat = set.iter().map(|c| c + 2).sum::<Nat>() + 1;
    let total = prefix_len + body.len() as Nat;
    let mut instrs = Vec::new();
    for &c in set {
        instrs.push(Instr::zero(scratch));
        instrs.extend(std::iter::repeat_n(Instr::succ(scratch), c as usize));
        instrs.push(Instr::jump_if_equal(1, scratch, total + 1));
    }
    instrs.push(Instr::zero(scratch));
    let prefix = Program::new(instrs).unwrap();
    compose(&prefix, body)
}

/// Computes the second Cantor component: on input `pair(x, y)` outputs `y`.
///
/// Scans the Cantor diagonal with registers cnt=2, k=3, j=4 keeping the
/// invariant `cnt = k(k+1)/2 + j`, `j <= k`.
pub fn second_component_program() -> Program {
    diagonal_scan_program(4)
}

/// On input `pair(x, y)` outputs `x + y`.
pub fn sum_of_components_program() -> Program {
    diagonal_scan_program(3)
}

fn diagonal_scan_program(out_reg: Nat) -> Program {
    Program::new(vec![
        // 1: found?
        Instr::jump_if_equal(2, 1, 9),
        // 2: if j == k, bump k
        Instr::jump_if_equal(4, 3, 5),
        // 3: j += 1
        Instr::succ(4),
        // 4: goto 7
        Instr::jump_if_equal(1, 1, 7),
        // 5: k += 1
        Instr::succ(3),
        // 6: j := 0
        Instr::zero(4),
        // 7: cnt += 1
        Instr::succ(2),
        // 8: goto 1
        Instr::jump_if_equal(1, 1, 1),
        // 9: output
        Instr::transfer(out_reg, 1),
    ])
    .unwrap()
}

/// Builds the pair-loading prefix for [`smn`]: replaces the input `x` in
/// register 1 with `pair(y, x)`, using scratch registers above `base`, and
/// leaves every register in `2..=base` untouched (still zero).
fn pair_with_constant_prefix(y: Nat, base: Nat) -> Program {
    let ts = base + 1; // x + y
    let ti = base + 2; // outer counter
    let tt = base + 3; // triangular accumulator
    let tc = base + 4; // inner counter
    let mut instrs = vec![Instr::transfer(1, ts)];
    instrs.extend(std::iter::repeat_n(Instr::succ(ts), y as usize));
    let l = y; // offset of the last Succ; labels below are absolute
    instrs.extend(vec![
        // l+2: ti := 0
        Instr::zero(ti),
        // l+3: tt := 0
        Instr::zero(tt),
        // l+4 outer: while ti != ts
        Instr::jump_if_equal(ti, ts, l + 11),
        // l+5: ti += 1
        Instr::succ(ti),
        // l+6: tc := 0
        Instr::zero(tc),
        // l+7 inner: tt += ti
        Instr::jump_if_equal(tc, ti, l + 4),
        // l+8
        Instr::succ(tt),
        // l+9
        Instr::succ(tc),
        // l+10: back to inner test
        Instr::jump_if_equal(1, 1, l + 7),
        // l+11: tt += x (counter tc against register 1)
        Instr::zero(tc),
        // l+12
        Instr::jump_if_equal(tc, 1, l + 16),
        // l+13
        Instr::succ(tt),
        // l+14
        Instr::succ(tc),
        // l+15
        Instr::jump_if_equal(1, 1, l + 12),
        // l+16: result into register 1
        Instr::transfer(tt, 1),
    ]);
    Program::new(instrs).unwrap()
}

/// The s-m-n construction: returns an index `e'` with
/// `phi_{e'}(x) = phi_e(pair(y, x))`, by pure syntax (no execution).
pub fn smn(e: &ProgramIndex, y: Nat) -> ProgramIndex {
    let body = decode_program(e);
    let base = body.max_small_register().max(4);
    let prefix = pair_with_constant_prefix(y, base);
    encode_program(&compose(&prefix, &body))
}

/// Stage `s` of `W_e`: the members `x <= s` on which `e` halts within `s`
/// steps. Monotone in `s`; the union over all stages is `W_e`.
pub fn we_stage(p: &Program, s: Nat) -> BTreeSet<Nat> {
    let budget = StepBudget::new(s);
    (0..=s)
        .filter(|&x| matches!(run(p, x, budget), EvalResult::Halted(_)))
        .collect()
}

/// Stage `s` of `im(phi_e)`: outputs over arguments `x <= s` halting within
/// `s` steps. Monotone in `s`.
pub fn image_stage(p: &Program, s: Nat) -> BTreeSet<Nat> {
    let budget = StepBudget::new(s);
    (0..=s)
        .filter_map(|x| run(p, x, budget).halted())
        .collect()
}

/// Failure modes of the fixed-point search.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixpointError {
    #[error("transformer diverged (or exceeded budget) on iterate {iterate}")]
    TransformerExhausted { iterate: Nat },
    #[error("iteration entered a cycle of length {len} without a fixed value")]
    Cycle { len: usize },
    #[error("no value fixed point within {0} iterations")]
    NoFixpoint(usize),
}

/// Searches for an index `e` with `phi_f(e) = e`; such an `e` satisfies the
/// recursion-theorem equation `phi_e = phi_{phi_f(e)}` on the nose.
///
/// The search iterates `f` from seed 0 with the given budget per call.
/// Transformers whose code map has no value fixed point are reported as
/// errors rather than given an opaque self-referential index: a returned
/// index is always budget-verifiable.
pub fn fixpoint(f: &Program, budget: StepBudget) -> Result<ProgramIndex, FixpointError> {
    const MAX_ITER: usize = 256;
    let mut z: Nat = 0;
    let mut seen = Vec::new();
    for _ in 0..MAX_ITER {
        match run(f, z, budget) {
            EvalResult::Halted(next) => {
                if next == z {
                    return Ok(ProgramIndex::from(z));
                }
                if let Some(pos) = seen.iter().position(|&v| v == next) {
                    return Err(FixpointError::Cycle {
                        len: seen.len() - pos,
                    });
                }
                seen.push(z);
                z = next;
            }
            EvalResult::Exhausted => {
                return Err(FixpointError::TransformerExhausted { iterate: z })
            }
        }
    }
    Err(FixpointError::NoFixpoint(MAX_ITER))
}

/// Convenience: decode, run, in one call.
pub fn run_index(e: &ProgramIndex, x: Nat, budget: StepBudget) -> EvalResult {
    run(&decode_program(e), x, budget)
}

/// Steps a halting run takes, if it halts within the budget.
pub fn halting_steps(p: &Program, x: Nat, budget: StepBudget) -> Option<u64> {
    run_steps(p, x, budget).map(|(_, steps)| steps)
}

/// Index of the canonical program for a finite set.
pub fn finite_set_index(set: &BTreeSet<Nat>) -> ProgramIndex {
    encode_program(&finite_set_program(set))
}

/// True when the program index fits in a machine word, which every
/// hand-written fixture does; syntactic constructions may exceed it.
pub fn index_value(e: &ProgramIndex) -> Option<Nat> {
    e.code().to_u64()
}

/// Decodes an index given as a plain natural.
pub fn decode_nat(n: Nat) -> Program {
    decode_program(&ProgramIndex::from(n))
}

/// Helper for tests and fixtures: the code as `BigUint`.
pub fn code_of(p: &Program) -> BigUint {
    encode_program(p).code().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::pair;

    const B: u64 = 100_000;

    #[test]
    fn finite_set_program_halts_exactly_on_members() {
        let f = BTreeSet::from([0, 3, 5]);
        let p = finite_set_program(&f);
        for x in 0..10 {
            let halted = matches!(run(&p, x, StepBudget::new(1000)), EvalResult::Halted(_));
            assert_eq!(halted, f.contains(&x), "x = {x}");
        }
    }

    #[test]
    fn union_with_finite_set_unions_domains() {
        let body = finite_set_program(&BTreeSet::from([4]));
        let p = union_with_finite_set(&BTreeSet::from([1, 2]), &body);
        for x in 0..8 {
            let halted = matches!(run(&p, x, StepBudget::new(1000)), EvalResult::Halted(_));
            assert_eq!(halted, [1, 2, 4].contains(&x), "x = {x}");
        }
    }

    #[test]
    fn second_component_inverts_pairing() {
        let p = second_component_program();
        for (x, y) in [(0, 0), (1, 2), (9, 4), (0, 7), (12, 0)] {
            let n = pair(x, y);
            assert_eq!(run(&p, n, StepBudget::new(B)), EvalResult::Halted(y));
        }
    }

    #[test]
    fn sum_of_components() {
        let p = sum_of_components_program();
        assert_eq!(run(&p, pair(2, 3), StepBudget::new(B)), EvalResult::Halted(5));
    }

    #[test]
    fn smn_equation_on_projection() {
        // phi_{smn(proj2, 9)}(x) = second(pair(9, x)) = x
        let proj2 = encode_program(&second_component_program());
        let e = smn(&proj2, 9);
        let p = decode_program(&e);
        for x in [0u64, 1, 5, 17, 50] {
            assert_eq!(run(&p, x, StepBudget::new(B)), EvalResult::Halted(x), "x = {x}");
        }
    }

    #[test]
    fn smn_equation_on_sum() {
        // phi_{smn(add, 2)}(3) = 2 + 3
        let add = encode_program(&sum_of_components_program());
        let p = decode_program(&smn(&add, 2));
        assert_eq!(run(&p, 3, StepBudget::new(B)), EvalResult::Halted(5));
    }

    #[test]
    fn smn_injective_in_y() {
        let e = encode_program(&second_component_program());
        let mut seen = std::collections::HashSet::new();
        for y in 0..=100 {
            assert!(seen.insert(smn(&e, y)), "collision at y = {y}");
        }
    }

    #[test]
    fn fixpoint_of_identity_transformer() {
        let e = fixpoint(&id_program(), StepBudget::new(B)).unwrap();
        assert_eq!(e, ProgramIndex::from(0));
    }

    #[test]
    fn fixpoint_of_constant_transformer() {
        // f returns the index of const5 on every input; that index is a value
        // fixed point, so phi_e(x) = 5.
        let const5_code = code_of(&const_program(5)).to_u64().unwrap();
        let f = const_program(const5_code);
        let e = fixpoint(&f, StepBudget::new(const5_code + 10)).unwrap();
        let p = decode_program(&e);
        for x in 0..=10 {
            assert_eq!(run(&p, x, StepBudget::new(B)), EvalResult::Halted(5));
        }
        // and the equation phi_e = phi_{phi_f(e)} holds literally
        let rhs = run(&f, e.to_u64().unwrap(), StepBudget::new(const5_code + 10))
            .halted()
            .unwrap();
        assert_eq!(ProgramIndex::from(rhs), e);
    }

    #[test]
    fn fixpoint_reports_strictly_growing_transformers() {
        // successor has no value fixed point
        let succ = Program::new(vec![Instr::succ(1)]).unwrap();
        let err = fixpoint(&succ, StepBudget::new(10_000)).unwrap_err();
        assert!(matches!(err, FixpointError::NoFixpoint(_)));
    }

    #[test]
    fn we_stage_monotone_and_correct_for_identity() {
        let id = id_program();
        let w = we_stage(&id, 1000);
        assert_eq!(w, (0..=1000).collect::<BTreeSet<_>>());
        let smaller = we_stage(&id, 999);
        assert!(smaller.is_subset(&w));
    }

    #[test]
    fn image_stage_of_constant() {
        let p = const_program(5);
        assert!(image_stage(&p, 3).is_empty(), "budget too small to halt");
        assert_eq!(image_stage(&p, 100), BTreeSet::from([5]));
    }

    #[test]
    fn loop_program_has_empty_domain_and_image() {
        let p = loop_program();
        for s in [0u64, 5, 50, 500] {
            assert!(we_stage(&p, s).is_empty());
            assert!(image_stage(&p, s).is_empty());
        }
    }
}
