//! Program text format: one instruction per line, `Z r`, `S r`, `T r s`,
//! `J r s q`, with 1-based registers and targets, parsed case-insensitively.
//! Line comments start with `#`.

use super::machine::{Instr, Program};
use crate::nat::Nat;

/// Parse error with the offending 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseProgramError {
    pub line: usize,
    pub kind: ProgramTextErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramTextErrorKind {
    #[error("unknown opcode `{0}`")]
    UnknownOpcode(String),
    #[error("expected {expected} operand(s), found {found}")]
    OperandCount { expected: usize, found: usize },
    #[error("bad operand `{0}`: expected a natural number >= 1")]
    BadOperand(String),
}

/// Parses program text into a [`Program`].
pub fn parse_program_text(text: &str) -> Result<Program, ParseProgramError> {
    let mut instrs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut tokens = body.split_whitespace();
        let Some(op) = tokens.next() else { continue };
        let rest: Vec<&str> = tokens.collect();
        let err_count = |expected: usize| ParseProgramError {
            line,
            kind: ProgramTextErrorKind::OperandCount {
                expected,
                found: rest.len(),
            },
        };
        let operand = |tok: &str| -> Result<Nat, ParseProgramError> {
            match tok.parse::<Nat>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(ParseProgramError {
                    line,
                    kind: ProgramTextErrorKind::BadOperand(tok.to_string()),
                }),
            }
        };
        let instr = match op.to_ascii_lowercase().as_str() {
            "z" => {
                if rest.len() != 1 {
                    return Err(err_count(1));
                }
                Instr::zero(operand(rest[0])?)
            }
            "s" => {
                if rest.len() != 1 {
                    return Err(err_count(1));
                }
                Instr::succ(operand(rest[0])?)
            }
            "t" => {
                if rest.len() != 2 {
                    return Err(err_count(2));
                }
                Instr::transfer(operand(rest[0])?, operand(rest[1])?)
            }
            "j" => {
                if rest.len() != 3 {
                    return Err(err_count(3));
                }
                Instr::jump_if_equal(operand(rest[0])?, operand(rest[1])?, operand(rest[2])?)
            }
            other => {
                return Err(ParseProgramError {
                    line,
                    kind: ProgramTextErrorKind::UnknownOpcode(other.to_string()),
                })
            }
        };
        instrs.push(instr);
    }
    Ok(Program::new(instrs).expect("parsed operands are validated nonzero"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::machine::{run, EvalResult, StepBudget};

    #[test]
    fn parses_case_insensitively_with_comments() {
        let text = "# doubler scaffold\n  z 2   # clear\nS 2\nt 2 1\nJ 1 1 9\n";
        let p = parse_program_text(text).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(run(&p, 5, StepBudget::new(100)), EvalResult::Halted(1));
    }

    #[test]
    fn empty_text_is_empty_program() {
        assert!(parse_program_text("").unwrap().is_empty());
        assert!(parse_program_text("# only comments\n\n").unwrap().is_empty());
    }

    #[test]
    fn rejects_zero_register() {
        let err = parse_program_text("Z 0").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(matches!(err.kind, ProgramTextErrorKind::BadOperand(_)));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_program_text("Z 1\nQ 2\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ProgramTextErrorKind::UnknownOpcode(_)));
    }

    #[test]
    fn display_roundtrip() {
        let text = "Z 2\nS 2\nT 2 1\nJ 1 2 1\n";
        let p = parse_program_text(text).unwrap();
        assert_eq!(parse_program_text(&p.to_string()).unwrap(), p);
    }
}
