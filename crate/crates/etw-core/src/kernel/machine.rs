//! The register machine: four instructions over unboundedly many registers,
//! each holding a natural number.
//!
//! Input is placed in register 1, all other registers start at 0, and the
//! output is read from register 1 once the program counter moves past the
//! last instruction. One instruction is one step.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::nat::Nat;

/// A machine instruction. Registers and jump targets are 1-based.
///
/// Operands are unbounded naturals so that the Gödel numbering of programs is
/// a genuine bijection; every program anyone actually runs has small operands
/// and executes on the compiled fast path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instr {
    /// `Z r`: set register `r` to 0.
    Zero(BigUint),
    /// `S r`: increment register `r`.
    Succ(BigUint),
    /// `T r s`: copy register `r` into register `s`.
    Transfer(BigUint, BigUint),
    /// `J r s q`: if registers `r` and `s` are equal, jump to instruction `q`.
    JumpIfEqual(BigUint, BigUint, BigUint),
}

impl Instr {
    pub fn zero(r: Nat) -> Self {
        Instr::Zero(BigUint::from(r))
    }
    pub fn succ(r: Nat) -> Self {
        Instr::Succ(BigUint::from(r))
    }
    pub fn transfer(src: Nat, dst: Nat) -> Self {
        Instr::Transfer(BigUint::from(src), BigUint::from(dst))
    }
    pub fn jump_if_equal(a: Nat, b: Nat, target: Nat) -> Self {
        Instr::JumpIfEqual(BigUint::from(a), BigUint::from(b), BigUint::from(target))
    }

    /// Checks the well-formedness invariant: register operands and jump
    /// targets are at least 1.
    pub fn is_well_formed(&self) -> bool {
        use num_traits::Zero;
        let pos = |v: &BigUint| !v.is_zero();
        match self {
            Instr::Zero(r) | Instr::Succ(r) => pos(r),
            Instr::Transfer(a, b) => pos(a) && pos(b),
            Instr::JumpIfEqual(a, b, t) => pos(a) && pos(b) && pos(t),
        }
    }
}

/// A register-machine program: a finite instruction sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    instrs: Vec<Instr>,
}

/// Error raised when assembling a malformed program.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("instruction {index}: register operands and jump targets must be >= 1")]
    BadOperand { index: usize },
}

impl Program {
    pub fn new(instrs: Vec<Instr>) -> Result<Self, ProgramError> {
        for (index, i) in instrs.iter().enumerate() {
            if !i.is_well_formed() {
                return Err(ProgramError::BadOperand { index });
            }
        }
        Ok(Program { instrs })
    }

    /// The canonical empty program: halts immediately, computing the identity.
    pub fn empty() -> Self {
        Program::default()
    }

    pub fn instructions(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Largest machine-word-sized register index the program names (at least
    /// 1). Registers beyond `u64` are ignored: they can never collide with
    /// the small scratch registers this bound is used to pick.
    pub fn max_small_register(&self) -> Nat {
        let mut max = 1u64;
        for i in &self.instrs {
            let regs: &[&BigUint] = match i {
                Instr::Zero(r) | Instr::Succ(r) => &[r][..],
                Instr::Transfer(a, b) => &[a, b][..],
                Instr::JumpIfEqual(a, b, _) => &[a, b][..],
            };
            for r in regs {
                if let Some(v) = r.to_u64() {
                    max = max.max(v);
                }
            }
        }
        max
    }

    /// Shifts every jump target by `offset`; used when concatenating programs.
    pub fn shift_targets(&self, offset: Nat) -> Program {
        let instrs = self
            .instrs
            .iter()
            .map(|i| match i {
                Instr::JumpIfEqual(a, b, t) => {
                    Instr::JumpIfEqual(a.clone(), b.clone(), t + BigUint::from(offset))
                }
                other => other.clone(),
            })
            .collect();
        Program { instrs }
    }

    fn compile(&self) -> Option<Vec<FastInstr>> {
        self.instrs
            .iter()
            .map(|i| {
                Some(match i {
                    Instr::Zero(r) => FastInstr::Zero(r.to_u64()?),
                    Instr::Succ(r) => FastInstr::Succ(r.to_u64()?),
                    Instr::Transfer(a, b) => FastInstr::Transfer(a.to_u64()?, b.to_u64()?),
                    Instr::JumpIfEqual(a, b, t) => {
                        // any target beyond the program halts; clamp so that
                        // astronomically large targets still compile
                        let t = t.to_u64().unwrap_or(u64::MAX);
                        FastInstr::JumpIfEqual(a.to_u64()?, b.to_u64()?, t)
                    }
                })
            })
            .collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.instrs {
            match i {
                Instr::Zero(r) => writeln!(f, "Z {r}")?,
                Instr::Succ(r) => writeln!(f, "S {r}")?,
                Instr::Transfer(a, b) => writeln!(f, "T {a} {b}")?,
                Instr::JumpIfEqual(a, b, t) => writeln!(f, "J {a} {b} {t}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum FastInstr {
    Zero(u64),
    Succ(u64),
    Transfer(u64, u64),
    JumpIfEqual(u64, u64, u64),
}

/// Step budget for a run. One instruction execution is one step.
///
/// Budgets are clamped to `2^62` so register values (input plus at most one
/// increment per step) can never overflow a `u64`; a `Halted` outcome is then
/// independent of any sufficiently large budget, exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StepBudget(u64);

impl StepBudget {
    pub const MAX_STEPS: u64 = 1 << 62;

    pub const fn new(steps: u64) -> Self {
        StepBudget(if steps > Self::MAX_STEPS { Self::MAX_STEPS } else { steps })
    }

    pub fn steps(self) -> u64 {
        self.0
    }
}

impl From<u64> for StepBudget {
    fn from(steps: u64) -> Self {
        StepBudget::new(steps)
    }
}

/// Outcome of a budgeted run. `Exhausted` is the out-of-budget sentinel:
/// the run did not finish within the budget (or the argument exceeded it).
/// It is a value, not an error, and is distinct from every output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalResult {
    Halted(Nat),
    Exhausted,
}

impl EvalResult {
    pub fn halted(self) -> Option<Nat> {
        match self {
            EvalResult::Halted(v) => Some(v),
            EvalResult::Exhausted => None,
        }
    }
}

/// Runs `program` on input `x` for at most `budget` steps.
///
/// Returns `Halted(output)` iff the machine halts within the budget and
/// `x <= budget`; otherwise `Exhausted`. Pure and deterministic.
pub fn run(program: &Program, x: Nat, budget: StepBudget) -> EvalResult {
    match run_steps(program, x, budget) {
        Some((v, _)) => EvalResult::Halted(v),
        None => EvalResult::Exhausted,
    }
}

/// Like [`run`] but also reports the number of steps a halting run took.
pub fn run_steps(program: &Program, x: Nat, budget: StepBudget) -> Option<(Nat, u64)> {
    if x > budget.steps() {
        return None;
    }
    match program.compile() {
        Some(code) => run_fast(&code, x, budget.steps()),
        None => run_slow(program, x, budget.steps()),
    }
}

fn run_fast(code: &[FastInstr], x: Nat, budget: u64) -> Option<(Nat, u64)> {
    let len = code.len() as u64;
    let mut regs = FastRegisters::new(x);
    let mut pc: u64 = 1;
    let mut steps: u64 = 0;
    while pc >= 1 && pc <= len {
        if steps == budget {
            return None;
        }
        steps += 1;
        match code[(pc - 1) as usize] {
            FastInstr::Zero(r) => {
                regs.set(r, 0);
                pc += 1;
            }
            FastInstr::Succ(r) => {
                let v = regs.get(r);
                regs.set(r, v + 1);
                pc += 1;
            }
            FastInstr::Transfer(a, b) => {
                let v = regs.get(a);
                regs.set(b, v);
                pc += 1;
            }
            FastInstr::JumpIfEqual(a, b, t) => {
                if regs.get(a) == regs.get(b) {
                    pc = t;
                } else {
                    pc += 1;
                }
            }
        }
    }
    Some((regs.get(1), steps))
}

fn run_slow(program: &Program, x: Nat, budget: u64) -> Option<(Nat, u64)> {
    let len = program.instrs.len() as u64;
    let mut regs: BTreeMap<BigUint, u64> = BTreeMap::new();
    let one = BigUint::from(1u8);
    regs.insert(one.clone(), x);
    let mut pc: u64 = 1;
    let mut steps: u64 = 0;
    while pc >= 1 && pc <= len {
        if steps == budget {
            return None;
        }
        steps += 1;
        match &program.instrs[(pc - 1) as usize] {
            Instr::Zero(r) => {
                regs.insert(r.clone(), 0);
                pc += 1;
            }
            Instr::Succ(r) => {
                *regs.entry(r.clone()).or_insert(0) += 1;
                pc += 1;
            }
            Instr::Transfer(a, b) => {
                let v = regs.get(a).copied().unwrap_or(0);
                regs.insert(b.clone(), v);
                pc += 1;
            }
            Instr::JumpIfEqual(a, b, t) => {
                let va = regs.get(a).copied().unwrap_or(0);
                let vb = regs.get(b).copied().unwrap_or(0);
                if va == vb {
                    // targets beyond the program mean halt
                    pc = t.to_u64().unwrap_or(len + 1);
                } else {
                    pc += 1;
                }
            }
        }
    }
    Some((regs.get(&one).copied().unwrap_or(0), steps))
}

/// A paused run that can be advanced in step increments; used for stage
/// enumerations that interleave many inputs. Only compilable programs (all
/// operands in `u64`) are supported; callers fall back to [`run`] otherwise.
#[derive(Clone, Debug)]
pub struct Simulation {
    code: std::sync::Arc<Vec<FastInstr>>,
    regs: FastRegisters,
    pc: u64,
    steps: u64,
    halted: Option<Nat>,
}

impl Simulation {
    pub fn start(program: &Program, x: Nat) -> Option<Simulation> {
        let code = program.compile()?;
        let mut sim = Simulation {
            code: std::sync::Arc::new(code),
            regs: FastRegisters::new(x),
            pc: 1,
            steps: 0,
            halted: None,
        };
        sim.settle();
        Some(sim)
    }

    fn settle(&mut self) {
        if self.pc < 1 || self.pc > self.code.len() as u64 {
            self.halted = Some(self.regs.get(1));
        }
    }

    /// Advances until the machine halts or `step_cap` total steps were spent.
    /// Returns the output if the run has halted (now or earlier).
    pub fn advance(&mut self, step_cap: u64) -> Option<Nat> {
        if self.halted.is_some() {
            return self.halted;
        }
        let len = self.code.len() as u64;
        while self.steps < step_cap {
            if self.pc < 1 || self.pc > len {
                break;
            }
            self.steps += 1;
            match self.code[(self.pc - 1) as usize] {
                FastInstr::Zero(r) => {
                    self.regs.set(r, 0);
                    self.pc += 1;
                }
                FastInstr::Succ(r) => {
                    let v = self.regs.get(r);
                    self.regs.set(r, v + 1);
                    self.pc += 1;
                }
                FastInstr::Transfer(a, b) => {
                    let v = self.regs.get(a);
                    self.regs.set(b, v);
                    self.pc += 1;
                }
                FastInstr::JumpIfEqual(a, b, t) => {
                    if self.regs.get(a) == self.regs.get(b) {
                        self.pc = t;
                    } else {
                        self.pc += 1;
                    }
                }
            }
        }
        self.settle();
        self.halted
    }

    /// Steps spent so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn halted(&self) -> Option<Nat> {
        self.halted
    }
}

/// Register file with a dense fast lane and a sparse overflow map.
#[derive(Clone, Debug)]
struct FastRegisters {
    low: Vec<u64>,
    high: BTreeMap<u64, u64>,
}

const LOW_REGS: usize = 64;

impl FastRegisters {
    fn new(x: Nat) -> Self {
        let mut low = vec![0u64; LOW_REGS];
        low[0] = x;
        FastRegisters {
            low,
            high: BTreeMap::new(),
        }
    }

    #[inline]
    fn get(&self, r: u64) -> u64 {
        let idx = (r - 1) as usize;
        if idx < LOW_REGS {
            self.low[idx]
        } else {
            self.high.get(&r).copied().unwrap_or(0)
        }
    }

    #[inline]
    fn set(&mut self, r: u64, v: u64) {
        let idx = (r - 1) as usize;
        if idx < LOW_REGS {
            self.low[idx] = v;
        } else {
            self.high.insert(r, v);
        }
    }
}
