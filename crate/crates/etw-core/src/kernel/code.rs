//! Gödel numbering of programs: a total bijection between the naturals and
//! register-machine programs.
//!
//! Layer 1 codes a single instruction as `4*k + v` where `v` picks the
//! variant and `k` Cantor-pairs the operands (shifted down by 1, so every
//! decoded operand is automatically >= 1).
//!
//! Layer 2 codes the instruction sequence into a bit string. Each element
//! except the last is written as a self-delimiting chunk `1^k 0 w`, where `w`
//! is the binary expansion of `a + 1` with the leading 1 removed and
//! `k = |w|`. The last element is written as the string the greedy chunk
//! parser would get stuck on, via an explicit bijection between the naturals
//! and those "stuck" strings. Every bit string therefore decodes to exactly
//! one nonempty sequence, and the empty program takes code 0.
//!
//! The point of the chunked form (over iterated pairing) is that codes grow
//! linearly with program size, so syntactic transformations such as the
//! s-m-n construction stay cheap.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::machine::{Instr, Program};

/// A program's Gödel number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgramIndex(BigUint);

impl ProgramIndex {
    pub fn new(code: BigUint) -> Self {
        ProgramIndex(code)
    }

    pub fn code(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for ProgramIndex {
    fn from(n: u64) -> Self {
        ProgramIndex(BigUint::from(n))
    }
}

impl fmt::Display for ProgramIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for ProgramIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ProgramIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let code = text
            .parse::<BigUint>()
            .map_err(|e| serde::de::Error::custom(format!("bad program index: {e}")))?;
        Ok(ProgramIndex(code))
    }
}

/// Encodes a program into its Gödel number.
pub fn encode_program(p: &Program) -> ProgramIndex {
    let elements: Vec<BigUint> = p.instructions().iter().map(instr_to_nat).collect();
    ProgramIndex(encode_seq(&elements))
}

/// Decodes any natural into a (well-formed) program. Total.
pub fn decode_program(e: &ProgramIndex) -> Program {
    let elements = decode_seq(&e.0);
    let instrs = elements.iter().map(nat_to_instr).collect();
    Program::new(instrs).expect("decoded instructions are well-formed by construction")
}

fn instr_to_nat(i: &Instr) -> BigUint {
    let four = BigUint::from(4u8);
    match i {
        Instr::Zero(r) => (r - 1u8) * &four,
        Instr::Succ(r) => (r - 1u8) * &four + 1u8,
        Instr::Transfer(a, b) => big_pair(&(a - 1u8), &(b - 1u8)) * &four + 2u8,
        Instr::JumpIfEqual(a, b, t) => {
            big_pair(&big_pair(&(a - 1u8), &(b - 1u8)), &(t - 1u8)) * &four + 3u8
        }
    }
}

fn nat_to_instr(c: &BigUint) -> Instr {
    let four = BigUint::from(4u8);
    let v = (c % &four).to_u8().unwrap();
    let k = c / &four;
    let one = BigUint::one();
    match v {
        0 => Instr::Zero(k + &one),
        1 => Instr::Succ(k + &one),
        2 => {
            let (a, b) = big_unpair(&k);
            Instr::Transfer(a + &one, b + &one)
        }
        _ => {
            let (ab, t) = big_unpair(&k);
            let (a, b) = big_unpair(&ab);
            Instr::JumpIfEqual(a + &one, b + &one, t + &one)
        }
    }
}

/// Cantor pairing on unbounded naturals.
pub fn big_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u8)) / 2u8 + y
}

/// Inverse Cantor pairing on unbounded naturals.
pub fn big_unpair(n: &BigUint) -> (BigUint, BigUint) {
    let w = ((BigUint::from(8u8) * n + 1u8).sqrt() - 1u8) / 2u8;
    let t = (&w * (&w + 1u8)) / 2u8;
    let y = n - t;
    let x = w - &y;
    (x, y)
}

// ---------------------------------------------------------------------------
// Bit strings
// ---------------------------------------------------------------------------

/// Bijection between naturals and bit strings (MSB first): the binary
/// expansion of `n + 1` with its leading 1 removed.
fn nat_to_bits(n: &BigUint) -> Vec<bool> {
    let m = n + 1u8;
    let total = m.bits();
    (1..total).rev().map(|i| m.bit(i - 1)).collect()
}

fn bits_to_nat(bits: &[bool]) -> BigUint {
    let mut m = BigUint::one();
    for &b in bits {
        m <<= 1;
        if b {
            m |= BigUint::one();
        }
    }
    m - 1u8
}

/// Chunk codeword for `a`: `1^k 0 w` with `w = nat_to_bits(a)`, `k = |w|`.
fn chunk(a: &BigUint) -> Vec<bool> {
    let w = nat_to_bits(a);
    let mut out = vec![true; w.len()];
    out.push(false);
    out.extend_from_slice(&w);
    out
}

/// Strings on which the greedy chunk parser gets stuck, enumerated by length
/// and, within a length, small-to-large: first `1^len`, then `1^k 0 w'` with
/// `|w'|` increasing and `w'` in numeric order. There are `2^(len/2)` stuck
/// strings of each length `len >= 1` and one of length 0 (the empty string).
fn stuck_string(a: &BigUint) -> Vec<bool> {
    if a.is_zero() {
        return Vec::new();
    }
    let mut rest = a.clone();
    let mut len: u64 = 1;
    loop {
        let block = BigUint::one() << (len / 2);
        if rest <= block.clone() {
            break;
        }
        rest -= block;
        len += 1;
    }
    // rest is in 1..=2^(len/2); index i = rest - 1 within the length block
    let i = rest - 1u8;
    if i.is_zero() {
        return vec![true; len as usize];
    }
    // skip the all-ones string, then w' lengths d = 0, 1, ... with 2^d entries
    let mut j = i - 1u8;
    let mut d: u64 = 0;
    loop {
        let block = BigUint::one() << d;
        if j < block {
            break;
        }
        j -= block;
        d += 1;
    }
    // stuck string 1^k 0 w' with k = len - 1 - d ones, w' the d-bit value j
    let k = (len - 1 - d) as usize;
    let mut out = vec![true; k];
    out.push(false);
    for bit in (0..d).rev() {
        out.push(j.bit(bit));
    }
    out
}

/// Inverse of [`stuck_string`]. The input must be a stuck string.
fn stuck_index(s: &[bool]) -> BigUint {
    if s.is_empty() {
        return BigUint::zero();
    }
    let len = s.len() as u64;
    // count of stuck strings of length < len
    let mut base = BigUint::zero();
    for l in 1..len {
        base += BigUint::one() << (l / 2);
    }
    let ones = s.iter().take_while(|&&b| b).count() as u64;
    if ones == len {
        return base + 1u8;
    }
    // s = 1^ones 0 w', d = |w'|
    let d = len - ones - 1;
    let mut within = BigUint::one(); // skip the all-ones entry
    for dd in 0..d {
        within += BigUint::one() << dd;
    }
    let mut wval = BigUint::zero();
    for &b in &s[(ones + 1) as usize..] {
        wval <<= 1;
        if b {
            wval |= BigUint::one();
        }
    }
    base + within + wval + 1u8
}

/// Bijection between naturals and finite sequences of naturals.
pub fn encode_seq(xs: &[BigUint]) -> BigUint {
    if xs.is_empty() {
        return BigUint::zero();
    }
    let mut bits = Vec::new();
    for x in &xs[..xs.len() - 1] {
        bits.extend(chunk(x));
    }
    bits.extend(stuck_string(&xs[xs.len() - 1]));
    bits_to_nat(&bits) + 1u8
}

/// Inverse of [`encode_seq`]. Total.
pub fn decode_seq(n: &BigUint) -> Vec<BigUint> {
    if n.is_zero() {
        return Vec::new();
    }
    let bits = nat_to_bits(&(n - 1u8));
    let mut out = Vec::new();
    let mut pos = 0usize;
    loop {
        // try to parse a full chunk 1^k 0 w at pos
        let mut k = 0usize;
        while pos + k < bits.len() && bits[pos + k] {
            k += 1;
        }
        let have_zero = pos + k < bits.len();
        let have_w = have_zero && pos + k + 1 + k <= bits.len();
        if have_w {
            let w = &bits[pos + k + 1..pos + k + 1 + k];
            out.push(bits_to_nat(w));
            pos += 2 * k + 1;
        } else {
            // the rest is a stuck string: it is the last element
            out.push(stuck_index(&bits[pos..]));
            return out;
        }
    }
}
