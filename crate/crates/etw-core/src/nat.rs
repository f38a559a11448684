//! Naturals, the Cantor pairing function and the canonical finite-set codes `D_n`.
//!
//! Everything downstream treats `u64` as the ambient copy of the naturals.
//! Program Gödel numbers are the one exception (they live in `BigUint`, see
//! [`crate::kernel::code`]), because syntactic transformations produce codes
//! that outgrow machine words long before they outgrow memory.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The ambient natural-number type for data values.
pub type Nat = u64;

/// Cantor pairing `(x + y)(x + y + 1)/2 + y`.
///
/// Panics on results that do not fit in 64 bits; use [`checked_pair`] when
/// enumerating untrusted stage elements.
pub fn pair(x: Nat, y: Nat) -> Nat {
    checked_pair(x, y).expect("cantor pair exceeds u64 range")
}

/// Cantor pairing with overflow reported instead of panicking.
pub fn checked_pair(x: Nat, y: Nat) -> Option<Nat> {
    let s = x as u128 + y as u128;
    let tri = if s.is_multiple_of(2) {
        (s / 2).checked_mul(s + 1)?
    } else {
        s.checked_mul(s.div_ceil(2))?
    };
    u64::try_from(tri.checked_add(y as u128)?).ok()
}

/// Inverse of [`pair`]: `unpair(pair(x, y)) == (x, y)`.
pub fn unpair(n: Nat) -> (Nat, Nat) {
    let w = triangular_root(n);
    let t = (w as u128 * (w as u128 + 1) / 2) as u64;
    let y = n - t;
    (w - y, y)
}

/// Largest `w` with `w(w+1)/2 <= n`.
fn triangular_root(n: Nat) -> Nat {
    let r = isqrt_u128(8u128 * n as u128 + 1);
    // (sqrt(8n+1) - 1) / 2, rounded down
    let mut w = ((r - 1) / 2) as u64;
    // guard against off-by-one from the integer square root
    while (w as u128 + 1) * (w as u128 + 2) / 2 <= n as u128 {
        w += 1;
    }
    while w as u128 * (w as u128 + 1) / 2 > n as u128 {
        w -= 1;
    }
    w
}

fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // one Newton step then settle exactly
    x = (x + n / x.max(1)) / 2;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Decodes `n` as the canonical finite set `D_n`: the set of bit positions in
/// the binary expansion of `n`. `D_0` is the empty set.
pub fn dn_decode(n: Nat) -> BTreeSet<Nat> {
    let mut out = BTreeSet::new();
    let mut v = n;
    let mut bit = 0;
    while v != 0 {
        if v & 1 == 1 {
            out.insert(bit);
        }
        v >>= 1;
        bit += 1;
    }
    out
}

/// Encodes a finite set as its `D_n` code. Fails when an element is 64 or
/// larger, since the code would not fit the `u64` data domain.
pub fn dn_encode(set: &BTreeSet<Nat>) -> Option<Nat> {
    let mut code: u64 = 0;
    for &x in set {
        if x >= 64 {
            return None;
        }
        code |= 1u64 << x;
    }
    Some(code)
}

/// `D_n` code of an arbitrary finite set, as an unbounded natural.
pub fn dn_encode_big(set: &BTreeSet<Nat>) -> BigUint {
    let mut code = BigUint::zero();
    for &x in set {
        code |= BigUint::one() << x;
    }
    code
}

/// Decodes an unbounded `D_n` code.
pub fn dn_decode_big(n: &BigUint) -> BTreeSet<Nat> {
    let mut out = BTreeSet::new();
    for (word_idx, word) in n.iter_u64_digits().enumerate() {
        for bit in 0..64 {
            if word & (1u64 << bit) != 0 {
                out.insert(word_idx as u64 * 64 + bit);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle for the pairing inverse: walk the Cantor diagonal.
    fn unpair_by_search(n: Nat) -> (Nat, Nat) {
        let mut k = 0u64;
        for s in 0.. {
            for y in 0..=s {
                if k == n {
                    return (s - y, y);
                }
                k += 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn pair_base_case() {
        assert_eq!(pair(0, 0), 0);
    }

    #[test]
    fn pair_closed_form_example() {
        // (1+2)(1+2+1)/2 + 2 = 6 + 2
        assert_eq!(pair(1, 2), 8);
        assert_eq!(unpair(8), (1, 2));
    }

    #[test]
    fn unpair_matches_diagonal_search() {
        for n in 0..2000 {
            assert_eq!(unpair(n), unpair_by_search(n), "n = {n}");
        }
    }

    #[test]
    fn pair_roundtrip_exhaustive() {
        for n in 0..10_000u64 {
            let (x, y) = unpair(n);
            assert_eq!(pair(x, y), n);
        }
    }

    #[test]
    fn pair_large_values() {
        let x = 3_000_000_000u64;
        let y = 1_234_567u64;
        let n = pair(x, y);
        assert_eq!(unpair(n), (x, y));
        assert!(checked_pair(u64::MAX, u64::MAX).is_none());
    }

    #[test]
    fn dn_zero_is_empty() {
        assert!(dn_decode(0).is_empty());
    }

    #[test]
    fn dn_examples() {
        // 5 = 2^0 + 2^2
        assert_eq!(dn_decode(5), BTreeSet::from([0, 2]));
        // {1} -> 2^1
        assert_eq!(dn_encode(&BTreeSet::from([1])), Some(2));
        assert_eq!(dn_encode(&BTreeSet::from([64])), None);
    }

    #[test]
    fn dn_roundtrip_exhaustive() {
        for n in 0..10_000u64 {
            assert_eq!(dn_encode(&dn_decode(n)), Some(n));
        }
    }

    #[test]
    fn dn_big_roundtrip() {
        let set = BTreeSet::from([0, 63, 64, 130]);
        let code = dn_encode_big(&set);
        assert_eq!(dn_decode_big(&code), set);
    }
}
