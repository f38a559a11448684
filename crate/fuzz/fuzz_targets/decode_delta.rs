#![no_main]
use libfuzzer_sys::fuzz_target;

use etw_core::trees::{delta_decode, delta_encode};

fuzz_target!(|data: &[u8]| {
    if data.len() < 8 {
        return;
    }
    let mut bytes = [0u8; 8];
    // 40-bit codes: the decoded length grows with the square root of the
    // code, so this caps a single exec at about a million entries
    bytes[..5].copy_from_slice(&data[..5]);
    let n = u64::from_le_bytes(bytes);
    // total decoding; encode inverts it wherever the code fits the domain
    let seq = delta_decode(n);
    assert_eq!(delta_encode(&seq), Ok(n));
});
