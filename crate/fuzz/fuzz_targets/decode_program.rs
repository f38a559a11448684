#![no_main]
use libfuzzer_sys::fuzz_target;

use etw_core::kernel::{decode_program, encode_program, ProgramIndex};
use num_bigint::BigUint;

fuzz_target!(|data: &[u8]| {
    if data.len() > 512 {
        return;
    }
    // decoding is total and encode inverts it: the numbering is a bijection
    let n = BigUint::from_bytes_le(data);
    let e = ProgramIndex::new(n);
    let program = decode_program(&e);
    assert!(program.instructions().iter().all(|i| i.is_well_formed()));
    assert_eq!(encode_program(&program), e);
});
