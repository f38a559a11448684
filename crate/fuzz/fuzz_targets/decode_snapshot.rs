#![no_main]
use libfuzzer_sys::fuzz_target;

use etw_core::snapshot::{decode_snapshot, encode_snapshot};

fuzz_target!(|data: &[u8]| {
    // decoding arbitrary bytes must never panic; anything that decodes must
    // re-encode to something that decodes to the same job
    if let Ok(job) = decode_snapshot(data) {
        let bytes = encode_snapshot(&job);
        let again = decode_snapshot(&bytes).expect("re-encoded snapshot decodes");
        assert_eq!(job, again);
    }
});
