#![no_main]
use libfuzzer_sys::fuzz_target;

use etw_core::budgets::Budgets;
use etw_core::instance::{parse_instance, resolve};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing must never panic; resolution of whatever parses must not
    // panic either (tiny budgets keep machine evaluation bounded)
    if let Ok(parsed) = parse_instance(text) {
        let _ = resolve(&parsed, Budgets::new(200, 50));
    }
});
