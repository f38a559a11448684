#![no_main]
use libfuzzer_sys::fuzz_target;

use etw_core::kernel::parse_program_text;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(program) = parse_program_text(text) {
        // the printed form must reparse to the same program
        let printed = program.to_string();
        let again = parse_program_text(&printed).expect("printed program reparses");
        assert_eq!(program, again);
    }
});
