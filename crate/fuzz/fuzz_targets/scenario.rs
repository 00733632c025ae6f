//! Scenario file parser.

#![no_main]

use bsurf_cli::schema::{parse_scenario, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_scenario(text) {
        let again = parse_scenario(&to_json(&s)).expect("serialized scenario parses");
        assert_eq!(s, again);
    }
});
