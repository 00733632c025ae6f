//! JSON report decoder.

#![no_main]

use bsurf_cli::report::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = Report::from_json(text) {
        assert_eq!(Report::from_json(&r.to_json()).expect("printed report decodes"), r);
        let _ = r.to_table();
    }
});
