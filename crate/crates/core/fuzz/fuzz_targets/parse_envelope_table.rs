#![no_main]

use libfuzzer_sys::fuzz_target;

use fracrd::special_functions::{format_envelope_table, parse_envelope_table};

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(rows) = parse_envelope_table(&text) {
        let back =
            parse_envelope_table(&format_envelope_table(&rows)).expect("formatted table parses");
        assert_eq!(back.len(), rows.len());
    }
});
