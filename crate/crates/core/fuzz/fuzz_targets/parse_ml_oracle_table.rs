#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(rows) = fracrd::harness::parse_ml_oracle_table(&text) {
        assert!(rows
            .iter()
            .all(|r| r.alpha > 0.0 && r.alpha <= 1.0 && r.value.is_finite()));
    }
});
