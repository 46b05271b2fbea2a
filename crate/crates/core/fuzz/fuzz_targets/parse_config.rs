//! Campaign configuration parser: any input must yield campaigns or an error.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(campaigns) = fracrd::harness::parse_config_str(&text) {
        for c in &campaigns {
            for (key, _) in c.kind().default_tolerances() {
                assert!(c.tolerance(key).is_finite());
            }
        }
    }
});
