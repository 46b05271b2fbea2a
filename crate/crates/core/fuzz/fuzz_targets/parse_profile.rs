//! Initial-profile expressions; a parsed profile must print back to itself.

#![no_main]

use libfuzzer_sys::fuzz_target;

use fracrd::rd_solver::Profile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<Profile>() {
        let again: Profile = p.to_string().parse().expect("display output parses");
        assert_eq!(again, p);
    }
});
