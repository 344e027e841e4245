#![no_main]

use libfuzzer_sys::fuzz_target;
use shootout::mechanisms::Mechanism;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = text.parse::<Mechanism>() {
        let again: Mechanism = m.to_string().parse().expect("display form parses");
        assert_eq!(again, m);
    }
});
