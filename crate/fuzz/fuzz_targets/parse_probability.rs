#![no_main]

use libfuzzer_sys::fuzz_target;
use shootout::engine::Probability;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<Probability>() {
        assert!(p.to_f64() >= 0.0 && p.to_f64() <= 1.0);
        assert_eq!(p.to_string().parse::<Probability>().unwrap(), p);
    }
});
