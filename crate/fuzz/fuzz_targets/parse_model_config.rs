#![no_main]

use libfuzzer_sys::fuzz_target;
use shootout::engine::ScoringModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = ScoringModel::from_config_str(text) {
        assert!(m.validate().is_ok());
        assert_eq!(
            ScoringModel::from_config_str(&m.to_config_string()).unwrap(),
            m
        );
    }
});
