#![no_main]

use libfuzzer_sys::fuzz_target;
use shootout::mechanisms::{format_kick_string, parse_kick_string, replay_schedule, Mechanism};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(kicks) = parse_kick_string(text) else {
        return;
    };
    assert_eq!(kicks.len() % 2, 0);
    assert_eq!(
        parse_kick_string(&format_kick_string(&kicks)).unwrap(),
        kicks
    );
    let rounds = replay_schedule(&Mechanism::AdjustedCatchUp, &kicks, 5).unwrap();
    assert_eq!(rounds.len() * 2, kicks.len());
});
