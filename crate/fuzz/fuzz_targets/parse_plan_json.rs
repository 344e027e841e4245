#![no_main]

use libfuzzer_sys::fuzz_target;
use shootout::complexity::{default_library, QuestionPlan, MAX_PLAN_DEPTH};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let library = default_library(5);
    if let Ok(plan) = QuestionPlan::from_json(text, &library) {
        assert!(plan.depth() <= MAX_PLAN_DEPTH);
        let again = QuestionPlan::from_json(&plan.to_json().to_string(), &library).unwrap();
        assert_eq!(again, plan);
    }
});
