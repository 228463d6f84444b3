#![no_main]

use libfuzzer_sys::fuzz_target;

use gaquot::scenario::{format_scenario, parse_scenario, RunOptions};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    // parsing must never panic; formatting a parseable scenario must be
    // a fixed point of parse . format when it succeeds
    if let Ok(scenario) = parse_scenario(src) {
        let opts = RunOptions::default();
        if let Ok(once) = format_scenario(&scenario, &opts) {
            let reparsed = parse_scenario(&once).expect("formatted output reparses");
            let twice = format_scenario(&reparsed, &opts).expect("formatted output reformats");
            assert_eq!(once, twice);
        }
    }
});
