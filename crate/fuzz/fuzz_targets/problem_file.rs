#![no_main]

use libfuzzer_sys::fuzz_target;
use rtsearch::probfile::{parse_problem, write_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(problem) = parse_problem(text) {
        // Anything that parses must round-trip through the writer.
        let again = parse_problem(&write_problem(&problem)).expect("writer output must parse");
        assert_eq!(problem.state_count(), again.state_count());
    }
});
