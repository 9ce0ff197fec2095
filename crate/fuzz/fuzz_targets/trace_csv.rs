#![no_main]

use libfuzzer_sys::fuzz_target;
use rtsearch::gen::example_one;
use rtsearch::trace::parse_trace;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let problem = example_one();
    let _ = parse_trace(&problem, text);
});
