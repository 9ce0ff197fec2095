#![no_main]

use libfuzzer_sys::fuzz_target;
use rtsearch::grid::{grid_to_problem, parse_grid_map, HeuristicKind};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(map) = parse_grid_map(text) {
        // A parsed map must also survive conversion.
        let _ = grid_to_problem(&map, 1.0, HeuristicKind::Manhattan);
    }
});
