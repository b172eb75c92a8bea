#![no_main]

use libfuzzer_sys::fuzz_target;
use twistlab::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(problem) = io::parse_problem(text) else { return };
    if let Some(c) = problem.cochain {
        // a parsed cochain re-serializes and parses to the same values
        let again = io::problem_json(&c, false).unwrap().to_string();
        let back = io::parse_problem(&again).unwrap().cochain.unwrap();
        for (k, v) in c.entries() {
            assert_eq!(&back.get(&k.0, k.1), v);
        }
        let _ = c.is_cocycle();
    }
});
