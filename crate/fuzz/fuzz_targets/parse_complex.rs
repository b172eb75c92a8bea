#![no_main]

use libfuzzer_sys::fuzz_target;
use twistlab::cech::{cohomology, Coefficients};
use twistlab::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(nerve) = io::parse_complex(text) {
        if nerve.simplex_count() <= 64 {
            let _ = cohomology(&nerve, &Coefficients::Integers, 1);
        }
    }
});
