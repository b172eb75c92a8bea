#![no_main]

use libfuzzer_sys::fuzz_target;
use twistlab::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = io::parse_cochain(text) {
        if c.degree() == 2 && c.is_cocycle().unwrap_or(false) {
            let _ = c.normalize();
        }
    }
});
