#![no_main]

use libfuzzer_sys::fuzz_target;
use twistlab::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = io::parse_groupoid(text) {
        assert!(g.check_axioms().is_ok());
        for a in 0..g.arrow_count() {
            assert_eq!(g.compose(a, g.inverse(a)), Some(g.unit_arrow(g.range(a))));
        }
    }
});
