#![no_main]

use libfuzzer_sys::fuzz_target;
use twistlab::cover::Nerve;
use twistlab::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cover) = io::parse_cover(text) else { return };
    for x in 0..cover.point_count() {
        assert!(!cover.indices_at(x).is_empty());
    }
    let mut doc = serde_json::to_value(io::cover_doc(&cover)).unwrap();
    doc["schema_version"] = 1.into();
    let back = io::parse_cover(&doc.to_string()).unwrap();
    assert_eq!(back.set_labels(), cover.set_labels());
    for i in 0..cover.set_count() {
        assert_eq!(back.set(i), cover.set(i));
    }
    let _ = Nerve::from_cover(&cover);
});
