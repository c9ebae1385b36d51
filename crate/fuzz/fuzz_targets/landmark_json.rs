#![no_main]

use libfuzzer_sys::fuzz_target;
use uvf_core::LandmarkDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = LandmarkDocument::from_json(text) {
        let again = LandmarkDocument::from_json(&doc.to_json()).expect("rewritten document parses");
        assert_eq!(again, doc);
    }
});
