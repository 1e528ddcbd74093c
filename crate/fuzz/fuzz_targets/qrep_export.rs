#![no_main]

use charquo_qrep::export::{export, parse_export, to_json_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(reps) = parse_export(s) {
        let text = to_json_string(&export(&reps));
        assert_eq!(parse_export(&text).expect("exported text parses"), reps);
    }
});
