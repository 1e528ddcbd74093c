#![no_main]

use charquo::BraidWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = s.parse::<BraidWord>() {
        let again: BraidWord = w.to_string().parse().expect("printed words parse");
        assert_eq!(again, w);
        assert_eq!(w.inverse().inverse(), w);
    }
});
