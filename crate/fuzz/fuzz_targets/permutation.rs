#![no_main]

use charquo::Permutation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = s.parse::<Permutation>() {
        if p.degree() > 1 << 16 {
            return;
        }
        let id = Permutation::identity(p.degree());
        assert_eq!(p.then(&p.inverse()), id);
        let again: Permutation = p.to_string().parse().expect("printed permutations parse");
        assert_eq!(again, p);
    }
});
