#![no_main]

use charquo::orbit::{decode_dump, DUMP_MAGIC, DUMP_VERSION};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = decode_dump(data) {
        assert!(d.keys.windows(2).all(|k| k[0] < k[1]));
        assert!(d.keys.iter().all(|k| k.0.iter().all(|&c| (c as u64) < d.p)));
        let mut out = Vec::with_capacity(data.len());
        out.extend_from_slice(DUMP_MAGIC);
        out.extend_from_slice(&DUMP_VERSION.to_le_bytes());
        out.extend_from_slice(&d.p.to_le_bytes());
        out.extend_from_slice(&(d.keys.len() as u64).to_le_bytes());
        for k in &d.keys {
            for c in k.0 {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
        assert_eq!(out, data);
    }
});
