#![no_main]

use libfuzzer_sys::fuzz_target;
use spencer_core::io::{decode_payload, FieldSidecar};

// Input layout: sidecar JSON, a NUL byte, then the raw payload.
fuzz_target!(|data: &[u8]| {
    let split = data.iter().position(|&b| b == 0).unwrap_or(data.len());
    let Ok(text) = std::str::from_utf8(&data[..split]) else {
        return;
    };
    if let Ok(sidecar) = FieldSidecar::from_json(text) {
        let payload = data.get(split + 1..).unwrap_or(&[]);
        let _ = decode_payload(&sidecar, payload);
    }
});
