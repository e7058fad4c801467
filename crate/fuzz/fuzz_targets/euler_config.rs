#![no_main]

use libfuzzer_sys::fuzz_target;
use spencer_core::simulation::EulerConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = EulerConfig::from_json(text) {
        let _ = cfg.curve_labels();
        if cfg.grid.n <= 64 && cfg.vortices.len() <= 8 {
            let _ = cfg.initial_vorticity();
            let _ = cfg.initial_curves();
        }
    }
});
