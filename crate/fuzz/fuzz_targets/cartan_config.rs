#![no_main]

use libfuzzer_sys::fuzz_target;
use spencer_core::cartan_run::CartanConfig;
use spencer_core::liealg::LieAlgebra;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = CartanConfig::from_json(text) {
        // Presets only: `algebra` may otherwise name a file.
        if let Ok(g) = LieAlgebra::preset(&cfg.algebra) {
            let _ = cfg.connection(&g);
        }
    }
});
