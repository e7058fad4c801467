#![no_main]

use libfuzzer_sys::fuzz_target;
use spencer_core::liealg::LieAlgebra;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = LieAlgebra::from_json(text) {
        // The Jacobi sweep is quartic in the dimension.
        if g.dim() <= 8 {
            let _ = g.jacobi_residual();
            let _ = g.bracket_table();
        }
        let doc = g.to_document();
        let again = LieAlgebra::from_document(&doc).expect("own document reloads");
        assert_eq!(again.nonzero_constants(), g.nonzero_constants());
    }
});
