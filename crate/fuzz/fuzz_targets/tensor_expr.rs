#![no_main]

use libfuzzer_sys::fuzz_target;
use spencer_core::scalar::Rational;
use spencer_core::spencer::SymTensor;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let labels: Vec<String> = ["h", "e", "f"].iter().map(|s| s.to_string()).collect();
    if let Ok(t) = SymTensor::<Rational>::parse(text, &labels) {
        // Printing and re-parsing must give the same tensor.
        let shown = t.display_with(&labels).to_string();
        let back = SymTensor::<Rational>::parse(&shown, &labels).expect("printed form parses");
        assert_eq!(back.terms(), t.terms(), "{shown}");
    }
});
