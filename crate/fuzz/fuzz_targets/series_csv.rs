#![no_main]

use libfuzzer_sys::fuzz_target;
use spencer_core::invariants::conservation_report;
use spencer_core::io::{read_series, write_series};

fuzz_target!(|data: &[u8]| {
    if let Ok((labels, series)) = read_series(data) {
        let _ = conservation_report(&series);
        let mut out = Vec::new();
        write_series(&mut out, &labels, &series).expect("writes to memory");
        let (labels2, series2) = read_series(out.as_slice()).expect("own output parses");
        assert_eq!(labels2, labels);
        assert_eq!(series2, series);
    }
});
