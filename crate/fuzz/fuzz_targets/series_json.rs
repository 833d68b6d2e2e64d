#![no_main]

use libfuzzer_sys::fuzz_target;
use tsallis::format::{series_from_json, series_to_json};
use tsallis::{Rational, TruncatedSeries};

fuzz_target!(|data: &str| {
    if let Ok(f) = series_from_json::<f64>(data) {
        let back: TruncatedSeries<f64> = series_from_json(&series_to_json(&f).to_string()).unwrap();
        assert_eq!(back, f);
    }
    if let Ok(f) = series_from_json::<Rational>(data) {
        let back: TruncatedSeries<Rational> = series_from_json(&series_to_json(&f).to_string()).unwrap();
        assert_eq!(back, f);
    }
});
