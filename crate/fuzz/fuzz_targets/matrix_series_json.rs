#![no_main]

use libfuzzer_sys::fuzz_target;
use tsallis::format::{matrix_series_from_json, matrix_series_to_json};
use tsallis::{MatrixSeries, Rational};

fuzz_target!(|data: &str| {
    let _ = matrix_series_from_json::<f64>(data);
    if let Ok(f) = matrix_series_from_json::<Rational>(data) {
        let back: MatrixSeries<Rational> = matrix_series_from_json(&matrix_series_to_json(&f).to_string()).unwrap();
        assert_eq!(back, f);
    }
});
