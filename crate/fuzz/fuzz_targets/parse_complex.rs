#![no_main]

use libfuzzer_sys::fuzz_target;
use tsallis::scalar::{parse_complex, render_complex};
use tsallis::Rational;

fuzz_target!(|data: &str| {
    let _ = parse_complex::<f64>(data);
    if let Ok(z) = parse_complex::<Rational>(data) {
        assert_eq!(parse_complex::<Rational>(&render_complex(&z)), Ok(z));
    }
});
