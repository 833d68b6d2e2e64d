#![no_main]

use libfuzzer_sys::fuzz_target;
use tsallis::format::{realization_from_json, realization_to_json};
use tsallis::rational::Realization;
use tsallis::Rational;

fuzz_target!(|data: &str| {
    if let Ok(r) = realization_from_json::<f64>(data) {
        // shapes were validated, so the Markov products must compose
        let _ = r.markov(3);
    }
    if let Ok(r) = realization_from_json::<Rational>(data) {
        let back: Realization<Rational> = realization_from_json(&realization_to_json(&r).to_string()).unwrap();
        assert_eq!(back, r);
    }
});
