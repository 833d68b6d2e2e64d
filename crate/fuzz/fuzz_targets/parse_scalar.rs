#![no_main]

use libfuzzer_sys::fuzz_target;
use tsallis::scalar::parse_rational;
use tsallis::{QParam, Rational, Real};

fuzz_target!(|data: &str| {
    let exact = parse_rational(data);
    if let Ok(x) = &exact {
        // rendering is canonical
        assert_eq!(parse_rational(&x.render()).as_ref(), Ok(x));
    }
    let _ = <f64 as Real>::parse_literal(data);
    let _ = QParam::<Rational>::parse(data);
});
