#![no_main]

use libfuzzer_sys::fuzz_target;
use tsallis::format::config_from_json;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = config_from_json(data) {
        let _ = cfg.q_text();
    }
});
