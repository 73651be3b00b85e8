#![no_main]

use empsup::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(config) = serde_json::from_slice::<ExperimentConfig>(data) else {
        return;
    };
    if config.validate().is_err() {
        return;
    }
    let text = serde_json::to_string(&config).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
});
