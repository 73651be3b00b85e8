#![no_main]

use empsup_cli::manifest::RunManifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(manifest) = RunManifest::from_json(text) else {
        return;
    };
    let _ = manifest.resolved();
    let again = RunManifest::from_json(&manifest.to_json()).unwrap();
    assert_eq!(again.to_json(), manifest.to_json());
});
