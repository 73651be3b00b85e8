#![no_main]

use empsup_cli::parse_grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((nx, ny)) = parse_grid(text) {
        assert_eq!(parse_grid(&format!("{nx}x{ny}")), Ok((nx, ny)));
    }
});
