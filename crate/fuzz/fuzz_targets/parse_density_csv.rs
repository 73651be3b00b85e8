#![no_main]

use empsup::formats::{read_density_csv, write_density_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(rows) = read_density_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    write_density_csv(&mut out, &rows).unwrap();
    assert_eq!(read_density_csv(out.as_slice()).unwrap().len(), rows.len());
});
