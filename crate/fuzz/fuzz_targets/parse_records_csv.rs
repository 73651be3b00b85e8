#![no_main]

use empsup::formats::{read_records_csv, write_records_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_records_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    write_records_csv(&mut out, &records).unwrap();
    let back = read_records_csv(out.as_slice()).unwrap();
    assert_eq!(back.len(), records.len());
});
