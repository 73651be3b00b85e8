#![no_main]

use empsup::formats::{read_table_csv, write_table_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(rows) = read_table_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    write_table_csv(&mut out, &rows).unwrap();
    assert_eq!(read_table_csv(out.as_slice()).unwrap().len(), rows.len());
});
