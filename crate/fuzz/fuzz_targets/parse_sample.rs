#![no_main]

use empsup::formats::parse_sample_text;
use empsup::process::{eval_q, sup_unweighted, sup_weighted, Sample};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(values) = parse_sample_text(text) else {
        return;
    };
    let Ok(sample) = Sample::new(values) else {
        return;
    };
    let w = sup_weighted(&sample);
    assert!(w.value.is_finite() && w.value > 0.0);
    assert_eq!(sample.order_stats()[w.index - 1], w.location);
    assert_eq!(eval_q(&sample, w.location, w.side).unwrap(), w.value);
    let u = sup_unweighted(&sample);
    assert!(u.value > 0.0 && u.value <= (sample.n() as f64).sqrt());
});
