#![no_main]

use coverlab::xreal::expr::{eval_str, parse};
use coverlab::xreal::rat;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if parse(text).is_ok() && text.len() <= 48 {
        // Evaluation may fail (division by zero, caps) but must not panic.
        let _ = eval_str(text, &rat(1, 10));
    }
});
