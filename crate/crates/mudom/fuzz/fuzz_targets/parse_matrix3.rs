#![no_main]
use libfuzzer_sys::fuzz_target;
use mudom::core_types::json::parse_matrix3 as parse;

fuzz_target!(|data: &[u8]| {
    let _ = parse(data);
});
