#![no_main]
use libfuzzer_sys::fuzz_target;

fn parse(data: &[u8]) -> Option<mudom::cli::PlaneSpec> {
    mudom::cli::parse_plane_spec(std::str::from_utf8(data).ok()?).ok()
}

fuzz_target!(|data: &[u8]| {
    let _ = parse(data);
});
