#![no_main]

use coverlab::spacefile::SpaceFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = SpaceFile::parse(text) {
        let again = SpaceFile::parse(&f.emit()).expect("emitted file parses");
        assert_eq!(again, f);
    }
});
