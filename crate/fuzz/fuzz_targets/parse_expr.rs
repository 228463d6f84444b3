#![no_main]

use libfuzzer_sys::fuzz_target;

use gaquot::expr::parse_poly;
use gaquot::poly::VarTable;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let vars = VarTable::with_flags(&[
        ("x", false),
        ("y", false),
        ("u", false),
        ("v", false),
        ("t", false),
        ("a", true),
    ])
    .unwrap();
    if let Ok(p) = parse_poly(src, &vars) {
        // canonical form must survive a print/parse round trip
        let printed = p.to_string();
        let back = parse_poly(&printed, &vars).expect("canonical form reparses");
        assert_eq!(p, back);
    }
});
