#![no_main]
use libfuzzer_sys::fuzz_target;

use pencil_lab_cli::{format_f64, parse_spec_json};

fuzz_target!(|data: &str| {
    if let Ok(spec) = parse_spec_json(data) {
        assert!(spec.mu().windows(2).all(|w| w[0] > w[1]));
        assert!(spec.alpha().iter().all(|&a| a > 0.0 && a.is_finite()));
        let list = |xs: &[f64]| xs.iter().map(|&x| format_f64(x)).collect::<Vec<_>>().join(",");
        let again = format!(r#"{{"mu":[{}],"alpha":[{}]}}"#, list(spec.mu()), list(spec.alpha()));
        assert_eq!(parse_spec_json(&again).unwrap(), spec);
    }
});
