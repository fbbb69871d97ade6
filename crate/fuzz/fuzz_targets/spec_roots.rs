#![no_main]

//! Spec text, a newline, then a value of t.

use libfuzzer_sys::fuzz_target;
use pencil_lab::{interlacing_check, roots_real};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (spec_text, t_text) = text.split_once('\n').unwrap_or((text, "0"));
    let Ok(spec) = pencil_lab_cli::parse_spec_json(spec_text) else {
        return;
    };
    let Ok(t) = t_text.trim().parse::<f64>() else {
        return;
    };
    if !t.is_finite() || t.abs() > 1e12 {
        return;
    }
    if let Ok(rs) = roots_real(&spec, t, 1e-6) {
        assert_eq!(rs.roots.len(), spec.n() + 1);
        assert!(interlacing_check(&spec, &rs));
    }
});
