#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(grid) = pencil_lab_cli::parse_grid(data) {
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|t| t.is_finite()));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
});
