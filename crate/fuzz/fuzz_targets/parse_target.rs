#![no_main]

use libfuzzer_sys::fuzz_target;
use sixtrig::input::parse_target;
use sixtrig::solver;

fuzz_target!(|text: &str| {
    let Ok(expr) = parse_target(text) else {
        return;
    };
    assert!(expr.value().is_finite(), "{text:?} parsed to a non-finite value");
    if let Some(n) = expr.integer {
        assert_eq!(expr.value(), n as f64);
    }
    for integer_mode in [false, true] {
        if let Ok(target) = expr.to_target(integer_mode) {
            if let Ok(fam) = solver::solve(target) {
                for r in &fam.residues {
                    assert!((0.0..std::f64::consts::TAU).contains(&r.offset()));
                }
            }
        }
    }
});
