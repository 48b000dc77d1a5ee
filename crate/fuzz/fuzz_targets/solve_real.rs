#![no_main]

use libfuzzer_sys::fuzz_target;
use sixtrig::solver::{solve_real, SolverError};
use sixtrig::trig::{classify_domain, DEFAULT_DOMAIN_TOL};
use sixtrig::{eval_f, Radians};

fuzz_target!(|data: [u8; 8]| {
    let c = f64::from_le_bytes(data);
    let fam = match solve_real(c) {
        Ok(fam) => fam,
        Err(SolverError::Unresolvable(_)) => {
            assert!(c.abs() > 1e6, "{c} should be resolvable");
            return;
        }
        Err(e) => {
            assert!(!c.is_finite(), "finite target {c} rejected: {e}");
            return;
        }
    };
    for r in &fam.residues {
        let x = Radians::new(r.offset()).expect("finite offset");
        assert!(classify_domain(x, DEFAULT_DOMAIN_TOL).is_valid());
        let f = eval_f(x).expect("valid");
        assert!((f - c).abs() <= 1e-15 * c * c + 1e-8, "F({}) = {f}, c = {c}", r.offset());
    }
});
