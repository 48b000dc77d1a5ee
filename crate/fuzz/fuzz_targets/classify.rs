#![no_main]

use libfuzzer_sys::fuzz_target;
use sixtrig::quadratic::{both_roots_inside, locate, one_inside_one_outside, DEFAULT_BOUNDARY_TOL};
use sixtrig::{Interval, Quadratic};

fuzz_target!(|data: [u8; 40]| {
    let v: Vec<f64> = data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let (Ok(q), Ok(iv)) = (Quadratic::new(v[0], v[1], v[2]), Interval::new(v[3], v[4])) else {
        return;
    };
    let _ = locate(&q, &iv, DEFAULT_BOUNDARY_TOL);
    let _ = locate(&q, &iv, 0.0);
    assert!(!(both_roots_inside(&q, &iv) && one_inside_one_outside(&q, &iv)));
});
