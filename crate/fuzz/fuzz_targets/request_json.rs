//! Decode a request envelope from JSON, run it when cheap, and check the
//! output survives a JSON round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sixtrig::commands::execute;
use sixtrig::envelope::{Envelope, Request};

const MAX_INPUT: usize = 4096;
const MAX_FUZZ_POINTS: usize = 20_000;

fn cheap(req: &Request) -> bool {
    match req {
        // never touch the filesystem from the fuzzer
        Request::Samples { .. } => false,
        Request::Verify { points, .. } | Request::Scan { points, .. } => *points <= MAX_FUZZ_POINTS,
        Request::Solve { k_range, .. } => {
            sixtrig::input::parse_k_range(k_range).map(|r| r.end().saturating_sub(*r.start()) <= 1_000).unwrap_or(true)
        }
        Request::Classify { .. } | Request::Motivating => true,
    }
}

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT {
        return;
    }
    let Ok(req) = serde_json::from_slice::<Request>(data) else {
        return;
    };
    let _ = serde_json::from_slice::<Envelope>(data);
    if !cheap(&req) {
        return;
    }
    let env = execute(&req);
    assert_eq!(env.command, req.name());
    assert_eq!(env.result.is_some(), env.error.is_none());
    let text = serde_json::to_string(&env).expect("envelopes serialize");
    let back: Envelope = serde_json::from_str(&text).expect("envelopes parse back");
    assert_eq!(back, env);
});
