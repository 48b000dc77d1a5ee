//! Machine-readable output schema shared by every command.
//!
//! Every run produces one [`Envelope`]: the command name, the echoed
//! [`Request`], a [`Status`], and either a [`Payload`] or an error message.
//! Feeding `inputs` back through [`crate::commands::execute`] reproduces the
//! same payload.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::oracle::{Comparison, ScanReport};
use crate::quadratic::{Interval, Quadratic, RootConditions, RootLocation};
use crate::solver::IntegerCase;

pub const DEFAULT_K_RANGE: &str = "0..0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Request {
    Solve { target: String, integer_mode: bool, k_range: String },
    Verify { target: String, integer_mode: bool, tol: f64, points: usize, exclusion: f64 },
    Scan { target: String, points: usize, exclusion: f64 },
    Classify { a: f64, b: f64, c: f64, lo: f64, hi: f64 },
    Samples { from: f64, to: f64, step: f64, out: String },
    Motivating,
}

impl Request {
    pub fn name(&self) -> &'static str {
        match self {
            Request::Solve { .. } => "solve",
            Request::Verify { .. } => "verify",
            Request::Scan { .. } => "scan",
            Request::Classify { .. } => "classify",
            Request::Samples { .. } => "samples",
            Request::Motivating => "motivating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NoSolution,
    Error,
}

impl Status {
    /// 0 ok, 2 no solution, 1 error.
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::NoSolution => 2,
            Status::Error => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Request,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Payload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// An angle as an exact double, a 17-significant-digit decimal string, a
/// multiple of `π`, and a symbolic form where one is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleOut {
    pub radians: f64,
    pub decimal: String,
    pub over_pi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl AngleOut {
    pub fn new(radians: f64) -> Self {
        AngleOut { radians, decimal: sig17(radians), over_pi: radians / PI, exact: pi_fraction(radians) }
    }

    pub fn with_form(radians: f64, form: String) -> Self {
        let mut a = AngleOut::new(radians);
        if a.exact.is_none() {
            a.exact = Some(form);
        }
        a
    }
}

/// Positional decimal with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.16}");
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `"3pi/4"`-style label when `x` is a small rational multiple of `π`.
pub fn pi_fraction(x: f64) -> Option<String> {
    for den in [1i64, 2, 3, 4, 6, 8, 12] {
        let k = x / PI * den as f64;
        let rounded = k.round();
        if (k - rounded).abs() <= 1e-12 * rounded.abs().max(1.0) {
            let num = rounded as i64;
            let g = gcd(num.unsigned_abs(), den as u64) as i64;
            let (num, den) = (num / g.max(1), den / g.max(1));
            let head = match num {
                0 => return Some("0".into()),
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                n => format!("{n}pi"),
            };
            return Some(if den == 1 { head } else { format!("{head}/{den}") });
        }
    }
    None
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetEcho {
    pub text: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integer: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootOut {
    /// Name used in residue forms, e.g. `phi1`.
    pub label: String,
    pub r: f64,
    pub phi: AngleOut,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionOut {
    pub k: i64,
    pub x: AngleOut,
    /// `F(x) − c`; absent if `x` fell outside the evaluable domain.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvePayload {
    pub target: TargetEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integer_case: Option<IntegerCase>,
    pub roots: Vec<RootOut>,
    pub residues: Vec<AngleOut>,
    pub k_range: (i64, i64),
    pub solutions: Vec<SolutionOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub target: TargetEcho,
    pub residues: Vec<AngleOut>,
    pub numeric_roots: Vec<AngleOut>,
    pub tol: f64,
    pub matched: bool,
    pub comparison: Comparison,
    pub diagnostics: Vec<String>,
    pub notes: Vec<String>,
    /// Check of the commonly quoted `x = 2Kπ ± π/4` family, run for `c = −2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quoted_family: Option<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPayload {
    pub target: TargetEcho,
    pub report: ScanReport,
    pub analytic_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyPayload {
    pub quadratic: Quadratic,
    pub interval: Interval,
    pub discriminant: f64,
    pub location: RootLocation,
    pub conditions: RootConditions,
    pub both_roots_inside: bool,
    pub one_inside_one_outside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplesPayload {
    pub out: String,
    pub rows: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsSolutionOut {
    pub x: AngleOut,
    /// `F(|x|) − c`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotivatingPayload {
    pub target: f64,
    pub r: f64,
    pub phi: AngleOut,
    pub cos_phi: f64,
    pub branches: Vec<String>,
    pub bound: f64,
    pub solutions: Vec<AbsSolutionOut>,
    pub smallest_positive: AngleOut,
    pub closed_under_negation: bool,
    pub all_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Solve(SolvePayload),
    Verify(VerifyPayload),
    Scan(ScanPayload),
    Classify(ClassifyPayload),
    Samples(SamplesPayload),
    Motivating(MotivatingPayload),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_digits() {
        assert_eq!(sig17(std::f64::consts::FRAC_PI_4), "0.78539816339744828");
        assert_eq!(sig17(6.0), "6.0000000000000000");
        assert_eq!(sig17(-1.27354496547369), "-1.2735449654736899");
        assert_eq!(sig17(123.5), "123.50000000000000");
        assert_eq!(sig17(0.0), "0.0000000000000000");
        for x in [std::f64::consts::PI, 1e-7, -3.3e5, 2.0 + 3.0 * std::f64::consts::SQRT_2] {
            let s = sig17(x);
            let digits = s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len();
            assert_eq!(digits, 17, "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn pi_fractions() {
        assert_eq!(pi_fraction(3.0 * PI / 4.0).as_deref(), Some("3pi/4"));
        assert_eq!(pi_fraction(7.0 * PI / 4.0).as_deref(), Some("7pi/4"));
        assert_eq!(pi_fraction(PI / 4.0).as_deref(), Some("pi/4"));
        assert_eq!(pi_fraction(-PI / 2.0).as_deref(), Some("-pi/2"));
        assert_eq!(pi_fraction(2.0 * PI).as_deref(), Some("2pi"));
        assert_eq!(pi_fraction(0.0).as_deref(), Some("0"));
        assert_eq!(pi_fraction(1.27354496547369), None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Ok.exit_code(), 0);
        assert_eq!(Status::NoSolution.exit_code(), 2);
        assert_eq!(Status::Error.exit_code(), 1);
    }

    #[test]
    fn request_json_shape() {
        let r = Request::Solve { target: "-3".into(), integer_mode: false, k_range: "0..0".into() };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["command"], "solve");
        assert_eq!(serde_json::from_value::<Request>(v).unwrap(), r);
        let m: Request = serde_json::from_str(r#"{"command":"motivating"}"#).unwrap();
        assert_eq!(m, Request::Motivating);
    }
}
