//! Evaluation of the six-term sum
//! `F(x) = sin x + cos x + tan x + cot x + sec x + csc x`
//! together with the identities the solver is built on.
//!
//! `F` has period `2π` and is undefined on the lattice `{Kπ/2}`: `csc` and
//! `cot` blow up at `Kπ`, `sec` and `tan` at `Kπ + π/2`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distance (radians) to the exclusion lattice below which a point is singular.
pub const DEFAULT_DOMAIN_TOL: f64 = 1e-12;

/// Points within `NEAR_SINGULAR_FACTOR * tol` of the lattice are flagged
/// [`DomainStatus::NearSingular`] and refused by [`eval_f`].
pub const NEAR_SINGULAR_FACTOR: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum TrigError {
    #[error("angle is not finite: {0}")]
    NonFinite(f64),
    #[error("x = {x} is outside the domain of F ({status:?})")]
    Singular { x: f64, status: DomainStatus },
}

/// An angle in radians. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Radians(f64);

impl Radians {
    pub fn new(value: f64) -> Result<Self, TrigError> {
        if value.is_finite() {
            Ok(Radians(value))
        } else {
            Err(TrigError::NonFinite(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Radians {
    type Error = TrigError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Radians::new(value)
    }
}

impl From<Radians> for f64 {
    fn from(r: Radians) -> f64 {
        r.0
    }
}

impl fmt::Display for Radians {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DomainStatus {
    Valid,
    /// Within tolerance of `Kπ`, where `sin x = 0`.
    SingularSin,
    /// Within tolerance of `Kπ + π/2`, where `cos x = 0`.
    SingularCos,
    /// Outside the singular band but close enough to the lattice that `F`
    /// is badly conditioned.
    NearSingular {
        distance: f64,
    },
}

impl DomainStatus {
    pub fn is_valid(self) -> bool {
        matches!(self, DomainStatus::Valid)
    }
}

/// Solution set of `cos x = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CosSolutionFamily {
    NoSolution,
    /// `x = (2K + 1)π`
    OddMultiples,
    /// `x = 2Kπ`
    EvenMultiples,
    /// `x = 2Kπ ± θ` with `0 < θ < π` and `cos θ = b`.
    PlusMinus {
        theta: f64,
    },
}

/// Index and distance of the lattice point `kπ/2` nearest to `x`.
fn nearest_lattice(x: f64) -> (f64, f64) {
    let k = (x / FRAC_PI_2).round();
    let d = k.mul_add(-FRAC_PI_2, x).abs();
    (k, d)
}

pub fn classify_domain(x: Radians, tol: f64) -> DomainStatus {
    debug_assert!(tol > 0.0);
    let (k, d) = nearest_lattice(x.0);
    if d <= tol {
        if k.rem_euclid(2.0) == 0.0 {
            DomainStatus::SingularSin
        } else {
            DomainStatus::SingularCos
        }
    } else if d <= NEAR_SINGULAR_FACTOR * tol {
        DomainStatus::NearSingular { distance: d }
    } else {
        DomainStatus::Valid
    }
}

/// Six-term sum from one `sin` and one `cos` evaluation, no domain check.
#[inline]
pub(crate) fn f_raw(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    s + c + 1.0 / c + 1.0 / s + s / c + c / s
}

/// Evaluate `F(x)` at the default domain tolerance.
pub fn eval_f(x: Radians) -> Result<f64, TrigError> {
    eval_f_with_tol(x, DEFAULT_DOMAIN_TOL)
}

pub fn eval_f_with_tol(x: Radians, tol: f64) -> Result<f64, TrigError> {
    match classify_domain(x, tol) {
        DomainStatus::Valid => Ok(f_raw(x.0)),
        status => Err(TrigError::Singular { x: x.0, status }),
    }
}

/// Derivative of `F`, used by the oracle to pin down tangent points.
#[inline]
pub(crate) fn f_prime_raw(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let (sec, csc) = (1.0 / c, 1.0 / s);
    // d/dx: cos - sin + sec tan - csc cot + sec^2 - csc^2
    c - s + sec * sec * s - csc * csc * c + sec * sec - csc * csc
}

/// `S = sin x + cos x`, bounded by `±√2`.
pub fn sum_s(x: Radians) -> f64 {
    let (s, c) = x.0.sin_cos();
    s + c
}

/// `√2·cos(x − π/4)`, the phase form of [`sum_s`].
pub fn sum_s_phase_form(x: Radians) -> f64 {
    SQRT_2 * (x.0 - FRAC_PI_4).cos()
}

/// `sin x · cos x` written in terms of `S`.
pub fn half_product(s: f64) -> f64 {
    (s * s - 1.0) / 2.0
}

pub fn solve_cos_eq(b: f64) -> CosSolutionFamily {
    if !(-1.0..=1.0).contains(&b) {
        CosSolutionFamily::NoSolution
    } else if b == -1.0 {
        CosSolutionFamily::OddMultiples
    } else if b == 1.0 {
        CosSolutionFamily::EvenMultiples
    } else {
        CosSolutionFamily::PlusMinus { theta: b.acos() }
    }
}
