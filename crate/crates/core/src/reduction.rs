//! Reduction of `F(x) = c` to a polynomial condition on `S = sin x + cos x`.
//!
//! Multiplying through by `sin x · cos x = (S² − 1)/2` gives the cubic
//! `S³ + mS² + S + (2 − m) = 0` with `m = −c`. `S = −1` is always a root
//! of it and is spurious (it corresponds to `sin x cos x = 0`), so the cubic
//! is deflated by `(S + 1)` to the quadratic `S² + (m − 1)S + (2 − m)`.
//!
//! Integer targets carry exact `i128` coefficients through both steps.

use std::fmt::Debug;

use num_traits::{Num, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadratic::{LocatorError, Quadratic};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("synthetic division by (S + 1) left remainder {remainder}")]
    NonzeroRemainder { remainder: String },
    #[error("S + 2/(S - 1) has a pole at S = 1")]
    Pole,
    #[error("deflated quadratic is degenerate: {0}")]
    Degenerate(#[from] LocatorError),
    #[error("target must be finite, got {0}")]
    NonFiniteTarget(f64),
}

/// Right-hand side `c` of `F(x) = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Target {
    Integer(i64),
    Real(f64),
}

impl Target {
    pub fn real(c: f64) -> Result<Self, ReductionError> {
        if c.is_finite() {
            Ok(Target::Real(c))
        } else {
            Err(ReductionError::NonFiniteTarget(c))
        }
    }

    pub fn c(&self) -> f64 {
        match *self {
            Target::Integer(n) => n as f64,
            Target::Real(c) => c,
        }
    }

    /// `m = −c`.
    pub fn m(&self) -> f64 {
        -self.c()
    }

    pub fn as_integer(&self) -> Option<i64> {
        match *self {
            Target::Integer(n) => Some(n),
            Target::Real(_) => None,
        }
    }
}

/// Scalar types the reduction can be carried out in.
pub trait Coefficient: Num + Copy + Debug + ToPrimitive {
    /// Whether a synthetic-division remainder counts as zero, given the
    /// largest coefficient magnitude involved.
    fn remainder_is_zero(remainder: Self, scale: Self) -> bool;
}

impl Coefficient for i128 {
    fn remainder_is_zero(remainder: Self, _scale: Self) -> bool {
        remainder == 0
    }
}

impl Coefficient for f64 {
    fn remainder_is_zero(remainder: Self, scale: Self) -> bool {
        // 1 - (m - 1) and 2 - m may round differently
        remainder.abs() <= 4.0 * f64::EPSILON * (1.0 + scale.abs())
    }
}

/// `[1, m, 1, 2 − m]`, highest degree first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs<T> {
    coeffs: [T; 4],
}

impl<T: Coefficient> CubicCoeffs<T> {
    pub fn from_m(m: T) -> Self {
        let two = T::one() + T::one();
        CubicCoeffs { coeffs: [T::one(), m, T::one(), two - m] }
    }

    pub fn coeffs(&self) -> [T; 4] {
        self.coeffs
    }

    pub fn eval(&self, s: T) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, &k| acc * s + k)
    }
}

/// Monic quadratic `t² + (m − 1)t + (2 − m)` left after deflation,
/// in the coefficient type of the cubic it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeflatedQuadratic<T> {
    pub coeffs: [T; 3],
}

impl<T: Coefficient> DeflatedQuadratic<T> {
    pub fn to_quadratic(&self) -> Result<Quadratic, ReductionError> {
        let [a, b, c] = self.coeffs.map(|k| k.to_f64().unwrap_or(f64::NAN));
        Ok(Quadratic::new(a, b, c)?)
    }

    pub fn eval(&self, t: T) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, &k| acc * t + k)
    }
}

pub fn reduce(t: &Target) -> CubicCoeffs<f64> {
    CubicCoeffs::from_m(t.m())
}

/// Exact reduction for an integer target `n` (`m = −n`).
pub fn reduce_integer(n: i64) -> CubicCoeffs<i128> {
    CubicCoeffs::from_m(-(n as i128))
}

/// Synthetic division of the cubic by `(S + 1)`.
///
/// The remainder is computed rather than assumed; a nonzero remainder means
/// the coefficients were not of the `[1, m, 1, 2 − m]` form. Exact for
/// integer coefficients; floating coefficients allow a few ulps.
pub fn deflate<T: Coefficient>(cu: &CubicCoeffs<T>) -> Result<DeflatedQuadratic<T>, ReductionError> {
    let root = T::zero() - T::one();
    let [k0, k1, k2, k3] = cu.coeffs;
    let q0 = k0;
    let q1 = k1 + root * q0;
    let q2 = k2 + root * q1;
    let remainder = k3 + root * q2;
    if !T::remainder_is_zero(remainder, k1) {
        return Err(ReductionError::NonzeroRemainder { remainder: format!("{remainder:?}") });
    }
    Ok(DeflatedQuadratic { coeffs: [q0, q1, q2] })
}

/// The deflated quadratic for a target, exact for integers.
pub fn deflated_for(t: &Target) -> Result<Quadratic, ReductionError> {
    match *t {
        Target::Integer(n) => deflate(&reduce_integer(n))?.to_quadratic(),
        Target::Real(c) => {
            if !c.is_finite() {
                return Err(ReductionError::NonFiniteTarget(c));
            }
            deflate(&reduce(t))?.to_quadratic()
        }
    }
}

/// `S + 2/(S − 1)`, the value of `F` expressed through `S`.
///
/// A root `S` of the deflated quadratic satisfies `g_of_s(S) = c`.
pub fn g_of_s(s: f64) -> Result<f64, ReductionError> {
    if s == 1.0 {
        return Err(ReductionError::Pole);
    }
    Ok(s + 2.0 / (s - 1.0))
}
