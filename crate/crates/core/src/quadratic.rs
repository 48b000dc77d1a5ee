//! Real quadratics `f(t) = at² + bt + c` and where their roots sit relative
//! to an open interval `(lo, hi)`.
//!
//! Two independent routes are exposed: the sign predicates
//! [`both_roots_inside`] and [`one_inside_one_outside`], which never compute
//! a root, and [`locate`], which computes roots and places them directly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Guard band around interval endpoints used by [`locate`] by default.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-12;

/// Relative size of `|b² − 4ac|` (against `b² + 4|ac|`) below which the
/// discriminant is treated as zero and a single double root is reported.
pub const DISCRIMINANT_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LocatorError {
    #[error("leading coefficient must be nonzero and all coefficients finite (a = {a}, b = {b}, c = {c})")]
    Degenerate { a: f64, b: f64, c: f64 },
    #[error("interval must satisfy lo < hi with finite endpoints (lo = {lo}, hi = {hi})")]
    EmptyInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    a: f64,
    b: f64,
    c: f64,
}

impl Quadratic {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, LocatorError> {
        if a == 0.0 || !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(LocatorError::Degenerate { a, b, c });
        }
        Ok(Quadratic { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.a * t + self.b) * t + self.c
    }

    pub fn vertex(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }

    /// Same quadratic multiplied through by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self, LocatorError> {
        Quadratic::new(alpha * self.a, alpha * self.b, alpha * self.c)
    }

    fn discriminant_is_negligible(&self, d: f64) -> bool {
        let scale = self.b * self.b + 4.0 * (self.a * self.c).abs();
        d.abs() <= DISCRIMINANT_REL_TOL * scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, LocatorError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(LocatorError::EmptyInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Strict membership in the open interval.
    pub fn contains(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Inside,
    Outside,
    OnBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootLocation {
    NoRealRoots,
    DoubleRoot { t: f64, inside: bool },
    TwoRoots { p1: f64, p2: f64, place1: Placement, place2: Placement },
}

impl RootLocation {
    /// Same variant and placements; root values are not compared.
    pub fn same_classification(&self, other: &RootLocation) -> bool {
        match (self, other) {
            (RootLocation::NoRealRoots, RootLocation::NoRealRoots) => true,
            (RootLocation::DoubleRoot { inside: a, .. }, RootLocation::DoubleRoot { inside: b, .. }) => a == b,
            (
                RootLocation::TwoRoots { place1: a1, place2: a2, .. },
                RootLocation::TwoRoots { place1: b1, place2: b2, .. },
            ) => a1 == b1 && a2 == b2,
            _ => false,
        }
    }
}

/// `b² − 4ac`.
pub fn discriminant(q: &Quadratic) -> f64 {
    q.b * q.b - 4.0 * q.a * q.c
}

/// Real roots in ascending order: empty, one (double) root, or two roots.
///
/// For two roots the larger-magnitude root comes from
/// `q* = −(b + sign(b)·√D)/2` and the other from `c/q*`, so neither
/// subtracts nearly equal quantities. `sign(0)` is taken as `+1`.
pub fn roots(q: &Quadratic) -> Vec<f64> {
    let d = discriminant(q);
    if !d.is_finite() {
        // b² or 4ac overflowed. Scaling by a power of two leaves the roots
        // unchanged; a root beyond f64 range comes back as ±inf.
        let big = q.a.abs().max(q.b.abs()).max(q.c.abs());
        let e = big.log2().ceil() as i32;
        // 2^-1024 is subnormal and powi would round it to zero; split it.
        let (f1, f2) = (2f64.powi(-e / 2), 2f64.powi(-(e - e / 2)));
        let scaled = Quadratic { a: q.a * f1 * f2, b: q.b * f1 * f2, c: q.c * f1 * f2 };
        return roots(&scaled);
    }
    if q.discriminant_is_negligible(d) {
        return vec![q.vertex()];
    }
    if d < 0.0 {
        return Vec::new();
    }
    let sign = if q.b < 0.0 { -1.0 } else { 1.0 };
    let qstar = -(q.b + sign * d.sqrt()) / 2.0;
    let r1 = qstar / q.a;
    // qstar == 0 only when b == 0 and D == 0, which the negligible branch catches.
    let r2 = q.c / qstar;
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

/// Both roots distinct, real, and strictly inside `(lo, hi)`.
///
/// Evaluates the three sign conditions (positive discriminant,
/// `a·f(lo) > 0` and `a·f(hi) > 0`, vertex strictly inside) without
/// computing a root.
pub fn both_roots_inside(q: &Quadratic, iv: &Interval) -> bool {
    let conditions = root_conditions(q, iv);
    conditions.positive_discriminant && conditions.endpoints_same_side && conditions.vertex_inside
}

/// Exactly one root strictly inside `(lo, hi)` and the other outside
/// `[lo, hi]`, decided by `f(lo)·f(hi) < 0`.
pub fn one_inside_one_outside(q: &Quadratic, iv: &Interval) -> bool {
    q.eval(iv.lo) * q.eval(iv.hi) < 0.0
}

/// Truth values of the individual sign conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConditions {
    pub positive_discriminant: bool,
    pub endpoints_same_side: bool,
    pub vertex_inside: bool,
    /// Sign of `f(lo)·f(hi)`: −1, 0 or +1.
    pub endpoint_product_sign: i8,
}

pub fn root_conditions(q: &Quadratic, iv: &Interval) -> RootConditions {
    let (f_lo, f_hi) = (q.eval(iv.lo), q.eval(iv.hi));
    let product = f_lo * f_hi;
    RootConditions {
        positive_discriminant: discriminant(q) > 0.0,
        endpoints_same_side: q.a * f_lo > 0.0 && q.a * f_hi > 0.0,
        vertex_inside: iv.contains(q.vertex()),
        endpoint_product_sign: if product > 0.0 {
            1
        } else if product < 0.0 {
            -1
        } else {
            0
        },
    }
}

fn place(t: f64, iv: &Interval, boundary_tol: f64) -> Placement {
    if (t - iv.lo).abs() <= boundary_tol || (t - iv.hi).abs() <= boundary_tol {
        Placement::OnBoundary
    } else if iv.contains(t) {
        Placement::Inside
    } else {
        Placement::Outside
    }
}

pub fn locate(q: &Quadratic, iv: &Interval, boundary_tol: f64) -> RootLocation {
    debug_assert!(boundary_tol >= 0.0);
    match roots(q).as_slice() {
        [] => RootLocation::NoRealRoots,
        &[t] => RootLocation::DoubleRoot { t, inside: place(t, iv, boundary_tol) == Placement::Inside },
        &[p1, p2] => {
            RootLocation::TwoRoots { p1, p2, place1: place(p1, iv, boundary_tol), place2: place(p2, iv, boundary_tol) }
        }
        _ => unreachable!("a quadratic has at most two roots"),
    }
}
