//! Closed-form solution sets of `F(x) = c`.
//!
//! Pipeline: deflated quadratic in `S` → roots `r` that `S` can actually
//! take (`|r| ≤ √2`, `r ≠ ±1`) → `cos(x − π/4) = r/√2` → residue classes
//! `x ≡ π/4 ± φ (mod 2π)` with `φ = arccos(r/√2)`.

use std::f64::consts::{FRAC_PI_4, SQRT_2, TAU};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadratic::{roots, Interval, Quadratic};
use crate::reduction::{deflated_for, ReductionError, Target};
use crate::trig::{classify_domain, Radians, DEFAULT_DOMAIN_TOL};

/// Residues closer than this (circularly) are merged.
pub const RESIDUE_DEDUP_TOL: f64 = 1e-12;

/// A real-target root within this distance of `±1` is the spurious root
/// (or the pole) and is dropped.
pub const UNIT_ROOT_TOL: f64 = 1e-12;

/// Roots within this distance of `±√2` are snapped onto the endpoint, which
/// is attained (at `x = π/4` and `x = 5π/4`). Covers rounding in the root.
pub const ENDPOINT_SLACK: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("S-value {0} lies outside [-sqrt2, sqrt2]")]
    RootOutOfRange(f64),
    #[error("integer target {n}: {detail}")]
    CaseStructure { n: i64, detail: String },
    #[error("target {0} is attained only within the excluded band around the poles at multiples of pi/2")]
    Unresolvable(f64),
}

/// A root of the deflated quadratic that `S = sin x + cos x` can take.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleRoot {
    pub r: f64,
    /// `arccos(r/√2)` in `[0, π]`.
    pub phi: f64,
    /// 2 when the quadratic has a double root.
    pub multiplicity: u8,
}

/// `{offset + 2Kπ : K ∈ ℤ}` with `offset ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ResidueClass {
    offset: f64,
}

impl ResidueClass {
    pub const PERIOD: f64 = TAU;

    /// Reduce any finite angle into `[0, 2π)`.
    pub fn new(angle: f64) -> Self {
        let mut offset = angle.rem_euclid(TAU);
        if offset >= TAU {
            offset = 0.0;
        }
        ResidueClass { offset }
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Representative for a given `K`.
    pub fn at(&self, k: i64) -> f64 {
        (k as f64).mul_add(TAU, self.offset)
    }

    /// Distance on the circle of circumference `2π`.
    pub fn circular_distance(&self, angle: f64) -> f64 {
        let d = (angle - self.offset).rem_euclid(TAU);
        d.min(TAU - d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub target: Target,
    pub roots: Vec<AdmissibleRoot>,
    /// Ascending by offset, pairwise distinct.
    pub residues: Vec<ResidueClass>,
}

impl SolutionFamily {
    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

/// Which case an integer target falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegerCase {
    /// `−1 ≤ n ≤ 6`
    NoSolution,
    /// `n = −2`: the quadratic is `t(t + 1)` and only `S = 0` survives.
    MinusTwo,
    /// `n ≤ −3`: the `+√` root is admissible.
    LowerBranch,
    /// `n ≥ 7`: the `−√` root is admissible.
    UpperBranch,
}

pub fn integer_case(n: i64) -> IntegerCase {
    match n {
        -2 => IntegerCase::MinusTwo,
        -1..=6 => IntegerCase::NoSolution,
        n if n <= -3 => IntegerCase::LowerBranch,
        _ => IntegerCase::UpperBranch,
    }
}

/// `((n + 1) ± √(n² − 2n − 7)) / 2`, the two roots written in `n`.
/// Returns `None` when the radicand is negative.
pub fn integer_root_formulas(n: i64) -> Option<(f64, f64)> {
    let nf = n as f64;
    let radicand = nf * nf - 2.0 * nf - 7.0;
    if radicand < 0.0 {
        return None;
    }
    let root = radicand.sqrt();
    Some(((nf + 1.0 + root) / 2.0, (nf + 1.0 - root) / 2.0))
}

/// `arccos(r/√2)`, the phase offset for `S = r`.
pub fn phi_of_root(r: f64) -> Result<f64, SolverError> {
    if r.is_nan() || r.abs() > SQRT_2 + ENDPOINT_SLACK {
        return Err(SolverError::RootOutOfRange(r));
    }
    Ok((r / SQRT_2).clamp(-1.0, 1.0).acos())
}

fn deflated(t: &Target) -> Result<Quadratic, SolverError> {
    Ok(deflated_for(t)?)
}

pub fn admissible_roots(t: &Target) -> Result<Vec<AdmissibleRoot>, SolverError> {
    let quad = deflated(t)?;
    let all = roots(&quad);
    let multiplicity = if all.len() == 1 { 2 } else { 1 };
    let mut out = Vec::with_capacity(all.len());
    for r in all {
        let spurious = match t {
            // f(−1) = 4 − 2m vanishes only for m = 2, where −1 is exact.
            Target::Integer(n) => *n == -2 && r == -1.0,
            Target::Real(_) => (r + 1.0).abs() <= UNIT_ROOT_TOL || (r - 1.0).abs() <= UNIT_ROOT_TOL,
        };
        if spurious || !r.is_finite() || r.abs() > SQRT_2 + ENDPOINT_SLACK {
            continue;
        }
        // arccos is flat at ±1, so a root a few ulps inside ±√2 would split
        // the single boundary residue into two; snap it onto the endpoint.
        let r = if (r.abs() - SQRT_2).abs() <= ENDPOINT_SLACK { SQRT_2.copysign(r) } else { r };
        // Normalise -0.0 from the stable formula.
        let r = if r == 0.0 { 0.0 } else { r };
        out.push(AdmissibleRoot { r, phi: phi_of_root(r)?, multiplicity });
    }
    Ok(out)
}

fn residues_for(roots: &[AdmissibleRoot]) -> Vec<ResidueClass> {
    let mut residues: Vec<ResidueClass> = roots
        .iter()
        .flat_map(|root| [ResidueClass::new(FRAC_PI_4 + root.phi), ResidueClass::new(FRAC_PI_4 - root.phi)])
        .collect();
    residues.sort_by(|a, b| a.offset.total_cmp(&b.offset));
    let mut unique: Vec<ResidueClass> = Vec::with_capacity(residues.len());
    for res in residues {
        if unique.iter().all(|u| u.circular_distance(res.offset) > RESIDUE_DEDUP_TOL) {
            unique.push(res);
        }
    }
    unique
}

fn evaluable(angle: f64) -> bool {
    Radians::new(angle).is_ok_and(|x| classify_domain(x, DEFAULT_DOMAIN_TOL).is_valid())
}

/// For large `|c|` the solutions crowd the poles (`x ≈ 2/c` from the
/// nearest multiple of `π/2`). Residues that land in the band `eval_f`
/// refuses are dropped; if nothing is left for a target that is in the
/// range of `F`, that is reported rather than returned as an empty family.
pub fn solve(t: Target) -> Result<SolutionFamily, SolverError> {
    let roots = admissible_roots(&t)?;
    family_from_roots(t, roots)
}

fn family_from_roots(t: Target, mut roots: Vec<AdmissibleRoot>) -> Result<SolutionFamily, SolverError> {
    roots.retain(|root| evaluable(FRAC_PI_4 + root.phi) || evaluable(FRAC_PI_4 - root.phi));
    let residues: Vec<ResidueClass> = residues_for(&roots).into_iter().filter(|r| evaluable(r.offset)).collect();
    let c = t.c();
    let in_range = c <= 1.0 - 2.0 * SQRT_2 || c >= 2.0 + 3.0 * SQRT_2;
    if residues.is_empty() && in_range {
        return Err(SolverError::Unresolvable(c));
    }
    Ok(SolutionFamily { target: t, roots, residues })
}

pub fn solve_real(c: f64) -> Result<SolutionFamily, SolverError> {
    solve(Target::real(c)?)
}

/// Solve for an integer target and check the result against the integer
/// case structure: empty for `−1 ≤ n ≤ 6`, the single root `S = 0` for
/// `n = −2`, and otherwise exactly one root given by the closed formula
/// (`+√` branch for `n ≤ −3`, `−√` branch for `n ≥ 7`).
pub fn solve_integer(n: i64) -> Result<SolutionFamily, SolverError> {
    let roots = admissible_roots(&Target::Integer(n))?;
    let fail = |detail: String| Err(SolverError::CaseStructure { n, detail });
    let found: Vec<f64> = roots.iter().map(|r| r.r).collect();
    match integer_case(n) {
        IntegerCase::NoSolution => {
            if !found.is_empty() {
                return fail(format!("expected no admissible root, found {found:?}"));
            }
        }
        IntegerCase::MinusTwo => {
            if found != [0.0] {
                return fail(format!("expected the single root 0, found {found:?}"));
            }
        }
        case @ (IntegerCase::LowerBranch | IntegerCase::UpperBranch) => {
            let Some((plus, minus)) = integer_root_formulas(n) else {
                return fail("negative radicand".into());
            };
            let expected = if case == IntegerCase::LowerBranch { plus } else { minus };
            // The formula's own rounding grows with |n|.
            let tol = 1e-12_f64.max(8.0 * f64::EPSILON * (n as f64).abs());
            match found.as_slice() {
                [r] if (r - expected).abs() <= tol => {}
                _ => return fail(format!("expected the single root {expected}, found {found:?}")),
            }
        }
    }
    family_from_roots(Target::Integer(n), roots)
}

/// All solutions `offset + 2Kπ` for `K` in `k_range`, ascending.
pub fn enumerate(fam: &SolutionFamily, k_range: RangeInclusive<i64>) -> Vec<Radians> {
    let mut xs: Vec<f64> = k_range.flat_map(|k| fam.residues.iter().map(move |res| res.at(k))).collect();
    xs.sort_by(f64::total_cmp);
    xs.into_iter().filter_map(|x| Radians::new(x).ok()).collect()
}

/// Solutions of `F(|x|) = c`: `x` solves it iff `|x|` is a positive
/// solution of `F(y) = c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsSolution {
    pub family: SolutionFamily,
}

impl AbsSolution {
    /// Positive solutions `y ≤ bound` of `F(y) = c`, ascending.
    pub fn positive_within(&self, bound: f64) -> Vec<Radians> {
        if bound.is_nan() || bound <= 0.0 || self.family.is_empty() {
            return Vec::new();
        }
        let k_max = (bound / TAU).ceil() as i64;
        enumerate(&self.family, 0..=k_max).into_iter().filter(|y| y.value() > 0.0 && y.value() <= bound).collect()
    }

    /// Every solution in `[−bound, bound]`, ascending; closed under negation.
    pub fn within(&self, bound: f64) -> Vec<Radians> {
        let positive = self.positive_within(bound);
        let mut xs: Vec<Radians> = positive
            .iter()
            .rev()
            .map(|y| Radians::new(-y.value()).expect("finite"))
            .chain(positive.iter().copied())
            .collect();
        xs.dedup();
        xs
    }
}

pub fn solve_abs(c: f64) -> Result<AbsSolution, SolverError> {
    Ok(AbsSolution { family: solve_real(c)? })
}

/// Critical values of `m = −c` where the deflated quadratic's roots cross
/// the edges of `[−√2, √2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `f(−√2) > 0` iff `m` is below this: `(4 + √2)/(1 + √2)`.
    pub m_upper_endpoint: f64,
    /// `f(√2) > 0` iff `m` is above this: `−(4 − √2)/(√2 − 1)`.
    pub m_lower_endpoint: f64,
    /// Vertex inside iff `vertex_m_lo < m < vertex_m_hi` (`1 ∓ 2√2`).
    pub vertex_m_lo: f64,
    pub vertex_m_hi: f64,
    /// Zero discriminant: `m = −1 ± 2√2`.
    pub double_root_m: (f64, f64),
    /// Range of `F` is `(−∞, c_max_lower] ∪ [c_min_upper, ∞)`.
    pub c_max_lower: f64,
    pub c_min_upper: f64,
}

/// `f(t) = t² + (m − 1)t + (2 − m) = (t² − t + 2) + m(t − 1)`; solve
/// `f(edge) = 0` for `m`.
fn m_crossing(edge: f64) -> f64 {
    -(edge * edge - edge + 2.0) / (edge - 1.0)
}

pub fn thresholds() -> Thresholds {
    let iv = Interval::new(-SQRT_2, SQRT_2).expect("nonempty");
    // vertex −(m − 1)/2 ∈ (lo, hi)  ⇔  1 − 2·hi < m < 1 − 2·lo
    let vertex_m_lo = 1.0 - 2.0 * iv.hi();
    let vertex_m_hi = 1.0 - 2.0 * iv.lo();
    // (m − 1)² − 4(2 − m) = m² + 2m − 7
    let disc_roots = {
        let quad = Quadratic::new(1.0, 2.0, -7.0).expect("monic");
        let r = roots(&quad);
        (r[0], r[1])
    };
    // c = −m at the double root −(m − 1)/2 = 1 − √2, and at S = √2.
    let c_max_lower = -disc_roots.1;
    let c_min_upper = -m_crossing(iv.hi());
    Thresholds {
        m_upper_endpoint: m_crossing(iv.lo()),
        m_lower_endpoint: m_crossing(iv.hi()),
        vertex_m_lo,
        vertex_m_hi,
        double_root_m: disc_roots,
        c_max_lower,
        c_min_upper,
    }
}
