//! Numerical verification of closed-form solution sets.
//!
//! Nothing here uses the `S`-reduction. `F` is sampled directly on its four
//! continuity branches `(kπ/2, (k+1)π/2)`, level crossings are bisected,
//! and tangential touches (where `F − c` does not change sign) are located
//! as zeros of `F'`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::pi_fraction;
use crate::solver::{ResidueClass, SolutionFamily};
use crate::trig::{f_prime_raw, f_raw, Radians};

pub const DEFAULT_POINTS: usize = 1_000_000;
pub const DEFAULT_EXCLUSION: f64 = 1e-3;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-12;
pub const MIN_POINTS: usize = 1_000;

/// A refined root is kept only if `|F − c|` there is at most this.
pub const VALUE_TOL: f64 = 1e-9;

/// Slack between the measured and analytic gap in a no-solution certificate.
pub const CERTIFICATE_SLACK: f64 = 1e-3;

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no-solution certificates exist only for -1 <= n <= 6, got {0}")]
    OutOfGap(i64),
    #[error("scan needs at least {MIN_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("exclusion margin must be in (0, pi/4), got {0}")]
    BadExclusion(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("target must be finite, got {0}")]
    NonFiniteTarget(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub target: f64,
    /// Ascending, in `[0, 2π)`.
    pub numeric_roots: Vec<Radians>,
    /// Minimum of `|F(x) − c|` over the grid.
    pub min_gap: f64,
    pub argmin: Radians,
    /// Outcome of a closed-form comparison, when one was made.
    pub matched: Option<bool>,
}

fn check_common(c: f64, exclusion: f64) -> Result<(), OracleError> {
    if !c.is_finite() {
        return Err(OracleError::NonFiniteTarget(c));
    }
    if !(exclusion > 0.0 && exclusion < FRAC_PI_4) {
        return Err(OracleError::BadExclusion(exclusion));
    }
    Ok(())
}

fn near_branch_endpoint(x: f64, exclusion: f64) -> bool {
    let k = (x / FRAC_PI_2).round();
    (x - k * FRAC_PI_2).abs() <= exclusion
}

/// Sample `F` on a uniform grid over `[0, 2π)`, skipping points within
/// `exclusion` of the branch endpoints, and report the smallest `|F − c|`.
pub fn grid_scan(c: f64, points: usize, exclusion: f64) -> Result<ScanReport, OracleError> {
    check_common(c, exclusion)?;
    if points < MIN_POINTS {
        return Err(OracleError::TooFewPoints(points));
    }
    let step = TAU / points as f64;
    // (gap, index); ties broken by index so any reduction order agrees.
    let best = (0..points)
        .into_par_iter()
        .filter_map(|i| {
            let x = i as f64 * step;
            if near_branch_endpoint(x, exclusion) {
                None
            } else {
                Some(((f_raw(x) - c).abs(), i))
            }
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (min_gap, idx) = best.expect("grid with points >= 1000 has interior samples");
    Ok(ScanReport {
        target: c,
        numeric_roots: Vec::new(),
        min_gap,
        argmin: Radians::new(idx as f64 * step).expect("finite"),
        matched: None,
    })
}

fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `F − c` on one branch `(start, end)`, sampled at `samples` points.
fn branch_roots(c: f64, start: f64, end: f64, samples: usize, tol: f64) -> Vec<f64> {
    let h = (end - start) / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|i| start + i as f64 * h).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f_raw(x) - c).collect();
    let level = |x: f64| f_raw(x) - c;
    let tangent_threshold = tol.sqrt();

    let mut found = Vec::new();
    for i in 0..samples {
        let v = vals[i];
        if v == 0.0 {
            found.push(xs[i]);
            continue;
        }
        if i + 1 < samples && v * vals[i + 1] < 0.0 {
            found.push(bisect(level, xs[i], xs[i + 1], tol));
            continue;
        }
        // Touch without crossing: local minimum of |F − c| with both
        // neighbours on the same side.
        if i > 0 && i + 1 < samples {
            let (a, b) = (vals[i - 1], vals[i + 1]);
            let same_side = a * v > 0.0 && b * v > 0.0;
            if same_side && v.abs() <= a.abs() && v.abs() < b.abs() && v.abs() <= tangent_threshold {
                let (lo, hi) = (xs[i - 1], xs[i + 1]);
                if f_prime_raw(lo) * f_prime_raw(hi) < 0.0 {
                    let x = bisect(f_prime_raw, lo, hi, tol);
                    if level(x).abs() <= VALUE_TOL {
                        found.push(x);
                    }
                }
            }
        }
    }
    found
}

/// Locate every solution of `F(x) = c` in `[0, 2π)` numerically.
///
/// Each branch `(kπ/2 + exclusion, (k+1)π/2 − exclusion)` is sampled at
/// `points / 4` points; sign changes are bisected to width `tol` and
/// tangential touches are refined as sign changes of `F'`.
pub fn refine_roots_with(c: f64, points: usize, exclusion: f64, tol: f64) -> Result<Vec<Radians>, OracleError> {
    check_common(c, exclusion)?;
    if points < MIN_POINTS {
        return Err(OracleError::TooFewPoints(points));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(OracleError::BadTolerance(tol));
    }
    let per_branch = points / 4;
    let mut roots: Vec<f64> = (0..4)
        .into_par_iter()
        .map(|k| {
            let start = k as f64 * FRAC_PI_2 + exclusion;
            let end = (k + 1) as f64 * FRAC_PI_2 - exclusion;
            branch_roots(c, start, end, per_branch, tol)
        })
        .collect::<Vec<_>>()
        .concat();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol);
    Ok(roots.into_iter().map(|x| Radians::new(x).expect("finite")).collect())
}

pub fn refine_roots(c: f64, exclusion: f64, tol: f64) -> Result<Vec<Radians>, OracleError> {
    refine_roots_with(c, DEFAULT_POINTS, exclusion, tol)
}

/// Grid scan and root refinement in one report.
pub fn scan(c: f64, points: usize, exclusion: f64, tol: f64) -> Result<ScanReport, OracleError> {
    let mut report = grid_scan(c, points, exclusion)?;
    report.numeric_roots = refine_roots_with(c, points, exclusion, tol)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnmatchedResidue {
    pub offset: f64,
    /// `F(offset) − c`, or `None` if the offset is outside the domain.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub matched: bool,
    /// `(closed-form offset, numeric root)` pairs of the matching found.
    pub pairs: Vec<(f64, f64)>,
    pub unmatched_closed_form: Vec<UnmatchedResidue>,
    pub unmatched_numeric: Vec<f64>,
}

impl Comparison {
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        for u in &self.unmatched_closed_form {
            match u.residual {
                Some(r) => out.push(format!(
                    "closed-form residue {} has no numeric partner; F(x) - c = {:.6}",
                    residue_name(u.offset),
                    r
                )),
                None => out.push(format!(
                    "closed-form residue {} has no numeric partner; x is outside the domain of F",
                    residue_name(u.offset)
                )),
            }
        }
        for x in &self.unmatched_numeric {
            out.push(format!("numeric root {x:.12} has no closed-form partner"));
        }
        out
    }
}

fn residue_name(offset: f64) -> String {
    match pi_fraction(offset) {
        Some(form) => format!("{form} ({offset:.12})"),
        None => format!("{offset:.12}"),
    }
}

/// Kuhn's augmenting-path matching on the bipartite "within tol" graph.
fn try_augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none_or(|w| try_augment(w, adj, seen, match_right)) {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

/// Does a perfect one-to-one matching exist between `residues` and
/// `numeric` with circular distance at most `tol` per pair?
pub fn compare_residues(residues: &[ResidueClass], c: f64, numeric: &[Radians], tol: f64) -> Comparison {
    let adj: Vec<Vec<usize>> = residues
        .iter()
        .map(|res| {
            numeric
                .iter()
                .enumerate()
                .filter(|(_, x)| res.circular_distance(x.value()) <= tol)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut match_right: Vec<Option<usize>> = vec![None; numeric.len()];
    for u in 0..residues.len() {
        let mut seen = vec![false; numeric.len()];
        try_augment(u, &adj, &mut seen, &mut match_right);
    }
    let mut left_matched = vec![false; residues.len()];
    let mut pairs = Vec::new();
    for (j, m) in match_right.iter().enumerate() {
        if let Some(i) = *m {
            left_matched[i] = true;
            pairs.push((residues[i].offset(), numeric[j].value()));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let unmatched_closed_form: Vec<UnmatchedResidue> = residues
        .iter()
        .zip(&left_matched)
        .filter(|(_, &m)| !m)
        .map(|(res, _)| UnmatchedResidue {
            offset: res.offset(),
            residual: Radians::new(res.offset()).ok().and_then(|x| crate::trig::eval_f(x).ok()).map(|f| f - c),
        })
        .collect();
    let unmatched_numeric: Vec<f64> =
        match_right.iter().zip(numeric).filter(|(m, _)| m.is_none()).map(|(_, x)| x.value()).collect();
    Comparison {
        matched: unmatched_closed_form.is_empty() && unmatched_numeric.is_empty(),
        pairs,
        unmatched_closed_form,
        unmatched_numeric,
    }
}

pub fn compare(fam: &SolutionFamily, numeric: &[Radians], tol: f64) -> Comparison {
    compare_residues(&fam.residues, fam.target.c(), numeric, tol)
}

/// The family `x = 2Kπ ± π/4` that is sometimes quoted for `F(x) = −2`.
/// It is wrong: `F(π/4) = 2 + 3√2`. Kept as a known-bad input for
/// [`compare`].
pub fn quoted_minus_two_family() -> Vec<ResidueClass> {
    vec![ResidueClass::new(FRAC_PI_4), ResidueClass::new(-FRAC_PI_4)]
}

/// Distance from `c` to the range of `F`, which is
/// `(−∞, 1 − 2√2] ∪ [2 + 3√2, ∞)`. Zero when `c` is attained.
pub fn analytic_gap(c: f64) -> f64 {
    let lower = 1.0 - 2.0 * SQRT_2;
    let upper = 2.0 + 3.0 * SQRT_2;
    if c <= lower || c >= upper {
        0.0
    } else {
        (c - lower).min(upper - c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoSolutionCertificate {
    pub n: i64,
    pub min_gap: f64,
    pub argmin: Radians,
    pub expected_gap: f64,
    pub numeric_roots: usize,
    pub passed: bool,
}

/// Numerical evidence that `F(x) = n` has no solution for `−1 ≤ n ≤ 6`:
/// no root is found and `|F − n|` stays above the analytic gap less
/// [`CERTIFICATE_SLACK`].
pub fn no_solution_certificate(n: i64) -> Result<NoSolutionCertificate, OracleError> {
    no_solution_certificate_with(n, DEFAULT_POINTS, DEFAULT_EXCLUSION)
}

pub fn no_solution_certificate_with(
    n: i64,
    points: usize,
    exclusion: f64,
) -> Result<NoSolutionCertificate, OracleError> {
    if !(-1..=6).contains(&n) {
        return Err(OracleError::OutOfGap(n));
    }
    let c = n as f64;
    let report = scan(c, points, exclusion, DEFAULT_BISECTION_TOL)?;
    let expected_gap = analytic_gap(c);
    let floor = expected_gap - CERTIFICATE_SLACK;
    Ok(NoSolutionCertificate {
        n,
        min_gap: report.min_gap,
        argmin: report.argmin,
        expected_gap,
        numeric_roots: report.numeric_roots.len(),
        passed: report.numeric_roots.is_empty() && floor > 0.0 && report.min_gap > floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_integer, solve_real};
    use approx::assert_abs_diff_eq;

    fn values(xs: &[Radians]) -> Vec<f64> {
        xs.iter().map(|x| x.value()).collect()
    }

    #[test]
    fn scan_in_gap() {
        let r = grid_scan(0.0, 100_000, DEFAULT_EXCLUSION).unwrap();
        assert!(r.min_gap > 1.0);
        assert_abs_diff_eq!(r.min_gap, 2.0 * SQRT_2 - 1.0, epsilon = 1e-3);
    }

    #[test]
    fn scan_at_known_solution() {
        let r = grid_scan(-2.0, DEFAULT_POINTS, DEFAULT_EXCLUSION).unwrap();
        assert!(r.min_gap <= 1e-6);
        let x = r.argmin.value();
        assert!((x - 3.0 * FRAC_PI_4).abs() < 1e-3 || (x - 7.0 * FRAC_PI_4).abs() < 1e-3);
    }

    #[test]
    fn scan_near_upper_boundary() {
        let r = grid_scan(6.0, DEFAULT_POINTS, DEFAULT_EXCLUSION).unwrap();
        assert_abs_diff_eq!(r.min_gap, 2.0 + 3.0 * SQRT_2 - 6.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.argmin.value(), FRAC_PI_4, epsilon = 1e-5);
    }

    #[test]
    fn scan_argument_validation() {
        assert!(grid_scan(0.0, 10, 1e-3).is_err());
        assert!(grid_scan(0.0, 1000, 0.0).is_err());
        assert!(grid_scan(f64::NAN, 1000, 1e-3).is_err());
        assert!(refine_roots(0.0, 1e-3, 0.0).is_err());
    }

    #[test]
    fn refine_minus_two() {
        let roots = values(&refine_roots(-2.0, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap());
        assert_eq!(roots.len(), 2);
        assert_abs_diff_eq!(roots[0], 3.0 * FRAC_PI_4, epsilon = 1e-10);
        assert_abs_diff_eq!(roots[1], 7.0 * FRAC_PI_4, epsilon = 1e-10);
    }

    #[test]
    fn refine_minus_three() {
        let roots = values(&refine_roots(-3.0, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap());
        assert_eq!(roots.len(), 2);
        // cos(x − π/4) = 1 − 1/√2 at both roots
        for x in roots {
            assert_abs_diff_eq!((x - FRAC_PI_4).cos(), 1.0 - 1.0 / SQRT_2, epsilon = 1e-10);
        }
    }

    #[test]
    fn refine_finds_tangent_points() {
        let c = 1.0 - 2.0 * SQRT_2;
        let roots = values(&refine_roots(c, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap());
        assert_eq!(roots.len(), 2, "{roots:?}");
        let phi = ((1.0 - SQRT_2) / SQRT_2).acos();
        assert_abs_diff_eq!(roots[0], FRAC_PI_4 + phi, epsilon = 1e-9);
        assert_abs_diff_eq!(roots[1], FRAC_PI_4 - phi + TAU, epsilon = 1e-9);
    }

    #[test]
    fn near_tangent_gap_target_has_no_roots() {
        let c = 1.0 - 2.0 * SQRT_2 + 1e-8;
        assert!(refine_roots(c, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap().is_empty());
    }

    #[test]
    fn compare_examples() {
        let fam = solve_integer(-3).unwrap();
        let numeric = refine_roots(-3.0, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap();
        assert!(compare(&fam, &numeric, 1e-8).matched);

        let numeric = refine_roots(-2.0, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap();
        let cmp = compare_residues(&quoted_minus_two_family(), -2.0, &numeric, 1e-8);
        assert!(!cmp.matched);
        assert_eq!(cmp.unmatched_closed_form.len(), 1);
        let bad = &cmp.unmatched_closed_form[0];
        assert_abs_diff_eq!(bad.offset, FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(bad.residual.unwrap(), 4.0 + 3.0 * SQRT_2, epsilon = 1e-9);
        assert_eq!(cmp.unmatched_numeric.len(), 1);
        assert!(cmp.diagnostics()[0].contains("0.785398163397"));

        let empty = solve_integer(3).unwrap();
        assert!(compare(&empty, &[], 1e-8).matched);
    }

    #[test]
    fn compare_wraps_around_zero() {
        let res = [ResidueClass::new(-1e-10)];
        let numeric = [Radians::new(1e-10).unwrap()];
        assert!(compare_residues(&res, 0.0, &numeric, 1e-9).matched);
    }

    #[test]
    fn compare_needs_a_perfect_matching() {
        // two residues, one numeric root within reach of both
        let res = [ResidueClass::new(1.0), ResidueClass::new(1.0 + 1e-9)];
        let numeric = [Radians::new(1.0 + 5e-10).unwrap()];
        let cmp = compare_residues(&res, 0.0, &numeric, 1e-8);
        assert!(!cmp.matched);
        assert_eq!(cmp.pairs.len(), 1);
    }

    #[test]
    fn certificates() {
        let cert = no_solution_certificate(0).unwrap();
        assert!(cert.passed);
        assert_abs_diff_eq!(cert.min_gap, 2.0 * SQRT_2 - 1.0, epsilon = 1e-3);
        let cert = no_solution_certificate(6).unwrap();
        assert!(cert.passed);
        assert_abs_diff_eq!(cert.min_gap, 3.0 * SQRT_2 - 4.0, epsilon = 1e-3);
        let cert = no_solution_certificate(-1).unwrap();
        assert!(cert.passed);
        assert_abs_diff_eq!(cert.min_gap, 2.0 * SQRT_2 - 2.0, epsilon = 1e-3);
        assert_eq!(no_solution_certificate(7), Err(OracleError::OutOfGap(7)));
        assert_eq!(no_solution_certificate(-2), Err(OracleError::OutOfGap(-2)));
    }

    #[test]
    fn analytic_gap_values() {
        assert_eq!(analytic_gap(-2.0), 0.0);
        assert_eq!(analytic_gap(7.0), 0.0);
        assert_abs_diff_eq!(analytic_gap(0.0), 2.0 * SQRT_2 - 1.0);
        assert_abs_diff_eq!(analytic_gap(2.0), 2.0 * SQRT_2 + 1.0);
    }

    #[test]
    fn refinement_is_stable_under_grid_doubling() {
        for c in [-3.0, 8.0, -2.1] {
            let coarse = values(&refine_roots_with(c, 200_000, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap());
            let fine = values(&refine_roots_with(c, 400_000, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap());
            assert_eq!(coarse.len(), fine.len());
            for (a, b) in coarse.iter().zip(&fine) {
                assert!((a - b).abs() <= 2.0 * DEFAULT_BISECTION_TOL, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn deterministic_reports() {
        let a = scan(8.0, 200_000, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap();
        let b = scan(8.0, 200_000, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = single.install(|| scan(8.0, 200_000, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn closed_form_agrees_with_numeric_roots() {
        let targets = [-2.0, -3.0, -10.0, 7.0, 8.0, 100.0, 1.0 - 2.0 * SQRT_2, 2.0 + 3.0 * SQRT_2, -5.5, 10.25];
        for c in targets {
            let fam = solve_real(c).unwrap();
            let numeric = refine_roots(c, DEFAULT_EXCLUSION, DEFAULT_BISECTION_TOL).unwrap();
            let cmp = compare(&fam, &numeric, 1e-8);
            assert!(cmp.matched, "c = {c}: {:?}", cmp.diagnostics());
        }
    }
}
