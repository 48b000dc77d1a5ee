//! Command execution behind the CLI. Each [`Request`] maps to one
//! [`Envelope`]; nothing here prints or exits.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};

use crate::envelope::*;
use crate::input::{parse_k_range, parse_target, TargetExpr};
use crate::oracle::{self, analytic_gap, compare, compare_residues, quoted_minus_two_family};
use crate::quadratic::{self, Interval, Quadratic};
use crate::reduction::Target;
use crate::solver::{self, integer_case, ResidueClass, SolutionFamily};
use crate::trig::{classify_domain, eval_f, Radians, DEFAULT_DOMAIN_TOL};

/// Largest number of K values `solve` will enumerate.
pub const MAX_K_SPAN: i64 = 100_000;
/// Largest number of grid points `samples` will visit.
pub const MAX_SAMPLE_ROWS: f64 = 10_000_000.0;
/// Largest grid accepted by `scan` and `verify`.
pub const MAX_POINTS: usize = 100_000_000;

const MOTIVATING_TARGET: f64 = -3.0;
const MOTIVATING_BOUND: f64 = 4.0 * PI;
const SOUNDNESS_TOL: f64 = 1e-9;

type CmdResult = Result<(Status, Payload), String>;

pub fn execute(request: &Request) -> Envelope {
    let outcome = match request {
        Request::Solve { target, integer_mode, k_range } => run_solve(target, *integer_mode, k_range),
        Request::Verify { target, integer_mode, tol, points, exclusion } => {
            run_verify(target, *integer_mode, *tol, *points, *exclusion)
        }
        Request::Scan { target, points, exclusion } => run_scan(target, *points, *exclusion),
        Request::Classify { a, b, c, lo, hi } => run_classify(*a, *b, *c, *lo, *hi),
        Request::Samples { from, to, step, out } => run_samples(*from, *to, *step, out),
        Request::Motivating => run_motivating(),
    };
    let (status, result, error) = match outcome {
        Ok((status, payload)) => (status, Some(payload), None),
        Err(msg) => (Status::Error, None, Some(msg)),
    };
    Envelope { command: request.name().to_string(), inputs: request.clone(), status, result, error }
}

fn echo(expr: &TargetExpr) -> TargetEcho {
    TargetEcho { text: expr.text.clone(), value: expr.value(), integer: expr.integer }
}

fn family_for(expr: &TargetExpr, integer_mode: bool) -> Result<SolutionFamily, String> {
    let target = expr.to_target(integer_mode).map_err(|e| e.to_string())?;
    match target {
        Target::Integer(n) => solver::solve_integer(n),
        Target::Real(_) => solver::solve(target),
    }
    .map_err(|e| e.to_string())
}

fn root_outputs(fam: &SolutionFamily) -> Vec<RootOut> {
    fam.roots
        .iter()
        .enumerate()
        .map(|(i, root)| RootOut {
            label: format!("phi{}", i + 1),
            r: root.r,
            phi: AngleOut::new(root.phi),
            multiplicity: root.multiplicity,
        })
        .collect()
}

/// Symbolic form of a residue, e.g. `pi/4 - phi1 + 2pi`.
fn residue_form(fam: &SolutionFamily, res: &ResidueClass) -> Option<String> {
    for (i, root) in fam.roots.iter().enumerate() {
        for (sign, sym) in [(1.0, '+'), (-1.0, '-')] {
            let raw = FRAC_PI_4 + sign * root.phi;
            if res.circular_distance(raw) <= solver::RESIDUE_DEDUP_TOL {
                let wrap = if raw < 0.0 {
                    " + 2pi"
                } else if raw >= ResidueClass::PERIOD {
                    " - 2pi"
                } else {
                    ""
                };
                return Some(format!("pi/4 {sym} phi{}{wrap}", i + 1));
            }
        }
    }
    None
}

fn residue_outputs(fam: &SolutionFamily) -> Vec<AngleOut> {
    fam.residues
        .iter()
        .map(|res| match residue_form(fam, res) {
            Some(form) => AngleOut::with_form(res.offset(), form),
            None => AngleOut::new(res.offset()),
        })
        .collect()
}

fn residual(x: f64, c: f64) -> Option<f64> {
    Radians::new(x).ok().and_then(|x| eval_f(x).ok()).map(|f| f - c)
}

fn run_solve(target: &str, integer_mode: bool, k_range: &str) -> CmdResult {
    let expr = parse_target(target).map_err(|e| format!("target: {e}"))?;
    let range = parse_k_range(k_range).map_err(|e| e.to_string())?;
    if range.end().saturating_sub(*range.start()) > MAX_K_SPAN {
        return Err(format!("K range spans more than {MAX_K_SPAN} values"));
    }
    let fam = family_for(&expr, integer_mode)?;
    let c = fam.target.c();
    let residues = residue_outputs(&fam);
    let mut solutions: Vec<SolutionOut> = range
        .clone()
        .flat_map(|k| {
            fam.residues.iter().zip(&residues).map(move |(res, out)| {
                let x = res.at(k);
                let form = out.exact.as_ref().map(|f| match k {
                    0 => f.clone(),
                    k if k > 0 => format!("{f} + {}pi", 2 * k),
                    k => format!("{f} - {}pi", -2 * k),
                });
                SolutionOut {
                    k,
                    x: match form {
                        Some(form) => AngleOut::with_form(x, form),
                        None => AngleOut::new(x),
                    },
                    residual: None,
                }
            })
        })
        .collect();
    solutions.sort_by(|a, b| a.x.radians.total_cmp(&b.x.radians));
    for s in &mut solutions {
        s.residual = residual(s.x.radians, c);
    }
    let status = if fam.is_empty() { Status::NoSolution } else { Status::Ok };
    Ok((
        status,
        Payload::Solve(SolvePayload {
            target: echo(&expr),
            integer_case: fam.target.as_integer().map(integer_case),
            roots: root_outputs(&fam),
            residues,
            k_range: (*range.start(), *range.end()),
            solutions,
        }),
    ))
}

fn check_grid(points: usize) -> Result<(), String> {
    if points > MAX_POINTS {
        return Err(format!("points must be at most {MAX_POINTS}"));
    }
    Ok(())
}

fn run_verify(target: &str, integer_mode: bool, tol: f64, points: usize, exclusion: f64) -> CmdResult {
    let expr = parse_target(target).map_err(|e| format!("target: {e}"))?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(format!("tol must be positive, got {tol}"));
    }
    check_grid(points)?;
    let fam = family_for(&expr, integer_mode)?;
    let c = fam.target.c();
    let numeric =
        oracle::refine_roots_with(c, points, exclusion, oracle::DEFAULT_BISECTION_TOL).map_err(|e| e.to_string())?;
    let comparison = compare(&fam, &numeric, tol);
    let mut notes = Vec::new();
    let quoted_family = if c == -2.0 {
        let cmp = compare_residues(&quoted_minus_two_family(), c, &numeric, tol);
        if !cmp.matched {
            let detail = cmp
                .unmatched_closed_form
                .iter()
                .filter_map(|u| u.residual.map(|r| format!("F({}) - (-2) = {r:.4}", sig17(u.offset))))
                .collect::<Vec<_>>()
                .join("; ");
            notes.push(format!(
                "the family x = 2K*pi +- pi/4 often quoted for F(x) = -2 is wrong ({detail}); \
                 the solutions are x = 3pi/4 + 2K*pi and x = 7pi/4 + 2K*pi"
            ));
        }
        Some(cmp)
    } else {
        None
    };
    if fam.is_empty() && numeric.is_empty() {
        notes.push(format!("no solution: {} lies {:.6} away from the range of F", sig17(c), analytic_gap(c)));
    }
    let matched = comparison.matched;
    let diagnostics = comparison.diagnostics();
    let status = if matched { Status::Ok } else { Status::Error };
    Ok((
        status,
        Payload::Verify(VerifyPayload {
            target: echo(&expr),
            residues: residue_outputs(&fam),
            numeric_roots: numeric.iter().map(|x| AngleOut::new(x.value())).collect(),
            tol,
            matched,
            comparison,
            diagnostics,
            notes,
            quoted_family,
        }),
    ))
}

fn run_scan(target: &str, points: usize, exclusion: f64) -> CmdResult {
    let expr = parse_target(target).map_err(|e| format!("target: {e}"))?;
    check_grid(points)?;
    let c = expr.value();
    let report = oracle::grid_scan(c, points, exclusion).map_err(|e| e.to_string())?;
    Ok((Status::Ok, Payload::Scan(ScanPayload { target: echo(&expr), report, analytic_gap: analytic_gap(c) })))
}

fn run_classify(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> CmdResult {
    let q = Quadratic::new(a, b, c).map_err(|e| e.to_string())?;
    let iv = Interval::new(lo, hi).map_err(|e| e.to_string())?;
    Ok((
        Status::Ok,
        Payload::Classify(ClassifyPayload {
            quadratic: q,
            interval: iv,
            discriminant: quadratic::discriminant(&q),
            location: quadratic::locate(&q, &iv, quadratic::DEFAULT_BOUNDARY_TOL),
            conditions: quadratic::root_conditions(&q, &iv),
            both_roots_inside: quadratic::both_roots_inside(&q, &iv),
            one_inside_one_outside: quadratic::one_inside_one_outside(&q, &iv),
        }),
    ))
}

/// Grid `from + i·step` up to `to` (inclusive up to rounding).
pub fn sample_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err("from, to and step must be finite".into());
    }
    if step.is_nan() || step <= 0.0 || from.is_nan() || to.is_nan() || from >= to {
        return Err(format!("need step > 0 and from < to (from = {from}, to = {to}, step = {step})"));
    }
    let span = (to - from) / step;
    if span > MAX_SAMPLE_ROWS {
        return Err(format!("grid would exceed {MAX_SAMPLE_ROWS} rows"));
    }
    let count = (span + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| (i as f64).mul_add(step, from)).collect())
}

/// Write `x_radians,f_value` rows for the domain-valid grid points.
/// Returns `(rows written, points skipped)`.
pub fn write_samples<W: Write>(grid: &[f64], mut out: W) -> std::io::Result<(usize, usize)> {
    writeln!(out, "x_radians,f_value")?;
    let (mut rows, mut skipped) = (0, 0);
    for &x in grid {
        let Ok(r) = Radians::new(x) else {
            skipped += 1;
            continue;
        };
        if !classify_domain(r, DEFAULT_DOMAIN_TOL).is_valid() {
            skipped += 1;
            continue;
        }
        match eval_f(r) {
            Ok(f) => {
                writeln!(out, "{},{}", sig17(x), sig17(f))?;
                rows += 1;
            }
            Err(_) => skipped += 1,
        }
    }
    out.flush()?;
    Ok((rows, skipped))
}

fn run_samples(from: f64, to: f64, step: f64, out: &str) -> CmdResult {
    let grid = sample_grid(from, to, step)?;
    let file = File::create(out).map_err(|e| format!("cannot write {out}: {e}"))?;
    let (rows, skipped) = write_samples(&grid, BufWriter::new(file)).map_err(|e| format!("cannot write {out}: {e}"))?;
    Ok((Status::Ok, Payload::Samples(SamplesPayload { out: out.to_string(), rows, skipped })))
}

fn run_motivating() -> CmdResult {
    let c = MOTIVATING_TARGET;
    let sol = solver::solve_abs(c).map_err(|e| e.to_string())?;
    let root = *sol.family.roots.first().ok_or("no admissible root for F(|x|) = -3")?;
    let xs = sol.within(MOTIVATING_BOUND);
    let solutions: Vec<AbsSolutionOut> = xs
        .iter()
        .map(|x| AbsSolutionOut {
            x: AngleOut::new(x.value()),
            residual: residual(x.value().abs(), c).unwrap_or(f64::MAX),
        })
        .collect();
    let closed_under_negation = xs.iter().all(|x| xs.iter().any(|y| y.value() == -x.value()));
    let all_verified = !solutions.is_empty() && solutions.iter().all(|s| s.residual.abs() <= SOUNDNESS_TOL);
    let smallest =
        sol.positive_within(MOTIVATING_BOUND).first().copied().ok_or("no positive solution within the bound")?;
    let branches = ["+(2K*pi + pi/4 + phi)", "+(2K*pi + pi/4 - phi)", "-(2K*pi + pi/4 + phi)", "-(2K*pi + pi/4 - phi)"]
        .iter()
        .map(|b| format!("x = {b}"))
        .collect();
    let status = if all_verified && closed_under_negation { Status::Ok } else { Status::Error };
    Ok((
        status,
        Payload::Motivating(MotivatingPayload {
            target: c,
            r: root.r,
            phi: AngleOut::new(root.phi),
            cos_phi: root.phi.cos(),
            branches,
            bound: MOTIVATING_BOUND,
            solutions,
            smallest_positive: AngleOut::new(smallest.value()),
            closed_under_negation,
            all_verified,
        }),
    ))
}

fn angle_text(a: &AngleOut) -> String {
    match &a.exact {
        Some(form) => format!("{} ({form})", a.decimal),
        None => a.decimal.clone(),
    }
}

/// Human-readable rendering of an envelope.
pub fn render_text(env: &Envelope) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {:?}", env.command, env.status);
    if let Some(err) = &env.error {
        let _ = writeln!(s, "error: {err}");
    }
    let Some(payload) = &env.result else {
        return s;
    };
    match payload {
        Payload::Solve(p) => {
            let _ = writeln!(s, "target c = {} ({})", sig17(p.target.value), p.target.text);
            if let Some(case) = p.integer_case {
                let _ = writeln!(s, "integer case: {case:?}");
            }
            if p.roots.is_empty() {
                let _ = writeln!(s, "no admissible S-root: F(x) = c has no real solution");
            }
            for r in &p.roots {
                let _ = writeln!(
                    s,
                    "S = {}  {} = arccos(S/sqrt2) = {}  multiplicity {}",
                    sig17(r.r),
                    r.label,
                    r.phi.decimal,
                    r.multiplicity
                );
            }
            for res in &p.residues {
                let _ = writeln!(s, "x = {} + 2K*pi", angle_text(res));
            }
            if !p.solutions.is_empty() {
                let _ = writeln!(s, "solutions for K in {}..{}:", p.k_range.0, p.k_range.1);
                for sol in &p.solutions {
                    let res = sol.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "n/a".into());
                    let _ = writeln!(s, "  K = {:>3}  x = {}  F(x) - c = {res}", sol.k, sol.x.decimal);
                }
            }
        }
        Payload::Verify(p) => {
            let _ = writeln!(s, "target c = {} ({})", sig17(p.target.value), p.target.text);
            let _ = writeln!(s, "closed form: {} residue(s)", p.residues.len());
            for r in &p.residues {
                let _ = writeln!(s, "  {}", angle_text(r));
            }
            let _ = writeln!(s, "numeric:     {} root(s)", p.numeric_roots.len());
            for r in &p.numeric_roots {
                let _ = writeln!(s, "  {}", r.decimal);
            }
            let _ = writeln!(s, "matched = {} at tol {:e}", p.matched, p.tol);
            for d in &p.diagnostics {
                let _ = writeln!(s, "  {d}");
            }
            for n in &p.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        Payload::Scan(p) => {
            let _ = writeln!(s, "target c = {} ({})", sig17(p.target.value), p.target.text);
            let _ = writeln!(s, "min |F - c| = {} at x = {}", sig17(p.report.min_gap), sig17(p.report.argmin.value()));
            let _ = writeln!(s, "distance from c to range of F = {}", sig17(p.analytic_gap));
        }
        Payload::Classify(p) => {
            let _ = writeln!(s, "discriminant = {}", p.discriminant);
            let _ = writeln!(s, "location: {:?}", p.location);
            let _ = writeln!(
                s,
                "conditions: D > 0: {}, a f(lo) > 0 and a f(hi) > 0: {}, vertex inside: {}, sign f(lo) f(hi): {}",
                p.conditions.positive_discriminant,
                p.conditions.endpoints_same_side,
                p.conditions.vertex_inside,
                p.conditions.endpoint_product_sign
            );
            let _ = writeln!(s, "both roots inside: {}", p.both_roots_inside);
            let _ = writeln!(s, "one inside, one outside: {}", p.one_inside_one_outside);
        }
        Payload::Samples(p) => {
            let _ = writeln!(s, "wrote {} rows to {} ({} skipped)", p.rows, p.out, p.skipped);
        }
        Payload::Motivating(p) => {
            let _ = writeln!(s, "F(|x|) = {}", p.target);
            let _ = writeln!(s, "S = {}, phi = {}, cos phi = {}", sig17(p.r), p.phi.decimal, sig17(p.cos_phi));
            for b in &p.branches {
                let _ = writeln!(s, "  {b}, K >= 0 where the bracket is positive");
            }
            let _ = writeln!(s, "solutions with |x| <= 4pi:");
            for sol in &p.solutions {
                let _ = writeln!(s, "  x = {:>22}  F(|x|) - c = {:.3e}", sol.x.decimal, sol.residual);
            }
            let _ = writeln!(s, "smallest positive solution: {}", p.smallest_positive.decimal);
            let _ = writeln!(s, "closed under negation: {}, all verified: {}", p.closed_under_negation, p.all_verified);
        }
    }
    s
}
