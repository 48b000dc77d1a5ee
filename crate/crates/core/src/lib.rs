//! Closed-form solutions of
//! `sin x + cos x + tan x + cot x + sec x + csc x = c`
//! with an independent numerical oracle.
//!
//! ```
//! use sixtrig::solver::{enumerate, solve_integer};
//! use sixtrig::trig::eval_f;
//!
//! let family = solve_integer(-3).unwrap();
//! for x in enumerate(&family, -1..=1) {
//!     assert!((eval_f(x).unwrap() + 3.0).abs() < 1e-9);
//! }
//! assert!(solve_integer(0).unwrap().is_empty());
//! ```

pub mod commands;
pub mod envelope;
pub mod input;
pub mod oracle;
pub mod quadratic;
pub mod reduction;
pub mod solver;
pub mod trig;

pub use oracle::{compare, grid_scan, no_solution_certificate, refine_roots, ScanReport};
pub use quadratic::{Interval, Quadratic, RootLocation};
pub use reduction::Target;
pub use solver::{solve_abs, solve_integer, solve_real, ResidueClass, SolutionFamily};
pub use trig::{eval_f, Radians};
