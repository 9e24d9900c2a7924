//! # tvpriv
//!
//! Exact utility-privacy trade-offs for finite-alphabet data release when
//! leakage about a private variable X is measured by the average total
//! variation distance
//!
//! ```text
//! T(X;U) = ½ Σ_u p(u) ‖p_{X|u} − p_X‖₁
//! ```
//!
//! The release U is produced from the data Y by a mechanism `p_{U|Y}`, so
//! `X − Y − U` is a Markov chain. Because `‖P_{X|Y}(x − p_Y)‖₁` is piecewise
//! linear on the simplex, every optimal posterior `p_{Y|u}` can be taken from
//! the finite set of extreme points of its linear pieces, and the trade-off
//! becomes a linear program over weights on those points.
//!
//! ## Modules
//!
//! - [`probability`]: pmfs, channels, the joint source and composition.
//! - [`leakage`]: `T`, mutual information, maximal leakage, worst-case
//!   leakage, the bounds implied by `T`, and Markov-chain consistency checks.
//! - [`regions`]: sign-pattern partition of the simplex and extreme-point
//!   enumeration by basic feasible solutions.
//! - [`lp`]: two-phase primal simplex with Bland's rule.
//! - [`tradeoff`]: closed forms for binary Y, the general LP reduction,
//!   mechanism reconstruction and curve sweeps.
//! - [`threats`]: Bayes-optimal attacker beliefs and inference gain.
//! - [`verify`]: seeded randomized invariant suites.
//!
//! All logarithms are base 2.
//!
//! ```
//! use tvpriv::probability::{validate_pmf, Channel, JointSource};
//! use tvpriv::tradeoff::{TradeoffSolver, UtilityKind};
//!
//! let p_y = validate_pmf(&[1.0 / 3.0, 2.0 / 3.0]).unwrap();
//! let p_x_given_y =
//!     Channel::from_rows(&[vec![0.5, 0.3], vec![0.3, 0.2], vec![0.2, 0.5]]).unwrap();
//! let src = JointSource::new(p_y, p_x_given_y, None).unwrap();
//!
//! let solver = TradeoffSolver::new(&src).unwrap();
//! let sol = solver.solve(UtilityKind::MutualInformation, 1.0 / 15.0).unwrap();
//! assert!((sol.utility_value - 0.459148).abs() < 1e-6);
//! ```

pub mod error;
pub mod exec;
pub mod leakage;
pub mod lp;
pub mod probability;
pub mod random;
pub mod regions;
pub mod threats;
pub mod tradeoff;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Strategy;
