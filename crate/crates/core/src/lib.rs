//! Symbolic Euler mapping for first-order variational problems on
//! `U x V x L(R^n, R^m)`, with detection and reconstruction of null
//! Lagrangians.
//!
//! The layers, bottom up:
//!
//! - [`coord`], [`expr`], [`normal`], [`zero`]: exact expressions over jet
//!   coordinates and the two-tier zero test.
//! - [`jet`]: total derivatives and prolongation of polynomial maps.
//! - [`forms`]: exterior algebra, horizontalization and jet pullbacks.
//! - [`kernel`]: Euler expressions, the kernel test, the multi-affine
//!   decomposition, the closed form `rho`, its homotopy potential and the
//!   generators of null Lagrangians.
//! - [`numeric`]: sampling, finite differences and numeric zero tests.
//! - [`parse`]: text grammar shared with the command line.
//! - [`gen`]: seeded random generators used by the property suites.

pub mod coord;
pub mod error;
pub mod expr;
pub mod forms;
pub mod gen;
pub mod jet;
pub mod kernel;
pub mod normal;
pub mod numeric;
pub mod parse;
pub mod zero;

pub use coord::{CoordId, JetSpace, Order};
pub use error::{Error, Result};
pub use expr::{Expr, FuncName, Rational};
pub use forms::{Covector, DiffForm, Projection};
pub use jet::{PolyMap, Substitution};
pub use kernel::{Decomposition, EulerForm, KernelReport, Lagrangian};
pub use normal::{z_normal_form, ZMonomial};
pub use zero::{is_zero, Point, ZeroTest, ZeroVerdict};
