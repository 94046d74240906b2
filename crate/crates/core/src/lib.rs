//! Exact invariant theory of the second symmetric power of `SL_2(F_q)`.
//!
//! The crate builds the classical invariants of binary quadratic forms
//! `a0 X^2 + 2 a1 XY + a2 Y^2` over `F_q` (odd `q`), certifies their
//! invariance, relations and SAGBI bases by exact arithmetic, and checks the
//! resulting ring structure against brute-force fixed-space dimensions.

pub mod action;
pub mod construct;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod sagbi;

pub use error::{Error, Result};
pub use gf::{FieldCtx, GfElem};
pub use poly::{grevlex_cmp, Monomial, Poly, Var, Weight};
