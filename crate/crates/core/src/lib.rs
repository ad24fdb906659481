//! Radon-number bounds for convexity spaces over finite 1-complexes.
//!
//! [`bounds`] derives the polynomial bounds `q_G(b)`, [`exact`] computes
//! Radon, Helly and `TC1` values by enumeration, and [`constrained`] builds
//! and checks constrained graph maps.

pub mod bounds;
pub mod cli;
pub mod constrained;
pub mod error;
pub mod exact;
pub mod families;
pub mod graphs;
pub mod polynomial;
pub mod space;
pub(crate) mod util;

pub use error::{Error, Result};
pub use graphs::{parse_expr, Graph, GraphExpr};
pub use polynomial::Polynomial;
pub use space::{DiscreteSpace, Region, SetFamily};
