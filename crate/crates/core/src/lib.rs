//! Exact computations around cubic structures on abelian group rings,
//! localized Riemann-Roch character functions for tame covers, and
//! Stickelberger actions on cyclotomic class groups.

pub mod acceptance;
pub mod arith;
pub mod bernoulli;
pub mod cubic;
pub mod cyclo;
pub mod cyclotomic;
pub mod error;
pub mod fpoly;
pub mod group_algebra;
pub mod linalg;
pub mod modular;
pub mod riemann_roch;
pub mod serde_big;
pub mod stickelberger;

pub use error::{Error, Result};
