//! Finite cover spaces, Cauchy filters and completions, locales of Cauchy
//! covers, and exact real numbers presented as Dedekind filters.

pub mod cauchy;
pub mod coverspace;
pub mod error;
pub mod finkernel;
pub mod locale;
pub mod spacefile;
pub mod xreal;

pub use error::SpaceError;
pub use finkernel::{Carrier, Cover, FiniteCoverSpace, FnTable, Limits, Subset};
