//! Octonions, the exceptional group G2 = Aut(O), the SU(3)-bundle G2 -> S^6 in
//! two charts, and its transition function over the equator S^5.
// Negated comparisons are used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cayley_dickson;
pub mod charts;
pub mod degree;
pub mod error;
pub mod exec;
pub mod formats;
pub mod g2;
pub mod report;
pub mod sampling;
pub mod su3;
pub mod transition;
pub mod verify;

pub use cayley_dickson::{MultiplicationTable, Octonion};
pub use charts::ChartId;
pub use error::{Error, Result};
pub use exec::Execution;
pub use g2::{G2Element, SpherePoint6};
pub use report::{Check, IdentityReport};
pub use su3::SU3Matrix;
pub use transition::EquatorPoint;
