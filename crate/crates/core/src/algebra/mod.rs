//! Exact arithmetic foundation: ground fields, polynomials in t, rational
//! series with t-adic valuation, and resultants.

pub mod field;
pub mod poly;
pub mod resultant;
pub mod series;

pub use field::{parse_field, FieldElement, FieldSpec};
pub use poly::{parse_poly, UniPoly};
pub use resultant::{resultant, resultant_ord, SPoly};
pub use series::{RatSeries, Valuation};
