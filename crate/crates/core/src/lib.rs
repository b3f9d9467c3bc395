//! Exact resolution data of plane curve branches over Q and GF(p).
//!
//! A branch is given by a polynomial parametrization (x(t), y(t)). From it
//! this crate computes, in exact arithmetic throughout:
//!
//! * the Hamburger-Noether tableau and its multiplicity sequence,
//! * characteristic, divisor, n- and semigroup sequences,
//! * the cluster of infinitely near points of the minimal resolution with
//!   its proximity, intersection and curvette Gram matrices,
//! * intersection numbers of branch pairs by three independent methods
//!   (tableau contact formula, resultant elimination, point-by-point
//!   multiplicity products),
//! * curvette synthesis: approximating branches realizing the semigroup
//!   generators as intersection numbers.
//!
//! Every derived quantity is cross-checkable against an independent
//! computation path, and the randomized self-check suites do exactly that.

pub mod algebra;
pub mod branch;
pub mod cluster;
pub mod error;
pub mod hn;
pub mod intersect;
pub mod invariants;
pub mod sampling;

pub use algebra::{
    parse_field, parse_poly, FieldElement, FieldSpec, RatSeries, SPoly, UniPoly, Valuation,
};
pub use branch::{Branch, RegularityClass, RegularityKind, XyPoly};
pub use cluster::matrices::ExactMatrix;
pub use cluster::{Cluster, ClusterPoint, PointKind};
pub use error::{Error, Result, Violation};
pub use hn::{
    euclid_chain, hn_tableau, multiplicity_sequence, synthesize_branch, tableau_validate,
    Coefficient, DepthPolicy, EuclidChain, HNTableau, TableauColumn, TableauExpansion,
};
pub use intersect::{
    contact_order, curvette_check, intersection_number, mu_approximation, noether_intersection,
    resolution_cluster, resultant_intersection, ApproxSpec, ContactData,
};
pub use invariants::{characteristic_data, characteristic_indices, CharData};
