//! Exact analysis of three-way tables under 2-marginal constraints.
//!
//! * [`tables`]: tables, marginals, consistency and Fréchet bounds.
//! * [`axis`]: axis and index relabelings.
//! * [`oracle`]: brute-force ground truth (enumeration, permanents, matchings).
//! * [`transfer`]: layer-by-layer exact counting and entry-range analysis for
//!   tables with a small vertical face.
//! * [`reductions`]: the bounded-to-2-marginal embedding, the 3-dimensional
//!   matching and permanent reductions, and the entry-security gadgets.
//! * [`lp`]: exact rational feasibility of the real relaxation.

pub mod axis;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod reductions;
pub mod tables;
pub mod transfer;

pub use axis::{remap, remap_table, AxisMap};
pub use error::{Error, Result};
pub use tables::{
    check_consistency, dominated, frechet_upper, has_marginals, marginals1_of, marginals2_of, real_satisfies,
    satisfies, Array3, ConsistencyReport, Dims3, Entry, EntryIndex, Equation, Matrix, OneMarginals, RealTable3, Table3,
    TwoMarginals, Violation,
};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
