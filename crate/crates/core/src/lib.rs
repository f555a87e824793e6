//! Mertens-type sums and products over the prime ideals of a number field,
//! with the explicit GRH-conditional error bounds they satisfy.
//!
//! Real-valued computations are generic over [`Real`] (`f32`, `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// `!(x > y)` comparisons are deliberate: they reject NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod bounds;
pub mod catalog;
pub mod chebotarev;
pub mod error;
pub mod field;
pub mod fp_poly;
pub mod harness;
pub mod idealsieve;
pub mod mertens;
pub mod poly;
pub mod records;
pub mod residue;
pub mod scalar;
pub mod splitting;

pub use error::{Error, Result};
pub use field::{FieldKind, FieldSpec, Signature};
pub use scalar::{CompensatedSum, Real};
pub use splitting::{PrimeFactor, SplittingType};

pub type MertensCheckpoint = mertens::MertensCheckpoint<f64>;
pub type MertensConstants = mertens::MertensConstants<f64>;
pub type Residuals = mertens::Residuals<f64>;
pub type Accumulation = mertens::Accumulation<f64>;
pub type ResidueValue = residue::ResidueValue<f64>;
pub type BoundInputs = bounds::BoundInputs<f64>;
pub type BoundReport = harness::BoundReport<f64>;
pub type ClassSums = chebotarev::ClassSums<f64>;
