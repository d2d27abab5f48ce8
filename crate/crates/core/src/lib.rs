//! Main effect plans on small blocks.
//!
//! The crate builds mixed-level main effect plans (including plans on
//! non-orthogonal blocks), checks pairwise orthogonality, orthogonality
//! "through" a third factor, and computes information (C-) matrices with
//! exact rational arithmetic.
//!
//! ```
//! use omep_core::{analysis, constructions, linalg};
//!
//! let plan = constructions::build_a12(constructions::SeriesVariant::I);
//! let c = analysis::full_c_matrix(&plan, "A").unwrap();
//! assert_eq!(c, linalg::kn(3).scale(&linalg::int(3)));
//! ```

pub mod analysis;
pub mod block_design;
pub mod constructions;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod oa;
pub mod plan;
pub mod verify;

pub use block_design::BlockDesign;
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use linalg::{RatMatrix, Rational};
pub use oa::OrthogonalArray;
pub use plan::{Factor, Plan};
pub use verify::{ClaimReport, Verdict};
