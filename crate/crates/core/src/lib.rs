//! Exact symbolic computations for germs of matrix families.
//!
//! A matrix family is a polynomial map from a parameter space `(C^s, 0)` into
//! square (`Sq`), symmetric (`Sym`) or even-size skew-symmetric (`Sk`)
//! matrices, considered up to a change of parameters together with row and
//! column operations. The crate computes Tjurina numbers of such germs by
//! exact codimension counts, determinants and Pfaffians, suspensions between
//! the three kinds, one-variable normal forms, recognition of the
//! singularity class of the determinantal function, and checks a registry
//! of simple normal forms against all of the above.
//!
//! All arithmetic is over the rationals and exact.

pub mod catalog;
pub mod cli;
pub mod determinator;
pub mod error;
pub mod family;
pub mod linalg;
pub mod localalg;
pub mod parse;
pub mod ring;
pub mod simplex;
pub mod suspend;
pub mod tangent;
pub mod weights;

pub use error::{Error, Result};
pub use family::{EquivalenceCertificate, Kind, MatrixFamily, PolyMatrix, RowColOp, Side};
pub use localalg::{Codim, Exactness, GradedQuotient, ModuleGeneratorSet};
pub use ring::{Monomial, Poly, PolyMap};
pub use weights::WeightSystem;
