//! Exact computations with bounded double complexes and the finite
//! subcomplexes of solvmanifold forms that carry their cohomology.

pub mod bicomplex;
pub mod builder;
pub mod cohomology;
pub mod decomposition;
pub mod error;
pub mod forms;
pub mod formality;
pub mod linalg;
pub mod report;
pub mod scalar;

pub use bicomplex::{Bicomplex, Bidegree, Label};
pub use cohomology::{ddbar_lemma, Flavor};
pub use decomposition::{cohomology_counts, decompose, page1_check, Decomposition, Shape};
pub use error::{Error, ParseError, Result};
pub use scalar::GaussianRational;
