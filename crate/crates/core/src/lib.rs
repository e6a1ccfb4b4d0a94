//! Higher-rank graphs: validation, composition and factorization, standard
//! constructions, infinite-path analyses, and exact computation in the
//! dense *-algebra spanned by `s_λ s_μ*`.

pub mod algebra;
pub mod constructions;
pub mod degree;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod group;
pub mod iso;
pub mod matrix;
pub mod skeleton;

pub use degree::{Degree, Grade};
pub use error::{Error, Result};
pub use graph::{KGraph, Morphism};
pub use matrix::IntMatrix;
pub use skeleton::{EdgeId, Skeleton, Square, SquareSet, VertexId};
