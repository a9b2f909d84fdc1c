//! The object model of `K^b(proj-A)`: complexes of projectives, chain maps,
//! cones, minimal models, isomorphism testing and Krull–Schmidt splitting.

mod chain_map;
#[allow(clippy::module_inception)]
mod complex;
mod cone;
mod decompose;
mod dual;
mod iso;
mod minimize;
mod path_matrix;

pub use chain_map::ChainMap;
pub use complex::ProjComplex;
pub use cone::{cocone, cone, Triangle};
pub use decompose::{decompose, split_connected, Decomposition, Summand};
pub use dual::{dual_complex, dual_map};
pub use iso::{is_isomorphic, IsoOptions, IsoResult};
pub use minimize::{minimize, Minimized};
pub use path_matrix::PathMatrix;
