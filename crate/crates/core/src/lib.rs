//! Partition-preserving transformation semigroups with prescribed characters.

mod bits;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod greens;
pub mod harness;
pub mod maps;
pub mod mode;
pub mod partition;
pub mod regularity;
pub mod unit_regularity;

pub use ensemble::{Ensemble, IndexSemigroup, Instance, DEFAULT_ELEMENT_CAP};
pub use error::{Error, Result};
pub use greens::{GreenContext, GreenWitness, Relation, SearchLimits};
pub use maps::{FiniteMap, SetPartition};
pub use mode::Mode;
pub use partition::{pi_restricted, BlockDecomposition, BlockMap, Partition};
