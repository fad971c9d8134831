//! Numerical laboratory for Jacob's ladders over the Hardy–Littlewood
//! integral J(T) = ∫₀ᵀ |ζ(1/2 + it)|² dt.

pub mod constants;
pub mod error;
pub mod fermat;
pub mod ladder;
pub mod proliferation;
pub mod quadrature;
pub mod raabe;
pub mod report;
pub mod roots;
pub mod special;

pub use constants::Constants;
pub use error::{Error, Result};
pub use ladder::{Ladder, LadderConfig, LadderLaws, ReverseTower};
pub use quadrature::{CheckpointTable, HardyLittlewood, IntegralResult};
pub use fermat::{FermatRational, FunctionalTrace, Variant};
pub use proliferation::{GramResult, ProliferationSpec, Proliferator};
pub use raabe::DecompositionReport;
