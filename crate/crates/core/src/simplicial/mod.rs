//! The ordinal category, finite covers and their Čech cosimplicial
//! objects, with splitting oracles that witness acyclicity.

mod cech;
mod cover;
mod oracle;
mod ordinal;

pub use cech::{cech_build, cech_differential, CechLevel, Cochain, CosimplicialCech};
pub use cover::{parse_cover_file, Cover, CoverShape};
pub use oracle::{solve, CoeffCoordinates, LinearDgla, SplittingOracle};
pub use ordinal::{ordinal_compose, ordinal_factor, recompose, relation_instances, OrdinalMap, RelationInstance};
