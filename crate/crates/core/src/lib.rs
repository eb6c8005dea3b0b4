//! Covering-array toolkit: exact LLL upper bounds on the minimal width of
//! t-alpha covering arrays under a tiled probability model, tiled random
//! sampling, an exhaustive covering verifier, and a resampling-based
//! constructor, all cross-checked by independent enumeration and
//! Monte-Carlo oracles.

pub mod bounds;
pub mod construct;
pub mod exact;
pub mod model;
pub mod montecarlo;
pub mod verify;

pub use bounds::{BoundReport, CoveringParams, DegreeMode, TileSpec};
pub use exact::{ExactInteger, ExactRational};
pub use model::ArrayMatrix;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("width {n} is not a positive multiple of the tile width {tile_width}")]
    Divisibility { n: u64, tile_width: u64 },
    #[error("work bound exceeded: {0}")]
    WorkBoundExceeded(String),
    #[error("construction failed: {0}")]
    Construction(construct::ConstructFailure),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
