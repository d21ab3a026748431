pub mod alternatives;
pub mod characterization;
pub mod data;
pub mod efficiency;
pub mod error;
pub mod null;
pub mod optimize;
pub mod power;
pub mod quadrature;
pub mod rng;
pub mod sample;
pub mod vstat;

pub use error::{Error, Result};
pub use sample::SortedSample;

/// Seed used by the command line and the documentation unless overridden.
pub const DEFAULT_SEED: u64 = 20_160_523;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/statistics.md")]
    struct Statistics;
    #[doc = include_str!("../../../book/src/calibration.md")]
    struct Calibration;
    #[doc = include_str!("../../../book/src/alternatives.md")]
    struct Alternatives;
    #[doc = include_str!("../../../book/src/efficiency.md")]
    struct Efficiency;
    #[doc = include_str!("../../../book/src/power.md")]
    struct Power;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
