//! IO, configuration, experiment orchestration and the validation battery
//! for `polya-contact-core`.

pub mod battery;
pub mod config;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod formats;
pub mod pvalue;
pub mod rng;

pub use config::{ExperimentConfig, ExperimentKind, TimeSpec};
pub use error::{Error, Result};
