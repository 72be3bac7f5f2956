//! Learned quality-diversity competition for evolutionary search.

pub mod armtask;
pub mod benchfn;
pub mod competition;
pub mod descriptor;
pub mod error;
pub mod evoloop;
pub mod expcli;
pub mod lqdnet;
pub mod matrix;
pub mod metaopt;
pub mod metrics;
pub mod rng;
pub mod stats;
pub mod task;

pub use error::{Error, Result};
