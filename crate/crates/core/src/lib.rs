pub mod additive;
pub mod error;
pub mod group;
pub mod k1;
pub mod padic;
pub mod ring;
pub mod suite;

pub use error::{Error, Result};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "whitehead-lab/1";
