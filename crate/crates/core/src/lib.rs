pub mod error;
pub mod field;
pub mod integral;
pub mod linalg;
pub mod ore;
pub mod qvalues;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
