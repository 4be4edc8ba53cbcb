pub mod bounds;
pub mod contfrac;
pub mod enumerate;
pub mod error;
pub mod numerics;
pub mod reduction;
pub mod report;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
