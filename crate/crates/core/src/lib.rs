pub mod error;
pub mod specfun;

pub use error::{Error, Result};
pub mod constants;
pub mod quad;
pub mod verify;
pub mod phase;
pub mod sample;
