pub mod bounds;
pub mod error;
pub mod fan;
mod fft;
pub mod fourier;
pub mod measure;
pub mod quad;
pub mod random;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
