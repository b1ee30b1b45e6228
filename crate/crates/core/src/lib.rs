pub mod acceptance;
pub mod classify;
pub mod cli;
pub mod descent;
pub mod error;
pub mod homology;
pub mod microdiff;
pub mod symcore;
pub mod twogroup;

pub use error::{Error, Result};
