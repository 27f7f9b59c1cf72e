pub mod blowup;
pub mod branch;
pub mod error;
pub mod homology;
pub mod instance;
pub mod morse;
pub mod presentation;
pub mod simplicial;

pub use error::{Error, Result};
