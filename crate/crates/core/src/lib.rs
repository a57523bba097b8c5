pub mod bases;
pub mod bouquet;
pub mod cli;
pub mod complexity;
pub mod error;
pub mod intlin;
pub mod lawrence;

pub use error::{Error, Result};
