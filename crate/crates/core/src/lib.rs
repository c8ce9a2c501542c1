pub mod building;
pub mod commands;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod glq;
pub mod intersection;
pub mod lemma;
pub mod orders;
pub mod report;

pub use error::{Error, Result};
