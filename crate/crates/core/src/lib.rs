pub mod bratteli;
pub mod characters;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod group;
pub mod intertwiners;
pub mod reps;

pub use error::{Error, Result};
