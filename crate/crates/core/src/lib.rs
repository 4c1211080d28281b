pub mod bandwidth;
pub mod cli;
pub mod design;
pub mod error;
pub mod exact;
pub mod extension;
pub mod gf;
pub mod layered;
pub mod linalg;
pub mod mds;
pub mod nodefile;
pub mod precoded;
pub mod region;
pub mod verify;

pub use error::{Error, Result};
