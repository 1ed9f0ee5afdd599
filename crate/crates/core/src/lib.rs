pub mod arith;
pub mod circles;
pub mod cli;
pub mod error;
pub mod fields;
pub mod gen;
pub mod io;
pub mod krange;
pub mod linalg;
pub mod normsets;
pub mod numrange;
pub mod verify;

pub use error::{Error, Result};
