pub mod cli;
pub mod colligation;
pub mod error;
pub mod families;
pub mod hardy;
pub mod io;
pub mod linalg;
pub mod scenarios;
pub mod symbol;
pub mod unitary_part;

pub use error::{Error, Result};
