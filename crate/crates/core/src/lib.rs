pub mod cli;
pub mod elliptic;
pub mod error;
pub mod frame;
pub mod functional;
pub mod oracle;
pub mod poly;
pub mod synthesis;
pub mod theta;

pub use error::{Error, ErrorClass, Result};
