pub mod chevalley;
pub mod cone;
pub mod error;
pub mod field;
pub mod gcm;
pub mod laurent;
pub mod roots;
pub mod trd;
pub mod weyl;

pub use error::{Error, Result};
