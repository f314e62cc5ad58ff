//! A small functional language with first-class environments, and three
//! object systems bootstrapped in it.

pub mod as_braid;
pub mod asmi_braid;
pub mod asmirs_braid;
pub mod desugar;
pub mod error;
pub mod graphlib;
pub mod kernel;
pub mod oracle;
pub mod session;
pub mod syntax;

pub use error::Error;
pub use session::{Braid, Options, Session};
