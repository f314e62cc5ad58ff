//! Errors from any stage of running source text.

use thiserror::Error;

use crate::desugar::DesugarError;
use crate::kernel::RuntimeError;
use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("desugar error: {0}")]
    Desugar(#[from] DesugarError),
    #[error("runtime error: {0}")]
    Runtime(#[from] RuntimeError),
}

impl Error {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Desugar(_) => 2,
            Error::Runtime(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RuntimeError;

    #[test]
    fn runtime_errors_exit_with_one() {
        let e = Error::from(RuntimeError("boom".into()));
        assert_eq!(e.exit_code(), 1);
        assert_eq!(e.to_string(), "runtime error: boom");
    }
}
