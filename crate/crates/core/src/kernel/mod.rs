//! Call-by-value evaluation of kernel expressions over a store of
//! updateable locations.

pub mod env;
pub mod interp;
mod prims;
pub mod print;
pub mod value;

use thiserror::Error;

pub use env::{Env, EnvShape, Loc};
pub use interp::{Interp, TraceMode, DEFAULT_MAX_DEPTH};
pub use value::{Closure, Graph, GraphNode, NodeData, PrimApp, PrimDef, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct RuntimeError(pub String);

pub type Result<T> = std::result::Result<T, RuntimeError>;

pub(crate) fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(RuntimeError(msg.into()))
}

/// Names of the builtin primitives and constants.
pub fn builtin_names() -> Vec<&'static str> {
    prims::names()
}

pub(crate) use prims::{env as expect_env, graph as expect_graph, list as expect_list, object_id, send};

/// A list of strings as a value.
pub fn list_of_strings(names: &[std::rc::Rc<str>]) -> Value {
    Value::list(names.iter().map(|n| Value::Str(n.clone())).collect())
}

/// The strings of a list value; `what` names it in errors.
pub fn string_list(i: &Interp, v: &Value, what: &str) -> Result<Vec<std::rc::Rc<str>>> {
    let l = prims::list(i, v).map_err(|e| RuntimeError(format!("{what}: {e}")))?;
    l.iter()
        .map(|s| match i.force(s)? {
            Value::Str(s) => Ok(s),
            other => fail(format!("{what}: expected a list of strings, found a {}", other.kind())),
        })
        .collect()
}
