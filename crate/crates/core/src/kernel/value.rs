//! Runtime values.

use std::fmt;
use std::rc::Rc;

use super::env::{Env, Loc};
use super::interp::Interp;
use super::RuntimeError;
use crate::as_braid::AsObject;
use crate::asmirs_braid::ReflObject;
use crate::desugar::{Ident, KernelExpr};
use crate::graphlib::{Node, ObjectGraph};

/// Contents of an object-graph node: instance variables and methods. In a
/// class graph the first slot holds the list of instance-variable names.
#[derive(Clone)]
pub struct NodeData {
    pub ienv: Value,
    pub menv: Value,
}

pub type Graph = ObjectGraph<NodeData>;
pub type GraphNode = Node<NodeData>;

pub type PrimFn = fn(&Interp, &[Value]) -> Result<Value, RuntimeError>;

pub struct PrimDef {
    pub name: &'static str,
    pub arity: usize,
    pub f: PrimFn,
}

/// A primitive with some of its curried arguments supplied.
pub struct PrimApp {
    pub def: &'static PrimDef,
    pub args: Vec<Value>,
}

pub struct Closure {
    pub param: Ident,
    pub body: Rc<KernelExpr>,
    pub env: Env,
}

#[derive(Clone)]
pub enum Value {
    Num(i64),
    Str(Rc<str>),
    Bool(bool),
    /// Arity 0 is the unit value.
    Tuple(Rc<Vec<Value>>),
    List(Rc<Vec<Value>>),
    /// Members in insertion order, no duplicates.
    Set(Rc<Vec<Value>>),
    Con(Rc<str>, Rc<Value>),
    /// A constructor used as a function.
    Ctor(Rc<str>),
    Closure(Rc<Closure>),
    Prim(Rc<PrimApp>),
    Env(Env),
    /// The failure value ϵ.
    Eps,
    /// The null initialisation value γ.
    Null,
    /// Placeholder produced by `Y`; stands for the contents of its cell.
    Knot(Loc),
    /// Pseudo superclass of the AS `object`.
    NullClass,
    AsObj(Rc<AsObject>),
    Graph(Rc<Graph>),
    Node(Rc<GraphNode>),
    Refl(Rc<ReflObject>),
}

impl Value {
    pub fn unit() -> Value {
        Value::Tuple(Rc::new(Vec::new()))
    }

    pub fn str(s: &str) -> Value {
        Value::Str(s.into())
    }

    pub fn tuple(vs: Vec<Value>) -> Value {
        Value::Tuple(Rc::new(vs))
    }

    pub fn list(vs: Vec<Value>) -> Value {
        Value::List(Rc::new(vs))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Str(_) => "string",
            Value::Bool(_) => "boolean",
            Value::Tuple(_) => "tuple",
            Value::List(_) => "list",
            Value::Set(_) => "set",
            Value::Con(..) => "constructed value",
            Value::Ctor(_) => "constructor",
            Value::Closure(_) | Value::Prim(_) => "function",
            Value::Env(_) => "environment",
            Value::Eps => "eps",
            Value::Null => "null",
            Value::Knot(_) => "fixed point",
            Value::NullClass => "nullclass",
            Value::AsObj(_) => "object",
            Value::Graph(_) => "graph",
            Value::Node(_) => "node",
            Value::Refl(_) => "object",
        }
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Value::Eps)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Tuple(vs) => f.debug_tuple("").field(&**vs).finish(),
            Value::List(vs) => f.debug_list().entries(vs.iter()).finish(),
            Value::Set(vs) => f.debug_set().entries(vs.iter()).finish(),
            Value::Con(k, v) => write!(f, "{k}({v:?})"),
            Value::Env(e) => write!(f, "{e:?}"),
            Value::Knot(l) => write!(f, "<knot {}>", l.0),
            other => write!(f, "<{}>", other.kind()),
        }
    }
}
