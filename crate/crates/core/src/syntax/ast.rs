//! Abstract syntax of the sugared surface language.

/// Binary infix operators of the surface language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    MapsTo,
    Concat,
    Lookup,
    Assign,
    Cons,
    Append,
    Union,
    SetDiff,
    Add,
    Sub,
    Mul,
    Div,
    Project,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl BinOp {
    /// Concrete spelling, also used as the operator's identifier in the kernel.
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::MapsTo => "|->",
            BinOp::Concat => "&",
            BinOp::Lookup => "@",
            BinOp::Assign => ":=",
            BinOp::Cons => "::",
            BinOp::Append => "++",
            BinOp::Union => "union",
            BinOp::SetDiff => "\\\\",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Project => "!",
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
        }
    }

    pub const ALL: [BinOp; 19] = [
        BinOp::MapsTo,
        BinOp::Concat,
        BinOp::Lookup,
        BinOp::Assign,
        BinOp::Cons,
        BinOp::Append,
        BinOp::Union,
        BinOp::SetDiff,
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Project,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::Lt,
        BinOp::Gt,
        BinOp::Le,
        BinOp::Ge,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    Var(String),
    Wild,
    /// Arity 0 (the unit pattern `()`) or at least 2.
    Tuple(Vec<Pattern>),
    Con(String, Box<Pattern>),
    Num(i64),
    Str(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(String),
    /// A capitalised constructor name used as a value.
    Con(String),
    Num(i64),
    Str(String),
    Bool(bool),
    Eps,
    Null,
    EmptyEnv,
    Lambda(Vec<Pattern>, Box<Expr>),
    /// Anonymous method `meth p+ . e`.
    Meth(Vec<Pattern>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Infix(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    /// Arity 0 (unit) or at least 2; `(e)` is grouping.
    Tuple(Vec<Expr>),
    Seq(Box<Expr>, Box<Expr>),
    List(Vec<Expr>),
    Set(Vec<Expr>),
    Where(Box<Expr>, Vec<Decl>),
    Let(Vec<Decl>, Box<Expr>),
    Case(Box<Expr>, Vec<Arm>),
    Open(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub pattern: Pattern,
    pub body: Expr,
}

/// One clause `name p+ = body`, or `meth name p+ = body`.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub is_meth: bool,
    pub name: String,
    pub params: Vec<Pattern>,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Simple(String, Expr),
    /// Clause alternation `f1 | f2 | ...`; never empty.
    Fun(Vec<Clause>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    /// A top-level recursive declaration group.
    Decls(Vec<Decl>),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceProgram {
    pub items: Vec<Item>,
}
