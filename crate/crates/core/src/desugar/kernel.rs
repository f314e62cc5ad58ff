//! The call-by-value kernel language and its stable textual dump.

use std::fmt::Write;
use std::rc::Rc;

/// Reserved identifiers introduced by desugaring. None of them can be
/// produced by the surface lexer, so user code can neither name nor capture
/// them.
pub mod reserved {
    /// `isntuple(n)(v)`: is `v` a tuple of arity `n`.
    pub const IS_N_TUPLE: &str = "%isntuple";
    /// `isk(tag)(v)`: was `v` built with constructor `tag`.
    pub const IS_K: &str = "%isk";
    /// `stripk(tag)(v)`: payload of a `tag`-constructed value.
    pub const STRIP_K: &str = "%stripk";
    /// Clause alternation combinator.
    pub const ALT: &str = "%alt";
    /// Right extension of a closure's environment.
    pub const HOOK: &str = "%hook";
    /// Binder of `\().e`; never referenced.
    pub const UNIT_BINDER: &str = "%()";
    pub const EMPTY_LIST: &str = "[]";
    pub const EMPTY_ENV: &str = "{}";
    pub const EMPTY_SET: &str = "{||}";
    pub const SINGLETON_SET: &str = "%singleton";
    pub const EPS: &str = "eps";
    pub const NULL: &str = "null";
    pub const TRUE: &str = "true";
    pub const FALSE: &str = "false";
}

pub type Ident = Rc<str>;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelExpr {
    Var(Ident),
    Num(i64),
    Str(Rc<str>),
    Lam(Ident, Rc<KernelExpr>),
    App(Rc<KernelExpr>, Rc<KernelExpr>),
    If(Rc<KernelExpr>, Rc<KernelExpr>, Rc<KernelExpr>),
    /// Arity 0 (unit) or at least 2.
    Tuple(Vec<KernelExpr>),
    Seq(Rc<KernelExpr>, Rc<KernelExpr>),
}

/// Top-level kernel item: a recursive `let` group or an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelItem {
    Let(Vec<(Ident, KernelExpr)>),
    Expr(KernelExpr),
}

impl KernelExpr {
    pub fn var(s: &str) -> Self {
        KernelExpr::Var(s.into())
    }

    pub fn app(f: KernelExpr, a: KernelExpr) -> Self {
        KernelExpr::App(Rc::new(f), Rc::new(a))
    }

    pub fn app2(f: KernelExpr, a: KernelExpr, b: KernelExpr) -> Self {
        Self::app(Self::app(f, a), b)
    }

    pub fn lam(x: &str, body: KernelExpr) -> Self {
        KernelExpr::Lam(x.into(), Rc::new(body))
    }

    pub fn if_(c: KernelExpr, t: KernelExpr, e: KernelExpr) -> Self {
        KernelExpr::If(Rc::new(c), Rc::new(t), Rc::new(e))
    }

    /// Checks the kernel invariants: binders are plain identifiers and no
    /// surface-only construct survives. Returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        match self {
            KernelExpr::Var(x) if x.is_empty() => Err("empty identifier".into()),
            KernelExpr::Var(_) | KernelExpr::Num(_) | KernelExpr::Str(_) => Ok(()),
            KernelExpr::Lam(x, body) => {
                if x.is_empty() || x.contains(|c: char| c.is_whitespace()) {
                    return Err(format!("bad binder {x:?}"));
                }
                body.check_invariants()
            }
            KernelExpr::App(f, a) => {
                f.check_invariants()?;
                a.check_invariants()
            }
            KernelExpr::If(c, t, e) => {
                c.check_invariants()?;
                t.check_invariants()?;
                e.check_invariants()
            }
            KernelExpr::Tuple(es) => {
                if es.len() == 1 {
                    return Err("1-tuple in kernel".into());
                }
                es.iter().try_for_each(|e| e.check_invariants())
            }
            KernelExpr::Seq(a, b) => {
                a.check_invariants()?;
                b.check_invariants()
            }
        }
    }
}

fn is_symbolic(name: &str) -> bool {
    !name.starts_with(|c: char| c.is_alphanumeric() || c == '_' || c == '%')
        || name == "union"
        || name == reserved::HOOK
        || name == reserved::ALT
}

fn infix_spelling(name: &str) -> &str {
    match name {
        reserved::HOOK => "|hook|",
        reserved::ALT => "|alt|",
        other => other,
    }
}

fn is_infix_operator(name: &str) -> bool {
    is_symbolic(name)
        && !matches!(
            name,
            reserved::EMPTY_LIST | reserved::EMPTY_ENV | reserved::EMPTY_SET | reserved::UNIT_BINDER
        )
}

/// Deterministic textual form of a kernel expression (format version 1).
///
/// Applications print as `(f a)`; a saturated binary operator application
/// prints infix as `(a op b)`; λ prints as `\x.body`.
pub fn dump_kernel(e: &KernelExpr) -> String {
    let mut out = String::new();
    dump_into(&mut out, e);
    out
}

pub fn dump_item(item: &KernelItem) -> String {
    match item {
        KernelItem::Let(binds) => {
            let mut out = String::new();
            for (i, (name, e)) in binds.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = write!(out, "let {name} = ");
                dump_into(&mut out, e);
            }
            out
        }
        KernelItem::Expr(e) => dump_kernel(e),
    }
}

fn dump_into(out: &mut String, e: &KernelExpr) {
    match e {
        KernelExpr::Var(x) => out.push_str(x),
        KernelExpr::Num(n) => {
            let _ = write!(out, "{n}");
        }
        KernelExpr::Str(s) => {
            let _ = write!(out, "{s:?}");
        }
        KernelExpr::Lam(x, body) => {
            if &**x == reserved::UNIT_BINDER {
                out.push_str("\\().");
            } else {
                let _ = write!(out, "\\{x}.");
            }
            dump_into(out, body);
        }
        KernelExpr::App(f, a) => {
            if let KernelExpr::App(op, l) = &**f {
                if let KernelExpr::Var(name) = &**op {
                    if is_infix_operator(name) {
                        out.push('(');
                        dump_into(out, l);
                        let _ = write!(out, " {} ", infix_spelling(name));
                        dump_into(out, a);
                        out.push(')');
                        return;
                    }
                }
            }
            out.push('(');
            dump_into(out, f);
            out.push(' ');
            dump_into(out, a);
            out.push(')');
        }
        KernelExpr::If(c, t, f) => {
            out.push_str("(if ");
            dump_into(out, c);
            out.push_str(" then ");
            dump_into(out, t);
            out.push_str(" else ");
            dump_into(out, f);
            out.push(')');
        }
        KernelExpr::Tuple(es) => {
            out.push('(');
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                dump_into(out, e);
            }
            out.push(')');
        }
        KernelExpr::Seq(a, b) => {
            out.push('(');
            dump_into(out, a);
            out.push_str("; ");
            dump_into(out, b);
            out.push(')');
        }
    }
}
