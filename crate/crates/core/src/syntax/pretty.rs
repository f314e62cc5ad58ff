//! Fully parenthesised printer for the surface AST. Re-parsing the output
//! yields an equal AST.

use std::fmt::Write;

use super::ast::*;

pub fn program(p: &SourceProgram) -> String {
    let mut out = String::new();
    for (i, item) in p.items.iter().enumerate() {
        if i > 0 {
            out.push_str("\n;;\n");
        }
        match item {
            Item::Decls(ds) => {
                out.push_str("let ");
                decls(&mut out, ds);
            }
            Item::Expr(e) => expr(&mut out, e),
        }
    }
    out
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut out = String::new();
    expr(&mut out, e);
    out
}

fn string_lit(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn decls(out: &mut String, ds: &[Decl]) {
    for (i, d) in ds.iter().enumerate() {
        if i > 0 {
            out.push_str(" and ");
        }
        match d {
            Decl::Simple(name, body) => {
                let _ = write!(out, "{name} = ");
                paren_expr(out, body);
            }
            Decl::Fun(clauses) => {
                for (j, c) in clauses.iter().enumerate() {
                    if j > 0 {
                        out.push_str(" | ");
                    }
                    if c.is_meth {
                        out.push_str("meth ");
                    }
                    out.push_str(&c.name);
                    for p in &c.params {
                        out.push(' ');
                        pattern(out, p);
                    }
                    out.push_str(" = ");
                    paren_expr(out, &c.body);
                }
            }
        }
    }
}

pub fn pattern(out: &mut String, p: &Pattern) {
    match p {
        Pattern::Var(s) => out.push_str(s),
        Pattern::Wild => out.push('_'),
        Pattern::Num(n) => {
            let _ = write!(out, "{n}");
        }
        Pattern::Str(s) => string_lit(out, s),
        Pattern::Con(k, inner) => {
            let _ = write!(out, "({k} ");
            pattern(out, inner);
            out.push(')');
        }
        Pattern::Tuple(ps) => {
            out.push('(');
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                pattern(out, p);
            }
            out.push(')');
        }
    }
}

fn paren_expr(out: &mut String, e: &Expr) {
    out.push('(');
    expr(out, e);
    out.push(')');
}

fn list(out: &mut String, open: &str, es: &[Expr], close: &str) {
    out.push_str(open);
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr(out, e);
    }
    out.push_str(close);
}

fn expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Var(s) | Expr::Con(s) => out.push_str(s),
        Expr::Num(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Str(s) => string_lit(out, s),
        Expr::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Expr::Eps => out.push_str("eps"),
        Expr::Null => out.push_str("null"),
        Expr::EmptyEnv => out.push_str("{}"),
        Expr::Lambda(ps, body) | Expr::Meth(ps, body) => {
            out.push_str(if matches!(e, Expr::Lambda(..)) { "(\\" } else { "(meth" });
            for p in ps {
                out.push(' ');
                pattern(out, p);
            }
            out.push_str(". ");
            paren_expr(out, body);
            out.push(')');
        }
        Expr::App(f, a) => {
            out.push('(');
            expr(out, f);
            out.push(' ');
            paren_expr(out, a);
            out.push(')');
        }
        Expr::Infix(op, l, r) => {
            out.push('(');
            paren_expr(out, l);
            let _ = write!(out, " {} ", op.symbol());
            paren_expr(out, r);
            out.push(')');
        }
        Expr::If(c, t, f) => {
            out.push_str("(if ");
            paren_expr(out, c);
            out.push_str(" then ");
            paren_expr(out, t);
            out.push_str(" else ");
            paren_expr(out, f);
            out.push(')');
        }
        Expr::Tuple(es) => list(out, "(", es, ")"),
        Expr::Seq(a, b) => {
            out.push('(');
            paren_expr(out, a);
            out.push_str("; ");
            paren_expr(out, b);
            out.push(')');
        }
        Expr::List(es) => list(out, "[", es, "]"),
        Expr::Set(es) => list(out, "{|", es, "|}"),
        Expr::Where(body, ds) => {
            out.push('(');
            paren_expr(out, body);
            out.push_str(" where ");
            decls(out, ds);
            out.push(')');
        }
        Expr::Let(ds, body) => {
            out.push_str("(let ");
            decls(out, ds);
            out.push_str(" in ");
            paren_expr(out, body);
            out.push(')');
        }
        Expr::Case(scrutinee, arms) => {
            out.push_str("case ");
            paren_expr(out, scrutinee);
            out.push_str(" of ");
            for (i, arm) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                pattern(out, &arm.pattern);
                out.push_str(" => ");
                paren_expr(out, &arm.body);
            }
            out.push_str(" end");
        }
        Expr::Open(env, body) => {
            out.push_str("(open ");
            paren_expr(out, env);
            out.push_str(" in ");
            paren_expr(out, body);
            out.push(')');
        }
    }
}
