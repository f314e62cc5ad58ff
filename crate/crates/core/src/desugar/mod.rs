//! Translation of the surface AST to the kernel language.

mod kernel;

pub use kernel::{dump_item, dump_kernel, reserved, Ident, KernelExpr, KernelItem};

use std::rc::Rc;

use thiserror::Error;

use crate::syntax::{Arm, BinOp, Clause, Decl, Expr, Item, Pattern, SourceProgram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesugarError {
    #[error("clause group mixes the names `{0}` and `{1}`")]
    MixedClauseNames(String, String),
}

/// Desugars one expression. Fresh identifiers are numbered from zero.
pub fn desugar(e: &Expr) -> Result<KernelExpr, DesugarError> {
    Desugarer::default().expr(e)
}

pub fn desugar_item(item: &Item) -> Result<KernelItem, DesugarError> {
    Desugarer::default().item(item)
}

pub fn desugar_program(p: &SourceProgram) -> Result<Vec<KernelItem>, DesugarError> {
    let mut d = Desugarer::default();
    p.items.iter().map(|item| d.item(item)).collect()
}

/// Kernel text of a whole program, one item per paragraph.
pub fn dump_program(items: &[KernelItem]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&dump_item(item));
        out.push('\n');
    }
    out
}

fn var(s: &str) -> KernelExpr {
    KernelExpr::var(s)
}

fn binop(op: &str, l: KernelExpr, r: KernelExpr) -> KernelExpr {
    KernelExpr::app2(var(op), l, r)
}

/// `(e1 ↪ λ().e2)()`
pub fn open_kernel(env: KernelExpr, body: KernelExpr) -> KernelExpr {
    let thunk = KernelExpr::lam(reserved::UNIT_BINDER, body);
    KernelExpr::app(binop(reserved::HOOK, env, thunk), KernelExpr::Tuple(Vec::new()))
}

#[derive(Default)]
struct Desugarer {
    fresh: usize,
}

impl Desugarer {
    fn fresh(&mut self) -> String {
        let name = format!("%i{}", self.fresh);
        self.fresh += 1;
        name
    }

    fn item(&mut self, item: &Item) -> Result<KernelItem, DesugarError> {
        match item {
            Item::Decls(ds) => {
                let mut binds = Vec::with_capacity(ds.len());
                for d in ds {
                    let (name, e) = self.decl(d)?;
                    binds.push((Ident::from(name.as_str()), e));
                }
                Ok(KernelItem::Let(binds))
            }
            Item::Expr(e) => Ok(KernelItem::Expr(self.expr(e)?)),
        }
    }

    fn expr(&mut self, e: &Expr) -> Result<KernelExpr, DesugarError> {
        Ok(match e {
            Expr::Var(x) | Expr::Con(x) => var(x),
            Expr::Num(n) => KernelExpr::Num(*n),
            Expr::Str(s) => KernelExpr::Str(s.as_str().into()),
            Expr::Bool(true) => var(reserved::TRUE),
            Expr::Bool(false) => var(reserved::FALSE),
            Expr::Eps => var(reserved::EPS),
            Expr::Null => var(reserved::NULL),
            Expr::EmptyEnv => var(reserved::EMPTY_ENV),
            Expr::Lambda(ps, body) => {
                let body = self.expr(body)?;
                self.lambda(ps, body)
            }
            Expr::Meth(ps, body) => self.meth(ps, body)?,
            Expr::App(f, a) => KernelExpr::app(self.expr(f)?, self.expr(a)?),
            Expr::Infix(op, l, r) => binop(op.symbol(), self.expr(l)?, self.expr(r)?),
            Expr::If(c, t, f) => KernelExpr::if_(self.expr(c)?, self.expr(t)?, self.expr(f)?),
            Expr::Tuple(es) => KernelExpr::Tuple(self.exprs(es)?),
            Expr::Seq(a, b) => KernelExpr::Seq(Rc::new(self.expr(a)?), Rc::new(self.expr(b)?)),
            Expr::List(es) => {
                let mut out = var(reserved::EMPTY_LIST);
                for e in self.exprs(es)?.into_iter().rev() {
                    out = binop(BinOp::Cons.symbol(), e, out);
                }
                out
            }
            Expr::Set(es) => {
                let mut parts = self
                    .exprs(es)?
                    .into_iter()
                    .map(|e| KernelExpr::app(var(reserved::SINGLETON_SET), e));
                match parts.next() {
                    None => var(reserved::EMPTY_SET),
                    Some(first) => {
                        parts.fold(first, |acc, s| binop(BinOp::Union.symbol(), acc, s))
                    }
                }
            }
            Expr::Where(body, ds) | Expr::Let(ds, body) => {
                let (p, rhs) = self.decl_sequence(ds)?;
                let body = self.expr(body)?;
                let f = self.lambda(std::slice::from_ref(&p), body);
                KernelExpr::app(f, rhs)
            }
            Expr::Case(scrutinee, arms) => {
                let s = self.expr(scrutinee)?;
                let f = self.arms(arms)?;
                KernelExpr::app(f, s)
            }
            Expr::Open(env, body) => open_kernel(self.expr(env)?, self.expr(body)?),
        })
    }

    fn exprs(&mut self, es: &[Expr]) -> Result<Vec<KernelExpr>, DesugarError> {
        es.iter().map(|e| self.expr(e)).collect()
    }

    fn arms(&mut self, arms: &[Arm]) -> Result<KernelExpr, DesugarError> {
        let mut out: Option<KernelExpr> = None;
        for arm in arms {
            let body = self.expr(&arm.body)?;
            let f = self.lambda(std::slice::from_ref(&arm.pattern), body);
            out = Some(match out {
                None => f,
                Some(acc) => binop(reserved::ALT, acc, f),
            });
        }
        Ok(out.expect("case has at least one arm"))
    }

    /// `λp1 p2 ... pn.body`, curried, each pattern compiled to a test.
    fn lambda(&mut self, ps: &[Pattern], body: KernelExpr) -> KernelExpr {
        ps.iter().rev().fold(body, |acc, p| self.pattern_lambda(p, acc))
    }

    fn pattern_lambda(&mut self, p: &Pattern, body: KernelExpr) -> KernelExpr {
        match p {
            Pattern::Var(x) => KernelExpr::lam(x, body),
            Pattern::Wild => {
                let i = self.fresh();
                KernelExpr::lam(&i, body)
            }
            Pattern::Tuple(ps) => {
                let i = self.fresh();
                let test = KernelExpr::app2(
                    var(reserved::IS_N_TUPLE),
                    KernelExpr::Num(ps.len() as i64),
                    var(&i),
                );
                // let p1 = i!1 in let p2 = i!2 in ... body
                let mut inner = body;
                for (k, sub) in ps.iter().enumerate().rev() {
                    let proj = binop(BinOp::Project.symbol(), var(&i), KernelExpr::Num(k as i64 + 1));
                    inner = KernelExpr::app(self.pattern_lambda(sub, inner), proj);
                }
                KernelExpr::lam(&i, KernelExpr::if_(test, inner, var(reserved::EPS)))
            }
            Pattern::Con(k, sub) => {
                let i = self.fresh();
                let test = KernelExpr::app2(var(reserved::IS_K), var(k), var(&i));
                let strip = KernelExpr::app2(var(reserved::STRIP_K), var(k), var(&i));
                let inner = KernelExpr::app(self.pattern_lambda(sub, body), strip);
                KernelExpr::lam(&i, KernelExpr::if_(test, inner, var(reserved::EPS)))
            }
            Pattern::Num(_) | Pattern::Str(_) => {
                let i = self.fresh();
                let c = match p {
                    Pattern::Num(n) => KernelExpr::Num(*n),
                    Pattern::Str(s) => KernelExpr::Str(s.as_str().into()),
                    _ => unreachable!(),
                };
                let test = binop(BinOp::Eq.symbol(), var(&i), c);
                KernelExpr::lam(&i, KernelExpr::if_(test, body, var(reserved::EPS)))
            }
        }
    }

    /// `meth p̃.e  →  λ(self, next, i) p̃. open i in e`
    fn meth(&mut self, ps: &[Pattern], body: &Expr) -> Result<KernelExpr, DesugarError> {
        let i = self.fresh();
        let body = open_kernel(var(&i), self.expr(body)?);
        let inner = self.lambda(ps, body);
        let hidden = Pattern::Tuple(vec![
            Pattern::Var("self".into()),
            Pattern::Var("next".into()),
            Pattern::Var(i),
        ]);
        Ok(self.pattern_lambda(&hidden, inner))
    }

    fn decl(&mut self, d: &Decl) -> Result<(String, KernelExpr), DesugarError> {
        match d {
            Decl::Simple(name, e) => Ok((name.clone(), self.expr(e)?)),
            Decl::Fun(clauses) => {
                let name = clause_name(clauses)?;
                let mut out: Option<KernelExpr> = None;
                for c in clauses {
                    let f = self.clause_body(c)?;
                    out = Some(match out {
                        None => f,
                        Some(acc) => binop(reserved::ALT, acc, f),
                    });
                }
                Ok((name, out.expect("clause group is never empty")))
            }
        }
    }

    fn clause_body(&mut self, c: &Clause) -> Result<KernelExpr, DesugarError> {
        if c.is_meth {
            self.meth(&c.params, &c.body)
        } else {
            let body = self.expr(&c.body)?;
            Ok(self.lambda(&c.params, body))
        }
    }

    /// `i1 = e1 ... in = en  →  (i1, ..., in) = (e1, ..., en)`
    fn decl_sequence(&mut self, ds: &[Decl]) -> Result<(Pattern, KernelExpr), DesugarError> {
        let mut names = Vec::with_capacity(ds.len());
        let mut values = Vec::with_capacity(ds.len());
        for d in ds {
            let (name, e) = self.decl(d)?;
            names.push(Pattern::Var(name));
            values.push(e);
        }
        if names.len() == 1 {
            Ok((names.pop().expect("one"), values.pop().expect("one")))
        } else {
            Ok((Pattern::Tuple(names), KernelExpr::Tuple(values)))
        }
    }
}

fn clause_name(clauses: &[Clause]) -> Result<String, DesugarError> {
    let first = &clauses[0].name;
    for c in &clauses[1..] {
        if &c.name != first {
            return Err(DesugarError::MixedClauseNames(first.clone(), c.name.clone()));
        }
    }
    Ok(first.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_program};

    fn dump(src: &str) -> String {
        dump_kernel(&desugar(&parse_expr(src).unwrap()).unwrap())
    }

    #[test]
    fn identity_lambda_is_already_kernel() {
        assert_eq!(dump("\\x.x"), "\\x.x");
    }

    #[test]
    fn curried_lambda() {
        assert_eq!(dump("\\x y.x"), "\\x.\\y.x");
    }

    #[test]
    fn infix_is_curried_application() {
        let k = desugar(&parse_expr("1 + 2").unwrap()).unwrap();
        assert_eq!(k, KernelExpr::app2(var("+"), KernelExpr::Num(1), KernelExpr::Num(2)));
        assert_eq!(dump_kernel(&k), "(1 + 2)");
    }

    #[test]
    fn open_uses_hook() {
        assert_eq!(dump("open e in x"), "((e |hook| \\().x) ())");
    }

    #[test]
    fn tuple_pattern() {
        assert_eq!(
            dump("\\(a, b).a"),
            "\\%i0.(if ((%isntuple 2) %i0) then (\\a.(\\b.a (%i0 ! 2)) (%i0 ! 1)) else eps)"
        );
    }

    #[test]
    fn constructor_and_constant_patterns() {
        assert_eq!(
            dump("\\K x.x"),
            "\\%i0.(if ((%isk K) %i0) then (\\x.x ((%stripk K) %i0)) else eps)"
        );
        assert_eq!(dump("\\1.2"), "\\%i0.(if (%i0 = 1) then 2 else eps)");
    }

    #[test]
    fn clause_alternation() {
        let p = parse_program("let f 1 = \"a\" | f 2 = \"b\"").unwrap();
        let items = desugar_program(&p).unwrap();
        assert_eq!(
            dump_program(&items),
            "let f = (\\%i0.(if (%i0 = 1) then \"a\" else eps) |alt| \\%i1.(if (%i1 = 2) then \"b\" else eps))\n"
        );
    }

    #[test]
    fn mixed_names_are_rejected() {
        let p = parse_program("let f 1 = 1 | g 2 = 2").unwrap();
        assert_eq!(
            desugar_program(&p),
            Err(DesugarError::MixedClauseNames("f".into(), "g".into()))
        );
    }

    #[test]
    fn lists_sets_and_case() {
        assert_eq!(dump("[1, 2]"), "(1 :: (2 :: []))");
        assert_eq!(dump("{||}"), "{||}");
        assert_eq!(dump("{|1, 2|}"), "((%singleton 1) union (%singleton 2))");
        assert_eq!(dump("case v of x => x end"), "(\\x.x v)");
    }

    #[test]
    fn let_with_two_declarations_binds_a_tuple() {
        let k = desugar(&parse_expr("let a = 1 and b = 2 in a").unwrap()).unwrap();
        let s = dump_kernel(&k);
        assert!(s.ends_with("(1, 2))"), "{s}");
        assert!(s.contains("%isntuple 2"), "{s}");
    }

    #[test]
    fn meth_has_hidden_parameters() {
        let s = dump("meth x.x");
        assert!(s.starts_with("\\%i1.(if ((%isntuple 3) %i1) then (\\self.(\\next.(\\%i0."), "{s}");
        assert!(s.contains("((%i0 |hook| \\().x) ())"), "{s}");
    }

    #[test]
    fn output_satisfies_kernel_invariants() {
        let src = "let f (a, K b) _ \"s\" = a ; b where z = [1] \n;; case 3 of 1 => 2 | y => y end";
        let p = parse_program(src).unwrap();
        for item in desugar_program(&p).unwrap() {
            match item {
                KernelItem::Let(bs) => bs.iter().for_each(|(_, e)| e.check_invariants().unwrap()),
                KernelItem::Expr(e) => e.check_invariants().unwrap(),
            }
        }
    }
}
