//! Recursive-descent parser with one token of lookahead.
//!
//! Precedence, loosest first (all binary operators left-associative unless
//! marked):
//!
//! ```text
//! where      e where d and d ...
//! ;          sequence (right)
//! :=         assignment (right)
//! = <> < > <= >=
//! &          environment concatenation
//! |->        singleton environment (right)
//! ++ union \\
//! ::         cons (right)
//! + -
//! * /
//! @          environment lookup
//! !          tuple projection
//! application
//! ```
//!
//! `\p+.e`, `meth p+.e`, `let d in e` and `open e in e` extend as far right
//! as possible (up to a `where`); the `else` branch of a conditional stops at
//! `;`. Top-level items may be separated with `;;`.

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;

pub fn parse_program(src: &str) -> Result<SourceProgram, ParseError> {
    let mut p = Parser::new(src)?;
    let mut items = Vec::new();
    loop {
        while p.eat(&Tok::SemiSemi) {}
        if p.at(&Tok::Eof) {
            break;
        }
        items.push(p.item()?);
        if !matches!(p.peek(), Tok::SemiSemi | Tok::Eof | Tok::Let) {
            return Err(p.unexpected(&["`;;`", "`let`", "end of input"]));
        }
    }
    Ok(SourceProgram { items })
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if !p.at(&Tok::Eof) {
        return Err(p.unexpected(&["an operator", "end of input"]));
    }
    Ok(e)
}

/// Parses one REPL entry: a declaration group or an expression.
pub fn parse_item(src: &str) -> Result<Item, ParseError> {
    let mut prog = parse_program(src)?;
    match prog.items.len() {
        1 => Ok(prog.items.pop().expect("one item")),
        n => Err(ParseError {
            line: 1,
            col: 1,
            message: format!("expected exactly one item, found {n}"),
            expected: Vec::new(),
        }),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn starts_atom(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Ident(_)
            | Tok::Upper(_)
            | Tok::Num(_)
            | Tok::Str(_)
            | Tok::Eps
            | Tok::Null
            | Tok::True
            | Tok::False
            | Tok::LParen
            | Tok::LBracket
            | Tok::LBrace
            | Tok::LSetBrace
            | Tok::Case
    )
}

fn starts_prefix(t: &Tok) -> bool {
    matches!(t, Tok::Lambda | Tok::Meth | Tok::If | Tok::Let | Tok::Open)
}

fn starts_pattern(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Ident(_) | Tok::Upper(_) | Tok::Wild | Tok::Num(_) | Tok::Str(_) | Tok::LParen
    )
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].pos
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let pos = self.here();
        ParseError {
            line: pos.line,
            col: pos.col,
            message: format!("unexpected {}", self.peek()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&[&t.to_string()]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["an identifier"])),
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        if self.eat(&Tok::Let) {
            let decls = self.decls()?;
            if self.eat(&Tok::In) {
                let body = self.expr()?;
                return Ok(Item::Expr(Expr::Let(decls, Box::new(body))));
            }
            return Ok(Item::Decls(decls));
        }
        Ok(Item::Expr(self.expr()?))
    }

    // ---- declarations ----

    fn decls(&mut self) -> Result<Vec<Decl>, ParseError> {
        let mut ds = vec![self.decl()?];
        while self.eat(&Tok::And) {
            ds.push(self.decl()?);
        }
        Ok(ds)
    }

    fn decl(&mut self) -> Result<Decl, ParseError> {
        if matches!(self.peek(), Tok::Ident(_)) && self.peek2() == &Tok::Eq {
            let name = self.ident()?;
            self.bump();
            let body = self.expr()?;
            return Ok(Decl::Simple(name, body));
        }
        let mut clauses = vec![self.clause()?];
        while self.eat(&Tok::Bar) {
            clauses.push(self.clause()?);
        }
        Ok(Decl::Fun(clauses))
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let is_meth = self.eat(&Tok::Meth);
        let name = self.ident()?;
        let params = self.patterns()?;
        self.expect(Tok::Eq)?;
        let body = self.expr()?;
        Ok(Clause {
            is_meth,
            name,
            params,
            body,
        })
    }

    // ---- patterns ----

    fn patterns(&mut self) -> Result<Vec<Pattern>, ParseError> {
        let mut ps = vec![self.pattern()?];
        while starts_pattern(self.peek()) {
            ps.push(self.pattern()?);
        }
        Ok(ps)
    }

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        if let Tok::Upper(k) = self.peek().clone() {
            self.bump();
            let inner = self.pattern()?;
            return Ok(Pattern::Con(k, Box::new(inner)));
        }
        self.atomic_pattern()
    }

    fn atomic_pattern(&mut self) -> Result<Pattern, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Pattern::Var(s))
            }
            Tok::Wild => {
                self.bump();
                Ok(Pattern::Wild)
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Pattern::Num(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Pattern::Str(s))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Pattern::Tuple(Vec::new()));
                }
                let first = self.pattern()?;
                if self.eat(&Tok::RParen) {
                    return Ok(first);
                }
                let mut ps = vec![first];
                while self.eat(&Tok::Comma) {
                    ps.push(self.pattern()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Pattern::Tuple(ps))
            }
            _ => Err(self.unexpected(&["a pattern"])),
        }
    }

    // ---- expressions ----

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        let e = self.seq()?;
        if self.eat(&Tok::Where) {
            let ds = self.decls()?;
            return Ok(Expr::Where(Box::new(e), ds));
        }
        Ok(e)
    }

    fn seq(&mut self) -> Result<Expr, ParseError> {
        let first = self.assign()?;
        if self.eat(&Tok::Semi) {
            let rest = self.seq()?;
            return Ok(Expr::Seq(Box::new(first), Box::new(rest)));
        }
        Ok(first)
    }

    fn assign(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.comparison()?;
        if self.eat(&Tok::Assign) {
            let rhs = self.assign()?;
            return Ok(infix(BinOp::Assign, lhs, rhs));
        }
        Ok(lhs)
    }

    fn comparison(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.env_concat()?;
        loop {
            let op = match self.peek() {
                Tok::Eq => BinOp::Eq,
                Tok::Ne => BinOp::Ne,
                Tok::Lt => BinOp::Lt,
                Tok::Gt => BinOp::Gt,
                Tok::Le => BinOp::Le,
                Tok::Ge => BinOp::Ge,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.env_concat()?;
            lhs = infix(op, lhs, rhs);
        }
    }

    fn env_concat(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.maps_to()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.maps_to()?;
            lhs = infix(BinOp::Concat, lhs, rhs);
        }
        Ok(lhs)
    }

    fn maps_to(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.append()?;
        if self.eat(&Tok::MapsTo) {
            let rhs = self.maps_to()?;
            return Ok(infix(BinOp::MapsTo, lhs, rhs));
        }
        Ok(lhs)
    }

    fn append(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.cons()?;
        loop {
            let op = match self.peek() {
                Tok::Append => BinOp::Append,
                Tok::Union => BinOp::Union,
                Tok::SetDiff => BinOp::SetDiff,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.cons()?;
            lhs = infix(op, lhs, rhs);
        }
    }

    fn cons(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.arith()?;
        if self.eat(&Tok::Cons) {
            let rhs = self.cons()?;
            return Ok(infix(BinOp::Cons, lhs, rhs));
        }
        Ok(lhs)
    }

    fn arith(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = infix(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.lookup()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.lookup()?;
            lhs = infix(op, lhs, rhs);
        }
    }

    fn lookup(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.project()?;
        while self.eat(&Tok::At) {
            let rhs = self.project()?;
            lhs = infix(BinOp::Lookup, lhs, rhs);
        }
        Ok(lhs)
    }

    fn project(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.application()?;
        while self.eat(&Tok::Bang) {
            let rhs = self.application()?;
            lhs = infix(BinOp::Project, lhs, rhs);
        }
        Ok(lhs)
    }

    fn application(&mut self) -> Result<Expr, ParseError> {
        if starts_prefix(self.peek()) {
            return self.prefix_form();
        }
        let mut f = self.atom()?;
        loop {
            if starts_atom(self.peek()) {
                let arg = self.atom()?;
                f = Expr::App(Box::new(f), Box::new(arg));
            } else if starts_prefix(self.peek()) && !self.at(&Tok::Let) {
                // a trailing `let` starts the next top-level item instead
                let arg = self.prefix_form()?;
                return Ok(Expr::App(Box::new(f), Box::new(arg)));
            } else {
                return Ok(f);
            }
        }
    }

    fn prefix_form(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Tok::Lambda => {
                let ps = self.patterns()?;
                self.expect(Tok::Dot)?;
                let body = self.seq()?;
                Ok(Expr::Lambda(ps, Box::new(body)))
            }
            Tok::Meth => {
                let ps = self.patterns()?;
                self.expect(Tok::Dot)?;
                let body = self.seq()?;
                Ok(Expr::Meth(ps, Box::new(body)))
            }
            Tok::If => {
                let c = self.seq()?;
                self.expect(Tok::Then)?;
                let t = self.seq()?;
                self.expect(Tok::Else)?;
                let e = self.assign()?;
                Ok(Expr::If(Box::new(c), Box::new(t), Box::new(e)))
            }
            Tok::Let => {
                let ds = self.decls()?;
                self.expect(Tok::In)?;
                let body = self.seq()?;
                Ok(Expr::Let(ds, Box::new(body)))
            }
            Tok::Open => {
                let env = self.seq()?;
                self.expect(Tok::In)?;
                let body = self.seq()?;
                Ok(Expr::Open(Box::new(env), Box::new(body)))
            }
            _ => unreachable!("prefix_form called without a prefix keyword"),
        }
    }

    fn comma_list(&mut self, close: Tok) -> Result<Vec<Expr>, ParseError> {
        let mut es = Vec::new();
        if self.eat(&close) {
            return Ok(es);
        }
        es.push(self.expr()?);
        while self.eat(&Tok::Comma) {
            es.push(self.expr()?);
        }
        self.expect(close)?;
        Ok(es)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let e = match self.peek().clone() {
            Tok::Ident(s) => Expr::Var(s),
            Tok::Upper(s) => Expr::Con(s),
            Tok::Num(n) => Expr::Num(n),
            Tok::Str(s) => Expr::Str(s),
            Tok::Eps => Expr::Eps,
            Tok::Null => Expr::Null,
            Tok::True => Expr::Bool(true),
            Tok::False => Expr::Bool(false),
            Tok::LParen => {
                self.bump();
                let mut es = self.comma_list(Tok::RParen)?;
                return Ok(if es.len() == 1 {
                    es.pop().expect("one element")
                } else {
                    Expr::Tuple(es)
                });
            }
            Tok::LBracket => {
                self.bump();
                return Ok(Expr::List(self.comma_list(Tok::RBracket)?));
            }
            Tok::LSetBrace => {
                self.bump();
                return Ok(Expr::Set(self.comma_list(Tok::RSetBrace)?));
            }
            Tok::LBrace => {
                self.bump();
                self.expect(Tok::RBrace)?;
                return Ok(Expr::EmptyEnv);
            }
            Tok::Case => {
                self.bump();
                let scrutinee = self.expr()?;
                self.expect(Tok::Of)?;
                let mut arms = vec![self.arm()?];
                while self.eat(&Tok::Bar) {
                    arms.push(self.arm()?);
                }
                self.expect(Tok::End)?;
                return Ok(Expr::Case(Box::new(scrutinee), arms));
            }
            _ => return Err(self.unexpected(&["an expression"])),
        };
        self.bump();
        Ok(e)
    }

    fn arm(&mut self) -> Result<Arm, ParseError> {
        let pattern = self.pattern()?;
        self.expect(Tok::Arrow)?;
        let body = self.expr()?;
        Ok(Arm { pattern, body })
    }
}

fn infix(op: BinOp, l: Expr, r: Expr) -> Expr {
    Expr::Infix(op, Box::new(l), Box::new(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Box<Expr> {
        Box::new(Expr::Var(s.into()))
    }

    #[test]
    fn add_declaration() {
        let prog = parse_program("let add(x, y) = x + y").unwrap();
        let expected = Item::Decls(vec![Decl::Fun(vec![Clause {
            is_meth: false,
            name: "add".into(),
            params: vec![Pattern::Tuple(vec![
                Pattern::Var("x".into()),
                Pattern::Var("y".into()),
            ])],
            body: Expr::Infix(BinOp::Add, v("x"), v("y")),
        }])]);
        assert_eq!(prog.items, vec![expected]);
    }

    #[test]
    fn empty_program() {
        assert!(parse_program("").unwrap().items.is_empty());
        assert!(parse_program("  -- only a comment\n;;").unwrap().items.is_empty());
    }

    #[test]
    fn lookup_binds_tighter_than_concat() {
        assert_eq!(
            parse_expr("a @ b & c").unwrap(),
            Expr::Infix(
                BinOp::Concat,
                Box::new(Expr::Infix(BinOp::Lookup, v("a"), v("b"))),
                v("c")
            )
        );
    }

    #[test]
    fn conditional_and_list() {
        assert_eq!(
            parse_expr("if x then 1 else 2").unwrap(),
            Expr::If(v("x"), Box::new(Expr::Num(1)), Box::new(Expr::Num(2)))
        );
        assert_eq!(
            parse_expr("[1,2,3]").unwrap(),
            Expr::List(vec![Expr::Num(1), Expr::Num(2), Expr::Num(3)])
        );
    }

    #[test]
    fn case_with_constructor_arm() {
        assert_eq!(
            parse_expr("case v of K(x) => x end").unwrap(),
            Expr::Case(
                v("v"),
                vec![Arm {
                    pattern: Pattern::Con("K".into(), Box::new(Pattern::Var("x".into()))),
                    body: Expr::Var("x".into()),
                }]
            )
        );
    }

    #[test]
    fn application_is_left_associative() {
        assert_eq!(
            parse_expr("f x y").unwrap(),
            Expr::App(Box::new(Expr::App(v("f"), v("x"))), v("y"))
        );
    }

    #[test]
    fn lambda_body_extends_right() {
        assert_eq!(
            parse_expr(r"\x. x; y").unwrap(),
            Expr::Lambda(
                vec![Pattern::Var("x".into())],
                Box::new(Expr::Seq(v("x"), v("y")))
            )
        );
    }

    #[test]
    fn right_associative_operators() {
        assert_eq!(
            parse_expr("a :: b :: c").unwrap(),
            Expr::Infix(
                BinOp::Cons,
                v("a"),
                Box::new(Expr::Infix(BinOp::Cons, v("b"), v("c")))
            )
        );
        assert_eq!(
            parse_expr("a - b - c").unwrap(),
            Expr::Infix(
                BinOp::Sub,
                Box::new(Expr::Infix(BinOp::Sub, v("a"), v("b"))),
                v("c")
            )
        );
    }

    #[test]
    fn assignment_then_sequence() {
        assert_eq!(
            parse_expr("class := c; self").unwrap(),
            Expr::Seq(
                Box::new(Expr::Infix(BinOp::Assign, v("class"), v("c"))),
                v("self")
            )
        );
    }

    #[test]
    fn grouping_unit_and_tuples() {
        assert_eq!(parse_expr("(x)").unwrap(), Expr::Var("x".into()));
        assert_eq!(parse_expr("()").unwrap(), Expr::Tuple(vec![]));
        assert_eq!(
            parse_expr("(x, y)").unwrap(),
            Expr::Tuple(vec![Expr::Var("x".into()), Expr::Var("y".into())])
        );
    }

    #[test]
    fn clause_alternation_and_groups() {
        let prog = parse_program("let f 1 = \"a\" | f 2 = \"b\" and g = 3\n f 1").unwrap();
        assert_eq!(prog.items.len(), 1, "application swallows the next line");
        let prog = parse_program("let f 1 = \"a\" | f 2 = \"b\" and g = 3 ;; f 1").unwrap();
        assert_eq!(prog.items.len(), 2);
        match &prog.items[0] {
            Item::Decls(ds) => {
                assert_eq!(ds.len(), 2);
                assert!(matches!(&ds[0], Decl::Fun(cs) if cs.len() == 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn let_starts_a_new_item() {
        let prog = parse_program("let x = 1\nlet y = x\n;; y").unwrap();
        assert_eq!(prog.items.len(), 3);
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let err = parse_program("let x = \n  (1, ").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(!err.expected.is_empty());
        let err = parse_expr("if x then 1").unwrap_err();
        assert!(err.expected.contains(&"`else`".to_string()), "{err:?}");
    }
}
