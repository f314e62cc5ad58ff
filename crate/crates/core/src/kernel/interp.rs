//! The evaluator.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::env::{Env, Loc};
use super::value::{Closure, PrimApp, Value};
use super::{fail, prims, Result};
use crate::desugar::{KernelExpr, KernelItem};

pub const DEFAULT_MAX_DEPTH: usize = 10_000;

/// Where `#send` trace lines go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMode {
    #[default]
    Off,
    Stdout,
    Collect,
}

/// One interpreter instance: a store, the top-level bindings and the
/// braid state. Not shareable across threads.
pub struct Interp {
    // `None` marks a cell reserved by `Y` whose value is not known yet.
    store: RefCell<Vec<Option<Value>>>,
    globals: RefCell<HashMap<Rc<str>, Loc>>,
    global_order: RefCell<Vec<Rc<str>>>,
    depth: Cell<usize>,
    eq_depth: Cell<usize>,
    max_depth: Cell<usize>,
    next_id: Cell<u64>,
    trace: Cell<TraceMode>,
    trace_lines: RefCell<Vec<String>>,
    meta_steps: Cell<u64>,
    rng: RefCell<ChaCha8Rng>,
    // The bootstrapped reflective `class`, known to the send primitive.
    rs_class: RefCell<Option<Value>>,
}

impl Default for Interp {
    fn default() -> Self {
        Interp::new()
    }
}

impl Interp {
    pub fn new() -> Interp {
        Interp {
            store: RefCell::new(Vec::new()),
            globals: RefCell::new(HashMap::new()),
            global_order: RefCell::new(Vec::new()),
            depth: Cell::new(0),
            eq_depth: Cell::new(0),
            max_depth: Cell::new(DEFAULT_MAX_DEPTH),
            next_id: Cell::new(1),
            trace: Cell::new(TraceMode::Off),
            trace_lines: RefCell::new(Vec::new()),
            meta_steps: Cell::new(0),
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(0)),
            rs_class: RefCell::new(None),
        }
    }

    pub fn set_max_depth(&self, n: usize) {
        self.max_depth.set(n);
    }

    pub fn set_seed(&self, seed: u64) {
        *self.rng.borrow_mut() = ChaCha8Rng::seed_from_u64(seed);
    }

    pub fn with_rng<T>(&self, f: impl FnOnce(&mut ChaCha8Rng) -> T) -> T {
        f(&mut self.rng.borrow_mut())
    }

    pub fn set_trace(&self, mode: TraceMode) {
        self.trace.set(mode);
    }

    pub fn tracing(&self) -> bool {
        self.trace.get() != TraceMode::Off
    }

    pub fn trace(&self, line: String) {
        match self.trace.get() {
            TraceMode::Off => {}
            TraceMode::Stdout => println!("#send {line}"),
            TraceMode::Collect => self.trace_lines.borrow_mut().push(format!("#send {line}")),
        }
    }

    pub fn take_trace(&self) -> Vec<String> {
        std::mem::take(&mut self.trace_lines.borrow_mut())
    }

    pub fn meta_steps(&self) -> u64 {
        self.meta_steps.get()
    }

    pub(crate) fn count_meta_step(&self) {
        self.meta_steps.set(self.meta_steps.get() + 1);
    }

    /// Identities for graphs, node addresses, edges and objects share one
    /// counter, so they are allocated in program order.
    pub fn fresh_id(&self) -> u64 {
        let id = self.next_id.get();
        self.next_id.set(id + 1);
        id
    }

    pub(crate) fn rs_class(&self) -> Option<Value> {
        self.rs_class.borrow().clone()
    }

    pub(crate) fn set_rs_class(&self, v: Value) {
        *self.rs_class.borrow_mut() = Some(v);
    }

    // ---- store ----

    pub fn alloc(&self, v: Value) -> Loc {
        let mut s = self.store.borrow_mut();
        s.push(Some(v));
        Loc(s.len() - 1)
    }

    pub(crate) fn alloc_pending(&self) -> Loc {
        let mut s = self.store.borrow_mut();
        s.push(None);
        Loc(s.len() - 1)
    }

    pub fn get(&self, l: Loc) -> Result<Value> {
        match &self.store.borrow()[l.0] {
            Some(v) => Ok(v.clone()),
            None => fail("fixed point used before it was defined"),
        }
    }

    pub fn set(&self, l: Loc, v: Value) {
        self.store.borrow_mut()[l.0] = Some(v);
    }

    pub fn store_size(&self) -> usize {
        self.store.borrow().len()
    }

    /// Follows `Y` placeholders to the value they stand for.
    pub fn force(&self, v: &Value) -> Result<Value> {
        let mut v = v.clone();
        let mut steps = 0usize;
        while let Value::Knot(l) = v {
            v = self.get(l)?;
            steps += 1;
            if steps > self.store_size() {
                return fail("fixed point refers only to itself");
            }
        }
        Ok(v)
    }

    // ---- top level ----

    pub fn global(&self, name: &str) -> Option<Value> {
        let loc = *self.globals.borrow().get(name)?;
        self.get(loc).ok()
    }

    pub fn global_loc(&self, name: &str) -> Option<Loc> {
        self.globals.borrow().get(name).copied()
    }

    /// Binds `name` to a fresh location holding `v`.
    pub fn define(&self, name: &str, v: Value) -> Loc {
        let loc = self.alloc(v);
        let name: Rc<str> = name.into();
        if self.globals.borrow_mut().insert(name.clone(), loc).is_none() {
            self.global_order.borrow_mut().push(name);
        }
        loc
    }

    /// Top-level names in first-definition order.
    pub fn global_names(&self) -> Vec<Rc<str>> {
        self.global_order.borrow().clone()
    }

    /// Runs one top-level item. A `let` group is mutually recursive: every
    /// name is bound to a fresh location holding null before any right-hand
    /// side runs.
    pub fn exec(&self, item: &KernelItem) -> Result<Option<Value>> {
        match item {
            KernelItem::Let(binds) => {
                let locs: Vec<Loc> = binds
                    .iter()
                    .map(|(name, _)| self.define(name, Value::Null))
                    .collect();
                for ((_, e), loc) in binds.iter().zip(locs) {
                    let v = self.eval_top(e)?;
                    self.set(loc, v);
                }
                Ok(None)
            }
            KernelItem::Expr(e) => self.eval_top(e).map(Some),
        }
    }

    pub fn eval_top(&self, e: &KernelExpr) -> Result<Value> {
        self.depth.set(0);
        self.eval(e, &Env::empty())
    }

    // ---- evaluation ----

    pub fn eval(&self, e: &KernelExpr, env: &Env) -> Result<Value> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.eval_inner(e, env))
    }

    fn eval_inner(&self, e: &KernelExpr, env: &Env) -> Result<Value> {
        match e {
            KernelExpr::Var(x) => self.lookup(x, env),
            KernelExpr::Num(n) => Ok(Value::Num(*n)),
            KernelExpr::Str(s) => Ok(Value::Str(s.clone())),
            KernelExpr::Lam(x, body) => Ok(Value::Closure(Rc::new(Closure {
                param: x.clone(),
                body: body.clone(),
                env: env.clone(),
            }))),
            KernelExpr::App(f, a) => {
                if let KernelExpr::App(op, lhs) = &**f {
                    if matches!(&**op, KernelExpr::Var(x) if &**x == ":=") {
                        return self.assign(lhs, a, env);
                    }
                }
                let fv = self.eval(f, env)?;
                let av = self.eval(a, env)?;
                self.apply(&fv, av)
            }
            KernelExpr::If(c, t, f) => match self.force(&self.eval(c, env)?)? {
                Value::Bool(true) => self.eval(t, env),
                Value::Bool(false) => self.eval(f, env),
                other => fail(format!("condition is a {}, not a boolean", other.kind())),
            },
            KernelExpr::Tuple(es) => {
                let vs = es
                    .iter()
                    .map(|e| self.eval(e, env))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Value::tuple(vs))
            }
            KernelExpr::Seq(a, b) => {
                self.eval(a, env)?;
                self.eval(b, env)
            }
        }
    }

    fn lookup(&self, x: &str, env: &Env) -> Result<Value> {
        if let Some(l) = env.lookup(x) {
            return self.get(l);
        }
        if let Some(l) = self.global_loc(x) {
            return self.get(l);
        }
        if let Some(def) = prims::lookup(x) {
            if def.arity == 0 {
                return (def.f)(self, &[]);
            }
            return Ok(Value::Prim(Rc::new(PrimApp {
                def,
                args: Vec::new(),
            })));
        }
        if x.starts_with(|c: char| c.is_uppercase()) {
            return Ok(Value::Ctor(x.into()));
        }
        fail(format!("unbound identifier `{x}`"))
    }

    fn assign(&self, lhs: &KernelExpr, rhs: &KernelExpr, env: &Env) -> Result<Value> {
        let loc = match lhs {
            KernelExpr::Var(x) => match env.lookup(x).or_else(|| self.global_loc(x)) {
                Some(l) => l,
                None => return fail(format!("cannot assign to unbound `{x}`")),
            },
            KernelExpr::App(f, k) => match &**f {
                KernelExpr::App(op, e) if matches!(&**op, KernelExpr::Var(x) if &**x == "@") => {
                    let ev = self.force(&self.eval(e, env)?)?;
                    let kv = self.force(&self.eval(k, env)?)?;
                    let (Value::Env(ev), Value::Str(key)) = (&ev, &kv) else {
                        return fail("`:=` through `@` needs an environment and a string key");
                    };
                    match ev.lookup(key) {
                        Some(l) => l,
                        None => return fail(format!("cannot assign to unbound key {key:?}")),
                    }
                }
                _ => return fail("left side of `:=` is not a location"),
            },
            _ => return fail("left side of `:=` is not a location"),
        };
        let v = self.eval(rhs, env)?;
        self.set(loc, v);
        Ok(Value::unit())
    }

    pub fn apply(&self, f: &Value, a: Value) -> Result<Value> {
        match self.force(f)? {
            Value::Closure(c) => {
                let d = self.depth.get();
                if d >= self.max_depth.get() {
                    return fail(format!(
                        "application depth limit of {} exceeded",
                        self.max_depth.get()
                    ));
                }
                self.depth.set(d + 1);
                let b = Env::bind(c.param.clone(), self.alloc(a));
                let env = if c.env.is_empty_node() {
                    b
                } else {
                    c.env.concat(&b)
                };
                let r = self.eval(&c.body, &env);
                self.depth.set(d);
                r
            }
            Value::Prim(p) => {
                let mut args = p.args.clone();
                args.push(a);
                if args.len() == p.def.arity {
                    (p.def.f)(self, &args)
                } else {
                    Ok(Value::Prim(Rc::new(PrimApp { def: p.def, args })))
                }
            }
            Value::Ctor(k) => Ok(Value::Con(k, Rc::new(a))),
            other => fail(format!("cannot apply a {}", other.kind())),
        }
    }

    pub fn apply2(&self, f: &Value, a: Value, b: Value) -> Result<Value> {
        let g = self.apply(f, a)?;
        self.apply(&g, b)
    }

    /// `Y`: applies `f` to a placeholder for its own result, then fills the
    /// placeholder in.
    pub fn fix(&self, f: &Value) -> Result<Value> {
        let loc = self.alloc_pending();
        let v = self.apply(f, Value::Knot(loc))?;
        if matches!(v, Value::Knot(l) if l == loc) {
            return fail("fixed point refers only to itself");
        }
        self.set(loc, v.clone());
        Ok(v)
    }

    /// Observational equality: structural on data, identity on functions,
    /// locations and objects.
    pub fn equal(&self, a: &Value, b: &Value) -> Result<bool> {
        let nested = |v: &Value| {
            matches!(
                v,
                Value::Tuple(_) | Value::List(_) | Value::Set(_) | Value::Con(..) | Value::Prim(_)
                    | Value::Node(_) | Value::Refl(_) | Value::Knot(_)
            )
        };
        if !nested(a) || !nested(b) {
            return self.equal_inner(a, b);
        }
        let d = self.eq_depth.get();
        if d >= self.max_depth.get() {
            return fail("equality on a cyclic or too deeply nested value");
        }
        self.eq_depth.set(d + 1);
        let r = stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.equal_inner(a, b));
        self.eq_depth.set(d);
        r
    }

    fn equal_inner(&self, a: &Value, b: &Value) -> Result<bool> {
        let a = self.force(a)?;
        let b = self.force(b)?;
        Ok(match (&a, &b) {
            (Value::Num(x), Value::Num(y)) => x == y,
            (Value::Str(x), Value::Str(y)) => x == y,
            (Value::Bool(x), Value::Bool(y)) => x == y,
            (Value::Tuple(x), Value::Tuple(y)) | (Value::List(x), Value::List(y)) => {
                Rc::ptr_eq(x, y) || (x.len() == y.len() && self.all_equal(x, y)?)
            }
            (Value::Set(x), Value::Set(y)) => {
                if x.len() != y.len() {
                    return Ok(false);
                }
                for v in x.iter() {
                    if !self.member(v, y)? {
                        return Ok(false);
                    }
                }
                true
            }
            (Value::Con(k1, v1), Value::Con(k2, v2)) => k1 == k2 && self.equal(v1, v2)?,
            (Value::Ctor(x), Value::Ctor(y)) => x == y,
            (Value::Closure(x), Value::Closure(y)) => Rc::ptr_eq(x, y),
            (Value::Prim(x), Value::Prim(y)) => {
                Rc::ptr_eq(x, y)
                    || (std::ptr::eq(x.def, y.def)
                        && x.args.len() == y.args.len()
                        && self.all_equal(&x.args, &y.args)?)
            }
            (Value::Env(x), Value::Env(y)) => x.ptr_eq(y) || x.bindings() == y.bindings(),
            (Value::Eps, Value::Eps) | (Value::Null, Value::Null) => true,
            (Value::NullClass, Value::NullClass) => true,
            (Value::AsObj(x), Value::AsObj(y)) => Rc::ptr_eq(x, y),
            (Value::Graph(x), Value::Graph(y)) => x.id == y.id,
            (Value::Node(x), Value::Node(y)) => {
                Rc::ptr_eq(x, y) || (x.addr == y.addr && x.marked == y.marked && {
                    let (px, py) = (&x.payload, &y.payload);
                    self.equal(&px.ienv, &py.ienv)? && self.equal(&px.menv, &py.menv)?
                })
            }
            // The same object seen through two wrappers. Classes are compared
            // by identity so self-classed objects cannot recurse.
            (Value::Refl(x), Value::Refl(y)) => {
                Rc::ptr_eq(x, y) || (self.same_class(&x.class, &y.class)? && self.equal(&x.rep, &y.rep)?)
            }
            _ => false,
        })
    }

    fn same_class(&self, a: &Value, b: &Value) -> Result<bool> {
        match (self.force(a)?, self.force(b)?) {
            (Value::Refl(x), Value::Refl(y)) => Ok(Rc::ptr_eq(&x, &y)),
            (x, y) => self.equal(&x, &y),
        }
    }

    fn all_equal(&self, xs: &[Value], ys: &[Value]) -> Result<bool> {
        for (x, y) in xs.iter().zip(ys) {
            if !self.equal(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn member(&self, v: &Value, vs: &[Value]) -> Result<bool> {
        for w in vs {
            if self.equal(v, w)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use crate::session::{Braid, Session};

    fn ev(src: &str) -> String {
        let s = Session::with_braid(Braid::None).unwrap();
        match s.eval(src) {
            Ok(v) => s.show(&v),
            Err(e) => e.to_string(),
        }
    }

    fn run(src: &str) -> String {
        let s = Session::with_braid(Braid::None).unwrap();
        match s.run(src) {
            Ok(out) => out,
            Err(e) => e.to_string(),
        }
    }

    #[test]
    fn application_and_assignment() {
        assert_eq!(ev("(\\x.x) 5"), "5");
        assert_eq!(run("let i = 1;; i := 10; i"), "10\n");
        assert_eq!(ev("let f = \\x. x + y where y = 1 in f 2"), "3");
    }

    #[test]
    fn environment_lookup() {
        assert_eq!(ev("{} @ \"k\""), "eps");
        assert_eq!(ev("((\"k\" |-> 1) & (\"k\" |-> 2)) @ \"k\""), "2");
        assert_eq!(ev("((\"a\" |-> 1) & (\"b\" |-> 2)) @ \"a\""), "1");
        assert_eq!(ev("dom({})"), "{||}");
        assert_eq!(ev("dom((\"a\" |-> 1) & (\"a\" |-> 2))"), "{|\"a\"|}");
    }

    #[test]
    fn aliased_bindings_share_a_location() {
        let src = "let e = \"x\" |-> 1;; let both = e & (\"y\" |-> 2);; \
                   open e in x := 7;; both @ \"x\"";
        assert_eq!(run(src), "()\n7\n");
    }

    #[test]
    fn reify_install_extend() {
        assert_eq!(ev("let f = \\x. x + 1 in install(reify(f), f) 4"), "5");
        assert_eq!(ev("extend(\"y\" |-> 1, \\x. x + y) 2"), "3");
        assert_eq!(ev("open (\"y\" |-> 1) in y"), "1");
        assert!(ev("reify(3)").starts_with("runtime error"));
    }

    #[test]
    fn fixpoints() {
        assert_eq!(
            ev("Y(\\fact. \\n. if n = 0 then 1 else n * fact(n - 1)) 5"),
            "120"
        );
        assert_eq!(ev("let t = Y(\\s. (1, s)) in (t ! 2) = t"), "true");
        assert!(ev("Y(\\x. x + 1)").starts_with("runtime error"));
        assert!(ev("let a = Y(\\s. (1, s)) in let b = Y(\\s. (1, s)) in a = b")
            .starts_with("runtime error"));
    }

    #[test]
    fn folds() {
        assert_eq!(ev("foldr(\\a.\\b. a + b)(\\x.x)(0)([1, 2, 3])"), "6");
        assert_eq!(ev("foldl(\\a.\\b. b :: a)(\\x.x)([])([1, 2, 3])"), "[3, 2, 1]");
        assert_eq!(ev("foldr(\\a.\\b. a + b)(\\x.x)(9)([])"), "9");
        assert_eq!(ev("envfold(\\a.\\b. a + b)(\\k.\\v. v)(0)({})"), "0");
        assert_eq!(
            ev("envfold(\\a.\\b. a ++ b)(\\k.\\v. k)(\"_\")((\"a\" |-> 1) & {} & (\"b\" |-> 2))"),
            "\"a_b\""
        );
    }

    #[test]
    fn list_splitting_and_search() {
        assert_eq!(ev("splitlistl(2, [1, 2, 3])"), "([1, 2], [3])");
        assert_eq!(ev("splitlistr(2, [1, 2, 3])"), "([1], [2, 3])");
        assert_eq!(ev("find(\\x. x = 2 * (x / 2))(eps)([1, 3, 5])"), "eps");
        assert!(ev("splitlistl(4, [1, 2, 3])").starts_with("runtime error"));
        assert!(ev("splitlistl(1, [1, 1])").starts_with("runtime error"));
    }

    #[test]
    fn misc_primitives() {
        assert_eq!(ev("(10, 20) ! 1"), "10");
        assert_eq!(ev("isk(K(5), K)"), "true");
        assert_eq!(ev("stripk(K(5))"), "5");
        assert_eq!(ev("error(\"boom\")"), "runtime error: boom");
        assert!(ev("if 1 then 2 else 3").starts_with("runtime error"));
        assert!(ev("nope").starts_with("runtime error"));
        assert!(ev("3 4").starts_with("runtime error"));
    }

    #[test]
    fn evaluation_is_deterministic() {
        let src = "let xs = [3, 1, 2];; foldl(\\a.\\b. b :: a)(\\x.x)([])(xs);; random(100)";
        assert_eq!(run(src), run(src));
    }
}
