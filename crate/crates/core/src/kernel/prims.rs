//! Builtin operators, constants and library functions.
//!
//! Every primitive is curried with a fixed arity. Library functions taking
//! several arguments in the surface syntax (`splitlistl(v, l)`) take one
//! tuple instead.

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::OnceLock;

use rand::Rng;

use super::env::{Env, EnvShape};
use super::interp::Interp;
use super::print::{show, show_raw};
use super::value::{Closure, Graph, GraphNode, NodeData, PrimDef, Value};
use super::{fail, Result, RuntimeError};
use crate::desugar::reserved;
use crate::graphlib::{GraphError, Node, NodeAddr};
use crate::{as_braid, asmi_braid, asmirs_braid};

macro_rules! prims {
    ($($name:expr, $arity:expr => $f:expr;)*) => {
        &[$(PrimDef { name: $name, arity: $arity, f: $f },)*]
    };
}

static PRIMS: &[PrimDef] = prims! {
    // constants
    reserved::TRUE, 0 => |_, _| Ok(Value::Bool(true));
    reserved::FALSE, 0 => |_, _| Ok(Value::Bool(false));
    reserved::EPS, 0 => |_, _| Ok(Value::Eps);
    reserved::NULL, 0 => |_, _| Ok(Value::Null);
    reserved::EMPTY_LIST, 0 => |_, _| Ok(Value::list(Vec::new()));
    reserved::EMPTY_ENV, 0 => |_, _| Ok(Value::Env(Env::empty()));
    reserved::EMPTY_SET, 0 => |_, _| Ok(Value::Set(Rc::new(Vec::new())));
    "nullclass", 0 => |_, _| Ok(Value::NullClass);
    "nullgraph", 0 => |i, _| Ok(Value::Graph(Rc::new(Graph::nullgraph(i.fresh_id()))));

    // infix operators
    "|->", 2 => |i, a| {
        let k = string(i, &a[0])?;
        Ok(Value::Env(Env::bind(k, i.alloc(a[1].clone()))))
    };
    "&", 2 => |i, a| Ok(Value::Env(env(i, &a[0])?.concat(&env(i, &a[1])?)));
    "@", 2 => |i, a| {
        let e = env(i, &a[0])?;
        let k = string(i, &a[1])?;
        match e.lookup(&k) {
            Some(l) => i.get(l),
            None => Ok(Value::Eps),
        }
    };
    "::", 2 => |i, a| {
        let l = list(i, &a[1])?;
        let mut out = Vec::with_capacity(l.len() + 1);
        out.push(a[0].clone());
        out.extend(l.iter().cloned());
        Ok(Value::list(out))
    };
    "++", 2 => |i, a| match (i.force(&a[0])?, i.force(&a[1])?) {
        (Value::Str(x), Value::Str(y)) => Ok(Value::Str(format!("{x}{y}").into())),
        (Value::List(x), Value::List(y)) => {
            Ok(Value::list(x.iter().chain(y.iter()).cloned().collect()))
        }
        (x, y) => fail(format!("cannot append a {} and a {}", x.kind(), y.kind())),
    };
    "union", 2 => |i, a| {
        let mut out = set(i, &a[0])?.to_vec();
        for v in set(i, &a[1])?.iter() {
            if !i.member(v, &out)? {
                out.push(v.clone());
            }
        }
        Ok(Value::Set(Rc::new(out)))
    };
    "\\\\", 2 => |i, a| {
        let right = set(i, &a[1])?;
        let mut out = Vec::new();
        for v in set(i, &a[0])?.iter() {
            if !i.member(v, &right)? {
                out.push(v.clone());
            }
        }
        Ok(Value::Set(Rc::new(out)))
    };
    "+", 2 => |i, a| arith(i, a, "+", i64::checked_add);
    "-", 2 => |i, a| arith(i, a, "-", i64::checked_sub);
    "*", 2 => |i, a| arith(i, a, "*", i64::checked_mul);
    "/", 2 => |i, a| {
        if num(i, &a[1])? == 0 {
            return fail("division by zero");
        }
        arith(i, a, "/", i64::checked_div)
    };
    "!", 2 => |i, a| {
        let t = tuple(i, &a[0])?;
        let n = num(i, &a[1])?;
        if n < 1 || n as usize > t.len() {
            return fail(format!("tuple of arity {} has no component {n}", t.len()));
        }
        Ok(t[n as usize - 1].clone())
    };
    "=", 2 => |i, a| Ok(Value::Bool(i.equal(&a[0], &a[1])?));
    "<>", 2 => |i, a| Ok(Value::Bool(!i.equal(&a[0], &a[1])?));
    "<", 2 => |i, a| compare(i, a, |o| o.is_lt());
    ">", 2 => |i, a| compare(i, a, |o| o.is_gt());
    "<=", 2 => |i, a| compare(i, a, |o| o.is_le());
    ">=", 2 => |i, a| compare(i, a, |o| o.is_ge());

    // pattern and desugaring support
    reserved::IS_N_TUPLE, 2 => |i, a| {
        let n = num(i, &a[0])?;
        Ok(Value::Bool(is_n_tuple(i, &a[1], n)?))
    };
    reserved::IS_K, 2 => |i, a| {
        let k = ctor_name(i, &a[0])?;
        Ok(Value::Bool(matches!(i.force(&a[1])?, Value::Con(t, _) if t == k)))
    };
    reserved::STRIP_K, 2 => |i, a| {
        let k = ctor_name(i, &a[0])?;
        match i.force(&a[1])? {
            Value::Con(t, v) if t == k => Ok((*v).clone()),
            other => fail(format!("stripk: {} is not built with {k}", show(i, &other))),
        }
    };
    reserved::ALT, 3 => |i, a| {
        let r = i.apply(&a[0], a[2].clone())?;
        if r.is_eps() {
            i.apply(&a[1], a[2].clone())
        } else {
            Ok(r)
        }
    };
    reserved::HOOK, 2 => |i, a| {
        let e = match i.force(&a[0])? {
            Value::Eps => Env::empty(),
            Value::Env(e) => e,
            other => return fail(format!("cannot open a {}", other.kind())),
        };
        let c = closure(i, &a[1])?;
        Ok(install(&c.env.concat(&e), &c))
    };
    reserved::SINGLETON_SET, 1 => |_, a| Ok(Value::Set(Rc::new(vec![a[0].clone()])));
    "singleton", 1 => |_, a| Ok(Value::Set(Rc::new(vec![a[0].clone()])));

    // general library
    "str", 1 => |i, a| Ok(Value::Str(show_raw(i, &a[0]).into()));
    "error", 1 => |i, a| Err(RuntimeError(show_raw(i, &a[0]))) ;
    "reify", 1 => |i, a| Ok(Value::Env(closure(i, &a[0])?.env.clone()));
    "install", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "install")?;
        Ok(install(&env(i, &t[0])?, &*closure(i, &t[1])?))
    };
    "extend", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "extend")?;
        let c = closure(i, &t[1])?;
        Ok(install(&c.env.concat(&env(i, &t[0])?), &c))
    };
    "Y", 1 => |i, a| i.fix(&a[0]);
    "foldr", 4 => |i, a| {
        let l = list(i, &a[3])?;
        let mut acc = a[2].clone();
        for v in l.iter().rev() {
            let fv = i.apply(&a[1], v.clone())?;
            acc = i.apply2(&a[0], fv, acc)?;
        }
        Ok(acc)
    };
    "foldl", 4 => |i, a| {
        let l = list(i, &a[3])?;
        let mut acc = a[2].clone();
        for v in l.iter() {
            let fv = i.apply(&a[1], v.clone())?;
            acc = i.apply2(&a[0], acc, fv)?;
        }
        Ok(acc)
    };
    "envfold", 4 => |i, a| envfold(i, &a[0], &a[1], &a[2], &env(i, &a[3])?);
    "splitlistl", 1 => |i, a| {
        let (l, k) = split_at_unique(i, &a[0], "splitlistl")?;
        Ok(Value::tuple(vec![Value::list(l[..=k].to_vec()), Value::list(l[k + 1..].to_vec())]))
    };
    "splitlistr", 1 => |i, a| {
        let (l, k) = split_at_unique(i, &a[0], "splitlistr")?;
        Ok(Value::tuple(vec![Value::list(l[..k].to_vec()), Value::list(l[k..].to_vec())]))
    };
    "find", 3 => |i, a| {
        for v in list(i, &a[2])?.iter() {
            if truth(i, &i.apply(&a[0], v.clone())?)? {
                return Ok(v.clone());
            }
        }
        Ok(a[1].clone())
    };
    "fst", 1 => |i, a| Ok(tuple_n(i, &a[0], 2, "fst")?[0].clone());
    "snd", 1 => |i, a| Ok(tuple_n(i, &a[0], 2, "snd")?[1].clone());
    "dom", 1 => |i, a| {
        let keys = env(i, &a[0])?.domain();
        Ok(Value::Set(Rc::new(keys.into_iter().map(Value::Str).collect())))
    };
    "member", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "member")?;
        Ok(Value::Bool(match i.force(&t[1])? {
            Value::Set(vs) | Value::List(vs) => i.member(&t[0], &vs)?,
            Value::Env(e) => e.lookup(&string(i, &t[0])?).is_some(),
            other => return fail(format!("member: cannot search a {}", other.kind())),
        }))
    };
    "hd", 1 => |i, a| match list(i, &a[0])?.first() {
        Some(v) => Ok(v.clone()),
        None => fail("hd of the empty list"),
    };
    "tl", 1 => |i, a| {
        let l = list(i, &a[0])?;
        if l.is_empty() {
            return fail("tl of the empty list");
        }
        Ok(Value::list(l[1..].to_vec()))
    };
    "last", 1 => |i, a| match list(i, &a[0])?.last() {
        Some(v) => Ok(v.clone()),
        None => fail("last of the empty list"),
    };
    "length", 1 => |i, a| match i.force(&a[0])? {
        Value::List(l) | Value::Set(l) | Value::Tuple(l) => Ok(Value::Num(l.len() as i64)),
        Value::Str(s) => Ok(Value::Num(s.chars().count() as i64)),
        other => fail(format!("length of a {}", other.kind())),
    };
    "nth", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "nth")?;
        let l = list(i, &t[0])?;
        let n = num(i, &t[1])?;
        match usize::try_from(n).ok().and_then(|n| l.get(n)) {
            Some(v) => Ok(v.clone()),
            None => fail(format!("nth: index {n} out of range for a list of {}", l.len())),
        }
    };
    "drop", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "drop")?;
        let l = list(i, &t[0])?;
        let n = num(i, &t[1])?.clamp(0, l.len() as i64) as usize;
        Ok(Value::list(l[n..].to_vec()))
    };
    "map", 2 => |i, a| {
        let l = list(i, &a[1])?;
        let out = l.iter().map(|v| i.apply(&a[0], v.clone())).collect::<Result<Vec<_>>>()?;
        Ok(Value::list(out))
    };
    "isntuple", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "isntuple")?;
        let n = num(i, &t[1])?;
        Ok(Value::Bool(is_n_tuple(i, &t[0], n)?))
    };
    "isk", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "isk")?;
        let k = ctor_name(i, &t[1])?;
        Ok(Value::Bool(matches!(i.force(&t[0])?, Value::Con(tag, _) if tag == k)))
    };
    "stripk", 1 => |i, a| match i.force(&a[0])? {
        Value::Con(_, v) => Ok((*v).clone()),
        other => fail(format!("stripk: a {} is not a constructed value", other.kind())),
    };
    "random", 1 => |i, a| {
        let n = num(i, &a[0])?;
        if n <= 0 {
            return fail("random needs a positive bound");
        }
        Ok(Value::Num(i.with_rng(|r| r.gen_range(0..n))))
    };

    // object graphs
    "gm", 2 => |i, a| {
        let g = graph(i, &a[1])?;
        let mapped = g.try_map(|n| {
            match i.force(&i.apply(&a[0], Value::Node(Rc::new(n.clone())))?)? {
                Value::Node(m) => Ok((m.payload.clone(), m.marked)),
                other => fail(format!("gm: mapping returned a {}, not a node", other.kind())),
            }
        })?;
        Ok(Value::Graph(Rc::new(mapped)))
    };
    "gmerge", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "gmerge")?;
        let g = graph(i, &t[0])?.gmerge(&*graph(i, &t[1])?, i.fresh_id()).map_err(graph_err)?;
        Ok(Value::Graph(Rc::new(g)))
    };
    "root", 1 => |i, a| Ok(node_set(graph(i, &a[0])?.root()));
    "targetnodes", 2 => |i, a| {
        let n = node(i, &a[0])?;
        Ok(node_set(graph(i, &a[1])?.targetnodes(n.addr)))
    };
    "traverse", 1 => |i, a| Ok(node_list(graph(i, &a[0])?.traverse().map_err(graph_err)?));
    "walk", 2 => |i, a| {
        let n = node(i, &a[0])?;
        Ok(node_list(graph(i, &a[1])?.walk(n.addr).map_err(graph_err)?))
    };
    "ord", 1 => |i, a| {
        let g = graph(i, &a[0])?;
        let pairs = g
            .ord()
            .iter()
            .map(|(x, y)| Value::tuple(vec![Value::Num(*x as i64), Value::Num(*y as i64)]))
            .collect();
        Ok(Value::Set(Rc::new(pairs)))
    };
    "sort", 2 => |i, a| {
        let nodes = match i.force(&a[0])? {
            Value::Set(vs) | Value::List(vs) => vs,
            other => return fail(format!("sort: expected a set of nodes, got a {}", other.kind())),
        };
        let mut by_addr = HashMap::new();
        for v in nodes.iter() {
            let n = node(i, v)?;
            by_addr.insert(n.addr, n);
        }
        let mut order = std::collections::BTreeSet::new();
        for p in set(i, &a[1])?.iter() {
            let t = tuple_n(i, p, 2, "sort")?;
            order.insert((num(i, &t[0])? as NodeAddr, num(i, &t[1])? as NodeAddr));
        }
        let addrs: Vec<NodeAddr> = by_addr.keys().copied().collect();
        let sorted = crate::graphlib::sort_by_order(&addrs, &order).map_err(graph_err)?;
        Ok(Value::list(sorted.iter().map(|x| Value::Node(by_addr[x].clone())).collect()))
    };
    "onr", 1 => |i, a| Ok(node_list(graph(i, &a[0])?.order_final().map_err(graph_err)?));
    "onl", 1 => |i, a| Ok(node_list(graph(i, &a[0])?.order_first().map_err(graph_err)?));
    "mark", 2 => |i, a| {
        let n = node(i, &a[1])?;
        Ok(Value::Graph(Rc::new(graph(i, &a[0])?.mark(n.addr).map_err(graph_err)?)))
    };
    "unmark", 1 => |i, a| Ok(Value::Graph(graph(i, &a[0])?.unmark()));
    "addnode", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 3, "addnode")?;
        let n = node(i, &t[0])?;
        let g = graph(i, &t[1])?;
        let mut roots = Vec::new();
        for r in list(i, &t[2])?.iter() {
            roots.push(match i.force(r)? {
                Value::Node(n) => n.addr,
                Value::Num(x) => x as NodeAddr,
                other => return fail(format!("addnode: a {} is not a root", other.kind())),
            });
        }
        let g = g
            .addnode(n.payload.clone(), i.fresh_id(), &roots, || i.fresh_id())
            .map_err(graph_err)?;
        Ok(Value::Graph(Rc::new(g)))
    };
    "node", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "node")?;
        Ok(Value::Node(Rc::new(Node {
            addr: i.fresh_id(),
            payload: NodeData { ienv: t[0].clone(), menv: t[1].clone() },
            marked: false,
        })))
    };
    "getenv", 1 => |i, a| Ok(node(i, &a[0])?.payload.ienv.clone());
    "getmeths", 1 => |i, a| Ok(node(i, &a[0])?.payload.menv.clone());
    "getmenv", 1 => |i, a| Ok(node(i, &a[0])?.payload.menv.clone());

    // object systems
    "send", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 3, "send")?;
        let sel = string(i, &t[1])?;
        send(i, &t[0], &sel, t[2].clone())
    };
    "mkobj", 2 => |i, a| as_braid::mkobj(i, &a[0], &a[1]);
    "getallenv", 1 => |i, a| match i.force(&a[0])? {
        Value::AsObj(o) => Ok(Value::Env(as_braid::getallenv(&o))),
        Value::Graph(g) => Ok(Value::Env(asmi_braid::getallenv(i, &g)?)),
        Value::Refl(r) => Ok(Value::Env(asmi_braid::getallenv(i, &*graph(i, &r.rep)?)?)),
        other => fail(format!("getallenv: a {} is not an object", other.kind())),
    };
    "cg", 1 => |i, a| Ok(Value::Graph(Rc::new(asmi_braid::class_graph(i, &a[0])?)));
    "instantiate", 1 => |i, a| Ok(Value::Graph(Rc::new(asmi_braid::instantiate(i, &a[0])?)));
    "obj", 1 => |i, a| {
        let t = tuple_n(i, &a[0], 2, "obj")?;
        Ok(asmirs_braid::obj(t[0].clone(), t[1].clone()))
    };
    "classof", 1 => |i, a| match i.force(&a[0])? {
        Value::Refl(r) => Ok(r.class.clone()),
        other => fail(format!("classof: a {} is not a reflective object", other.kind())),
    };
    "repof", 1 => |i, a| match i.force(&a[0])? {
        Value::Refl(r) => Ok(r.rep.clone()),
        other => fail(format!("repof: a {} is not a reflective object", other.kind())),
    };
    "tracesend", 1 => |i, a| {
        if i.tracing() {
            let t = tuple_n(i, &a[0], 3, "tracesend")?;
            let sel = show_raw(i, &t[1]);
            let recv = object_id(i, &t[0]);
            let addr = node(i, &t[2])?.addr;
            i.trace(format!("recv={recv} sel={sel} via=classsend node={addr}"));
        }
        Ok(Value::unit())
    };
};

fn table() -> &'static HashMap<&'static str, &'static PrimDef> {
    static TABLE: OnceLock<HashMap<&'static str, &'static PrimDef>> = OnceLock::new();
    TABLE.get_or_init(|| PRIMS.iter().map(|p| (p.name, p)).collect())
}

pub(super) fn lookup(name: &str) -> Option<&'static PrimDef> {
    table().get(name).copied()
}

pub(super) fn names() -> Vec<&'static str> {
    PRIMS.iter().map(|p| p.name).collect()
}

/// Message send, dispatched on the representation of the receiver.
pub(crate) fn send(i: &Interp, recv: &Value, sel: &str, arg: Value) -> Result<Value> {
    match i.force(recv)? {
        Value::AsObj(o) => as_braid::send(i, &o, sel, arg),
        Value::Graph(g) => asmi_braid::send(i, &g, sel, arg),
        r @ Value::Refl(_) => asmirs_braid::send(i, &r, sel, arg),
        other => fail(format!("cannot send {sel:?} to a {}", other.kind())),
    }
}

/// Short identity used in trace lines.
pub(crate) fn object_id(i: &Interp, v: &Value) -> String {
    match i.force(v) {
        Ok(Value::AsObj(o)) => o.id().to_string(),
        Ok(Value::Graph(g)) => g.id.to_string(),
        Ok(Value::Refl(r)) => r.id().to_string(),
        Ok(other) => other.kind().to_string(),
        Err(_) => "?".to_string(),
    }
}

pub(crate) fn graph_err(e: GraphError) -> RuntimeError {
    RuntimeError(e.to_string())
}

fn install(e: &Env, c: &Closure) -> Value {
    Value::Closure(Rc::new(Closure {
        param: c.param.clone(),
        body: c.body.clone(),
        env: e.clone(),
    }))
}

fn envfold(i: &Interp, op: &Value, kv: &Value, seed: &Value, e: &Env) -> Result<Value> {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || match e.shape() {
        EnvShape::Empty => Ok(seed.clone()),
        EnvShape::Bind(k, l) => i.apply2(kv, Value::Str(k.clone()), i.get(l)?),
        EnvShape::Concat(a, b) => {
            let x = envfold(i, op, kv, seed, a)?;
            let y = envfold(i, op, kv, seed, b)?;
            i.apply2(op, x, y)
        }
    })
}

fn split_at_unique(i: &Interp, arg: &Value, who: &str) -> Result<(Rc<Vec<Value>>, usize)> {
    let t = tuple_n(i, arg, 2, who)?;
    let l = list(i, &t[1])?;
    let mut at = None;
    for (k, v) in l.iter().enumerate() {
        if i.equal(&t[0], v)? {
            if at.is_some() {
                return fail(format!("{who}: value occurs more than once in the list"));
            }
            at = Some(k);
        }
    }
    match at {
        Some(k) => Ok((l, k)),
        None => fail(format!("{who}: value does not occur in the list")),
    }
}

fn is_n_tuple(i: &Interp, v: &Value, n: i64) -> Result<bool> {
    Ok(matches!(i.force(v)?, Value::Tuple(t) if t.len() as i64 == n))
}

fn arith(i: &Interp, a: &[Value], op: &str, f: fn(i64, i64) -> Option<i64>) -> Result<Value> {
    let (x, y) = (num(i, &a[0])?, num(i, &a[1])?);
    match f(x, y) {
        Some(r) => Ok(Value::Num(r)),
        None => fail(format!("arithmetic overflow in {x} {op} {y}")),
    }
}

fn compare(i: &Interp, a: &[Value], f: fn(std::cmp::Ordering) -> bool) -> Result<Value> {
    match (i.force(&a[0])?, i.force(&a[1])?) {
        (Value::Num(x), Value::Num(y)) => Ok(Value::Bool(f(x.cmp(&y)))),
        (Value::Str(x), Value::Str(y)) => Ok(Value::Bool(f(x.cmp(&y)))),
        (x, y) => fail(format!("cannot compare a {} with a {}", x.kind(), y.kind())),
    }
}

fn truth(i: &Interp, v: &Value) -> Result<bool> {
    match i.force(v)? {
        Value::Bool(b) => Ok(b),
        other => fail(format!("predicate returned a {}, not a boolean", other.kind())),
    }
}

fn num(i: &Interp, v: &Value) -> Result<i64> {
    match i.force(v)? {
        Value::Num(n) => Ok(n),
        other => fail(format!("expected a number, got a {}", other.kind())),
    }
}

pub(crate) fn string(i: &Interp, v: &Value) -> Result<Rc<str>> {
    match i.force(v)? {
        Value::Str(s) => Ok(s),
        other => fail(format!("expected a string, got a {}", other.kind())),
    }
}

fn ctor_name(i: &Interp, v: &Value) -> Result<Rc<str>> {
    match i.force(v)? {
        Value::Ctor(k) | Value::Str(k) => Ok(k),
        other => fail(format!("expected a constructor, got a {}", other.kind())),
    }
}

pub(crate) fn list(i: &Interp, v: &Value) -> Result<Rc<Vec<Value>>> {
    match i.force(v)? {
        Value::List(l) => Ok(l),
        other => fail(format!("expected a list, got a {}", other.kind())),
    }
}

fn set(i: &Interp, v: &Value) -> Result<Rc<Vec<Value>>> {
    match i.force(v)? {
        Value::Set(l) => Ok(l),
        other => fail(format!("expected a set, got a {}", other.kind())),
    }
}

fn tuple(i: &Interp, v: &Value) -> Result<Rc<Vec<Value>>> {
    match i.force(v)? {
        Value::Tuple(t) => Ok(t),
        other => fail(format!("expected a tuple, got a {}", other.kind())),
    }
}

pub(crate) fn tuple_n(i: &Interp, v: &Value, n: usize, who: &str) -> Result<Rc<Vec<Value>>> {
    match i.force(v)? {
        Value::Tuple(t) if t.len() == n => Ok(t),
        other => fail(format!("{who} expects a {n}-tuple, got {}", show(i, &other))),
    }
}

pub(crate) fn env(i: &Interp, v: &Value) -> Result<Env> {
    match i.force(v)? {
        Value::Env(e) => Ok(e),
        other => fail(format!("expected an environment, got a {}", other.kind())),
    }
}

fn closure(i: &Interp, v: &Value) -> Result<Rc<Closure>> {
    match i.force(v)? {
        Value::Closure(c) => Ok(c),
        other => fail(format!("expected a closure, got a {}", other.kind())),
    }
}

pub(crate) fn graph(i: &Interp, v: &Value) -> Result<Rc<Graph>> {
    match i.force(v)? {
        Value::Graph(g) => Ok(g),
        other => fail(format!("expected an object graph, got a {}", other.kind())),
    }
}

fn node(i: &Interp, v: &Value) -> Result<Rc<GraphNode>> {
    match i.force(v)? {
        Value::Node(n) => Ok(n),
        other => fail(format!("expected a graph node, got a {}", other.kind())),
    }
}

fn node_list(ns: Vec<Rc<GraphNode>>) -> Value {
    Value::list(ns.into_iter().map(Value::Node).collect())
}

fn node_set(ns: Vec<Rc<GraphNode>>) -> Value {
    Value::Set(Rc::new(ns.into_iter().map(Value::Node).collect()))
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

    #[test]
    fn sets_keep_insertion_order_without_duplicates() {
        assert_eq!(ev("singleton(1) union singleton(2) union singleton(1)"), "{|1, 2|}");
        assert_eq!(ev("(singleton(1) union singleton(2)) \\\\ singleton(1)"), "{|2|}");
        assert_eq!(ev("member(2, singleton(1) union singleton(2))"), "true");
        assert_eq!(ev("member(3, {||})"), "false");
    }

    #[test]
    fn tuple_and_constructor_tests() {
        assert_eq!(ev("isntuple((1, 2, 3), 3)"), "true");
        assert_eq!(ev("isntuple((1, 2), 3)"), "false");
        assert_eq!(ev("isntuple(5, 2)"), "false");
        assert_eq!(ev("isk(J(1), K)"), "false");
        assert_eq!(ev("K(1) = K(1)"), "true");
        assert!(ev("stripk(5)").starts_with("runtime error"));
        assert!(ev("(1, 2) ! 3").starts_with("runtime error"));
    }

    #[test]
    fn stringify_and_append() {
        assert_eq!(ev("str((1, \"a\"))"), "\"(1, \\\"a\\\")\"");
        assert_eq!(ev("[1] ++ [2, 3]"), "[1, 2, 3]");
        assert!(ev("[1] ++ \"a\"").starts_with("runtime error"));
    }

    #[test]
    fn list_library() {
        assert_eq!(ev("hd([4, 5])"), "4");
        assert_eq!(ev("tl([4, 5])"), "[5]");
        assert_eq!(ev("last([4, 5])"), "5");
        assert_eq!(ev("nth([4, 5], 1)"), "5");
        assert_eq!(ev("drop([4, 5, 6], 2)"), "[6]");
        assert_eq!(ev("length([])"), "0");
        assert!(ev("hd([])").starts_with("runtime error"));
    }

    #[test]
    fn random_is_seeded() {
        let draw = || {
            let s = Session::with_braid(Braid::None).unwrap();
            s.run("random(1000);; random(1000)").unwrap()
        };
        assert_eq!(draw(), draw());
    }
}
