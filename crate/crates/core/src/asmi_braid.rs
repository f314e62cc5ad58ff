//! ASMI: multiple inheritance over object graphs.
//!
//! Objects and classes are graphs whose nodes hold an instance-variable
//! environment and a method environment. A class graph holds instance
//! variable names in place of the environment. The address of every node
//! is the identity of the class that contributed it, so a superclass
//! reached along several paths is one node.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::as_braid::null_bindings;
use crate::graphlib::NodeAddr;
use crate::kernel::{
    expect_env, expect_graph, expect_list, fail, list_of_strings, string_list, Env, Graph,
    GraphNode, Interp, NodeData, Result, RuntimeError, Value,
};

pub const PRELUDE: &str = include_str!("../prelude/asmi.gb");
pub const EMULATION: &str = include_str!("../prelude/asmi_emulation.gb");

pub(crate) fn graph_err(e: crate::graphlib::GraphError) -> RuntimeError {
    RuntimeError(e.to_string())
}

fn node_env(n: &GraphNode) -> Result<Env> {
    match &n.payload.ienv {
        Value::Env(e) => Ok(e.clone()),
        Value::Eps => Ok(Env::empty()),
        other => fail(format!(
            "node {} holds a {} where an environment was expected",
            n.addr,
            other.kind()
        )),
    }
}

/// Concatenation of node ienvs, left to right.
pub(crate) fn concat_envs(nodes: &[Rc<GraphNode>]) -> Result<Env> {
    let mut acc = Env::empty();
    for n in nodes.iter().rev() {
        acc = node_env(n)?.concat(&acc);
    }
    Ok(acc)
}

/// `getallenv`: node ienvs in `onr` order.
pub fn getallenv(_i: &Interp, g: &Graph) -> Result<Env> {
    concat_envs(&g.order_final().map_err(graph_err)?)
}

/// The identity and representation graph of a class value.
pub(crate) fn class_rep(i: &Interp, c: &Value) -> Result<(NodeAddr, Rc<Graph>)> {
    match i.force(c)? {
        Value::Graph(g) => Ok((g.id, g)),
        Value::Refl(r) => {
            let g = expect_graph(i, &r.rep)?;
            Ok((g.id, g))
        }
        other => fail(format!("a {} is not a class", other.kind())),
    }
}

/// `cg`: the class graph of `c`, built from the class graphs of its
/// superclasses.
pub fn class_graph(i: &Interp, c: &Value) -> Result<Graph> {
    let mut memo = HashMap::new();
    let mut visiting = HashSet::new();
    cg(i, c, &mut memo, &mut visiting).map(|g| (*g).clone())
}

fn cg(
    i: &Interp,
    c: &Value,
    memo: &mut HashMap<NodeAddr, Rc<Graph>>,
    visiting: &mut HashSet<NodeAddr>,
) -> Result<Rc<Graph>> {
    let (id, rep) = class_rep(i, c)?;
    if let Some(g) = memo.get(&id) {
        return Ok(g.clone());
    }
    if !visiting.insert(id) {
        return fail("class hierarchy is cyclic");
    }
    let e = getallenv(i, &rep)?;
    let field = |k: &str| -> Result<Value> {
        match e.lookup(k) {
            Some(l) => i.force(&i.get(l)?),
            None => fail(format!("class does not bind {k:?}")),
        }
    };
    let supers = expect_list(i, &field("supers")?)?;
    let ivars = list_of_strings(&string_list(i, &field("ivars")?, "ivars")?);
    let menv = Value::Env(expect_env(i, &field("menv")?)?);

    let mut merged = Graph::nullgraph(i.fresh_id());
    let mut roots = Vec::with_capacity(supers.len());
    for s in supers.iter().rev() {
        let sg = cg(i, s, memo, visiting)?;
        merged = sg.gmerge(&merged, i.fresh_id()).map_err(graph_err)?;
    }
    for s in supers.iter() {
        roots.push(class_rep(i, s)?.0);
    }
    let g = merged
        .addnode(NodeData { ienv: ivars, menv }, id, &roots, || i.fresh_id())
        .map_err(|err| match err {
            crate::graphlib::GraphError::RootMismatch { .. } => RuntimeError(
                "superclasses must be listed once each and none may inherit from another"
                    .to_string(),
            ),
            other => graph_err(other),
        })?;
    visiting.remove(&id);
    let g = Rc::new(g);
    memo.insert(id, g.clone());
    Ok(g)
}

/// `instantiate`: the class graph of `c` with every name list replaced by
/// fresh null bindings.
pub fn instantiate(i: &Interp, c: &Value) -> Result<Graph> {
    class_graph(i, c)?.try_map(|n| {
        let names = string_list(i, &n.payload.ienv, "ivars")?;
        Ok((
            NodeData {
                ienv: Value::Env(null_bindings(i, &names)),
                menv: n.payload.menv.clone(),
            },
            false,
        ))
    })
}

fn defines(n: &GraphNode, sel: &str) -> bool {
    matches!(&n.payload.menv, Value::Env(m) if m.lookup(sel).is_some())
}

/// ASMI message delivery over the `onr` order of the receiver.
pub fn send(i: &Interp, g: &Rc<Graph>, sel: &str, arg: Value) -> Result<Value> {
    let order = g.order_final().map_err(graph_err)?;
    let Some(k) = order.iter().position(|n| defines(n, sel)) else {
        if sel == "dnu" {
            return fail(format!(
                "no dnu handler for message {}",
                crate::as_braid::dnu_selector(i, &arg)
            ));
        }
        let msg = Value::tuple(vec![Value::str(sel), arg]);
        return send(i, &g.unmark(), "dnu", msg);
    };
    let x = &order[k];
    let mut o1 = (**g).clone();
    for n in &order[..=k] {
        o1 = o1.mark(n.addr).map_err(graph_err)?;
    }
    let o2 = g.unmark();
    let e = concat_envs(&order[k..])?;
    let Value::Env(m) = &x.payload.menv else {
        unreachable!("defines() checked the method environment")
    };
    let method = i.get(m.lookup(sel).expect("defines() found it"))?;
    if i.tracing() {
        i.trace(format!("recv={} sel={sel} via=send node={}", g.id, x.addr));
    }
    let hidden = Value::tuple(vec![
        Value::Graph(o2),
        Value::Graph(Rc::new(o1)),
        Value::Env(e),
    ]);
    let h = i.apply(&method, hidden)?;
    i.apply(&h, arg)
}

/// The two-node graph shared by the initial `object` and `class`: a node
/// for `class` (holding `supers`, `ivars`, `menv`) above a node for
/// `object` (holding `class`).
pub(crate) fn initial_graph(
    i: &Interp,
    id: u64,
    object_id: u64,
    class_id: u64,
    fields: [Value; 4],
    cm: &Value,
    om: &Value,
) -> Result<Graph> {
    let [supers, ivars, menv, class] = fields;
    let bind = |pairs: Vec<(&str, Value)>| {
        pairs.into_iter().rev().fold(Env::empty(), |acc, (k, v)| {
            Env::bind(k, i.alloc(v)).concat(&acc)
        })
    };
    let class_env = bind(vec![("supers", supers), ("ivars", ivars), ("menv", menv)]);
    let object_env = bind(vec![("class", class)]);
    let g = Graph::nullgraph(id)
        .addnode(
            NodeData {
                ienv: Value::Env(object_env),
                menv: om.clone(),
            },
            object_id,
            &[],
            || i.fresh_id(),
        )
        .and_then(|g| {
            g.addnode(
                NodeData {
                    ienv: Value::Env(class_env),
                    menv: cm.clone(),
                },
                class_id,
                &[object_id],
                || i.fresh_id(),
            )
        })
        .map_err(graph_err)?;
    Ok(g)
}

pub(crate) fn prelude_value(i: &Interp, name: &str) -> Result<Value> {
    match i.global(name) {
        Some(v) => Ok(v),
        None => fail(format!("bootstrap: prelude does not define `{name}`")),
    }
}

fn strings(names: &[&str]) -> Value {
    Value::list(names.iter().map(|s| Value::str(s)).collect())
}

/// The `supers`, `ivars`, `menv` and `class` values of the initial object
/// and class, given placeholders for the two classes.
pub(crate) fn initial_fields(
    object: &Value,
    class: &Value,
    om: &Value,
    cm: &Value,
) -> ([Value; 4], [Value; 4]) {
    (
        [
            Value::list(Vec::new()),
            strings(&["class"]),
            om.clone(),
            class.clone(),
        ],
        [
            Value::list(vec![object.clone()]),
            strings(&["supers", "ivars", "menv"]),
            cm.clone(),
            class.clone(),
        ],
    )
}

/// Builds `object` and `class`. The prelude must already be loaded.
pub fn bootstrap(i: &Interp) -> Result<()> {
    let om = prelude_value(i, "om")?;
    let cm = prelude_value(i, "cm")?;
    let (object_id, class_id) = (i.fresh_id(), i.fresh_id());
    let (oc, cc) = (i.alloc_pending(), i.alloc_pending());
    let (of, cf) = initial_fields(&Value::Knot(oc), &Value::Knot(cc), &om, &cm);
    let object = initial_graph(i, object_id, object_id, class_id, of, &cm, &om)?;
    let class = initial_graph(i, class_id, object_id, class_id, cf, &cm, &om)?;
    i.set(oc, Value::Graph(Rc::new(object)));
    i.set(cc, Value::Graph(Rc::new(class)));
    i.define("object", i.get(oc)?);
    i.define("class", i.get(cc)?);
    check(i, |i, v| Ok(Some(expect_graph(i, v)?)))
}

/// Shape checks shared with the reflective system: `class` is its own
/// class, and both class graphs have the configured shape.
pub(crate) fn check(
    i: &Interp,
    rep: impl Fn(&Interp, &Value) -> Result<Option<Rc<Graph>>>,
) -> Result<()> {
    let bad = |what: &str| RuntimeError(format!("bootstrap check failed: {what}"));
    let object = i.global("object").ok_or_else(|| bad("object is missing"))?;
    let class = i.global("class").ok_or_else(|| bad("class is missing"))?;
    for (name, c, nodes) in [("object", &object, 1usize), ("class", &class, 2)] {
        let g = rep(i, c)?.ok_or_else(|| bad("class has no graph"))?;
        let e = getallenv(i, &g)?;
        let cls = i.get(e.lookup("class").ok_or_else(|| bad("class ivar missing"))?)?;
        if !i.equal(&cls, &class)? {
            return Err(bad(&format!("{name} is not an instance of class")));
        }
        if class_graph(i, c)?.len() != nodes {
            return Err(bad(&format!("{name} has a malformed class graph")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::{Braid, Session};

    const DIAMOND: &str = r#"
let base = send(class, "new", [[object], [], "dnu" |-> (meth x . [])]);;
let a = send(class, "new", [[base], ["s"], "m" |-> (meth u . "a" :: send(next, "m", u))]);;
let b = send(class, "new", [[a], [], "m" |-> (meth u . "b" :: send(next, "m", u))]);;
let c = send(class, "new", [[a], ["t"], "m" |-> (meth u . "c" :: send(next, "m", u))]);;
let d = send(class, "new", [[b, c], [], {}]);;
let d2 = send(class, "new", [[c, b], [], {}]);;
let i = send(d, "new", []);;
"#;

    fn session() -> Session {
        let s = Session::with_braid(Braid::Asmi).unwrap();
        s.load(DIAMOND).unwrap();
        s
    }

    fn ev(s: &Session, src: &str) -> String {
        match s.eval(src) {
            Ok(v) => s.show(&v),
            Err(e) => e.to_string(),
        }
    }

    fn addr(s: &Session, name: &str) -> NodeAddr {
        class_rep(s.interp(), &s.global(name).unwrap()).unwrap().0
    }

    fn final_order(s: &Session, class: &str) -> Vec<NodeAddr> {
        let g = class_graph(s.interp(), &s.global(class).unwrap()).unwrap();
        g.order_final().unwrap().iter().map(|n| n.addr).collect()
    }

    #[test]
    fn diamond_class_graph_shares_the_grandparent() {
        let s = session();
        let g = class_graph(s.interp(), &s.global("d").unwrap()).unwrap();
        let got: HashSet<NodeAddr> = g.nodes().map(|n| n.addr).collect();
        let want: HashSet<NodeAddr> =
            ["d", "b", "c", "a", "base", "object"].iter().map(|n| addr(&s, n)).collect();
        assert_eq!(got, want);
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn supers_order_decides_sibling_order() {
        let s = session();
        let (a, b, c) = (addr(&s, "a"), addr(&s, "b"), addr(&s, "c"));
        let pos = |v: &[NodeAddr], x| v.iter().position(|&y| y == x).unwrap();
        let o1 = final_order(&s, "d");
        let o2 = final_order(&s, "d2");
        assert!(pos(&o1, b) < pos(&o1, c) && pos(&o1, c) < pos(&o1, a));
        assert!(pos(&o2, c) < pos(&o2, b) && pos(&o2, b) < pos(&o2, a));
    }

    #[test]
    fn next_walks_the_final_order() {
        let s = session();
        assert_eq!(ev(&s, "send(i, \"m\", ())"), "[\"b\", \"c\", \"a\"]");
        assert_eq!(ev(&s, "send(send(d2, \"new\", []), \"m\", ())"), "[\"c\", \"b\", \"a\"]");
    }

    #[test]
    fn instance_graph_mirrors_the_class_graph() {
        let s = session();
        let d = s.global("d").unwrap();
        let cg = class_graph(s.interp(), &d).unwrap();
        let inst = instantiate(s.interp(), &d).unwrap();
        let addrs = |g: &Graph| g.nodes().map(|n| n.addr).collect::<Vec<_>>();
        assert_eq!(addrs(&cg), addrs(&inst));
        let ends = |g: &Graph| g.edges().into_iter().map(|(_, f, t)| (f, t)).collect::<Vec<_>>();
        assert_eq!(ends(&cg), ends(&inst));
        assert_eq!(cg.ord(), inst.ord());
        let env = getallenv(s.interp(), &inst).unwrap();
        let mut dom: Vec<String> = env.domain().iter().map(|k| k.to_string()).collect();
        dom.sort();
        assert_eq!(dom, ["class", "s", "t"]);
    }

    #[test]
    fn object_instance_has_one_class_slot() {
        let s = session();
        let g = instantiate(s.interp(), &s.global("object").unwrap()).unwrap();
        assert_eq!(g.len(), 1);
        let dom: Vec<String> = getallenv(s.interp(), &g).unwrap().domain().iter().map(|k| k.to_string()).collect();
        assert_eq!(dom, ["class"]);
    }

    #[test]
    fn gc_answers_the_creating_class() {
        let s = session();
        assert_eq!(ev(&s, "send(i, \"gc\", ()) = d"), "true");
        assert_eq!(ev(&s, "send(class, \"gc\", ()) = class"), "true");
        assert_eq!(ev(&s, "getallenv(d) @ \"supers\" = [b, c]"), "true");
    }

    #[test]
    fn unknown_selector_reaches_objdnu() {
        let s = Session::with_braid(Braid::Asmi).unwrap();
        s.load("let k = send(class, \"new\", [[object], [], {}]);; let o = send(k, \"new\", []);;")
            .unwrap();
        assert_eq!(ev(&s, "send(o, \"zz\", ())"), "runtime error: message zz not understood");
    }

    #[test]
    fn cyclic_and_redundant_supers_are_rejected() {
        let s = session();
        s.load("open getallenv(a) in supers := [d];;").unwrap();
        assert_eq!(ev(&s, "cg(d)"), "runtime error: class hierarchy is cyclic");
        let s = session();
        assert!(ev(&s, "send(send(class, \"new\", [[b, a], [], {}]), \"new\", [])").starts_with("runtime error"));
    }

    #[test]
    fn emulation_classes() {
        let s = session();
        assert_eq!(ev(&s, "getallenv(asm) @ \"supers\" = [class]"), "true");
        assert_eq!(ev(&s, "send(asc, \"gc\", ()) = asm"), "true");
    }
}
