//! ASMIRS: objects are `obj(class, rep)` pairs and message delivery is a
//! method (`send`) of the receiver's class. The send primitive only knows
//! how `class` itself delivers messages, which ends the regress.

use std::rc::Rc;

use crate::asmi_braid::{initial_fields, initial_graph, prelude_value};
use crate::kernel::{fail, Interp, Result, Value};

pub const PRELUDE: &str = include_str!("../prelude/asmirs.gb");
pub const STRATEGY: &str = include_str!("../prelude/asmirs_strategy.gb");

/// Longest `classof` chain followed before giving up.
const MAX_META_STEPS: usize = 1_000;

pub struct ReflObject {
    pub class: Value,
    pub rep: Value,
}

impl ReflObject {
    /// Identity of the representation, when it is a graph.
    pub fn id(&self) -> u64 {
        match &self.rep {
            Value::Graph(g) => g.id,
            _ => 0,
        }
    }
}

pub fn obj(class: Value, rep: Value) -> Value {
    Value::Refl(Rc::new(ReflObject { class, rep }))
}

fn classof(i: &Interp, o: &Value) -> Result<Value> {
    match i.force(o)? {
        Value::Refl(r) => i.force(&r.class),
        other => fail(format!("a {} has no class", other.kind())),
    }
}

fn hidden_eps() -> Value {
    Value::tuple(vec![Value::Eps, Value::Eps, Value::Eps])
}

/// The send primitive. Messages are handed to the delivery service of the
/// receiver's class; only `on` and `send` sent to a direct instance of
/// `class` are answered here.
pub fn send(i: &Interp, o: &Value, sel: &str, arg: Value) -> Result<Value> {
    let Some(class) = i.rs_class() else {
        return fail("the reflective object system is not loaded");
    };
    let mut o = o.clone();
    let mut sel: Rc<str> = sel.into();
    let mut arg = arg;
    for _ in 0..MAX_META_STEPS {
        let c = classof(i, &o)?;
        if i.equal(&c, &class)? && matches!(&*sel, "on" | "send") {
            let builtin = if &*sel == "on" { "classon" } else { "classsend" };
            if i.tracing() {
                i.trace(format!(
                    "recv={} sel={sel} via=bottom-out node=-",
                    crate::kernel::object_id(i, &o)
                ));
            }
            let m = prelude_value(i, builtin)?;
            let h = i.apply(&m, hidden_eps())?;
            return i.apply(&h, arg);
        }
        i.count_meta_step();
        arg = Value::tuple(vec![o, Value::Str(sel), arg]);
        sel = "send".into();
        o = c;
    }
    fail("ill-formed configuration: the classof chain does not reach class")
}

/// Builds `object` and `class` as reflective objects over the same graphs
/// as the multiple-inheritance system.
pub fn bootstrap(i: &Interp) -> Result<()> {
    let om = prelude_value(i, "om")?;
    let cm = prelude_value(i, "cm")?;
    let (object_id, class_id) = (i.fresh_id(), i.fresh_id());
    let (oc, cc) = (i.alloc_pending(), i.alloc_pending());
    let (of, cf) = initial_fields(&Value::Knot(oc), &Value::Knot(cc), &om, &cm);
    let object = initial_graph(i, object_id, object_id, class_id, of, &cm, &om)?;
    let class = initial_graph(i, class_id, object_id, class_id, cf, &cm, &om)?;
    i.set(oc, obj(Value::Knot(cc), Value::Graph(Rc::new(object))));
    i.set(cc, obj(Value::Knot(cc), Value::Graph(Rc::new(class))));
    let class = i.get(cc)?;
    i.set_rs_class(class.clone());
    i.define("object", i.get(oc)?);
    i.define("class", class);
    crate::asmi_braid::check(i, |i, v| match i.force(v)? {
        Value::Refl(r) => Ok(Some(crate::kernel::expect_graph(i, &r.rep)?)),
        _ => Ok(None),
    })?;
    let class = i.global("class").expect("defined above");
    if !i.equal(&classof(i, &class)?, &class)? {
        return fail("bootstrap check failed: class is not its own class");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::session::{Braid, Session};

    const DIAMOND: &str = r#"
let base = send(class, "new", [[object], [], "dnu" |-> (meth x . [])]);;
let rev = send(class, "new", [[class], [], "on" |-> (meth o . foldl(\a.\b. b :: a)(\x.x)([])(onr(repof(o))))]);;
let pa = send(class, "new", [[base], [], "m" |-> (meth u . "a" :: send(next, "m", u))]);;
let pb = send(class, "new", [[pa], [], {}]);;
let pc = send(class, "new", [[pa], [], "m" |-> (meth u . "c" :: send(next, "m", u))]);;
"#;

    fn session() -> Session {
        let s = Session::with_braid(Braid::Asmirs).unwrap();
        s.load(DIAMOND).unwrap();
        s
    }

    fn ev(s: &Session, src: &str) -> String {
        match s.eval(src) {
            Ok(v) => s.show(&v),
            Err(e) => e.to_string(),
        }
    }

    fn root_under(s: &Session, meta: &str) -> String {
        s.load(&format!(
            "let d = send({meta}, \"new\", [[pb, pc], [], {{}}]);; let i = send(d, \"new\", []);;"
        ))
        .unwrap();
        ev(s, "send(i, \"m\", ())")
    }

    #[test]
    fn default_strategy_uses_the_final_order() {
        assert_eq!(root_under(&session(), "class"), "[\"c\", \"a\"]");
    }

    #[test]
    fn first_order_strategy_picks_a_different_node() {
        assert_eq!(root_under(&session(), "c"), "[\"a\", \"c\"]");
    }

    #[test]
    fn reverse_strategy_written_in_the_language() {
        // Reversed, object's dnu comes before base's.
        assert_eq!(root_under(&session(), "rev"), "runtime error: message m not understood");
        let s = session();
        s.load("let z = send(rev, \"new\", [[pc], [], \"m\" |-> (meth u . [\"z\"])]);;")
            .unwrap();
        assert_eq!(ev(&s, "send(send(z, \"new\", []), \"m\", ())"), "[\"a\", \"c\", \"z\"]");
    }

    #[test]
    fn strategies_coexist_in_one_program() {
        let s = session();
        s.load(
            "let d1 = send(class, \"new\", [[pb, pc], [], {}]);; \
             let d2 = send(c, \"new\", [[pb, pc], [], {}]);;",
        )
        .unwrap();
        assert_eq!(ev(&s, "send(send(d1, \"new\", []), \"m\", ())"), "[\"c\", \"a\"]");
        assert_eq!(ev(&s, "send(send(d2, \"new\", []), \"m\", ())"), "[\"a\", \"c\"]");
    }

    #[test]
    fn strategies_agree_without_shared_nodes() {
        let s = session();
        s.load(
            "let e1 = send(class, \"new\", [[pc], [], {}]);; \
             let e2 = send(c, \"new\", [[pc], [], {}]);;",
        )
        .unwrap();
        assert_eq!(
            ev(&s, "send(send(e1, \"new\", []), \"m\", ())"),
            ev(&s, "send(send(e2, \"new\", []), \"m\", ())")
        );
    }

    #[test]
    fn meta_steps_per_level() {
        let s = session();
        s.load(
            "let k = send(class, \"new\", [[object], [], \"m\" |-> (meth u . 1)]);; \
             let o = send(k, \"new\", []);; \
             let mk = send(class, \"new\", [[class], [], {}]);; \
             let k2 = send(mk, \"new\", [[object], [], \"m\" |-> (meth u . 2)]);; \
             let o2 = send(k2, \"new\", []);;",
        )
        .unwrap();
        let steps = |src: &str| {
            let before = s.interp().meta_steps();
            s.eval(src).unwrap();
            s.interp().meta_steps() - before
        };
        assert_eq!(steps("send(o, \"m\", ())"), 1);
        // One step to reach k2's class, one to reach class, and one more
        // when classsend asks k2 for its order.
        assert_eq!(steps("send(o2, \"m\", ())"), 3);
        assert_eq!(steps("send(class, \"send\", (o, \"m\", ()))"), 0);
    }

    #[test]
    fn class_is_its_own_class() {
        let s = session();
        assert_eq!(ev(&s, "classof(class) = class"), "true");
        assert_eq!(ev(&s, "classof(classof(pa)) = class"), "true");
        assert_eq!(ev(&s, "getenv(hd(onr(repof(object)))) @ \"ivars\""), "[\"class\"]");
        let menv = ev(&s, "dom(getmeths(hd(onr(repof(class)))))");
        for sel in ["init", "new", "on", "send"] {
            assert!(menv.contains(&format!("\"{sel}\"")), "{menv}");
        }
    }

    #[test]
    fn dnu_receives_the_message() {
        let s = Session::with_braid(Braid::Asmirs).unwrap();
        s.load(
            "let k = send(class, \"new\", [[object], [], \"dnu\" |-> (meth p . p)]);; \
             let o = send(k, \"new\", []);;",
        )
        .unwrap();
        assert_eq!(ev(&s, "send(o, \"zz\", 5)"), "(\"zz\", 5)");
        let s = Session::with_braid(Braid::Asmirs).unwrap();
        s.load("let k = send(class, \"new\", [[], [], {}]);; let o = obj(k, instantiate(k));;")
            .unwrap();
        assert_eq!(ev(&s, "send(o, \"zz\", 5)"), "runtime error: no dnu handler for message zz");
    }

    #[test]
    fn self_classed_object_is_ill_formed() {
        let s = session();
        let got = ev(&s, "send(Y(\\k. obj(k, 5)), \"m\", 1)");
        assert!(got.contains("ill-formed configuration"), "{got}");
    }
}
