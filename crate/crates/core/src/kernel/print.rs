//! The value printer used by the REPL, `run` and golden tests.

use std::fmt::Write;

use super::interp::Interp;
use super::value::Value;
use crate::as_braid::AsObject;

const MAX_NESTING: usize = 32;

/// Printed form of a value. Strings are quoted.
pub fn show(interp: &Interp, v: &Value) -> String {
    let mut out = String::new();
    write_value(interp, &mut out, v, 0);
    out
}

/// Like [`show`] but a string prints as its raw contents (`str`).
pub fn show_raw(interp: &Interp, v: &Value) -> String {
    match interp.force(v) {
        Ok(Value::Str(s)) => s.to_string(),
        _ => show(interp, v),
    }
}

fn write_seq(interp: &Interp, out: &mut String, open: &str, vs: &[Value], close: &str, depth: usize) {
    out.push_str(open);
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_value(interp, out, v, depth + 1);
    }
    out.push_str(close);
}

fn write_value(interp: &Interp, out: &mut String, v: &Value, depth: usize) {
    if depth > MAX_NESTING {
        out.push_str("...");
        return;
    }
    let v = match interp.force(v) {
        Ok(v) => v,
        Err(_) => {
            out.push_str("<undefined>");
            return;
        }
    };
    match &v {
        Value::Num(n) => {
            let _ = write!(out, "{n}");
        }
        Value::Str(s) => {
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
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Tuple(vs) => write_seq(interp, out, "(", vs, ")", depth),
        Value::List(vs) => write_seq(interp, out, "[", vs, "]", depth),
        Value::Set(vs) => write_seq(interp, out, "{|", vs, "|}", depth),
        Value::Con(k, p) => {
            out.push_str(k);
            if matches!(&**p, Value::Tuple(_)) {
                write_value(interp, out, p, depth + 1);
            } else {
                out.push('(');
                write_value(interp, out, p, depth + 1);
                out.push(')');
            }
        }
        Value::Ctor(k) => out.push_str(k),
        Value::Closure(_) | Value::Prim(_) => out.push_str("<fn>"),
        Value::Env(e) => {
            let binds = e.flattened();
            if binds.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, l)) in binds.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{k:?} |-> ");
                match interp.get(*l) {
                    Ok(v) => write_value(interp, out, &v, depth + 1),
                    Err(_) => out.push_str("<undefined>"),
                }
            }
            out.push('}');
        }
        Value::Eps => out.push_str("eps"),
        Value::Null => out.push_str("null"),
        Value::Knot(_) => out.push_str("<undefined>"),
        Value::NullClass => out.push_str("nullclass"),
        Value::AsObj(o) => match &**o {
            AsObject::Null { .. } => out.push_str("<nullobj>"),
            AsObject::Layer { id, .. } => {
                let _ = write!(out, "<object #{id}>");
            }
        },
        Value::Graph(g) => {
            let _ = write!(out, "<graph #{}>", g.id);
        }
        Value::Node(n) => {
            let _ = write!(out, "<node #{}>", n.addr);
        }
        Value::Refl(r) => {
            let _ = write!(out, "<obj #{}>", r.id());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Env;

    #[test]
    fn data_printing() {
        let i = Interp::new();
        let v = Value::tuple(vec![
            Value::Num(1),
            Value::str("a\"b"),
            Value::list(vec![Value::Bool(true)]),
            Value::unit(),
            Value::Eps,
            Value::Null,
        ]);
        assert_eq!(show(&i, &v), r#"(1, "a\"b", [true], (), eps, null)"#);
        assert_eq!(show_raw(&i, &Value::str("hi")), "hi");
    }

    #[test]
    fn environments_print_flattened_rightmost_wins() {
        let i = Interp::new();
        let a1 = Env::bind("a", i.alloc(Value::Num(1)));
        let b = Env::bind("b", i.alloc(Value::Num(2)));
        let a3 = Env::bind("a", i.alloc(Value::Num(3)));
        let e = a1.concat(&b).concat(&a3);
        assert_eq!(show(&i, &Value::Env(e)), r#"{"a" |-> 3, "b" |-> 2}"#);
        assert_eq!(show(&i, &Value::Env(Env::empty())), "{}");
    }

    #[test]
    fn constructed_values() {
        let i = Interp::new();
        let k = Value::Con("K".into(), std::rc::Rc::new(Value::Num(5)));
        assert_eq!(show(&i, &k), "K(5)");
    }
}
