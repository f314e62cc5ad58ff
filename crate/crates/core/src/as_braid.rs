//! AS: single inheritance over onion-layered objects.
//!
//! An object is a chain of layers, outermost (most derived) first, ending
//! in a null object. Every layer carries the whole object as `self`.

use std::rc::Rc;

use crate::kernel::{fail, list_of_strings, string_list, Env, Interp, Result, RuntimeError, Value};

pub const PRELUDE: &str = include_str!("../prelude/as.gb");

/// Top-level names bound by the AS bootstrap.
pub const CLASS_NAMES: [&str; 8] = ["object", "oc", "cd", "cdc", "mc", "mcc", "class", "cc"];

pub enum AsObject {
    Null {
        id: u64,
        self_: Value,
    },
    Layer {
        id: u64,
        ienv: Env,
        menv: Env,
        sup: Rc<AsObject>,
        self_: Value,
    },
}

impl AsObject {
    pub fn id(&self) -> u64 {
        match self {
            AsObject::Null { id, .. } | AsObject::Layer { id, .. } => *id,
        }
    }

    pub fn self_value(&self) -> &Value {
        match self {
            AsObject::Null { self_, .. } | AsObject::Layer { self_, .. } => self_,
        }
    }

    /// Layers from the outside in, excluding the null heart.
    pub fn layers(self: &Rc<Self>) -> Vec<Rc<AsObject>> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while let AsObject::Layer { sup, .. } = &*cur {
            let next = sup.clone();
            out.push(cur);
            cur = next;
        }
        out
    }

    pub fn ienv(&self) -> Option<&Env> {
        match self {
            AsObject::Layer { ienv, .. } => Some(ienv),
            AsObject::Null { .. } => None,
        }
    }

    pub fn menv(&self) -> Option<&Env> {
        match self {
            AsObject::Layer { menv, .. } => Some(menv),
            AsObject::Null { .. } => None,
        }
    }
}

/// `getallenv`: layer ienvs concatenated outermost first, so an inner
/// layer's binding of a shared name is the visible one.
pub fn getallenv(o: &Rc<AsObject>) -> Env {
    o.layers()
        .iter()
        .rev()
        .fold(Env::empty(), |acc, l| l.ienv().expect("layer").concat(&acc))
}

/// Binds each name to a fresh location holding null, as a right fold.
pub(crate) fn null_bindings(i: &Interp, names: &[Rc<str>]) -> Env {
    names.iter().rev().fold(Env::empty(), |acc, n| {
        Env::bind(n.clone(), i.alloc(Value::Null)).concat(&acc)
    })
}

/// One layer of a class: its own instance-variable names and methods.
struct ClassLayer {
    ivars: Vec<Rc<str>>,
    menv: Env,
}

fn class_layers(i: &Interp, c: &Value) -> Result<Vec<ClassLayer>> {
    let mut out = Vec::new();
    let mut cur = i.force(c)?;
    loop {
        let o = match &cur {
            Value::NullClass => return Ok(out),
            Value::AsObj(o) => o.clone(),
            other => return fail(format!("mkobj: a {} is not a class", other.kind())),
        };
        if out.len() > i.store_size() {
            return fail("mkobj: superclass chain is cyclic");
        }
        let e = getallenv(&o);
        let field = |k: &str| -> Result<Value> {
            match e.lookup(k) {
                Some(l) => i.force(&i.get(l)?),
                None => fail(format!("mkobj: class does not bind {k:?}")),
            }
        };
        let ivars = string_list(i, &field("ivars")?, "ivars")?;
        let menv = match field("menv")? {
            Value::Env(m) => m,
            other => return fail(format!("mkobj: menv is a {}, not an environment", other.kind())),
        };
        out.push(ClassLayer { ivars, menv });
        cur = field("super")?;
    }
}

/// `mkobj(c)(o)`: a fresh instance of `c` whose layers all have `o` as self.
pub fn mkobj(i: &Interp, c: &Value, o: &Value) -> Result<Value> {
    let layers = class_layers(i, c)?;
    let id = i.fresh_id();
    let mut obj = Rc::new(AsObject::Null {
        id,
        self_: o.clone(),
    });
    for l in layers.iter().rev() {
        obj = Rc::new(AsObject::Layer {
            id,
            ienv: null_bindings(i, &l.ivars),
            menv: l.menv.clone(),
            sup: obj,
            self_: o.clone(),
        });
    }
    Ok(Value::AsObj(obj))
}

/// The receiver's self, resolved once its fixed point is known.
fn resolved(i: &Interp, v: &Value) -> Value {
    i.force(v).unwrap_or_else(|_| v.clone())
}

/// AS message delivery: search layers outside in; on reaching the heart,
/// send `dnu` to the whole object.
pub fn send(i: &Interp, o: &Rc<AsObject>, sel: &str, arg: Value) -> Result<Value> {
    let mut cur = o.clone();
    let mut depth = 0usize;
    loop {
        let next = match &*cur {
            AsObject::Null { self_, .. } => {
                if sel == "dnu" {
                    return fail(format!(
                        "no dnu handler for message {}",
                        dnu_selector(i, &arg)
                    ));
                }
                let whole = resolved(i, self_);
                let msg = Value::tuple(vec![Value::str(sel), arg]);
                return crate::kernel::send(i, &whole, "dnu", msg);
            }
            AsObject::Layer {
                ienv,
                menv,
                sup,
                self_,
                ..
            } => {
                if let Some(l) = menv.lookup(sel) {
                    let m = i.get(l)?;
                    let e = ienv.concat(&getallenv(sup));
                    let whole = resolved(i, self_);
                    if i.tracing() {
                        i.trace(format!(
                            "recv={} sel={sel} via=send node={depth}",
                            o.id()
                        ));
                    }
                    let hidden = Value::tuple(vec![whole, Value::AsObj(sup.clone()), Value::Env(e)]);
                    let h = i.apply(&m, hidden)?;
                    return i.apply(&h, arg);
                }
                sup.clone()
            }
        };
        cur = next;
        depth += 1;
    }
}

pub(crate) fn dnu_selector(i: &Interp, arg: &Value) -> String {
    match i.force(arg) {
        Ok(Value::Tuple(t)) if t.len() == 2 => crate::kernel::print::show_raw(i, &t[0]),
        _ => crate::kernel::print::show_raw(i, arg),
    }
}

/// One row of the initial configuration.
struct Row {
    name: &'static str,
    sup: Option<&'static str>,
    ivars: &'static str,
    menv: &'static str,
    class: &'static str,
}

const fn row(
    name: &'static str,
    sup: Option<&'static str>,
    ivars: &'static str,
    menv: &'static str,
    class: &'static str,
) -> Row {
    Row {
        name,
        sup,
        ivars,
        menv,
        class,
    }
}

// ivars/menv name prelude values; "" is the empty list or environment.
const CONFIG: [Row; 8] = [
    row("object", None, "objv", "om", "oc"),
    row("cd", Some("object"), "cdv", "cdm", "cdc"),
    row("mc", Some("cd"), "", "mm", "mcc"),
    row("class", Some("cd"), "", "cm", "cc"),
    row("oc", Some("class"), "", "", "mc"),
    row("cdc", Some("oc"), "", "", "mc"),
    row("mcc", Some("cdc"), "", "", "mc"),
    row("cc", Some("cdc"), "", "", "mc"),
];

fn config(name: &str) -> &'static Row {
    CONFIG.iter().find(|r| r.name == name).expect("known class")
}

/// Builds the eight classes of the initial configuration and binds them as
/// top-level names. The prelude must already be loaded.
///
/// Each class is an instance of its metaclass: its layers follow the
/// superclass chain of that metaclass, and each layer binds the chain
/// class's instance variables to this class's own values. References
/// between classes go through placeholders that are filled in at the end.
pub fn bootstrap(i: &Interp) -> Result<()> {
    let prelude_value = |name: &str| -> Result<Value> {
        if name.is_empty() {
            return Ok(Value::Env(Env::empty()));
        }
        match i.global(name) {
            Some(v) => Ok(v),
            None => fail(format!("bootstrap: prelude does not define `{name}`")),
        }
    };
    let ivar_names = |name: &str| -> Result<Vec<Rc<str>>> {
        match name {
            "" => Ok(Vec::new()),
            "objv" => Ok(vec!["class".into()]),
            other => string_list(i, &prelude_value(other)?, other),
        }
    };
    let cells: Vec<_> = CONFIG.iter().map(|_| i.alloc_pending()).collect();
    let cell = |name: &str| {
        let k = CONFIG.iter().position(|r| r.name == name).expect("known class");
        Value::Knot(cells[k])
    };

    for (k, r) in CONFIG.iter().enumerate() {
        let self_ = Value::Knot(cells[k]);
        let field = |f: &str| -> Result<Value> {
            Ok(match f {
                "super" => r.sup.map_or(Value::NullClass, cell),
                "ivars" => list_of_strings(&ivar_names(r.ivars)?),
                "menv" => prelude_value(r.menv)?,
                "class" => cell(r.class),
                other => return fail(format!("bootstrap: unexpected instance variable {other:?}")),
            })
        };
        let mut chain = Vec::new();
        let mut c = Some(r.class);
        while let Some(name) = c {
            chain.push(config(name));
            c = config(name).sup;
        }
        let id = i.fresh_id();
        let mut obj = Rc::new(AsObject::Null {
            id,
            self_: self_.clone(),
        });
        for layer in chain.iter().rev() {
            let names = ivar_names(layer.ivars)?;
            let mut ienv = Env::empty();
            for n in names.iter().rev() {
                ienv = Env::bind(n.clone(), i.alloc(field(n)?)).concat(&ienv);
            }
            let menv = match prelude_value(layer.menv)? {
                Value::Env(e) => e,
                _ => return fail(format!("bootstrap: `{}` is not an environment", layer.menv)),
            };
            obj = Rc::new(AsObject::Layer {
                id,
                ienv,
                menv,
                sup: obj,
                self_: self_.clone(),
            });
        }
        i.set(cells[k], Value::AsObj(obj));
    }
    for (k, r) in CONFIG.iter().enumerate() {
        i.define(r.name, i.get(cells[k])?);
    }
    check(i)
}

/// The bootstrapped classes bind exactly super, ivars, menv and class, with
/// the configured values.
fn check(i: &Interp) -> Result<()> {
    for r in &CONFIG {
        let bad = |what: &str| RuntimeError(format!("bootstrap check failed: {} {what}", r.name));
        let Some(Value::AsObj(o)) = i.global(r.name) else {
            return Err(bad("is not an object"));
        };
        let e = getallenv(&o);
        let mut dom: Vec<String> = e.domain().iter().map(|k| k.to_string()).collect();
        dom.sort();
        if dom != ["class", "ivars", "menv", "super"] {
            return Err(bad("has the wrong instance variables"));
        }
        let get = |k: &str| i.force(&i.get(e.lookup(k).expect("in domain"))?);
        let class = i.global(r.class).ok_or_else(|| bad("has no class"))?;
        if !i.equal(&get("class")?, &class)? {
            return Err(bad("has the wrong class"));
        }
        let sup = match r.sup {
            Some(s) => i.global(s).ok_or_else(|| bad("has no superclass"))?,
            None => Value::NullClass,
        };
        if !i.equal(&get("super")?, &sup)? {
            return Err(bad("has the wrong superclass"));
        }
    }
    Ok(())
}
