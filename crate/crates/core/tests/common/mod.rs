#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use braid_core::graphlib::ObjectGraph;
use braid_core::kernel::Value;
use braid_core::oracle::DagSpec;
use braid_core::{Braid, Session};

pub fn session(b: Braid) -> Session {
    Session::with_braid(b).expect("bootstrap")
}

/// Evaluates `src` and prints the result.
pub fn show(s: &Session, src: &str) -> Result<String, String> {
    s.eval(src).map(|v| s.show(&v)).map_err(|e| e.to_string())
}

pub fn load(s: &Session, src: &str) -> Result<(), String> {
    s.load(src).map(|_| ()).map_err(|e| e.to_string())
}

/// Extra per-node methods and instance variables for `dag_program`.
#[derive(Default)]
pub struct Extras {
    pub methods: HashMap<usize, Vec<(String, String)>>,
    pub ivars: HashMap<usize, Vec<String>>,
}

/// Surface code creating one class `k<i>` per DAG node through `meta`,
/// under a common base whose `dnu` answers `[]`, and an instance `inst` of
/// the root class. Each selector a node defines answers its index consed
/// onto the rest of the `next` chain.
pub fn dag_program(d: &DagSpec, meta: &str, extras: &Extras) -> String {
    let mut src = format!(
        "let base = send({meta}, \"new\", [[object], [], \"dnu\" |-> (meth x . [])]);;\n"
    );
    for k in 0..d.len() {
        let supers = if k == 0 {
            "base".to_string()
        } else {
            d.supers[k].iter().map(|s| format!("k{s}")).collect::<Vec<_>>().join(", ")
        };
        let mut ivars: Vec<String> = d.ivars[k].clone();
        ivars.extend(extras.ivars.get(&k).cloned().unwrap_or_default());
        let ivars = ivars.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ");
        let mut methods: Vec<String> = d.selectors[k]
            .iter()
            .map(|s| format!("{s:?} |-> (meth u . {k} :: send(next, {s:?}, u))"))
            .collect();
        for (sel, body) in extras.methods.get(&k).into_iter().flatten() {
            methods.push(format!("{sel:?} |-> ({body})"));
        }
        let menv = if methods.is_empty() {
            "{}".to_string()
        } else {
            methods.join(" & ")
        };
        src.push_str(&format!(
            "let k{k} = send({meta}, \"new\", [[{supers}], [{ivars}], {menv}]);;\n"
        ));
    }
    src.push_str(&format!("let inst = send(k{}, \"new\", []);;\n", d.root()));
    src
}

pub fn fmt_chain(v: &[usize]) -> String {
    format!("{v:?}")
}

/// The graph of the root class built directly with the graph library, one
/// node per reachable DAG node at address = index.
pub fn native_graph(d: &DagSpec) -> Rc<ObjectGraph<()>> {
    let mut memo: BTreeMap<usize, Rc<ObjectGraph<()>>> = BTreeMap::new();
    let mut next_edge = 0u64;
    for k in 0..d.len() {
        let mut merged = ObjectGraph::nullgraph(0);
        for s in d.supers[k].iter().rev() {
            merged = memo[s].gmerge(&merged, 0).expect("merge");
        }
        let roots: Vec<u64> = d.supers[k].iter().map(|&s| s as u64).collect();
        let g = merged
            .addnode((), k as u64, &roots, || {
                next_edge += 1;
                next_edge
            })
            .expect("addnode");
        memo.insert(k, Rc::new(g));
    }
    memo[&d.root()].clone()
}

/// Numbers in a printed list value.
pub fn as_nums(v: &Value) -> Option<Vec<usize>> {
    match v {
        Value::List(l) => l
            .iter()
            .map(|x| match x {
                Value::Num(n) => Some(*n as usize),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}
