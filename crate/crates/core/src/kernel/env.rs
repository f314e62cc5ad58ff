//! Persistent environments: ordered (key, location) bindings built by
//! singleton and concatenation.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

/// Address of a store cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc(pub usize);

/// An environment value. Concatenation is never normalised away, so the
/// shape `(a & {}) & b` survives for environment folds.
#[derive(Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

enum EnvNode {
    Bind(Rc<str>, Loc),
    Concat(Env, Env),
}

/// One step of a structural walk over an environment.
pub enum EnvShape<'a> {
    Empty,
    Bind(&'a Rc<str>, Loc),
    Concat(&'a Env, &'a Env),
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn bind(key: impl Into<Rc<str>>, loc: Loc) -> Env {
        Env(Some(Rc::new(EnvNode::Bind(key.into(), loc))))
    }

    pub fn concat(&self, right: &Env) -> Env {
        Env(Some(Rc::new(EnvNode::Concat(self.clone(), right.clone()))))
    }

    pub fn is_empty_node(&self) -> bool {
        self.0.is_none()
    }

    pub fn shape(&self) -> EnvShape<'_> {
        match self.0.as_deref() {
            None => EnvShape::Empty,
            Some(EnvNode::Bind(k, l)) => EnvShape::Bind(k, *l),
            Some(EnvNode::Concat(a, b)) => EnvShape::Concat(a, b),
        }
    }

    pub fn ptr_eq(&self, other: &Env) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// Location of the rightmost binding of `key`.
    pub fn lookup(&self, key: &str) -> Option<Loc> {
        let mut stack: Vec<&Env> = vec![self];
        while let Some(e) = stack.pop() {
            match e.0.as_deref() {
                None => {}
                Some(EnvNode::Bind(k, l)) => {
                    if &**k == key {
                        return Some(*l);
                    }
                }
                Some(EnvNode::Concat(a, b)) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        None
    }

    /// All bindings, leftmost first, duplicates included.
    pub fn bindings(&self) -> Vec<(Rc<str>, Loc)> {
        let mut out = Vec::new();
        let mut stack: Vec<&Env> = vec![self];
        while let Some(e) = stack.pop() {
            match e.0.as_deref() {
                None => {}
                Some(EnvNode::Bind(k, l)) => out.push((k.clone(), *l)),
                Some(EnvNode::Concat(a, b)) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Keys in first-occurrence order, each once.
    pub fn domain(&self) -> Vec<Rc<str>> {
        let mut seen = HashSet::new();
        self.bindings()
            .into_iter()
            .filter_map(|(k, _)| seen.insert(k.clone()).then_some(k))
            .collect()
    }

    /// Keys in first-occurrence order paired with their visible (rightmost)
    /// location.
    pub fn flattened(&self) -> Vec<(Rc<str>, Loc)> {
        self.domain()
            .into_iter()
            .map(|k| {
                let loc = self.lookup(&k).expect("key from domain");
                (k, loc)
            })
            .collect()
    }
}

impl Drop for Env {
    // Unlinks long concatenation chains iteratively.
    fn drop(&mut self) {
        let mut stack: Vec<Rc<EnvNode>> = self.0.take().into_iter().collect();
        while let Some(rc) = stack.pop() {
            if let Ok(EnvNode::Concat(mut a, mut b)) = Rc::try_unwrap(rc) {
                stack.extend(a.0.take());
                stack.extend(b.0.take());
            }
        }
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.bindings().iter().map(|(k, l)| format!("{k}:{}", l.0)))
            .finish()
    }
}
