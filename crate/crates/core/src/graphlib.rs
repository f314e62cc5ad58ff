//! Object graphs: addressed nodes, directed edges and a partial order used
//! to break ties between sibling nodes during traversal.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;
use std::rc::Rc;

use thiserror::Error;

pub type NodeAddr = u64;
pub type EdgeId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} roots, expected exactly one")]
    NoUniqueRoot(usize),
    #[error("ordering between nodes {0} and {1} is cyclic")]
    CyclicOrder(NodeAddr, NodeAddr),
    #[error("merged graphs order nodes {0} and {1} both ways")]
    ContradictoryOrder(NodeAddr, NodeAddr),
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeAddr),
    #[error("node {0} is already in the graph")]
    DuplicateNode(NodeAddr),
    #[error("listed roots {listed:?} do not match the graph roots {actual:?}")]
    RootMismatch {
        listed: Vec<NodeAddr>,
        actual: Vec<NodeAddr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node<P> {
    pub addr: NodeAddr,
    pub payload: P,
    pub marked: bool,
}

/// `g(nodes, edges, src, tgt, order)`.
#[derive(Debug, Clone)]
pub struct ObjectGraph<P> {
    pub id: u64,
    nodes: BTreeMap<NodeAddr, Rc<Node<P>>>,
    edges: BTreeSet<EdgeId>,
    src: BTreeMap<EdgeId, NodeAddr>,
    tgt: BTreeMap<EdgeId, NodeAddr>,
    order: BTreeSet<(NodeAddr, NodeAddr)>,
}

impl<P: Clone> ObjectGraph<P> {
    pub fn nullgraph(id: u64) -> Self {
        ObjectGraph {
            id,
            nodes: BTreeMap::new(),
            edges: BTreeSet::new(),
            src: BTreeMap::new(),
            tgt: BTreeMap::new(),
            order: BTreeSet::new(),
        }
    }

    pub fn node(&self, addr: NodeAddr) -> Option<&Rc<Node<P>>> {
        self.nodes.get(&addr)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Rc<Node<P>>> {
        self.nodes.values()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(edge, src, tgt)` triples in edge order.
    pub fn edges(&self) -> Vec<(EdgeId, NodeAddr, NodeAddr)> {
        self.edges
            .iter()
            .map(|e| (*e, self.src[e], self.tgt[e]))
            .collect()
    }

    /// The partial order component, as `a < b` pairs.
    pub fn ord(&self) -> &BTreeSet<(NodeAddr, NodeAddr)> {
        &self.order
    }

    /// `gm`: transform every node, keeping addresses, edges and order. The
    /// mapping decides the mark of the new node.
    pub fn try_map<E>(
        &self,
        mut f: impl FnMut(&Node<P>) -> Result<(P, bool), E>,
    ) -> Result<Self, E> {
        let mut nodes = BTreeMap::new();
        for (addr, n) in &self.nodes {
            let (payload, marked) = f(n)?;
            nodes.insert(
                *addr,
                Rc::new(Node {
                    addr: *addr,
                    payload,
                    marked,
                }),
            );
        }
        Ok(ObjectGraph {
            nodes,
            ..self.clone()
        })
    }

    /// Componentwise union. A node present in both keeps the right copy.
    pub fn gmerge(&self, other: &Self, id: u64) -> Result<Self, GraphError> {
        for (a, b) in &other.order {
            if self.order.contains(&(*b, *a)) {
                return Err(GraphError::ContradictoryOrder(*a, *b));
            }
        }
        let mut g = self.clone();
        g.id = id;
        g.nodes
            .extend(other.nodes.iter().map(|(k, v)| (*k, v.clone())));
        g.edges.extend(other.edges.iter().copied());
        g.src.extend(other.src.iter().map(|(k, v)| (*k, *v)));
        g.tgt.extend(other.tgt.iter().map(|(k, v)| (*k, *v)));
        g.order.extend(other.order.iter().copied());
        Ok(g)
    }

    /// Nodes with no incoming edge, by address.
    pub fn root(&self) -> Vec<Rc<Node<P>>> {
        let targets: BTreeSet<NodeAddr> = self.tgt.values().copied().collect();
        self.nodes
            .values()
            .filter(|n| !targets.contains(&n.addr))
            .cloned()
            .collect()
    }

    /// Nodes one edge away from `addr`, by address.
    pub fn targetnodes(&self, addr: NodeAddr) -> Vec<Rc<Node<P>>> {
        let set: BTreeSet<NodeAddr> = self
            .edges
            .iter()
            .filter(|e| self.src[e] == addr)
            .map(|e| self.tgt[e])
            .collect();
        set.into_iter().map(|a| self.nodes[&a].clone()).collect()
    }

    /// Linearises `addrs` consistently with the order pairs among them;
    /// incomparable nodes come out by ascending address.
    pub fn sort(&self, addrs: &[NodeAddr]) -> Result<Vec<NodeAddr>, GraphError> {
        sort_by_order(addrs, &self.order)
    }

    /// Depth-first sequence from `start`: each node followed by the walks of
    /// its sorted targets. Shared nodes repeat once per path.
    pub fn walk(&self, start: NodeAddr) -> Result<Vec<Rc<Node<P>>>, GraphError> {
        if !self.nodes.contains_key(&start) {
            return Err(GraphError::UnknownNode(start));
        }
        let mut children: HashMap<NodeAddr, Vec<NodeAddr>> = HashMap::new();
        let mut out = Vec::new();
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            out.push(self.nodes[&a].clone());
            let kids = match children.entry(a) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let ts: Vec<NodeAddr> = self.targetnodes(a).iter().map(|n| n.addr).collect();
                    e.insert(self.sort(&ts)?)
                }
            };
            stack.extend(kids.iter().rev());
        }
        Ok(out)
    }

    pub fn traverse(&self) -> Result<Vec<Rc<Node<P>>>, GraphError> {
        let roots = self.root();
        if roots.len() != 1 {
            return Err(GraphError::NoUniqueRoot(roots.len()));
        }
        self.walk(roots[0].addr)
    }

    /// `onr`: traversal with shared nodes deferred to their final
    /// occurrence, marked nodes removed.
    pub fn order_final(&self) -> Result<Vec<Rc<Node<P>>>, GraphError> {
        Ok(remove_marked(collapse(self.traverse()?, Keep::Last)))
    }

    /// `onl`: traversal with shared nodes kept at their first occurrence,
    /// marked nodes removed.
    pub fn order_first(&self) -> Result<Vec<Rc<Node<P>>>, GraphError> {
        Ok(remove_marked(collapse(self.traverse()?, Keep::First)))
    }

    pub fn mark(&self, addr: NodeAddr) -> Result<Self, GraphError> {
        let n = self.nodes.get(&addr).ok_or(GraphError::UnknownNode(addr))?;
        if n.marked {
            return Ok(self.clone());
        }
        let mut g = self.clone();
        g.nodes.insert(
            addr,
            Rc::new(Node {
                marked: true,
                ..(**n).clone()
            }),
        );
        Ok(g)
    }

    pub fn has_marks(&self) -> bool {
        self.nodes.values().any(|n| n.marked)
    }

    /// Clears every mark; shares the input when nothing is marked.
    pub fn unmark(self: &Rc<Self>) -> Rc<Self> {
        if !self.has_marks() {
            return self.clone();
        }
        let g: Result<Self, std::convert::Infallible> =
            self.try_map(|n| Ok((n.payload.clone(), false)));
        Rc::new(g.unwrap_or_else(|e| match e {}))
    }

    /// Adds `payload` at `addr` with one fresh edge to each listed root.
    /// The listed roots are ordered left to right and the new node precedes
    /// all of them.
    pub fn addnode(
        &self,
        payload: P,
        addr: NodeAddr,
        roots: &[NodeAddr],
        mut fresh_edge: impl FnMut() -> EdgeId,
    ) -> Result<Self, GraphError> {
        if self.nodes.contains_key(&addr) {
            return Err(GraphError::DuplicateNode(addr));
        }
        let actual: Vec<NodeAddr> = self.root().iter().map(|n| n.addr).collect();
        let listed: BTreeSet<NodeAddr> = roots.iter().copied().collect();
        if listed.len() != roots.len() || listed.iter().copied().ne(actual.iter().copied()) {
            return Err(GraphError::RootMismatch {
                listed: roots.to_vec(),
                actual,
            });
        }
        let mut g = self.clone();
        g.nodes.insert(
            addr,
            Rc::new(Node {
                addr,
                payload,
                marked: false,
            }),
        );
        for r in roots {
            let e = fresh_edge();
            g.edges.insert(e);
            g.src.insert(e, addr);
            g.tgt.insert(e, *r);
            g.order.insert((addr, *r));
        }
        for w in roots.windows(2) {
            g.order.insert((w[0], w[1]));
        }
        Ok(g)
    }

    /// Debug dump: nodes, then edges, then order pairs.
    pub fn dump(&self, show: impl Fn(&P) -> String) -> String {
        let mut out = String::new();
        for n in self.nodes.values() {
            let mark = if n.marked { " [marked]" } else { "" };
            let _ = writeln!(out, "{}{} {}", n.addr, mark, show(&n.payload));
        }
        for (_, s, t) in self.edges() {
            let _ = writeln!(out, "{s} -> {t}");
        }
        for (a, b) in &self.order {
            let _ = writeln!(out, "{a} < {b}");
        }
        out
    }
}

pub fn sort_by_order(
    addrs: &[NodeAddr],
    order: &BTreeSet<(NodeAddr, NodeAddr)>,
) -> Result<Vec<NodeAddr>, GraphError> {
    let set: BTreeSet<NodeAddr> = addrs.iter().copied().collect();
    let mut indegree: BTreeMap<NodeAddr, usize> = set.iter().map(|a| (*a, 0)).collect();
    let mut succ: BTreeMap<NodeAddr, Vec<NodeAddr>> = BTreeMap::new();
    for (a, b) in order {
        if a != b && set.contains(a) && set.contains(b) {
            *indegree.get_mut(b).expect("in set") += 1;
            succ.entry(*a).or_default().push(*b);
        }
    }
    let mut ready: BTreeSet<NodeAddr> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(a, _)| *a)
        .collect();
    let mut out = Vec::with_capacity(set.len());
    while let Some(a) = ready.pop_first() {
        out.push(a);
        for b in succ.get(&a).into_iter().flatten() {
            let d = indegree.get_mut(b).expect("in set");
            *d -= 1;
            if *d == 0 {
                ready.insert(*b);
            }
        }
    }
    if out.len() != set.len() {
        let stuck: Vec<NodeAddr> = indegree
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(a, _)| *a)
            .collect();
        return Err(GraphError::CyclicOrder(stuck[0], stuck[stuck.len() - 1]));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum Keep {
    First,
    Last,
}

fn collapse<P>(seq: Vec<Rc<Node<P>>>, keep: Keep) -> Vec<Rc<Node<P>>> {
    let mut chosen: HashMap<NodeAddr, usize> = HashMap::new();
    for (i, n) in seq.iter().enumerate() {
        match keep {
            Keep::First => {
                chosen.entry(n.addr).or_insert(i);
            }
            Keep::Last => {
                chosen.insert(n.addr, i);
            }
        }
    }
    seq.into_iter()
        .enumerate()
        .filter(|(i, n)| chosen[&n.addr] == *i)
        .map(|(_, n)| n)
        .collect()
}

fn remove_marked<P>(seq: Vec<Rc<Node<P>>>) -> Vec<Rc<Node<P>>> {
    seq.into_iter().filter(|n| !n.marked).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = ObjectGraph<&'static str>;

    struct Ids(u64);
    impl Ids {
        fn next(&mut self) -> u64 {
            self.0 += 1;
            self.0
        }
    }

    fn addrs(ns: &[Rc<Node<&'static str>>]) -> Vec<&'static str> {
        ns.iter().map(|n| n.payload).collect()
    }

    // R -> {B, C}, B -> A, C -> A, with B before C.
    fn diamond() -> G {
        let mut ids = Ids(100);
        let a = G::nullgraph(0).addnode("A", 1, &[], || ids.next()).unwrap();
        let b = a.addnode("B", 2, &[1], || ids.next()).unwrap();
        let c = a.addnode("C", 3, &[1], || ids.next()).unwrap();
        let bc = b.gmerge(&c, 0).unwrap();
        bc.addnode("R", 4, &[2, 3], || ids.next()).unwrap()
    }

    #[test]
    fn nullgraph_has_no_root_and_cannot_be_traversed() {
        let g = G::nullgraph(0);
        assert!(g.root().is_empty());
        assert_eq!(g.traverse().unwrap_err(), GraphError::NoUniqueRoot(0));
    }

    #[test]
    fn single_node_is_its_own_root() {
        let g = G::nullgraph(0).addnode("n", 7, &[], || 1).unwrap();
        assert_eq!(addrs(&g.root()), vec!["n"]);
        assert_eq!(addrs(&g.traverse().unwrap()), vec!["n"]);
        assert!(g.targetnodes(7).is_empty());
    }

    #[test]
    fn diamond_traversal_and_orders() {
        let g = diamond();
        assert_eq!(addrs(&g.root()), vec!["R"]);
        assert_eq!(addrs(&g.targetnodes(4)), vec!["B", "C"]);
        assert_eq!(addrs(&g.traverse().unwrap()), vec!["R", "B", "A", "C", "A"]);
        assert_eq!(addrs(&g.order_final().unwrap()), vec!["R", "B", "C", "A"]);
        assert_eq!(addrs(&g.order_first().unwrap()), vec!["R", "B", "A", "C"]);
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn reversed_supers_flip_the_sibling_order() {
        let mut ids = Ids(100);
        let a = G::nullgraph(0).addnode("A", 1, &[], || ids.next()).unwrap();
        let b = a.addnode("B", 2, &[1], || ids.next()).unwrap();
        let c = a.addnode("C", 3, &[1], || ids.next()).unwrap();
        let g = b
            .gmerge(&c, 0)
            .unwrap()
            .addnode("R", 4, &[3, 2], || ids.next())
            .unwrap();
        assert_eq!(addrs(&g.order_final().unwrap()), vec!["R", "C", "B", "A"]);
        assert_eq!(addrs(&g.order_first().unwrap()), vec!["R", "C", "A", "B"]);
    }

    #[test]
    fn chain_orders_equal_traverse() {
        let mut ids = Ids(100);
        let g = G::nullgraph(0)
            .addnode("A", 1, &[], || ids.next())
            .unwrap()
            .addnode("B", 2, &[1], || ids.next())
            .unwrap()
            .addnode("R", 3, &[2], || ids.next())
            .unwrap();
        assert_eq!(addrs(&g.traverse().unwrap()), vec!["R", "B", "A"]);
        assert_eq!(addrs(&g.order_final().unwrap()), vec!["R", "B", "A"]);
        assert_eq!(addrs(&g.order_first().unwrap()), vec!["R", "B", "A"]);
    }

    #[test]
    fn marking() {
        let g = Rc::new(diamond());
        let m = Rc::new(g.mark(4).unwrap());
        assert_eq!(addrs(&m.order_final().unwrap()), vec!["B", "C", "A"]);
        let u = m.unmark();
        assert_eq!(addrs(&u.order_final().unwrap()), vec!["R", "B", "C", "A"]);
        assert!(Rc::ptr_eq(&u.unmark(), &u));
        let mut all = (*g).clone();
        for a in 1..=4 {
            all = all.mark(a).unwrap();
        }
        assert!(all.order_final().unwrap().is_empty());
        assert_eq!(g.mark(99).unwrap_err(), GraphError::UnknownNode(99));
    }

    #[test]
    fn sort_breaks_ties_by_address() {
        let order = BTreeSet::from([(5, 2)]);
        assert_eq!(sort_by_order(&[2, 5, 3], &order).unwrap(), vec![3, 5, 2]);
        assert!(sort_by_order(&[], &order).unwrap().is_empty());
        let cyclic = BTreeSet::from([(1, 2), (2, 1)]);
        assert!(sort_by_order(&[1, 2], &cyclic).is_err());
    }

    #[test]
    fn merge_laws() {
        let g = diamond();
        let m = g.gmerge(&G::nullgraph(9), 9).unwrap();
        assert_eq!(m.edges(), g.edges());
        assert_eq!(m.len(), g.len());
        let m = G::nullgraph(9).gmerge(&g, 9).unwrap();
        assert_eq!(m.ord(), g.ord());
    }

    #[test]
    fn contradictory_orders_do_not_merge() {
        let mut ids = Ids(100);
        let base = G::nullgraph(0)
            .addnode("A", 1, &[], || ids.next())
            .unwrap();
        let b = base.addnode("B", 2, &[1], || ids.next()).unwrap();
        let c = base.addnode("C", 3, &[1], || ids.next()).unwrap();
        let bc = b.gmerge(&c, 0).unwrap();
        let x = bc.addnode("X", 4, &[2, 3], || ids.next()).unwrap();
        let y = bc.addnode("Y", 5, &[3, 2], || ids.next()).unwrap();
        assert!(matches!(
            x.gmerge(&y, 0),
            Err(GraphError::ContradictoryOrder(_, _))
        ));
    }

    #[test]
    fn addnode_checks_the_listed_roots() {
        let g = diamond();
        let err = g.addnode("Z", 10, &[2], || 0).unwrap_err();
        assert!(matches!(err, GraphError::RootMismatch { .. }));
    }

    #[test]
    fn dump_format() {
        let g = diamond();
        let d = g.dump(|p| p.to_string());
        assert!(d.starts_with("1 A\n2 B\n3 C\n4 R\n"), "{d}");
        assert!(d.contains("4 -> 2\n"));
        assert!(d.contains("2 < 3\n"));
    }
}
