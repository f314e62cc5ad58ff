//! Brute-force reference orderings over small class DAGs, and a seeded
//! generator of such DAGs.
//!
//! Nothing here touches `graphlib`: paths are enumerated by plain recursion
//! over the supers lists and collapsed by counting.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A class DAG. Node `k` lists its superclasses, all below `k`; the last
/// node is the root of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagSpec {
    pub supers: Vec<Vec<usize>>,
    pub selectors: Vec<BTreeSet<String>>,
    pub ivars: Vec<Vec<String>>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Final,
    First,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_supers: usize,
    pub selectors: Vec<String>,
    pub max_ivars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 12,
            max_supers: 3,
            selectors: ["m", "n", "p"].map(String::from).to_vec(),
            max_ivars: 2,
        }
    }
}

impl DagSpec {
    /// A DAG with the given supers lists and no selectors or ivars.
    pub fn from_supers(supers: Vec<Vec<usize>>) -> DagSpec {
        let n = supers.len();
        DagSpec {
            supers,
            selectors: vec![BTreeSet::new(); n],
            ivars: vec![Vec::new(); n],
            seed: 0,
        }
    }

    /// A(0) under B(1) and C(2), both under R(3), with supers [B, C].
    pub fn diamond() -> DagSpec {
        DagSpec::from_supers(vec![vec![], vec![0], vec![0], vec![1, 2]])
    }

    pub fn len(&self) -> usize {
        self.supers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supers.is_empty()
    }

    pub fn root(&self) -> usize {
        self.len() - 1
    }

    pub fn defines(&self, node: usize, sel: &str) -> bool {
        self.selectors[node].contains(sel)
    }

    /// Nodes reachable from the root, the root included.
    pub fn reachable(&self) -> BTreeSet<usize> {
        oracle_paths(self).iter().map(|p| *p.last().unwrap()).collect()
    }

    /// Whether some node is reachable along more than one path.
    pub fn has_repeats(&self) -> bool {
        oracle_paths(self).len() != self.reachable().len()
    }

    /// Every strict ancestor of `node`.
    pub fn ancestors(&self, node: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = self.supers[node].clone();
        while let Some(s) = stack.pop() {
            if out.insert(s) {
                stack.extend(self.supers[s].iter().copied());
            }
        }
        out
    }
}

/// Every path from the root, in depth-first order with supers visited as
/// listed. Each path ends at the node it reaches.
pub fn oracle_paths(d: &DagSpec) -> Vec<Vec<usize>> {
    fn go(d: &DagSpec, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        let here = *path.last().unwrap();
        for &s in &d.supers[here] {
            path.push(s);
            go(d, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    if !d.is_empty() {
        go(d, &mut vec![d.root()], &mut out);
    }
    out
}

/// The visit sequence: the end node of each path.
pub fn oracle_traverse(d: &DagSpec) -> Vec<usize> {
    oracle_paths(d).iter().map(|p| *p.last().unwrap()).collect()
}

/// The visit sequence with each node kept at its final or first visit.
pub fn oracle_order(d: &DagSpec, mode: Mode) -> Vec<usize> {
    let seq = oracle_traverse(d);
    let mut total: HashMap<usize, usize> = HashMap::new();
    for &n in &seq {
        *total.entry(n).or_default() += 1;
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::new();
    for &n in &seq {
        let k = seen.entry(n).or_default();
        *k += 1;
        let keep = match mode {
            Mode::First => *k == 1,
            Mode::Final => *k == total[&n],
        };
        if keep {
            out.push(n);
        }
    }
    out
}

/// Nodes defining `sel`, in lookup order: the first one handles the
/// message and each later one is reached by sending to `next`.
pub fn oracle_dispatch(d: &DagSpec, sel: &str, mode: Mode) -> Vec<usize> {
    oracle_order(d, mode)
        .into_iter()
        .filter(|&n| d.defines(n, sel))
        .collect()
}

/// A random DAG within `limits`, the same for the same seed.
///
/// Node 0 has no supers and every other node has at least one. Supers
/// lists hold distinct nodes, none an ancestor of another, and all lists
/// agree with one random precedence so that sibling order never conflicts.
pub fn generate_dag(seed: u64, limits: &Limits) -> DagSpec {
    assert!(limits.max_nodes > 0 && limits.max_supers > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=limits.max_nodes);
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut rng);

    let mut d = DagSpec {
        supers: Vec::with_capacity(n),
        selectors: Vec::with_capacity(n),
        ivars: Vec::with_capacity(n),
        seed,
    };
    for k in 0..n {
        let mut supers = Vec::new();
        if k > 0 {
            let want = rng.gen_range(1..=limits.max_supers.min(k));
            let mut pool: Vec<usize> = (0..k).collect();
            pool.shuffle(&mut rng);
            for cand in pool.into_iter().take(want) {
                supers.push(cand);
            }
            // Drop any super already inherited through another.
            let inherited: BTreeSet<usize> = supers
                .iter()
                .flat_map(|&s| d.ancestors(s))
                .collect();
            supers.retain(|s| !inherited.contains(s));
            supers.sort_by_key(|&s| rank[s]);
        }
        d.supers.push(supers);
        let sels = limits
            .selectors
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        d.selectors.push(sels);
        let nv = rng.gen_range(0..=limits.max_ivars);
        d.ivars.push((0..nv).map(|j| format!("v{k}_{j}")).collect());
    }
    d
}
