//! Matchings and the graphs they live on.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::FullereneGraph;

/// A simple undirected graph as seen by the matching code.
pub trait Host {
    fn n(&self) -> usize;
    /// Edges `(u, v)` with `u < v`, sorted.
    fn edge_list(&self) -> &[(usize, usize)];
    /// True when fullerene-only bounds may be used.
    fn is_fullerene(&self) -> bool {
        false
    }
}

impl Host for FullereneGraph {
    fn n(&self) -> usize {
        FullereneGraph::n(self)
    }
    fn edge_list(&self) -> &[(usize, usize)] {
        self.edges()
    }
    fn is_fullerene(&self) -> bool {
        true
    }
}

/// Plain graph given by an edge list. Used for test hosts and subgraphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Normalises, sorts and dedups the edges. Panics on loops or out-of-range ends.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| {
                assert!(u != v && u < n && v < n, "bad edge {u}-{v}");
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        SimpleGraph { n, edges }
    }

    /// Subgraph of `host` induced by the vertices with `keep[v]`, on the same labels.
    pub fn induced<H: Host + ?Sized>(host: &H, keep: &[bool]) -> Self {
        let edges = host.edge_list().iter().copied().filter(|&(u, v)| keep[u] && keep[v]);
        SimpleGraph::new(host.n(), edges)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

impl Host for SimpleGraph {
    fn n(&self) -> usize {
        self.n
    }
    fn edge_list(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Set of edges, stored normalised (`u < v`) and sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn covered(&self, n: usize) -> Vec<bool> {
        let mut c = vec![false; n];
        for &(u, v) in &self.edges {
            c[u] = true;
            c[v] = true;
        }
        c
    }

    /// Partner of `v`, if covered.
    pub fn mate(&self, v: usize) -> Option<usize> {
        self.edges.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Every edge exists in `g` and no two share a vertex.
    pub fn is_valid_on<H: Host + ?Sized>(&self, g: &H) -> bool {
        let mut used = vec![false; g.n()];
        for &(u, v) in &self.edges {
            if v >= g.n() || g.edge_list().binary_search(&(u, v)).is_err() || used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }
}

/// True iff every edge of `g` touches a vertex covered by `m`.
pub fn is_maximal<H: Host + ?Sized>(g: &H, m: &Matching) -> bool {
    let c = m.covered(g.n());
    g.edge_list().iter().all(|&(u, v)| c[u] || c[v])
}

/// Greedy maximal matching scanning edges in the given order.
pub fn greedy_in_order<H: Host + ?Sized>(g: &H, order: impl IntoIterator<Item = usize>) -> Matching {
    let edges = g.edge_list();
    let mut used = vec![false; g.n()];
    let mut out = Vec::new();
    for i in order {
        let (u, v) = edges[i];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            out.push((u, v));
        }
    }
    Matching::new(out)
}

/// Greedy maximal matching. Seed 0 scans edges in lexicographic order; any
/// other seed scans a ChaCha8 shuffle.
pub fn greedy_maximal<H: Host + ?Sized>(g: &H, seed: u64) -> Matching {
    let mut order: Vec<usize> = (0..g.edge_list().len()).collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    greedy_in_order(g, order)
}
