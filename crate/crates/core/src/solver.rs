//! Exact minimum maximal matchings.
//!
//! Any maximal matching must dominate the lowest remaining edge `uv`, so it
//! contains `uv` or an edge touching `u` or `v`. Taking that edge and
//! deleting its ends leaves a subproblem of the same kind on the induced
//! subgraph, which gives the recursion
//! `s(H) = min over e dominating uv of 1 + s(H - V(e))`.
//! Subproblems are vertex sets, memoised as 128-bit masks and split into
//! connected components (the value is additive over components).

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matching::{greedy_maximal, is_maximal, Host, Matching};

/// Largest host the bitmask search can represent.
pub const MAX_SOLVER_N: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("graph has {n} vertices; the exact search handles at most {MAX_SOLVER_N}")]
    TooLarge { n: usize },
    #[error("graph has {n} vertices, above the configured cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Search nodes (branching steps) allowed before giving up.
    pub budget: u64,
    /// Greedy seeds `0..greedy_seeds` tried for the starting incumbent.
    pub greedy_seeds: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: 20_000_000, greedy_seeds: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub nodes_explored: u64,
    /// Lower bound known at the root before searching.
    pub lower_bound_used: usize,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationResult {
    pub s: usize,
    pub witness: Matching,
    pub proof: Proof,
}

/// One line of solver output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub id: usize,
    pub n: usize,
    pub s: usize,
    pub optimal: bool,
    pub witness_edges: Vec<(usize, usize)>,
    pub nodes_explored: u64,
}

impl SolveRecord {
    pub fn new(id: usize, n: usize, r: &SaturationResult) -> Self {
        SolveRecord {
            id,
            n,
            s: r.s,
            optimal: r.proof.optimal,
            witness_edges: r.witness.edges.clone(),
            nodes_explored: r.proof.nodes_explored,
        }
    }
}

/// `ceil((n - 6) / 3)`, the lower bound valid for every fullerene.
pub fn lower_bound_fullerene(n: usize) -> usize {
    n.saturating_sub(6).div_ceil(3)
}

fn bit(v: usize) -> u128 {
    1u128 << v
}

fn vertices(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(v)
    })
}

fn adjacency<H: Host + ?Sized>(g: &H) -> Result<Vec<u128>, SolverError> {
    if g.n() > MAX_SOLVER_N {
        return Err(SolverError::TooLarge { n: g.n() });
    }
    let mut adj = vec![0u128; g.n()];
    for &(u, v) in g.edge_list() {
        adj[u] |= bit(v);
        adj[v] |= bit(u);
    }
    Ok(adj)
}

const SPLIT: u8 = u8::MAX;

#[derive(Debug, Clone, Copy)]
enum Entry {
    /// Exact value and the matching edge chosen (`SPLIT` for a component split).
    Exact(u8, u8, u8),
    Lower(u8),
}

struct Search {
    adj: Vec<u128>,
    memo: FxHashMap<u128, Entry>,
    nodes: u64,
    budget: u64,
    aborted: bool,
    root: u128,
    root_lb: u32,
}

impl Search {
    fn new(adj: Vec<u128>, budget: u64) -> Self {
        Search { adj, memo: FxHashMap::default(), nodes: 0, budget, aborted: false, root: 0, root_lb: 0 }
    }

    /// Drops vertices without neighbours inside `mask`.
    fn strip(&self, mask: u128) -> u128 {
        let mut out = mask;
        for v in vertices(mask) {
            if self.adj[v] & mask == 0 {
                out &= !bit(v);
            }
        }
        out
    }

    fn component(&self, mask: u128, start: usize) -> u128 {
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in vertices(frontier) {
                next |= self.adj[v] & mask;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// Each chosen edge `uv` dominates `deg(u) + deg(v) - 1` edges, so at
    /// least as many edges as it takes the largest such counts to reach |E|.
    fn residual_lb(&self, mask: u128) -> u32 {
        let deg = |v: usize| (self.adj[v] & mask).count_ones();
        let mut hist = [0u32; 2 * MAX_SOLVER_N];
        let mut edges = 0u32;
        for u in vertices(mask) {
            let du = deg(u);
            for v in vertices(self.adj[u] & mask & !((bit(u) << 1) - 1)) {
                hist[(du + deg(v) - 1) as usize] += 1;
                edges += 1;
            }
        }
        let mut covered = 0u32;
        let mut k = 0u32;
        for d in (1..hist.len()).rev() {
            let c = hist[d];
            if c == 0 {
                continue;
            }
            let need = (edges - covered).div_ceil(d as u32);
            if need <= c {
                return k + need;
            }
            covered += c * d as u32;
            k += c;
        }
        k
    }

    fn lower_bound(&self, mask: u128) -> u32 {
        let mut lb = self.residual_lb(mask);
        if mask == self.root {
            lb = lb.max(self.root_lb);
        }
        match self.memo.get(&mask) {
            Some(Entry::Exact(v, ..)) => *v as u32,
            Some(Entry::Lower(l)) => lb.max(*l as u32),
            None => lb,
        }
    }

    fn store_lower(&mut self, mask: u128, lb: u32) {
        let e = self.memo.entry(mask).or_insert(Entry::Lower(0));
        if let Entry::Lower(l) = e {
            *l = (*l).max(lb.min(u8::MAX as u32 - 1) as u8);
        }
    }

    /// Exact `s` of the subgraph induced by `mask` when it is below `cut`;
    /// otherwise some lower bound that is at least `cut`.
    fn solve(&mut self, mask: u128, cut: u32) -> u32 {
        let mask = self.strip(mask);
        if mask == 0 {
            return 0;
        }
        match self.memo.get(&mask) {
            Some(Entry::Exact(v, ..)) => return *v as u32,
            Some(Entry::Lower(l)) if *l as u32 >= cut => return *l as u32,
            _ => {}
        }
        let first = mask.trailing_zeros() as usize;
        let comp = self.component(mask, first);
        if comp != mask {
            return self.solve_split(mask, comp, cut);
        }
        let lb = self.lower_bound(mask);
        if lb >= cut {
            self.store_lower(mask, lb);
            return lb;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return cut;
        }
        let u = first;
        let v = (self.adj[u] & mask).trailing_zeros() as usize;
        let mut cands = vec![(u, v)];
        cands.extend(vertices(self.adj[u] & mask & !bit(v)).map(|w| (u, w)));
        cands.extend(vertices(self.adj[v] & mask & !bit(u)).map(|w| (v, w)));
        let mut best = cut;
        let mut choice = (0, 0);
        let mut min_r = u32::MAX;
        for (a, b) in cands {
            let r = 1 + self.solve(mask & !bit(a) & !bit(b), best - 1);
            if self.aborted {
                return cut;
            }
            min_r = min_r.min(r);
            if r < best {
                best = r;
                choice = (a.min(b), a.max(b));
                if best == lb {
                    break;
                }
            }
        }
        if best < cut {
            self.memo.insert(mask, Entry::Exact(best as u8, choice.0 as u8, choice.1 as u8));
            best
        } else {
            let l = lb.max(min_r);
            self.store_lower(mask, l);
            l
        }
    }

    fn solve_split(&mut self, mask: u128, first: u128, cut: u32) -> u32 {
        let mut comps = vec![first];
        let mut rest = mask & !first;
        while rest != 0 {
            let c = self.component(rest, rest.trailing_zeros() as usize);
            comps.push(c);
            rest &= !c;
        }
        let lbs: Vec<u32> = comps.iter().map(|&c| self.lower_bound(c)).collect();
        let mut exact = 0u32;
        for i in 0..comps.len() {
            let others: u32 = lbs[i + 1..].iter().sum();
            if exact + lbs[i] + others >= cut {
                let l = exact + lbs[i] + others;
                self.store_lower(mask, l);
                return l;
            }
            let cut_i = cut - exact - others;
            let r = self.solve(comps[i], cut_i);
            if self.aborted {
                return cut;
            }
            if r >= cut_i {
                let l = exact + r + others;
                self.store_lower(mask, l);
                return l;
            }
            exact += r;
        }
        self.memo.insert(mask, Entry::Exact(exact as u8, SPLIT, SPLIT));
        exact
    }

    fn witness(&self, mask: u128, out: &mut Vec<(usize, usize)>) {
        let mask = self.strip(mask);
        if mask == 0 {
            return;
        }
        match self.memo.get(&mask) {
            Some(&Entry::Exact(_, SPLIT, _)) => {
                let mut rest = mask;
                while rest != 0 {
                    let c = self.component(rest, rest.trailing_zeros() as usize);
                    self.witness(c, out);
                    rest &= !c;
                }
            }
            Some(&Entry::Exact(_, a, b)) => {
                out.push((a as usize, b as usize));
                self.witness(mask & !bit(a as usize) & !bit(b as usize), out);
            }
            _ => unreachable!("witness requested for an unsolved state"),
        }
    }
}

/// Minimum maximal matching by branch and bound.
///
/// The incumbent starts as the best greedy matching over the configured
/// seeds. With fullerene hosts the bound `ceil((n - 6)/3)` is used at the
/// root only. When the node budget runs out the incumbent is returned with
/// `optimal = false`.
pub fn saturation_exact<H: Host + ?Sized>(g: &H, cfg: &SolverConfig) -> Result<SaturationResult, SolverError> {
    let adj = adjacency(g)?;
    let mut incumbent = greedy_maximal(g, 0);
    for seed in 1..cfg.greedy_seeds {
        let m = greedy_maximal(g, seed);
        if m.len() < incumbent.len() {
            incumbent = m;
        }
    }
    let mut search = Search::new(adj, cfg.budget);
    let full = search.strip(if g.n() == 128 { u128::MAX } else { bit(g.n()) - 1 });
    search.root = full;
    if g.is_fullerene() {
        search.root_lb = lower_bound_fullerene(g.n()) as u32;
    }
    let root_lb = search.lower_bound(full) as usize;
    if incumbent.len() <= root_lb {
        return Ok(finish(g, incumbent, 0, root_lb, true));
    }
    let r = search.solve(full, incumbent.len() as u32) as usize;
    if search.aborted {
        return Ok(finish(g, incumbent, search.nodes, root_lb, false));
    }
    if r < incumbent.len() {
        let mut edges = Vec::new();
        search.witness(full, &mut edges);
        incumbent = Matching::new(edges);
    }
    Ok(finish(g, incumbent, search.nodes, root_lb, true))
}

fn finish<H: Host + ?Sized>(g: &H, witness: Matching, nodes: u64, lb: usize, optimal: bool) -> SaturationResult {
    assert!(witness.is_valid_on(g) && is_maximal(g, &witness), "solver produced an invalid witness");
    SaturationResult { s: witness.len(), witness, proof: Proof { nodes_explored: nodes, lower_bound_used: lb, optimal } }
}

/// Exact independence number by branch and bound.
pub fn independence_number<H: Host + ?Sized>(g: &H) -> Result<usize, SolverError> {
    let adj = adjacency(g)?;
    let all = if g.n() == 128 { u128::MAX } else { bit(g.n()) - 1 };
    let mut best = 0;
    mis(&adj, all, 0, &mut best);
    Ok(best as usize)
}

/// Upper bound: an independent set meets each edge of a matching at most once.
fn mis_bound(adj: &[u128], mask: u128) -> u32 {
    let mut free = mask;
    let mut matched = 0;
    for v in vertices(mask) {
        if free & bit(v) == 0 {
            continue;
        }
        if let Some(w) = vertices(adj[v] & free).next() {
            free &= !bit(v) & !bit(w);
            matched += 1;
        }
    }
    mask.count_ones() - matched
}

fn mis(adj: &[u128], mut mask: u128, mut size: u32, best: &mut u32) {
    // Vertices of degree at most one can always be taken.
    loop {
        let low = vertices(mask).find(|&v| (adj[v] & mask).count_ones() <= 1);
        match low {
            Some(v) => {
                size += 1;
                mask &= !bit(v) & !adj[v];
            }
            None => break,
        }
    }
    if mask == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + mis_bound(adj, mask) <= *best {
        return;
    }
    let v = vertices(mask).max_by_key(|&v| ((adj[v] & mask).count_ones(), std::cmp::Reverse(v))).unwrap();
    mis(adj, mask & !bit(v) & !adj[v], size + 1, best);
    mis(adj, mask & !bit(v), size, best);
}

/// `ceil((n - alpha)/2)`: the vertices left uncovered by a maximal matching
/// are independent.
pub fn independence_lb<H: Host + ?Sized>(g: &H, cap: usize) -> Result<usize, SolverError> {
    if g.n() > cap {
        return Err(SolverError::SizeCapExceeded { n: g.n(), cap });
    }
    let alpha = independence_number(g)?;
    Ok((g.n() - alpha).div_ceil(2))
}
