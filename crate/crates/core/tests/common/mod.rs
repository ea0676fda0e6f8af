#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use saturnum::matching::{Host, SimpleGraph};

/// Minimum maximal matching by plain include/exclude over the edge list,
/// checking maximality only at the leaves.
pub fn brute_force_saturation<H: Host>(g: &H) -> usize {
    fn rec(edges: &[(usize, usize)], i: usize, used: &mut Vec<bool>, size: usize, best: &mut usize) {
        if i == edges.len() {
            if edges.iter().all(|&(u, v)| used[u] || used[v]) {
                *best = (*best).min(size);
            }
            return;
        }
        let (u, v) = edges[i];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            rec(edges, i + 1, used, size + 1, best);
            used[u] = false;
            used[v] = false;
        }
        rec(edges, i + 1, used, size, best);
    }
    let mut best = usize::MAX;
    rec(g.edge_list(), 0, &mut vec![false; g.n()], 0, &mut best);
    best
}

/// Random simple cubic graph on `n` (even) vertices by the pairing model
/// with rejection; not necessarily connected.
pub fn random_cubic(n: usize, seed: u64) -> SimpleGraph {
    assert!(n.is_multiple_of(2) && n >= 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        let len = edges.len();
        edges.dedup();
        if edges.len() == len {
            return SimpleGraph::new(n, edges);
        }
    }
}
