//! Face spirals and isomer generation.
//!
//! A spiral lists face sizes in the order the faces are laid down: every new
//! face touches the face placed just before it and the oldest face that still
//! has free sides. Winding a sequence up builds the dual triangulation; the
//! fullerene is read off as its dual.
//!
//! Every fullerene below 380 vertices has a spiral, so enumerating all
//! sequences finds every isomer well past desk scale. [`generate_isomers`]
//! refuses `n > 100` to keep that ceiling explicit.

use rayon::prelude::*;
use thiserror::Error;

use crate::embedding;
use crate::fixtures;
use crate::graph::{FullereneGraph, GraphError};

/// Largest vertex count accepted by [`generate_isomers`].
pub const MAX_GENERATED_N: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpiralError {
    #[error("spiral must have twelve 5s and otherwise 6s")]
    BadSequence,
    #[error("spiral does not close at face {0}")]
    SpiralDoesNotClose(usize),
    #[error("wound-up surface is not a fullerene: {0}")]
    Invalid(GraphError),
    #[error("n = {0} is outside the generator range (even, 20..={MAX_GENERATED_N})")]
    OutOfRange(usize),
}

/// Most faces a spiral can have (n = 100).
const MAX_FACES: usize = MAX_GENERATED_N / 2 + 2;

/// Partial wind-up of a spiral into a dual triangulation. Fixed-size so the
/// search can copy it cheaply.
#[derive(Clone, Copy, Debug)]
struct Windup {
    len: usize,
    rem: [i8; MAX_FACES],
    deg: [u8; MAX_FACES],
    adj: [[u8; 6]; MAX_FACES],
    /// Open faces; `open[head..tail]` is the live part.
    open: [u8; MAX_FACES],
    head: usize,
    tail: usize,
}

impl Windup {
    fn new() -> Self {
        Windup {
            len: 0,
            rem: [0; MAX_FACES],
            deg: [0; MAX_FACES],
            adj: [[0; 6]; MAX_FACES],
            open: [0; MAX_FACES],
            head: 0,
            tail: 0,
        }
    }

    fn connect(&mut self, a: usize, b: usize) -> bool {
        if self.adj[a][..self.deg[a] as usize].contains(&(b as u8)) {
            return false;
        }
        self.rem[a] -= 1;
        self.rem[b] -= 1;
        if self.rem[a] < 0 || self.rem[b] < 0 {
            return false;
        }
        self.adj[a][self.deg[a] as usize] = b as u8;
        self.adj[b][self.deg[b] as usize] = a as u8;
        self.deg[a] += 1;
        self.deg[b] += 1;
        true
    }

    fn live(&self) -> usize {
        self.tail - self.head
    }

    fn open_push(&mut self, f: usize) {
        self.open[self.tail] = f as u8;
        self.tail += 1;
    }

    fn back(&self) -> usize {
        self.open[self.tail - 1] as usize
    }

    fn front(&self) -> usize {
        self.open[self.head] as usize
    }

    /// Places the next face. `last` marks the final face, which must close
    /// the surface.
    fn push(&mut self, s: u8, last: bool) -> bool {
        let k = self.len;
        self.len += 1;
        self.rem[k] = s as i8;
        self.deg[k] = 0;
        if k == 0 {
            self.open_push(0);
            return true;
        }
        if k == 1 {
            self.open_push(1);
            return self.connect(0, 1);
        }
        if last {
            if self.live() != s as usize {
                return false;
            }
            for i in self.head..self.tail {
                let f = self.open[i] as usize;
                if self.rem[f] != 1 || !self.connect(k, f) {
                    return false;
                }
            }
            self.head = self.tail;
            return true;
        }
        if !self.connect(k, self.back()) || !self.connect(k, self.front()) {
            return false;
        }
        loop {
            if self.rem[self.front()] == 0 {
                self.head += 1;
                if self.live() < 2 || !self.connect(k, self.front()) {
                    return false;
                }
            } else if self.rem[self.back()] == 0 {
                self.tail -= 1;
                if self.live() < 2 || !self.connect(k, self.back()) {
                    return false;
                }
            } else {
                break;
            }
        }
        if self.rem[k] <= 0 {
            return false;
        }
        self.open_push(k);
        true
    }

    /// Dual rotation system: for every face, its neighbours in cyclic order,
    /// all oriented the same way.
    fn dual_rotation(&self) -> Option<Vec<Vec<usize>>> {
        let f = self.len;
        let adj: Vec<Vec<usize>> =
            (0..f).map(|v| self.adj[v][..self.deg[v] as usize].iter().map(|&x| x as usize).collect()).collect();
        let link: Vec<Vec<usize>> = (0..f).map(|v| link_cycle(&adj, v)).collect::<Option<_>>()?;
        let mut rot: Vec<Option<Vec<usize>>> = vec![None; f];
        rot[0] = Some(link[0].clone());
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            let order = rot[v].clone().unwrap();
            let d = order.len();
            for i in 0..d {
                let g = order[i];
                if rot[g].is_some() {
                    continue;
                }
                // In the order around g, v must be followed by b: the other
                // common neighbour of v and g.
                let b = order[(i + d - 1) % d];
                let cyc = &link[g];
                let m = cyc.len();
                let p = cyc.iter().position(|&x| x == v)?;
                let oriented: Vec<usize> = if cyc[(p + 1) % m] == b {
                    cyc.clone()
                } else {
                    cyc.iter().rev().copied().collect()
                };
                rot[g] = Some(oriented);
                stack.push(g);
            }
        }
        rot.into_iter().collect()
    }
}

/// The neighbours of `v` as the cycle they induce, or `None` if they do not
/// induce a single cycle.
fn link_cycle(adj: &[Vec<usize>], v: usize) -> Option<Vec<usize>> {
    let nb = &adj[v];
    let inner = |g: usize| -> Vec<usize> { adj[g].iter().copied().filter(|x| nb.contains(x)).collect() };
    if nb.iter().any(|&g| inner(g).len() != 2) {
        return None;
    }
    let mut cyc = vec![nb[0]];
    let mut prev = nb[0];
    let mut cur = inner(nb[0])[0];
    while cur != nb[0] {
        cyc.push(cur);
        let i = inner(cur);
        let next = if i[0] == prev { i[1] } else { i[0] };
        prev = cur;
        cur = next;
        if cyc.len() > nb.len() {
            return None;
        }
    }
    (cyc.len() == nb.len()).then_some(cyc)
}

fn check_sequence(seq: &[u8]) -> Result<(), SpiralError> {
    if seq.len() > MAX_FACES {
        return Err(SpiralError::BadSequence);
    }
    let fives = seq.iter().filter(|&&s| s == 5).count();
    if fives != 12 || seq.iter().any(|&s| s != 5 && s != 6) {
        return Err(SpiralError::BadSequence);
    }
    Ok(())
}

fn wind(seq: &[u8]) -> Result<Windup, SpiralError> {
    let mut w = Windup::new();
    for (k, &s) in seq.iter().enumerate() {
        if !w.push(s, k + 1 == seq.len()) {
            return Err(SpiralError::SpiralDoesNotClose(k));
        }
    }
    Ok(w)
}

fn graph_from_windup(w: &Windup, at: usize) -> Result<FullereneGraph, SpiralError> {
    let drot = w.dual_rotation().ok_or(SpiralError::SpiralDoesNotClose(at))?;
    let rot = fixtures::dual_rotation(&drot);
    if rot.iter().any(|r| r.len() != 3) {
        return Err(SpiralError::SpiralDoesNotClose(at));
    }
    FullereneGraph::build_from_rotation(rot).map_err(SpiralError::Invalid)
}

/// Unwinds a face-size sequence into a fullerene.
///
/// Face `i` of the spiral becomes dual node `i`; the primal vertex labels
/// follow the tracing order of the dual triangles.
pub fn spiral_to_graph(seq: &[u8]) -> Result<FullereneGraph, SpiralError> {
    check_sequence(seq)?;
    let w = wind(seq)?;
    graph_from_windup(&w, seq.len() - 1)
}

/// Same as [`spiral_to_graph`] but also returns, for each spiral position,
/// the id of the corresponding face in the returned graph.
pub fn spiral_to_graph_with_faces(seq: &[u8]) -> Result<(FullereneGraph, Vec<usize>), SpiralError> {
    let g = spiral_to_graph(seq)?;
    let w = wind(seq)?;
    let drot = w.dual_rotation().unwrap();
    // Dual node i is the face whose vertices are the dual triangles around i.
    let tracing = embedding::trace_faces(&drot);
    let mut face_of = vec![usize::MAX; seq.len()];
    for (node, darts) in tracing.dart_face.iter().enumerate() {
        let mut verts: Vec<usize> = darts.clone();
        verts.sort_unstable();
        face_of[node] = g
            .faces()
            .iter()
            .find(|f| {
                let mut b = f.boundary.clone();
                b.sort_unstable();
                b == verts
            })
            .map(|f| f.id)
            .unwrap();
    }
    Ok((g, face_of))
}

/// An isomer with its canonical (lexicographically smallest) spiral.
#[derive(Debug, Clone)]
pub struct Isomer {
    pub spiral: Vec<u8>,
    pub graph: FullereneGraph,
}

/// Number of spiral positions fixed per parallel task.
const SPLIT_DEPTH: usize = 10;

/// All fullerenes on `n` vertices, one per isomorphism class (mirror images
/// identified), ordered by canonical spiral.
///
/// A closing sequence is kept only when no other start on its surface gives
/// a smaller spiral, so every isomer is emitted exactly once without a shared
/// set. Canonical codes are compared afterwards as a cross-check.
pub fn generate_isomers(n: usize) -> Result<Vec<Isomer>, SpiralError> {
    if n % 2 == 1 || !(20..=MAX_GENERATED_N).contains(&n) {
        return Err(SpiralError::OutOfRange(n));
    }
    let total = n / 2 + 2;
    let mut prefixes = Vec::new();
    let split = SPLIT_DEPTH.min(total - 1);
    collect_prefixes(&mut Windup::new(), &mut Vec::new(), total, split, &mut prefixes);

    let found: Vec<Vec<Vec<u8>>> = prefixes
        .into_par_iter()
        .map(|(w, mut seq)| {
            let mut out = Vec::new();
            extend(w, &mut seq, total, &mut out);
            out
        })
        .collect();
    let mut spirals: Vec<Vec<u8>> = found.into_iter().flatten().collect();
    spirals.sort();
    let isomers: Vec<Isomer> = spirals
        .into_par_iter()
        .map(|spiral| {
            let graph = spiral_to_graph(&spiral).expect("canonical spiral closes");
            Isomer { spiral, graph }
        })
        .collect();
    let mut codes: Vec<Vec<u8>> = isomers.par_iter().map(|i| i.graph.canonical_code()).collect();
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), isomers.len(), "two canonical spirals describe the same isomer");
    Ok(isomers)
}

fn fives_ok(seq: &[u8], total: usize) -> bool {
    let fives = seq.iter().filter(|&&s| s == 5).count();
    fives <= 12 && 12 - fives <= total - seq.len()
}

fn collect_prefixes(w: &mut Windup, seq: &mut Vec<u8>, total: usize, depth: usize, out: &mut Vec<(Windup, Vec<u8>)>) {
    if seq.len() == depth {
        out.push((*w, seq.clone()));
        return;
    }
    for s in [5u8, 6] {
        seq.push(s);
        if fives_ok(seq, total) {
            let mut next = *w;
            if next.push(s, seq.len() == total) {
                collect_prefixes(&mut next, seq, total, depth, out);
            }
        }
        seq.pop();
    }
}

fn extend(w: Windup, seq: &mut Vec<u8>, total: usize, out: &mut Vec<Vec<u8>>) {
    if seq.len() == total {
        let masks: Vec<u64> = (0..total)
            .map(|f| w.adj[f][..w.deg[f] as usize].iter().fold(0u64, |m, &g| m | 1 << g))
            .collect();
        if is_canonical(&masks, seq) {
            out.push(seq.clone());
        }
        return;
    }
    let fives = seq.iter().filter(|&&s| s == 5).count();
    let left = total - seq.len();
    for s in [5u8, 6] {
        if s == 5 && fives == 12 {
            continue;
        }
        if s == 6 && 12 - fives == left {
            continue;
        }
        let mut next = w;
        seq.push(s);
        if next.push(s, seq.len() == total) {
            extend(next, seq, total, out);
        }
        seq.pop();
    }
}

enum Walk {
    Invalid,
    Larger,
    Equal,
    Smaller,
}

/// Follows the spiral on a given surface from the start `f1, f2, f3`
/// (consecutive, mutually adjacent faces) and compares it with `target`.
///
/// `masks[f]` is the set of faces adjacent to `f`; face sizes are the mask
/// popcounts. Walking stops as soon as the result is known to be larger.
fn walk(masks: &[u64], start: [usize; 3], target: &[u8]) -> Walk {
    let total = masks.len();
    let mut w = Windup::new();
    let mut map = [0usize; MAX_FACES];
    let mut placed = 0u64;
    let mut smaller = false;
    for k in 0..total {
        let face = if k < 3 {
            start[k]
        } else {
            let front = map[w.front()];
            let back = map[w.back()];
            let c = masks[front] & masks[back] & !placed;
            if c.count_ones() != 1 {
                return Walk::Invalid;
            }
            c.trailing_zeros() as usize
        };
        let s = masks[face].count_ones() as u8;
        if !smaller {
            if s > target[k] {
                return Walk::Larger;
            }
            smaller = s < target[k];
        }
        placed |= 1 << face;
        map[k] = face;
        if !w.push(s, k + 1 == total) {
            return Walk::Invalid;
        }
    }
    // The wind-up must reproduce the surface, not just some closing sequence.
    for i in 0..total {
        for &j in &w.adj[i][..w.deg[i] as usize] {
            if masks[map[i]] & (1 << map[j as usize]) == 0 {
                return Walk::Invalid;
            }
        }
    }
    if smaller {
        Walk::Smaller
    } else {
        Walk::Equal
    }
}

fn starts(masks: &[u64]) -> impl Iterator<Item = [usize; 3]> + '_ {
    (0..masks.len()).flat_map(move |f1| {
        bits(masks[f1]).flat_map(move |f2| bits(masks[f1] & masks[f2]).map(move |f3| [f1, f2, f3]))
    })
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

fn is_canonical(masks: &[u64], seq: &[u8]) -> bool {
    starts(masks)
        .filter(|s| masks[s[0]].count_ones() as u8 <= seq[0])
        .all(|s| !matches!(walk(masks, s, seq), Walk::Smaller))
}

fn dual_masks(g: &FullereneGraph) -> Option<Vec<u64>> {
    if g.num_faces() > MAX_FACES {
        return None;
    }
    let d = g.dual();
    Some((0..g.num_faces()).map(|f| d.neighbors(f).iter().fold(0u64, |m, &h| m | 1 << h)).collect())
}

/// All face spirals of `g`, one per start that closes, in start order.
/// Returns `None` when `g` is larger than the generator range.
pub fn spirals(g: &FullereneGraph) -> Option<Vec<Vec<u8>>> {
    let masks = dual_masks(g)?;
    let worst = vec![7u8; masks.len()];
    Some(
        starts(&masks)
            .filter_map(|s| match walk(&masks, s, &worst) {
                Walk::Smaller => Some(spiral_from(&masks, s)),
                _ => None,
            })
            .collect(),
    )
}

fn spiral_from(masks: &[u64], start: [usize; 3]) -> Vec<u8> {
    let total = masks.len();
    let mut w = Windup::new();
    let mut map = [0usize; MAX_FACES];
    let mut placed = 0u64;
    let mut out = Vec::with_capacity(total);
    for k in 0..total {
        let face = if k < 3 {
            start[k]
        } else {
            let c = masks[map[w.front()]] & masks[map[w.back()]] & !placed;
            c.trailing_zeros() as usize
        };
        let s = masks[face].count_ones() as u8;
        placed |= 1 << face;
        map[k] = face;
        out.push(s);
        w.push(s, k + 1 == total);
    }
    out
}

/// The lexicographically smallest face spiral of `g`, if it has one.
pub fn canonical_spiral(g: &FullereneGraph) -> Option<Vec<u8>> {
    spirals(g)?.into_iter().min()
}
