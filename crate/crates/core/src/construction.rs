//! Upper-bound constructions: the tube pattern, matchings of capped
//! nanotubes, and the pentagon bookkeeping used to cut a fullerene into
//! patches.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DualGraph, FaceId, FullereneGraph, Vertex};
use crate::matching::{is_maximal, Matching, SimpleGraph};
use crate::patch::Patch;
use crate::solver::{saturation_exact, SolverConfig, SolverError};
use crate::tube::{self, RingStructure, TubeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("the ring pattern needs at least 3 rings, got {0}")]
    TooFewRings(usize),
    #[error("patch holds {0} pentagons, expected 6")]
    NotSixPentagons(usize),
    #[error("boundary has {l} vertices of degree 3 and {r} of degree 2")]
    UnbalancedBoundary { l: usize, r: usize },
    #[error("pentagon class has {0} members, need at least 2")]
    ClassTooSmall(usize),
    #[error("dual edge set is not a tree")]
    NotATree,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Black vertices are covered by the working matching, white ones are not.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColorClasses {
    pub black: Vec<Vertex>,
    pub white: Vec<Vertex>,
}

impl ColorClasses {
    pub fn of(n: usize, m: &Matching) -> Self {
        let c = m.covered(n);
        let (black, white) = (0..n).partition(|&v| c[v]);
        ColorClasses { black, white }
    }
}

fn pattern(rs: &RingStructure, phase: usize) -> Matching {
    let mut used = vec![false; rs.n];
    let mut edges = Vec::new();
    for h in &rs.hexagons {
        let e = match (h.ring + phase) % 3 {
            1 => h.a1_edge(),
            2 => h.a2_edge(),
            _ => continue,
        };
        assert!(!used[e.0] && !used[e.1], "tube pattern edges overlap at hexagon {}", h.face);
        used[e.0] = true;
        used[e.1] = true;
        edges.push(e);
    }
    Matching::new(edges)
}

/// The tube pattern: rings `1, 4, 7, ..` take their a1-edges, rings
/// `2, 5, 8, ..` their a2-edges, the rest nothing. Every hexagon of an
/// interior ring is left with exactly two white vertices.
pub fn ring_pattern_matching(rs: &RingStructure) -> Result<(Matching, ColorClasses), ConstructionError> {
    ring_pattern_with_phase(rs, 0)
}

/// The pattern with ring `r` treated as ring `r + phase`.
pub fn ring_pattern_with_phase(rs: &RingStructure, phase: usize) -> Result<(Matching, ColorClasses), ConstructionError> {
    if rs.num_rings() < 3 {
        return Err(ConstructionError::TooFewRings(rs.num_rings()));
    }
    let m = pattern(rs, phase);
    let colors = ColorClasses::of(rs.n, &m);
    Ok((m, colors))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NanotubeMatching {
    pub matching: Matching,
    /// Pattern phase that gave the smallest result.
    pub phase: usize,
    pub pattern_edges: usize,
    /// Edges added on the vertices the pattern leaves white.
    pub completion_edges: usize,
    /// Vertices in the completion region.
    pub region: usize,
    /// Total faces of the two caps.
    pub cap_faces: usize,
    /// False if the completion search ran out of budget.
    pub completion_optimal: bool,
}

/// Maximal matching of a built nanotube: the tube pattern on every ring,
/// completed by a minimum maximal matching of the graph induced by the
/// white vertices, one component at a time. All three pattern phases are tried and the smallest
/// result kept.
pub fn nanotube_matching(g: &FullereneGraph, rs: &RingStructure) -> Result<NanotubeMatching, ConstructionError> {
    let cfg = SolverConfig::default();
    let mut best: Option<NanotubeMatching> = None;
    for phase in 0..3 {
        let base = pattern(rs, phase);
        let covered = base.covered(g.n());
        let open: Vec<(Vertex, Vertex)> = g.edges().iter().copied().filter(|&(u, v)| !covered[u] && !covered[v]).collect();
        let mut extra = Vec::new();
        let mut optimal = true;
        let mut region = 0;
        for comp in components(g.n(), &open) {
            region += comp.len();
            let mut index = vec![usize::MAX; g.n()];
            for (i, &v) in comp.iter().enumerate() {
                index[v] = i;
            }
            let sub = SimpleGraph::new(
                comp.len(),
                open.iter().filter(|&&(u, _)| index[u] != usize::MAX).map(|&(u, v)| (index[u], index[v])),
            );
            let witness = match saturation_exact(&sub, &cfg) {
                Ok(done) => {
                    optimal &= done.proof.optimal;
                    done.witness
                }
                Err(SolverError::TooLarge { .. }) => {
                    optimal = false;
                    crate::matching::greedy_maximal(&sub, 0)
                }
                Err(e) => return Err(e.into()),
            };
            extra.extend(witness.edges.iter().map(|&(a, b)| (comp[a], comp[b])));
        }
        let matching = Matching::new(base.edges.iter().copied().chain(extra.iter().copied()));
        assert!(matching.is_valid_on(g) && is_maximal(g, &matching));
        let cand = NanotubeMatching {
            phase,
            pattern_edges: base.len(),
            completion_edges: extra.len(),
            region,
            cap_faces: rs.cap_faces.0 + rs.cap_faces.1,
            completion_optimal: optimal,
            matching,
        };
        if best.as_ref().is_none_or(|b| cand.matching.len() < b.matching.len()) {
            best = Some(cand);
        }
    }
    Ok(best.unwrap())
}

/// Vertex sets of the connected components of an edge list, ignoring
/// isolated vertices.
fn components(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Wrap vector `(p1, p2)` of a tube whose boundary cycle has the given
/// degrees (2 or 3 edges inside the patch) in walking order.
pub fn tube_type_from_boundary(degrees: &[u8]) -> Result<(i64, i64), ConstructionError> {
    tube::wrap_vector(degrees).map_err(|e| match e {
        TubeError::UnbalancedBoundary { l, r } => ConstructionError::UnbalancedBoundary { l, r },
        other => unreachable!("{other}"),
    })
}

/// True iff `d <= sqrt(63 n / 2) + 14`, decided in integers.
pub fn within_threshold(d: usize, n: usize) -> bool {
    d <= 14 || 2 * (d - 14) * (d - 14) <= 63 * n
}

pub fn threshold(n: usize) -> f64 {
    (63.0 * n as f64 / 2.0).sqrt() + 14.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PentagonClustering {
    pub n: usize,
    pub threshold: f64,
    /// Classes of pentagon faces, each sorted, ordered by smallest member.
    pub classes: Vec<Vec<FaceId>>,
}

impl PentagonClustering {
    /// Two far-apart groups of six.
    pub fn is_case_a(&self) -> bool {
        self.classes.len() == 2
    }
}

/// Pentagons grouped under the transitive closure of "dual distance at
/// most `sqrt(63n/2) + 14`".
pub fn pentagon_clusters(g: &FullereneGraph) -> PentagonClustering {
    let dual = g.dual();
    let pents = g.pentagons();
    let mut parent: Vec<usize> = (0..pents.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, &f) in pents.iter().enumerate() {
        let dist = dual.distances_from(f);
        for (j, &h) in pents.iter().enumerate().skip(i + 1) {
            if within_threshold(dist[h], g.n()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<FaceId>> = BTreeMap::new();
    for (i, &f) in pents.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(f);
    }
    let mut classes: Vec<Vec<FaceId>> = groups.into_values().collect();
    classes.iter_mut().for_each(|c| c.sort_unstable());
    classes.sort();
    PentagonClustering { n: g.n(), threshold: threshold(g.n()), classes }
}

/// A subtree of the dual graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualTree {
    pub root: FaceId,
    pub nodes: Vec<FaceId>,
    pub edges: Vec<(FaceId, FaceId)>,
    /// Primal edges between two faces of the tree (the set `T`).
    pub primal_edges: usize,
}

fn induced_edges(g: &FullereneGraph, nodes: &BTreeSet<FaceId>) -> Vec<(Vertex, Vertex)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            let (a, b) = g.edge_faces(u, v);
            nodes.contains(&a) && nodes.contains(&b)
        })
        .collect()
}

/// Adds the faces the tree encloses (every complement component but the
/// largest), each hung from a neighbour already in the tree.
fn fill_holes(dual: &DualGraph, nodes: &mut BTreeSet<FaceId>, edges: &mut BTreeSet<(FaceId, FaceId)>) {
    let mut comp = vec![usize::MAX; dual.num_nodes()];
    let mut sizes = Vec::new();
    for s in 0..dual.num_nodes() {
        if nodes.contains(&s) || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = sizes.len();
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(f) = stack.pop() {
            size += 1;
            for &h in dual.neighbors(f) {
                if !nodes.contains(&h) && comp[h] == usize::MAX {
                    comp[h] = sizes.len();
                    stack.push(h);
                }
            }
        }
        sizes.push(size);
    }
    if sizes.len() < 2 {
        return;
    }
    let outer = (0..sizes.len()).max_by_key(|&i| sizes[i]).unwrap();
    let mut queue: VecDeque<FaceId> = nodes.iter().copied().collect();
    while let Some(f) = queue.pop_front() {
        for &h in dual.neighbors(f) {
            if comp[h] != outer && nodes.insert(h) {
                edges.insert((f.min(h), f.max(h)));
                queue.push_back(h);
            }
        }
    }
}

/// Union of BFS shortest paths from one member of `class` to the others.
/// Enclosed faces are added so the tree faces form a disc. Every member is
/// tried as the root; the tree with the fewest primal edges between its
/// faces wins.
pub fn pentagon_dual_tree(g: &FullereneGraph, class: &[FaceId]) -> Result<DualTree, ConstructionError> {
    if class.len() < 2 {
        return Err(ConstructionError::ClassTooSmall(class.len()));
    }
    let dual = g.dual();
    let mut best: Option<DualTree> = None;
    for &root in class {
        let mut parent = vec![usize::MAX; dual.num_nodes()];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            let mut nb = dual.neighbors(f).to_vec();
            nb.sort_unstable();
            for h in nb {
                if parent[h] == usize::MAX {
                    parent[h] = f;
                    queue.push_back(h);
                }
            }
        }
        let mut nodes = BTreeSet::from([root]);
        let mut edges = BTreeSet::new();
        for &f in class {
            let mut x = f;
            while x != root {
                let p = parent[x];
                edges.insert((p.min(x), p.max(x)));
                nodes.insert(x);
                x = p;
            }
        }
        fill_holes(&dual, &mut nodes, &mut edges);
        let primal_edges = induced_edges(g, &nodes).len();
        let cand = DualTree { root, nodes: nodes.into_iter().collect(), edges: edges.into_iter().collect(), primal_edges };
        if best.as_ref().is_none_or(|b| (cand.primal_edges, cand.nodes.len()) < (b.primal_edges, b.nodes.len())) {
            best = Some(cand);
        }
    }
    Ok(best.unwrap())
}

/// One cut of the surface along the faces of a dual tree.
#[derive(Debug, Clone, Serialize)]
pub struct PatchDecomposition {
    pub dual_tree: Vec<(FaceId, FaceId)>,
    /// Primal edges between two faces of the tree.
    pub t_edges: Vec<(Vertex, Vertex)>,
    /// Vertices meeting three edges of `t_edges`.
    pub r_vertices: Vec<Vertex>,
    /// Patch formed by the tree faces; its boundary is the cycle `C`.
    pub q: Patch,
    /// The complementary patch.
    pub p: Patch,
    /// Faces of `q`.
    pub t: usize,
    pub r: usize,
    /// Vertices of `C` with degree 2 and 3 once `T` and `R` are removed.
    pub deg2: usize,
    pub deg3: usize,
}

impl PatchDecomposition {
    pub fn boundary(&self) -> &[Vertex] {
        &self.q.boundary
    }

    /// Wrap vector of the tube that `q` caps.
    pub fn tube_type(&self) -> Result<(i64, i64), ConstructionError> {
        tube_type_from_boundary(&self.q.boundary_degrees)
    }
}

/// Cuts `g` along a dual tree covering exactly six pentagons. Panics if
/// the counting identities fail, which would mean a broken embedding.
pub fn patch_cut(g: &FullereneGraph, tree: &DualTree) -> Result<PatchDecomposition, ConstructionError> {
    let nodes: BTreeSet<FaceId> = tree.nodes.iter().copied().collect();
    let pent = nodes.iter().filter(|&&f| g.face(f).is_pentagon()).count();
    if pent != 6 {
        return Err(ConstructionError::NotSixPentagons(pent));
    }
    if tree.edges.len() + 1 != nodes.len() || !tree.edges.iter().all(|(a, b)| nodes.contains(a) && nodes.contains(b)) {
        return Err(ConstructionError::NotATree);
    }
    let t_edges = induced_edges(g, &nodes);
    let mut deg = vec![0u8; g.n()];
    for &(u, v) in &t_edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    assert!(deg.iter().all(|&d| d != 2), "a vertex meets exactly two edges of T");
    let r_vertices: Vec<Vertex> = (0..g.n()).filter(|&v| deg[v] == 3).collect();
    let q = Patch::from_faces(g, &tree.nodes).map_err(|_| ConstructionError::NotATree)?;
    let rest: Vec<FaceId> = (0..g.num_faces()).filter(|f| !nodes.contains(f)).collect();
    let p = Patch::from_faces(g, &rest).map_err(|_| ConstructionError::NotATree)?;
    assert!(q.satisfies_pentagon_identity() && p.satisfies_pentagon_identity());
    // Degree 3 inside q means one edge of T at the vertex, so degree 2 outside.
    let deg2 = q.n3;
    let deg3 = q.n2;
    let (t, r) = (nodes.len(), r_vertices.len());
    assert_eq!(deg2, deg3);
    assert_eq!(2 * t - 2, r + deg2);
    Ok(PatchDecomposition { dual_tree: tree.edges.clone(), t_edges, r_vertices, q, p, t, r, deg2, deg3 })
}

/// Colour counts over the cuts of a case-(A) graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counters {
    pub b2: usize,
    pub b3: usize,
    pub w2: usize,
    pub w3: usize,
    pub r: usize,
    pub t: usize,
    pub b2_prime: usize,
    pub n_b: usize,
    pub n_w: usize,
}

impl Counters {
    /// `b2 + w2 = b3 + w3`.
    pub fn balanced(&self) -> bool {
        self.b2 + self.w2 == self.b3 + self.w3
    }

    /// `2t - 4 = r + b2 + w2`.
    pub fn face_identity(&self) -> bool {
        2 * self.t == self.r + self.b2 + self.w2 + 4
    }
}

/// Counts black and white boundary vertices of the cuts under `m`. A
/// black degree-2 vertex whose partner was cut away counts towards `b2'`.
pub fn counters(g: &FullereneGraph, cuts: &[PatchDecomposition], m: &Matching) -> Counters {
    let covered = m.covered(g.n());
    let mut removed = vec![false; g.n()];
    let mut t_edge = BTreeSet::new();
    let mut c = Counters::default();
    for cut in cuts {
        c.t += cut.t;
        c.r += cut.r;
        for &v in &cut.r_vertices {
            removed[v] = true;
        }
        t_edge.extend(cut.t_edges.iter().copied());
    }
    for cut in cuts {
        for (&v, &dq) in cut.q.boundary.iter().zip(&cut.q.boundary_degrees) {
            match (covered[v], dq) {
                (true, 3) => {
                    c.b2 += 1;
                    let u = m.mate(v).unwrap();
                    if removed[u] || t_edge.contains(&(u.min(v), u.max(v))) {
                        c.b2_prime += 1;
                    }
                }
                (true, _) => c.b3 += 1,
                (false, 3) => c.w2 += 1,
                (false, _) => c.w3 += 1,
            }
        }
    }
    for v in (0..g.n()).filter(|&v| !removed[v]) {
        if covered[v] {
            c.n_b += 1;
        } else {
            c.n_w += 1;
        }
    }
    c
}

#[derive(Debug, Clone, Serialize)]
pub struct CutReport {
    pub t: usize,
    pub r: usize,
    pub deg2: usize,
    pub deg3: usize,
    pub boundary_length: usize,
    pub tube_type: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub threshold: f64,
    pub class_sizes: Vec<usize>,
    pub case: char,
    pub cuts: Vec<CutReport>,
}

/// Clustering plus, in case (A), one cut per class.
pub fn analyze(g: &FullereneGraph) -> Result<(DecompositionReport, Vec<PatchDecomposition>), ConstructionError> {
    let cl = pentagon_clusters(g);
    let mut cuts = Vec::new();
    if cl.is_case_a() {
        for class in &cl.classes {
            let tree = pentagon_dual_tree(g, class)?;
            cuts.push(patch_cut(g, &tree)?);
        }
    }
    let report = DecompositionReport {
        n: g.n(),
        threshold: cl.threshold,
        class_sizes: cl.classes.iter().map(|c| c.len()).collect(),
        case: if cl.is_case_a() { 'A' } else { 'B' },
        cuts: cuts
            .iter()
            .map(|c| CutReport {
                t: c.t,
                r: c.r,
                deg2: c.deg2,
                deg3: c.deg3,
                boundary_length: c.q.boundary.len(),
                tube_type: c.tube_type().ok(),
            })
            .collect(),
    };
    Ok((report, cuts))
}
