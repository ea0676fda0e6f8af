use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saturnum::fixtures;
use saturnum::io;
use saturnum::patch::Patch;
use saturnum::spiral::generate_isomers;
use saturnum::{FullereneGraph, GraphError};

fn isomers40() -> &'static [saturnum::spiral::Isomer] {
    static CACHE: std::sync::OnceLock<Vec<saturnum::spiral::Isomer>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| generate_isomers(40).unwrap())
}

fn relabel(rot: &[Vec<usize>], perm: &[usize], mirror: bool) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); rot.len()];
    for (v, r) in rot.iter().enumerate() {
        let mut r: Vec<usize> = r.iter().map(|&w| perm[w]).collect();
        if mirror {
            r.reverse();
        }
        out[perm[v]] = r;
    }
    out
}

#[test]
fn every_small_isomer_passes_the_invariants() {
    for n in (20..=40).step_by(2) {
        for iso in generate_isomers(n).unwrap() {
            let g = &iso.graph;
            assert_eq!(g.face_size_sum(), 3 * n);
            assert_eq!(g.num_faces(), n / 2 + 2);
            assert_eq!(g.pentagons().len(), 12);
            let d = g.dual();
            assert!(d.is_connected());
            for f in 0..g.num_faces() {
                assert_eq!(d.degree(f), g.face(f).size());
            }
            let (lo, hi) = g.diameter_bounds();
            assert!(lo <= hi);
        }
    }
}

#[test]
fn thirty_vertices_give_three_codes() {
    let mut codes: Vec<Vec<u8>> = generate_isomers(30).unwrap().iter().map(|i| i.graph.canonical_code()).collect();
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), 3);
    assert_ne!(fixtures::dodecahedron().canonical_code(), fixtures::c60().canonical_code());
}

#[test]
fn prism_on_22_vertices_is_rejected() {
    let k = 11;
    let rot: Vec<Vec<usize>> = (0..2 * k)
        .map(|v| {
            let (ring, i) = (v / k, v % k);
            let next = ring * k + (i + 1) % k;
            let prev = ring * k + (i + k - 1) % k;
            let other = (1 - ring) * k + i;
            if ring == 0 {
                vec![next, other, prev]
            } else {
                vec![prev, other, next]
            }
        })
        .collect();
    match FullereneGraph::build_from_rotation(rot) {
        Err(GraphError::WrongFaceSizes { .. }) | Err(GraphError::EulerViolation { .. }) => {}
        other => panic!("expected a face-size rejection, got {other:?}"),
    }
}

#[test]
fn dodecahedron_antipodal_faces_are_three_apart() {
    let d = fixtures::dodecahedron().dual();
    for f in 0..12 {
        let dist = d.distances_from(f);
        assert_eq!(dist.iter().filter(|&&x| x == 3).count(), 1);
        assert_eq!(*dist.iter().max().unwrap(), 3);
    }
}

#[test]
fn dual_distance_is_a_metric() {
    let g = &generate_isomers(44).unwrap()[17].graph;
    let d = g.dual();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = g.num_faces();
    for _ in 0..500 {
        let (a, b, c) = (rng.gen_range(0..f), rng.gen_range(0..f), rng.gen_range(0..f));
        assert_eq!(d.distance(a, b), d.distance(b, a));
        assert!(d.distance(a, c) <= d.distance(a, b) + d.distance(b, c));
        assert_eq!(d.distance(a, a), 0);
    }
}

#[test]
fn random_patches_satisfy_the_pentagon_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for iso in generate_isomers(36).unwrap() {
        let g = &iso.graph;
        let d = g.dual();
        // Grow dual balls; every ball with a single boundary cycle is a patch.
        for _ in 0..5 {
            let centre = rng.gen_range(0..g.num_faces());
            let dist = d.distances_from(centre);
            for r in 0..4 {
                let faces: Vec<usize> = (0..g.num_faces()).filter(|&f| dist[f] <= r).collect();
                if let Ok(p) = Patch::from_faces(g, &faces) {
                    assert!(p.satisfies_pentagon_identity(), "{p:?}");
                }
            }
        }
    }
}

#[test]
fn planar_code_round_trip_is_byte_exact() {
    let graphs: Vec<FullereneGraph> = generate_isomers(40).unwrap().into_iter().map(|i| i.graph).collect();
    let mut buf = Vec::new();
    io::write_planar_code(&mut buf, &graphs, true).unwrap();
    let back = io::read_planar_code(&mut buf.as_slice()).unwrap();
    let mut again = Vec::new();
    io::write_planar_code(&mut again, &back, true).unwrap();
    assert_eq!(buf, again);
    for (a, b) in graphs.iter().zip(&back) {
        assert_eq!(a.canonical_code(), b.canonical_code());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_ignores_labels_and_orientation(index in 0usize..40, seed in any::<u64>(), mirror in any::<bool>()) {
        let g = &isomers40()[index].graph;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = FullereneGraph::build_from_rotation(relabel(&g.rotation_lists(), &perm, mirror)).unwrap();
        prop_assert_eq!(g.canonical_code(), h.canonical_code());
    }
}
