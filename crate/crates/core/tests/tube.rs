use std::collections::BTreeSet;

use proptest::prelude::*;
use saturnum::fixtures;
use saturnum::tube::{
    build_nanotube, build_nanotube_shifted, cap_5_5, cap_8_0, find_cap, tube_section, wrap_vector, Cap, TubeError,
    TubeSpec,
};

fn spec(cap: &Cap, rings: usize) -> TubeSpec {
    TubeSpec { p1: cap.p1, p2: cap.p2, rings, cap_start: cap.clone(), cap_end: cap.clone() }
}

#[test]
fn c60_from_two_hemispheres() {
    let cap = cap_5_5();
    assert_eq!(cap.num_faces(), 16);
    let (g, rs) = build_nanotube(&spec(&cap, 0)).unwrap();
    assert_eq!(g.n(), 60);
    assert_eq!(rs.num_rings(), 0);
    assert_eq!(g.canonical_code(), fixtures::c60().canonical_code());
}

#[test]
fn zigzag_family_vertex_counts() {
    let cap = cap_8_0();
    assert_eq!((cap.num_faces(), cap.num_vertices()), (12, 30));
    for k in 0..4 {
        let (g, rs) = build_nanotube(&spec(&cap, 3 * k + 1)).unwrap();
        assert_eq!(g.n(), 48 * k + 60);
        assert_eq!(g.num_faces(), g.n() / 2 + 2);
        assert_eq!(g.pentagons().len(), 12);
        assert_eq!(rs.hexagons.len(), 8 * (3 * k + 1));
    }
}

#[test]
fn ring_structure_labels_match_the_graph() {
    let cap = cap_8_0();
    let (g, rs) = build_nanotube(&spec(&cap, 5)).unwrap();
    let mut faces = BTreeSet::new();
    for h in &rs.hexagons {
        let f = g.face(h.face);
        assert_eq!(f.size(), 6);
        assert!(h.vertices.iter().all(|&v| f.contains(v)));
        for (u, v) in [h.a1_edge(), h.a2_edge(), h.neg_a1_edge(), h.neg_a2_edge()] {
            assert!(f.has_edge(u, v));
        }
        faces.insert(h.face);
    }
    assert_eq!(faces.len(), rs.hexagons.len());
    for pair in rs.rings.windows(2) {
        let shared = pair[0]
            .iter()
            .flat_map(|&a| pair[1].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| g.face(a).boundary.iter().any(|&v| g.face(b).contains(v)))
            .count();
        assert!(shared > 0, "consecutive rings share edges");
    }
    // The a1-edge of a hexagon is the -a1-edge of its a1-neighbour.
    let (p1, p2) = (rs.p1, rs.p2);
    let frame = saturnum::tube::TubeFrame::new(p1, p2).unwrap();
    for h in &rs.hexagons {
        let nb = frame.neighbour(h.lattice, 0);
        if let Some(o) = rs.hexagons.iter().find(|o| o.lattice == nb) {
            let (a, b) = h.a1_edge();
            let (c, d) = o.neg_a1_edge();
            assert_eq!(BTreeSet::from([a, b]), BTreeSet::from([c, d]));
        }
    }
}

#[test]
fn ring_shift_does_not_change_the_graph() {
    for cap in [cap_8_0(), cap_5_5()] {
        let code = build_nanotube(&spec(&cap, 4)).unwrap().0.canonical_code();
        for shift in [-5, -1, 1, 2, 7] {
            assert_eq!(build_nanotube_shifted(&spec(&cap, 4), shift).unwrap().0.canonical_code(), code);
        }
    }
}

#[test]
fn found_caps_are_balanced_and_wrap_correctly() {
    for (p1, p2, f) in [(4, 3, 12), (5, 5, 15), (8, 0, 12), (6, 3, 12), (7, 0, 12)] {
        let caps = find_cap(p1, p2, f);
        assert!(!caps.is_empty(), "({p1},{p2})");
        for w in caps.windows(2) {
            assert!(w[0].num_faces() <= w[1].num_faces());
        }
        for c in &caps {
            let l = c.boundary_code.matches('L').count();
            assert_eq!(2 * l, c.boundary_code.len());
            assert_eq!(wrap_vector(&c.boundary_degrees()).unwrap(), (p1, p2));
            assert_eq!(c.faces.iter().filter(|f| f.len() == 5).count(), 6);
            let (g, _) = build_nanotube(&spec(c, 2)).unwrap();
            assert_eq!(g.pentagons().len(), 12);
        }
    }
}

#[test]
fn one_zero_tube_has_no_caps() {
    assert!(find_cap(1, 0, 14).is_empty());
}

#[test]
fn cap_text_round_trips() {
    for cap in [cap_5_5(), cap_8_0()] {
        assert_eq!(Cap::parse(&cap.to_text()).unwrap(), cap);
    }
    assert!(matches!(Cap::parse("T 8 0 11111111\nP 5 0 1 2 3\n"), Err(TubeError::CapFormat { line: 2, .. })));
    assert!(matches!(Cap::parse("P 5 0 1 2 3 4\n"), Err(TubeError::CapFormat { .. })));
    let wrong_word = cap_8_0().to_text().replace("B LR", "B RL");
    assert!(matches!(Cap::parse(&wrong_word), Err(TubeError::CapFormat { .. })));
}

#[test]
fn incompatible_caps_are_rejected() {
    let mut s = spec(&cap_8_0(), 3);
    s.cap_end = cap_5_5();
    assert!(matches!(build_nanotube(&s), Err(TubeError::IncompatibleCap(_))));
    let mut s = spec(&cap_8_0(), 3);
    s.p1 = 7;
    assert!(matches!(build_nanotube(&s), Err(TubeError::IncompatibleCap(_))));
    // Moving one attachment off the rim.
    let mut bent = cap_8_0();
    let v = bent.boundary[0];
    let mut a = bent.attach[v].unwrap();
    a.y += 3;
    bent.attach[v] = Some(a);
    let s = TubeSpec { cap_start: bent, ..spec(&cap_8_0(), 3) };
    assert!(matches!(build_nanotube(&s), Err(TubeError::IncompatibleCap(_))));
}

#[test]
fn section_rings_have_p1_plus_p2_hexagons() {
    let (g, rs) = tube_section(4, 3, 9).unwrap();
    assert_eq!(rs.num_rings(), 9);
    assert!(rs.rings.iter().all(|r| r.len() == 7));
    // 9 rings of 7 hexagons, 14 vertices per ring plus the far rim.
    assert_eq!(rs.n, 14 * 10);
    use saturnum::matching::Host;
    assert_eq!(g.n(), rs.n);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn nanotubes_are_valid_fullerenes(k in 0usize..12, shift in -4i64..4) {
        let (g, rs) = build_nanotube_shifted(&spec(&cap_8_0(), k), shift).unwrap();
        prop_assert_eq!(g.n(), 44 + 16 * k);
        prop_assert!(g.is_three_connected());
        prop_assert_eq!(rs.num_rings(), k);
    }
}
