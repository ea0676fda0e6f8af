//! Regenerates the built-in cap files in `data/`.
//!
//! `cargo run --release --example derive_caps -- data`

use saturnum::construction::nanotube_matching;
use saturnum::fixtures;
use saturnum::tube::{build_nanotube, find_cap, find_cap_with_word, Cap, TubeSpec};

fn closes(cap: &Cap, rings: usize) -> TubeSpec {
    TubeSpec { p1: cap.p1, p2: cap.p2, rings, cap_start: cap.clone(), cap_end: cap.clone() }
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data".into());

    // (5,5): alternating ring word, the 16-face cap that closes to C60.
    let c60 = fixtures::c60().canonical_code();
    let armchair = find_cap_with_word(5, 5, &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2], 16)
        .into_iter()
        .find(|c| build_nanotube(&closes(c, 0)).is_ok_and(|(g, _)| g.canonical_code() == c60))
        .expect("C60 hemisphere");

    // (8,0): first 12-face cap whose tubes with 3k+1 rings reach 16k+18.
    let zigzag = find_cap(8, 0, 12)
        .into_iter()
        .filter(|c| c.num_faces() == 12)
        .find(|c| {
            (0..3).all(|k| {
                let (g, rs) = build_nanotube(&closes(c, 3 * k + 1)).unwrap();
                nanotube_matching(&g, &rs).unwrap().matching.len() == 16 * k + 18
            })
        })
        .expect("tight (8,0) cap");

    for (name, cap, how) in [
        ("cap_5_5.txt", armchair, "16-face (5,5) cap closing to C60 with 0 rings"),
        ("cap_8_0.txt", zigzag, "12-face (8,0) cap; 3k+1 rings give 48k+60 vertices and a 16k+18 matching"),
    ] {
        let text = format!("# {how}\n# written by examples/derive_caps.rs\n{}", cap.to_text());
        std::fs::write(format!("{dir}/{name}"), text).unwrap();
    }
}
