use std::collections::{BTreeMap, HashSet, VecDeque};

use branchcube::blowup::{build_blowup, CubeComplex};
use branchcube::instance::gamma_a;
use branchcube::morse::{
    cyclic_cover_window, level_inclusion_homology, orient_edges, square_sums_vanish, LevelWindow, MorseOrientation,
};

fn lab() -> (CubeComplex, MorseOrientation) {
    let g = gamma_a([2, 2, 2]);
    let x = build_blowup(&g, &g).unwrap();
    let f = MorseOrientation::default_for(&x);
    (x, f)
}

/// Breadth-first lift of the 1-skeleton from `(0, 0)`, confined to a wide band
/// of levels, then counted per level.
fn bfs_lift_counts(x: &CubeComplex, f: &MorseOrientation, radius: i64) -> BTreeMap<i64, usize> {
    let band = radius + 4 * x.num_vertices() as i64;
    let mut adj = vec![Vec::new(); x.num_vertices()];
    for &(t, h) in &orient_edges(x, f).edges {
        adj[t as usize].push((h, 1i64));
        adj[h as usize].push((t, -1i64));
    }
    let mut seen = HashSet::from([(0u32, 0i64)]);
    let mut queue = VecDeque::from([(0u32, 0i64)]);
    while let Some((v, k)) = queue.pop_front() {
        for &(w, d) in &adj[v as usize] {
            let next = (w, k + d);
            if next.1.abs() <= band && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut counts = BTreeMap::new();
    for (_, k) in seen {
        if k.abs() <= radius {
            *counts.entry(k).or_insert(0) += 1;
        }
    }
    counts
}

#[test]
fn window_matches_bfs_lift() {
    let (x, f) = lab();
    for radius in 0..3 {
        let w = cyclic_cover_window(&x, &f, radius).unwrap();
        assert_eq!(w.per_level, bfs_lift_counts(&x, &f, radius));
        assert!(w.lifted_vertices.iter().all(|&(_, k)| k.abs() <= radius));
    }
}

#[test]
fn inclusion_on_lab_instance() {
    let (x, f) = lab();
    assert!(square_sums_vanish(&x, &f));
    let small = LevelWindow::new(&x, &f, 0, 0).unwrap();
    let big = LevelWindow::new(&x, &f, -1, 1).unwrap();
    let r = level_inclusion_homology(&x, &f, &small, &big).unwrap();
    assert!(r.hypothesis && r.h0_iso && r.h1_onto);
}

/// Every A vertex is `+` and both vertices of `B₁` are `+`: the function is
/// real-valued with two separate maxima at level 3, joined only through level 2.
fn two_peaks() -> (CubeComplex, MorseOrientation) {
    let (x, _) = lab();
    let b_plus = (0..6).map(|b| b % 2 == 0 || b == 1).collect();
    let f = MorseOrientation::new(&x, vec![true; 6], b_plus).unwrap();
    (x, f)
}

#[test]
fn planted_disconnected_example() {
    let (x, f) = two_peaks();
    let small = LevelWindow::new(&x, &f, 3, 3).unwrap();
    let big = LevelWindow::new(&x, &f, 2, 3).unwrap();
    assert_eq!(small.lifted_vertices.len(), 2);
    let r = level_inclusion_homology(&x, &f, &small, &big).unwrap();
    assert!(!r.hypothesis);
    assert!(!r.h0_iso);
    assert_eq!((r.components_small, r.components_big), (2, 1));
}
