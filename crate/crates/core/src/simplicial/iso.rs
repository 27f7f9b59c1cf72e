//! Exact isomorphism test for simplicial complexes.
//!
//! Both complexes are colored jointly by iterated refinement on facet incidences.
//! When refinement stalls, one vertex of the smallest ambiguous class is
//! individualized and matched in turn against every candidate of the same color in
//! the other complex. A complete matching is accepted only after the facet sets are
//! compared directly, so a `true` answer always comes with a verified bijection.

use std::collections::{HashMap, HashSet};

use super::{Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    /// Largest number of nonempty faces accepted per complex.
    pub face_bound: usize,
    /// Largest number of search nodes before giving up.
    pub node_budget: usize,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { face_bound: 10_000, node_budget: 100_000 }
    }
}

pub fn is_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<bool> {
    is_isomorphic_with(a, b, IsoOptions::default())
}

pub fn is_isomorphic_with(a: &SimplicialComplex, b: &SimplicialComplex, opts: IsoOptions) -> Result<bool> {
    Ok(find_isomorphism(a, b, opts)?.is_some())
}

struct Side<'a> {
    k: &'a SimplicialComplex,
    incident: Vec<Vec<usize>>,
}

impl<'a> Side<'a> {
    fn new(k: &'a SimplicialComplex) -> Self {
        let mut incident = vec![Vec::new(); k.num_vertices()];
        for (i, f) in k.facets().iter().enumerate() {
            for &v in f.vertices() {
                incident[v as usize].push(i);
            }
        }
        Side { k, incident }
    }

    fn signature(&self, v: usize, colors: &[u32]) -> Vec<u32> {
        let mut per_facet: Vec<Vec<u32>> = self.incident[v]
            .iter()
            .map(|&i| {
                let f = &self.k.facets()[i];
                let mut sig: Vec<u32> =
                    f.vertices().iter().filter(|&&w| w as usize != v).map(|&w| colors[w as usize]).collect();
                sig.sort_unstable();
                sig.insert(0, f.len() as u32);
                sig
            })
            .collect();
        per_facet.sort_unstable();
        let mut out = vec![colors[v], per_facet.len() as u32];
        for s in per_facet {
            out.push(u32::MAX);
            out.extend(s);
        }
        out
    }
}

fn histogram(colors: &[u32]) -> HashMap<u32, usize> {
    let mut h = HashMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Refines both colorings to a common stable partition. Returns the number of
/// color classes.
fn refine(a: &Side, b: &Side, ca: &mut Vec<u32>, cb: &mut Vec<u32>) -> usize {
    let mut classes = {
        let mut all: HashSet<u32> = ca.iter().copied().collect();
        all.extend(cb.iter().copied());
        all.len()
    };
    loop {
        let sa: Vec<Vec<u32>> = (0..ca.len()).map(|v| a.signature(v, ca)).collect();
        let sb: Vec<Vec<u32>> = (0..cb.len()).map(|v| b.signature(v, cb)).collect();
        let mut keys: Vec<&Vec<u32>> = sa.iter().chain(sb.iter()).collect();
        keys.sort_unstable();
        keys.dedup();
        let ids: HashMap<&Vec<u32>, u32> = keys.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
        let next = ids.len();
        *ca = sa.iter().map(|s| ids[s]).collect();
        *cb = sb.iter().map(|s| ids[s]).collect();
        if next == classes {
            return classes;
        }
        classes = next;
    }
}

/// Returns `map` with `map[v]` the image in `b` of vertex `v` of `a`, or `None` if
/// the complexes are not isomorphic.
pub fn find_isomorphism(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    opts: IsoOptions,
) -> Result<Option<Vec<VertexId>>> {
    for k in [a, b] {
        let faces = k.num_faces();
        if faces > opts.face_bound {
            return Err(Error::SizeBoundExceeded { faces, bound: opts.face_bound });
        }
    }
    if a.num_vertices() != b.num_vertices() || a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    let mut dims_a: Vec<usize> = a.facets().iter().map(Simplex::len).collect();
    let mut dims_b: Vec<usize> = b.facets().iter().map(Simplex::len).collect();
    dims_a.sort_unstable();
    dims_b.sort_unstable();
    if dims_a != dims_b {
        return Ok(None);
    }
    if a.num_vertices() == 0 {
        return Ok(Some(Vec::new()));
    }

    let sa = Side::new(a);
    let sb = Side::new(b);
    let target: HashSet<&Simplex> = b.facets().iter().collect();
    let mut nodes = 0usize;
    search(&sa, &sb, &target, vec![0; a.num_vertices()], vec![0; b.num_vertices()], &mut nodes, opts.node_budget)
}

fn search(
    a: &Side,
    b: &Side,
    target: &HashSet<&Simplex>,
    mut ca: Vec<u32>,
    mut cb: Vec<u32>,
    nodes: &mut usize,
    budget: usize,
) -> Result<Option<Vec<VertexId>>> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::SearchBudgetExhausted(budget));
    }
    let classes = refine(a, b, &mut ca, &mut cb);
    let ha = histogram(&ca);
    if ha != histogram(&cb) {
        return Ok(None);
    }
    let n = ca.len();
    if classes == n {
        let mut pos = vec![0u32; n];
        for (w, &c) in cb.iter().enumerate() {
            pos[c as usize] = w as u32;
        }
        let map: Vec<VertexId> = ca.iter().map(|&c| pos[c as usize]).collect();
        let ok =
            a.k.facets()
                .iter()
                .all(|f| target.contains(&Simplex::new(f.vertices().iter().map(|&v| map[v as usize]).collect())));
        return Ok(ok.then_some(map));
    }
    let (&cell, _) = ha
        .iter()
        .filter(|(_, &size)| size > 1)
        .min_by_key(|(&c, &size)| (size, c))
        .expect("some class is not a singleton");
    let x = ca.iter().position(|&c| c == cell).unwrap();
    let fresh = classes as u32;
    for y in (0..n).filter(|&y| cb[y] == cell) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[x] = fresh;
        nb[y] = fresh;
        if let Some(map) = search(a, b, target, na, nb, nodes, budget)? {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{cycle, discrete, join, octahedralise, octahedron, path, projective_plane, simplex};

    #[test]
    fn square_matches_join_of_two_spheres() {
        assert!(is_isomorphic(&cycle(4), &join(&discrete(2), &discrete(2))).unwrap());
    }

    #[test]
    fn square_is_not_a_path() {
        assert!(!is_isomorphic(&cycle(4), &path(4)).unwrap());
    }

    #[test]
    fn octahedron_is_octahedralised_triangle() {
        assert!(is_isomorphic(&octahedron(), &octahedralise(&simplex(2))).unwrap());
    }

    #[test]
    fn returned_map_is_a_bijection_on_facets() {
        let a = projective_plane();
        let perm: Vec<VertexId> = vec![3, 5, 0, 1, 4, 2];
        let b = a.relabel(&perm);
        let map = find_isomorphism(&a, &b, IsoOptions::default()).unwrap().unwrap();
        let mut seen = map.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn same_counts_different_structure() {
        // Two triangles sharing a vertex vs. two disjoint triangles plus nothing:
        // both have 2 facets of size 3 but different vertex counts, so compare the
        // 6-cycle with two disjoint 3-cycles instead.
        let two_triangles = join(&discrete(1), &discrete(1));
        assert!(!is_isomorphic(&cycle(6), &two_triangles).unwrap());
        let disjoint = crate::simplicial::build_complex(&[
            vec!["a", "b"],
            vec!["b", "c"],
            vec!["c", "a"],
            vec!["d", "e"],
            vec!["e", "f"],
            vec!["f", "d"],
        ])
        .unwrap();
        assert!(!is_isomorphic(&cycle(6), &disjoint).unwrap());
    }

    #[test]
    fn size_bound_enforced() {
        let opts = IsoOptions { face_bound: 5, node_budget: 10 };
        assert!(matches!(is_isomorphic_with(&octahedron(), &octahedron(), opts), Err(Error::SizeBoundExceeded { .. })));
    }
}
