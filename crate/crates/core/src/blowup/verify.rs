//! Checks run over a built cube complex: link table, link flagness, hyperplane
//! directions and the branching locus.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::{Coord, CubeComplex, Direction, Pattern, Side};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::simplicial::{
    barycentric_subdivision, cycle, discrete, is_flag, is_isomorphic, join_all, octahedralise, Simplex,
    SimplicialComplex, UnionFind, VertexId,
};

/// How many failing vertices a report row keeps by name.
const FAILURE_SAMPLES: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct PatternRow {
    pub pattern: Pattern,
    /// Human-readable form of the expected link.
    pub expected: String,
    pub checked: usize,
    pub failed: usize,
    pub sample_failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub rows: Vec<PatternRow>,
    pub passed: bool,
}

impl TableReport {
    pub(crate) fn from_results(results: Vec<(Pattern, String, bool, String)>) -> Self {
        let mut rows: Vec<PatternRow> = Pattern::all()
            .into_iter()
            .map(|pattern| PatternRow {
                pattern,
                expected: String::new(),
                checked: 0,
                failed: 0,
                sample_failures: Vec::new(),
            })
            .collect();
        for (pattern, expected, ok, label) in results {
            let row = rows.iter_mut().find(|r| r.pattern == pattern).expect("all patterns listed");
            if row.expected.is_empty() {
                row.expected = expected;
            } else if !row.expected.split(" | ").any(|e| e == expected) && row.expected.len() < 200 {
                row.expected = format!("{} | {expected}", row.expected);
            }
            row.checked += 1;
            if !ok {
                row.failed += 1;
                if row.sample_failures.len() < FAILURE_SAMPLES {
                    row.sample_failures.push(label);
                }
            }
        }
        let passed = rows.iter().all(|r| r.failed == 0);
        TableReport { rows, passed }
    }
}

fn s0() -> SimplicialComplex {
    discrete(2)
}

fn ss(k: &SimplicialComplex) -> SimplicialComplex {
    octahedralise(&octahedralise(k))
}

/// Target links keyed by a description, built once each.
pub(crate) struct TargetCache(Mutex<HashMap<String, Arc<SimplicialComplex>>>);

impl TargetCache {
    pub(crate) fn new() -> Self {
        TargetCache(Mutex::new(HashMap::new()))
    }

    pub(crate) fn get(&self, key: &str, build: impl FnOnce() -> SimplicialComplex) -> Arc<SimplicialComplex> {
        if let Some(k) = self.0.lock().unwrap().get(key) {
            return k.clone();
        }
        let k = Arc::new(build());
        self.0.lock().unwrap().entry(key.to_string()).or_insert(k).clone()
    }
}

/// Expected link of a vertex, named and built from the instance alone.
fn table1_target(inst: &Instance, x: &CubeComplex, v: u32, cache: &TargetCache) -> (String, Arc<SimplicialComplex>) {
    let vert = x.vertex(v);
    let a = inst.a_sizes();
    let b = |i: usize| vert.coords[i].id;
    let edge_triangles = |i: usize| inst.triangles_on_edge(inst.l_face_of(b(i)));
    use Side::{A, B};
    let key = match vert.pattern().0 {
        [A, A, A] => "S(S(L'))".to_string(),
        [A, A, B] => format!("S(S(hexagon)) * V{}", a[2]),
        [A, B, A] => format!("S(S(V{} * S0)) * V{}", edge_triangles(1), a[1]),
        [A, B, B] => format!("S(S(S0)) * V{} * V{}", a[1], a[2]),
        [B, A, A] => format!("S(S(Lk({})')) * V{}", inst.l.describe(inst.l_face_of(b(0))), a[0]),
        [B, A, B] => format!("S(S(S0)) * V{} * V{}", a[0], a[2]),
        [B, B, A] => format!("S(S(V{})) * V{} * V{}", edge_triangles(1), a[0], a[1]),
        [B, B, B] => format!("V{} * V{} * V{}", a[0], a[1], a[2]),
    };
    let target = cache.get(&key, || match vert.pattern().0 {
        [A, A, A] => ss(&inst.l_prime),
        [A, A, B] => join_all([&ss(&cycle(6)), &discrete(a[2])]),
        [A, B, A] => join_all([&ss(&join_all([&discrete(edge_triangles(1)), &s0()])), &discrete(a[1])]),
        [A, B, B] => join_all([&ss(&s0()), &discrete(a[1]), &discrete(a[2])]),
        [B, A, A] => {
            let x0 = inst.l_face_of(b(0)).vertices()[0];
            join_all([&ss(&barycentric_subdivision(&inst.lambda(x0))), &discrete(a[0])])
        }
        [B, A, B] => join_all([&ss(&s0()), &discrete(a[0]), &discrete(a[2])]),
        [B, B, A] => join_all([&ss(&discrete(edge_triangles(1))), &discrete(a[0]), &discrete(a[1])]),
        [B, B, B] => join_all([&discrete(a[0]), &discrete(a[1]), &discrete(a[2])]),
    });
    (key, target)
}

fn check_built_from(x: &CubeComplex, inst: &Instance) -> Result<()> {
    if x.gamma_a != inst.gamma_a || x.gamma_b != inst.gamma_b {
        return Err(Error::Precondition("cube complex was not built from this instance".into()));
    }
    Ok(())
}

/// Compares every vertex link with the link table, instantiated per vertex.
pub fn verify_table1(x: &CubeComplex, inst: &Instance) -> Result<TableReport> {
    check_built_from(x, inst)?;
    let cache = TargetCache::new();
    let results = (0..x.num_vertices() as u32)
        .into_par_iter()
        .map(|v| {
            let (link, _) = x.vertex_link(v)?;
            let (key, target) = table1_target(inst, x, v, &cache);
            let ok = is_isomorphic(&link, &target)?;
            Ok((x.vertex(v).pattern(), key, ok, x.vertex_label(v)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport::from_results(results))
}

#[derive(Clone, Debug, Serialize)]
pub struct NpcReport {
    pub npc: bool,
    pub vertices_checked: usize,
    pub non_flag_links: usize,
    pub sample_failures: Vec<String>,
}

/// Every vertex link is flag, which for cube complexes of dimension ≤ 3 is the
/// link condition for non-positive curvature.
pub fn verify_npc(x: &CubeComplex) -> Result<NpcReport> {
    let bad: Vec<u32> = (0..x.num_vertices() as u32)
        .into_par_iter()
        .map(|v| Ok((v, is_flag(&x.vertex_link(v)?.0))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, ok)| !ok)
        .map(|(v, _)| v)
        .collect();
    Ok(NpcReport {
        npc: bad.is_empty(),
        vertices_checked: x.num_vertices(),
        non_flag_links: bad.len(),
        sample_failures: bad.iter().take(FAILURE_SAMPLES).map(|&v| x.vertex_label(v)).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperplaneClass {
    /// Coordinate index, 1-based.
    pub direction: usize,
    /// Number of hyperplanes in this class.
    pub hyperplanes: usize,
    /// Edge (1-cube) ids dual to the hyperplanes of this class.
    pub dual_edges: Vec<u32>,
}

impl CubeComplex {
    /// The face of `c` with free coordinate `k` fixed at its `A` or `B` end.
    pub fn cube_facet(&self, c: u32, k: usize, at_b: bool) -> u32 {
        let c = self.cube(c);
        let b = c.free[k].expect("coordinate is free");
        let mut free = c.free;
        free[k] = None;
        let base = if at_b {
            let moved = self.vertex(c.base).with(k, Coord::b(b));
            self.vertex_id(&moved).expect("corner of a cube")
        } else {
            c.base
        };
        self.cube_id(&super::Cube { base, free }).expect("faces of cubes are cubes")
    }
}

/// Groups edges into hyperplanes (opposite edges of a square are dual to the same
/// hyperplane), labels each hyperplane by the coordinate its edges change, and
/// checks that no square is crossed twice by hyperplanes of one direction.
pub fn hyperplane_directions(x: &CubeComplex) -> Result<Vec<HyperplaneClass>> {
    let [n0, n1, n2, _] = x.counts();
    let edge_ix = |id: u32| id as usize - n0;
    let mut uf = UnionFind::new(n1);
    for sq in (n0 + n1) as u32..(n0 + n1 + n2) as u32 {
        for k in x.cube(sq).free_coords() {
            let e0 = x.cube_facet(sq, k, false);
            let e1 = x.cube_facet(sq, k, true);
            // Fixing k leaves an edge along the other coordinate.
            uf.union(edge_ix(e0), edge_ix(e1));
        }
    }
    let direction_of = |e: u32| x.cube(e).free_coords().next().expect("edge has one free coordinate");
    let mut dir_of_root: HashMap<usize, usize> = HashMap::new();
    for e in n0 as u32..(n0 + n1) as u32 {
        let root = uf.find(edge_ix(e));
        let d = direction_of(e);
        if *dir_of_root.entry(root).or_insert(d) != d {
            return Err(Error::SameDirectionCrossing(e as usize));
        }
    }
    for sq in (n0 + n1) as u32..(n0 + n1 + n2) as u32 {
        let roots: Vec<usize> =
            x.cube(sq).free_coords().map(|k| uf.find(edge_ix(x.cube_facet(sq, k, false)))).collect();
        if roots[0] == roots[1] || dir_of_root[&roots[0]] == dir_of_root[&roots[1]] {
            return Err(Error::SameDirectionCrossing(sq as usize));
        }
    }
    let mut classes: Vec<HyperplaneClass> =
        (0..3).map(|d| HyperplaneClass { direction: d + 1, hyperplanes: 0, dual_edges: Vec::new() }).collect();
    for (&_, &d) in &dir_of_root {
        classes[d].hyperplanes += 1;
    }
    for e in n0 as u32..(n0 + n1) as u32 {
        classes[direction_of(e)].dual_edges.push(e);
    }
    Ok(classes)
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchLocus {
    pub vertices: Vec<u32>,
    /// Edge (1-cube) ids.
    pub edges: Vec<u32>,
    /// Largest cube dimension in the locus, −1 when empty.
    pub dim: isize,
}

impl BranchLocus {
    pub fn is_graph(&self) -> bool {
        self.dim <= 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// For the piece of `Z` in which coordinate `k` may move: the required sides of
/// the other two coordinates.
fn piece_sides(k: usize) -> [(usize, Side); 2] {
    match k {
        0 => [(1, Side::B), (2, Side::A)],
        1 => [(0, Side::A), (2, Side::B)],
        _ => [(0, Side::B), (1, Side::A)],
    }
}

fn in_piece(x: &CubeComplex, c: &super::Cube, k: usize) -> bool {
    let base = x.vertex(c.base);
    c.free_coords().all(|i| i == k)
        && piece_sides(k).iter().all(|&(i, s)| c.free[i].is_none() && base.coords[i].side == s)
}

/// The piece of `Z` containing vertex `v`: the coordinate that may move, or
/// `None` off the branch locus.
pub fn branch_piece(x: &CubeComplex, v: u32) -> Option<usize> {
    let vert = x.vertex(v);
    (0..3).find(|&k| piece_sides(k).iter().all(|&(i, s)| vert.coords[i].side == s))
}

/// `Y = Z ∩ X` where `Z` is the union over `k` of the products with coordinate
/// `k` free, one of the other coordinates pinned to `A` and the other to `B`.
pub fn branch_locus(x: &CubeComplex) -> BranchLocus {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut dim = -1;
    for (id, c) in x.cubes().iter().enumerate() {
        if (0..3).any(|k| in_piece(x, c, k)) {
            dim = dim.max(c.dim() as isize);
            match c.dim() {
                0 => vertices.push(c.base),
                1 => edges.push(id as u32),
                _ => {}
            }
        }
    }
    BranchLocus { vertices, edges, dim }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchCertificate {
    /// The locus is empty, so both checks hold vacuously.
    pub degenerate: bool,
    pub is_graph: bool,
    /// Cubes of `Y` whose link complement was checked.
    pub complement_checked: usize,
    pub complement_failures: Vec<String>,
    /// Vertices whose branch directions were checked.
    pub isometry_checked: usize,
    pub isometry_failures: Vec<String>,
    pub passed: bool,
}

/// Branch directions at `v`: link vertices along edges of `Y` at `v`.
fn branch_directions(x: &CubeComplex, y_edges: &[Vec<u32>], v: u32) -> Vec<Direction> {
    let mut out: Vec<Direction> = y_edges[v as usize]
        .iter()
        .map(|&e| {
            let c = x.cube(e);
            let k = c.free_coords().next().unwrap();
            x.direction_in(v, c, k)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn nonempty_connected(k: &SimplicialComplex) -> bool {
    k.num_vertices() > 0 && k.is_connected()
}

/// Checks the branching-locus conditions: (a) for every cube of `Y` the link in
/// `X` minus the link in `Y` is nonempty and connected; (b) at every vertex the
/// branch directions lie in one part of the link and are pairwise non-adjacent.
///
/// `Y` is expected to be a graph, so vertex links of `Y` are discrete and removing
/// them leaves the full subcomplex on the remaining directions up to homotopy.
pub fn verify_branching_locus(x: &CubeComplex, y: &BranchLocus) -> Result<BranchCertificate> {
    if !y.is_graph() {
        return Err(Error::Precondition(format!("branching locus has dimension {}", y.dim)));
    }
    let mut y_vertices: Vec<u32> = y.vertices.clone();
    let mut y_edges = vec![Vec::new(); x.num_vertices()];
    for &e in &y.edges {
        for v in x.corners(x.cube(e)) {
            y_edges[v as usize].push(e);
            y_vertices.push(v);
        }
    }
    y_vertices.sort_unstable();
    y_vertices.dedup();

    // One entry per vertex of Y: (complement failures, isometry failure).
    let per_vertex = y_vertices
        .par_iter()
        .map(|&v| -> Result<(Vec<String>, Option<String>)> {
            let (link, dirs) = x.vertex_link(v)?;
            let branch = branch_directions(x, &y_edges, v);
            let pos = |d: &Direction| dirs.binary_search(d).expect("branch direction in link") as VertexId;
            let branch_ids: Vec<VertexId> = branch.iter().map(pos).collect();
            let mut complement_failures = Vec::new();

            let rest: Vec<VertexId> = link.vertices().filter(|w| !branch_ids.contains(w)).collect();
            if !nonempty_connected(&link.full_subcomplex(&rest).0) {
                complement_failures.push(format!("vertex {}", x.vertex_label(v)));
            }
            // An edge of Y at v: its link in X is the link of the direction.
            for (d, &w) in branch.iter().zip(&branch_ids) {
                let lk = link.link(&Simplex::new(vec![w]))?;
                if !nonempty_connected(&lk) {
                    complement_failures.push(format!("edge {} -> {}", x.vertex_label(v), x.direction_label(d)));
                }
            }

            let one_part = branch.windows(2).all(|p| p[0].coord == p[1].coord);
            let independent = branch_ids
                .iter()
                .enumerate()
                .all(|(i, &p)| branch_ids[i + 1..].iter().all(|&q| !link.are_adjacent(p, q)));
            let iso = (!(one_part && independent)).then(|| x.vertex_label(v));
            Ok((complement_failures, iso))
        })
        .collect::<Result<Vec<_>>>()?;

    // Each edge is reported from both endpoints; count it once.
    let complement_checked = y_vertices.len() + y.edges.len();
    let mut complement_failures: Vec<String> = per_vertex.iter().flat_map(|(c, _)| c.iter().cloned()).collect();
    complement_failures.dedup();
    let isometry_failures: Vec<String> = per_vertex.into_iter().filter_map(|(_, i)| i).collect();
    let passed = complement_failures.is_empty() && isometry_failures.is_empty();
    Ok(BranchCertificate {
        degenerate: y_vertices.is_empty(),
        is_graph: y.is_graph(),
        complement_checked,
        complement_failures,
        isometry_checked: y_vertices.len(),
        isometry_failures,
        passed,
    })
}
