use super::{PartiteStructure, Simplex, SimplicialComplex, VertexId};

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// The discrete complex `V_n` on `n` points.
pub fn discrete(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_faces(numbered("p", n), [], None)
}

/// The full `n`-simplex.
pub fn simplex(n: usize) -> SimplicialComplex {
    let verts: Vec<VertexId> = (0..=n as VertexId).collect();
    SimplicialComplex::from_faces(numbered("x", n + 1), [Simplex::from_sorted(verts)], None)
}

/// Boundary of the `n`-simplex, an `(n−1)`-sphere.
pub fn boundary_of_simplex(n: usize) -> SimplicialComplex {
    let full = Simplex::from_sorted((0..=n as VertexId).collect());
    SimplicialComplex::from_faces(numbered("x", n + 1), full.subsets(n), None)
}

/// Cycle graph on `n ≥ 3` vertices.
pub fn cycle(n: usize) -> SimplicialComplex {
    let faces = (0..n as VertexId).map(|i| Simplex::new(vec![i, (i + 1) % n as VertexId]));
    SimplicialComplex::from_faces(numbered("c", n), faces, None)
}

/// Path graph on `n` vertices.
pub fn path(n: usize) -> SimplicialComplex {
    let faces = (1..n as VertexId).map(|i| Simplex::from_sorted(vec![i - 1, i]));
    SimplicialComplex::from_faces(numbered("q", n), faces, None)
}

/// Boundary of the octahedron, `S⁰ ∗ S⁰ ∗ S⁰`.
pub fn octahedron() -> SimplicialComplex {
    let s0 = discrete(2);
    super::join_all([&s0, &s0, &s0])
}

/// Suspension `K ∗ S⁰`.
pub fn suspension(k: &SimplicialComplex) -> SimplicialComplex {
    super::join(k, &discrete(2))
}

/// The 6-vertex triangulation of the real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    const TRIANGLES: [[VertexId; 3]; 10] =
        [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5], [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5]];
    SimplicialComplex::from_faces(numbered("r", 6), TRIANGLES.iter().map(|t| Simplex::new(t.to_vec())), None)
}

/// Clique (flag) complex of a graph on `n` vertices.
pub fn clique_complex(labels: Vec<String>, edges: &[(VertexId, VertexId)]) -> SimplicialComplex {
    let n = labels.len();
    let mut adj = vec![Vec::new(); n];
    for &(u, w) in edges {
        if u != w {
            adj[u as usize].push(w);
            adj[w as usize].push(u);
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    let cliques = super::flag::cliques_of(&adj);
    SimplicialComplex::from_faces(labels, cliques, None)
}

/// Nonempty faces of `K` in the vertex order used by [`barycentric_subdivision`]:
/// by dimension, then lexicographically.
pub fn barycentric_faces(k: &SimplicialComplex) -> Vec<Simplex> {
    let top = k.dim().max(-1);
    (0..=top).flat_map(|d| k.faces(d as usize).iter().cloned()).collect()
}

/// Barycentric subdivision. Vertex `i` is the barycenter of `barycentric_faces(k)[i]`,
/// labelled by the face, and placed in part `dim + 1`.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> SimplicialComplex {
    let faces = barycentric_faces(k);
    let index: std::collections::HashMap<&Simplex, VertexId> =
        faces.iter().enumerate().map(|(i, f)| (f, i as VertexId)).collect();
    let labels: Vec<String> = faces.iter().map(|f| k.describe(f)).collect();
    let parts = PartiteStructure(faces.iter().map(|f| f.len() as u32).collect());

    let mut chains = Vec::new();
    for facet in k.facets() {
        if facet.is_empty() {
            continue;
        }
        // Maximal chains of a facet correspond to orderings of its vertices.
        let mut order: Vec<VertexId> = facet.vertices().to_vec();
        permutations(&mut order, 0, &mut |perm| {
            let mut chain = Vec::with_capacity(perm.len());
            let mut prefix = Vec::with_capacity(perm.len());
            for &v in perm {
                prefix.push(v);
                let face = Simplex::new(prefix.clone());
                chain.push(index[&face]);
            }
            chains.push(Simplex::new(chain));
        });
    }
    SimplicialComplex::from_faces(labels, chains, Some(parts))
}

fn permutations(items: &mut Vec<VertexId>, start: usize, visit: &mut impl FnMut(&[VertexId])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Octahedralisation `S(K)`. Vertex `v` of `K` becomes `2v` (labelled `v+`) and
/// `2v + 1` (labelled `v-`); each face is replaced by all of its sign choices. A
/// partite structure on `K` is carried over to both copies of each vertex.
pub fn octahedralise(k: &SimplicialComplex) -> SimplicialComplex {
    let mut labels = Vec::with_capacity(2 * k.num_vertices());
    for l in k.labels() {
        labels.push(format!("{l}+"));
        labels.push(format!("{l}-"));
    }
    let parts = k.parts().map(|p| PartiteStructure(p.0.iter().flat_map(|&x| [x, x]).collect()));
    let mut faces = Vec::new();
    for facet in k.facets() {
        let n = facet.len();
        for signs in 0u64..(1u64 << n) {
            let verts =
                facet.vertices().iter().enumerate().map(|(i, &v)| 2 * v + ((signs >> i) & 1) as VertexId).collect();
            faces.push(Simplex::from_sorted(verts));
        }
    }
    SimplicialComplex::from_faces(labels, faces, parts)
}
