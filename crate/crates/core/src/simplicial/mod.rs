//! Finite abstract simplicial complexes.
//!
//! A complex is stored by its maximal faces (facets). Every subset of a facet is a
//! face; lower-dimensional faces are only materialized on demand, one dimension at
//! a time. Vertices carry a dense `u32` id and a human-readable label, and may be
//! assigned to parts of an n-partite structure.

mod construct;
mod flag;
mod io;
mod iso;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use construct::{
    barycentric_faces, barycentric_subdivision, boundary_of_simplex, clique_complex, cycle, discrete, octahedralise,
    octahedron, path, projective_plane, simplex, suspension,
};
pub use flag::{
    has_nlcp, is_flag, maximal_cliques, nlcp_verdict, random_flag_nlcp_complex, verify_partite, NlcpVerdict,
};
pub use io::{complex_from_json, complex_to_json, ComplexFile};
pub use iso::{find_isomorphism, is_isomorphic, is_isomorphic_with, IsoOptions};

pub type VertexId = u32;

/// A simplex as a strictly increasing list of vertex ids. The empty simplex has
/// dimension −1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts and deduplicates.
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Simplex(out)
    }

    pub fn difference(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn intersects(&self, other: &Simplex) -> bool {
        self.0.iter().any(|v| other.contains(*v))
    }

    /// The boundary faces, in the order matching the sign `(-1)^i` of the omitted
    /// vertex.
    pub fn boundary(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// All subsets with exactly `size` vertices, in lexicographic order.
    pub fn subsets(&self, size: usize) -> Vec<Simplex> {
        let n = self.0.len();
        if size > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(Simplex(idx.iter().map(|&i| self.0[i]).collect()));
            let mut k = size;
            while k > 0 && idx[k - 1] == k - 1 + n - size {
                k -= 1;
            }
            if k == 0 {
                return out;
            }
            idx[k - 1] += 1;
            for m in k..size {
                idx[m] = idx[m - 1] + 1;
            }
        }
    }
}

impl From<Vec<VertexId>> for Simplex {
    fn from(v: Vec<VertexId>) -> Self {
        Simplex::new(v)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Assignment of every vertex to a part `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteStructure(pub Vec<u32>);

impl PartiteStructure {
    pub fn part_of(&self, v: VertexId) -> u32 {
        self.0[v as usize]
    }

    pub fn num_parts(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn members(&self, part: u32) -> Vec<VertexId> {
        (0..self.0.len() as VertexId).filter(|&v| self.0[v as usize] == part).collect()
    }
}

/// A finite abstract simplicial complex stored by maximal faces.
#[derive(Clone)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    facets: Vec<Simplex>,
    parts: Option<PartiteStructure>,
    vertex_facets: Vec<Vec<u32>>,
    faces_by_dim: Vec<OnceLock<Vec<Simplex>>>,
    adjacency: OnceLock<Vec<Vec<VertexId>>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets == other.facets && self.parts == other.parts
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertices", &self.labels.len())
            .field("facets", &self.facets)
            .field("parts", &self.parts)
            .finish()
    }
}

impl SimplicialComplex {
    /// Builds a complex on `labels.len()` vertices from a list of faces. Faces that
    /// are contained in other faces are dropped, and every vertex not covered by a
    /// face becomes an isolated 0-face.
    pub fn from_faces(
        labels: Vec<String>,
        faces: impl IntoIterator<Item = Simplex>,
        parts: Option<PartiteStructure>,
    ) -> Self {
        let n = labels.len();
        let mut faces: Vec<Simplex> = faces.into_iter().collect();
        faces.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();

        let mut kept: Vec<Simplex> = Vec::new();
        let mut index: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut covered = vec![false; n];
        for face in faces {
            if face.is_empty() {
                continue;
            }
            let pivot = *face.vertices().iter().min_by_key(|&&v| index[v as usize].len()).unwrap();
            let dominated = index[pivot as usize].iter().any(|&k| face.is_subset_of(&kept[k as usize]));
            if dominated {
                continue;
            }
            let id = kept.len() as u32;
            for &v in face.vertices() {
                index[v as usize].push(id);
                covered[v as usize] = true;
            }
            kept.push(face);
        }
        for (v, _) in covered.iter().enumerate().filter(|(_, &c)| !c) {
            kept.push(Simplex(vec![v as VertexId]));
        }
        if kept.is_empty() {
            kept.push(Simplex::empty());
        }
        kept.sort_unstable();
        Self::from_normalized(labels, kept, parts)
    }

    fn from_normalized(labels: Vec<String>, facets: Vec<Simplex>, parts: Option<PartiteStructure>) -> Self {
        let mut vertex_facets = vec![Vec::new(); labels.len()];
        for (k, f) in facets.iter().enumerate() {
            for &v in f.vertices() {
                vertex_facets[v as usize].push(k as u32);
            }
        }
        let top = facets.iter().map(|f| f.len()).max().unwrap_or(0);
        SimplicialComplex {
            labels,
            facets,
            parts,
            vertex_facets,
            faces_by_dim: (0..top).map(|_| OnceLock::new()).collect(),
            adjacency: OnceLock::new(),
        }
    }

    /// The complex whose only face is the empty simplex.
    pub fn empty() -> Self {
        Self::from_faces(Vec::new(), [], None)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.labels.len() as VertexId
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label).map(|i| i as VertexId)
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn parts(&self) -> Option<&PartiteStructure> {
        self.parts.as_ref()
    }

    pub fn with_parts(mut self, parts: Option<PartiteStructure>) -> Self {
        self.parts = parts;
        self
    }

    /// −1 for the complex `{∅}`.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    pub fn is_face(&self, s: &Simplex) -> bool {
        if s.is_empty() {
            return true;
        }
        if s.vertices().iter().any(|&v| v as usize >= self.labels.len()) {
            return false;
        }
        let pivot = *s.vertices().iter().min_by_key(|&&v| self.vertex_facets[v as usize].len()).unwrap();
        self.vertex_facets[pivot as usize].iter().any(|&k| s.is_subset_of(&self.facets[k as usize]))
    }

    /// Facets containing the given vertex.
    pub fn facets_of(&self, v: VertexId) -> impl Iterator<Item = &Simplex> {
        self.vertex_facets[v as usize].iter().map(|&k| &self.facets[k as usize])
    }

    /// All faces of dimension `k` (k ≥ 0), sorted. Materialized on first use.
    pub fn faces(&self, k: usize) -> &[Simplex] {
        match self.faces_by_dim.get(k) {
            None => &[],
            Some(cell) => cell.get_or_init(|| {
                let mut out: Vec<Simplex> =
                    self.facets.iter().filter(|f| f.len() > k).flat_map(|f| f.subsets(k + 1)).collect();
                out.sort_unstable();
                out.dedup();
                out
            }),
        }
    }

    /// Face counts `f_0, f_1, …, f_dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.faces_by_dim.len()).map(|k| self.faces(k).len()).collect()
    }

    /// Number of nonempty faces.
    pub fn num_faces(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Sorted neighbor lists of the 1-skeleton.
    pub fn adjacency(&self) -> &[Vec<VertexId>] {
        self.adjacency.get_or_init(|| {
            let mut adj = vec![Vec::new(); self.labels.len()];
            for f in &self.facets {
                for &u in f.vertices() {
                    for &w in f.vertices() {
                        if u != w {
                            adj[u as usize].push(w);
                        }
                    }
                }
            }
            for row in &mut adj {
                row.sort_unstable();
                row.dedup();
            }
            adj
        })
    }

    pub fn are_adjacent(&self, u: VertexId, w: VertexId) -> bool {
        self.adjacency()[u as usize].binary_search(&w).is_ok()
    }

    /// Number of connected components (isolated vertices count as components).
    pub fn num_components(&self) -> usize {
        let mut uf = UnionFind::new(self.labels.len());
        for f in &self.facets {
            if let Some((&first, rest)) = f.vertices().split_first() {
                for &v in rest {
                    uf.union(first as usize, v as usize);
                }
            }
        }
        uf.count()
    }

    /// Component index per vertex, numbered in order of first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.labels.len());
        for f in &self.facets {
            if let Some((&first, rest)) = f.vertices().split_first() {
                for &v in rest {
                    uf.union(first as usize, v as usize);
                }
            }
        }
        let mut ids = HashMap::new();
        (0..self.labels.len())
            .map(|v| {
                let r = uf.find(v);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// The subcomplex induced on `keep` (vertex ids of `self`), renumbered in
    /// increasing id order. Returns the parent id of each new vertex.
    pub fn restrict(&self, keep: &[VertexId], faces: impl IntoIterator<Item = Simplex>) -> (Self, Vec<VertexId>) {
        let mut keep: Vec<VertexId> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_id = vec![u32::MAX; self.labels.len()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let labels = keep.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let parts = self.parts.as_ref().map(|p| PartiteStructure(keep.iter().map(|&v| p.part_of(v)).collect()));
        let faces = faces.into_iter().map(|f| {
            Simplex::new(
                f.vertices()
                    .iter()
                    .map(|&v| {
                        let id = new_id[v as usize];
                        debug_assert_ne!(id, u32::MAX);
                        id
                    })
                    .collect(),
            )
        });
        (Self::from_faces(labels, faces, parts), keep)
    }

    /// `{τ : τ ∩ s = ∅, τ ∪ s ∈ K}`. The link of the empty simplex is `K`.
    pub fn link(&self, s: &Simplex) -> Result<Self> {
        Ok(self.link_with_map(s)?.0)
    }

    /// Link together with the parent id of every link vertex.
    pub fn link_with_map(&self, s: &Simplex) -> Result<(Self, Vec<VertexId>)> {
        if !self.is_face(s) {
            return Err(Error::NotAFace(self.describe(s)));
        }
        if s.is_empty() {
            return Ok((self.clone(), self.vertices().collect()));
        }
        let pivot = s.vertices()[0];
        let faces: Vec<Simplex> =
            self.facets_of(pivot).filter(|f| s.is_subset_of(f)).map(|f| f.difference(s)).collect();
        let mut keep: Vec<VertexId> = faces.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        keep.sort_unstable();
        keep.dedup();
        Ok(self.restrict(&keep, faces))
    }

    /// The full subcomplex spanned by `keep`.
    pub fn full_subcomplex(&self, keep: &[VertexId]) -> (Self, Vec<VertexId>) {
        let mut mask = vec![false; self.labels.len()];
        for &v in keep {
            mask[v as usize] = true;
        }
        let faces: Vec<Simplex> = self
            .facets
            .iter()
            .map(|f| Simplex(f.vertices().iter().copied().filter(|&v| mask[v as usize]).collect()))
            .collect();
        self.restrict(keep, faces)
    }

    /// Closed star: faces `τ` with `τ ∪ {v}` a face.
    pub fn in_star(&self, v: VertexId, tau: &Simplex) -> bool {
        self.is_face(&tau.union(&Simplex(vec![v])))
    }

    /// Same complex with vertices renumbered by `perm` (`perm[old] = new`).
    pub fn relabel(&self, perm: &[VertexId]) -> Self {
        let n = self.labels.len();
        let mut labels = vec![String::new(); n];
        for v in 0..n {
            labels[perm[v] as usize] = self.labels[v].clone();
        }
        let parts = self.parts.as_ref().map(|p| {
            let mut out = vec![0; n];
            for v in 0..n {
                out[perm[v] as usize] = p.0[v];
            }
            PartiteStructure(out)
        });
        let faces = self.facets.iter().map(|f| Simplex::new(f.vertices().iter().map(|&v| perm[v as usize]).collect()));
        Self::from_faces(labels, faces, parts)
    }

    pub fn describe(&self, s: &Simplex) -> String {
        let names: Vec<&str> =
            s.vertices().iter().map(|&v| self.labels.get(v as usize).map(String::as_str).unwrap_or("?")).collect();
        format!("[{}]", names.join(","))
    }
}

/// Builds a normalized complex from faces given as label sequences.
pub fn build_complex<S: AsRef<str>>(faces: &[Vec<S>]) -> Result<SimplicialComplex> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut simplices = Vec::with_capacity(faces.len());
    for face in faces {
        let mut verts = Vec::with_capacity(face.len());
        for name in face {
            let name = name.as_ref();
            let id = *ids.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                (labels.len() - 1) as VertexId
            });
            if verts.contains(&id) {
                return Err(Error::DuplicateVertex {
                    face: face.iter().map(|s| s.as_ref().to_string()).collect(),
                    vertex: name.to_string(),
                });
            }
            verts.push(id);
        }
        simplices.push(Simplex::new(verts));
    }
    Ok(SimplicialComplex::from_faces(labels, simplices, None))
}

/// Join `K1 ∗ K2`. Vertices of `K2` are shifted past those of `K1`; colliding
/// labels from `K2` get a `'` suffix. Part indices of `K2` are shifted past the
/// largest part of `K1` when both inputs are partite.
pub fn join(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let shift = a.num_vertices() as VertexId;
    let mut labels = a.labels.clone();
    let taken: std::collections::HashSet<&str> = a.labels.iter().map(String::as_str).collect();
    for l in &b.labels {
        let mut name = l.clone();
        while taken.contains(name.as_str()) {
            name.push('\'');
        }
        labels.push(name);
    }
    // A complex with no vertices is trivially partite.
    let empty_parts = PartiteStructure(Vec::new());
    let pa = a.parts.as_ref().or((a.num_vertices() == 0).then_some(&empty_parts));
    let pb = b.parts.as_ref().or((b.num_vertices() == 0).then_some(&empty_parts));
    let parts = match (pa, pb) {
        (Some(pa), Some(pb)) => {
            let offset = pa.num_parts();
            let mut p = pa.0.clone();
            p.extend(pb.0.iter().map(|&x| x + offset));
            Some(PartiteStructure(p))
        }
        _ => None,
    };
    let mut faces = Vec::with_capacity(a.facets.len() * b.facets.len());
    for fa in &a.facets {
        for fb in &b.facets {
            let mut v = fa.0.clone();
            v.extend(fb.0.iter().map(|&x| x + shift));
            faces.push(Simplex::from_sorted(v));
        }
    }
    SimplicialComplex::from_faces(labels, faces, parts)
}

/// Join of a sequence of complexes, left to right.
pub fn join_all<'a>(parts: impl IntoIterator<Item = &'a SimplicialComplex>) -> SimplicialComplex {
    parts.into_iter().fold(SimplicialComplex::empty(), |acc, k| join(&acc, k))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n], sets: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_closure() {
        let k = build_complex(&[vec!["a", "b", "c"]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.dim(), 2);
        for s in Simplex::new(vec![0, 1, 2]).subsets(2) {
            assert!(k.is_face(&s));
        }
    }

    #[test]
    fn hollow_triangle() {
        let k = build_complex(&[vec!["a", "b"], vec!["b", "c"], vec!["c", "a"]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert!(!k.is_face(&Simplex::new(vec![0, 1, 2])));
    }

    #[test]
    fn empty_input_gives_dimension_minus_one() {
        let k = build_complex::<&str>(&[]).unwrap();
        assert_eq!(k.dim(), -1);
        assert_eq!(k.num_vertices(), 0);
        assert_eq!(k.facets(), &[Simplex::empty()]);
    }

    #[test]
    fn duplicate_vertex_rejected() {
        let err = build_complex(&[vec!["a", "b", "a"]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertex { .. }));
    }

    #[test]
    fn redundant_faces_dropped() {
        let k = build_complex(&[vec!["a", "b"], vec!["a", "b", "c"], vec!["c"]]).unwrap();
        assert_eq!(k.facets().len(), 1);
    }

    #[test]
    fn link_of_non_face_is_error() {
        let k = cycle(4);
        assert!(matches!(k.link(&Simplex::new(vec![0, 2])), Err(Error::NotAFace(_))));
    }

    #[test]
    fn link_of_empty_simplex_is_whole_complex() {
        let k = octahedron();
        assert_eq!(k.link(&Simplex::empty()).unwrap(), k);
    }

    #[test]
    fn link_of_facet_is_join_identity() {
        let k = simplex(2);
        let lk = k.link(&Simplex::new(vec![0, 1, 2])).unwrap();
        assert_eq!(lk.dim(), -1);
        assert_eq!(join(&lk, &k), k);
    }

    #[test]
    fn octahedron_vertex_link_is_square() {
        let k = octahedron();
        let lk = k.link(&Simplex::new(vec![0])).unwrap();
        assert!(is_isomorphic(&lk, &cycle(4)).unwrap());
    }

    #[test]
    fn join_counts() {
        let s0 = discrete(2);
        assert!(is_isomorphic(&join(&s0, &s0), &cycle(4)).unwrap());
        let oct = join_all([&s0, &s0, &s0]);
        assert_eq!(oct.f_vector(), vec![6, 12, 8]);
        let v4 = discrete(4);
        let big = join_all([&v4, &v4, &v4]);
        assert_eq!(big.f_vector(), vec![12, 48, 64]);
    }

    #[test]
    fn join_renames_colliding_labels_and_shifts_parts() {
        let a = discrete(2).with_parts(Some(PartiteStructure(vec![1, 1])));
        let j = join(&a, &a);
        assert_eq!(j.labels().len(), 4);
        assert_ne!(j.label(0), j.label(2));
        assert_eq!(j.parts().unwrap().0, vec![1, 1, 2, 2]);
    }

    #[test]
    fn subsets_enumeration() {
        let s = Simplex::new(vec![1, 3, 5, 7]);
        assert_eq!(s.subsets(2).len(), 6);
        assert_eq!(s.subsets(0), vec![Simplex::empty()]);
        assert_eq!(s.subsets(4), vec![s.clone()]);
        assert!(s.subsets(5).is_empty());
    }
}
