//! The two generating complexes and the provenance of their vertices.
//!
//! `Γ_A = V_{n₁} ∗ V_{n₂} ∗ V_{n₃}` and `Γ_B = S(S(L'))`. A vertex of `Γ_B` with id
//! `x` comes from vertex `x >> 2` of `L'` (the barycenter of a face of `L`), with
//! inner octahedralisation sign `(x >> 1) & 1` and outer sign `x & 1`; sign bit 0
//! is `+`.

use crate::error::{Error, Result};
use crate::simplicial::{
    barycentric_faces, barycentric_subdivision, has_nlcp, join_all, octahedralise, PartiteStructure, Simplex,
    SimplicialComplex, VertexId,
};

/// `V_{n₁} ∗ V_{n₂} ∗ V_{n₃}` with vertex `k` of part `i` labelled `a<i>.<k>`.
pub fn gamma_a(sizes: [usize; 3]) -> SimplicialComplex {
    let factors: Vec<SimplicialComplex> = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let labels = (0..n).map(|k| format!("a{}.{k}", i + 1)).collect();
            SimplicialComplex::from_faces(labels, [], Some(PartiteStructure(vec![1; n])))
        })
        .collect();
    join_all(factors.iter())
}

/// Everything derived from the input complex `L`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub l: SimplicialComplex,
    /// Faces of `L` in the vertex order of `L'`.
    pub l_faces: Vec<Simplex>,
    pub l_prime: SimplicialComplex,
    pub gamma_a: SimplicialComplex,
    pub gamma_b: SimplicialComplex,
}

impl Instance {
    /// Builds `L'` and `Γ_B = S(S(L'))`. `L` must be at most 2-dimensional.
    pub fn new(l: SimplicialComplex, a_sizes: [usize; 3]) -> Result<Self> {
        if l.dim() > 2 {
            return Err(Error::Precondition(format!("L has dimension {}, expected at most 2", l.dim())));
        }
        if l.num_vertices() == 0 {
            return Err(Error::Precondition("L has no vertices".into()));
        }
        let l_faces = barycentric_faces(&l);
        let l_prime = barycentric_subdivision(&l);
        let gamma_b = octahedralise(&octahedralise(&l_prime));
        Ok(Instance { l, l_faces, l_prime, gamma_a: gamma_a(a_sizes), gamma_b })
    }

    /// Like [`Instance::new`], but also requires `L` to be connected with no local
    /// cut points.
    pub fn new_checked(l: SimplicialComplex, a_sizes: [usize; 3]) -> Result<Self> {
        if !has_nlcp(&l) {
            return Err(Error::Precondition(format!(
                "L fails the no-local-cut-points test: {:?}",
                crate::simplicial::nlcp_verdict(&l)
            )));
        }
        Self::new(l, a_sizes)
    }

    /// The face of `L` whose barycenter underlies this `Γ_B` vertex.
    pub fn l_face_of(&self, b: VertexId) -> &Simplex {
        &self.l_faces[(b >> 2) as usize]
    }

    pub fn l_prime_vertex_of(b: VertexId) -> VertexId {
        b >> 2
    }

    /// `true` for the `+` side of the outer octahedralisation.
    pub fn outer_sign_is_plus(b: VertexId) -> bool {
        b & 1 == 0
    }

    /// Number of triangles of `L` containing the given edge.
    pub fn triangles_on_edge(&self, edge: &Simplex) -> usize {
        self.l.faces(2).iter().filter(|t| edge.is_subset_of(t)).count()
    }

    /// `Λ = Lk(x, L)` for a vertex `x` of `L`.
    pub fn lambda(&self, x: VertexId) -> SimplicialComplex {
        self.l.link(&Simplex::new(vec![x])).expect("vertex of L")
    }

    /// Parts of the `A`-side: sizes `|A₁|, |A₂|, |A₃|`.
    pub fn a_sizes(&self) -> [usize; 3] {
        let p = self.gamma_a.parts().expect("Γ_A is tripartite");
        [1, 2, 3].map(|i| p.members(i).len())
    }
}

/// Vertices of `Γ_B` in part `i` (1-based) with the given outer sign.
pub fn b_side(gamma_b: &SimplicialComplex, part: u32, plus: bool) -> Vec<VertexId> {
    let p = gamma_b.parts().expect("Γ_B is tripartite");
    p.members(part).into_iter().filter(|&b| Instance::outer_sign_is_plus(b) == plus).collect()
}
