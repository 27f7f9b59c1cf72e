//! Integer simplicial homology from boundary matrices and Smith normal form.
//!
//! Homology is reduced throughout: the chain complex is augmented by `C_{-1} = ℤ`
//! spanned by the empty simplex.

mod matrix;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

pub use matrix::IntegerMatrix;
pub use snf::{
    rank, smith_normal_form, smith_normal_form_with, smith_normal_form_with_transforms, SnfOptions, SnfResult,
};

use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

/// A finitely generated abelian group `ℤ^betti ⊕ ⨁ ℤ/tᵢ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors ≥ 2, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(betti: usize) -> Self {
        HomologyGroup { betti, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Cokernel of a relation matrix over `gens` generators, given its Smith form.
    pub fn cokernel(gens: usize, snf: &SnfResult) -> Self {
        HomologyGroup {
            betti: gens - snf.rank,
            torsion: snf.divisors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

struct Torsion<'a>(&'a [BigInt]);

impl Serialize for Torsion<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for t in self.0 {
            match t.to_u64() {
                Some(x) => seq.serialize_element(&x)?,
                None => seq.serialize_element(&t.to_string())?,
            }
        }
        seq.end()
    }
}

impl Serialize for HomologyGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HomologyGroup", 2)?;
        st.serialize_field("betti", &self.betti)?;
        st.serialize_field("torsion", &Torsion(&self.torsion))?;
        st.end()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Boundary matrix of a list of `k`-faces into a sorted list of `(k−1)`-faces.
/// Faces missing from `lower` are skipped, which is how relative chains drop the
/// subcomplex.
fn boundary_between(upper: &[Simplex], lower: &[Simplex]) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(lower.len(), upper.len());
    for (c, s) in upper.iter().enumerate() {
        let verts = s.vertices();
        for i in 0..verts.len() {
            let mut face: Vec<VertexId> = verts.to_vec();
            face.remove(i);
            if let Ok(r) = lower.binary_search(&Simplex::new(face)) {
                m.set(r, c, if i % 2 == 0 { 1 } else { -1 });
            }
        }
    }
    m
}

/// Augmented boundary maps: entry `k` is `∂_k : C_k → C_{k−1}` for
/// `k = 0..=dim`, where `∂_0` is the augmentation onto the empty simplex.
pub fn boundary_matrices(k: &SimplicialComplex) -> Vec<IntegerMatrix> {
    let dim = k.dim();
    if dim < 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(dim as usize + 1);
    out.push(boundary_between(k.faces(0), &[Simplex::empty()]));
    for d in 1..=dim as usize {
        out.push(boundary_between(k.faces(d), k.faces(d - 1)));
    }
    out
}

/// Homology of a chain complex `C_lo, C_{lo+1}, …` given by basis sizes and the
/// maps `∂_d : C_d → C_{d−1}` (`boundaries[j]` is the map out of `sizes[j]`; the
/// first one maps to zero).
fn chain_homology(sizes: &[usize], boundaries: &[IntegerMatrix]) -> Vec<HomologyGroup> {
    let snfs: Vec<SnfResult> = boundaries.par_iter().map(smith_normal_form).collect();
    (0..sizes.len())
        .map(|j| {
            let rank_in = if j == 0 { 0 } else { snfs[j].rank };
            let out = snfs.get(j + 1);
            let rank_out = out.map_or(0, |s| s.rank);
            HomologyGroup {
                betti: sizes[j] - rank_in - rank_out,
                torsion: out.map(|s| s.divisors.iter().filter(|d| !d.is_one()).cloned().collect()).unwrap_or_default(),
            }
        })
        .collect()
}

/// Reduced homology in dimensions `-1..=dim` (index `i + 1`).
pub fn reduced_homology_all(k: &SimplicialComplex) -> Vec<HomologyGroup> {
    let dim = k.dim();
    if dim < 0 {
        return vec![HomologyGroup::free(1)];
    }
    let mut sizes = vec![1];
    sizes.extend(k.f_vector());
    let mut maps = vec![IntegerMatrix::zeros(0, 1)];
    maps.extend(boundary_matrices(k));
    chain_homology(&sizes, &maps)
}

/// Reduced homology `H̃_i(K; ℤ)`.
pub fn homology(k: &SimplicialComplex, i: isize) -> HomologyGroup {
    if i < -1 {
        return HomologyGroup::trivial();
    }
    let dim = k.dim();
    if i > dim {
        return HomologyGroup::trivial();
    }
    if dim < 0 {
        return HomologyGroup::free(1);
    }
    // Only ∂_i and ∂_{i+1} are needed.
    let faces = |d: isize| -> Vec<Simplex> {
        if d == -1 {
            vec![Simplex::empty()]
        } else if d < -1 || d > dim {
            Vec::new()
        } else {
            k.faces(d as usize).to_vec()
        }
    };
    let (lower, mid, upper) = (faces(i - 1), faces(i), faces(i + 1));
    let maps = [boundary_between(&mid, &lower), boundary_between(&upper, &mid)];
    let ranks: Vec<SnfResult> = maps.par_iter().map(smith_normal_form).collect();
    HomologyGroup {
        betti: mid.len() - ranks[0].rank - ranks[1].rank,
        torsion: ranks[1].divisors.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// Homology `H_i(K, S)` of `K` relative to the full subcomplex `S` spanned by
/// `sub`. With `sub` empty this is unreduced homology of `K`.
pub fn relative_homology(k: &SimplicialComplex, sub: &[VertexId], i: usize) -> HomologyGroup {
    relative_homology_all(k, sub).get(i).cloned().unwrap_or_default()
}

/// `H_i(K, S)` for `i = 0..=dim K`.
pub fn relative_homology_all(k: &SimplicialComplex, sub: &[VertexId]) -> Vec<HomologyGroup> {
    let dim = k.dim();
    if dim < 0 {
        return Vec::new();
    }
    let mut in_sub = vec![false; k.num_vertices()];
    for &v in sub {
        in_sub[v as usize] = true;
    }
    let rel: Vec<Vec<Simplex>> = (0..=dim as usize)
        .map(|d| k.faces(d).iter().filter(|s| !s.vertices().iter().all(|&v| in_sub[v as usize])).cloned().collect())
        .collect();
    let sizes: Vec<usize> = rel.iter().map(Vec::len).collect();
    let mut maps = vec![IntegerMatrix::zeros(0, sizes[0])];
    for d in 1..rel.len() {
        maps.push(boundary_between(&rel[d], &rel[d - 1]));
    }
    chain_homology(&sizes, &maps)
}

/// Number of connected components; equals reduced `b₀ + 1` for a nonempty complex.
pub fn connected_components(k: &SimplicialComplex) -> usize {
    k.num_components()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{cycle, discrete, octahedralise, octahedron, projective_plane, simplex, SimplicialComplex};

    #[test]
    fn chain_condition() {
        for k in [simplex(2), octahedron(), projective_plane(), simplex(3)] {
            let maps = boundary_matrices(&k);
            for w in maps.windows(2) {
                assert!(w[0].mul(&w[1]).is_zero());
            }
        }
        let d1 = &boundary_matrices(&cycle(3))[1];
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
    }

    #[test]
    fn octahedron_top_boundary_rank() {
        assert_eq!(rank(&boundary_matrices(&octahedron())[2]), 7);
    }

    #[test]
    fn projective_plane_edge_boundary() {
        let snf = smith_normal_form(&boundary_matrices(&projective_plane())[1]);
        assert_eq!(snf.rank, 5);
        assert!(snf.divisors.iter().all(|d| d.is_one()));
    }

    #[test]
    fn standard_groups() {
        assert_eq!(homology(&cycle(3), 1), HomologyGroup::free(1));
        assert_eq!(homology(&octahedron(), 2), HomologyGroup::free(1));
        let h1 = homology(&projective_plane(), 1);
        assert_eq!(h1.betti, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
        assert_eq!(h1.to_json(), r#"{"betti":0,"torsion":[2]}"#);
        assert!(homology(&projective_plane(), 2).is_trivial());
        assert_eq!(homology(&discrete(3), 0), HomologyGroup::free(2));
        assert_eq!(homology(&SimplicialComplex::empty(), -1), HomologyGroup::free(1));
        assert!(homology(&simplex(3), 0).is_trivial());
    }

    #[test]
    fn all_dimensions_agree_with_single() {
        let k = projective_plane();
        let all = reduced_homology_all(&k);
        for i in -1..=2 {
            assert_eq!(all[(i + 1) as usize], homology(&k, i));
        }
    }

    #[test]
    fn relative_examples() {
        // (path, endpoints) ≅ (D¹, S⁰): H₁ = ℤ, H₀ = 0.
        let rel = relative_homology_all(&crate::simplicial::path(3), &[0, 2]);
        assert!(rel[0].is_trivial());
        assert_eq!(rel[1], HomologyGroup::free(1));
        // Empty subcomplex gives unreduced homology.
        assert_eq!(relative_homology(&discrete(3), &[], 0), HomologyGroup::free(3));
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&octahedron()), 1);
        assert_eq!(connected_components(&discrete(2)), 2);
        assert_eq!(connected_components(&octahedralise(&discrete(2))), 4);
    }

    #[test]
    fn display() {
        let g = HomologyGroup { betti: 2, torsion: vec![BigInt::from(2), BigInt::from(4)] };
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/4");
        assert_eq!(HomologyGroup::trivial().to_string(), "0");
    }
}
