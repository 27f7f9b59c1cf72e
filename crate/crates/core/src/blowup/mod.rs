//! The cube complex `X ⊂ ∏ (Aᵢ ∗ Bᵢ)` built from two tripartite flag complexes.
//!
//! A vertex `(v₁, v₂, v₃)` belongs to `X` when its `A`-coordinates span a simplex
//! of `Γ_A` and its `B`-coordinates span a simplex of `Γ_B`; a cube belongs to `X`
//! when all of its vertices do. Cubes are stored by their corner with every free
//! coordinate on the `A` side plus the `B` endpoint of each free coordinate.

mod manifest;
mod verify;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplicial::{is_flag, verify_partite, Simplex, SimplicialComplex, VertexId};

pub use manifest::{complex_hash, CubeCounts, Manifest};
pub(crate) use verify::TargetCache;
pub use verify::{
    branch_locus, branch_piece, hyperplane_directions, verify_branching_locus, verify_npc, verify_table1,
    BranchCertificate, BranchLocus, HyperplaneClass, NpcReport, PatternRow, TableReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    A,
    B,
}

/// A vertex of `Aᵢ ∗ Bᵢ`: a vertex of `Γ_A` or of `Γ_B`, by id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub side: Side,
    pub id: VertexId,
}

impl Coord {
    pub fn a(id: VertexId) -> Self {
        Coord { side: Side::A, id }
    }

    pub fn b(id: VertexId) -> Self {
        Coord { side: Side::B, id }
    }
}

/// Which coordinates lie on the `A` side, e.g. `ABA`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(pub [Side; 3]);

impl Pattern {
    pub fn all() -> [Pattern; 8] {
        let mut out = [Pattern([Side::A; 3]); 8];
        for (k, p) in out.iter_mut().enumerate() {
            for i in 0..3 {
                // First coordinate varies slowest, A before B.
                if (k >> (2 - i)) & 1 == 1 {
                    p.0[i] = Side::B;
                }
            }
        }
        out
    }

    pub fn parse(s: &str) -> Option<Pattern> {
        let b = s.as_bytes();
        if b.len() != 3 {
            return None;
        }
        let mut out = [Side::A; 3];
        for i in 0..3 {
            out[i] = match b[i] {
                b'A' | b'a' => Side::A,
                b'B' | b'b' => Side::B,
                _ => return None,
            };
        }
        Some(Pattern(out))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{}", if s == Side::A { 'A' } else { 'B' })?;
        }
        Ok(())
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeVertex {
    pub coords: [Coord; 3],
}

impl CubeVertex {
    pub fn pattern(&self) -> Pattern {
        Pattern(self.coords.map(|c| c.side))
    }

    pub fn delta(&self, side: Side) -> Simplex {
        Simplex::new(self.coords.iter().filter(|c| c.side == side).map(|c| c.id).collect())
    }

    fn with(&self, i: usize, c: Coord) -> CubeVertex {
        let mut coords = self.coords;
        coords[i] = c;
        CubeVertex { coords }
    }
}

/// An axis-parallel cube. `base` is the vertex with every free coordinate on the
/// `A` side; `free[i]` is the `B` endpoint of coordinate `i` when it is free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub base: u32,
    pub free: [Option<VertexId>; 3],
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.free.iter().filter(|f| f.is_some()).count()
    }

    pub fn free_coords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..3).filter(|&i| self.free[i].is_some())
    }
}

/// A direction at a vertex: move coordinate `coord` to `target`. These are the
/// vertices of the vertex link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub coord: usize,
    pub target: Coord,
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub gamma_a: SimplicialComplex,
    pub gamma_b: SimplicialComplex,
    vertices: Vec<CubeVertex>,
    index: HashMap<CubeVertex, u32>,
    /// Sorted by dimension, then by `(base, free)`.
    cubes: Vec<Cube>,
    cube_index: HashMap<Cube, u32>,
    /// Cubes of dimension ≥ 1 containing each vertex.
    incident: Vec<Vec<u32>>,
}

fn check_tripartite(name: &str, k: &SimplicialComplex) -> Result<()> {
    let parts = k.parts().ok_or_else(|| Error::Precondition(format!("{name} carries no partite structure")))?;
    if parts.num_parts() > 3 || !verify_partite(k, parts) {
        return Err(Error::Precondition(format!("{name} is not tripartite")));
    }
    Ok(())
}

/// Faces of `k` (empty face included) bucketed by the set of parts they meet, as a
/// bitmask with bit `i` for part `i + 1`. Each face is returned as a per-part
/// vertex array.
fn faces_by_mask(k: &SimplicialComplex) -> Vec<Vec<[Option<VertexId>; 3]>> {
    let parts = k.parts().expect("checked tripartite");
    let mut out = vec![Vec::new(); 8];
    out[0].push([None; 3]);
    for d in 0..3 {
        for f in k.faces(d) {
            let mut slots = [None; 3];
            let mut mask = 0;
            for &v in f.vertices() {
                let p = parts.part_of(v) as usize - 1;
                slots[p] = Some(v);
                mask |= 1 << p;
            }
            out[mask].push(slots);
        }
    }
    out
}

/// Builds `X` from flag tripartite `Γ_A`, `Γ_B`.
pub fn build_blowup(gamma_a: &SimplicialComplex, gamma_b: &SimplicialComplex) -> Result<CubeComplex> {
    for (name, k) in [("Γ_A", gamma_a), ("Γ_B", gamma_b)] {
        check_tripartite(name, k)?;
        if !is_flag(k) {
            return Err(Error::Precondition(format!("{name} is not flag")));
        }
    }
    Ok(build_blowup_unchecked(gamma_a, gamma_b))
}

/// Same construction without the flag check; tripartite structures are still
/// required. Used to plant defects.
pub fn build_blowup_unchecked(gamma_a: &SimplicialComplex, gamma_b: &SimplicialComplex) -> CubeComplex {
    let fa = faces_by_mask(gamma_a);
    let fb = faces_by_mask(gamma_b);
    let mut vertices = Vec::new();
    for mask in 0..8usize {
        for sa in &fa[mask] {
            for sb in &fb[7 ^ mask] {
                let coords =
                    [0, 1, 2].map(
                        |i| {
                            if mask >> i & 1 == 1 {
                                Coord::a(sa[i].unwrap())
                            } else {
                                Coord::b(sb[i].unwrap())
                            }
                        },
                    );
                vertices.push(CubeVertex { coords });
            }
        }
    }
    vertices.sort_unstable();
    let index: HashMap<CubeVertex, u32> = vertices.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();

    let b_parts = gamma_b.parts().expect("checked tripartite");
    let b_members: Vec<Vec<VertexId>> = (1..=3).map(|p| b_parts.members(p)).collect();

    // A cube is present iff all its corners are vertices of X.
    let mut cubes: Vec<Cube> = (0..vertices.len() as u32)
        .into_par_iter()
        .flat_map_iter(|base| {
            let mut found = Vec::new();
            let mut free = [None; 3];
            let mut corners = vec![vertices[base as usize]];
            extend_cubes(&index, &b_members, base, 0, &mut free, &mut corners, &mut found);
            found
        })
        .collect();
    cubes.sort_unstable_by_key(|c| (c.dim(), c.base, c.free));
    let cube_index: HashMap<Cube, u32> = cubes.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();

    let mut incident = vec![Vec::new(); vertices.len()];
    for (id, c) in cubes.iter().enumerate() {
        if c.dim() == 0 {
            continue;
        }
        for v in cube_corners(&vertices, &index, c) {
            incident[v as usize].push(id as u32);
        }
    }

    CubeComplex { gamma_a: gamma_a.clone(), gamma_b: gamma_b.clone(), vertices, index, cubes, cube_index, incident }
}

fn extend_cubes(
    index: &HashMap<CubeVertex, u32>,
    b_members: &[Vec<VertexId>],
    base: u32,
    coord: usize,
    free: &mut [Option<VertexId>; 3],
    corners: &mut Vec<CubeVertex>,
    out: &mut Vec<Cube>,
) {
    if coord == 3 {
        out.push(Cube { base, free: *free });
        return;
    }
    extend_cubes(index, b_members, base, coord + 1, free, corners, out);
    if corners[0].coords[coord].side != Side::A {
        return;
    }
    for &b in &b_members[coord] {
        let moved: Vec<CubeVertex> = corners.iter().map(|v| v.with(coord, Coord::b(b))).collect();
        if moved.iter().all(|v| index.contains_key(v)) {
            let keep = corners.len();
            corners.extend(moved);
            free[coord] = Some(b);
            extend_cubes(index, b_members, base, coord + 1, free, corners, out);
            free[coord] = None;
            corners.truncate(keep);
        }
    }
}

fn cube_corners(vertices: &[CubeVertex], index: &HashMap<CubeVertex, u32>, c: &Cube) -> Vec<u32> {
    let mut corners = vec![vertices[c.base as usize]];
    for i in c.free_coords() {
        let b = c.free[i].unwrap();
        let moved: Vec<CubeVertex> = corners.iter().map(|v| v.with(i, Coord::b(b))).collect();
        corners.extend(moved);
    }
    corners.iter().map(|v| index[v]).collect()
}

impl CubeComplex {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[CubeVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: u32) -> &CubeVertex {
        &self.vertices[v as usize]
    }

    pub fn vertex_id(&self, v: &CubeVertex) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn cube(&self, id: u32) -> &Cube {
        &self.cubes[id as usize]
    }

    pub fn cube_id(&self, c: &Cube) -> Option<u32> {
        self.cube_index.get(c).copied()
    }

    /// Number of cubes of each dimension 0..=3.
    pub fn counts(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for c in &self.cubes {
            out[c.dim()] += 1;
        }
        out
    }

    pub fn pattern_counts(&self) -> Vec<(Pattern, usize)> {
        Pattern::all().into_iter().map(|p| (p, self.vertices.iter().filter(|v| v.pattern() == p).count())).collect()
    }

    /// Vertex ids of a cube's corners; the first is the base.
    pub fn corners(&self, c: &Cube) -> Vec<u32> {
        cube_corners(&self.vertices, &self.index, c)
    }

    pub fn incident_cubes(&self, v: u32) -> &[u32] {
        &self.incident[v as usize]
    }

    pub fn coord_label(&self, c: Coord) -> &str {
        match c.side {
            Side::A => self.gamma_a.label(c.id),
            Side::B => self.gamma_b.label(c.id),
        }
    }

    pub fn vertex_label(&self, v: u32) -> String {
        let cs = self.vertices[v as usize].coords;
        format!("({}, {}, {})", self.coord_label(cs[0]), self.coord_label(cs[1]), self.coord_label(cs[2]))
    }

    pub fn direction_label(&self, d: &Direction) -> String {
        format!("{}:{}", d.coord + 1, self.coord_label(d.target))
    }

    /// The direction at corner `v` of cube `c` along free coordinate `i`.
    fn direction_in(&self, v: u32, c: &Cube, i: usize) -> Direction {
        let here = self.vertices[v as usize].coords[i];
        let target = match here.side {
            Side::A => Coord::b(c.free[i].unwrap()),
            Side::B => self.vertices[c.base as usize].coords[i],
        };
        Direction { coord: i, target }
    }

    /// The cube spanned at `v` by a set of directions in distinct coordinates.
    pub fn cube_at(&self, v: u32, dirs: &[Direction]) -> Option<u32> {
        let mut base = self.vertices[v as usize];
        let mut free = [None; 3];
        for d in dirs {
            let here = base.coords[d.coord];
            if free[d.coord].is_some() || here.side == d.target.side {
                return None;
            }
            match here.side {
                Side::A => free[d.coord] = Some(d.target.id),
                Side::B => {
                    free[d.coord] = Some(here.id);
                    base.coords[d.coord] = d.target;
                }
            }
        }
        let base = self.vertex_id(&base)?;
        self.cube_id(&Cube { base, free })
    }

    fn complex_on_directions(
        &self,
        dirs: &[Direction],
        faces: impl IntoIterator<Item = Vec<Direction>>,
    ) -> SimplicialComplex {
        let pos: HashMap<Direction, VertexId> = dirs.iter().enumerate().map(|(i, d)| (*d, i as VertexId)).collect();
        let labels = dirs.iter().map(|d| self.direction_label(d)).collect();
        let parts = crate::simplicial::PartiteStructure(dirs.iter().map(|d| d.coord as u32 + 1).collect());
        let faces = faces.into_iter().map(|f| Simplex::new(f.iter().map(|d| pos[d]).collect()));
        SimplicialComplex::from_faces(labels, faces, Some(parts))
    }

    /// Link of `v` read off the cubes containing it. Link vertex `k` is the
    /// direction `dirs[k]`.
    pub fn link_from_cubes(&self, v: u32) -> (SimplicialComplex, Vec<Direction>) {
        let mut faces: Vec<Vec<Direction>> = Vec::new();
        for &id in &self.incident[v as usize] {
            let c = &self.cubes[id as usize];
            faces.push(c.free_coords().map(|i| self.direction_in(v, c, i)).collect());
        }
        let mut dirs: Vec<Direction> = faces.iter().flatten().copied().collect();
        dirs.sort_unstable();
        dirs.dedup();
        let k = self.complex_on_directions(&dirs, faces);
        (k, dirs)
    }

    /// `Lk(Δ_A, Γ_A) ∗ Lk(Δ_B, Γ_B)` on the same direction labels as
    /// [`CubeComplex::link_from_cubes`].
    pub fn link_from_join(&self, v: u32) -> Result<(SimplicialComplex, Vec<Direction>)> {
        let vert = &self.vertices[v as usize];
        let la = self.gamma_a.link_with_map(&vert.delta(Side::A))?;
        let lb = self.gamma_b.link_with_map(&vert.delta(Side::B))?;
        let pa = self.gamma_a.parts().expect("tripartite");
        let pb = self.gamma_b.parts().expect("tripartite");
        let dir_a = |x: VertexId| Direction { coord: pa.part_of(x) as usize - 1, target: Coord::a(x) };
        let dir_b = |x: VertexId| Direction { coord: pb.part_of(x) as usize - 1, target: Coord::b(x) };
        let mut dirs: Vec<Direction> = la.1.iter().map(|&x| dir_a(x)).chain(lb.1.iter().map(|&x| dir_b(x))).collect();
        dirs.sort_unstable();
        let mut faces = Vec::new();
        for fa in la.0.facets() {
            for fb in lb.0.facets() {
                let f: Vec<Direction> = fa
                    .vertices()
                    .iter()
                    .map(|&x| dir_a(la.1[x as usize]))
                    .chain(fb.vertices().iter().map(|&x| dir_b(lb.1[x as usize])))
                    .collect();
                faces.push(f);
            }
        }
        Ok((self.complex_on_directions(&dirs, faces), dirs))
    }

    /// Vertex link, computed from incident cubes and from the join formula; the two
    /// must agree exactly.
    pub fn vertex_link(&self, v: u32) -> Result<(SimplicialComplex, Vec<Direction>)> {
        let direct = self.link_from_cubes(v);
        let formula = self.link_from_join(v)?;
        if direct != formula {
            return Err(Error::LinkMismatch(self.vertex_label(v)));
        }
        Ok(direct)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::gamma_a;
    use crate::simplicial::{discrete, join_all, PartiteStructure};

    fn three_points() -> SimplicialComplex {
        let labels = vec!["p".into(), "q".into(), "r".into()];
        SimplicialComplex::from_faces(labels, [], Some(PartiteStructure(vec![1, 2, 3])))
    }

    /// Brute force over all coordinate triples.
    fn brute_vertex_count(ga: &SimplicialComplex, gb: &SimplicialComplex) -> usize {
        let pa = ga.parts().unwrap();
        let pb = gb.parts().unwrap();
        let mut count = 0;
        let options = |i: u32| -> Vec<Coord> {
            pa.members(i).into_iter().map(Coord::a).chain(pb.members(i).into_iter().map(Coord::b)).collect()
        };
        for c1 in options(1) {
            for c2 in options(2) {
                for c3 in options(3) {
                    let v = CubeVertex { coords: [c1, c2, c3] };
                    if ga.is_face(&v.delta(Side::A)) && gb.is_face(&v.delta(Side::B)) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn isolated_points_give_no_vertices() {
        let g = three_points();
        let x = build_blowup(&g, &g).unwrap();
        assert_eq!(x.num_vertices(), brute_vertex_count(&g, &g));
        assert_eq!(x.num_vertices(), 0);
    }

    #[test]
    fn full_triangles_give_a_cube() {
        let g = gamma_a([1, 1, 1]);
        let x = build_blowup(&g, &g).unwrap();
        assert_eq!(x.num_vertices(), 8);
        assert_eq!(x.counts(), [8, 12, 6, 1]);
        assert!(x.pattern_counts().iter().all(|&(_, n)| n == 1));
    }

    #[test]
    fn vertex_counts_match_brute_force() {
        let ga = gamma_a([2, 3, 2]);
        let s0 = discrete(2).with_parts(Some(PartiteStructure(vec![1, 1])));
        let gb = join_all([&s0, &s0, &s0]);
        let x = build_blowup(&ga, &gb).unwrap();
        assert_eq!(x.num_vertices(), brute_vertex_count(&ga, &gb));
        for v in 0..x.num_vertices() as u32 {
            x.vertex_link(v).unwrap();
        }
    }

    #[test]
    fn maximality() {
        let ga = gamma_a([2, 2, 1]);
        let path = crate::simplicial::build_complex(&[vec!["u", "w"], vec!["w", "z"]])
            .unwrap()
            .with_parts(Some(PartiteStructure(vec![1, 2, 3])));
        let x = build_blowup(&ga, &path).unwrap();
        // Every candidate cube is present exactly when all corners are vertices.
        for base in 0..x.num_vertices() as u32 {
            let v = *x.vertex(base);
            let a_coords: Vec<usize> = (0..3).filter(|&i| v.coords[i].side == Side::A).collect();
            for mask in 0..(1u32 << a_coords.len()) {
                let free_coords: Vec<usize> =
                    a_coords.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
                let choices: Vec<Vec<VertexId>> =
                    free_coords.iter().map(|&i| path.parts().unwrap().members(i as u32 + 1)).collect();
                let mut pick = vec![0usize; free_coords.len()];
                loop {
                    if choices.iter().all(|c| !c.is_empty()) {
                        let mut free = [None; 3];
                        let mut corners = vec![v];
                        for (k, &i) in free_coords.iter().enumerate() {
                            let b = choices[k][pick[k]];
                            free[i] = Some(b);
                            let moved: Vec<CubeVertex> = corners.iter().map(|c| c.with(i, Coord::b(b))).collect();
                            corners.extend(moved);
                        }
                        let all_in = corners.iter().all(|c| x.vertex_id(c).is_some());
                        assert_eq!(x.cube_id(&Cube { base, free }).is_some(), all_in);
                    } else {
                        break;
                    }
                    let mut k = 0;
                    while k < pick.len() {
                        pick[k] += 1;
                        if pick[k] < choices[k].len() {
                            break;
                        }
                        pick[k] = 0;
                        k += 1;
                    }
                    if k == pick.len() {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn pattern_text() {
        let all = Pattern::all();
        assert_eq!(all[0].to_string(), "AAA");
        assert_eq!(all[2].to_string(), "ABA");
        assert_eq!(all[7].to_string(), "BBB");
        assert_eq!(Pattern::parse("bab"), Some(all[5]));
    }

    #[test]
    fn rejects_non_flag_input() {
        let hollow = crate::simplicial::cycle(3).with_parts(Some(PartiteStructure(vec![1, 2, 3])));
        assert!(build_blowup(&hollow, &gamma_a([1, 1, 1])).is_err());
        assert!(build_blowup(&crate::simplicial::cycle(3), &gamma_a([1, 1, 1])).is_err());
    }
}
