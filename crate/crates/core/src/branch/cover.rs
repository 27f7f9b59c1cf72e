//! Branched covers of a link over a set of pairwise non-adjacent vertices.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::perm::Perm;
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

#[derive(Clone, Debug, Serialize)]
pub struct BranchedCover {
    #[serde(skip)]
    pub complex: SimplicialComplex,
    /// The link vertex under each cover vertex.
    #[serde(skip)]
    pub projection: Vec<VertexId>,
    /// Lifts of each unbranched vertex in the chosen sheet component.
    pub sheets: usize,
    pub unbranched: usize,
    /// Preimages of each branch vertex, in the order given.
    pub branch_preimages: Vec<usize>,
}

impl BranchedCover {
    /// `|V| = sheets · |unbranched| + Σ preimages`.
    pub fn vertex_count_holds(&self) -> bool {
        self.complex.num_vertices() == self.sheets * self.unbranched + self.branch_preimages.iter().sum::<usize>()
    }

    pub fn single_preimages(&self) -> bool {
        self.branch_preimages.iter().all(|&n| n == 1)
    }

    pub fn require_single_preimages(&self) -> Result<()> {
        match self.branch_preimages.iter().position(|&n| n != 1) {
            None => Ok(()),
            Some(i) => {
                Err(Error::NotTransitive(format!("branch vertex {} has {} preimages", i, self.branch_preimages[i])))
            }
        }
    }
}

type Point = Vec<u32>;

fn act(p: &[u32], perms: &[Perm]) -> Point {
    p.iter().zip(perms).map(|(&x, g)| g.apply(x)).collect()
}

/// Cover of `link` minus `branch` given by fiber permutations on the product of
/// index sets of sizes `fiber`, restricted to the sheet component through the
/// first unbranched vertex at the fiber point `(0, …, 0)`; then one cone point for
/// each lift of each branch vertex's link.
///
/// `voltage(u, w)` is called for adjacent unbranched `u < w` and gives the
/// permutation of each factor met on the way from `u` to `w`.
pub fn branched_link_cover<F>(
    link: &SimplicialComplex,
    branch: &[VertexId],
    fiber: &[usize],
    voltage: F,
) -> Result<BranchedCover>
where
    F: Fn(VertexId, VertexId) -> Vec<Perm>,
{
    let n = link.num_vertices();
    let mut is_branch = vec![false; n];
    for &b in branch {
        is_branch[b as usize] = true;
    }
    for e in link.faces(1) {
        let [u, w] = [e.vertices()[0], e.vertices()[1]];
        if is_branch[u as usize] && is_branch[w as usize] {
            return Err(Error::Precondition(format!(
                "branch vertices {} and {} are adjacent",
                link.label(u),
                link.label(w)
            )));
        }
    }
    let rest: Vec<VertexId> = (0..n as VertexId).filter(|&v| !is_branch[v as usize]).collect();

    let mut volt: HashMap<(VertexId, VertexId), Vec<Perm>> = HashMap::new();
    for e in link.faces(1) {
        let [u, w] = [e.vertices()[0], e.vertices()[1]];
        if is_branch[u as usize] || is_branch[w as usize] {
            continue;
        }
        let p = voltage(u, w);
        if p.len() != fiber.len() || p.iter().zip(fiber).any(|(g, &d)| g.degree() != d) {
            return Err(Error::InvalidInput("voltage does not match the fiber".into()));
        }
        volt.insert((w, u), p.iter().map(Perm::inverse).collect());
        volt.insert((u, w), p);
    }
    let path = |u: VertexId, w: VertexId| &volt[&(u, w)];
    for t in link.faces(2) {
        let [u, w, z] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
        if [u, w, z].iter().any(|&v| is_branch[v as usize]) {
            continue;
        }
        let round: Vec<Perm> =
            (0..fiber.len()).map(|f| path(u, w)[f].then(&path(w, z)[f]).then(&path(z, u)[f])).collect();
        if !round.iter().all(Perm::is_identity) {
            return Err(Error::InvalidInput(format!("voltage is not flat on {}", link.describe(t))));
        }
    }

    // Lifts of unbranched vertices, by search from the base sheet.
    let mut labels = Vec::new();
    let mut projection = Vec::new();
    let mut index: HashMap<(VertexId, Point), VertexId> = HashMap::new();
    let mut lifts: Vec<Vec<(Point, VertexId)>> = vec![Vec::new(); n];
    if let Some(&base) = rest.first() {
        let mut queue = VecDeque::new();
        let start = (base, vec![0u32; fiber.len()]);
        queue.push_back(start.clone());
        index.insert(start, 0);
        let mut order = vec![(base, vec![0u32; fiber.len()])];
        while let Some((u, p)) = queue.pop_front() {
            for &w in &link.adjacency()[u as usize] {
                if is_branch[w as usize] {
                    continue;
                }
                let key = (w, act(&p, path(u, w)));
                if !index.contains_key(&key) {
                    index.insert(key.clone(), order.len() as VertexId);
                    order.push(key.clone());
                    queue.push_back(key);
                }
            }
        }
        for (id, (u, p)) in order.into_iter().enumerate() {
            let tag: Vec<String> = p.iter().map(u32::to_string).collect();
            labels.push(format!("{}#{}", link.label(u), tag.join(".")));
            projection.push(u);
            lifts[u as usize].push((p, id as VertexId));
        }
    }
    if rest.iter().any(|&u| lifts[u as usize].is_empty()) {
        return Err(Error::Precondition("link minus the branch set is disconnected".into()));
    }
    let sheets = rest.first().map_or(0, |&b| lifts[b as usize].len());

    // Lift a simplex of unbranched vertices starting from one lift of its first vertex.
    let lift = |s: &[VertexId], p: &Point| -> Vec<VertexId> {
        s.iter().map(|&w| if w == s[0] { index[&(w, p.clone())] } else { index[&(w, act(p, path(s[0], w)))] }).collect()
    };
    let mut faces: Vec<Simplex> = Vec::new();
    let (delta, delta_map) = link.full_subcomplex(&rest);
    for t in delta.facets() {
        let s: Vec<VertexId> = t.vertices().iter().map(|&x| delta_map[x as usize]).collect();
        for (p, _) in &lifts[s[0] as usize] {
            faces.push(Simplex::new(lift(&s, p)));
        }
    }

    let mut branch_preimages = Vec::new();
    for &b in branch {
        let (lk, lk_map) = link.link_with_map(&Simplex::new(vec![b]))?;
        if lk.num_vertices() == 0 {
            faces.push(Simplex::new(vec![labels.len() as VertexId]));
            labels.push(format!("{}#0", link.label(b)));
            projection.push(b);
            branch_preimages.push(1);
            continue;
        }
        // Components of the preimage of Lk(b), by union-find over lifted edges.
        let members: Vec<VertexId> = lk_map.iter().flat_map(|&u| lifts[u as usize].iter().map(|(_, id)| *id)).collect();
        let mut parent: HashMap<VertexId, VertexId> = members.iter().map(|&m| (m, m)).collect();
        fn root(parent: &mut HashMap<VertexId, VertexId>, mut x: VertexId) -> VertexId {
            while parent[&x] != x {
                let up = parent[&parent[&x]];
                parent.insert(x, up);
                x = up;
            }
            x
        }
        let mut lifted_facets = Vec::new();
        for t in lk.facets() {
            let s: Vec<VertexId> = t.vertices().iter().map(|&x| lk_map[x as usize]).collect();
            for (p, _) in &lifts[s[0] as usize] {
                let ls = lift(&s, p);
                for w in ls.windows(2) {
                    let (a, c) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
                    parent.insert(a, c);
                }
                lifted_facets.push(ls);
            }
        }
        let mut cone: HashMap<VertexId, VertexId> = HashMap::new();
        for ls in lifted_facets {
            let r = root(&mut parent, ls[0]);
            let c = *cone.entry(r).or_insert_with(|| {
                let id = labels.len() as VertexId;
                labels.push(format!("{}#{}", link.label(b), id));
                projection.push(b);
                id
            });
            let mut f = ls;
            f.push(c);
            faces.push(Simplex::new(f));
        }
        branch_preimages.push(cone.len());
    }

    Ok(BranchedCover {
        complex: SimplicialComplex::from_faces(labels, faces, None),
        projection,
        sheets,
        unbranched: rest.len(),
        branch_preimages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{cycle, discrete, is_isomorphic, join, octahedron};

    fn rotation(q: usize, k: usize) -> Perm {
        Perm((0..q).map(|x| ((x + k) % q) as u32).collect())
    }

    #[test]
    fn four_cycle_cover_is_long_cycle() {
        let q = 5;
        let c = cycle(4);
        let cover = branched_link_cover(&c, &[], &[q], |u, w| {
            vec![if (u, w) == (0, 1) { rotation(q, 1) } else { Perm::identity(q) }]
        })
        .unwrap();
        assert_eq!(cover.complex.num_vertices(), 4 * q);
        assert!(cover.complex.is_connected());
        assert_eq!(cover.complex.euler_characteristic(), 0);
        assert!(cover.complex.adjacency().iter().all(|a| a.len() == 2));
        // A trivial voltage keeps only the base sheet.
        let flat = branched_link_cover(&c, &[], &[q], |_, _| vec![Perm::identity(q)]).unwrap();
        assert_eq!(flat.complex.num_vertices(), 4);
    }

    #[test]
    fn octahedron_branched_over_poles() {
        // Poles 0 and 1; the equator 2, 3, 4, 5 winds once around.
        let k = octahedron();
        let opposite = (1..6).find(|&w| !k.are_adjacent(0, w)).unwrap();
        let poles = vec![0, opposite];
        let rest: Vec<VertexId> = (0..6).filter(|v| !poles.contains(v)).collect();
        assert_eq!(rest.len(), 4);
        let (e0, e1) = (rest[0], rest.iter().copied().find(|&w| k.are_adjacent(rest[0], w)).unwrap());
        let q = 3;
        let cover = branched_link_cover(&k, &poles, &[q], |u, w| {
            vec![if (u, w) == (e0.min(e1), e0.max(e1)) { rotation(q, 1) } else { Perm::identity(q) }]
        })
        .unwrap();
        assert_eq!(cover.sheets, q);
        assert_eq!(cover.branch_preimages, vec![1, 1]);
        assert!(cover.vertex_count_holds());
        assert_eq!(cover.complex.num_vertices(), q * 4 + 2);
        assert_eq!(cover.complex.euler_characteristic(), 2);
        assert!(cover.require_single_preimages().is_ok());
    }

    #[test]
    fn degree_one_cover_is_the_link() {
        let k = octahedron();
        let opposite = (1..6).find(|&w| !k.are_adjacent(0, w)).unwrap();
        let cover = branched_link_cover(&k, &[0, opposite], &[1], |_, _| vec![Perm::identity(1)]).unwrap();
        assert!(is_isomorphic(&cover.complex, &k).unwrap());
    }

    #[test]
    fn graph_cover_euler_characteristic() {
        // K₃,₃ branched over one vertex: the rest is K₂,₃ with χ = −1.
        let g = join(&discrete(3), &discrete(3));
        for q in [2usize, 3, 5] {
            let cover = branched_link_cover(&g, &[0], &[q], |u, w| {
                vec![if (u, w) == (1, 3) { rotation(q, 1) } else { Perm::identity(q) }]
            })
            .unwrap();
            let delta = cover
                .complex
                .full_subcomplex(
                    &(0..cover.projection.len() as VertexId)
                        .filter(|&v| cover.projection[v as usize] != 0)
                        .collect::<Vec<_>>(),
                )
                .0;
            assert_eq!(delta.euler_characteristic(), -(q as i64));
            assert!(cover.vertex_count_holds());
        }
    }

    #[test]
    fn adjacent_branch_vertices_are_rejected() {
        let c = cycle(4);
        let r = branched_link_cover(&c, &[0, 1], &[2], |_, _| vec![Perm::identity(2)]);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
