//! The projections `ρ_k`, the graphs `Λᵢⱼ ⊆ Ξᵢⱼ`, their permutation labels, and
//! monodromy along walks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::perm::{make_perm_pair, next_prime_above, pow_mod, smallest_primitive_root, Perm, PermPair};
use crate::blowup::{branch_piece, Coord, CubeComplex, Direction, Side};
use crate::error::{Error, Result};
use crate::homology::homology;
use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

/// The coordinates kept by `ρ_k`, in the order `(i, j)`: `(k + 1, k + 2)` mod 3.
pub fn kept_pair(k: usize) -> (usize, usize) {
    ((k + 1) % 3, (k + 2) % 3)
}

/// Edges of `(Aᵢ ∗ Bᵢ) × Bⱼ` carry powers of `α`; edges of `Aᵢ × (Aⱼ ∗ Bⱼ)`
/// carry powers of `β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Alpha,
    Beta,
}

/// A point of `(Aᵢ ∗ Bᵢ) × (Aⱼ ∗ Bⱼ)`.
pub type PlanePoint = [Coord; 2];

/// An edge of `Λᵢⱼ`, stored in its label orientation: `α`-edges point from the
/// `Aᵢ` end to the `Bᵢ` end, `β`-edges from the `Bⱼ` end to the `Aⱼ` end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaEdge {
    pub tail: u32,
    pub head: u32,
    pub family: Family,
}

#[derive(Clone, Debug)]
pub struct ProjectionGraph {
    pub dropped: usize,
    pub pair: (usize, usize),
    pub a_i: Vec<VertexId>,
    pub b_i: Vec<VertexId>,
    pub a_j: Vec<VertexId>,
    pub b_j: Vec<VertexId>,
    /// Vertices of `ρ_k(X)`.
    pub points: Vec<PlanePoint>,
    point_index: HashMap<PlanePoint, u32>,
    pub edges: Vec<(u32, u32)>,
    /// Corners in the order `(aᵢ,aⱼ), (bᵢ,aⱼ), (bᵢ,bⱼ), (aᵢ,bⱼ)`.
    pub squares: Vec<[u32; 4]>,
    /// `Λᵢⱼ`: the points off `Bᵢ × Aⱼ` and the edges between them.
    pub lambda_vertices: Vec<u32>,
    pub lambda_edges: Vec<LambdaEdge>,
    lambda_index: HashMap<(u32, u32), usize>,
}

fn side_members(k: &SimplicialComplex, part: usize) -> Vec<VertexId> {
    k.parts().map(|p| p.members(part as u32 + 1)).unwrap_or_default()
}

/// `ρ_k(X)` together with the graph `Λᵢⱼ` it retracts to once the corners in
/// `Bᵢ × Aⱼ` are removed.
pub fn project_graphs(x: &CubeComplex, k: usize) -> ProjectionGraph {
    let (i, j) = kept_pair(k);
    let mut points: BTreeSet<PlanePoint> = BTreeSet::new();
    for v in x.vertices() {
        points.insert([v.coords[i], v.coords[j]]);
    }
    let points: Vec<PlanePoint> = points.into_iter().collect();
    let point_index: HashMap<PlanePoint, u32> = points.iter().enumerate().map(|(n, p)| (*p, n as u32)).collect();
    let at = |p: PlanePoint| point_index[&p];

    let mut edges = BTreeSet::new();
    let mut squares = BTreeSet::new();
    for c in x.cubes() {
        let base = x.vertex(c.base).coords;
        let free: Vec<usize> = c.free_coords().collect();
        let lo = [base[i], base[j]];
        match free.as_slice() {
            [f] if *f == i || *f == j => {
                let mut hi = lo;
                hi[usize::from(*f == j)] = Coord::b(c.free[*f].unwrap());
                let (u, w) = (at(lo), at(hi));
                edges.insert((u.min(w), u.max(w)));
            }
            [f, g] if (*f, *g) == (i.min(j), i.max(j)) => {
                let (bi, bj) = (Coord::b(c.free[i].unwrap()), Coord::b(c.free[j].unwrap()));
                squares.insert([at(lo), at([bi, lo[1]]), at([bi, bj]), at([lo[0], bj])]);
            }
            _ => {}
        }
    }

    let removed = |p: &PlanePoint| p[0].side == Side::B && p[1].side == Side::A;
    let lambda_vertices: Vec<u32> = (0..points.len() as u32).filter(|&n| !removed(&points[n as usize])).collect();
    let mut lambda_edges = Vec::new();
    for &(u, w) in &edges {
        let (pu, pw) = (points[u as usize], points[w as usize]);
        if removed(&pu) || removed(&pw) {
            continue;
        }
        let e = if pu[1] == pw[1] {
            let (tail, head) = if pu[0].side == Side::A { (u, w) } else { (w, u) };
            LambdaEdge { tail, head, family: Family::Alpha }
        } else {
            let (tail, head) = if pu[1].side == Side::B { (u, w) } else { (w, u) };
            LambdaEdge { tail, head, family: Family::Beta }
        };
        lambda_edges.push(e);
    }
    let lambda_index =
        lambda_edges.iter().enumerate().flat_map(|(n, e)| [((e.tail, e.head), n), ((e.head, e.tail), n)]).collect();
    ProjectionGraph {
        dropped: k,
        pair: (i, j),
        a_i: side_members(&x.gamma_a, i),
        b_i: side_members(&x.gamma_b, i),
        a_j: side_members(&x.gamma_a, j),
        b_j: side_members(&x.gamma_b, j),
        points,
        point_index,
        edges: edges.into_iter().collect(),
        squares: squares.into_iter().collect(),
        lambda_vertices,
        lambda_edges,
        lambda_index,
    }
}

impl ProjectionGraph {
    pub fn point(&self, p: PlanePoint) -> Option<u32> {
        self.point_index.get(&p).copied()
    }

    pub fn is_removed(&self, n: u32) -> bool {
        let p = self.points[n as usize];
        p[0].side == Side::B && p[1].side == Side::A
    }

    pub fn lambda_edge(&self, u: u32, w: u32) -> Option<&LambdaEdge> {
        self.lambda_index.get(&(u, w)).map(|&n| &self.lambda_edges[n])
    }

    /// Largest valence in `Aᵢ ∗ Bᵢ` and `Aⱼ ∗ Bⱼ`.
    pub fn valence_bound(&self) -> usize {
        [&self.a_i, &self.b_i, &self.a_j, &self.b_j].iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Squares of `ρ_k(X)` and how many of them do not have exactly one corner removed.
    pub fn corner_check(&self) -> (usize, usize) {
        let bad = self.squares.iter().filter(|s| s.iter().filter(|&&n| self.is_removed(n)).count() != 1).count();
        (self.squares.len(), bad)
    }

    /// Every `Λ` edge lies in `Ξᵢⱼ = ((Aᵢ ∗ Bᵢ) × Bⱼ) ∪ (Aᵢ × (Aⱼ ∗ Bⱼ))`.
    pub fn lambda_in_xi(&self) -> bool {
        self.lambda_edges.iter().all(|e| {
            let (t, h) = (self.points[e.tail as usize], self.points[e.head as usize]);
            match e.family {
                Family::Alpha => t[1] == h[1] && t[1].side == Side::B,
                Family::Beta => t[0] == h[0] && t[0].side == Side::A,
            }
        })
    }

    pub fn point_label(&self, x: &CubeComplex, n: u32) -> String {
        let p = self.points[n as usize];
        format!("({}, {})", x.coord_label(p[0]), x.coord_label(p[1]))
    }

    /// `Λᵢⱼ` as a one-dimensional simplicial complex.
    pub fn lambda_complex(&self, x: &CubeComplex) -> SimplicialComplex {
        let pos: HashMap<u32, VertexId> =
            self.lambda_vertices.iter().enumerate().map(|(n, &p)| (p, n as VertexId)).collect();
        let labels = self.lambda_vertices.iter().map(|&p| self.point_label(x, p)).collect();
        let faces = self
            .lambda_vertices
            .iter()
            .map(|p| Simplex::new(vec![pos[p]]))
            .chain(self.lambda_edges.iter().map(|e| Simplex::new(vec![pos[&e.tail], pos[&e.head]])));
        SimplicialComplex::from_faces(labels, faces, None)
    }

    /// `χ(Λᵢⱼ)` from its homology, and `χ(ρ_k(X))` minus the cells that meet a
    /// removed corner. A deformation retraction forces them equal.
    pub fn euler_check(&self, x: &CubeComplex) -> (i64, i64) {
        let lambda = self.lambda_complex(x);
        let chi_lambda = if lambda.num_vertices() == 0 {
            0
        } else {
            1 + homology(&lambda, 0).betti as i64 - homology(&lambda, 1).betti as i64
        };
        let hits = |cell: &[u32]| cell.iter().any(|&n| self.is_removed(n));
        let chi_p = self.points.len() as i64 - self.edges.len() as i64 + self.squares.len() as i64;
        let corners = self.points.iter().enumerate().filter(|(n, _)| self.is_removed(*n as u32)).count() as i64;
        let corner_edges = self.edges.iter().filter(|&&(u, w)| hits(&[u, w])).count() as i64;
        let corner_squares = self.squares.iter().filter(|s| hits(&s[..])).count() as i64;
        (chi_lambda, chi_p - (corners - corner_edges + corner_squares))
    }
}

/// Exponents of the labels on `Ξᵢⱼ`. An `α`-edge `e × bⱼ` carries `α^{λ(e)}` and a
/// `β`-edge `aᵢ × e` carries `β^{μ(e)}`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeLabeling {
    pub dropped: usize,
    pub perms: PermPair,
    /// `(a, b)` with `a ∈ Aᵢ`, `b ∈ Bᵢ`.
    #[serde(skip)]
    pub lambda: BTreeMap<(VertexId, VertexId), u64>,
    /// `(a, b)` with `a ∈ Aⱼ`, `b ∈ Bⱼ`.
    #[serde(skip)]
    pub mu: BTreeMap<(VertexId, VertexId), u64>,
}

/// Greedy labels modulo `q`, using the smallest primitive root.
pub fn label_graph(g: &ProjectionGraph, q: u64) -> Result<EdgeLabeling> {
    label_graph_with_root(g, q, None)
}

pub fn label_graph_with_root(g: &ProjectionGraph, q: u64, l: Option<u64>) -> Result<EdgeLabeling> {
    let bound = g.valence_bound();
    if q <= bound as u64 {
        return Err(Error::ModulusTooSmall { q, bound });
    }
    let perms = make_perm_pair(q, l.unwrap_or_else(|| smallest_primitive_root(q)))?;
    // Edges entering a Bᵢ vertex get α-exponents 1, 2, …; edges entering an Aⱼ
    // vertex get β-exponents 1, …, q − 2 and then 0, distinct modulo q − 1.
    let mut lambda = BTreeMap::new();
    for &b in &g.b_i {
        for (r, &a) in g.a_i.iter().enumerate() {
            lambda.insert((a, b), r as u64 + 1);
        }
    }
    let mut mu = BTreeMap::new();
    for &a in &g.a_j {
        for (r, &b) in g.b_j.iter().enumerate() {
            mu.insert((a, b), (r as u64 + 1) % (q - 1));
        }
    }
    Ok(EdgeLabeling { dropped: g.dropped, perms, lambda, mu })
}

impl EdgeLabeling {
    pub fn q(&self) -> u64 {
        self.perms.q
    }

    pub fn exponent(&self, g: &ProjectionGraph, e: &LambdaEdge) -> u64 {
        let (t, h) = (g.points[e.tail as usize], g.points[e.head as usize]);
        match e.family {
            Family::Alpha => self.lambda[&(t[0].id, h[0].id)],
            Family::Beta => self.mu[&(h[1].id, t[1].id)],
        }
    }

    /// The permutation for crossing `e` from tail to head.
    pub fn edge_perm(&self, g: &ProjectionGraph, e: &LambdaEdge) -> Perm {
        let x = self.exponent(g, e) as i64;
        match e.family {
            Family::Alpha => self.perms.alpha_pow(x),
            Family::Beta => self.perms.beta_pow(x),
        }
    }

    /// No two edges of `Λᵢⱼ` entering one vertex carry the same label.
    pub fn incoming_distinct(&self, g: &ProjectionGraph) -> bool {
        let mut seen: HashMap<u32, BTreeSet<(Family, u64)>> = HashMap::new();
        g.lambda_edges.iter().all(|e| {
            let x = self.exponent(g, e);
            let reduced = match e.family {
                Family::Alpha => x % self.q(),
                Family::Beta => x % (self.q() - 1),
            };
            seen.entry(e.head).or_default().insert((e.family, reduced))
        })
    }
}

/// Product of edge labels along a closed walk in `Λᵢⱼ`, given as point ids;
/// edges crossed against their orientation contribute inverses.
pub fn monodromy_of_loop(x: &CubeComplex, g: &ProjectionGraph, labels: &EdgeLabeling, walk: &[u32]) -> Result<Perm> {
    let (first, last) = match (walk.first(), walk.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::InvalidInput("empty walk".into())),
    };
    if first != last {
        return Err(Error::OpenPath { start: g.point_label(x, first), end: g.point_label(x, last) });
    }
    let mut acc = Perm::identity(labels.q() as usize);
    for w in walk.windows(2) {
        let e = g.lambda_edge(w[0], w[1]).ok_or_else(|| {
            Error::InvalidInput(format!(
                "{} and {} are not adjacent in Λ",
                g.point_label(x, w[0]),
                g.point_label(x, w[1])
            ))
        })?;
        let p = labels.edge_perm(g, e);
        acc = acc.then(&if e.tail == w[0] { p } else { p.inverse() });
    }
    Ok(acc)
}

/// A loop of length four in the link of a removed corner `(βᵢ, αⱼ)`, through link
/// vertices `a, b, a', b'`; in `Λᵢⱼ` it becomes an eight-edge walk.
#[derive(Clone, Debug, Serialize)]
pub struct CornerLoop {
    pub corner: u32,
    pub a: [VertexId; 2],
    pub b: [VertexId; 2],
    pub walk: Vec<u32>,
    pub cycle_type: Vec<usize>,
    /// `(λ − λ')(l^μ − l^{μ'})` mod `q`.
    pub formula_exponent: u64,
    pub formula_agrees: bool,
    pub transitive: bool,
}

/// Every loop of length four around every removed corner, with its monodromy
/// multiplied out edge by edge and compared with the closed form.
pub fn corner_loops(x: &CubeComplex, g: &ProjectionGraph, labels: &EdgeLabeling) -> Result<Vec<CornerLoop>> {
    let mut around: BTreeMap<u32, BTreeSet<(VertexId, VertexId)>> = BTreeMap::new();
    for s in &g.squares {
        let a = g.points[s[0] as usize][0].id;
        let b = g.points[s[2] as usize][1].id;
        around.entry(s[1]).or_default().insert((a, b));
    }
    let q = labels.q();
    let l = labels.perms.l;
    let mut out = Vec::new();
    for (&corner, squares) in &around {
        let [beta_i, alpha_j] = g.points[corner as usize];
        let a_side: BTreeSet<VertexId> = squares.iter().map(|p| p.0).collect();
        let b_side: BTreeSet<VertexId> = squares.iter().map(|p| p.1).collect();
        let pt = |u: Coord, w: Coord| g.point([u, w]).expect("corner of a projected square");
        for (n, &a) in a_side.iter().enumerate() {
            for &a2 in a_side.iter().skip(n + 1) {
                for (m, &b) in b_side.iter().enumerate() {
                    for &b2 in b_side.iter().skip(m + 1) {
                        if ![(a, b), (a, b2), (a2, b), (a2, b2)].iter().all(|p| squares.contains(p)) {
                            continue;
                        }
                        let (ca, ca2, cb, cb2) = (Coord::a(a), Coord::a(a2), Coord::b(b), Coord::b(b2));
                        let walk = vec![
                            pt(ca, alpha_j),
                            pt(ca, cb),
                            pt(beta_i, cb),
                            pt(ca2, cb),
                            pt(ca2, alpha_j),
                            pt(ca2, cb2),
                            pt(beta_i, cb2),
                            pt(ca, cb2),
                            pt(ca, alpha_j),
                        ];
                        let mono = monodromy_of_loop(x, g, labels, &walk)?;
                        let lam = |a| labels.lambda[&(a, beta_i.id)] as i128;
                        let mu = |b| pow_mod(l, labels.mu[&(alpha_j.id, b)], q) as i128;
                        let e = ((lam(a) - lam(a2)) * (mu(b) - mu(b2))).rem_euclid(q as i128) as u64;
                        out.push(CornerLoop {
                            corner,
                            a: [a, a2],
                            b: [b, b2],
                            cycle_type: mono.cycle_type(),
                            formula_exponent: e,
                            formula_agrees: mono == labels.perms.alpha_pow(e as i64),
                            transitive: mono.is_transitive(),
                            walk,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Smallest distinct primes above each projection's valence bound, indexed by
/// the dropped coordinate and chosen in the pair order `(1,2), (2,3), (3,1)`.
pub fn auto_primes(x: &CubeComplex) -> [u64; 3] {
    let mut out = [0; 3];
    let mut taken = Vec::new();
    for k in [2, 0, 1] {
        let g = project_graphs(x, k);
        let p = next_prime_above(g.valence_bound() as u64, &taken);
        taken.push(p);
        out[k] = p;
    }
    out
}

/// The three labelled projections. The fiber is the product of the three
/// index sets `ℤ/q`.
#[derive(Clone, Debug)]
pub struct MonodromyRep {
    pub graphs: Vec<ProjectionGraph>,
    pub labels: Vec<EdgeLabeling>,
}

pub fn monodromy_rep(x: &CubeComplex, primes: Option<[u64; 3]>) -> Result<MonodromyRep> {
    let primes = primes.unwrap_or_else(|| auto_primes(x));
    let graphs: Vec<ProjectionGraph> = (0..3).map(|k| project_graphs(x, k)).collect();
    let labels = graphs.iter().zip(primes).map(|(g, q)| label_graph(g, q)).collect::<Result<_>>()?;
    Ok(MonodromyRep { graphs, labels })
}

impl MonodromyRep {
    pub fn fiber(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.q() as usize).collect()
    }

    /// Fiber permutations for the link edge from direction `u` to direction `w`
    /// at `v`. Off the branch locus, and in the two projections where the link
    /// lands in a contractible set, the action is trivial.
    pub fn link_voltage(&self, x: &CubeComplex, v: u32, u: &Direction, w: &Direction) -> Vec<Perm> {
        let mut out: Vec<Perm> = self.fiber().into_iter().map(Perm::identity).collect();
        let Some(k) = branch_piece(x, v) else { return out };
        let (i, j) = kept_pair(k);
        let (di, dj, forward) = match (u.coord, w.coord) {
            (a, b) if a == i && b == j => (u, w, true),
            (a, b) if a == j && b == i => (w, u, false),
            _ => return out,
        };
        let g = &self.graphs[k];
        let lab = &self.labels[k];
        let here = x.vertex(v).coords;
        // Link vertex dᵢ sits at (a, αⱼ) and dⱼ at (βᵢ, b); the square between them
        // retracts onto (a, αⱼ) → (a, b) → (βᵢ, b).
        let (beta_i, alpha_j) = (here[i], here[j]);
        let (a, b) = (di.target, dj.target);
        let mu = lab.mu[&(alpha_j.id, b.id)] as i64;
        let lam = lab.lambda[&(a.id, beta_i.id)] as i64;
        debug_assert!(g.point([a, b]).is_some());
        let p = lab.perms.beta_pow(-mu).then(&lab.perms.alpha_pow(lam));
        out[k] = if forward { p } else { p.inverse() };
        out
    }
}
