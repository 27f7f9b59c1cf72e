use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PartiteStructure, Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

const SAMPLING_BUDGET: usize = 10_000;

/// Maximal cliques of the 1-skeleton.
pub fn maximal_cliques(k: &SimplicialComplex) -> Vec<Simplex> {
    cliques_of(k.adjacency())
}

pub(crate) fn cliques_of(adj: &[Vec<VertexId>]) -> Vec<Simplex> {
    let mut out = Vec::new();
    let p: Vec<VertexId> = (0..adj.len() as VertexId).collect();
    bron_kerbosch(adj, &mut Vec::new(), p, Vec::new(), &mut out);
    out.sort_unstable();
    out
}

fn intersect(a: &[VertexId], sorted: &[VertexId]) -> Vec<VertexId> {
    a.iter().copied().filter(|v| sorted.binary_search(v).is_ok()).collect()
}

fn bron_kerbosch(
    adj: &[Vec<VertexId>],
    r: &mut Vec<VertexId>,
    p: Vec<VertexId>,
    x: Vec<VertexId>,
    out: &mut Vec<Simplex>,
) {
    if p.is_empty() {
        if x.is_empty() && !r.is_empty() {
            out.push(Simplex::new(r.clone()));
        }
        return;
    }
    let pivot = p.iter().chain(x.iter()).copied().max_by_key(|&u| intersect(&p, &adj[u as usize]).len()).unwrap();
    let candidates: Vec<VertexId> =
        p.iter().copied().filter(|v| adj[pivot as usize].binary_search(v).is_err()).collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        let nbrs = &adj[v as usize];
        r.push(v);
        bron_kerbosch(adj, r, intersect(&p, nbrs), intersect(&x, nbrs), out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
        x.sort_unstable();
    }
}

/// True iff every clique of the 1-skeleton spans a face.
pub fn is_flag(k: &SimplicialComplex) -> bool {
    maximal_cliques(k).iter().all(|c| k.is_face(c))
}

/// Outcome of the no-local-cut-points test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NlcpVerdict {
    Holds,
    Disconnected,
    /// The link of this vertex is disconnected (or empty).
    CutPoint(String),
    /// The link of this vertex is a single point.
    PointLink(String),
}

/// Checks connectivity first, then that every vertex link is connected and not a
/// single point.
pub fn nlcp_verdict(k: &SimplicialComplex) -> NlcpVerdict {
    if !k.is_connected() {
        return NlcpVerdict::Disconnected;
    }
    for v in k.vertices() {
        let lk = k.link(&Simplex::from_sorted(vec![v])).expect("vertex is a face");
        if lk.num_vertices() == 1 {
            return NlcpVerdict::PointLink(k.label(v).to_string());
        }
        if lk.num_vertices() == 0 || !lk.is_connected() {
            return NlcpVerdict::CutPoint(k.label(v).to_string());
        }
    }
    NlcpVerdict::Holds
}

pub fn has_nlcp(k: &SimplicialComplex) -> bool {
    nlcp_verdict(k) == NlcpVerdict::Holds
}

/// True iff `parts` covers every vertex and no edge joins two vertices of the same
/// part.
pub fn verify_partite(k: &SimplicialComplex, parts: &PartiteStructure) -> bool {
    if parts.0.len() != k.num_vertices() || parts.0.contains(&0) {
        return false;
    }
    k.vertices().all(|v| k.adjacency()[v as usize].iter().all(|&w| parts.part_of(v) != parts.part_of(w)))
}

/// Clique complex of a seeded Erdős–Rényi graph, resampled until it is connected
/// with no local cut points.
pub fn random_flag_nlcp_complex(seed: u64, n_vertices: usize, edge_density: f64) -> Result<SimplicialComplex> {
    if n_vertices < 4 {
        return Err(Error::Precondition(format!("need at least 4 vertices, got {n_vertices}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<String> = (0..n_vertices).map(|i| format!("g{i}")).collect();
    for _ in 0..SAMPLING_BUDGET {
        let mut edges = Vec::new();
        for i in 0..n_vertices as VertexId {
            for j in i + 1..n_vertices as VertexId {
                if rng.gen_bool(edge_density.clamp(0.0, 1.0)) {
                    edges.push((i, j));
                }
            }
        }
        let k = super::clique_complex(labels.clone(), &edges);
        if has_nlcp(&k) {
            return Ok(k);
        }
    }
    Err(Error::SamplingBudgetExhausted(SAMPLING_BUDGET))
}
