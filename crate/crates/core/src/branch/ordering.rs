//! Orderings of a vertex set in which each vertex's link meets the earlier stars
//! in a connected set covered by loops of length four.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

/// Search nodes allowed before the backtracking search gives up.
const NODE_BUDGET: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum OrderingOutcome {
    Found {
        ordering: Vec<String>,
    },
    /// The longest prefix reached, and why each remaining vertex could not follow it.
    Failed {
        prefix: Vec<String>,
        blocked: Vec<(String, String)>,
    },
}

impl OrderingOutcome {
    pub fn found(&self) -> bool {
        matches!(self, OrderingOutcome::Found { .. })
    }
}

/// The graph `Lk(v) ∩ ⋃_{u ∈ placed} St(u)`: vertices and edges `σ` of `Lk(v)` with
/// `σ ∪ {u}` a face for some placed `u`.
fn meet_graph(k: &SimplicialComplex, v: VertexId, placed: &[VertexId]) -> (Vec<VertexId>, Vec<(VertexId, VertexId)>) {
    let in_star = |s: &[VertexId]| {
        placed.iter().any(|&u| {
            let mut f = s.to_vec();
            f.push(u);
            f.sort_unstable();
            f.dedup();
            k.is_face(&Simplex::new(f))
        })
    };
    let verts: Vec<VertexId> = k.adjacency()[v as usize].iter().copied().filter(|&w| in_star(&[w])).collect();
    let mut edges = Vec::new();
    for (n, &w) in verts.iter().enumerate() {
        for &z in &verts[n + 1..] {
            if k.is_face(&Simplex::new(vec![v, w, z])) && in_star(&[w, z]) {
                edges.push((w, z));
            }
        }
    }
    (verts, edges)
}

fn connected(verts: &[VertexId], edges: &[(VertexId, VertexId)]) -> bool {
    let Some(&start) = verts.first() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let next = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen.len() == verts.len()
}

/// Every vertex and edge of the graph lies on a 4-cycle.
fn covered_by_squares(verts: &[VertexId], edges: &[(VertexId, VertexId)]) -> bool {
    let e: BTreeSet<(VertexId, VertexId)> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    let e = &e;
    let nbrs = |u: VertexId| verts.iter().copied().filter(move |&w| e.contains(&(u, w)));
    let on_square = |w: VertexId, x: VertexId| {
        nbrs(x).filter(|&y| y != w).any(|y| nbrs(w).filter(|&z| z != x && z != y).any(|z| e.contains(&(y, z))))
    };
    let good: BTreeSet<(VertexId, VertexId)> = edges.iter().copied().filter(|&(a, b)| on_square(a, b)).collect();
    good.len() == edges.len() && verts.iter().all(|&v| good.iter().any(|&(a, b)| a == v || b == v))
}

fn admissible(k: &SimplicialComplex, v: VertexId, placed: &[VertexId]) -> std::result::Result<(), String> {
    if placed.is_empty() {
        // The first vertex only needs a nonempty connected link.
        let lk = k.link(&Simplex::new(vec![v])).map_err(|e| e.to_string())?;
        return if lk.num_vertices() > 0 && lk.is_connected() {
            Ok(())
        } else {
            Err("link is empty or disconnected".into())
        };
    }
    let (verts, edges) = meet_graph(k, v, placed);
    if verts.is_empty() {
        Err("meets no earlier star".into())
    } else if !connected(&verts, &edges) {
        Err("meets the earlier stars in a disconnected set".into())
    } else if !covered_by_squares(&verts, &edges) {
        Err("meet is not covered by loops of length four".into())
    } else {
        Ok(())
    }
}

/// Backtracking search for an ordering of `vset` satisfying the conditions above,
/// trying vertices in increasing id order.
pub fn find_int4cycles_ordering(k: &SimplicialComplex, vset: &[VertexId]) -> Result<OrderingOutcome> {
    if let Some(&bad) = vset.iter().find(|&&v| v as usize >= k.num_vertices()) {
        return Err(Error::InvalidInput(format!("vertex {bad} is not in the complex")));
    }
    let mut todo: Vec<VertexId> = vset.to_vec();
    todo.sort_unstable();
    todo.dedup();
    let mut placed = Vec::new();
    let mut best: Vec<VertexId> = Vec::new();
    let mut nodes = 0;
    if search(k, &todo, &mut placed, &mut best, &mut nodes)? {
        return Ok(OrderingOutcome::Found { ordering: placed.iter().map(|&v| k.label(v).to_string()).collect() });
    }
    let blocked = todo
        .iter()
        .filter(|v| !best.contains(v))
        .map(|&v| (k.label(v).to_string(), admissible(k, v, &best).err().unwrap_or_else(|| "dead end".into())))
        .collect();
    Ok(OrderingOutcome::Failed { prefix: best.iter().map(|&v| k.label(v).to_string()).collect(), blocked })
}

fn search(
    k: &SimplicialComplex,
    todo: &[VertexId],
    placed: &mut Vec<VertexId>,
    best: &mut Vec<VertexId>,
    nodes: &mut usize,
) -> Result<bool> {
    if placed.len() == todo.len() {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(Error::SearchBudgetExhausted(NODE_BUDGET));
    }
    for &v in todo {
        if placed.contains(&v) || admissible(k, v, placed).is_err() {
            continue;
        }
        placed.push(v);
        if placed.len() > best.len() {
            *best = placed.clone();
        }
        if search(k, todo, placed, best, nodes)? {
            return Ok(true);
        }
        placed.pop();
    }
    Ok(false)
}
