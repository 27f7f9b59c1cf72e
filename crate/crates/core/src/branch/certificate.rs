//! The branched-cover certificate: labels, loop monodromy, link covers at the
//! branch locus, and orderings for the ascending and descending links.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::cover::branched_link_cover;
use super::ordering::{find_int4cycles_ordering, OrderingOutcome};
use super::perm::commutator_identity_check;
use super::projection::{corner_loops, kept_pair, monodromy_rep, MonodromyRep};
use crate::blowup::{branch_locus, branch_piece, CubeComplex, Direction};
use crate::error::Result;
use crate::morse::census::classify;
use crate::morse::{directions_by_step, Assumption, LinkKind, MorseOrientation};
use crate::simplicial::{SimplicialComplex, VertexId};

/// Loops listed in full per projection; the rest are only counted.
const LOOP_SAMPLES: usize = 8;
const FAILURE_SAMPLES: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct LabelEntry {
    pub edge: String,
    pub exponent: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LoopSample {
    pub corner: String,
    pub a: [String; 2],
    pub b: [String; 2],
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCertificate {
    /// Kept coordinates, 1-based.
    pub pair: [usize; 2],
    pub q: u64,
    pub primitive_root: u64,
    pub commutator_identity: bool,
    pub squares: usize,
    pub squares_without_one_corner: usize,
    pub lambda_in_xi: bool,
    pub lambda_vertices: usize,
    pub lambda_edges: usize,
    pub euler_lambda: i64,
    pub euler_bookkeeping: i64,
    pub incoming_distinct: bool,
    pub alpha_labels: Vec<LabelEntry>,
    pub beta_labels: Vec<LabelEntry>,
    pub loops: usize,
    pub loops_transitive: usize,
    pub formula_disagreements: usize,
    pub loop_samples: Vec<LoopSample>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkTypeCertificate {
    pub representative: String,
    pub kind: LinkKind,
    pub count: usize,
    pub link_f_vector: Vec<usize>,
    pub branch_vertices: usize,
    pub cover_f_vector: Vec<usize>,
    pub sheets: usize,
    pub branch_preimages: Vec<usize>,
    pub vertex_count_holds: bool,
    pub cover_simply_connected: Assumption,
    pub ordering: OrderingOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub primes: [u64; 3],
    pub pairs: Vec<PairCertificate>,
    pub branch_vertices: usize,
    /// Branch vertices whose link cover has one preimage per branch direction.
    pub transitive_vertices: usize,
    pub failures: Vec<String>,
    pub link_types: Vec<LinkTypeCertificate>,
    /// Every 4-loop is transitive and every link cover is fully branched.
    pub monodromy_passed: bool,
    /// Every ascending and descending link type admits an ordering.
    pub orderings_passed: bool,
}

fn pair_certificate(x: &CubeComplex, rep: &MonodromyRep, k: usize) -> Result<PairCertificate> {
    let g = &rep.graphs[k];
    let lab = &rep.labels[k];
    let (squares, bad) = g.corner_check();
    let (chi, chi_book) = g.euler_check(x);
    let loops = corner_loops(x, g, lab)?;
    let transitive = loops.iter().filter(|c| c.transitive).count();
    let disagree = loops.iter().filter(|c| !c.formula_agrees).count();
    let a_label = |v: VertexId| x.gamma_a.label(v).to_string();
    let b_label = |v: VertexId| x.gamma_b.label(v).to_string();
    let alpha_labels = lab
        .lambda
        .iter()
        .map(|(&(a, b), &e)| LabelEntry { edge: format!("{} -> {}", a_label(a), b_label(b)), exponent: e })
        .collect();
    let beta_labels = lab
        .mu
        .iter()
        .map(|(&(a, b), &e)| LabelEntry { edge: format!("{} -> {}", b_label(b), a_label(a)), exponent: e })
        .collect();
    let loop_samples = loops
        .iter()
        .take(LOOP_SAMPLES)
        .map(|c| LoopSample {
            corner: g.point_label(x, c.corner),
            a: c.a.map(a_label),
            b: c.b.map(b_label),
            cycle_type: c.cycle_type.clone(),
        })
        .collect();
    let commutator = commutator_identity_check(&lab.perms);
    let incoming = lab.incoming_distinct(g);
    let (i, j) = kept_pair(k);
    Ok(PairCertificate {
        pair: [i + 1, j + 1],
        q: lab.q(),
        primitive_root: lab.perms.l,
        commutator_identity: commutator,
        squares,
        squares_without_one_corner: bad,
        lambda_in_xi: g.lambda_in_xi(),
        lambda_vertices: g.lambda_vertices.len(),
        lambda_edges: g.lambda_edges.len(),
        euler_lambda: chi,
        euler_bookkeeping: chi_book,
        incoming_distinct: incoming,
        alpha_labels,
        beta_labels,
        loops: loops.len(),
        loops_transitive: transitive,
        formula_disagreements: disagree,
        loop_samples,
        passed: commutator && bad == 0 && chi == chi_book && incoming && transitive == loops.len() && disagree == 0,
    })
}

/// Branched cover of a sublink of `Lk(v)` on the directions `dirs`, branched over
/// the directions that move the branch coordinate.
fn cover_of(
    x: &CubeComplex,
    rep: &MonodromyRep,
    v: u32,
    k: usize,
    link: &SimplicialComplex,
    dirs: &[Direction],
) -> Result<(super::cover::BranchedCover, Vec<VertexId>)> {
    let branch: Vec<VertexId> = (0..dirs.len() as VertexId).filter(|&n| dirs[n as usize].coord == k).collect();
    let cover = branched_link_cover(link, &branch, &rep.fiber(), |u, w| {
        rep.link_voltage(x, v, &dirs[u as usize], &dirs[w as usize])
    })?;
    Ok((cover, branch))
}

struct VertexOutcome {
    transitive: bool,
    failure: Option<String>,
}

fn check_vertex(x: &CubeComplex, rep: &MonodromyRep, v: u32, k: usize) -> VertexOutcome {
    let label = x.vertex_label(v);
    let run = || -> Result<bool> {
        let (link, dirs) = x.vertex_link(v)?;
        let (cover, _) = cover_of(x, rep, v, k, &link, &dirs)?;
        Ok(cover.single_preimages() && cover.vertex_count_holds())
    };
    match run() {
        Ok(true) => VertexOutcome { transitive: true, failure: None },
        Ok(false) => VertexOutcome {
            transitive: false,
            failure: Some(format!("{label}: a branch direction has several preimages")),
        },
        Err(e) => VertexOutcome { transitive: false, failure: Some(format!("{label}: {e}")) },
    }
}

fn link_type(
    x: &CubeComplex,
    f: &MorseOrientation,
    rep: &MonodromyRep,
    v: u32,
    k: usize,
    kind: LinkKind,
) -> Result<LinkTypeCertificate> {
    let (link, dirs) = directions_by_step(x, f, v, kind == LinkKind::Ascending)?;
    let (cover, branch) = cover_of(x, rep, v, k, &link, &dirs)?;
    let class = classify(String::new(), cover.complex.clone());
    let which = if kind == LinkKind::Ascending { "ascending" } else { "descending" };
    Ok(LinkTypeCertificate {
        representative: format!("{which} link of {}", x.vertex_label(v)),
        kind,
        count: 1,
        link_f_vector: link.f_vector(),
        branch_vertices: branch.len(),
        cover_f_vector: cover.complex.f_vector(),
        sheets: cover.sheets,
        branch_preimages: cover.branch_preimages.clone(),
        vertex_count_holds: cover.vertex_count_holds(),
        cover_simply_connected: class.simply_connected,
        ordering: find_int4cycles_ordering(&link, &branch)?,
    })
}

/// Builds the full certificate. `primes` are indexed by the dropped coordinate;
/// `None` picks them automatically.
pub fn branch_report(x: &CubeComplex, f: &MorseOrientation, primes: Option<[u64; 3]>) -> Result<BranchReport> {
    let rep = monodromy_rep(x, primes)?;
    let pairs = [2, 0, 1].iter().map(|&k| pair_certificate(x, &rep, k)).collect::<Result<Vec<_>>>()?;
    let y = branch_locus(x);
    let outcomes: Vec<VertexOutcome> =
        y.vertices.par_iter().map(|&v| check_vertex(x, &rep, v, branch_piece(x, v).expect("vertex of Y"))).collect();
    let transitive_vertices = outcomes.iter().filter(|o| o.transitive).count();
    let mut failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.failure).collect();

    // One representative per (pattern, kind, link shape, branch count).
    let mut types: BTreeMap<(String, LinkKind, Vec<usize>, usize), LinkTypeCertificate> = BTreeMap::new();
    let mut total = 0;
    for &v in &y.vertices {
        let k = branch_piece(x, v).expect("vertex of Y");
        for kind in [LinkKind::Ascending, LinkKind::Descending] {
            let (link, dirs) = directions_by_step(x, f, v, kind == LinkKind::Ascending)?;
            let nb = dirs.iter().filter(|d| d.coord == k).count();
            let key = (x.vertex(v).pattern().to_string(), kind, link.f_vector(), nb);
            if let Some(t) = types.get_mut(&key) {
                t.count += 1;
                continue;
            }
            total += 1;
            match link_type(x, f, &rep, v, k, kind) {
                Ok(t) => {
                    types.insert(key, t);
                }
                Err(e) => failures.push(format!("{kind:?} link of {}: {e}", x.vertex_label(v))),
            }
        }
    }
    let link_types: Vec<LinkTypeCertificate> = types.into_values().collect();
    let monodromy_passed = pairs.iter().all(|p| p.passed)
        && transitive_vertices == y.vertices.len()
        && link_types.iter().all(|t| t.branch_preimages.iter().all(|&n| n == 1) && t.vertex_count_holds);
    let orderings_passed = link_types.len() == total && link_types.iter().all(|t| t.ordering.found());
    failures.truncate(FAILURE_SAMPLES);
    Ok(BranchReport {
        primes: [rep.labels[0].q(), rep.labels[1].q(), rep.labels[2].q()],
        pairs,
        branch_vertices: y.vertices.len(),
        transitive_vertices,
        failures,
        link_types,
        monodromy_passed,
        orderings_passed,
    })
}

impl BranchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
