//! Finite windows of the cyclic cover and the level-set inclusion test.
//!
//! The window `[m, n]` is the preimage of `[m − ½, n + ½]` in the cover. Cutting
//! each lifted cube along the half-integer levels turns it into convex pieces: the
//! part of the cube between two consecutive cuts (a slab piece) and the part lying
//! on a cut (a cut piece, one dimension lower). These pieces form a regular cell
//! complex; homology is taken from the order complex of its face poset, restricted
//! to cells of dimension at most 2, which is enough for `H₀` and `H₁`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{ascending_link, descending_link, level_function, LevelFunction, MorseOrientation};
use crate::blowup::{Coord, Cube, CubeComplex};
use crate::error::{Error, Result};
use crate::homology::{homology, relative_homology, HomologyGroup};
use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

/// A window `[m, n]` of integer levels in the cyclic cover.
#[derive(Clone, Debug, Serialize)]
pub struct LevelWindow {
    pub range: (i64, i64),
    pub period: u64,
    /// Lifted vertices `(vertex of X, level)` with level in range.
    pub lifted_vertices: Vec<(u32, i64)>,
    pub per_level: BTreeMap<i64, usize>,
}

impl LevelWindow {
    pub fn new(x: &CubeComplex, f: &MorseOrientation, m: i64, n: i64) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidInput(format!("empty level window [{m}, {n}]")));
        }
        let lf = level_function(x, f);
        let mut lifted_vertices = Vec::new();
        for v in 0..x.num_vertices() as u32 {
            for k in lifts_in(&lf, v, m, n) {
                lifted_vertices.push((v, k));
            }
        }
        lifted_vertices.sort_unstable_by_key(|&(v, k)| (k, v));
        let mut per_level = BTreeMap::new();
        for &(_, k) in &lifted_vertices {
            *per_level.entry(k).or_insert(0) += 1;
        }
        Ok(LevelWindow { range: (m, n), period: lf.period, lifted_vertices, per_level })
    }

    /// Order complex of the cell structure of this window.
    pub fn complex(&self, x: &CubeComplex, f: &MorseOrientation) -> SimplicialComplex {
        let (m, n) = self.range;
        CutComplex::build(x, f, &[2 * m - 1, 2 * n + 1]).order_complex
    }
}

/// `[−radius, radius]`.
pub fn cyclic_cover_window(x: &CubeComplex, f: &MorseOrientation, radius: i64) -> Result<LevelWindow> {
    LevelWindow::new(x, f, -radius, radius)
}

/// Levels `k ∈ [lo, hi]` at which `v` lifts.
fn lifts_in(lf: &LevelFunction, v: u32, lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    let h = lf.potential[v as usize];
    let (start, step) = match lf.period {
        0 => (h, None),
        p => (lo + (h - lo).rem_euclid(p as i64), Some(p as i64)),
    };
    std::iter::successors(Some(start), move |&k| step.map(|p| k + p))
        .take_while(move |&k| k <= hi)
        .filter(move |&k| k >= lo)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Piece {
    /// Between cut `j` and cut `j + 1`.
    Slab(usize),
    /// On cut `j`.
    Cut(usize),
}

/// A cell of the cut-up window: a piece of the lifted cube whose base vertex
/// sits at `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LiftedCell {
    pub cube: u32,
    pub level: i64,
    pub piece: Piece,
}

struct CutComplex {
    /// Cut positions, doubled so that they are odd integers.
    cuts: Vec<i64>,
    cells: Vec<LiftedCell>,
    order_complex: SimplicialComplex,
}

/// Level offsets of the free coordinates of a cube, from the `A` end.
fn weights(x: &CubeComplex, f: &MorseOrientation, c: &Cube) -> [i64; 3] {
    let base = x.vertex(c.base);
    [0, 1, 2].map(|i| c.free[i].map_or(0, |b| f.step(base.coords[i].id, b)))
}

fn level_span(w: &[i64; 3]) -> (i64, i64) {
    (w.iter().filter(|&&x| x < 0).sum(), w.iter().filter(|&&x| x > 0).sum())
}

/// Faces of a lifted cube (itself included) with their base levels.
fn lifted_faces(x: &CubeComplex, f: &MorseOrientation, id: u32, level: i64) -> Vec<(u32, i64)> {
    let c = *x.cube(id);
    let w = weights(x, f, &c);
    let free: Vec<usize> = c.free_coords().collect();
    let mut out = Vec::new();
    // Each free coordinate stays free, or is fixed at its A or B end.
    for code in 0..3usize.pow(free.len() as u32) {
        let mut base = *x.vertex(c.base);
        let mut face_free = [None; 3];
        let mut lvl = level;
        let mut rest = code;
        for &i in &free {
            match rest % 3 {
                0 => face_free[i] = c.free[i],
                1 => {}
                _ => {
                    base.coords[i] = Coord::b(c.free[i].unwrap());
                    lvl += w[i];
                }
            }
            rest /= 3;
        }
        let base = x.vertex_id(&base).expect("corner of a cube");
        let face = x.cube_id(&Cube { base, free: face_free }).expect("faces of cubes are cubes");
        out.push((face, lvl));
    }
    out
}

impl CutComplex {
    fn build(x: &CubeComplex, f: &MorseOrientation, cuts: &[i64]) -> Self {
        let lf = level_function(x, f);
        let cuts = cuts.to_vec();
        debug_assert!(cuts.windows(2).all(|w| w[0] < w[1]) && cuts.iter().all(|c| c % 2 != 0));
        let (c_min, c_max) = (cuts[0], *cuts.last().unwrap());

        let mut cells: Vec<LiftedCell> = Vec::new();
        for id in 0..x.cubes().len() as u32 {
            let c = x.cube(id);
            let (dlo, dhi) = level_span(&weights(x, f, c));
            // Need 2(k + dlo) < c_max and 2(k + dhi) > c_min.
            let lo = (c_min - 2 * dhi).div_euclid(2);
            let hi = (c_max - 2 * dlo).div_euclid(2) + 1;
            for k in lifts_in(&lf, c.base, lo, hi) {
                let (bot, top) = (2 * (k + dlo), 2 * (k + dhi));
                for j in 0..cuts.len().saturating_sub(1) {
                    if bot < cuts[j + 1] && top > cuts[j] && c.dim() <= 2 {
                        cells.push(LiftedCell { cube: id, level: k, piece: Piece::Slab(j) });
                    }
                }
                for (j, &cut) in cuts.iter().enumerate() {
                    if bot < cut && cut < top {
                        cells.push(LiftedCell { cube: id, level: k, piece: Piece::Cut(j) });
                    }
                }
            }
        }
        cells.sort_unstable();
        let index: HashMap<LiftedCell, u32> = cells.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();
        let dim = |c: &LiftedCell| -> usize {
            let d = x.cube(c.cube).dim();
            match c.piece {
                Piece::Slab(_) => d,
                Piece::Cut(_) => d - 1,
            }
        };

        // Cells one dimension lower in the closure of each cell.
        let below: Vec<Vec<u32>> = cells
            .iter()
            .map(|cell| {
                let d = dim(cell);
                let mut out = Vec::new();
                for (face, lvl) in lifted_faces(x, f, cell.cube, cell.level) {
                    let pieces: Vec<Piece> = match cell.piece {
                        Piece::Cut(j) => vec![Piece::Cut(j)],
                        Piece::Slab(j) => vec![Piece::Slab(j), Piece::Cut(j), Piece::Cut(j + 1)],
                    };
                    for piece in pieces {
                        let cand = LiftedCell { cube: face, level: lvl, piece };
                        if let Some(&i) = index.get(&cand) {
                            if dim(&cells[i as usize]) + 1 == d {
                                out.push(i);
                            }
                        }
                    }
                }
                out
            })
            .collect();

        // Maximal chains step down one dimension at a time.
        fn chains(top: u32, below: &[Vec<u32>], prefix: &mut Vec<u32>, out: &mut Vec<Simplex>) {
            prefix.push(top);
            if below[top as usize].is_empty() {
                out.push(Simplex::new(prefix.clone()));
            }
            for &b in &below[top as usize] {
                chains(b, below, prefix, out);
            }
            prefix.pop();
        }
        let mut faces = Vec::new();
        let mut prefix = Vec::new();
        for i in 0..cells.len() as u32 {
            chains(i, &below, &mut prefix, &mut faces);
        }
        let labels = cells
            .iter()
            .map(|c| {
                let piece = match c.piece {
                    Piece::Slab(j) => format!("s{j}"),
                    Piece::Cut(j) => format!("c{j}"),
                };
                format!("{}@{}/{piece}", c.cube, c.level)
            })
            .collect();
        let order_complex = SimplicialComplex::from_faces(labels, faces, None);
        CutComplex { cuts, cells, order_complex }
    }

    /// Cells inside `[lo_cut, hi_cut]` (doubled positions), a subcomplex.
    fn cells_between(&self, lo_cut: i64, hi_cut: i64) -> Vec<VertexId> {
        let inside = |j: usize| lo_cut <= self.cuts[j] && self.cuts[j] <= hi_cut;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| match c.piece {
                Piece::Slab(j) => inside(j) && inside(j + 1),
                Piece::Cut(j) => inside(j),
            })
            .map(|(i, _)| i as VertexId)
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub small: (i64, i64),
    pub big: (i64, i64),
    pub components_small: usize,
    pub components_big: usize,
    pub components_big_meeting_small: usize,
    pub h1_small: HomologyGroup,
    pub h1_big: HomologyGroup,
    pub h1_relative: HomologyGroup,
    pub h0_iso: bool,
    pub h1_onto: bool,
    /// Every ascending and descending link of a lifted vertex in the added levels
    /// is nonempty and connected.
    pub hypothesis: bool,
    pub disconnected_links: Vec<String>,
}

/// Effect of including the window `small` into `big` on `H₀` and `H₁`.
///
/// `H₁(S) → H₁(B)` is onto exactly when `H₁(B, S) → H₀(S)` is injective, and the
/// image of that map is the free group `ker(H₀(S) → H₀(B))`; so the test is that
/// `H₁(B, S)` is free of that rank.
pub fn level_inclusion_homology(
    x: &CubeComplex,
    f: &MorseOrientation,
    small: &LevelWindow,
    big: &LevelWindow,
) -> Result<InclusionReport> {
    let ((m, n), (bm, bn)) = (small.range, big.range);
    if bm > m || n > bn {
        return Err(Error::Precondition(format!("[{m}, {n}] is not inside [{bm}, {bn}]")));
    }
    let mut cuts = vec![2 * bm - 1, 2 * m - 1, 2 * n + 1, 2 * bn + 1];
    cuts.dedup();
    let cc = CutComplex::build(x, f, &cuts);
    let k = &cc.order_complex;
    let sub = cc.cells_between(2 * m - 1, 2 * n + 1);

    let (s_complex, _) = k.full_subcomplex(&sub);
    let labels = k.component_labels();
    let mut meeting: Vec<usize> = sub.iter().map(|&v| labels[v as usize]).collect();
    meeting.sort_unstable();
    meeting.dedup();
    let components_small = if sub.is_empty() { 0 } else { s_complex.num_components() };
    let components_big = if k.num_vertices() == 0 { 0 } else { k.num_components() };
    let h0_iso = components_small == meeting.len() && meeting.len() == components_big;

    let h1_relative = relative_homology(k, &sub, 1);
    let kernel_rank = components_small - meeting.len();
    let h1_onto = h1_relative.torsion.is_empty() && h1_relative.betti == kernel_rank;

    let lf = level_function(x, f);
    let mut added: Vec<u32> = (0..x.num_vertices() as u32)
        .filter(|&v| lifts_in(&lf, v, bm, m - 1).next().is_some() || lifts_in(&lf, v, n + 1, bn).next().is_some())
        .collect();
    added.sort_unstable();
    let mut disconnected_links = Vec::new();
    for &v in &added {
        for (name, link) in [("ascending", ascending_link(x, f, v)?), ("descending", descending_link(x, f, v)?)] {
            if link.num_vertices() == 0 || !link.is_connected() {
                disconnected_links.push(format!("{name} link of {}", x.vertex_label(v)));
            }
        }
    }
    let hypothesis = disconnected_links.is_empty();

    let report = InclusionReport {
        small: (m, n),
        big: (bm, bn),
        components_small,
        components_big,
        components_big_meeting_small: meeting.len(),
        h1_small: homology(&s_complex, 1),
        h1_big: homology(k, 1),
        h1_relative,
        h0_iso,
        h1_onto,
        hypothesis,
        disconnected_links,
    };
    if report.hypothesis && !(report.h0_iso && report.h1_onto) {
        return Err(Error::ConingViolation(format!(
            "[{m}, {n}] ⊂ [{bm}, {bn}]: H₀ iso {}, H₁ onto {}",
            report.h0_iso, report.h1_onto
        )));
    }
    Ok(report)
}
