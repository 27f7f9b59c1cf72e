//! Isomorphism classes of ascending and descending links, and the finiteness
//! verdicts they support.
//!
//! Simple connectivity is only ever *computed* in the easy direction: a
//! presentation that simplifies to no generators proves it, a nonzero `H₁` or a
//! disconnected link refutes it. Everything else must be recorded by the caller
//! with a source, and every verdict line says which kind of fact it used.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{ascending_link, descending_link, MorseOrientation};
use crate::blowup::CubeComplex;
use crate::error::{Error, Result};
use crate::homology::{homology, HomologyGroup};
use crate::presentation::{fundamental_group_presentation, tietze_simplify};
use crate::simplicial::{is_isomorphic, SimplicialComplex};

/// Tietze steps allowed when trying to show a link is simply connected.
const TIETZE_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Ascending,
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Assumption {
    Computed { value: bool, evidence: String },
    Recorded { value: bool, source: String },
    Unknown,
}

impl Assumption {
    pub fn value(&self) -> Option<bool> {
        match self {
            Assumption::Computed { value, .. } | Assumption::Recorded { value, .. } => Some(*value),
            Assumption::Unknown => None,
        }
    }

    fn describe(&self, what: &str) -> String {
        match self {
            Assumption::Computed { value, evidence } => format!("{what} = {value} (computed: {evidence})"),
            Assumption::Recorded { value, source } => format!("{what} = {value} (recorded: {source})"),
            Assumption::Unknown => format!("{what} unknown"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusClass {
    /// First link found in this class, e.g. `ascending link of (a1.0, a2.0, a3.0)`.
    pub representative: String,
    pub f_vector: Vec<usize>,
    pub count: usize,
    pub connected: bool,
    pub h1: HomologyGroup,
    pub simply_connected: Assumption,
    pub perfect_nontrivial_pi1: Assumption,
    #[serde(skip)]
    pub complex: SimplicialComplex,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub classes: Vec<CensusClass>,
}

pub(crate) fn classify(representative: String, complex: SimplicialComplex) -> CensusClass {
    let connected = complex.num_vertices() > 0 && complex.is_connected();
    let h1 = homology(&complex, 1);
    let (simply_connected, perfect) = if !connected {
        let no = Assumption::Computed { value: false, evidence: "link is empty or disconnected".into() };
        (no.clone(), no)
    } else if !h1.is_trivial() {
        let ev = format!("H₁ = {h1}");
        (
            Assumption::Computed { value: false, evidence: ev.clone() },
            Assumption::Computed { value: false, evidence: ev },
        )
    } else {
        let p = fundamental_group_presentation(&complex, 0).expect("connected");
        if tietze_simplify(&p, TIETZE_BUDGET).is_evidently_trivial() {
            let ev = "edge-path presentation reduces to no generators".to_string();
            (
                Assumption::Computed { value: true, evidence: ev.clone() },
                Assumption::Computed { value: false, evidence: ev },
            )
        } else {
            (Assumption::Unknown, Assumption::Unknown)
        }
    };
    CensusClass {
        representative,
        f_vector: complex.f_vector(),
        count: 1,
        connected,
        h1,
        simply_connected,
        perfect_nontrivial_pi1: perfect,
        complex,
    }
}

/// Groups every ascending and descending link of `X` into isomorphism classes.
pub fn link_census(x: &CubeComplex, f: &MorseOrientation) -> Result<Census> {
    let links: Vec<(String, SimplicialComplex)> = (0..x.num_vertices() as u32)
        .into_par_iter()
        .map(|v| -> Result<Vec<(String, SimplicialComplex)>> {
            Ok(vec![
                (format!("ascending link of {}", x.vertex_label(v)), ascending_link(x, f, v)?),
                (format!("descending link of {}", x.vertex_label(v)), descending_link(x, f, v)?),
            ])
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut classes: Vec<CensusClass> = Vec::new();
    let mut by_shape: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (name, link) in links {
        let bucket = by_shape.entry(link.f_vector()).or_default();
        let mut found = None;
        for &c in bucket.iter() {
            if is_isomorphic(&classes[c].complex, &link)? {
                found = Some(c);
                break;
            }
        }
        match found {
            Some(c) => classes[c].count += 1,
            None => {
                bucket.push(classes.len());
                classes.push(classify(name, link));
            }
        }
    }
    Ok(Census { classes })
}

impl Census {
    /// Records an externally established fact about the `π₁` of a class. A
    /// computed value is never overwritten.
    pub fn record(
        &mut self,
        class: usize,
        simply_connected: Option<bool>,
        perfect_nontrivial: Option<bool>,
        source: &str,
    ) -> Result<()> {
        let len = self.classes.len();
        let c = self.classes.get_mut(class).ok_or(Error::SelectorOutOfRange { index: class, len })?;
        for (slot, value) in
            [(&mut c.simply_connected, simply_connected), (&mut c.perfect_nontrivial_pi1, perfect_nontrivial)]
        {
            if let Some(value) = value {
                match slot {
                    Assumption::Computed { value: known, .. } if *known != value => {
                        return Err(Error::InvalidInput(format!(
                            "recorded value {value} contradicts a computed fact for class {class}"
                        )));
                    }
                    Assumption::Computed { .. } => {}
                    _ => *slot = Assumption::Recorded { value, source: source.to_string() },
                }
            }
        }
        Ok(())
    }

    /// Index of the first class isomorphic to `k`.
    pub fn find(&self, k: &SimplicialComplex) -> Result<Option<usize>> {
        for (i, c) in self.classes.iter().enumerate() {
            if c.f_vector == k.f_vector() && is_isomorphic(&c.complex, k)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictLine {
    pub claim: String,
    pub holds: Option<bool>,
    pub computed_facts: Vec<String>,
    pub recorded_assumptions: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessReport {
    pub lines: Vec<VerdictLine>,
    pub summary: String,
}

/// Runs the decision table over a census: connected links give finite generation
/// of the kernel; simply connected links give a finite presentation; simply
/// connected links except for some with perfect nontrivial `π₁` and `H₁ = 0` give
/// type `FP₂` without a finite presentation.
pub fn finiteness_report(census: &Census) -> FinitenessReport {
    let mut computed = Vec::new();
    let mut recorded = Vec::new();
    let mut note = |a: &Assumption, text: String| match a {
        Assumption::Computed { .. } => computed.push(text),
        Assumption::Recorded { .. } => recorded.push(text),
        Assumption::Unknown => {}
    };
    for c in &census.classes {
        note(&c.simply_connected, format!("{}: {}", c.representative, c.simply_connected.describe("simply connected")));
        note(
            &c.perfect_nontrivial_pi1,
            format!("{}: {}", c.representative, c.perfect_nontrivial_pi1.describe("π₁ perfect and nontrivial")),
        );
    }

    let all_connected = census.classes.iter().all(|c| c.connected);
    let connectivity: Vec<String> = census
        .classes
        .iter()
        .map(|c| format!("{} (×{}): connected = {}, H₁ = {}", c.representative, c.count, c.connected, c.h1))
        .collect();
    let mut lines = vec![VerdictLine {
        claim: "all ascending and descending links connected: kernel finitely generated".into(),
        holds: Some(all_connected),
        computed_facts: connectivity.clone(),
        recorded_assumptions: Vec::new(),
    }];

    let sc: Vec<Option<bool>> = census.classes.iter().map(|c| c.simply_connected.value()).collect();
    let all_sc = if sc.contains(&Some(false)) {
        Some(false)
    } else if sc.iter().all(|v| *v == Some(true)) {
        Some(true)
    } else {
        None
    };
    lines.push(VerdictLine {
        claim: "all links simply connected: kernel finitely presented".into(),
        holds: if all_connected { all_sc } else { Some(false) },
        computed_facts: computed.clone(),
        recorded_assumptions: recorded.clone(),
    });

    // FP₂ but not finitely presented: every link is acyclic in degree ≤ 1, all are
    // simply connected except at least one with perfect nontrivial π₁.
    let exotic = |c: &CensusClass| c.h1.is_trivial() && c.perfect_nontrivial_pi1.value() == Some(true);
    let fp2_not_fp = all_connected
        && census.classes.iter().all(|c| c.h1.is_trivial())
        && census.classes.iter().any(exotic)
        && census.classes.iter().all(|c| exotic(c) || c.simply_connected.value() == Some(true));
    let fp2_decided = !all_connected
        || census.classes.iter().any(|c| !c.h1.is_trivial())
        || census
            .classes
            .iter()
            .all(|c| c.simply_connected.value().is_some() && c.perfect_nontrivial_pi1.value().is_some());
    lines.push(VerdictLine {
        claim: "links with H₁ = 0, one with perfect nontrivial π₁: kernel of type FP₂, not finitely presented".into(),
        holds: if fp2_not_fp {
            Some(true)
        } else if fp2_decided {
            Some(false)
        } else {
            None
        },
        computed_facts: connectivity,
        recorded_assumptions: recorded,
    });

    let summary = if !all_connected {
        "no finiteness conclusion: some link is empty or disconnected".to_string()
    } else if fp2_not_fp {
        "FP₂, not finitely presented".to_string()
    } else if all_sc == Some(true) {
        let how = if lines[1].recorded_assumptions.is_empty() { "computed" } else { "partly recorded" };
        format!("F₂ evidence: links simply connected ({how})")
    } else {
        "finitely generated; higher finiteness undecided".to_string()
    };
    FinitenessReport { lines, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::build_blowup;
    use crate::instance::gamma_a;
    use crate::simplicial::{discrete, octahedron, projective_plane};

    fn one_class(k: SimplicialComplex) -> Census {
        Census { classes: vec![classify("K".into(), k)] }
    }

    #[test]
    fn octahedral_links_are_simply_connected() {
        let census = one_class(octahedron());
        assert!(matches!(census.classes[0].simply_connected, Assumption::Computed { value: true, .. }));
        let r = finiteness_report(&census);
        assert_eq!(r.summary, "F₂ evidence: links simply connected (computed)");
    }

    #[test]
    fn disconnected_link_blocks_everything() {
        let r = finiteness_report(&one_class(discrete(2)));
        assert_eq!(r.summary, "no finiteness conclusion: some link is empty or disconnected");
        assert_eq!(r.lines[0].holds, Some(false));
    }

    #[test]
    fn recorded_perfect_link() {
        // A stand-in: H₁ = ℤ/2 is not perfect, so recording it as perfect is
        // refused; an undecided class accepts a recorded value.
        let mut census = one_class(projective_plane());
        assert!(census.record(0, None, Some(true), "test").is_err());
        let mut undecided = census.classes[0].clone();
        undecided.h1 = HomologyGroup::trivial();
        undecided.simply_connected = Assumption::Unknown;
        undecided.perfect_nontrivial_pi1 = Assumption::Unknown;
        census.classes = vec![undecided, classify("octahedron".into(), octahedron())];
        census.record(0, Some(false), Some(true), "known perfect group").unwrap();
        let r = finiteness_report(&census);
        assert_eq!(r.summary, "FP₂, not finitely presented");
        assert!(!r.lines[2].recorded_assumptions.is_empty());
    }

    #[test]
    fn torus_census() {
        let g = gamma_a([2, 2, 2]);
        let x = build_blowup(&g, &g).unwrap();
        let f = MorseOrientation::default_for(&x);
        let census = link_census(&x, &f).unwrap();
        let total: usize = census.classes.iter().map(|c| c.count).sum();
        assert_eq!(total, 2 * x.num_vertices());
        // One A⁺ and one A⁻ per part: every ascending link is a triangle.
        assert_eq!(census.classes.len(), 1);
        assert_eq!(census.classes[0].f_vector, vec![3, 3, 1]);
    }
}
