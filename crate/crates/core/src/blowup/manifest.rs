//! Machine-readable summary of a built cube complex.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::CubeComplex;
use crate::simplicial::{complex_to_json, SimplicialComplex};

#[derive(Clone, Debug, Serialize)]
pub struct CubeCounts {
    pub vertices: usize,
    pub edges: usize,
    pub squares: usize,
    pub cubes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    /// SHA-256 of the canonical JSON form of each generating complex.
    pub input_hashes: BTreeMap<String, String>,
    pub counts: CubeCounts,
    pub pattern_counts: BTreeMap<String, usize>,
    pub verdicts: BTreeMap<String, serde_json::Value>,
}

pub fn complex_hash(k: &SimplicialComplex) -> String {
    format!("{:x}", Sha256::digest(complex_to_json(k).as_bytes()))
}

impl Manifest {
    pub fn new(x: &CubeComplex) -> Self {
        let [vertices, edges, squares, cubes] = x.counts();
        let input_hashes = [("gamma_a", &x.gamma_a), ("gamma_b", &x.gamma_b)]
            .into_iter()
            .map(|(name, k)| (name.to_string(), complex_hash(k)))
            .collect();
        Manifest {
            input_hashes,
            counts: CubeCounts { vertices, edges, squares, cubes },
            pattern_counts: x.pattern_counts().into_iter().map(|(p, n)| (p.to_string(), n)).collect(),
            verdicts: BTreeMap::new(),
        }
    }

    pub fn with_input(mut self, name: &str, k: &SimplicialComplex) -> Self {
        self.input_hashes.insert(name.to_string(), complex_hash(k));
        self
    }

    pub fn record(&mut self, name: &str, verdict: impl Serialize) {
        let value = serde_json::to_value(verdict).expect("verdicts serialize");
        self.verdicts.insert(name.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::build_blowup;
    use crate::instance::gamma_a;

    #[test]
    fn manifest_for_one_cube() {
        let g = gamma_a([1, 1, 1]);
        let x = build_blowup(&g, &g).unwrap();
        let mut m = Manifest::new(&x);
        m.record("npc", true);
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["counts"]["squares"], 6);
        assert_eq!(v["pattern_counts"]["ABA"], 1);
        assert_eq!(v["verdicts"]["npc"], true);
        assert_eq!(v["input_hashes"]["gamma_a"], v["input_hashes"]["gamma_b"]);
        assert_eq!(v["input_hashes"]["gamma_a"].as_str().unwrap().len(), 64);
    }
}
