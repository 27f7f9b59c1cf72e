//! JSON form of a complex:
//! `{"vertices": [..], "maximal_faces": [[..], ..], "parts": {"v": 1, ..}}`.
//!
//! `vertices` may be omitted on input, in which case vertices are numbered in order
//! of first appearance in `maximal_faces`. Output always lists vertices in id
//! order and faces in sorted id order, so writing, reading and writing again gives
//! identical bytes.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{PartiteStructure, Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    pub maximal_faces: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<BTreeMap<String, u32>>,
}

impl ComplexFile {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        let maximal_faces = k
            .facets()
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| f.vertices().iter().map(|&v| k.label(v).to_string()).collect())
            .collect();
        let parts = k.parts().map(|p| k.vertices().map(|v| (k.label(v).to_string(), p.part_of(v))).collect());
        ComplexFile { vertices: Some(k.labels().to_vec()), maximal_faces, parts }
    }

    pub fn into_complex(self) -> Result<SimplicialComplex> {
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, VertexId> = HashMap::new();
        if let Some(vs) = self.vertices {
            for v in vs {
                if ids.contains_key(&v) {
                    return Err(Error::InvalidInput(format!("vertex {v:?} listed twice")));
                }
                ids.insert(v.clone(), labels.len() as VertexId);
                labels.push(v);
            }
        }
        let implicit = labels.is_empty();
        let mut faces = Vec::with_capacity(self.maximal_faces.len());
        for face in &self.maximal_faces {
            let mut verts = Vec::with_capacity(face.len());
            for name in face {
                let id = match ids.get(name) {
                    Some(&id) => id,
                    None if implicit => {
                        let id = labels.len() as VertexId;
                        ids.insert(name.clone(), id);
                        labels.push(name.clone());
                        id
                    }
                    None => {
                        return Err(Error::InvalidInput(format!("face vertex {name:?} missing from the vertex list")))
                    }
                };
                if verts.contains(&id) {
                    return Err(Error::DuplicateVertex { face: face.clone(), vertex: name.clone() });
                }
                verts.push(id);
            }
            faces.push(Simplex::new(verts));
        }
        let parts = match self.parts {
            None => None,
            Some(map) => {
                let mut p = vec![0u32; labels.len()];
                for (name, part) in map {
                    let id = *ids
                        .get(&name)
                        .ok_or_else(|| Error::InvalidInput(format!("part given for unknown vertex {name:?}")))?;
                    if part == 0 {
                        return Err(Error::InvalidInput(format!("part indices start at 1 ({name:?})")));
                    }
                    p[id as usize] = part;
                }
                if let Some(v) = p.iter().position(|&x| x == 0) {
                    return Err(Error::InvalidInput(format!("vertex {:?} has no part", labels[v])));
                }
                Some(PartiteStructure(p))
            }
        };
        Ok(SimplicialComplex::from_faces(labels, faces, parts))
    }
}

pub fn complex_to_json(k: &SimplicialComplex) -> String {
    serde_json::to_string(&ComplexFile::from_complex(k)).expect("plain data serializes")
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex> {
    serde_json::from_str::<ComplexFile>(text)?.into_complex()
}
