//! Three operations exposed to the browser page in `www/`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use branchcube::branch::{commutator, make_perm_pair};
use branchcube::homology::reduced_homology_all;
use branchcube::simplicial::{complex_from_json, has_nlcp, is_flag, octahedralise};

/// Reduced homology in degrees `0..=dim`, as a JSON array of `{betti, torsion}`.
pub fn homology_of(complex_json: &str) -> Result<String, String> {
    let k = complex_from_json(complex_json).map_err(|e| e.to_string())?;
    let groups = reduced_homology_all(&k).split_off(1);
    Ok(serde_json::to_string(&groups).expect("homology serializes"))
}

/// Face counts of `K` and of its octahedralisation, with the flag and nlcp checks.
pub fn octahedralise_summary(complex_json: &str) -> Result<String, String> {
    let k = complex_from_json(complex_json).map_err(|e| e.to_string())?;
    let o = octahedralise(&k);
    let v = json!({
        "input": { "f_vector": k.f_vector(), "flag": is_flag(&k), "nlcp": has_nlcp(&k) },
        "octahedralised": { "f_vector": o.f_vector(), "flag": is_flag(&o), "nlcp": has_nlcp(&o) },
    });
    Ok(v.to_string())
}

/// Compares `[αᵃ, βᵇ]` with `α^{a(lᵇ − 1)}` for the pair built from `q` and `l`.
pub fn commutator_report(q: u64, l: u64, a: i64, b: i64) -> Result<String, String> {
    let pp = make_perm_pair(q, l).map_err(|e| e.to_string())?;
    let lhs = commutator(&pp.alpha_pow(a), &pp.beta_pow(b));
    let mut lb = 1u128;
    for _ in 0..b.rem_euclid(q as i64 - 1) {
        lb = lb * l as u128 % q as u128;
    }
    let exp = (a as i128 * (lb as i128 - 1)).rem_euclid(q as i128);
    let rhs = pp.alpha.pow(exp as i64);
    let v = json!({
        "alpha": pp.alpha.0,
        "beta": pp.beta.0,
        "commutator": lhs.0,
        "predicted_exponent": exp,
        "agrees": lhs == rhs,
    });
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn homology(complex_json: &str) -> Result<String, JsValue> {
    homology_of(complex_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn octahedralise_counts(complex_json: &str) -> Result<String, JsValue> {
    octahedralise_summary(complex_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn commutator_check(q: u32, l: u32, a: i32, b: i32) -> Result<String, JsValue> {
    commutator_report(q as u64, l as u64, a as i64, b as i64).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn circle_has_one_loop() {
        let h: Value =
            serde_json::from_str(&homology_of(r#"{"maximal_faces":[["a","b"],["b","c"],["a","c"]]}"#).unwrap())
                .unwrap();
        assert_eq!(h[1]["betti"], 1);
    }

    #[test]
    fn octahedralised_triangle() {
        let v: Value =
            serde_json::from_str(&octahedralise_summary(r#"{"maximal_faces":[["a","b","c"]]}"#).unwrap()).unwrap();
        // S⁰ * S⁰ * S⁰ is the octahedron.
        assert_eq!(v["octahedralised"]["f_vector"], json!([6, 12, 8]));
        assert_eq!(v["octahedralised"]["flag"], true);
    }

    #[test]
    fn commutator_agrees() {
        let v: Value = serde_json::from_str(&commutator_report(7, 3, 2, 4).unwrap()).unwrap();
        assert_eq!(v["agrees"], true);
        assert!(commutator_report(7, 2, 1, 1).is_err());
    }

    #[test]
    fn bad_json_is_an_error() {
        assert!(homology_of("not json").is_err());
    }
}
