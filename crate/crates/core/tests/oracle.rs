mod support;

use branchcube::homology::{homology, smith_normal_form, IntegerMatrix};
use branchcube::simplicial::{cycle, octahedron, projective_plane};
use proptest::prelude::*;
use support::{determinantal_divisors, naive_snf, oracle_reduced_homology, random_complex};

fn matches_oracle(k: &branchcube::simplicial::SimplicialComplex) -> Result<(), String> {
    for (i, (betti, torsion)) in oracle_reduced_homology(k).into_iter().enumerate() {
        let h = homology(k, i as isize);
        let got: Vec<i128> = h.torsion.iter().map(|t| t.try_into().unwrap()).collect();
        if h.betti != betti || got != torsion {
            return Err(format!("H{i}: got {h}, oracle betti {betti} torsion {torsion:?}"));
        }
    }
    Ok(())
}

#[test]
fn named_complexes_match_oracle() {
    for k in [cycle(3), octahedron(), projective_plane()] {
        matches_oracle(&k).unwrap();
    }
    // ℝP² carries the only torsion among them.
    assert_eq!(oracle_reduced_homology(&projective_plane())[1], (0, vec![2]));
}

#[test]
fn naive_snf_on_known_matrix() {
    assert_eq!(naive_snf(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_ratios_of_determinantal_divisors(
        rows in 1usize..=4,
        cols in 1usize..=4,
        entries in prop::collection::vec(-6i64..=6, 16),
    ) {
        let dense: Vec<Vec<i128>> = (0..rows).map(|r| (0..cols).map(|c| entries[r * 4 + c] as i128).collect()).collect();
        let m = IntegerMatrix::from_dense(&dense.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<Vec<i64>>>());
        let snf = smith_normal_form(&m);
        let dk = determinantal_divisors(&dense);
        let mut expected = Vec::new();
        let mut prev = 1;
        for d in dk {
            if d == 0 {
                break;
            }
            expected.push(d / prev);
            prev = d;
        }
        let got: Vec<i128> = snf.divisors.iter().map(|d| d.try_into().unwrap()).collect();
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(snf.rank, expected.len());
    }

    #[test]
    fn random_complexes_match_oracle(seed in any::<u64>()) {
        let k = random_complex(seed, 8);
        prop_assert_eq!(matches_oracle(&k), Ok(()));
    }
}
