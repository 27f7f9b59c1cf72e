//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! crate's own face enumeration or elimination code.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use branchcube::simplicial::{build_complex, SimplicialComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Invariant factors of an integer matrix by textbook pivoting.
pub fn naive_snf(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs());
        let Some((pr, pc)) = pivot else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut clean = true;
        for r in t + 1..rows {
            let q = m[r][t] / m[t][t];
            for c in t..cols {
                m[r][c] -= q * m[t][c];
            }
            clean &= m[r][t] == 0;
        }
        for c in t + 1..cols {
            let q = m[t][c] / m[t][t];
            for r in t..rows {
                m[r][c] -= q * m[r][t];
            }
            clean &= m[t][c] == 0;
        }
        if !clean {
            continue;
        }
        // The pivot must divide the rest; otherwise fold an offending row in.
        let p = m[t][t];
        if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % p != 0)) {
            for c in t..cols {
                m[t][c] += m[r][c];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// All faces of `k` by dimension, index 0 holding the empty face, built from the
/// facets by subset enumeration.
fn faces_by_dim(k: &SimplicialComplex) -> Vec<Vec<Vec<u32>>> {
    let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
    for f in k.facets() {
        let vs = f.vertices();
        for mask in 0u32..(1 << vs.len()) {
            all.insert((0..vs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| vs[i]).collect());
        }
    }
    all.insert(Vec::new());
    let top = all.iter().map(Vec::len).max().unwrap();
    let mut out = vec![Vec::new(); top + 1];
    for s in all {
        out[s.len()].push(s);
    }
    out
}

/// `(betti, torsion)` of reduced homology in degrees `0..=dim`.
pub fn oracle_reduced_homology(k: &SimplicialComplex) -> Vec<(usize, Vec<i128>)> {
    let faces = faces_by_dim(k);
    // boundary[n] maps chains on faces[n] to faces[n - 1].
    let mut divisors: Vec<Vec<i128>> = vec![Vec::new(); faces.len() + 1];
    for n in 1..faces.len() {
        let index: BTreeMap<&Vec<u32>, usize> = faces[n - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = vec![vec![0i128; faces[n].len()]; faces[n - 1].len()];
        for (c, s) in faces[n].iter().enumerate() {
            for i in 0..s.len() {
                let mut t = s.clone();
                t.remove(i);
                m[index[&t]][c] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        divisors[n] = naive_snf(m);
    }
    (1..faces.len())
        .map(|n| {
            let rank_out = divisors[n].len();
            let rank_in = divisors[n + 1].len();
            let betti = faces[n].len() - rank_out - rank_in;
            let torsion = divisors[n + 1].iter().copied().filter(|&d| d > 1).collect();
            (betti, torsion)
        })
        .collect()
}

/// `D_k` for `k = 1..=min(rows, cols)`: gcd of all `k × k` minors, by Laplace expansion.
pub fn determinantal_divisors(m: &[Vec<i128>]) -> Vec<i128> {
    fn det(m: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> i128 {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]];
        }
        let mut total = 0;
        for (j, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += sign * m[rows[0]][c] * det(m, &rows[1..], &rest);
        }
        total
    }
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..(1 << n))
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
            .collect()
    }
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0;
            for rows in choose(r, k) {
                for cols in choose(c, k) {
                    g = gcd(g, det(m, &rows, &cols));
                }
            }
            g
        })
        .collect()
}

/// A random complex on at most `max_vertices` vertices from a handful of random facets.
pub fn random_complex(seed: u64, max_vertices: u32) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_vertices);
    let facets: Vec<Vec<String>> = (0..rng.gen_range(1..=6))
        .map(|_| {
            let size = rng.gen_range(1..=4.min(n));
            let mut f: Vec<u32> = (0..n).collect();
            for i in 0..size as usize {
                let j = rng.gen_range(i..n as usize);
                f.swap(i, j);
            }
            f[..size as usize].iter().map(|v| format!("v{v}")).collect()
        })
        .collect();
    build_complex(&facets).unwrap()
}
