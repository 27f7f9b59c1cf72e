//! Smith normal form.
//!
//! The sparse path eliminates unit pivots first, choosing the pivot in the
//! sparsest column and then the sparsest row. It runs in checked `i64` and restarts
//! in `BigInt` on overflow. Whatever survives without a unit pivot is handed to a
//! dense `BigInt` reduction.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    /// `(U, V)` unimodular with `U · M · V` diagonal, when requested.
    pub transforms: Option<(IntegerMatrix, IntegerMatrix)>,
}

#[derive(Clone, Copy, Debug)]
pub struct SnfOptions {
    /// Matrices with at most this many cells skip the sparse phase.
    pub dense_threshold: usize,
}

impl Default for SnfOptions {
    fn default() -> Self {
        SnfOptions { dense_threshold: 64 }
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    smith_normal_form_with(m, SnfOptions::default())
}

pub fn smith_normal_form_with(m: &IntegerMatrix, opts: SnfOptions) -> SnfResult {
    let divisors = if m.rows() * m.cols() <= opts.dense_threshold {
        dense_divisors(m.to_dense())
    } else {
        let (units, rest) = match eliminate::<i64>(m) {
            Some(out) => out,
            None => eliminate::<BigInt>(m).expect("BigInt elimination cannot overflow"),
        };
        let mut d = vec![BigInt::one(); units];
        d.extend(dense_divisors(rest));
        d
    };
    debug_assert!(divisors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
    SnfResult { rank: divisors.len(), divisors, transforms: None }
}

/// Dense reduction that also records the unimodular transforms. Intended for small
/// matrices.
pub fn smith_normal_form_with_transforms(m: &IntegerMatrix) -> SnfResult {
    let mut d = Dense::new(m.to_dense(), true);
    let divisors = d.reduce();
    let u = IntegerMatrix::from_dense(&d.u);
    let v = IntegerMatrix::from_dense(&d.v);
    SnfResult { rank: divisors.len(), divisors, transforms: Some((u, v)) }
}

pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank
}

trait Entry: Clone + PartialEq + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero_entry(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn negated(&self) -> Self;
    /// `self − f·x`, or `None` on overflow.
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    fn zero_entry() -> Self;
}

impl Entry for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero_entry(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*x)?)
    }
    fn zero_entry() -> Self {
        0
    }
}

impl Entry for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn negated(&self) -> Self {
        -self
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn zero_entry() -> Self {
        BigInt::zero()
    }
}

/// Unit-pivot elimination. Returns the number of unit pivots and the leftover
/// block (rows and columns with no remaining entries dropped).
fn eliminate<T: Entry>(m: &IntegerMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); m.rows()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (r, c, v) in m.entries() {
        rows[r].insert(c, T::from_big(v)?);
        cols[c].insert(r);
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..m.cols()).filter(|&c| !cols[c].is_empty()).map(|c| Reverse((cols[c].len(), c))).collect();
    let mut units = 0;

    while let Some(Reverse((count, c))) = heap.pop() {
        if count != cols[c].len() || count == 0 {
            continue;
        }
        let pivot = cols[c].iter().copied().filter(|&r| rows[r][&c].is_unit()).min_by_key(|&r| rows[r].len());
        let Some(r) = pivot else { continue };
        let pivot_row = std::mem::take(&mut rows[r]);
        for &j in pivot_row.keys() {
            cols[j].remove(&r);
        }
        let u = pivot_row[&c].clone();
        let others: Vec<usize> = cols[c].iter().copied().collect();
        for r2 in others {
            let a = rows[r2][&c].clone();
            // u is ±1, so u⁻¹ = u.
            let f = if u.to_big().is_one() { a } else { a.negated() };
            for (&j, x) in &pivot_row {
                let old = rows[r2].get(&j).cloned().unwrap_or_else(T::zero_entry);
                let new = old.sub_mul(&f, x)?;
                if new.is_zero_entry() {
                    rows[r2].remove(&j);
                    cols[j].remove(&r2);
                } else {
                    rows[r2].insert(j, new);
                    cols[j].insert(r2);
                }
            }
        }
        debug_assert!(cols[c].is_empty());
        units += 1;
        for &j in pivot_row.keys() {
            if !cols[j].is_empty() {
                heap.push(Reverse((cols[j].len(), j)));
            }
        }
    }

    // A column with no unit pivot can gain one only through a row operation, which
    // requeues it, so the loop above is exhaustive. Collect what is left.
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut rest = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            rest[i][col_pos[c]] = v.to_big();
        }
    }
    Some((units, rest))
}

fn dense_divisors(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    Dense::new(a, false).reduce()
}

struct Dense {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    track: bool,
    rows: usize,
    cols: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl Dense {
    fn new(a: Vec<Vec<BigInt>>, track: bool) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let (u, v) = if track { (identity(rows), identity(cols)) } else { (Vec::new(), Vec::new()) };
        Dense { a, u, v, track, rows, cols }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if self.track {
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if self.track {
            for row in &mut self.v {
                row.swap(i, j);
            }
        }
    }

    /// row_i ← row_i − q·row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        for c in 0..self.cols {
            if !self.a[t][c].is_zero() {
                let d = q * &self.a[t][c];
                self.a[i][c] -= d;
            }
        }
        if self.track {
            for c in 0..self.rows {
                let d = q * &self.u[t][c];
                self.u[i][c] -= d;
            }
        }
    }

    /// col_j ← col_j − q·col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        for r in 0..self.rows {
            if !self.a[r][t].is_zero() {
                let d = q * &self.a[r][t];
                self.a[r][j] -= d;
            }
        }
        if self.track {
            for r in 0..self.cols {
                let d = q * &self.v[r][t];
                self.v[r][j] -= d;
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.a[t] {
            *x = -&*x;
        }
        if self.track {
            for x in &mut self.u[t] {
                *x = -&*x;
            }
        }
    }

    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.rows {
            for c in t..self.cols {
                let x = &self.a[r][c];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(br, bc)| x.abs() < self.a[br][bc].abs()) {
                    best = Some((r, c));
                    if x.is_one() || (-x).is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn reduce(&mut self) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((r, c)) = self.smallest_from(t) else { break };
            self.swap_rows(t, r);
            self.swap_cols(t, c);
            loop {
                // Clear row t and column t, moving a smaller remainder into the
                // pivot position whenever division leaves one.
                let mut moved = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_sub(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        self.swap_rows(t, i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_sub(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        self.swap_cols(t, j);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // Row and column are clear; enforce divisibility of the rest.
                let p = self.a[t][t].clone();
                let offender =
                    (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match offender {
                    Some(i) => {
                        // row_t ← row_t + row_i, then keep reducing.
                        self.row_sub(t, i, &BigInt::from(-1));
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            out.push(self.a[t][t].clone());
            t += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divs(m: &IntegerMatrix) -> Vec<i64> {
        smith_normal_form(m).divisors.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(divs(&IntegerMatrix::identity(2)), vec![1, 1]);
        assert_eq!(divs(&IntegerMatrix::from_dense(&[vec![2, 0], vec![0, 0]])), vec![2]);
        assert_eq!(divs(&IntegerMatrix::from_dense(&[vec![2, 0], vec![0, 3]])), vec![1, 6]);
        assert_eq!(
            divs(&IntegerMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])),
            vec![2, 6, 12]
        );
        assert_eq!(divs(&IntegerMatrix::zeros(3, 2)), Vec::<i64>::new());
        assert_eq!(divs(&IntegerMatrix::zeros(0, 4)), Vec::<i64>::new());
    }

    #[test]
    fn sparse_path_matches_dense_path() {
        let m = IntegerMatrix::from_dense(&[
            vec![1, 0, 2, 0, 0],
            vec![0, 4, 0, 6, 0],
            vec![3, 0, 0, 0, 1],
            vec![0, 2, 0, 8, 0],
            vec![0, 0, 5, 0, 10],
        ]);
        let sparse = smith_normal_form_with(&m, SnfOptions { dense_threshold: 0 });
        let dense = smith_normal_form_with(&m, SnfOptions { dense_threshold: usize::MAX });
        assert_eq!(sparse.divisors, dense.divisors);
    }

    #[test]
    fn overflowing_entries_fall_back_to_bigints() {
        let big = BigInt::from(i64::MAX);
        let mut m = IntegerMatrix::zeros(3, 3);
        m.set(0, 0, 1);
        m.set(0, 1, big.clone());
        m.set(1, 0, big.clone());
        m.set(1, 1, 1);
        m.set(2, 2, 2);
        let r = smith_normal_form_with(&m, SnfOptions { dense_threshold: 0 });
        // The top block has determinant 1 − big², which is even.
        let expect = &big * &big - 1;
        assert_eq!(r.divisors, vec![BigInt::one(), BigInt::from(2), expect]);
    }

    #[test]
    fn transforms_diagonalize() {
        let m = IntegerMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![1, 1, 1]]);
        let r = smith_normal_form_with_transforms(&m);
        let (u, v) = r.transforms.clone().unwrap();
        let d = u.mul(&m).mul(&v);
        for (i, j, x) in d.entries() {
            assert_eq!(i, j);
            assert_eq!(x, &r.divisors[i]);
        }
        assert_eq!(r.divisors, smith_normal_form(&m).divisors);
    }
}
