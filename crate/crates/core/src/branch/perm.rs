//! Permutations of `ℤ/q` and the pair `α: x ↦ x + 1`, `β: x ↦ l·x`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A permutation of `{0, …, n−1}`, acting on the right: `x·(gh) = (x·g)·h`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[y as usize] = x as u32;
        }
        Perm(out)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Perm {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().iter().fold(1u64, |acc, &c| num_integer::lcm(acc, c as u64))
    }

    /// A single cycle through every point.
    pub fn is_transitive(&self) -> bool {
        self.cycle_type() == vec![self.degree()]
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Whether `l` generates the multiplicative group modulo the prime `q`.
pub fn is_primitive_root(l: u64, q: u64) -> bool {
    if l.is_multiple_of(q) {
        return false;
    }
    let n = q - 1;
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            if pow_mod(l, n / p, q) == 1 {
                return false;
            }
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    true
}

pub fn smallest_primitive_root(q: u64) -> u64 {
    (1..q).find(|&l| is_primitive_root(l, q)).expect("primes have primitive roots")
}

/// Smallest prime strictly greater than `bound` and not in `taken`.
pub fn next_prime_above(bound: u64, taken: &[u64]) -> u64 {
    (bound + 1..).find(|&p| is_prime(p) && !taken.contains(&p)).expect("primes are unbounded")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermPair {
    pub q: u64,
    pub l: u64,
    #[serde(skip)]
    pub alpha: Perm,
    #[serde(skip)]
    pub beta: Perm,
}

/// `α = (x ↦ x + 1)` and `β = (x ↦ l·x)` on `ℤ/q`, with `β⁻¹αβ = α^l` checked.
pub fn make_perm_pair(q: u64, l: u64) -> Result<PermPair> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if !is_primitive_root(l, q) {
        return Err(Error::NotPrimitive { q, l });
    }
    let alpha = Perm((0..q).map(|x| ((x + 1) % q) as u32).collect());
    let beta = Perm((0..q).map(|x| (x * l % q) as u32).collect());
    let pair = PermPair { q, l, alpha, beta };
    assert_eq!(pair.beta.inverse().then(&pair.alpha).then(&pair.beta), pair.alpha.pow(l as i64));
    Ok(pair)
}

impl PermPair {
    pub fn alpha_pow(&self, e: i64) -> Perm {
        self.alpha.pow(e)
    }

    pub fn beta_pow(&self, e: i64) -> Perm {
        self.beta.pow(e)
    }
}

/// `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn commutator(x: &Perm, y: &Perm) -> Perm {
    x.inverse().then(&y.inverse()).then(x).then(y)
}

/// Checks `[α^a, β^b] = α^{a(l^b − 1)}` and that it has order `q`, for all
/// `0 < a < q` and `0 < b < q − 1`.
pub fn commutator_identity_check(p: &PermPair) -> bool {
    let q = p.q;
    (1..q).all(|a| {
        (1..q.saturating_sub(1)).all(|b| {
            let c = commutator(&p.alpha_pow(a as i64), &p.beta_pow(b as i64));
            let e = (a as u128 * ((pow_mod(p.l, b, q) + q - 1) % q) as u128 % q as u128) as i64;
            c == p.alpha_pow(e) && c.order() == q
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_examples() {
        let p = make_perm_pair(5, 2).unwrap();
        let conj = p.beta.inverse().then(&p.alpha).then(&p.beta);
        assert_eq!(conj, Perm(vec![2, 3, 4, 0, 1]));
        assert!(matches!(make_perm_pair(5, 4), Err(Error::NotPrimitive { q: 5, l: 4 })));
        assert!(matches!(make_perm_pair(6, 5), Err(Error::NotPrime(6))));
        let p3 = make_perm_pair(3, 2).unwrap();
        assert_eq!(p3.beta, Perm(vec![0, 2, 1]));
    }

    #[test]
    fn commutator_examples() {
        let p = make_perm_pair(5, 2).unwrap();
        assert_eq!(commutator(&p.alpha, &p.beta), p.alpha);
        let c = commutator(&p.alpha_pow(2), &p.beta_pow(3));
        assert_eq!(c, p.alpha_pow(4));
        assert_eq!(c.order(), 5);
        assert!(commutator_identity_check(&p));
    }

    #[test]
    fn arithmetic_helpers() {
        assert!(is_prime(13) && !is_prime(1) && !is_prime(91));
        assert_eq!(smallest_primitive_root(13), 2);
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(next_prime_above(12, &[13]), 17);
        assert_eq!(Perm(vec![1, 0, 3, 4, 2]).cycle_type(), vec![3, 2]);
        let a = Perm(vec![1, 2, 0]);
        assert_eq!(a.pow(-1), a.inverse());
        assert!(a.pow(3).is_identity());
    }
}
