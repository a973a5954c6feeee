//! Shared helpers for the integration suites: a small deterministic RNG,
//! random algebra elements, and exact-rank utilities.

#![allow(dead_code)]

use slverma::algebra::{rat, ratio, ExtMonomial, Rational, Series, VarIndex};
use slverma::oracle::{rational_kernel, MultiIndex, PBWVector};
use slverma::{SimpleRootMap, Weight};

/// SplitMix64: tiny, seedable, stable across platforms.  Test suites that
/// promise a fixed number of randomized instances use this rather than a
/// framework RNG so the instances never shift under dependency updates.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Random rational with numerator in `-max_num..=max_num` and
    /// denominator in `1..=max_den`.
    pub fn rational(&mut self, max_num: i64, max_den: i64) -> Rational {
        ratio(self.int_in(-max_num, max_num), self.int_in(1, max_den))
    }
}

/// Random weight with entries of bounded numerator/denominator.
pub fn random_weight(rng: &mut SplitMix64, n: usize, max_num: i64, max_den: i64) -> Weight {
    let lambda = (1..n).map(|_| rng.rational(max_num, max_den)).collect();
    Weight::new(n, lambda).unwrap()
}

/// Random admissible root sequence of length `1..=max_len`.
pub fn random_root_map(rng: &mut SplitMix64, n: usize, max_len: usize) -> SimpleRootMap {
    let len = rng.int_in(1, max_len as i64) as usize;
    let mut values = Vec::with_capacity(len);
    let mut last = 0usize;
    for _ in 0..len {
        let mut v = rng.int_in(1, n as i64 - 1) as usize;
        while v == last {
            v = rng.int_in(1, n as i64 - 1) as usize;
        }
        values.push(v);
        last = v;
    }
    SimpleRootMap::new(n, values).unwrap()
}

/// Random monomial: a handful of variables, rational exponents with
/// denominator <= `max_den` on simple variables, small natural exponents
/// on deep ones.
pub fn random_monomial(rng: &mut SplitMix64, n: usize, max_den: i64) -> ExtMonomial {
    let mut m = ExtMonomial::one();
    for v in VarIndex::all(n) {
        if rng.below(3) != 0 {
            continue;
        }
        let e = if v.is_simple() {
            rng.rational(4, max_den)
        } else {
            rat(rng.int_in(0, 2))
        };
        m.set_exponent(v, e);
    }
    m
}

/// Random series with up to `max_terms` nonzero terms.
pub fn random_series(rng: &mut SplitMix64, n: usize, max_terms: usize, max_den: i64) -> Series {
    let terms = rng.int_in(1, max_terms as i64) as usize;
    let mut s = Series::zero();
    for _ in 0..terms {
        let c = rng.rational(5, 3);
        if c == rat(0) {
            continue;
        }
        s.add_term(random_monomial(rng, n, max_den), c);
    }
    if s.is_zero() {
        s.add_term(ExtMonomial::one(), rat(1));
    }
    s
}

/// Random PBW vector with small entries.
pub fn random_pbw(rng: &mut SplitMix64, n: usize, max_terms: usize) -> PBWVector {
    let terms = rng.int_in(1, max_terms as i64) as usize;
    let mut v = PBWVector::zero();
    for _ in 0..terms {
        let mut alpha = MultiIndex::empty();
        for var in VarIndex::all(n) {
            if rng.below(2) == 0 {
                alpha.set(var, rng.int_in(0, 3) as u32);
            }
        }
        let c = rng.rational(5, 3);
        if c != rat(0) {
            v.add_term(alpha, c);
        }
    }
    if v.is_zero() {
        v.add_term(MultiIndex::empty(), rat(1));
    }
    v
}

/// Exact rank of a family of series, as vectors over the union of their
/// supports.
pub fn series_rank(list: &[&Series]) -> usize {
    if list.is_empty() {
        return 0;
    }
    let mut support: std::collections::BTreeSet<ExtMonomial> = std::collections::BTreeSet::new();
    for s in list {
        support.extend(s.iter().map(|(m, _)| m.clone()));
    }
    let rows: Vec<Vec<Rational>> = support
        .iter()
        .map(|m| list.iter().map(|s| s.coeff(m)).collect())
        .collect();
    let nullity = rational_kernel(&rows, list.len()).len();
    list.len() - nullity
}
