//! The extended monomial/series ring underlying everything else.
//!
//! Variables are indexed by matrix positions `x_{i,j}` with
//! `1 <= j < i <= n`.  The ones on the subdiagonal (`j = i-1`) are the
//! *simple* variables and may carry arbitrary rational exponents; all
//! other (*deep*) variables carry nonnegative integer exponents.  A
//! [`Series`] is a finite rational linear combination of such monomials
//! together with truncation metadata: the infinite expansions of
//! fractional operator powers are cut at a caller-chosen depth, and any
//! value whose computation involved such a cut is flagged `truncated`.

use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Exact rational scalar.  Always stored reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// True for nonnegative integers (the semigroup N).
pub fn is_nat(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

/// Parse `p/q` or a plain integer.  Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Canonical string form: `p` when the denominator is 1, else `p/q`.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

/// Falling factorial `mu (mu-1) (mu-2) ... (mu-p+1)`; the empty product 1
/// when `p = 0`.  Vanishes exactly when `mu` is one of `0, 1, ..., p-1`,
/// which is what makes integer operator powers expand finitely.
pub fn falling_factorial(mu: &Rational, p: u32) -> Rational {
    let mut acc = Rational::one();
    for k in 0..p {
        acc *= mu - rat(k as i64);
    }
    acc
}

/// A variable position `x_{row,col}` with `1 <= col < row`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex {
    pub row: u32,
    pub col: u32,
}

impl VarIndex {
    pub fn new(row: u32, col: u32) -> Self {
        assert!(col >= 1 && col < row, "invalid variable x_{{{row},{col}}}");
        VarIndex { row, col }
    }

    /// Simple variables sit on the subdiagonal: `x_{i+1,i}`.
    pub fn is_simple(&self) -> bool {
        self.col + 1 == self.row
    }

    pub fn is_deep(&self) -> bool {
        !self.is_simple()
    }

    /// The simple-root index `i` of `x_{i+1,i}`, when simple.
    pub fn simple_root(&self) -> Option<usize> {
        self.is_simple().then_some(self.col as usize)
    }

    /// The simple variable attached to root `i`.
    pub fn simple(i: usize) -> Self {
        VarIndex::new(i as u32 + 1, i as u32)
    }

    pub fn valid_for(&self, n: usize) -> bool {
        self.row as usize <= n
    }

    /// All variables for rank n, in the canonical order
    /// (2,1), (3,1), (3,2), (4,1), ...
    pub fn all(n: usize) -> Vec<VarIndex> {
        let mut out = Vec::new();
        for row in 2..=n as u32 {
            for col in 1..row {
                out.push(VarIndex { row, col });
            }
        }
        out
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{{{},{}}}", self.row, self.col)
    }
}

/// One monomial of the extended ring: a finite exponent map.  Absent
/// variables have exponent 0; stored exponents are never 0.  Deep
/// variables keep nonnegative integer exponents, simple ones may carry
/// any rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExtMonomial {
    exps: BTreeMap<VarIndex, Rational>,
}

impl ExtMonomial {
    /// The empty monomial, i.e. the constant 1.
    pub fn one() -> Self {
        ExtMonomial::default()
    }

    pub fn from_exps<I: IntoIterator<Item = (VarIndex, Rational)>>(iter: I) -> Self {
        let mut m = ExtMonomial::one();
        for (v, e) in iter {
            m.set_exponent(v, e);
        }
        m
    }

    /// Single-variable monomial `x_v^e`.
    pub fn var_pow(v: VarIndex, e: Rational) -> Self {
        Self::from_exps([(v, e)])
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: &VarIndex) -> Rational {
        self.exps.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_exponent(&mut self, v: VarIndex, e: Rational) {
        if e.is_zero() {
            self.exps.remove(&v);
        } else {
            debug_assert!(v.is_simple() || is_nat(&e), "deep exponent {e} on {v}");
            self.exps.insert(v, e);
        }
    }

    /// Adds `delta` to the exponent of `v`.
    pub fn shift(&self, v: VarIndex, delta: &Rational) -> Self {
        let mut m = self.clone();
        let e = m.exponent(&v) + delta;
        m.set_exponent(v, e);
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (v, e) in &other.exps {
            let new = m.exponent(v) + e;
            m.set_exponent(*v, new);
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarIndex, &Rational)> {
        self.exps.iter()
    }

    /// True when every exponent is a nonnegative integer.
    pub fn is_polynomial(&self) -> bool {
        self.exps.values().all(is_nat)
    }

    /// Exponents of the simple variables, keyed by simple-root index.
    pub fn simple_exponents(&self) -> BTreeMap<usize, Rational> {
        self.exps
            .iter()
            .filter_map(|(v, e)| v.simple_root().map(|i| (i, e.clone())))
            .collect()
    }

    /// Canonical comparison: variable-by-variable in the order
    /// (2,1), (3,1), (3,2), ..., treating absent exponents as 0.
    pub fn cmp_canonical(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let vars: BTreeSet<&VarIndex> = self.exps.keys().chain(other.exps.keys()).collect();
        for v in vars {
            let a = self.exponent(v);
            let b = other.exponent(v);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ExtMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_canonical(other)
    }
}

impl fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.exps {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{{{e}}}")?;
            }
        }
        Ok(())
    }
}

/// How deep fractional-power expansions are carried before cutting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    depth: u32,
}

impl TruncationPolicy {
    pub fn new(depth: u32) -> Self {
        assert!(depth >= 1, "truncation depth must be >= 1");
        TruncationPolicy { depth }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
}

/// A finite exact-rational linear combination of [`ExtMonomial`]s.
///
/// `truncated = false` certifies the value is exact; once any operation
/// cuts an infinite expansion the flag is set and sticks through every
/// subsequent operation.  Equality compares term maps only.
#[derive(Debug, Clone, Default)]
pub struct Series {
    terms: BTreeMap<ExtMonomial, Rational>,
    truncated: bool,
    depth_used: u32,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero() -> Self {
        Series::default()
    }

    pub fn one() -> Self {
        Series::monomial(ExtMonomial::one(), Rational::one())
    }

    pub fn monomial(m: ExtMonomial, c: Rational) -> Self {
        let mut s = Series::zero();
        s.add_term(m, c);
        s
    }

    /// Convenience: `c * x_v^e`.
    pub fn var_pow(v: VarIndex, e: Rational) -> Self {
        Series::monomial(ExtMonomial::var_pow(v, e), Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (ExtMonomial, Rational)>>(iter: I) -> Self {
        let mut s = Series::zero();
        for (m, c) in iter {
            s.add_term(m, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn depth_used(&self) -> u32 {
        self.depth_used
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExtMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &ExtMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * m`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, m: ExtMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Flags the series as cut at `depth`.  When several cuts meet, the
    /// tightest one wins: `depth_used` is the radius within which terms
    /// are still exact coefficients.
    pub fn mark_truncated(&mut self, depth: u32) {
        if self.truncated {
            self.depth_used = self.depth_used.min(depth);
        } else {
            self.truncated = true;
            self.depth_used = depth;
        }
    }

    /// Propagates truncation metadata from an input of an operation.
    pub fn inherit_flags(&mut self, from: &Series) {
        if from.truncated {
            self.mark_truncated(from.depth_used);
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.inherit_flags(other);
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            let mut out = Series::zero();
            out.inherit_flags(self);
            return out;
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Multiplies every term by `c * m`.
    pub fn mul_monomial(&self, m: &ExtMonomial, c: &Rational) -> Series {
        let mut out = Series::zero();
        out.inherit_flags(self);
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), cc * c);
        }
        out
    }

    /// The lexicographically first term in the canonical monomial order.
    pub fn leading_term(&self) -> Option<(&ExtMonomial, &Rational)> {
        self.terms.iter().next()
    }

    /// Rescales so the lexicographically first term has coefficient 1.
    pub fn normalized(&self) -> Series {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rational::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// True when every monomial has nonnegative integer exponents.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(ExtMonomial::is_polynomial)
    }

    /// Componentwise maximum of the simple-variable exponents over all
    /// terms, keyed by simple-root index.  The reference frame for
    /// truncation-depth comparisons.
    pub fn simple_front(&self) -> BTreeMap<usize, Rational> {
        let mut front: BTreeMap<usize, Rational> = BTreeMap::new();
        for m in self.terms.keys() {
            for (i, e) in m.simple_exponents() {
                front
                    .entry(i)
                    .and_modify(|cur| {
                        if e > *cur {
                            *cur = e.clone();
                        }
                    })
                    .or_insert(e);
            }
        }
        front
    }
}

/// Total downward shift of a monomial's simple exponents from a front.
/// Indices absent from the front count from exponent 0.
pub fn downshift(m: &ExtMonomial, front: &BTreeMap<usize, Rational>) -> Rational {
    let exps = m.simple_exponents();
    let mut total = Rational::zero();
    for i in front.keys().chain(exps.keys()).collect::<BTreeSet<_>>() {
        let f = front.get(i).cloned().unwrap_or_else(Rational::zero);
        let e = exps.get(i).cloned().unwrap_or_else(Rational::zero);
        total += f - e;
    }
    total
}

/// Equality of two series on every term lying within `depth` downward
/// shifts of their combined leading front.  Exact (untruncated) inputs
/// are compared term-for-term instead.
pub fn series_eq_up_to(a: &Series, b: &Series, depth: u32) -> bool {
    if !a.is_truncated() && !b.is_truncated() {
        return a == b;
    }
    let diff = a.sub(b);
    if diff.is_zero() {
        return true;
    }
    let front = a.add(b).simple_front();
    let bound = rat(depth as i64);
    let deep_only = diff.iter().all(|(m, _)| downshift(m, &front) > bound);
    deep_only
}

/// True when every term of `s` lies strictly deeper than `depth` below
/// the given front; with `s` exact this demands `s = 0`.
pub fn vanishes_up_to(s: &Series, front: &BTreeMap<usize, Rational>, depth: u32) -> bool {
    if !s.is_truncated() {
        return s.is_zero();
    }
    let bound = rat(depth as i64);
    s.iter().all(|(m, _)| downshift(m, front) > bound)
}

/// Termwise partial derivative with respect to `v`; rational exponents
/// differentiate as `d(x^r) = r x^{r-1}`.
pub fn partial_derivative(v: VarIndex, s: &Series) -> Series {
    let mut out = Series::zero();
    out.inherit_flags(s);
    for (m, c) in s.iter() {
        let r = m.exponent(&v);
        if r.is_zero() {
            continue;
        }
        let mut m2 = m.clone();
        m2.set_exponent(v, r.clone() - Rational::one());
        out.add_term(m2, c * r);
    }
    out
}

/// Sets every listed variable to zero: terms with positive exponent on a
/// listed variable drop, terms not involving them survive.  A negative
/// exponent on a listed variable leaves the substitution undefined.
pub fn substitute_zero(vars: &BTreeSet<VarIndex>, s: &Series) -> Result<Series> {
    let mut out = Series::zero();
    out.inherit_flags(s);
    'terms: for (m, c) in s.iter() {
        for v in vars {
            let e = m.exponent(v);
            if e.is_negative() {
                return Err(Error::NegativeExponentAtZero { var: *v, exp: e });
            }
            if e.is_positive() {
                continue 'terms;
            }
        }
        out.add_term(m.clone(), c.clone());
    }
    Ok(out)
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            if first {
                first = false;
                if c.is_one() && !m.is_one() {
                    write!(f, "{m}")?;
                } else if m.is_one() {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c} {m}")?;
                }
            } else {
                let (sign, abs) = if c.is_negative() {
                    ("-", -c.clone())
                } else {
                    ("+", c.clone())
                };
                if abs.is_one() && !m.is_one() {
                    write!(f, " {sign} {m}")?;
                } else if m.is_one() {
                    write!(f, " {sign} {abs}")?;
                } else {
                    write!(f, " {sign} {abs} {m}")?;
                }
            }
        }
        if self.is_truncated() {
            write!(f, " + O(depth {})", self.depth_used)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x21() -> VarIndex {
        VarIndex::new(2, 1)
    }
    fn x31() -> VarIndex {
        VarIndex::new(3, 1)
    }
    fn x32() -> VarIndex {
        VarIndex::new(3, 2)
    }

    #[test]
    fn falling_factorial_empty_product() {
        assert_eq!(falling_factorial(&ratio(7, 2), 0), rat(1));
    }

    #[test]
    fn falling_factorial_integer() {
        assert_eq!(falling_factorial(&rat(4), 2), rat(12));
    }

    #[test]
    fn falling_factorial_vanishes_past_integer() {
        assert_eq!(falling_factorial(&rat(3), 5), rat(0));
        assert_eq!(falling_factorial(&rat(3), 4), rat(0));
        assert_ne!(falling_factorial(&rat(3), 3), rat(0));
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = Series::var_pow(x21(), rat(1));
        let b = a.neg();
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn add_merges_coefficients() {
        let a = Series::var_pow(x32(), rat(1)).scale(&rat(2));
        let b = Series::var_pow(x32(), rat(1)).scale(&rat(3));
        let sum = a.add(&b);
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.coeff(&ExtMonomial::var_pow(x32(), rat(1))), rat(5));
    }

    #[test]
    fn add_keeps_distinct_monomials() {
        let a = Series::var_pow(x21(), ratio(1, 2));
        let b = Series::var_pow(x21(), rat(1));
        assert_eq!(a.add(&b).len(), 2);
    }

    #[test]
    fn derivative_of_fractional_power() {
        // d/dx (x^{5/2}) = 5/2 x^{3/2}
        let s = Series::var_pow(x21(), ratio(5, 2));
        let d = partial_derivative(x21(), &s);
        let expected =
            Series::monomial(ExtMonomial::var_pow(x21(), ratio(3, 2)), ratio(5, 2));
        assert_eq!(d, expected);
    }

    #[test]
    fn derivative_of_absent_variable() {
        let s = Series::var_pow(x21(), rat(1));
        assert!(partial_derivative(x31(), &s).is_zero());
    }

    #[test]
    fn derivative_of_constant() {
        assert!(partial_derivative(x21(), &Series::one()).is_zero());
    }

    #[test]
    fn substitute_zero_drops_terms() {
        // x31 x32 + x32  |->  x32  at x31 = 0
        let mut s = Series::zero();
        s.add_term(
            ExtMonomial::from_exps([(x31(), rat(1)), (x32(), rat(1))]),
            rat(1),
        );
        s.add_term(ExtMonomial::var_pow(x32(), rat(1)), rat(1));
        let out = substitute_zero(&BTreeSet::from([x31()]), &s).unwrap();
        assert_eq!(out, Series::var_pow(x32(), rat(1)));
    }

    #[test]
    fn substitute_zero_ignores_absent_variable() {
        let s = Series::var_pow(x21(), ratio(1, 2));
        let out = substitute_zero(&BTreeSet::from([x31()]), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn substitute_zero_rejects_negative_exponent() {
        let s = Series::var_pow(x21(), rat(-1));
        assert!(substitute_zero(&BTreeSet::from([x21()]), &s).is_err());
    }

    #[test]
    fn canonical_order_compares_first_variable_first() {
        // x21^2 vs x21 x32: exponent of x21 decides.
        let a = ExtMonomial::var_pow(x21(), rat(2));
        let b = ExtMonomial::from_exps([(x21(), rat(1)), (x32(), rat(1))]);
        assert!(b < a);
    }

    #[test]
    fn normalized_scales_leading_coefficient() {
        let mut s = Series::zero();
        s.add_term(ExtMonomial::var_pow(x21(), rat(2)), rat(6));
        s.add_term(ExtMonomial::var_pow(x21(), rat(3)), rat(4));
        let n = s.normalized();
        // x21^2 is lexicographically first
        assert_eq!(n.coeff(&ExtMonomial::var_pow(x21(), rat(2))), rat(1));
        assert_eq!(n.coeff(&ExtMonomial::var_pow(x21(), rat(3))), ratio(2, 3));
    }

    #[test]
    fn parse_rational_rejects_decimals() {
        assert!(parse_rational("1.5").is_err());
        assert_eq!(parse_rational("-7/3").unwrap(), ratio(-7, 3));
        assert_eq!(parse_rational("4").unwrap(), rat(4));
    }
}
