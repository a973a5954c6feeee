//! The constructive solver: exponent recursions, eta-power products, the
//! n!-fold enumeration of solution candidates, polynomiality detection,
//! the Malikov-Feigin-Fuchs vector and the irreducibility criterion.
//!
//! A candidate is encoded as an [`ExponentPlan`]: the ordered sequence of
//! (simple root, rational exponent) steps applied to the constant 1.  For
//! an index vector (i_1, ..., i_{n-1}) with 0 <= i_p <= p, the plan is
//! assembled block by block for p = n-1 down to 1: a nonempty block runs
//! the roots i_p, i_p+1, ..., p with exponents accumulated from a weight
//! ladder, and after each block the working weight is updated.  There are
//! exactly n! index vectors; every resulting series is annihilated by all
//! raising operators, and the polynomial ones are singular vectors of the
//! Verma module.

use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{downshift, is_nat, rat, Rational, Series, TruncationPolicy};
use crate::operators::{apply_d, apply_eta_power, weight_eigenvalues, Weight};
use crate::oracle::WeightDrop;
use crate::{Error, Result};

/// A map from step positions to simple roots, with consecutive values
/// distinct.  The root sequence of an eta-power product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleRootMap {
    n: usize,
    values: Vec<usize>,
}

impl SimpleRootMap {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        for (k, &v) in values.iter().enumerate() {
            if v < 1 || v > n - 1 {
                return Err(Error::InvalidRootMap(format!(
                    "value {v} at position {k} outside 1..={}",
                    n - 1
                )));
            }
            if k > 0 && values[k - 1] == v {
                return Err(Error::InvalidRootMap(format!(
                    "positions {} and {k} both map to root {v}",
                    k - 1
                )));
            }
        }
        Ok(SimpleRootMap { n, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// An ordered sequence of (root, exponent) steps, applied left to right
/// to the constant 1; step k corresponds to the k-th innermost factor of
/// the operator product.  Zero exponents are legal and act as the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPlan {
    steps: Vec<(usize, Rational)>,
}

impl ExponentPlan {
    pub fn new(steps: Vec<(usize, Rational)>) -> Result<Self> {
        for k in 1..steps.len() {
            if steps[k - 1].0 == steps[k].0 {
                return Err(Error::RepeatedRoot(k - 1, k));
            }
        }
        Ok(ExponentPlan { steps })
    }

    pub fn empty() -> Self {
        ExponentPlan { steps: Vec::new() }
    }

    pub fn steps(&self) -> &[(usize, Rational)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The root sequence, as a [`SimpleRootMap`] over rank `n`.
    pub fn root_map(&self, n: usize) -> Result<SimpleRootMap> {
        SimpleRootMap::new(n, self.steps.iter().map(|(r, _)| *r).collect())
    }

    /// Sum of exponents per root index: how far the plan lowers the
    /// weight along each simple root.
    pub fn drop_by_root(&self) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (root, exp) in &self.steps {
            *out.entry(*root).or_insert_with(Rational::zero) += exp.clone();
        }
        out
    }

    /// Sum of all exponents.
    pub fn total_drop(&self) -> Rational {
        self.steps
            .iter()
            .fold(Rational::zero(), |acc, (_, e)| acc + e.clone())
    }
}

impl fmt::Display for ExponentPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // operator order: last step leftmost
        for (root, exp) in self.steps.iter().rev() {
            write!(f, "eta_{root}^{{{exp}}} ")?;
        }
        write!(f, "(1)")
    }
}

/// An admissible index vector: entries `i_p` with `0 <= i_p <= p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexVector {
    entries: Vec<usize>,
}

impl IndexVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        for (k, &v) in entries.iter().enumerate() {
            if v > k + 1 {
                return Err(Error::InvalidIndexVector {
                    pos: k + 1,
                    value: v,
                    max: k + 1,
                });
            }
        }
        Ok(IndexVector { entries })
    }

    /// `i_p`, 1-based in p.
    pub fn get(&self, p: usize) -> usize {
        self.entries[p - 1]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// All n! index vectors for rank n, in lexicographic order.
    pub fn all(n: usize) -> Vec<IndexVector> {
        let mut out = vec![IndexVector { entries: vec![] }];
        for p in 1..n {
            let mut next = Vec::with_capacity(out.len() * (p + 1));
            for base in &out {
                for ip in 0..=p {
                    let mut entries = base.entries.clone();
                    entries.push(ip);
                    next.push(IndexVector { entries });
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Polynomiality verdict for a solution candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyVerdict {
    /// Exact and every exponent a nonnegative integer; all `d_i` vanish.
    Yes,
    /// A non-natural exponent is certain: either the series is exact, or
    /// a witness term lies within the trusted truncation depth.
    No,
    /// Truncated with no witness either way.
    Unknown,
}

impl PolyVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolyVerdict::Yes => "yes",
            PolyVerdict::No => "no",
            PolyVerdict::Unknown => "unknown",
        }
    }
}

/// One solution candidate: the index vector, its plan, the computed
/// series (normalized so the first term has coefficient 1), and the
/// verdicts.  The Malikov-Feigin-Fuchs vector carries no index.
#[derive(Debug, Clone)]
pub struct SolutionRecord {
    pub index: Option<IndexVector>,
    pub plan: ExponentPlan,
    pub series: Series,
    pub polynomial: PolyVerdict,
    pub exact: bool,
    pub weight: Vec<Rational>,
    pub normalized: bool,
}

impl SolutionRecord {
    /// The polynomiality verdict of the record.
    pub fn is_polynomial(&self) -> PolyVerdict {
        self.polynomial
    }

    /// The weight drop read off the plan (exponent sums per root).
    /// `None` when some sum is not a nonnegative integer.
    pub fn drop_from_plan(&self, n: usize) -> Option<WeightDrop> {
        let by_root = self.plan.drop_by_root();
        let mut k = Vec::with_capacity(n - 1);
        for i in 1..n {
            let v = by_root.get(&i).cloned().unwrap_or_else(Rational::zero);
            if !is_nat(&v) {
                return None;
            }
            k.push(v.to_integer().to_u32()?);
        }
        Some(WeightDrop::new(k))
    }

    /// The weight drop solved from the Cartan system
    /// `lambda - mu = A k`; the independent route used to cross-check
    /// plan accounting.
    pub fn drop_from_weight(&self, lam: &Weight) -> Option<WeightDrop> {
        let n = lam.n();
        let a = lam.cartan();
        let rows: Vec<Vec<Rational>> = (1..n)
            .map(|l| (1..n).map(|i| rat(a.entry(l, i))).collect())
            .collect();
        let rhs: Vec<Rational> = (1..n)
            .map(|i| lam.get(i).clone() - self.weight[i - 1].clone())
            .collect();
        let sol = rational_solve(&rows, &rhs)?;
        let mut k = Vec::with_capacity(n - 1);
        for v in sol {
            if !is_nat(&v) {
                return None;
            }
            k.push(v.to_integer().to_u32()?);
        }
        Some(WeightDrop::new(k))
    }
}

/// Solves a square rational system by elimination; `None` if singular.
fn rational_solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = Rational::one() / aug[col][col].clone();
        for c in col..=m {
            aug[col][c] *= inv.clone();
        }
        for r in 0..m {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=m {
                    let delta = f.clone() * aug[col][c].clone();
                    aug[r][c] -= delta;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[m].clone()).collect())
}

/// The exponent recursion for a root sequence:
/// `iota_1 = lambda_{I(1)} + 1`,
/// `iota_k = lambda_{I(k)} + 1 - sum_{p<k} a_{I(k),I(p)} iota_p`.
pub fn iota_exponents(map: &SimpleRootMap, lam: &Weight) -> Vec<Rational> {
    let a = lam.cartan();
    let mut iotas: Vec<Rational> = Vec::with_capacity(map.len());
    for (k, &root) in map.values().iter().enumerate() {
        let mut v = lam.get(root).clone() + Rational::one();
        for p in 0..k {
            v -= rat(a.entry(root, map.values()[p])) * iotas[p].clone();
        }
        iotas.push(v);
    }
    iotas
}

/// Folds the plan's eta-powers over the constant 1, first step first.
pub fn build_eta_product(plan: &ExponentPlan, policy: TruncationPolicy) -> Series {
    let mut s = Series::one();
    for (root, exp) in plan.steps() {
        s = apply_eta_power(*root, exp, &s, policy).expect("root >= 1 by construction");
    }
    s
}

/// The weight recursion data for one index vector: the working weights
/// `lambda^{(p)}` (level p holds p entries) and the ladder values
/// `lambda_{p,j}` for `0 <= j <= p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightRecursion {
    /// `lambda_table[p-1]` = the weight at level p, length p.
    pub lambda_table: Vec<Vec<Rational>>,
    /// `ladder[p-1][j]` = `lambda_{p,j}`, with `ladder[p-1][0] = 0`.
    pub ladder: Vec<Vec<Rational>>,
}

/// Runs the weight recursion downward from `lambda^{(n-1)} = lambda`,
/// choosing `i_p` from the index vector at each level.
///
/// For `i_p >= 1` the next weight merges the entries at `i_p - 1` and
/// `i_p` (plus one) and shifts the rest down; for `i_p = 0` the block is
/// empty and the weight is simply restricted (the level-p entry drops).
pub fn weight_recursion(idx: &IndexVector, lam: &Weight) -> Result<WeightRecursion> {
    let n = lam.n();
    if idx.entries().len() != n - 1 {
        return Err(Error::InvalidIndexVector {
            pos: idx.entries().len(),
            value: 0,
            max: n - 1,
        });
    }
    let mut lambda_table = vec![Vec::new(); n - 1];
    let mut ladder = vec![Vec::new(); n - 1];
    lambda_table[n - 2] = lam.entries().to_vec();
    for p in (1..n).rev() {
        let lp = lambda_table[p - 1].clone();
        let mut lad = Vec::with_capacity(p + 1);
        lad.push(Rational::zero());
        for j in 1..=p {
            // lambda_{p,j} = (p - j + 1) + sum_{q=j}^{p} lambda^{(p)}_q
            let mut v = rat((p - j + 1) as i64);
            for q in j..=p {
                v += lp[q - 1].clone();
            }
            lad.push(v);
        }
        ladder[p - 1] = lad;
        if p == 1 {
            break;
        }
        let ip = idx.get(p);
        let mut next = Vec::with_capacity(p - 1);
        for j in 1..p {
            // i_p = 0: empty block, the weight only restricts
            let value = if ip == 0 || j + 1 < ip {
                lp[j - 1].clone()
            } else if j + 1 == ip {
                lp[ip - 1].clone() + lp[ip - 2].clone() + Rational::one()
            } else {
                lp[j].clone()
            };
            next.push(value);
        }
        lambda_table[p - 2] = next;
    }
    Ok(WeightRecursion {
        lambda_table,
        ladder,
    })
}

/// The full exponent sequence of the candidate for one index vector.
///
/// Blocks are emitted for p = n-1 down to 1; a block with `i_p > 0`
/// contributes the ascending steps `(q, (q - i_p + 1) + sum_{s=i_p}^{q}
/// lambda^{(p)}_s)` for `q = i_p, ..., p`, so it ends at root p with
/// exponent `lambda_{p,i_p}` and starts at root `i_p` with exponent
/// `lambda^{(p)}_{i_p} + 1`.
pub fn theta_plan(idx: &IndexVector, lam: &Weight) -> Result<ExponentPlan> {
    let n = lam.n();
    let rec = weight_recursion(idx, lam)?;
    let mut steps: Vec<(usize, Rational)> = Vec::new();
    for p in (1..n).rev() {
        let ip = idx.get(p);
        if ip == 0 {
            continue;
        }
        let lp = &rec.lambda_table[p - 1];
        let mut acc = Rational::zero();
        for q in ip..=p {
            acc += lp[q - 1].clone();
            let exp = rat((q - ip + 1) as i64) + acc.clone();
            steps.push((q, exp));
        }
    }
    ExponentPlan::new(steps)
}

/// Default truncation depth for a weight: twice the largest plan drop
/// plus a margin, so polynomial candidates always expand exactly.
pub fn default_policy(lam: &Weight) -> TruncationPolicy {
    let n = lam.n();
    let mut max_drop = Rational::zero();
    for idx in IndexVector::all(n) {
        if let Ok(plan) = theta_plan(&idx, lam) {
            let t = plan.total_drop();
            if t > max_drop {
                max_drop = t;
            }
        }
    }
    let bound = max_drop.ceil().to_integer().to_i64().unwrap_or(0).max(0);
    TruncationPolicy::new((2 * bound + 4).min(u32::MAX as i64) as u32)
}

/// Polynomiality verdict for a computed series.
pub fn polynomial_verdict(series: &Series, lam: &Weight) -> PolyVerdict {
    if !series.is_truncated() {
        if !series.is_polynomial() {
            return PolyVerdict::No;
        }
        let all_killed = (1..lam.n()).all(|i| {
            apply_d(i, lam, series)
                .map(|r| r.is_zero())
                .unwrap_or(false)
        });
        if all_killed {
            PolyVerdict::Yes
        } else {
            PolyVerdict::Unknown
        }
    } else {
        // Terms within the trusted depth are exact coefficients, so a
        // non-natural exponent there is a definitive witness.
        let front = series.simple_front();
        let bound = rat(series.depth_used() as i64);
        let witness = series.iter().any(|(m, _)| {
            downshift(m, &front) <= bound && !m.is_polynomial()
        });
        if witness {
            PolyVerdict::No
        } else {
            PolyVerdict::Unknown
        }
    }
}

/// Evaluates all n! candidates for the weight, in index-vector order.
/// Duplicated series keep their own records.
pub fn enumerate_solutions(lam: &Weight, policy: TruncationPolicy) -> Vec<SolutionRecord> {
    let n = lam.n();
    IndexVector::all(n)
        .into_iter()
        .map(|idx| {
            let plan = theta_plan(&idx, lam).expect("index vectors are admissible");
            record_from_plan(Some(idx), plan, lam, policy)
        })
        .collect()
}

fn record_from_plan(
    index: Option<IndexVector>,
    plan: ExponentPlan,
    lam: &Weight,
    policy: TruncationPolicy,
) -> SolutionRecord {
    let series = build_eta_product(&plan, policy);
    let weight = weight_eigenvalues(lam, &series)
        .expect("eta products of 1 are nonzero")
        .expect("eta products of 1 are weighted");
    let polynomial = polynomial_verdict(&series, lam);
    let exact = !series.is_truncated();
    SolutionRecord {
        index,
        plan,
        series: series.normalized(),
        polynomial,
        exact,
        weight,
        normalized: true,
    }
}

/// The Malikov-Feigin-Fuchs vector: with `epsilon_q = q + sum_{p<=q}
/// lambda_p`, the plan runs `(1, epsilon_1), ..., (n-1, epsilon_{n-1})`
/// and then descends `(n-2, ...), ..., (1, ...)` through the top-level
/// ladder values.  Defined when `n-2 + sum(lambda)` is a nonnegative
/// integer; the result is then polynomial.
pub fn mff_vector(lam: &Weight, policy: TruncationPolicy) -> Result<SolutionRecord> {
    let n = lam.n();
    let sum: Rational = lam
        .entries()
        .iter()
        .fold(Rational::zero(), |acc, v| acc + v.clone());
    let gate = rat(n as i64 - 2) + sum.clone();
    if !is_nat(&gate) {
        return Err(Error::MffPrecondition(gate.to_string()));
    }
    let mut steps: Vec<(usize, Rational)> = Vec::new();
    // ascending pass: eta_{n-1}^{eps} ... eta_2^{eps_2} eta_1^{eps_1}
    let mut acc = Rational::zero();
    for q in 1..n {
        acc += lam.get(q).clone();
        steps.push((q, rat(q as i64) + acc.clone()));
    }
    // descending pass: eta_1^{lambda_{n-1,2}} ... eta_{n-2}^{lambda_{n-1,n-1}},
    // applied right to left; lambda_{n-1,j} = (n-j) + sum_{s=j}^{n-1} lambda_s
    for q in (1..n - 1).rev() {
        let j = q + 1;
        let mut v = rat((n - j) as i64);
        for s in j..n {
            v += lam.get(s).clone();
        }
        steps.push((q, v));
    }
    let plan = ExponentPlan::new(steps)?;
    Ok(record_from_plan(None, plan, lam, policy))
}

/// The auxiliary product used to test the reduced system: blocks for
/// i = n-1 down to 2, block i stepping `(q, mu_i - sum_{p=1}^{i-q}
/// (lambda_{n-p} + 1))` for q = 1, ..., i.
pub fn build_phi(mu: &[Rational], lam: &Weight, policy: TruncationPolicy) -> Result<Series> {
    let n = lam.n();
    if mu.len() != n - 1 {
        return Err(Error::WeightLength {
            expected: n - 1,
            got: mu.len(),
        });
    }
    let mut steps: Vec<(usize, Rational)> = Vec::new();
    for i in (2..n).rev() {
        for q in 1..=i {
            let mut exp = mu[i - 1].clone();
            for p in 1..=(i - q) {
                exp -= lam.get(n - p).clone() + Rational::one();
            }
            steps.push((q, exp));
        }
    }
    let plan = ExponentPlan::new(steps)?;
    Ok(build_eta_product(&plan, policy))
}

/// A contiguous segment check for the irreducibility criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCheck {
    pub start: usize,
    pub end: usize,
    /// `(end - start + 1) + sum_{p=start}^{end} lambda_p`
    pub value: Rational,
    pub positive_integer: bool,
    pub natural: bool,
}

/// Verdicts under both readings of the segment criterion, with the
/// per-segment evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityReport {
    /// No segment value is a positive integer (the reading backed by the
    /// oracle).
    pub irreducible: bool,
    /// No segment value is a nonnegative integer; diverges from the
    /// positive-integer reading exactly when some segment sums to 0.
    pub irreducible_natural_reading: bool,
    pub segments: Vec<SegmentCheck>,
}

impl IrreducibilityReport {
    pub fn triggering(&self) -> Vec<&SegmentCheck> {
        self.segments.iter().filter(|s| s.positive_integer).collect()
    }

    pub fn readings_diverge(&self) -> bool {
        self.irreducible != self.irreducible_natural_reading
    }
}

/// Segment-sum irreducibility test: the module is irreducible iff no
/// contiguous segment `a..=b` of simple roots has
/// `(b-a+1) + sum lambda_p` a positive integer.
pub fn irreducible(lam: &Weight) -> IrreducibilityReport {
    let n = lam.n();
    let mut segments = Vec::new();
    for a in 1..n {
        let mut sum = Rational::zero();
        for b in a..n {
            sum += lam.get(b).clone();
            let value = rat((b - a + 1) as i64) + sum.clone();
            let positive_integer = value.is_integer() && value.is_positive();
            let natural = is_nat(&value);
            segments.push(SegmentCheck {
                start: a,
                end: b,
                value,
                positive_integer,
                natural,
            });
        }
    }
    IrreducibilityReport {
        irreducible: !segments.iter().any(|s| s.positive_integer),
        irreducible_natural_reading: !segments.iter().any(|s| s.natural),
        segments,
    }
}

/// Applies the three-factor exchange relation at `pos`, when the steps
/// there match the pattern `(a, x), (a +- 1, x + z), (a, z)`; returns the
/// rewritten plan, or `None` when the pattern or the resulting plan is
/// invalid.
pub fn exchange_rewrite(plan: &ExponentPlan, pos: usize) -> Option<ExponentPlan> {
    let steps = plan.steps();
    if pos + 3 > steps.len() {
        return None;
    }
    let (a, x) = steps[pos].clone();
    let (b, y) = steps[pos + 1].clone();
    let (a2, z) = steps[pos + 2].clone();
    if a != a2 || b.abs_diff(a) != 1 || y != x.clone() + z.clone() {
        return None;
    }
    let mut new_steps = steps.to_vec();
    new_steps[pos] = (b, z);
    new_steps[pos + 1] = (a, y);
    new_steps[pos + 2] = (b, x);
    ExponentPlan::new(new_steps).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ratio, ExtMonomial, VarIndex};

    fn x21() -> VarIndex {
        VarIndex::new(2, 1)
    }
    fn x32() -> VarIndex {
        VarIndex::new(3, 2)
    }
    fn policy() -> TruncationPolicy {
        TruncationPolicy::new(10)
    }

    fn plan_of(steps: &[(usize, i64)]) -> ExponentPlan {
        ExponentPlan::new(steps.iter().map(|&(r, e)| (r, rat(e))).collect()).unwrap()
    }

    #[test]
    fn iota_single_step() {
        let lam = Weight::from_ints(&[5, 7]);
        for i in 1..=2 {
            let map = SimpleRootMap::new(3, vec![i]).unwrap();
            assert_eq!(
                iota_exponents(&map, &lam),
                vec![lam.get(i).clone() + rat(1)]
            );
        }
    }

    #[test]
    fn iota_two_steps() {
        // I = (1,2): [lambda1 + 1, lambda1 + lambda2 + 2]
        let lam = Weight::new(3, vec![ratio(1, 2), rat(3)]).unwrap();
        let map = SimpleRootMap::new(3, vec![1, 2]).unwrap();
        assert_eq!(
            iota_exponents(&map, &lam),
            vec![ratio(3, 2), ratio(1, 2) + rat(3) + rat(2)]
        );
    }

    #[test]
    fn iota_three_steps_alternating() {
        let lam = Weight::from_ints(&[1, 1]);
        let map = SimpleRootMap::new(3, vec![1, 2, 1]).unwrap();
        assert_eq!(iota_exponents(&map, &lam), vec![rat(2), rat(4), rat(2)]);
    }

    #[test]
    fn empty_plan_builds_one() {
        assert_eq!(build_eta_product(&ExponentPlan::empty(), policy()), Series::one());
    }

    #[test]
    fn single_step_fractional_plan() {
        let plan = ExponentPlan::new(vec![(1, ratio(7, 2))]).unwrap();
        let s = build_eta_product(&plan, policy());
        assert_eq!(s, Series::var_pow(x21(), ratio(7, 2)));
        assert!(!s.is_truncated());
    }

    #[test]
    fn monomial_product_plan() {
        // eta_1^3 eta_2^2 (1) = x21^3 x32^2 regardless of weight
        let s = build_eta_product(&plan_of(&[(2, 2), (1, 3)]), policy());
        let expected = Series::monomial(
            ExtMonomial::from_exps([(x21(), rat(3)), (x32(), rat(2))]),
            rat(1),
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn plan_rejects_repeated_roots() {
        assert!(ExponentPlan::new(vec![(1, rat(1)), (1, rat(2))]).is_err());
    }

    #[test]
    fn index_vectors_count_factorial() {
        assert_eq!(IndexVector::all(2).len(), 2);
        assert_eq!(IndexVector::all(3).len(), 6);
        assert_eq!(IndexVector::all(4).len(), 24);
    }

    #[test]
    fn theta_plan_zero_vector_is_empty() {
        let lam = Weight::from_ints(&[2, 1]);
        let idx = IndexVector::new(vec![0, 0]).unwrap();
        assert!(theta_plan(&idx, &lam).unwrap().is_empty());
    }

    #[test]
    fn theta_plan_n2() {
        let lam = Weight::from_ints(&[3]);
        let idx = IndexVector::new(vec![1]).unwrap();
        let plan = theta_plan(&idx, &lam).unwrap();
        assert_eq!(plan.steps(), &[(1, rat(4))]);
    }

    #[test]
    fn theta_plans_for_21() {
        // lambda = (2,1): the six plans, spot-checking the monomial ones
        let lam = Weight::from_ints(&[2, 1]);
        let plan = |e: &[usize]| {
            theta_plan(&IndexVector::new(e.to_vec()).unwrap(), &lam).unwrap()
        };
        assert_eq!(plan(&[1, 0]).steps(), plan_of(&[(1, 3)]).steps());
        assert_eq!(plan(&[0, 2]).steps(), plan_of(&[(2, 2)]).steps());
        // (1,2): eta_1^{lambda1+lambda2+2} eta_2^{lambda2+1}
        assert_eq!(plan(&[1, 2]).steps(), plan_of(&[(2, 2), (1, 5)]).steps());
        // (0,1): eta_2^{lambda1+lambda2+2} eta_1^{lambda1+1}
        assert_eq!(plan(&[0, 1]).steps(), plan_of(&[(1, 3), (2, 5)]).steps());
        // (1,1): eta_1^{lambda2+1} eta_2^{lambda1+lambda2+2} eta_1^{lambda1+1}
        assert_eq!(
            plan(&[1, 1]).steps(),
            plan_of(&[(1, 3), (2, 5), (1, 2)]).steps()
        );
    }

    #[test]
    fn theta_plans_match_iota_recursion() {
        // every plan's exponents satisfy the iota recursion of its root
        // sequence, for a fractional weight and both n = 3 and n = 4
        for lam in [
            Weight::new(3, vec![ratio(2, 3), ratio(-1, 2)]).unwrap(),
            Weight::new(4, vec![ratio(1, 2), rat(2), ratio(-4, 3)]).unwrap(),
        ] {
            for idx in IndexVector::all(lam.n()) {
                let plan = theta_plan(&idx, &lam).unwrap();
                if plan.is_empty() {
                    continue;
                }
                let map = plan.root_map(lam.n()).unwrap();
                let iotas = iota_exponents(&map, &lam);
                let exps: Vec<Rational> =
                    plan.steps().iter().map(|(_, e)| e.clone()).collect();
                assert_eq!(exps, iotas, "idx {idx} of {lam}");
            }
        }
    }

    #[test]
    fn theta_plans_match_printed_n4_forms() {
        // fundamental n = 4 solutions at a generic integer weight
        let lam = Weight::from_ints(&[1, 2, 3]);
        let (l1, l2, l3) = (1i64, 2i64, 3i64);
        let plan = |e: &[usize]| {
            theta_plan(&IndexVector::new(e.to_vec()).unwrap(), &lam)
                .unwrap()
                .steps()
                .to_vec()
        };
        // eta_3^{l1+l2+l3+3} eta_2^{l1+l2+2} eta_1^{l1+1}
        assert_eq!(
            plan(&[0, 0, 1]),
            plan_of(&[(1, l1 + 1), (2, l1 + l2 + 2), (3, l1 + l2 + l3 + 3)]).steps()
        );
        // eta_1^{l1+l2+2} eta_3^{l2+l3+2} eta_2^{l2+1}
        assert_eq!(
            plan(&[1, 0, 2]),
            plan_of(&[(2, l2 + 1), (3, l2 + l3 + 2), (1, l1 + l2 + 2)]).steps()
        );
        // eta_1^{l2+1} eta_3^{l1+l2+l3+3} eta_2^{l1+l2+2} eta_1^{l1+1}
        assert_eq!(
            plan(&[1, 0, 1]),
            plan_of(&[
                (1, l1 + 1),
                (2, l1 + l2 + 2),
                (3, l1 + l2 + l3 + 3),
                (1, l2 + 1)
            ])
            .steps()
        );
        // eta_2^{l2+l3+2} eta_1^{l2+1} eta_3^{l1+l2+l3+3} eta_2^{l1+l2+2} eta_1^{l1+1}
        assert_eq!(
            plan(&[0, 1, 1]),
            plan_of(&[
                (1, l1 + 1),
                (2, l1 + l2 + 2),
                (3, l1 + l2 + l3 + 3),
                (1, l2 + 1),
                (2, l2 + l3 + 2)
            ])
            .steps()
        );
    }

    #[test]
    fn enumerate_n2() {
        let lam = Weight::from_ints(&[3]);
        let recs = enumerate_solutions(&lam, policy());
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].series, Series::one());
        assert_eq!(recs[1].series, Series::var_pow(x21(), rat(4)));
        assert!(recs.iter().all(|r| r.polynomial == PolyVerdict::Yes));
        assert!(recs.iter().all(|r| r.exact));
    }

    #[test]
    fn enumerate_third_fractional_weight() {
        // lambda = (1/3, 1/3): six records, only the trivial one polynomial
        let lam = Weight::new(3, vec![ratio(1, 3), ratio(1, 3)]).unwrap();
        let recs = enumerate_solutions(&lam, policy());
        assert_eq!(recs.len(), 6);
        let yes: Vec<_> = recs
            .iter()
            .filter(|r| r.polynomial == PolyVerdict::Yes)
            .collect();
        assert_eq!(yes.len(), 1);
        assert_eq!(yes[0].series, Series::one());
        // the rest are definitively non-polynomial, truncated or not
        assert!(recs
            .iter()
            .filter(|r| r.polynomial != PolyVerdict::Yes)
            .all(|r| r.polynomial == PolyVerdict::No));
    }

    #[test]
    fn enumerate_collapsing_weight() {
        // lambda = (-2, 0): candidates collapse; the polynomial ones are
        // exactly {1, x32} after normalization
        let lam = Weight::from_ints(&[-2, 0]);
        let recs = enumerate_solutions(&lam, policy());
        assert_eq!(recs.len(), 6);
        let mut yes: Vec<Series> = recs
            .iter()
            .filter(|r| r.polynomial == PolyVerdict::Yes)
            .map(|r| r.series.clone())
            .collect();
        yes.dedup();
        yes.sort_by(|a, b| format!("{a}").cmp(&format!("{b}")));
        yes.dedup();
        assert_eq!(yes, vec![Series::one(), Series::var_pow(x32(), rat(1))]);
        // the non-polynomial ones are x21^{-1}, witnessed exactly
        let no: Vec<_> = recs
            .iter()
            .filter(|r| r.polynomial == PolyVerdict::No)
            .collect();
        assert_eq!(no.len(), 2);
        for r in no {
            assert!(r.exact);
            assert_eq!(r.series, Series::var_pow(x21(), rat(-1)));
        }
    }

    #[test]
    fn verdict_for_3_85_style_plan_at_minus2_0() {
        // the alternating plan collapses to the constant 1 here:
        // eta_1^1 eta_2^0 eta_1^{-1} (1) = x * x^{-1} = 1
        let lam = Weight::from_ints(&[-2, 0]);
        let idx = IndexVector::new(vec![1, 1]).unwrap();
        let plan = theta_plan(&idx, &lam).unwrap();
        assert_eq!(
            plan.steps(),
            &[(1, rat(-1)), (2, rat(0)), (1, rat(1))]
        );
        let s = build_eta_product(&plan, policy());
        assert_eq!(s, Series::one());
        assert_eq!(polynomial_verdict(&s, &lam), PolyVerdict::Yes);
    }

    #[test]
    fn mff_n2_is_classical_vector() {
        let lam = Weight::from_ints(&[3]);
        let rec = mff_vector(&lam, policy()).unwrap();
        assert_eq!(rec.series, Series::var_pow(x21(), rat(4)));
        assert_eq!(rec.polynomial, PolyVerdict::Yes);
    }

    #[test]
    fn mff_precondition() {
        let lam = Weight::new(3, vec![ratio(1, 2), rat(0)]).unwrap();
        assert!(mff_vector(&lam, policy()).is_err());
    }

    #[test]
    fn mff_plan_shape_n3() {
        // (1, l1+1), (2, l1+l2+2), (1, l2+1)
        let lam = Weight::from_ints(&[1, 1]);
        let rec = mff_vector(&lam, policy()).unwrap();
        assert_eq!(
            rec.plan.steps(),
            plan_of(&[(1, 2), (2, 4), (1, 2)]).steps()
        );
        assert_eq!(rec.polynomial, PolyVerdict::Yes);
    }

    #[test]
    fn phi_trivial_tail() {
        // n = 3, mu_2 = lambda_2 + 1 makes the inner factor eta_1^0:
        // phi = x32^{lambda2+1}
        let lam = Weight::new(3, vec![ratio(1, 2), ratio(2, 3)]).unwrap();
        let mu = vec![rat(0), lam.get(2).clone() + rat(1)];
        let phi = build_phi(&mu, &lam, policy()).unwrap();
        assert_eq!(phi, Series::var_pow(x32(), ratio(5, 3)));
    }

    #[test]
    fn irreducibility_examples() {
        // (3): reducible, segment value 4
        let r = irreducible(&Weight::from_ints(&[3]));
        assert!(!r.irreducible);
        assert_eq!(r.triggering().len(), 1);
        assert_eq!(r.triggering()[0].value, rat(4));

        // (1/3, 1/3): irreducible, values 4/3, 8/3, 4/3
        let r = irreducible(&Weight::new(3, vec![ratio(1, 3), ratio(1, 3)]).unwrap());
        assert!(r.irreducible);
        assert!(r.irreducible_natural_reading);
        let vals: Vec<Rational> = r.segments.iter().map(|s| s.value.clone()).collect();
        assert_eq!(vals, vec![ratio(4, 3), ratio(8, 3), ratio(4, 3)]);

        // (-1,-1): all segment values 0; the readings diverge
        let r = irreducible(&Weight::from_ints(&[-1, -1]));
        assert!(r.irreducible);
        assert!(!r.irreducible_natural_reading);
        assert!(r.readings_diverge());
    }

    #[test]
    fn exchange_rewrite_mff_plan() {
        // (1,2),(2,4),(1,2): 4 = 2 + 2, rewrite swaps the roots
        let plan = plan_of(&[(1, 2), (2, 4), (1, 2)]);
        let swapped = exchange_rewrite(&plan, 0).unwrap();
        assert_eq!(swapped.steps(), plan_of(&[(2, 2), (1, 4), (2, 2)]).steps());
        // both evaluate to the same series
        let a = build_eta_product(&plan, policy());
        let b = build_eta_product(&swapped, policy());
        assert_eq!(a, b);
        // mismatched exponents do not match the pattern
        assert!(exchange_rewrite(&plan_of(&[(1, 2), (2, 5), (1, 2)]), 0).is_none());
    }

    #[test]
    fn drop_accounting_routes_agree() {
        let lam = Weight::from_ints(&[2, 1]);
        for rec in enumerate_solutions(&lam, policy()) {
            let a = rec.drop_from_plan(3);
            let b = rec.drop_from_weight(&lam);
            assert_eq!(a, b, "index {:?}", rec.index);
            assert!(a.is_some());
        }
    }

    #[test]
    fn default_policy_scales_with_weight() {
        let lam = Weight::from_ints(&[2, 1]);
        // max plan drop is 10 (the (1,1) candidate: 3 + 5 + 2)
        assert_eq!(default_policy(&lam).depth(), 24);
        let tiny = Weight::from_ints(&[-1, -1]);
        assert_eq!(default_policy(&tiny).depth(), 4);
    }
}
