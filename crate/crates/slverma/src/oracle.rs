//! The Verma module itself, in its PBW basis, and a brute-force
//! singular-vector finder.
//!
//! Everything the constructive solver produces is re-derivable here by
//! plain linear algebra: a weight space is enumerated explicitly, the
//! raising operators act termwise through the expanded commutation
//! formulas, and singular vectors are the joint kernel, computed by
//! exact rational Gaussian elimination with deterministic pivoting.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{is_nat, rat, ExtMonomial, Rational, Series, VarIndex};
use crate::operators::Weight;
use crate::{Error, Result};

/// An element of the exponent semigroup: `alpha` with `E^alpha =
/// E_{2,1}^{a_{2,1}} E_{3,1}^{a_{3,1}} E_{3,2}^{a_{3,2}} ...` in the
/// fixed PBW order.  Absent entries are 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    alpha: BTreeMap<VarIndex, u32>,
}

impl MultiIndex {
    /// The empty index, i.e. the highest-weight vector itself.
    pub fn empty() -> Self {
        MultiIndex::default()
    }

    pub fn unit(v: VarIndex) -> Self {
        let mut m = MultiIndex::empty();
        m.set(v, 1);
        m
    }

    pub fn from_entries<I: IntoIterator<Item = (VarIndex, u32)>>(iter: I) -> Self {
        let mut m = MultiIndex::empty();
        for (v, e) in iter {
            m.set(v, e);
        }
        m
    }

    pub fn get(&self, v: &VarIndex) -> u32 {
        self.alpha.get(v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: VarIndex, e: u32) {
        if e == 0 {
            self.alpha.remove(&v);
        } else {
            self.alpha.insert(v, e);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarIndex, &u32)> {
        self.alpha.iter()
    }

    /// `alpha + delta * epsilon_v`, or `None` if the entry would go
    /// negative.
    pub fn shifted(&self, v: VarIndex, delta: i64) -> Option<Self> {
        let cur = self.get(&v) as i64;
        let new = cur + delta;
        if new < 0 {
            return None;
        }
        let mut m = self.clone();
        m.set(v, new as u32);
        Some(m)
    }

    /// The total root subtracted from the highest weight: `epsilon_{i,j}`
    /// spans the simple roots `j, j+1, ..., i-1`.
    pub fn weight_drop(&self, n: usize) -> WeightDrop {
        let mut k = vec![0u32; n - 1];
        for (v, &e) in &self.alpha {
            for p in v.col..v.row {
                k[p as usize - 1] += e;
            }
        }
        WeightDrop { k }
    }

    /// Canonical comparison in the PBW variable order, lowest first.
    pub fn cmp_canonical(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let vars: std::collections::BTreeSet<&VarIndex> =
            self.alpha.keys().chain(other.alpha.keys()).collect();
        for v in vars {
            match self.get(v).cmp(&other.get(v)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_canonical(other)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, e) in &self.alpha {
            if *e == 1 {
                write!(f, "E_{{{},{}}} ", v.row, v.col)?;
            } else {
                write!(f, "E_{{{},{}}}^{e} ", v.row, v.col)?;
            }
        }
        write!(f, "v")
    }
}

/// Count of each simple root subtracted from the highest weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightDrop {
    k: Vec<u32>,
}

impl WeightDrop {
    pub fn new(k: Vec<u32>) -> Self {
        WeightDrop { k }
    }

    pub fn zero(n: usize) -> Self {
        WeightDrop { k: vec![0; n - 1] }
    }

    pub fn entries(&self) -> &[u32] {
        &self.k
    }

    pub fn get(&self, i: usize) -> u32 {
        self.k[i - 1]
    }

    pub fn total(&self) -> u32 {
        self.k.iter().sum()
    }
}

impl fmt::Display for WeightDrop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.k.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A finite linear combination of PBW monomials `E^alpha v_lambda`.
#[derive(Debug, Clone, Default)]
pub struct PBWVector {
    terms: BTreeMap<MultiIndex, Rational>,
}

impl PartialEq for PBWVector {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for PBWVector {}

impl PBWVector {
    pub fn zero() -> Self {
        PBWVector::default()
    }

    /// The highest-weight vector `v_lambda`.
    pub fn highest_weight() -> Self {
        PBWVector::monomial(MultiIndex::empty(), Rational::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Rational) -> Self {
        let mut v = PBWVector::zero();
        v.add_term(alpha, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in other.iter() {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PBWVector::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    /// Scales the first term (in PBW order) to coefficient 1.
    pub fn normalized(&self) -> Self {
        match self.terms.iter().next() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Rational::one() / c.clone())),
        }
    }
}

impl fmt::Display for PBWVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if first {
                first = false;
                if c.is_one() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "{c} {a}")?;
                }
            } else {
                let (sign, abs) = if c.is_negative() {
                    ("-", -c.clone())
                } else {
                    ("+", c.clone())
                };
                if abs.is_one() {
                    write!(f, " {sign} {a}")?;
                } else {
                    write!(f, " {sign} {abs} {a}")?;
                }
            }
        }
        Ok(())
    }
}

/// The raising action `E_{i,i+1}` on a PBW vector, termwise:
///
/// ```text
/// E_{i,i+1} E^a v = sum_{j<i} a_{i+1,j} E^{a+e_{i,j}-e_{i+1,j}} v
///   - sum_{j>i+1} a_{j,i} E^{a+e_{j,i+1}-e_{j,i}} v
///   + a_{i+1,i} (lambda_i + 1 - sum_{j>i} a_{j,i} + sum_{j>i+1} a_{j,i+1}) E^{a-e_{i+1,i}} v
/// ```
pub fn raise(i: usize, lam: &Weight, v: &PBWVector) -> Result<PBWVector> {
    let n = lam.n();
    if i < 1 || i > n - 1 {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    let mut out = PBWVector::zero();
    for (alpha, c) in v.iter() {
        for j in 1..i {
            let a = alpha.get(&VarIndex::new(i as u32 + 1, j as u32));
            if a == 0 {
                continue;
            }
            let beta = alpha
                .shifted(VarIndex::new(i as u32, j as u32), 1)
                .and_then(|m| m.shifted(VarIndex::new(i as u32 + 1, j as u32), -1))
                .expect("entry checked nonzero");
            out.add_term(beta, c * rat(a as i64));
        }
        for j in (i + 2)..=n {
            let a = alpha.get(&VarIndex::new(j as u32, i as u32));
            if a == 0 {
                continue;
            }
            let beta = alpha
                .shifted(VarIndex::new(j as u32, i as u32 + 1), 1)
                .and_then(|m| m.shifted(VarIndex::new(j as u32, i as u32), -1))
                .expect("entry checked nonzero");
            out.add_term(beta, c * rat(-(a as i64)));
        }
        let a_low = alpha.get(&VarIndex::simple(i));
        if a_low > 0 {
            let mut factor = lam.get(i).clone() + Rational::one();
            for j in (i + 1)..=n {
                factor -= rat(alpha.get(&VarIndex::new(j as u32, i as u32)) as i64);
            }
            for j in (i + 2)..=n {
                factor += rat(alpha.get(&VarIndex::new(j as u32, i as u32 + 1)) as i64);
            }
            let beta = alpha
                .shifted(VarIndex::simple(i), -1)
                .expect("entry checked nonzero");
            out.add_term(beta, c * rat(a_low as i64) * factor);
        }
    }
    Ok(out)
}

/// The lowering action `E_{i+1,i}`:
///
/// ```text
/// E_{i+1,i} E^a v = E^{a+e_{i+1,i}} v + sum_{j<i} a_{i,j} E^{a+e_{i+1,j}-e_{i,j}} v
/// ```
pub fn lower(i: usize, v: &PBWVector) -> PBWVector {
    let mut out = PBWVector::zero();
    for (alpha, c) in v.iter() {
        let direct = alpha.shifted(VarIndex::simple(i), 1).unwrap();
        out.add_term(direct, c.clone());
        for j in 1..i {
            let a = alpha.get(&VarIndex::new(i as u32, j as u32));
            if a == 0 {
                continue;
            }
            let beta = alpha
                .shifted(VarIndex::new(i as u32 + 1, j as u32), 1)
                .and_then(|m| m.shifted(VarIndex::new(i as u32, j as u32), -1))
                .expect("entry checked nonzero");
            out.add_term(beta, c * rat(a as i64));
        }
    }
    out
}

/// The weight of `E^alpha v_lambda`: its `h_i`-eigenvalue vector.
pub fn weight_of(lam: &Weight, alpha: &MultiIndex) -> Vec<Rational> {
    let n = lam.n();
    (1..n)
        .map(|i| {
            let mut w = lam.get(i).clone();
            for p in 1..i {
                w += rat(alpha.get(&VarIndex::new(i as u32, p as u32)) as i64);
                w -= rat(alpha.get(&VarIndex::new(i as u32 + 1, p as u32)) as i64);
            }
            for j in (i + 2)..=n {
                w += rat(alpha.get(&VarIndex::new(j as u32, i as u32 + 1)) as i64);
                w -= rat(alpha.get(&VarIndex::new(j as u32, i as u32)) as i64);
            }
            w -= rat(2 * alpha.get(&VarIndex::simple(i)) as i64);
            w
        })
        .collect()
}

/// The basis isomorphism `tau(E^alpha v) = x^alpha`.
pub fn tau(v: &PBWVector) -> Series {
    let mut out = Series::zero();
    for (alpha, c) in v.iter() {
        let m = ExtMonomial::from_exps(alpha.iter().map(|(v, &e)| (*v, rat(e as i64))));
        out.add_term(m, c.clone());
    }
    out
}

/// Inverse of [`tau`] on polynomial series.
pub fn tau_inv(s: &Series) -> Result<PBWVector> {
    let mut out = PBWVector::zero();
    for (m, c) in s.iter() {
        let mut alpha = MultiIndex::empty();
        for (v, e) in m.iter() {
            if !is_nat(e) {
                return Err(Error::NotPolynomial {
                    var: *v,
                    exp: e.clone(),
                });
            }
            let e32 = e
                .to_integer()
                .try_into()
                .map_err(|_| Error::Parse(format!("exponent {e} too large")))?;
            alpha.set(*v, e32);
        }
        out.add_term(alpha, c.clone());
    }
    Ok(out)
}

/// All `alpha` whose root-sum equals the drop, in deterministic
/// (lexicographic, PBW variable order) order.
pub fn weight_space_basis(n: usize, drop: &WeightDrop) -> Vec<MultiIndex> {
    fn recurse(
        vars: &[VarIndex],
        pos: usize,
        remaining: &mut [i64],
        current: &mut MultiIndex,
        out: &mut Vec<MultiIndex>,
    ) {
        if pos == vars.len() {
            if remaining.iter().all(|&r| r == 0) {
                out.push(current.clone());
            }
            return;
        }
        let v = vars[pos];
        let span: Vec<usize> = (v.col as usize..v.row as usize).collect();
        let max = span.iter().map(|&p| remaining[p - 1]).min().unwrap_or(0);
        for e in 0..=max.max(0) {
            for &p in &span {
                remaining[p - 1] -= e;
            }
            current.set(v, e as u32);
            recurse(vars, pos + 1, remaining, current, out);
            for &p in &span {
                remaining[p - 1] += e;
            }
            current.set(v, 0);
        }
    }
    let vars = VarIndex::all(n);
    let mut remaining: Vec<i64> = drop.entries().iter().map(|&v| v as i64).collect();
    let mut out = Vec::new();
    recurse(&vars, 0, &mut remaining, &mut MultiIndex::empty(), &mut out);
    out.sort();
    out
}

/// Exact rational kernel of the stacked raising maps on a weight space:
/// a basis of the singular vectors at the given drop, each normalized so
/// its first nonzero coefficient (in basis order) is 1.
pub fn singular_kernel(lam: &Weight, drop: &WeightDrop) -> Result<Vec<PBWVector>> {
    let n = lam.n();
    let basis = weight_space_basis(n, drop);
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    // Row key: (raising index, image basis element).  Built lazily from
    // the images themselves; empty target spaces contribute rows too.
    let mut rows: BTreeMap<(usize, MultiIndex), Vec<Rational>> = BTreeMap::new();
    for (k, alpha) in basis.iter().enumerate() {
        for i in 1..n {
            let image = raise(i, lam, &PBWVector::monomial(alpha.clone(), Rational::one()))?;
            for (beta, c) in image.iter() {
                let row = rows
                    .entry((i, beta.clone()))
                    .or_insert_with(|| vec![Rational::zero(); basis.len()]);
                row[k] = c.clone();
            }
        }
    }
    let matrix: Vec<Vec<Rational>> = rows.into_values().collect();
    let kernel = rational_kernel(&matrix, basis.len());
    Ok(kernel
        .into_iter()
        .map(|coeffs| {
            let mut v = PBWVector::zero();
            for (k, c) in coeffs.into_iter().enumerate() {
                v.add_term(basis[k].clone(), c);
            }
            normalize_first_nonzero(v, &basis)
        })
        .collect())
}

fn normalize_first_nonzero(v: PBWVector, basis: &[MultiIndex]) -> PBWVector {
    for alpha in basis {
        let c = v.coeff(alpha);
        if !c.is_zero() {
            return v.scale(&(Rational::one() / c));
        }
    }
    v
}

/// Nullspace basis of a rational matrix, by Gaussian elimination with
/// first-nonzero pivoting.  Returns one vector per free column, in
/// column order.
pub fn rational_kernel(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let nrows = a.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| !a[r][col].is_zero());
        let Some(pr) = pivot else { continue };
        a.swap(rank, pr);
        let inv = Rational::one() / a[rank][col].clone();
        for c in col..ncols {
            a[rank][c] *= inv.clone();
        }
        for r in 0..nrows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..ncols {
                    let delta = f.clone() * a[rank][c].clone();
                    a[r][c] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for col in 0..ncols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = -a[r][free].clone();
            }
        }
        out.push(v);
    }
    out
}

/// Is `v` a rational linear combination of `vectors`?
pub fn in_span(vectors: &[PBWVector], v: &PBWVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut support: std::collections::BTreeSet<MultiIndex> = std::collections::BTreeSet::new();
    for w in vectors.iter().chain(std::iter::once(v)) {
        support.extend(w.iter().map(|(a, _)| a.clone()));
    }
    let support: Vec<MultiIndex> = support.into_iter().collect();
    // augmented system: columns = vectors, last column = v
    let ncols = vectors.len() + 1;
    let rows: Vec<Vec<Rational>> = support
        .iter()
        .map(|alpha| {
            let mut row: Vec<Rational> = vectors.iter().map(|w| w.coeff(alpha)).collect();
            row.push(v.coeff(alpha));
            row
        })
        .collect();
    // consistent iff the kernel contains a vector with nonzero last entry
    rational_kernel(&rows, ncols)
        .iter()
        .any(|k| !k[ncols - 1].is_zero())
}
