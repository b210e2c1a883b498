//! Exact truncated Laurent series in `q^(1/D)`.
//!
//! A [`LatticeSeries`] stores the coefficients of `q^(k/D)` for
//! `min_exp <= k <= trunc` densely. Everything above `trunc` is unknown, and
//! asking for it is an error rather than a silent zero. All binary operations
//! require both operands to share the same scale `D`; mixing lattices needs an
//! explicit [`LatticeSeries::rescale`].
//!
//! Truncation is tracked pessimistically. For a product the known range is
//! `min(trunc_a + min_b, trunc_b + min_a)`, which is exactly the largest index
//! not touched by either operand's unknown tail.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of `q`, an exact rational.
pub type Exponent = Rational64;

/// Shorthand for the exponent `num/den`.
pub fn exponent(num: i64, den: i64) -> Exponent {
    Rational64::new(num, den)
}

/// Lattice index of `e` at scale `scale`, i.e. `e * scale` when integral.
pub fn lattice_index(e: Exponent, scale: u32) -> Result<i64> {
    let scaled = e * Rational64::from_integer(i64::from(scale));
    if scaled.is_integer() {
        Ok(scaled.to_integer())
    } else {
        Err(Error::OffLattice { exponent: e, scale })
    }
}

/// Renders an exponent as `k/D` in lowest terms, or as a bare integer.
pub fn format_exponent(e: Exponent) -> String {
    e.to_string()
}

/// A coefficient mismatch between two series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub index: i64,
    pub scale: u32,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl Witness {
    pub fn exponent(&self) -> Exponent {
        Rational64::new(self.index, i64::from(self.scale))
    }
}

/// Outcome of comparing two series up to a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    Equal,
    Differ(Witness),
}

impl Agreement {
    pub fn is_equal(&self) -> bool {
        matches!(self, Agreement::Equal)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Agreement::Equal => None,
            Agreement::Differ(w) => Some(w),
        }
    }
}

/// Wire form of a series: `{scale, min_exp, trunc, coeffs}` with decimal
/// string coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub scale: u32,
    pub min_exp: i64,
    pub trunc: i64,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSeries {
    scale: u32,
    min_exp: i64,
    trunc: i64,
    coeffs: Vec<BigInt>,
}

impl LatticeSeries {
    /// The canonical zero known through `trunc`.
    pub fn zero(scale: u32, trunc: i64) -> Self {
        assert!(scale > 0, "lattice scale must be positive");
        LatticeSeries {
            scale,
            min_exp: trunc + 1,
            trunc,
            coeffs: Vec::new(),
        }
    }

    pub fn one(scale: u32, trunc: i64) -> Self {
        Self::from_coeffs(scale, 0, trunc, vec![BigInt::one()])
    }

    pub fn constant(c: impl Into<BigInt>, scale: u32, trunc: i64) -> Self {
        Self::from_coeffs(scale, 0, trunc, vec![c.into()])
    }

    /// `c * q^e` truncated at `trunc`.
    pub fn monomial(c: impl Into<BigInt>, e: Exponent, scale: u32, trunc: i64) -> Result<Self> {
        let idx = lattice_index(e, scale)?;
        Ok(Self::from_coeffs(scale, idx, trunc, vec![c.into()]))
    }

    /// Builds a series from coefficients starting at lattice index `min_exp`.
    /// Entries past `trunc` are dropped; missing entries up to `trunc` are
    /// known zeros.
    pub fn from_coeffs(scale: u32, min_exp: i64, trunc: i64, coeffs: Vec<BigInt>) -> Self {
        assert!(scale > 0, "lattice scale must be positive");
        let mut s = LatticeSeries {
            scale,
            min_exp,
            trunc,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Builds a series from sparse `(lattice index, coefficient)` terms.
    pub fn from_terms<C: Into<BigInt> + Clone>(scale: u32, terms: &[(i64, C)], trunc: i64) -> Self {
        let lo = match terms.iter().map(|(i, _)| *i).min() {
            Some(lo) if lo <= trunc => lo,
            _ => return Self::zero(scale, trunc),
        };
        let mut coeffs = vec![BigInt::zero(); (trunc - lo + 1) as usize];
        for (i, c) in terms {
            if *i <= trunc {
                coeffs[(i - lo) as usize] += c.clone().into();
            }
        }
        Self::from_coeffs(scale, lo, trunc, coeffs)
    }

    fn normalize(&mut self) {
        let keep = (self.trunc - self.min_exp + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.min_exp = self.trunc + 1;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.min_exp += k as i64;
                self.coeffs
                    .resize((self.trunc - self.min_exp + 1) as usize, BigInt::zero());
            }
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Lattice index of the lowest nonzero coefficient (`trunc + 1` for zero).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Dense coefficients for indices `min_exp..=trunc`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Coefficient at a lattice index.
    pub fn coeff_at(&self, index: i64) -> Result<BigInt> {
        if index > self.trunc {
            return Err(Error::BeyondTruncation {
                index,
                trunc: self.trunc,
            });
        }
        if index < self.min_exp {
            return Ok(BigInt::zero());
        }
        Ok(self.coeffs[(index - self.min_exp) as usize].clone())
    }

    /// Coefficient of `q^e`.
    pub fn coefficient(&self, e: Exponent) -> Result<BigInt> {
        self.coeff_at(lattice_index(e, self.scale)?)
    }

    /// Nonzero `(lattice index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.min_exp + k as i64, c))
    }

    fn check_scale(&self, other: &Self) -> Result<()> {
        if self.scale == other.scale {
            Ok(())
        } else {
            Err(Error::ScaleMismatch {
                left: self.scale,
                right: other.scale,
            })
        }
    }

    fn get(&self, index: i64) -> Option<&BigInt> {
        if index < self.min_exp || index > self.trunc {
            None
        } else {
            self.coeffs.get((index - self.min_exp) as usize)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_scale(other)?;
        let trunc = self.trunc.min(other.trunc);
        let lo = self.min_exp.min(other.min_exp).min(trunc + 1);
        let coeffs = (lo..=trunc)
            .map(|i| {
                let mut c = self.get(i).cloned().unwrap_or_default();
                if let Some(d) = other.get(i) {
                    c += d;
                }
                c
            })
            .collect();
        Ok(Self::from_coeffs(self.scale, lo, trunc, coeffs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&-other)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_scale(other)?;
        let trunc = (self.trunc + other.min_exp).min(other.trunc + self.min_exp);
        let lo = self.min_exp + other.min_exp;
        if self.is_zero() || other.is_zero() || trunc < lo {
            return Ok(Self::zero(self.scale, trunc));
        }
        let len = (trunc - lo + 1) as usize;
        let coeffs = convolve(&self.coeffs, &other.coeffs, len);
        Ok(Self::from_coeffs(self.scale, lo, trunc, coeffs))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one(self.scale, self.trunc));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies by the exact monomial `c * q^(index/D)`.
    pub fn mul_monomial(&self, c: &BigInt, index: i64) -> Self {
        if c.is_zero() {
            return Self::zero(self.scale, self.trunc + index);
        }
        Self::from_coeffs(
            self.scale,
            self.min_exp + index,
            self.trunc + index,
            self.coeffs.iter().map(|x| x * c).collect(),
        )
    }

    /// Multiplies by `q^(index/D)`.
    pub fn shift(&self, index: i64) -> Self {
        LatticeSeries {
            scale: self.scale,
            min_exp: self.min_exp + index,
            trunc: self.trunc + index,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplies by an exact Laurent polynomial. The known range shrinks by
    /// the polynomial's lowest exponent when that exponent is negative and
    /// grows when it is positive.
    pub fn mul_poly(&self, poly: &Polynomial) -> Result<Self> {
        if self.scale != poly.scale {
            return Err(Error::ScaleMismatch {
                left: self.scale,
                right: poly.scale,
            });
        }
        let Some(order) = poly.order() else {
            return Ok(Self::zero(self.scale, self.trunc));
        };
        let trunc = self.trunc + order;
        if self.is_zero() {
            return Ok(Self::zero(self.scale, trunc));
        }
        let lo = self.min_exp + order;
        if trunc < lo {
            return Ok(Self::zero(self.scale, trunc));
        }
        let mut coeffs = vec![BigInt::zero(); (trunc - lo + 1) as usize];
        for (e, c) in &poly.terms {
            for (k, a) in self.coeffs.iter().enumerate() {
                let idx = self.min_exp + k as i64 + e;
                if idx > trunc {
                    break;
                }
                if !a.is_zero() {
                    coeffs[(idx - lo) as usize] += a * c;
                }
            }
        }
        Ok(Self::from_coeffs(self.scale, lo, trunc, coeffs))
    }

    /// In-place multiplication by `(1 + c q^(index/D))` with `index > 0`.
    pub(crate) fn mul_binomial_in_place(&mut self, c: i64, index: i64) {
        debug_assert!(index > 0);
        if self.is_zero() || c == 0 {
            return;
        }
        let n = self.coeffs.len();
        let step = index as usize;
        if step >= n {
            return;
        }
        for k in (step..n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(k);
            let src = &lo[k - step];
            if src.is_zero() {
                continue;
            }
            match c {
                1 => hi[0] += src,
                -1 => hi[0] -= src,
                _ => hi[0] += src * c,
            }
        }
    }

    /// Lowers the truncation order to `trunc` (no-op if already lower).
    pub fn truncated(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        Self::from_coeffs(self.scale, self.min_exp, trunc, self.coeffs.clone())
    }

    /// Multiplicative inverse; the lowest coefficient must be `+1` or `-1`.
    pub fn invert(&self) -> Result<Self> {
        let Some(lead) = self.leading_coefficient() else {
            return Err(Error::ZeroSeries);
        };
        if !lead.abs().is_one() {
            return Err(Error::NonUnit(lead.to_string()));
        }
        let lead_sign: i64 = if lead.is_positive() { 1 } else { -1 };
        let m = self.min_exp;
        let len = self.coeffs.len();
        let coeffs = invert_unit(&self.coeffs, lead_sign, len);
        Ok(Self::from_coeffs(self.scale, -m, self.trunc - 2 * m, coeffs))
    }

    /// `self / other` via multiplication by the inverse.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.invert()?)
    }

    /// Applies `q -> q^k` and expresses the result at `out_scale`.
    pub fn substitute_power(&self, k: Exponent, out_scale: u32) -> Result<Self> {
        if k <= Rational64::zero() {
            return Err(Error::invalid(format!(
                "substitution power must be positive, got {k}"
            )));
        }
        if out_scale == 0 {
            return Err(Error::invalid("lattice scale must be positive"));
        }
        // index i at scale D maps to i * k * D' / D at scale D'
        let factor = k * Rational64::new(i64::from(out_scale), i64::from(self.scale));
        let unknown_from = Rational64::from_integer(self.trunc + 1) * factor;
        let trunc = unknown_from.ceil().to_integer() - 1;
        let mut terms = Vec::new();
        for (i, c) in self.terms() {
            let target = Rational64::from_integer(i) * factor;
            if !target.is_integer() {
                return Err(Error::OffLattice {
                    exponent: Rational64::new(i, i64::from(self.scale)) * k,
                    scale: out_scale,
                });
            }
            terms.push((target.to_integer(), c.clone()));
        }
        Ok(Self::from_terms(out_scale, &terms, trunc))
    }

    /// The same series viewed on the lattice `1/out_scale`.
    pub fn rescale(&self, out_scale: u32) -> Result<Self> {
        self.substitute_power(Rational64::one(), out_scale)
    }

    /// `sum_n a_(m n + r) q^n` for an integer-lattice series.
    pub fn extract_progression(&self, r: i64, m: i64) -> Result<Self> {
        if self.scale != 1 {
            return Err(Error::NotIntegral(self.scale));
        }
        if m <= 0 {
            return Err(Error::invalid(format!("progression modulus must be positive, got {m}")));
        }
        let hi = Integer::div_floor(&(self.trunc - r), &m);
        let lo = Integer::div_ceil(&(self.min_exp.min(self.trunc + 1) - r), &m);
        let coeffs = (lo..=hi)
            .map(|n| self.get(m * n + r).cloned().unwrap_or_default())
            .collect();
        Ok(Self::from_coeffs(1, lo, hi, coeffs))
    }

    /// First index (up to both truncation orders) where the series differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Witness>> {
        self.check_scale(other)?;
        let hi = self.trunc.min(other.trunc);
        let lo = self.min_exp.min(other.min_exp);
        for i in lo..=hi {
            let a = self.get(i).cloned().unwrap_or_default();
            let b = other.get(i).cloned().unwrap_or_default();
            if a != b {
                return Ok(Some(Witness {
                    index: i,
                    scale: self.scale,
                    lhs: a,
                    rhs: b,
                }));
            }
        }
        Ok(None)
    }

    /// Compares through lattice index `order`; both operands must be known
    /// that far.
    pub fn eq_to_order(&self, other: &Self, order: i64) -> Result<Agreement> {
        self.check_scale(other)?;
        for s in [self, other] {
            if s.trunc < order {
                return Err(Error::BeyondTruncation {
                    index: order,
                    trunc: s.trunc,
                });
            }
        }
        let diff = self.truncated(order).first_difference(&other.truncated(order))?;
        Ok(match diff {
            None => Agreement::Equal,
            Some(w) => Agreement::Differ(w),
        })
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            scale: self.scale,
            min_exp: self.min_exp,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_record(record: &SeriesRecord) -> Result<Self> {
        if record.scale == 0 {
            return Err(Error::invalid("lattice scale must be positive"));
        }
        let coeffs = record
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::invalid(format!("bad coefficient `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(record.scale, record.min_exp, record.trunc, coeffs))
    }
}

impl Neg for &LatticeSeries {
    type Output = LatticeSeries;

    fn neg(self) -> LatticeSeries {
        LatticeSeries {
            scale: self.scale,
            min_exp: self.min_exp,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LatticeSeries {
    type Output = LatticeSeries;

    fn neg(self) -> LatticeSeries {
        -&self
    }
}

impl fmt::Display for LatticeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms() {
            let e = Rational64::new(i, i64::from(self.scale));
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}*")?;
            }
            write_power(f, e)?;
        }
        if !first {
            f.write_str(" + ")?;
        }
        f.write_str("O(")?;
        write_power(f, Rational64::new(self.trunc + 1, i64::from(self.scale)))?;
        f.write_str(")")
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, e: Exponent) -> fmt::Result {
    if e.is_one() {
        f.write_str("q")
    } else if e.is_integer() && e.to_integer() >= 0 {
        write!(f, "q^{}", e)
    } else {
        write!(f, "q^({})", e)
    }
}

/// An exact Laurent polynomial in `q^(1/D)`: sparse, never truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    scale: u32,
    terms: Vec<(i64, BigInt)>,
}

impl Polynomial {
    pub fn new<C: Into<BigInt>>(scale: u32, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        assert!(scale > 0, "lattice scale must be positive");
        let mut map = std::collections::BTreeMap::<i64, BigInt>::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        Polynomial {
            scale,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn one(scale: u32) -> Self {
        Self::new(scale, [(0, 1)])
    }

    pub fn monomial(c: impl Into<BigInt>, index: i64, scale: u32) -> Self {
        Self::new(scale, [(index, c.into())])
    }

    /// `1 - q^(index/D)`.
    pub fn one_minus(index: i64, scale: u32) -> Self {
        Self::new(scale, [(0, 1), (index, -1)])
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    /// Lowest lattice index with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.scale, other.scale, "polynomial scale mismatch");
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.push((e1 + e2, c1 * c2));
            }
        }
        Self::new(self.scale, out)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.scale, other.scale, "polynomial scale mismatch");
        Self::new(
            self.scale,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        )
    }

    pub fn to_series(&self, trunc: i64) -> LatticeSeries {
        LatticeSeries::from_terms(self.scale, &self.terms, trunc)
    }
}

/// Evaluates `build` at increasing working precision until the result is
/// known through `trunc`, then cuts it back to exactly `trunc`. Needed when
/// intermediate Laurent factors eat into the known range.
pub fn at_order<F>(trunc: i64, mut build: F) -> Result<LatticeSeries>
where
    F: FnMut(i64) -> Result<LatticeSeries>,
{
    let mut work = trunc;
    for _ in 0..8 {
        let s = build(work)?;
        if s.trunc() >= trunc {
            return Ok(s.truncated(trunc));
        }
        work += trunc - s.trunc();
    }
    Err(Error::PrecisionNotReached(trunc))
}

fn small_values(v: &[BigInt]) -> Option<(Vec<i64>, u64)> {
    let mut max = 0u64;
    let mut out = Vec::with_capacity(v.len());
    for c in v {
        let x = c.to_i64()?;
        max = max.max(x.unsigned_abs());
        out.push(x);
    }
    Some((out, max))
}

/// First `len` coefficients of the product of two dense arrays.
fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    if let (Some((sa, ma)), Some((sb, mb))) = (small_values(a), small_values(b)) {
        let terms = a.len().min(b.len()).max(1) as u128;
        let fits = u128::from(ma)
            .checked_mul(u128::from(mb))
            .and_then(|p| p.checked_mul(terms))
            .is_some_and(|bound| bound < (1u128 << 126));
        if fits {
            let mut acc = vec![0i128; len];
            for (i, &x) in sa.iter().enumerate().take(len) {
                if x == 0 {
                    continue;
                }
                let x = i128::from(x);
                for (slot, &y) in acc[i..].iter_mut().zip(sb.iter()) {
                    *slot += x * i128::from(y);
                }
            }
            return acc.into_iter().map(BigInt::from).collect();
        }
    }
    let mut acc = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (slot, y) in acc[i..].iter_mut().zip(b.iter()) {
            if !y.is_zero() {
                *slot += x * y;
            }
        }
    }
    acc
}

/// Power-series inverse of a unit-led coefficient array, first `len` terms.
fn invert_unit(u: &[BigInt], lead: i64, len: usize) -> Vec<BigInt> {
    let nonzero: Vec<usize> = (1..u.len().min(len)).filter(|&k| !u[k].is_zero()).collect();
    if let Some(out) = invert_unit_small(u, &nonzero, lead, len) {
        return out;
    }
    let lead = BigInt::from(lead);
    let mut r: Vec<BigInt> = Vec::with_capacity(len);
    r.push(lead.clone());
    for n in 1..len {
        let mut s = BigInt::zero();
        for &k in nonzero.iter().take_while(|&&k| k <= n) {
            s += &u[k] * &r[n - k];
        }
        r.push(-(&lead * s));
    }
    r
}

fn invert_unit_small(u: &[BigInt], nonzero: &[usize], lead: i64, len: usize) -> Option<Vec<BigInt>> {
    let small: Vec<i128> = nonzero
        .iter()
        .map(|&k| u[k].to_i128())
        .collect::<Option<_>>()?;
    let mut r: Vec<i128> = Vec::with_capacity(len);
    r.push(i128::from(lead));
    for n in 1..len {
        let mut s: i128 = 0;
        for (&k, &c) in nonzero.iter().zip(small.iter()) {
            if k > n {
                break;
            }
            s = s.checked_add(c.checked_mul(r[n - k])?)?;
        }
        r.push(-(i128::from(lead) * s));
    }
    Some(r.into_iter().map(BigInt::from).collect())
}
