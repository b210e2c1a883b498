//! The Andrews–Bressoud `p`-dissection of a Pochhammer quotient and the
//! vanishing-coefficient scans built on it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{at_order, LatticeSeries};
use crate::theta::{pochhammer, PochhammerSpec};

/// Parameters `(t, s, r, p)` of the dissection formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DissectionParams {
    pub t: i64,
    pub s: i64,
    pub r: i64,
    pub p: i64,
}

impl DissectionParams {
    pub fn new(t: i64, s: i64, r: i64, p: i64) -> Result<Self> {
        if t <= 0 || p <= 0 {
            return Err(Error::invalid(format!("t and p must be positive, got t={t}, p={p}")));
        }
        if !(0 < s && s < t) {
            return Err(Error::invalid(format!("need 0 < s < t, got s={s}, t={t}")));
        }
        if !(0 < r && r < t) {
            return Err(Error::invalid(format!("need 0 < r < t, got r={r}, t={t}")));
        }
        if r.gcd(&p) != 1 {
            return Err(Error::invalid(format!("gcd(r, p) must be 1, got r={r}, p={p}")));
        }
        Ok(DissectionParams { t, s, r, p })
    }

    /// Factor exponents of the left side.
    pub fn lhs_factors(&self) -> QuotientFactors {
        let DissectionParams { t, s, r, .. } = *self;
        QuotientFactors {
            shift: 0,
            numerator: vec![t, t, r + s, t - r - s],
            denominator: vec![s, t - s, r, t - r],
            modulus: t,
        }
    }

    /// Factor exponents of the `p` terms on the right side.
    pub fn term_factors(&self) -> Vec<QuotientFactors> {
        let DissectionParams { t, s, r, p } = *self;
        (0..p)
            .map(|j| QuotientFactors {
                shift: j * r,
                numerator: vec![p * t, p * t, p * r + s + j * t, (p - j) * t - p * r - s],
                denominator: vec![j * t + s, (p - j) * t - s, p * r, (t - r) * p],
                modulus: p * t,
            })
            .collect()
    }
}

/// `q^shift * prod (q^n; q^M)_inf / prod (q^d; q^M)_inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientFactors {
    pub shift: i64,
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    pub modulus: i64,
}

impl QuotientFactors {
    /// Expands the quotient through `trunc`. A zero start in the numerator
    /// makes the whole term vanish.
    pub fn expand(&self, trunc: i64) -> Result<LatticeSeries> {
        let inner = pochhammer_quotient(&self.numerator, &self.denominator, self.modulus, trunc - self.shift)?;
        Ok(inner.shift(self.shift))
    }
}

/// `prod (q^n; q^M)_inf / prod (q^d; q^M)_inf` on the integer lattice.
pub fn pochhammer_quotient(
    numerator: &[i64],
    denominator: &[i64],
    modulus: i64,
    trunc: i64,
) -> Result<LatticeSeries> {
    at_order(trunc, |t| {
        let product = |starts: &[i64]| -> Result<LatticeSeries> {
            let mut acc = LatticeSeries::one(1, t);
            for &e in starts {
                acc = acc.mul(&pochhammer(&PochhammerSpec::int(e, modulus), 1, t)?)?;
            }
            Ok(acc)
        };
        let num = product(numerator)?;
        if num.is_zero() {
            return Ok(num);
        }
        num.div(&product(denominator)?)
    })
}

pub fn dissection_lhs(params: &DissectionParams, trunc: i64) -> Result<LatticeSeries> {
    params.lhs_factors().expand(trunc)
}

/// The `p` right-hand terms, each known through `trunc`.
pub fn dissection_terms(params: &DissectionParams, trunc: i64) -> Result<Vec<LatticeSeries>> {
    params.term_factors().iter().map(|f| f.expand(trunc)).collect()
}

/// Left side minus the sum of the right-hand terms.
pub fn verify_dissection(params: &DissectionParams, trunc: i64) -> Result<LatticeSeries> {
    let mut acc = dissection_lhs(params, trunc)?;
    for term in dissection_terms(params, trunc)? {
        acc = acc.sub(&term)?;
    }
    Ok(acc)
}

/// The three dissection instances `(t, s, r, p)` with `t = 18, 26, 30`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremTag {
    T21,
    T22,
    T23,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 3] = [TheoremTag::T21, TheoremTag::T22, TheoremTag::T23];

    pub fn params(self) -> DissectionParams {
        let (t, s, r, p) = match self {
            TheoremTag::T21 => (18, 9, 5, 9),
            TheoremTag::T22 => (26, 13, 7, 13),
            TheoremTag::T23 => (30, 15, 7, 15),
        };
        DissectionParams { t, s, r, p }
    }

    /// Modulus `k` of the multiplier `(q^k; q^k)^2 / ...`.
    pub fn half_modulus(self) -> i64 {
        self.params().s
    }

    /// First quotient of the theorem, the target of the reduction.
    pub fn first_quotient(self) -> &'static QuotientEntry {
        let key = match self {
            TheoremTag::T21 => "T21.a",
            TheoremTag::T22 => "T22.a",
            TheoremTag::T23 => "T23.a",
        };
        QuotientEntry::get(key).expect("registry entry")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::T21 => "T21",
            TheoremTag::T22 => "T22",
            TheoremTag::T23 => "T23",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Which multiplier turns the dissection's left side into the theorem's
/// first quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionMultiplier {
    /// `(q^k; q^k)^2 / (q^(2k); q^(2k))^4`, which cancels every
    /// `(q^(2k); q^(2k))` factor.
    FourthPower,
    /// `(q^k; q^k)^2 / (q^(2k); q^(2k))^2`; leaves `(q^(2k); q^(2k))^2`
    /// behind, so the reduction fails from `q^(2k)` on.
    SquarePower,
}

/// `(lhs * multiplier, first quotient)` of a theorem's reduction step.
pub fn reduction_sides(
    tag: TheoremTag,
    trunc: i64,
    multiplier: ReductionMultiplier,
) -> Result<(LatticeSeries, LatticeSeries)> {
    let k = tag.half_modulus();
    let big_power = match multiplier {
        ReductionMultiplier::FourthPower => 4,
        ReductionMultiplier::SquarePower => 2,
    };
    let reduced = at_order(trunc, |t| {
        let lhs = dissection_lhs(&tag.params(), t)?;
        let small = pochhammer(&PochhammerSpec::int(k, k).with_power(2), 1, t)?;
        let big = pochhammer(&PochhammerSpec::int(2 * k, 2 * k).with_power(big_power), 1, t)?;
        lhs.mul(&small)?.div(&big)
    })?;
    Ok((reduced, tag.first_quotient().series(trunc)?))
}

/// `lhs * multiplier - first quotient`.
pub fn verify_reduction(
    tag: TheoremTag,
    trunc: i64,
    multiplier: ReductionMultiplier,
) -> Result<LatticeSeries> {
    let (reduced, quotient) = reduction_sides(tag, trunc, multiplier)?;
    reduced.sub(&quotient)
}

/// A two-over-two Pochhammer quotient with its claimed vanishing progression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientEntry {
    /// Series key, e.g. `T21.a`.
    pub series_key: &'static str,
    /// Claim key, e.g. `T21.i`.
    pub claim_key: &'static str,
    pub label: &'static str,
    pub numerator: [i64; 2],
    pub denominator: [i64; 2],
    pub modulus: i64,
    /// Claimed vanishing progression `m n + r` as `(r, m)`.
    pub progression: (i64, i64),
}

const fn entry(
    series_key: &'static str,
    claim_key: &'static str,
    label: &'static str,
    numerator: [i64; 2],
    denominator: [i64; 2],
    modulus: i64,
    progression: (i64, i64),
) -> QuotientEntry {
    QuotientEntry {
        series_key,
        claim_key,
        label,
        numerator,
        denominator,
        modulus,
        progression,
    }
}

pub const QUOTIENTS: [QuotientEntry; 13] = [
    entry("T21.a", "T21.i", "A1*", [4, 14], [5, 13], 18, (8, 9)),
    entry("T21.b", "T21.ii", "A3*", [2, 16], [7, 11], 18, (8, 9)),
    entry("T21.c", "T21.iii", "1/A4*", [8, 10], [1, 17], 18, (3, 9)),
    entry("T22.a", "T22.i", "B1*", [6, 20], [7, 19], 26, (11, 13)),
    entry("T22.b", "T22.ii", "1/B2*", [8, 18], [5, 21], 26, (11, 13)),
    entry("T22.c", "T22.iii", "B3*", [4, 22], [9, 17], 26, (7, 13)),
    entry("T22.d", "T22.iv", "1/B4*", [10, 16], [3, 23], 26, (7, 13)),
    entry("T22.e", "T22.v", "B5*", [2, 24], [11, 15], 26, (12, 13)),
    entry("T22.f", "T22.vi", "1/B6*", [12, 14], [1, 25], 26, (12, 13)),
    entry("T23.a", "T23.i", "1/C1*", [8, 22], [7, 23], 30, (2, 15)),
    entry("T23.b", "T23.ii", "C4*", [4, 26], [11, 19], 30, (9, 15)),
    entry("T23.c", "T23.iii", "C6*", [2, 28], [13, 17], 30, (4, 15)),
    entry("T23.d", "T23.iv", "1/C7*", [14, 16], [1, 29], 30, (14, 15)),
];

impl QuotientEntry {
    /// Looks up by series key (`T21.a`) or claim key (`T21.i`).
    pub fn get(key: &str) -> Result<&'static QuotientEntry> {
        QUOTIENTS
            .iter()
            .find(|q| q.series_key == key || q.claim_key == key)
            .ok_or_else(|| Error::UnknownName(key.to_string()))
    }

    pub fn series(&self, trunc: i64) -> Result<LatticeSeries> {
        pochhammer_quotient(&self.numerator, &self.denominator, self.modulus, trunc)
    }

    /// The reciprocal quotient (numerator and denominator swapped).
    pub fn reciprocal_series(&self, trunc: i64) -> Result<LatticeSeries> {
        pochhammer_quotient(&self.denominator, &self.numerator, self.modulus, trunc)
    }

    pub fn scan(&self, trunc: i64) -> Result<ScanOutcome> {
        let (r, m) = self.progression;
        vanish_scan(&self.series(trunc)?, r, m, trunc)
    }
}

/// `quotient_series(id, N)` by series or claim key.
pub fn quotient_series(key: &str, trunc: i64) -> Result<LatticeSeries> {
    QuotientEntry::get(key)?.series(trunc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    AllZero,
    FirstNonzero { n: i64, coefficient: BigInt },
}

impl ScanOutcome {
    pub fn is_all_zero(&self) -> bool {
        matches!(self, ScanOutcome::AllZero)
    }
}

/// Checks every coefficient at exponents `≡ r (mod m)` up to `trunc`.
pub fn vanish_scan(series: &LatticeSeries, r: i64, m: i64, trunc: i64) -> Result<ScanOutcome> {
    if series.scale() != 1 {
        return Err(Error::NotIntegral(series.scale()));
    }
    if m <= 0 || r < 0 || r >= m {
        return Err(Error::invalid(format!("progression {m}n+{r} out of range")));
    }
    if series.trunc() < trunc {
        return Err(Error::BeyondTruncation {
            index: trunc,
            trunc: series.trunc(),
        });
    }
    let first = Integer::div_ceil(&(series.min_exp() - r).max(0), &m) * m + r;
    let mut e = first;
    while e <= trunc {
        let c = series.coeff_at(e)?;
        if !c.is_zero() {
            return Ok(ScanOutcome::FirstNonzero { n: e, coefficient: c });
        }
        e += m;
    }
    Ok(ScanOutcome::AllZero)
}
