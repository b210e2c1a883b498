//! Ramanujan's Entry 12 continued fraction and its named specializations of
//! order 18, 26 and 30.
//!
//! A continued fraction is evaluated in the formal topology: convergents are
//! computed by the three-term recurrence and compared as truncated series.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{at_order, lattice_index, Agreement, Exponent, LatticeSeries, Polynomial};
use crate::theta::{pochhammer, theta_product, PochhammerSpec, SignedMonomial};

/// Default cap on convergent depth.
pub const DEFAULT_DEPTH_CAP: usize = 64;

type PartialTerms = dyn Fn(usize) -> (Polynomial, Polynomial) + Send + Sync;

/// `lead / (d_0 + n_1 / (d_1 + n_2 / (d_2 + ...)))` with exact polynomial
/// partial numerators `n_k` and denominators `d_k`.
#[derive(Clone)]
pub struct CfSpec {
    scale: u32,
    d0: Polynomial,
    lead_factor: Polynomial,
    partial: Arc<PartialTerms>,
}

impl fmt::Debug for CfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CfSpec")
            .field("scale", &self.scale)
            .field("d0", &self.d0)
            .field("lead_factor", &self.lead_factor)
            .finish_non_exhaustive()
    }
}

impl CfSpec {
    pub fn new<F>(scale: u32, d0: Polynomial, lead_factor: Polynomial, partial: F) -> Result<Self>
    where
        F: Fn(usize) -> (Polynomial, Polynomial) + Send + Sync + 'static,
    {
        if d0.scale() != scale || lead_factor.scale() != scale {
            return Err(Error::ScaleMismatch {
                left: scale,
                right: if d0.scale() != scale { d0.scale() } else { lead_factor.scale() },
            });
        }
        check_unit_constant(&d0, "d_0")?;
        Ok(CfSpec {
            scale,
            d0,
            lead_factor,
            partial: Arc::new(partial),
        })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn d0(&self) -> &Polynomial {
        &self.d0
    }

    pub fn lead_factor(&self) -> &Polynomial {
        &self.lead_factor
    }

    pub fn with_lead_factor(mut self, lead: Polynomial) -> Self {
        self.lead_factor = lead;
        self
    }

    /// `(n_k, d_k)` for `k >= 1`.
    pub fn partial_terms(&self, k: usize) -> (Polynomial, Polynomial) {
        assert!(k >= 1, "partial terms are numbered from 1");
        (self.partial)(k)
    }
}

fn check_unit_constant(p: &Polynomial, what: &str) -> Result<()> {
    let constant = p
        .terms()
        .iter()
        .find(|(e, _)| *e == 0)
        .map(|(_, c)| c.clone())
        .unwrap_or_default();
    if p.order() != Some(0) || constant.abs() != BigInt::from(1) {
        return Err(Error::invalid(format!(
            "{what} must have lowest term a unit constant"
        )));
    }
    Ok(())
}

fn binomial(c0: i64, e0: i64, c1: i64, e1: i64, scale: u32) -> Polynomial {
    Polynomial::new(scale, [(e0, c0), (e1, c1)])
}

fn admissible(a: SignedMonomial, b: SignedMonomial, qpow: Exponent) -> Result<()> {
    if qpow <= Rational64::zero() {
        return Err(Error::invalid(format!("q-power must be positive, got {qpow}")));
    }
    if a.exponent() + b.exponent() <= Rational64::zero() {
        return Err(Error::invalid(format!(
            "Entry 12 needs exponent(ab) > 0, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Entry 12 with `q -> q^qpow`:
/// `d_0 = 1 - ab`, `n_k = (a - b Q^(2k-1))(b - a Q^(2k-1))`,
/// `d_k = (1 - ab)(Q^(2k) + 1)` where `Q = q^qpow`.
pub fn entry12_cf(
    a: SignedMonomial,
    b: SignedMonomial,
    qpow: Exponent,
    scale: u32,
) -> Result<CfSpec> {
    admissible(a, b, qpow)?;
    let ai = a.index(scale)?;
    let bi = b.index(scale)?;
    let qi = lattice_index(qpow, scale)?;
    let (sa, sb) = (i64::from(a.sign()), i64::from(b.sign()));
    let ab = a.mul(b);
    let abi = ab.index(scale)?;
    let sab = i64::from(ab.sign());

    let one_minus_ab = binomial(1, 0, -sab, abi, scale);
    let d0 = one_minus_ab.clone();
    let partial = move |k: usize| {
        let k = k as i64;
        let odd = (2 * k - 1) * qi;
        let left = binomial(sa, ai, -sb, bi + odd, scale);
        let right = binomial(sb, bi, -sa, ai + odd, scale);
        let n = left.mul(&right);
        let d = one_minus_ab.mul(&binomial(1, 0, 1, 2 * k * qi, scale));
        (n, d)
    };
    CfSpec::new(scale, d0, Polynomial::one(scale), partial)
}

/// Product side of Entry 12 with `q -> q^qpow`:
/// `(a^2 Q^3; Q^4)(b^2 Q^3; Q^4) / ((a^2 Q; Q^4)(b^2 Q; Q^4))`.
pub fn entry12_lhs(
    a: SignedMonomial,
    b: SignedMonomial,
    qpow: Exponent,
    scale: u32,
    trunc: i64,
) -> Result<LatticeSeries> {
    admissible(a, b, qpow)?;
    let q = SignedMonomial::new(1, qpow);
    let base = q.pow(4);
    let factor = |lam: SignedMonomial, t: i64| pochhammer(&PochhammerSpec::signed(lam, base), scale, t);
    at_order(trunc, |t| {
        let num = factor(a.pow(2).mul(q.pow(3)), t)?.mul(&factor(b.pow(2).mul(q.pow(3)), t)?)?;
        let den = factor(a.pow(2).mul(q), t)?.mul(&factor(b.pow(2).mul(q), t)?)?;
        num.div(&den)
    })
}

/// Incremental evaluation of convergents by the three-term recurrence
/// `P_k = d_k P_(k-1) + n_k P_(k-2)` (same for `Q`), seeded so that depth 0
/// is `lead / d_0`.
pub struct Convergents<'a> {
    spec: &'a CfSpec,
    trunc: i64,
    depth: usize,
    p: (LatticeSeries, LatticeSeries),
    q: (LatticeSeries, LatticeSeries),
    lead: LatticeSeries,
    /// Set once some `n_k` vanishes: the fraction is finite and every later
    /// convergent equals the current one.
    terminated: bool,
}

impl<'a> Convergents<'a> {
    pub fn new(spec: &'a CfSpec, trunc: i64) -> Self {
        let s = spec.scale;
        Convergents {
            spec,
            trunc,
            depth: 0,
            p: (LatticeSeries::zero(s, trunc), LatticeSeries::one(s, trunc)),
            q: (LatticeSeries::one(s, trunc), spec.d0.to_series(trunc)),
            lead: spec.lead_factor.to_series(trunc),
            terminated: false,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Value of the current convergent, known through `trunc`.
    pub fn value(&self) -> Result<LatticeSeries> {
        let v = self.lead.mul(&self.p.1)?.div(&self.q.1)?;
        Ok(v.truncated(self.trunc))
    }

    /// Folds in the next partial quotient. A vanishing `n_k` ends the
    /// fraction; later calls only bump the depth.
    pub fn advance(&mut self) -> Result<()> {
        let k = self.depth + 1;
        if self.terminated {
            self.depth = k;
            return Ok(());
        }
        let (n, d) = self.spec.partial_terms(k);
        if n.is_zero() {
            self.terminated = true;
            self.depth = k;
            return Ok(());
        }
        match n.order() {
            Some(o) if o > 0 => {}
            _ => {
                return Err(Error::invalid(format!(
                    "partial numerator n_{k} must vanish or have positive order"
                )))
            }
        }
        check_unit_constant(&d, &format!("d_{k}"))?;
        let step = |pair: &(LatticeSeries, LatticeSeries)| -> Result<LatticeSeries> {
            let next = pair.1.mul_poly(&d)?.add(&pair.0.mul_poly(&n)?)?;
            Ok(next.truncated(self.trunc))
        };
        let p_next = step(&self.p)?;
        let q_next = step(&self.q)?;
        self.p = (std::mem::replace(&mut self.p.1, p_next.clone()), p_next);
        self.q = (std::mem::replace(&mut self.q.1, q_next.clone()), q_next);
        self.depth = k;
        Ok(())
    }
}

/// `lead * P_K / Q_K` through `trunc`.
pub fn convergent(spec: &CfSpec, depth: usize, trunc: i64) -> Result<LatticeSeries> {
    let mut walk = Convergents::new(spec, trunc);
    for _ in 0..depth {
        walk.advance()?;
    }
    walk.value()
}

/// Highest lattice index through which two series agree (capped at the
/// shorter truncation order).
pub fn agreement_order(a: &LatticeSeries, b: &LatticeSeries) -> Result<i64> {
    Ok(match a.first_difference(b)? {
        Some(w) => w.index - 1,
        None => a.trunc().min(b.trunc()),
    })
}

/// Agreement order between convergents `k-1` and `k` for `k = 1..=depth`.
pub fn agreement_profile(spec: &CfSpec, depth: usize, trunc: i64) -> Result<Vec<i64>> {
    let mut walk = Convergents::new(spec, trunc);
    let mut prev = walk.value()?;
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        walk.advance()?;
        let cur = walk.value()?;
        out.push(agreement_order(&prev, &cur)?);
        prev = cur;
    }
    Ok(out)
}

/// A convergent that has stopped changing through the requested order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilized {
    pub depth: usize,
    pub value: LatticeSeries,
}

/// Smallest `K <= depth_cap` whose convergents `K-1` and `K` agree through
/// `trunc`.
pub fn stabilized_value(spec: &CfSpec, trunc: i64, depth_cap: usize) -> Result<Stabilized> {
    if depth_cap == 0 {
        return Err(Error::invalid("depth cap must be at least 1"));
    }
    let mut walk = Convergents::new(spec, trunc);
    let mut prev = walk.value()?;
    let mut best = i64::MIN;
    for _ in 0..depth_cap {
        walk.advance()?;
        let cur = walk.value()?;
        if let Agreement::Equal = cur.eq_to_order(&prev, trunc)? {
            return Ok(Stabilized {
                depth: walk.depth(),
                value: cur,
            });
        }
        best = best.max(agreement_order(&prev, &cur)?);
        prev = cur;
    }
    Err(Error::NoStabilization {
        depth_cap,
        best_order: best,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    /// Modulus of the theta quotient: 18, 26 or 30.
    pub fn modulus(self) -> i64 {
        match self {
            Family::A => 18,
            Family::B => 26,
            Family::C => 30,
        }
    }

    pub fn count(self) -> usize {
        match self {
            Family::A => 4,
            Family::B => 6,
            Family::C => 7,
        }
    }

    /// `q -> q^(M/4)` substitution into Entry 12.
    pub fn qpow(self) -> Exponent {
        Rational64::new(self.modulus(), 4)
    }

    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
        }
    }
}

/// One of the seventeen continued fractions `A1..A4`, `B1..B6`, `C1..C7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NamedCf {
    family: Family,
    index: usize,
}

/// Working lattice of the recurrence (quarter powers of `q`).
pub const CF_WORK_SCALE: u32 = 4;
/// Lattice on which the named fractions live.
pub const CF_VALUE_SCALE: u32 = 2;

impl NamedCf {
    pub fn new(family: Family, index: usize) -> Result<Self> {
        if index == 0 || index > family.count() {
            return Err(Error::UnknownName(format!("{}{index}", family.letter())));
        }
        Ok(NamedCf { family, index })
    }

    pub fn all() -> Vec<NamedCf> {
        [Family::A, Family::B, Family::C]
            .into_iter()
            .flat_map(|f| (1..=f.count()).map(move |i| NamedCf { family: f, index: i }))
            .collect()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn key(&self) -> String {
        format!("{}{}", self.family.letter(), self.index)
    }

    /// `2i - 1`, the odd numerator shared by `a = q^((2i-1)/4)` and the
    /// `q^((2i-1)/2)` weight in the theta identities.
    pub fn odd(&self) -> i64 {
        2 * self.index as i64 - 1
    }

    /// Entry 12 arguments `(a, b)` with `ab = q^(M/4)`.
    pub fn entry12_args(&self) -> (SignedMonomial, SignedMonomial) {
        let m = self.family.modulus();
        (
            SignedMonomial::q(self.odd(), 4),
            SignedMonomial::q(m - self.odd(), 4),
        )
    }

    /// Exponent `c` of the lead factor `1 - q^c`; also the small exponent of
    /// the numerator theta function.
    pub fn lead_exponent(&self) -> i64 {
        (self.family.modulus() / 2 - self.odd()) / 2
    }

    /// `(numerator args, denominator args)` of `f(-q^c, -q^(M-c)) / f(-q^(h-c), -q^(h+c))`.
    pub fn theta_args(&self) -> [(SignedMonomial, SignedMonomial); 2] {
        let m = self.family.modulus();
        let h = m / 2;
        let c = self.lead_exponent();
        let mq = |e: i64| SignedMonomial::minus_q(e, 1);
        [(mq(c), mq(m - c)), (mq(h - c), mq(h + c))]
    }

    /// The continued fraction at the quarter-power working lattice.
    pub fn cf_spec(&self) -> Result<CfSpec> {
        let (a, b) = self.entry12_args();
        let lead = Polynomial::one_minus(self.lead_exponent() * i64::from(CF_WORK_SCALE), CF_WORK_SCALE);
        Ok(entry12_cf(a, b, self.family.qpow(), CF_WORK_SCALE)?.with_lead_factor(lead))
    }

    /// Closed form as a quotient of triple products.
    pub fn theta_quotient(&self, scale: u32, trunc: i64) -> Result<LatticeSeries> {
        let [(na, nb), (da, db)] = self.theta_args();
        at_order(trunc, |t| {
            theta_product(na, nb, scale, t)?.div(&theta_product(da, db, scale, t)?)
        })
    }

    /// `(1 - q^c)` times the Entry 12 product side; equals the theta quotient.
    pub fn product_form(&self, scale: u32, trunc: i64) -> Result<LatticeSeries> {
        let (a, b) = self.entry12_args();
        let lead = Polynomial::one_minus(lattice_index(Rational64::from_integer(self.lead_exponent()), scale)?, scale);
        at_order(trunc, |t| entry12_lhs(a, b, self.family.qpow(), scale, t)?.mul_poly(&lead))
    }

    /// Stabilized continued-fraction value, rescaled to the half-integer
    /// lattice and known through `trunc` lattice units there.
    pub fn stabilized(&self, trunc: i64, depth_cap: usize) -> Result<Stabilized> {
        let ratio = i64::from(CF_WORK_SCALE / CF_VALUE_SCALE);
        let spec = self.cf_spec()?;
        let s = stabilized_value(&spec, trunc * ratio, depth_cap)?;
        Ok(Stabilized {
            depth: s.depth,
            value: s.value.rescale(CF_VALUE_SCALE)?,
        })
    }
}

impl fmt::Display for NamedCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for NamedCf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            _ => return Err(unknown()),
        };
        let index: usize = chars.as_str().parse().map_err(|_| unknown())?;
        NamedCf::new(family, index).map_err(|_| unknown())
    }
}
