//! q-Pochhammer products and Ramanujan's theta function `f(a, b)`.
//!
//! Every theta function is available through two independent routes: the
//! bilateral sum [`theta_sum`] and the Jacobi triple product
//! [`theta_product`], which is assembled from [`pochhammer`] factors. The
//! helper identities used by the continued-fraction proofs are exposed as
//! residual series through [`helper_residual`].

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{at_order, lattice_index, Exponent, LatticeSeries, Polynomial};

/// `±q^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    negative: bool,
    exponent: Exponent,
}

impl SignedMonomial {
    pub fn new(sign: i8, exponent: Exponent) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        SignedMonomial {
            negative: sign < 0,
            exponent,
        }
    }

    /// `+q^(num/den)`.
    pub fn q(num: i64, den: i64) -> Self {
        Self::new(1, Rational64::new(num, den))
    }

    /// `-q^(num/den)`.
    pub fn minus_q(num: i64, den: i64) -> Self {
        Self::new(-1, Rational64::new(num, den))
    }

    pub fn one() -> Self {
        Self::q(0, 1)
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    pub fn index(&self, scale: u32) -> Result<i64> {
        lattice_index(self.exponent, scale)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        SignedMonomial {
            negative: self.negative != other.negative,
            exponent: self.exponent + other.exponent,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Self) -> Self {
        SignedMonomial {
            negative: self.negative != other.negative,
            exponent: self.exponent - other.exponent,
        }
    }

    pub fn pow(self, k: u32) -> Self {
        SignedMonomial {
            negative: self.negative && k % 2 == 1,
            exponent: self.exponent * Rational64::from_integer(i64::from(k)),
        }
    }

    /// Multiplies a series by this monomial exactly.
    pub fn times(&self, s: &LatticeSeries) -> Result<LatticeSeries> {
        let idx = self.index(s.scale())?;
        Ok(s.mul_monomial(&BigInt::from(self.sign()), idx))
    }
}

impl Neg for SignedMonomial {
    type Output = SignedMonomial;

    fn neg(self) -> SignedMonomial {
        SignedMonomial {
            negative: !self.negative,
            exponent: self.exponent,
        }
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        if self.exponent.is_zero() {
            write!(f, "{sign}1")
        } else {
            write!(f, "{sign}q^{}", self.exponent)
        }
    }
}

/// `(lambda; base)_inf ^ power` with monomial `lambda` and `base`.
///
/// Factor `j` is `1 - lambda * base^j`, so `lambda = -q^e` contributes
/// `(1 + q^(e + j m))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PochhammerSpec {
    pub lambda: SignedMonomial,
    pub base: SignedMonomial,
    pub power: u32,
}

impl PochhammerSpec {
    /// `(q^start; q^modulus)_inf`.
    pub fn new(start: Exponent, modulus: Exponent) -> Self {
        PochhammerSpec {
            lambda: SignedMonomial::new(1, start),
            base: SignedMonomial::new(1, modulus),
            power: 1,
        }
    }

    /// Integer-exponent shorthand for `(q^start; q^modulus)_inf`.
    pub fn int(start: i64, modulus: i64) -> Self {
        Self::new(Rational64::from_integer(start), Rational64::from_integer(modulus))
    }

    pub fn signed(lambda: SignedMonomial, base: SignedMonomial) -> Self {
        PochhammerSpec {
            lambda,
            base,
            power: 1,
        }
    }

    pub fn with_power(mut self, power: u32) -> Self {
        self.power = power;
        self
    }
}

/// Expands a Pochhammer product through lattice index `trunc`.
///
/// Factors whose exponent is zero are constants: `(1 - 1)` annihilates the
/// product, `(1 + 1)` doubles it. Factors with negative exponent are kept as
/// exact Laurent binomials.
pub fn pochhammer(spec: &PochhammerSpec, scale: u32, trunc: i64) -> Result<LatticeSeries> {
    let base = spec.base.index(scale)?;
    if base <= 0 {
        return Err(Error::invalid(format!(
            "Pochhammer modulus must be positive, got {}",
            spec.base.exponent()
        )));
    }
    let start = spec.lambda.index(scale)?;
    if spec.power == 0 {
        return Ok(LatticeSeries::one(scale, trunc));
    }

    // sign of lambda * base^j
    let coeff = |j: i64| -> i64 {
        let mut neg = spec.lambda.negative;
        if spec.base.negative && j % 2 == 1 {
            neg = !neg;
        }
        if neg {
            -1
        } else {
            1
        }
    };

    let mut laurent = Vec::new();
    let mut doublings = 0u32;
    let mut j = 0i64;
    while start + j * base <= 0 {
        let e = start + j * base;
        let c = coeff(j);
        if e == 0 {
            if c == 1 {
                return Ok(LatticeSeries::zero(scale, trunc));
            }
            doublings += 1;
        } else {
            laurent.push((e, c));
        }
        j += 1;
    }

    let deficit: i64 = laurent.iter().map(|(e, _)| -e).sum::<i64>() * i64::from(spec.power);
    let work = trunc + deficit;
    let mut acc = LatticeSeries::one(scale, work);
    loop {
        let e = start + j * base;
        if e > work {
            break;
        }
        let c = coeff(j);
        for _ in 0..spec.power {
            acc.mul_binomial_in_place(-c, e);
        }
        j += 1;
    }
    if doublings > 0 {
        let two = BigInt::from(2).pow(doublings * spec.power);
        acc = acc.mul_monomial(&two, 0);
    }
    for (e, c) in laurent {
        let factor = Polynomial::new(scale, [(0, 1), (e, -c)]);
        for _ in 0..spec.power {
            acc = acc.mul_poly(&factor)?;
        }
    }
    Ok(acc.truncated(trunc))
}

/// `(q^{±a}; q^M)_inf = (q^a; q^M)_inf (q^{M-a}; q^M)_inf` at integer
/// exponents. For `a = M/2` the two factors coincide and the result is a
/// square.
pub fn pm_pochhammer(a: i64, modulus: i64, trunc: i64) -> Result<LatticeSeries> {
    if a <= 0 || a >= modulus {
        return Err(Error::invalid(format!(
            "residue {a} must lie strictly between 0 and {modulus}"
        )));
    }
    let lo = pochhammer(&PochhammerSpec::int(a, modulus), 1, trunc)?;
    let hi = pochhammer(&PochhammerSpec::int(modulus - a, modulus), 1, trunc)?;
    lo.mul(&hi)
}

fn check_theta_args(a: SignedMonomial, b: SignedMonomial) -> Result<()> {
    if a.exponent() + b.exponent() <= Rational64::zero() {
        return Err(Error::invalid(format!(
            "f({a}, {b}) needs exponent(ab) > 0"
        )));
    }
    Ok(())
}

/// Ramanujan's `f(a, b) = sum_n a^(n(n+1)/2) b^(n(n-1)/2)`, summed directly.
pub fn theta_sum(
    a: SignedMonomial,
    b: SignedMonomial,
    scale: u32,
    trunc: i64,
) -> Result<LatticeSeries> {
    check_theta_args(a, b)?;
    let ai = i128::from(a.index(scale)?);
    let bi = i128::from(b.index(scale)?);
    let exp = |n: i128| ai * (n * (n + 1) / 2) + bi * (n * (n - 1) / 2);
    let sign = |n: i128| -> i64 {
        let ta = (n * (n + 1) / 2).rem_euclid(2) == 1 && a.negative;
        let tb = (n * (n - 1) / 2).rem_euclid(2) == 1 && b.negative;
        if ta != tb {
            -1
        } else {
            1
        }
    };
    let limit = i128::from(trunc);
    let mut terms: Vec<(i64, i64)> = Vec::new();
    // convex in n, so each direction stops once past the limit and rising
    for step in [1i128, -1] {
        let mut n: i128 = if step == 1 { 0 } else { -1 };
        loop {
            let e = exp(n);
            if e > limit && exp(n + step) >= e {
                break;
            }
            if e <= limit {
                terms.push((e as i64, sign(n)));
            }
            n += step;
        }
    }
    Ok(LatticeSeries::from_terms(scale, &terms, trunc))
}

/// `f(a, b) = (-a; ab)_inf (-b; ab)_inf (ab; ab)_inf`.
pub fn theta_product(
    a: SignedMonomial,
    b: SignedMonomial,
    scale: u32,
    trunc: i64,
) -> Result<LatticeSeries> {
    check_theta_args(a, b)?;
    let ab = a.mul(b);
    at_order(trunc, |t| {
        let x = pochhammer(&PochhammerSpec::signed(-a, ab), scale, t)?;
        let y = pochhammer(&PochhammerSpec::signed(-b, ab), scale, t)?;
        let z = pochhammer(&PochhammerSpec::signed(ab, ab), scale, t)?;
        x.mul(&y)?.mul(&z)
    })
}

fn check_positive(k: Exponent, name: &str) -> Result<()> {
    if k <= Rational64::zero() {
        return Err(Error::invalid(format!(
            "{name} needs a positive exponent, got {k}"
        )));
    }
    Ok(())
}

/// `phi(x) = f(x, x)`.
pub fn phi(x: SignedMonomial, scale: u32, trunc: i64) -> Result<LatticeSeries> {
    check_positive(x.exponent(), "phi")?;
    theta_sum(x, x, scale, trunc)
}

/// `psi(x) = f(x, x^3)`.
pub fn psi(x: SignedMonomial, scale: u32, trunc: i64) -> Result<LatticeSeries> {
    check_positive(x.exponent(), "psi")?;
    theta_sum(x, x.pow(3), scale, trunc)
}

/// `f(-q^k) = f(-q^k, -q^(2k))`.
pub fn f_minus(k: Exponent, scale: u32, trunc: i64) -> Result<LatticeSeries> {
    check_positive(k, "f(-q^k)")?;
    let x = SignedMonomial::new(-1, k);
    theta_sum(x, x.pow(2).neg(), scale, trunc)
}

/// `chi(q^k) = (-q^k; q^(2k))_inf`.
pub fn chi(k: Exponent, scale: u32, trunc: i64) -> Result<LatticeSeries> {
    check_positive(k, "chi")?;
    let spec = PochhammerSpec::signed(
        SignedMonomial::new(-1, k),
        SignedMonomial::new(1, k * Rational64::from_integer(2)),
    );
    pochhammer(&spec, scale, trunc)
}

/// Theta identities used as lemmas in the continued-fraction proofs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HelperIdentity {
    /// `f(a,b) = f(a^3 b, a b^3) + a f(b/a, a^5 b^3)`
    E20A,
    /// `f(a, ab^2) f(b, a^2 b) = f(a,b) psi(ab)`
    E26,
    /// `f(a,b) f(-a,-b) = f(-a^2,-b^2) phi(-ab)`
    E27,
    /// `f(a,b)^2 = f(a^2,b^2) phi(ab) + 2a f(b/a, a^3 b) psi(a^2 b^2)`
    E31,
    /// `f(-q,-q^8) f(-q^2,-q^7) f(-q^4,-q^5) = f(-q) f(-q^9)^3 / f(-q^3)`
    E38,
    /// `prod_{i=1}^{6} f(-q^i,-q^(13-i)) = f(-q) f(-q^13)^5`
    E40,
}

impl HelperIdentity {
    pub const ALL: [HelperIdentity; 6] = [
        HelperIdentity::E20A,
        HelperIdentity::E26,
        HelperIdentity::E27,
        HelperIdentity::E31,
        HelperIdentity::E38,
        HelperIdentity::E40,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            HelperIdentity::E20A => "E20A",
            HelperIdentity::E26 => "E26",
            HelperIdentity::E27 => "E27",
            HelperIdentity::E31 => "E31",
            HelperIdentity::E38 => "E38",
            HelperIdentity::E40 => "E40",
        }
    }

    /// Number of monomial arguments `(a, b)` the identity takes.
    pub fn arity(&self) -> usize {
        match self {
            HelperIdentity::E38 | HelperIdentity::E40 => 0,
            _ => 2,
        }
    }
}

impl fmt::Display for HelperIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HelperIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HelperIdentity::ALL
            .into_iter()
            .find(|h| h.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Both sides of a helper identity, each known through `trunc`.
pub fn helper_sides(
    id: HelperIdentity,
    args: &[SignedMonomial],
    scale: u32,
    trunc: i64,
) -> Result<(LatticeSeries, LatticeSeries)> {
    if args.len() != id.arity() {
        return Err(Error::invalid(format!(
            "{id} takes {} arguments, got {}",
            id.arity(),
            args.len()
        )));
    }
    let f = |x: SignedMonomial, y: SignedMonomial, t: i64| theta_sum(x, y, scale, t);
    let lhs = at_order(trunc, |t| match id {
        HelperIdentity::E20A => f(args[0], args[1], t),
        HelperIdentity::E26 => {
            let (a, b) = (args[0], args[1]);
            f(a, a.mul(b.pow(2)), t)?.mul(&f(b, a.pow(2).mul(b), t)?)
        }
        HelperIdentity::E27 => {
            let (a, b) = (args[0], args[1]);
            f(a, b, t)?.mul(&f(-a, -b, t)?)
        }
        HelperIdentity::E31 => f(args[0], args[1], t)?.pow(2),
        HelperIdentity::E38 => {
            let m = SignedMonomial::minus_q;
            f(m(1, 1), m(8, 1), t)?
                .mul(&f(m(2, 1), m(7, 1), t)?)?
                .mul(&f(m(4, 1), m(5, 1), t)?)
        }
        HelperIdentity::E40 => {
            let mut acc = LatticeSeries::one(scale, t);
            for i in 1..=6 {
                let m = SignedMonomial::minus_q;
                acc = acc.mul(&f(m(i, 1), m(13 - i, 1), t)?)?;
            }
            Ok(acc)
        }
    })?;
    let rhs = at_order(trunc, |t| match id {
        HelperIdentity::E20A => {
            let (a, b) = (args[0], args[1]);
            let first = f(a.pow(3).mul(b), a.mul(b.pow(3)), t)?;
            let second = a.times(&f(b.div(a), a.pow(5).mul(b.pow(3)), t)?)?;
            first.add(&second)
        }
        HelperIdentity::E26 => {
            let (a, b) = (args[0], args[1]);
            f(a, b, t)?.mul(&psi_any(a.mul(b), scale, t)?)
        }
        HelperIdentity::E27 => {
            let (a, b) = (args[0], args[1]);
            let ab = a.mul(b);
            f(-a.pow(2), -b.pow(2), t)?.mul(&f(-ab, -ab, t)?)
        }
        HelperIdentity::E31 => {
            let (a, b) = (args[0], args[1]);
            let ab = a.mul(b);
            let first = f(a.pow(2), b.pow(2), t)?.mul(&f(ab, ab, t)?)?;
            let tail = f(b.div(a), a.pow(3).mul(b), t)?.mul(&psi_any(ab.pow(2), scale, t)?)?;
            let idx = a.index(scale)?;
            let second = tail.mul_monomial(&BigInt::from(2 * i64::from(a.sign())), idx);
            first.add(&second)
        }
        HelperIdentity::E38 => {
            // product side for f(-q^k) = (q^k; q^k)_inf
            let e = |k: i64| pochhammer(&PochhammerSpec::int(k, k), scale, t);
            e(1)?.mul(&e(9)?.pow(3)?)?.div(&e(3)?)
        }
        HelperIdentity::E40 => {
            let e = |k: i64| pochhammer(&PochhammerSpec::int(k, k), scale, t);
            e(1)?.mul(&e(13)?.pow(5)?)
        }
    })?;
    Ok((lhs, rhs))
}

/// `psi(x) = f(x, x^3)` without the positivity guard on a signed argument.
fn psi_any(x: SignedMonomial, scale: u32, trunc: i64) -> Result<LatticeSeries> {
    theta_sum(x, x.pow(3), scale, trunc)
}

/// LHS minus RHS of a helper identity; the zero series when it holds.
pub fn helper_residual(
    id: HelperIdentity,
    args: &[SignedMonomial],
    scale: u32,
    trunc: i64,
) -> Result<LatticeSeries> {
    let (lhs, rhs) = helper_sides(id, args, scale, trunc)?;
    lhs.sub(&rhs)
}

/// Smallest lattice on which every exponent in `args` is representable.
pub fn common_scale(args: &[SignedMonomial]) -> u32 {
    use num_integer::Integer;
    args.iter()
        .map(|m| *m.exponent().denom())
        .fold(1i64, |acc, d| acc.lcm(&d)) as u32
}

/// Both theta routes of `f(a, b)`; returns `Ok(true)` when they agree through
/// `trunc`.
pub fn triple_product_agrees(
    a: SignedMonomial,
    b: SignedMonomial,
    scale: u32,
    trunc: i64,
) -> Result<bool> {
    let s = theta_sum(a, b, scale, trunc)?;
    let p = theta_product(a, b, scale, trunc)?;
    Ok(s.eq_to_order(&p, trunc)?.is_equal())
}
