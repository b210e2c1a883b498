//! Theta-function identities satisfied by the named continued fractions:
//! `1/X ∓ q^((2i-1)/2) X` as a theta quotient, and the product of the `+`
//! cases over a family.

use std::fmt;

use crate::cfrac::{Family, NamedCf};
use crate::error::{Error, Result};
use crate::series::{at_order, exponent, LatticeSeries};
use crate::theta::{f_minus, phi, psi, theta_sum, SignedMonomial};

/// Working lattice of these identities (half powers of `q`).
pub const IDENTITY_SCALE: u32 = 2;

/// Which of the `∓` / `±` sign pairs is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `1/X - q^(o/2) X = f(-q^(o/2), -q^((M-o)/2)) phi(q^(M/4)) / ...`
    Upper,
    /// `1/X + q^(o/2) X = f(q^(o/2), q^((M-o)/2)) phi(-q^(M/4)) / ...`
    Lower,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Upper, Sign::Lower];

    /// `-1` for the upper sign, `+1` for the lower.
    fn weight_sign(self) -> i8 {
        match self {
            Sign::Upper => -1,
            Sign::Lower => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Upper => "upper",
            Sign::Lower => "lower",
        })
    }
}

/// `1/X + s q^(o/2) X` for the named fraction `X`, on the half-power lattice.
fn reciprocal_combination(cf: NamedCf, weight_sign: i8, trunc: i64) -> Result<LatticeSeries> {
    at_order(trunc, |t| {
        let x = cf.theta_quotient(IDENTITY_SCALE, t)?;
        let weighted = SignedMonomial::new(weight_sign, exponent(cf.odd(), 2)).times(&x)?;
        x.invert()?.add(&weighted)
    })
}

/// Default denominator theta pair `f(-q^c, -q^(M/2-c))`.
pub fn default_denominator(cf: NamedCf) -> (SignedMonomial, SignedMonomial) {
    let h = cf.family().modulus() / 2;
    let c = cf.lead_exponent();
    (SignedMonomial::minus_q(c, 1), SignedMonomial::minus_q(h - c, 1))
}

/// Both sides of the sign-pair identity for `cf`, through `trunc` half-power
/// units. `denominator` replaces the `f(-q^c, -q^(M/2-c))` factor when given.
pub fn sign_identity_sides(
    cf: NamedCf,
    sign: Sign,
    denominator: Option<(SignedMonomial, SignedMonomial)>,
    trunc: i64,
) -> Result<(LatticeSeries, LatticeSeries)> {
    let m = cf.family().modulus();
    let h = m / 2;
    let o = cf.odd();
    let s = sign.weight_sign();
    let (da, db) = denominator.unwrap_or_else(|| default_denominator(cf));
    let lhs = reciprocal_combination(cf, s, trunc)?;
    let rhs = at_order(trunc, |t| {
        let num = theta_sum(
            SignedMonomial::new(s, exponent(o, 2)),
            SignedMonomial::new(s, exponent(m - o, 2)),
            IDENTITY_SCALE,
            t,
        )?
        .mul(&phi(SignedMonomial::new(-s, exponent(m, 4)), IDENTITY_SCALE, t)?)?;
        let den = theta_sum(da, db, IDENTITY_SCALE, t)?
            .mul(&psi(SignedMonomial::q(h, 1), IDENTITY_SCALE, t)?)?;
        num.div(&den)
    })?;
    Ok((lhs, rhs))
}

/// Left side minus right side of [`sign_identity_sides`].
pub fn sign_identity_residual(cf: NamedCf, sign: Sign, trunc: i64) -> Result<LatticeSeries> {
    let (lhs, rhs) = sign_identity_sides(cf, sign, None, trunc)?;
    lhs.sub(&rhs)
}

/// Fractions whose `+` combinations are multiplied in the product identity:
/// `A1, A3, A4` and `B1..B6`.
pub fn product_members(family: Family) -> Result<Vec<NamedCf>> {
    let indices: Vec<usize> = match family {
        Family::A => vec![1, 3, 4],
        Family::B => (1..=6).collect(),
        Family::C => {
            return Err(Error::invalid("no product identity for the C family"));
        }
    };
    indices.into_iter().map(|i| NamedCf::new(family, i)).collect()
}

/// Both sides of the product identity for family `A` or `B`, with the
/// `prod f(-q^k, -q^(h-k))` denominator replaced by its eta-product form:
///
/// * A: `phi^3(-q^(9/2)) prod f(q^(o/2), q^((18-o)/2)) f(-q^3) / (psi^3(q^9) f(-q) f^3(-q^9))`
/// * B: `phi^6(-q^(13/2)) prod f(q^(o/2), q^((26-o)/2)) / (psi^6(q^13) f(-q) f^5(-q^13))`
pub fn product_identity_sides(family: Family, trunc: i64) -> Result<(LatticeSeries, LatticeSeries)> {
    let members = product_members(family)?;
    let m = family.modulus();
    let h = m / 2;
    let count = members.len() as u32;
    let lhs = at_order(trunc, |t| {
        let mut acc = LatticeSeries::one(IDENTITY_SCALE, t);
        for cf in &members {
            acc = acc.mul(&reciprocal_combination(*cf, 1, t)?)?;
        }
        Ok(acc)
    })?;
    let rhs = at_order(trunc, |t| {
        let fm = |k: i64| f_minus(exponent(k, 1), IDENTITY_SCALE, t);
        let mut num = phi(SignedMonomial::minus_q(m, 4), IDENTITY_SCALE, t)?.pow(count)?;
        for cf in &members {
            let o = cf.odd();
            num = num.mul(&theta_sum(
                SignedMonomial::q(o, 2),
                SignedMonomial::q(m - o, 2),
                IDENTITY_SCALE,
                t,
            )?)?;
        }
        let mut den = psi(SignedMonomial::q(h, 1), IDENTITY_SCALE, t)?
            .pow(count)?
            .mul(&fm(1)?)?;
        match family {
            Family::A => {
                num = num.mul(&fm(3)?)?;
                den = den.mul(&fm(9)?.pow(3)?)?;
            }
            _ => {
                den = den.mul(&fm(13)?.pow(5)?)?;
            }
        }
        num.div(&den)
    })?;
    Ok((lhs, rhs))
}
