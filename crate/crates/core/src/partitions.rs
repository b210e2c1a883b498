//! Colored partitions into residue classes, counted two independent ways.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::LatticeSeries;
use crate::theta::pm_pochhammer;

/// Parts congruent to `±a (mod M)`, each class carrying a number of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartSpec {
    modulus: i64,
    classes: Vec<(i64, u32)>,
}

impl PartSpec {
    pub fn new(modulus: i64, classes: Vec<(i64, u32)>) -> Result<Self> {
        if modulus <= 0 {
            return Err(Error::invalid(format!("modulus must be positive, got {modulus}")));
        }
        let mut seen = Vec::new();
        for &(a, colors) in &classes {
            if !(0 < a && a < modulus) {
                return Err(Error::invalid(format!("residue {a} outside (0, {modulus})")));
            }
            if colors == 0 {
                return Err(Error::invalid(format!("class ±{a} has zero colors")));
            }
            let key = a.min(modulus - a);
            if seen.contains(&key) {
                return Err(Error::invalid(format!("class ±{a} (mod {modulus}) listed twice")));
            }
            seen.push(key);
        }
        Ok(PartSpec { modulus, classes })
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn classes(&self) -> &[(i64, u32)] {
        &self.classes
    }

    /// Concrete part sizes `≤ n`, one entry per color. A self-paired residue
    /// `a = M - a` is listed twice per color, matching `(q^{±a}; q^M)`.
    pub fn colored_parts(&self, n: i64) -> Vec<i64> {
        let mut parts = Vec::new();
        for &(a, colors) in &self.classes {
            for residue in [a, self.modulus - a] {
                let mut size = residue;
                while size <= n {
                    parts.extend(std::iter::repeat_n(size, colors as usize));
                    size += self.modulus;
                }
            }
        }
        parts
    }
}

impl fmt::Display for PartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<String> = self
            .classes
            .iter()
            .map(|&(a, c)| if c == 1 { format!("±{a}") } else { format!("±{a}×{c}") })
            .collect();
        write!(f, "{{{}}} mod {}", classes.join(", "), self.modulus)
    }
}

/// Generating function `1 / prod (q^{±a}; q^M)^colors` through `trunc`.
pub fn gf_expand(spec: &PartSpec, trunc: i64) -> Result<LatticeSeries> {
    let mut denominator = LatticeSeries::one(1, trunc);
    for &(a, colors) in &spec.classes {
        let factor = pm_pochhammer(a, spec.modulus, trunc)?.pow(colors)?;
        denominator = denominator.mul(&factor)?;
    }
    denominator.invert()
}

/// Counts colored partitions of `n` by a coin-change table over the unrolled
/// part multiset.
pub fn enumerate_count(spec: &PartSpec, n: u64) -> BigUint {
    let n = n as usize;
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for part in spec.colored_parts(n as i64) {
        let part = part as usize;
        for total in part..=n {
            let add = ways[total - part].clone();
            ways[total] += add;
        }
    }
    ways.swap_remove(n)
}

/// The three counting functions of one theorem: `first(n) - second(n - shift) - third(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTriple {
    pub key: &'static str,
    pub first: PartSpec,
    pub second: PartSpec,
    pub third: PartSpec,
    pub shift: i64,
}

/// Generating functions of `first(n)` and `second(n - shift) + third(n)`.
pub fn theorem_sides(triple: &CountTriple, trunc: i64) -> Result<(LatticeSeries, LatticeSeries)> {
    let first = gf_expand(&triple.first, trunc)?;
    let second = gf_expand(&triple.second, trunc)?.shift(triple.shift);
    let third = gf_expand(&triple.third, trunc)?;
    Ok((first, second.add(&third)?))
}

/// `first(n) - second(n - shift) - third(n)` for `0 ≤ n ≤ trunc`.
pub fn theorem_residual(triple: &CountTriple, trunc: i64) -> Result<Vec<BigInt>> {
    let first = gf_expand(&triple.first, trunc)?;
    let second = gf_expand(&triple.second, trunc)?;
    let third = gf_expand(&triple.third, trunc)?;
    (0..=trunc)
        .map(|n| {
            let shifted = if n >= triple.shift {
                second.coeff_at(n - triple.shift)?
            } else {
                BigInt::zero()
            };
            Ok(first.coeff_at(n)? - shifted - third.coeff_at(n)?)
        })
        .collect()
}

/// Registry keys of the nine partition specs.
pub const SPEC_KEYS: [&str; 9] = [
    "T35.X1", "T35.X2", "T35.X3", "T36.Y1", "T36.Y2", "T36.Y3", "T37.Z1", "T37.Z2", "T37.Z3",
];

/// Looks up one of the nine specs by key.
pub fn partition_spec(key: &str) -> Result<PartSpec> {
    let (modulus, classes): (i64, &[(i64, u32)]) = match key {
        "T35.X1" => (36, &[(3, 1), (15, 1), (6, 2), (18, 2)]),
        "T35.X2" => (36, &[(3, 1), (15, 1), (12, 2), (18, 2)]),
        "T35.X3" => (36, &[(6, 2), (9, 2), (12, 2)]),
        "T36.Y1" => (52, &[(1, 1), (25, 1), (12, 2), (26, 2)]),
        "T36.Y2" => (52, &[(1, 1), (25, 1), (14, 2), (26, 2)]),
        "T36.Y3" => (52, &[(12, 2), (13, 2), (14, 2)]),
        "T37.Z1" => (60, &[(1, 1), (29, 1), (14, 2), (30, 2)]),
        "T37.Z2" => (60, &[(1, 1), (29, 1), (16, 2), (30, 2)]),
        "T37.Z3" => (60, &[(14, 2), (15, 2), (16, 2)]),
        _ => return Err(Error::UnknownName(key.to_string())),
    };
    PartSpec::new(modulus, classes.to_vec())
}

/// Registry keys of the three partition theorems.
pub const THEOREM_KEYS: [&str; 3] = ["T35", "T36", "T37"];

pub fn count_triple(key: &str) -> Result<CountTriple> {
    let (key, letter, shift): (&'static str, char, i64) = match key {
        "T35" => ("T35", 'X', 3),
        "T36" => ("T36", 'Y', 1),
        "T37" => ("T37", 'Z', 1),
        _ => return Err(Error::UnknownName(key.to_string())),
    };
    let spec = |i: u32| partition_spec(&format!("{key}.{letter}{i}"));
    Ok(CountTriple {
        key,
        first: spec(1)?,
        second: spec(2)?,
        third: spec(3)?,
        shift,
    })
}
