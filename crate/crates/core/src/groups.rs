//! Additive subgroups of ℚ.
//!
//! Every subgroup handled here is one of four canonical shapes: `{0}`, a
//! cyclic group `aℤ`, the group `ℤ[1/S]` of fractions whose denominators are
//! bounded by a supernatural number `S` with at least one infinite exponent,
//! or ℚ itself. Canonical forms make derived equality decide set equality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{Rational, RationalParseError};

/// Exponent of a prime in a supernatural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    fn allows(self, e: u32) -> bool {
        match self {
            Exponent::Finite(n) => e <= n,
            Exponent::Infinite => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubgroupSpec {
    Trivial,
    /// `generator · ℤ`, generator positive.
    Cyclic(Rational),
    /// `{n/d : every p^e ‖ d has e ≤ S(p)}`; always has an infinite exponent.
    Supernatural(BTreeMap<u64, Exponent>),
    FullQ,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("cyclic generator must be positive, got {0}")]
    NonPositiveGenerator(Rational),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("supernatural exponent of {0} must be positive")]
    ZeroExponent(u64),
    #[error("supernatural spec needs at least one prime")]
    EmptySupernatural,
    #[error("duplicate prime {0} in supernatural spec")]
    DuplicatePrime(u64),
    #[error("unknown group spec `{0}`")]
    UnknownVariant(String),
    #[error("malformed group spec `{0}`")]
    Malformed(String),
    #[error(transparent)]
    Rational(#[from] RationalParseError),
}

impl SubgroupSpec {
    pub fn cyclic(generator: Rational) -> Result<Self, GroupError> {
        if !generator.is_positive() {
            return Err(GroupError::NonPositiveGenerator(generator));
        }
        Ok(SubgroupSpec::Cyclic(generator))
    }

    pub fn integers() -> Self {
        SubgroupSpec::Cyclic(Rational::one())
    }

    /// `ℚ_k = (1/k!)ℤ`.
    pub fn qk(k: u32) -> Self {
        SubgroupSpec::Cyclic(Rational::factorial(k).recip())
    }

    /// Builds `ℤ[1/S]`, collapsing to the equivalent cyclic group when every
    /// exponent is finite.
    pub fn supernatural(exponents: BTreeMap<u64, Exponent>) -> Result<Self, GroupError> {
        if exponents.is_empty() {
            return Err(GroupError::EmptySupernatural);
        }
        for (&p, &e) in &exponents {
            if !is_prime(p) {
                return Err(GroupError::NotPrime(p));
            }
            if e == Exponent::Finite(0) {
                return Err(GroupError::ZeroExponent(p));
            }
        }
        Ok(Self::supernatural_canonical(exponents))
    }

    fn supernatural_canonical(mut exponents: BTreeMap<u64, Exponent>) -> Self {
        exponents.retain(|_, e| *e != Exponent::Finite(0));
        if exponents.values().any(|e| *e == Exponent::Infinite) {
            return SubgroupSpec::Supernatural(exponents);
        }
        let mut denom = BigInt::one();
        for (&p, e) in &exponents {
            if let Exponent::Finite(n) = e {
                denom *= num_traits::pow(BigInt::from(p), *n as usize);
            }
        }
        SubgroupSpec::Cyclic(Rational::new(1, denom))
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, SubgroupSpec::Trivial)
    }

    pub fn cyclic_generator(&self) -> Option<&Rational> {
        match self {
            SubgroupSpec::Cyclic(a) => Some(a),
            _ => None,
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        match self {
            SubgroupSpec::Trivial => q.is_zero(),
            SubgroupSpec::Cyclic(a) => (q / a).is_integer(),
            SubgroupSpec::Supernatural(s) => {
                let mut d = q.denom().clone();
                for (&p, &e) in s {
                    let (k, rest) = strip_prime(&d, p);
                    if !e.allows(k) {
                        return false;
                    }
                    d = rest;
                }
                d.is_one()
            }
            SubgroupSpec::FullQ => true,
        }
    }

    /// Smallest subgroup containing both.
    pub fn sum(&self, other: &Self) -> Self {
        use SubgroupSpec::*;
        match (self, other) {
            (Trivial, g) | (g, Trivial) => g.clone(),
            (FullQ, _) | (_, FullQ) => FullQ,
            (Cyclic(a), Cyclic(b)) => Cyclic(a.gcd(b)),
            (Cyclic(a), Supernatural(s)) | (Supernatural(s), Cyclic(a)) => {
                // aℤ + ℤ = (1/denom(a))ℤ since numerator and denominator are coprime.
                let mut merged = s.clone();
                for (p, k) in factorize(a.denom()) {
                    let e = merged.entry(p).or_insert(Exponent::Finite(0));
                    *e = (*e).max(Exponent::Finite(k));
                }
                Self::supernatural_canonical(merged)
            }
            (Supernatural(s), Supernatural(t)) => {
                let mut merged = s.clone();
                for (&p, &e) in t {
                    let slot = merged.entry(p).or_insert(e);
                    *slot = (*slot).max(e);
                }
                Self::supernatural_canonical(merged)
            }
        }
    }

    /// Set intersection.
    pub fn intersect(&self, other: &Self) -> Self {
        use SubgroupSpec::*;
        match (self, other) {
            (Trivial, _) | (_, Trivial) => Trivial,
            (FullQ, g) | (g, FullQ) => g.clone(),
            (Cyclic(a), Cyclic(b)) => Cyclic(a.lcm(b)),
            (Cyclic(a), Supernatural(s)) | (Supernatural(s), Cyclic(a)) => {
                // k·(u/v) lies in ℤ[1/S] iff k absorbs the part of v that S does not allow.
                let mut allowed = BigInt::one();
                for (&p, &e) in s {
                    let (k, _) = strip_prime(a.denom(), p);
                    let keep = match e {
                        Exponent::Finite(n) => k.min(n),
                        Exponent::Infinite => k,
                    };
                    allowed *= num_traits::pow(BigInt::from(p), keep as usize);
                }
                let multiplier = a.denom() / allowed;
                Cyclic(a * Rational::from_integer(multiplier))
            }
            (Supernatural(s), Supernatural(t)) => {
                let common: BTreeMap<u64, Exponent> =
                    s.iter().filter_map(|(p, &e)| t.get(p).map(|&f| (*p, e.min(f)))).collect();
                Self::supernatural_canonical(common)
            }
        }
    }

    /// Whether `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.intersect(other) == *self
    }

    /// Maximal number of ℤ-independent nonzero elements: 0 for `{0}`, 1 otherwise.
    pub fn rank(&self) -> u32 {
        match self {
            SubgroupSpec::Trivial => 0,
            _ => 1,
        }
    }

    pub fn finitely_generated(&self) -> bool {
        matches!(self, SubgroupSpec::Trivial | SubgroupSpec::Cyclic(_))
    }
}

/// Returns 0 when `alpha ∈ group`, otherwise `alpha` unchanged.
pub fn normalize_alpha(alpha: &Rational, group: &SubgroupSpec) -> Rational {
    if group.contains(alpha) {
        Rational::zero()
    } else {
        alpha.clone()
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::Trivial => f.write_str("0"),
            SubgroupSpec::Cyclic(a) => write!(f, "cyclic:{a}"),
            SubgroupSpec::Supernatural(s) => {
                f.write_str("sn:")?;
                for (i, (p, e)) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}^{e}")?;
                }
                Ok(())
            }
            SubgroupSpec::FullQ => f.write_str("Q"),
        }
    }
}

impl FromStr for SubgroupSpec {
    type Err = GroupError;

    /// `0`, `Q`, `Z`, `cyclic:<rational>`, `qk:<k>`, `sn:<p>^<e|inf>[,...]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "0" => return Ok(SubgroupSpec::Trivial),
            "Q" => return Ok(SubgroupSpec::FullQ),
            "Z" => return Ok(SubgroupSpec::integers()),
            _ => {}
        }
        let malformed = || GroupError::Malformed(s.to_string());
        let (tag, body) = s.split_once(':').ok_or_else(|| GroupError::UnknownVariant(s.to_string()))?;
        match tag {
            "cyclic" => SubgroupSpec::cyclic(body.parse()?),
            "qk" => {
                let k: u32 = body.trim().parse().map_err(|_| malformed())?;
                if k == 0 {
                    return Err(malformed());
                }
                Ok(SubgroupSpec::qk(k))
            }
            "sn" => {
                let mut map = BTreeMap::new();
                for part in body.split(',') {
                    let (p, e) = part.trim().split_once('^').ok_or_else(malformed)?;
                    let p: u64 = p.trim().parse().map_err(|_| malformed())?;
                    let e = match e.trim() {
                        "inf" => Exponent::Infinite,
                        n => Exponent::Finite(n.parse().map_err(|_| malformed())?),
                    };
                    if map.insert(p, e).is_some() {
                        return Err(GroupError::DuplicatePrime(p));
                    }
                }
                SubgroupSpec::supernatural(map)
            }
            _ => Err(GroupError::UnknownVariant(tag.to_string())),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(k, n / p^k)` with `p^k ‖ n`.
fn strip_prime(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        k += 1;
    }
    (k, n)
}

/// Trial-division factorization of a positive integer.
fn factorize(n: &BigInt) -> Vec<(u64, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while n > BigInt::one() {
        if BigInt::from(p) * BigInt::from(p) > n {
            let last = n.to_u64().expect("prime cofactor exceeds u64");
            out.push((last, 1));
            break;
        }
        let (k, rest) = strip_prime(&n, p);
        if k > 0 {
            out.push((p, k));
            n = rest;
        }
        p += 1;
    }
    out
}
