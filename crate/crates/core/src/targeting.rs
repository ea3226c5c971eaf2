//! Congruence targeting: the residues mod p that the trailing coefficients
//! must take for `f mod p` to have a prescribed factorization shape.
//!
//! With the sign convention `f = x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5`:
//!
//! * type 3a: `f = (x - a)^5 mod p`, with `a = a1 / 5`;
//! * type 3b: `f = (x - a)^3 (x^2 + b x + c) mod p`, `a` a root of
//!   `10a^3 - 6a1 a^2 + 3a2 a - a3`;
//! * type 3c: `f = (x^2 + a x + b)^2 (x + c) mod p`, `a` a root of
//!   `5a^3 + 6a1 a^2 + (a2 + 2a1^2) a + a1 a2 - a3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime_u64};
use crate::error::TargetError;
use crate::hunter::IntRange;
use crate::modp::ModPoly;

/// Largest prime accepted by a target; residues are kept in machine words.
pub const MAX_TARGET_PRIME: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RepType {
    #[serde(rename = "3a")]
    T3a,
    #[serde(rename = "3b")]
    T3b,
    #[serde(rename = "3c")]
    T3c,
    #[serde(rename = "untargeted")]
    Untargeted,
}

impl RepType {
    pub fn as_str(&self) -> &'static str {
        match self {
            RepType::T3a => "3a",
            RepType::T3b => "3b",
            RepType::T3c => "3c",
            RepType::Untargeted => "untargeted",
        }
    }

    /// Modulus `m` of the condition `p = 1 mod m`, if any.
    pub fn congruence_modulus(&self) -> Option<u64> {
        match self {
            RepType::T3a => Some(5),
            RepType::T3b => Some(3),
            RepType::T3c => Some(4),
            RepType::Untargeted => None,
        }
    }

    /// Field discriminant exponent `e` in `d(K) = p^e`.
    pub fn disc_exponent(&self) -> Option<u32> {
        match self {
            RepType::T3a => Some(4),
            RepType::T3b | RepType::T3c => Some(2),
            RepType::Untargeted => None,
        }
    }

    /// Ramification index of the ramified prime above `p`.
    pub fn ramification_index(&self) -> Option<u32> {
        match self {
            RepType::T3a => Some(5),
            RepType::T3b => Some(3),
            RepType::T3c => Some(2),
            RepType::Untargeted => None,
        }
    }

    /// Whether `p` meets the congruence condition of this type.
    pub fn admits(&self, p: u64) -> bool {
        match self.congruence_modulus() {
            Some(m) => p % m == 1 && p != 5 && p % 2 == 1,
            None => true,
        }
    }
}

impl fmt::Display for RepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3a" => Ok(RepType::T3a),
            "3b" => Ok(RepType::T3b),
            "3c" => Ok(RepType::T3c),
            "untargeted" => Ok(RepType::Untargeted),
            other => Err(format!(
                "unknown type `{other}` (expected 3a, 3b, 3c or untargeted)"
            )),
        }
    }
}

/// Shape of `f mod p` required by a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CongruenceShape {
    /// `(x - a)^5`
    FifthPower,
    /// `(x - a)^3 q(x)`, `q` any monic quadratic
    CubeTimesQuadratic,
    /// `q(x)^2 (x + c)`, `q` any monic quadratic
    SquaredQuadraticTimesLinear,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchTarget {
    pub p: u64,
    pub rep_type: RepType,
    pub disc_exponent: u32,
}

impl SearchTarget {
    /// Typed target; checks primality and the congruence condition on `p`.
    pub fn new(p: u64, rep_type: RepType) -> Result<Self, TargetError> {
        if !is_prime_u64(p) {
            return Err(TargetError::NotPrime(p));
        }
        if p >= MAX_TARGET_PRIME {
            return Err(TargetError::TooLarge(p));
        }
        if let Some(m) = rep_type.congruence_modulus() {
            if !rep_type.admits(p) {
                return Err(TargetError::Congruence {
                    rep: rep_type.as_str(),
                    modulus: m,
                    p,
                });
            }
        }
        let disc_exponent = rep_type.disc_exponent().unwrap_or(4);
        Ok(SearchTarget {
            p,
            rep_type,
            disc_exponent,
        })
    }

    /// Box for `d(K) = p^e` with no congruence filtering.
    pub fn untargeted(p: u64, disc_exponent: u32) -> Result<Self, TargetError> {
        if !is_prime_u64(p) {
            return Err(TargetError::NotPrime(p));
        }
        if p >= MAX_TARGET_PRIME {
            return Err(TargetError::TooLarge(p));
        }
        Ok(SearchTarget {
            p,
            rep_type: RepType::Untargeted,
            disc_exponent,
        })
    }

    pub fn congruence_shape(&self) -> CongruenceShape {
        match self.rep_type {
            RepType::T3a => CongruenceShape::FifthPower,
            RepType::T3b => CongruenceShape::CubeTimesQuadratic,
            RepType::T3c => CongruenceShape::SquaredQuadraticTimesLinear,
            RepType::Untargeted => CongruenceShape::Any,
        }
    }

    /// Target discriminant `p^e`.
    pub fn disc(&self) -> BigInt {
        BigInt::from(self.p).pow(self.disc_exponent)
    }
}

fn md(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Residues `(r2, r3, r4, r5)` forced on `(a2, a3, a4, a5)` by `f = (x - a)^5 mod p`.
pub fn residues_3a(p: u64, a1: i64) -> (u64, u64, u64, u64) {
    let inv5 = inv_mod(5, p).expect("p != 5");
    let a = mulm(md(a1, p), inv5, p);
    let a2 = mulm(a, a, p);
    let a3 = mulm(a2, a, p);
    let a4 = mulm(a3, a, p);
    let a5 = mulm(a4, a, p);
    (mulm(10, a2, p), mulm(10, a3, p), mulm(5, a4, p), a5)
}

/// `(r4, r5)` pairs compatible with `f = (x - a)^3 (x^2 + b x + c) mod p`.
pub fn residues_3b(p: u64, a1: i64, a2: i64, a3: i64) -> Vec<(u64, u64)> {
    let (a1, a2, a3) = (md(a1, p), md(a2, p), md(a3, p));
    // 10a^3 - 6a1 a^2 + 3a2 a - a3
    let cubic = ModPoly::new(
        p,
        vec![
            (p - a3) % p,
            mulm(3, a2, p),
            (p - mulm(6, a1, p)) % p,
            10 % p,
        ],
    );
    let mut out: Vec<(u64, u64)> = cubic
        .roots()
        .into_iter()
        .map(|a| {
            let b = (mulm(3, a, p) + p - a1) % p;
            let asq = mulm(a, a, p);
            let c = (a2 + mulm(6, asq, p) + p - mulm(mulm(3, a1, p), a, p)) % p;
            let acube = mulm(asq, a, p);
            let r4 = (mulm(mulm(3, asq, p), c, p) + p - mulm(acube, b, p)) % p;
            let r5 = mulm(acube, c, p);
            (r4, r5)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `(r4, r5)` pairs compatible with `f = (x^2 + a x + b)^2 (x + c) mod p`.
pub fn residues_3c(p: u64, a1: i64, a2: i64, a3: i64) -> Vec<(u64, u64)> {
    let (a1, a2, a3) = (md(a1, p), md(a2, p), md(a3, p));
    let inv2 = inv_mod(2, p).expect("p odd");
    // 5a^3 + 6a1 a^2 + (a2 + 2a1^2) a + a1 a2 - a3
    let cubic = ModPoly::new(
        p,
        vec![
            (mulm(a1, a2, p) + p - a3) % p,
            (a2 + mulm(2, mulm(a1, a1, p), p)) % p,
            mulm(6, a1, p),
            5 % p,
        ],
    );
    let mut out: Vec<(u64, u64)> = cubic
        .roots()
        .into_iter()
        .map(|a| {
            let c = (2 * p - a1 - mulm(2, a, p)) % p;
            let b = mulm(
                (a2 + mulm(3, mulm(a, a, p), p) + mulm(mulm(2, a1, p), a, p)) % p,
                inv2,
                p,
            );
            let bsq = mulm(b, b, p);
            let r4 = (bsq + mulm(mulm(2, a, p), mulm(b, c, p), p)) % p;
            let r5 = (p - mulm(bsq, c, p)) % p;
            (r4, r5)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Integers of `range` congruent to `r` mod `p`, ascending.
pub fn admissible_values(range: IntRange, r: u64, p: u64) -> impl Iterator<Item = i64> + Clone {
    let pi = p as i64;
    let first = range.lo + (r as i64 - range.lo).rem_euclid(pi);
    let hi = range.hi;
    // empty when first > hi; the step is p
    (0..)
        .map(move |k: i64| first + k * pi)
        .take_while(move |&x| x <= hi)
}

/// Number of values `admissible_values` yields.
pub fn admissible_count(range: IntRange, r: u64, p: u64) -> u64 {
    if range.is_empty() {
        return 0;
    }
    let pi = p as i64;
    let first = range.lo + (r as i64 - range.lo).rem_euclid(pi);
    if first > range.hi {
        0
    } else {
        ((range.hi - first) / pi) as u64 + 1
    }
}
