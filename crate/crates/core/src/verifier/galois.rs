//! Galois group of a square-discriminant quintic: C5, D5 or A5.
//!
//! Frobenius sampling finds cycle types; a `(1,1,3)` pattern is a 3-cycle and
//! rules out every solvable candidate at once. The deterministic fallback is
//! the sextic resolvent for the Frobenius group F20: `Gal(f)` lies in a
//! conjugate of F20 iff the resolvent has a rational root.
//!
//! Resolvent invariant: the ten pairs `{i, j}` are the edges of K5, which
//! splits into six pairs of complementary pentagons `(P, P')`. F20 fixes one
//! such pair and swaps its two pentagons, so `u = (s(P) - s(P'))^2` with
//! `s(P) = sum over edges theta_i theta_j` is an F20-invariant with six
//! conjugates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime_u64;
use crate::modp::ModPoly;
use crate::poly::IntPoly;
use crate::sturm::{isolate_real_roots, refine_root};

use super::order::charpoly;

/// Galois class of a quintic with square discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaloisClass {
    C5,
    D5,
    #[serde(rename = "A5-certified")]
    A5Certified,
    #[serde(rename = "solvable-probable")]
    SolvableProbable,
    #[serde(rename = "indeterminate")]
    Indeterminate,
}

impl GaloisClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GaloisClass::C5 => "C5",
            GaloisClass::D5 => "D5",
            GaloisClass::A5Certified => "A5-certified",
            GaloisClass::SolvableProbable => "solvable-probable",
            GaloisClass::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for GaloisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the classifier saw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisEvidence {
    pub class: GaloisClass,
    /// Whether the class is proven rather than inferred from sampling.
    /// C5 and D5 from sampling alone carry a miss probability of at most
    /// `(2/3)^primes_sampled` of a true A5 field.
    pub certified: bool,
    pub primes_sampled: u32,
    /// Smallest sampled prime with Frobenius of cycle type `(1,1,3)`.
    pub three_cycle_prime: Option<u64>,
    /// Smallest sampled prime with Frobenius of cycle type `(1,2,2)`.
    pub involution_prime: Option<u64>,
    /// Set when the F20 resolvent ran: its integer root, if any.
    pub resolvent_root: Option<Option<String>>,
    /// Set when the classifier could not conclude.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolventError {
    #[error("polynomial must be monic of degree 5 with five distinct real roots")]
    Precondition,
    #[error("coefficient enclosures did not isolate integers at {0} bits")]
    PrecisionExhausted(u32),
    #[error("resolvent kept a repeated root after all substitutions")]
    TschirnhausExhausted,
    #[error("resolvent trace check failed")]
    TraceMismatch,
}

/// A squarefree F20 resolvent and the enclosures of its roots.
#[derive(Debug, Clone)]
pub struct Resolvent {
    pub poly: IntPoly,
    /// The quintic whose roots were used: `f` itself or the characteristic
    /// polynomial of `theta^2 + lambda theta`.
    pub base: IntPoly,
    pub tschirnhaus: Option<i64>,
    roots: Vec<Interval>,
}

impl Resolvent {
    /// Integer root of the resolvent, if one exists. Any rational root is an
    /// algebraic integer, so integers are the only candidates, and each
    /// candidate lies in one of the root enclosures.
    pub fn integer_root(&self) -> Option<BigInt> {
        for r in &self.roots {
            let mut k = r.lo.ceil().to_integer();
            let hi = r.hi.floor().to_integer();
            while k <= hi {
                if self.poly.eval(&k).is_zero() {
                    return Some(k);
                }
                k += 1;
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    fn add(&self, o: &Self) -> Self {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Interval { lo, hi }
    }

    fn square(&self) -> Self {
        let m = self.mul(self);
        if self.lo <= BigRational::zero() && self.hi >= BigRational::zero() {
            Interval {
                lo: BigRational::zero(),
                hi: m.hi,
            }
        } else {
            m
        }
    }

    /// The unique integer in a closed interval of width below one.
    fn unique_integer(&self) -> Option<BigInt> {
        if &self.hi - &self.lo >= BigRational::one() {
            return None;
        }
        let n = self.lo.ceil();
        (n <= self.hi).then(|| n.to_integer())
    }
}

/// The six complementary pentagon pairs of K5 as 10-bit edge masks.
fn pentagon_pairs() -> Vec<(u16, u16)> {
    let edge = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        // index of {a, b} among the 10 pairs in lexicographic order
        let idx = [0, 4, 7, 9][a] + (b - a - 1);
        1u16 << idx
    };
    let mut cycles = Vec::new();
    let rest = [1usize, 2, 3, 4];
    for &a in &rest {
        for &b in &rest {
            for &c in &rest {
                for &d in &rest {
                    let v = [a, b, c, d];
                    if (1..4).any(|i| v[..i].contains(&v[i])) {
                        continue;
                    }
                    let path = [0, a, b, c, d, 0];
                    let mask = path.windows(2).fold(0u16, |m, w| m | edge(w[0], w[1]));
                    if !cycles.contains(&mask) {
                        cycles.push(mask);
                    }
                }
            }
        }
    }
    let mut pairs: Vec<(u16, u16)> = cycles
        .iter()
        .filter_map(|&m| {
            let comp = 0x3ff ^ m;
            (m < comp).then_some((m, comp))
        })
        .collect();
    pairs.sort();
    pairs
}

const EDGES: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// `6 a2^2 - 16 a1 a3 + 40 a4` in the alternating-sign coefficient convention:
/// the exact sum of the six resolvent roots.
fn expected_trace(g: &IntPoly) -> BigInt {
    let a1 = -g.coeff(4);
    let a2 = g.coeff(3);
    let a3 = -g.coeff(2);
    let a4 = g.coeff(1);
    BigInt::from(6) * &a2 * &a2 - BigInt::from(16) * &a1 * &a3 + BigInt::from(40) * &a4
}

const START_BITS: u32 = 64;
const MAX_BITS: u32 = 1 << 14;

fn resolvent_from_roots(
    g: &IntPoly,
    isolating: &[(BigRational, BigRational)],
) -> Result<(IntPoly, Vec<Interval>), ResolventError> {
    let pairs = pentagon_pairs();
    let mut bits = START_BITS;
    let mut current: Vec<(BigRational, BigRational)> = isolating.to_vec();
    loop {
        current = current
            .into_iter()
            .map(|(lo, hi)| refine_root(g, lo, hi, bits))
            .collect();
        let theta: Vec<Interval> = current
            .iter()
            .map(|(lo, hi)| Interval {
                lo: lo.clone(),
                hi: hi.clone(),
            })
            .collect();
        let products: Vec<Interval> = EDGES
            .iter()
            .map(|&(i, j)| theta[i].mul(&theta[j]))
            .collect();
        let pentagon_sum = |mask: u16| {
            (0..10)
                .filter(|k| mask >> k & 1 == 1)
                .fold(Interval::point(BigRational::zero()), |acc, k| {
                    acc.add(&products[k])
                })
        };
        let us: Vec<Interval> = pairs
            .iter()
            .map(|&(m, c)| pentagon_sum(m).sub(&pentagon_sum(c)).square())
            .collect();
        // low-first coefficients of prod (x - u)
        let mut poly = vec![Interval::point(BigRational::one())];
        for u in &us {
            let mut next = vec![Interval::point(BigRational::zero()); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(u));
            }
            poly = next;
        }
        let coeffs: Option<Vec<BigInt>> = poly.iter().map(Interval::unique_integer).collect();
        if let Some(coeffs) = coeffs {
            let r = IntPoly::new(coeffs);
            if -r.coeff(5) != expected_trace(g) {
                return Err(ResolventError::TraceMismatch);
            }
            return Ok((r, us));
        }
        if bits >= MAX_BITS {
            return Err(ResolventError::PrecisionExhausted(bits));
        }
        bits *= 2;
    }
}

fn tschirnhaus_shifts() -> impl Iterator<Item = i64> {
    (0..=8).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// The F20 sextic resolvent of a totally real quintic, computed from
/// certified root enclosures.
pub fn f20_resolvent(f: &IntPoly) -> Result<Resolvent, ResolventError> {
    if f.deg() != 5 || !f.is_monic() || !f.is_squarefree() {
        return Err(ResolventError::Precondition);
    }
    let roots = isolate_real_roots(f).map_err(|_| ResolventError::Precondition)?;
    if roots.len() != 5 {
        return Err(ResolventError::Precondition);
    }
    let (r, us) = resolvent_from_roots(f, &roots)?;
    if r.is_squarefree() {
        return Ok(Resolvent {
            poly: r,
            base: f.clone(),
            tschirnhaus: None,
            roots: us,
        });
    }
    for lambda in tschirnhaus_shifts() {
        let t = IntPoly::from_i64(&[0, lambda, 1]);
        let Some(g) = charpoly(f, &t, &BigInt::one()) else {
            continue;
        };
        if !g.is_squarefree() {
            continue;
        }
        let groots = isolate_real_roots(&g).map_err(|_| ResolventError::Precondition)?;
        let (r, us) = resolvent_from_roots(&g, &groots)?;
        if r.is_squarefree() {
            return Ok(Resolvent {
                poly: r,
                base: g,
                tschirnhaus: Some(lambda),
                roots: us,
            });
        }
    }
    Err(ResolventError::TschirnhausExhausted)
}

fn cycle_type(f: &IntPoly, q: u64) -> Vec<usize> {
    let mut degs: Vec<usize> = ModPoly::from_int_poly(f, q)
        .factor_pattern()
        .iter()
        .flat_map(|&(d, m)| std::iter::repeat_n(d, m))
        .collect();
    degs.sort();
    degs
}

/// Classifies `Gal(f)` for a totally real quintic with square discriminant.
/// Samples `budget` primes not dividing `poly_disc`, in ascending order, and
/// consults the F20 resolvent when `certify` is set and sampling found no
/// 3-cycle.
pub fn galois_class(f: &IntPoly, poly_disc: &BigInt, budget: u32, certify: bool) -> GaloisEvidence {
    let mut ev = GaloisEvidence {
        class: GaloisClass::SolvableProbable,
        certified: false,
        primes_sampled: 0,
        three_cycle_prime: None,
        involution_prime: None,
        resolvent_root: None,
        note: None,
    };
    let mut q = 1u64;
    while ev.primes_sampled < budget {
        q += 1;
        if !is_prime_u64(q) || (poly_disc % q).is_zero() {
            continue;
        }
        ev.primes_sampled += 1;
        match cycle_type(f, q).as_slice() {
            [1, 1, 3] => {
                ev.three_cycle_prime = Some(q);
                ev.class = GaloisClass::A5Certified;
                ev.certified = true;
                return ev;
            }
            [1, 2, 2] => {
                ev.involution_prime.get_or_insert(q);
            }
            [1, 1, 1, 1, 1] | [5] => {}
            other => {
                ev.class = GaloisClass::Indeterminate;
                ev.note = Some(format!("odd Frobenius cycle type {other:?} at {q}"));
                return ev;
            }
        }
    }
    let sampled_class = if ev.involution_prime.is_some() {
        GaloisClass::D5
    } else {
        GaloisClass::C5
    };
    if certify {
        match f20_resolvent(f) {
            Ok(res) => {
                let root = res.integer_root();
                ev.resolvent_root = Some(root.as_ref().map(BigInt::to_string));
                if root.is_some() {
                    ev.class = sampled_class;
                    // within the solvable case the involution pins down D5
                    ev.certified = ev.involution_prime.is_some();
                } else {
                    ev.class = GaloisClass::A5Certified;
                    ev.certified = true;
                }
            }
            Err(e) => {
                ev.class = GaloisClass::Indeterminate;
                ev.note = Some(e.to_string());
            }
        }
    } else if ev.primes_sampled > 0 {
        ev.class = sampled_class;
    }
    ev
}
