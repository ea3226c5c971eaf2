//! Independent constructions used to check the search: the quintic Gauss
//! period polynomial of conductor `p` (a guaranteed cyclic hit) and narrow
//! class numbers of `Q(sqrt p)` (a 5-divisible one guarantees a dihedral hit).

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, isqrt_u128, pow_mod};
use crate::poly::IntPoly;
use crate::verifier::{fingerprint, FieldCertificate, GaloisClass};

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime_u64(p));
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primes have primitive roots")
}

/// Element of `Z[x]/(x^p - 1)`.
#[derive(Clone)]
struct GroupRing(Vec<i128>);

impl GroupRing {
    fn scalar(p: usize, c: i128) -> Self {
        let mut v = vec![0; p];
        v[0] = c;
        GroupRing(v)
    }

    fn add_assign(&mut self, o: &Self) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }

    /// Product with a 0/1 element given by its support.
    fn mul_sparse(&self, support: &[usize]) -> Self {
        let p = self.0.len();
        let mut out = vec![0i128; p];
        for &t in support {
            for (k, &c) in self.0.iter().enumerate() {
                if c != 0 {
                    let idx = (k + t) % p;
                    out[idx] = out[idx].checked_add(c).expect("period arithmetic overflow");
                }
            }
        }
        GroupRing(out)
    }

    /// Rational value, using `1 + zeta + ... + zeta^(p-1) = 0`.
    fn rational_value(&self) -> i128 {
        let c1 = self.0[1];
        assert!(
            self.0[1..].iter().all(|&c| c == c1),
            "element is not rational"
        );
        self.0[0] - c1
    }
}

/// Minimal polynomial of the quintic Gauss period of conductor `p`,
/// computed exactly in the group ring of the cyclic group of order `p`.
pub fn period_polynomial(p: u64) -> IntPoly {
    assert!(is_prime_u64(p) && p % 5 == 1, "p must be a prime = 1 mod 5");
    let n = p as usize;
    let g = primitive_root(p);
    let periods: Vec<Vec<usize>> = (0..5)
        .map(|j| {
            let mut t = pow_mod(g, j, p);
            let step = pow_mod(g, 5, p);
            (0..(p - 1) / 5)
                .map(|_| {
                    let cur = t as usize;
                    t = t * step % p;
                    cur
                })
                .collect()
        })
        .collect();
    // coefficients of prod_j (X - eta_j), low first, in the group ring
    let mut coeffs = vec![GroupRing::scalar(n, 1)];
    for eta in &periods {
        let mut next = vec![GroupRing::scalar(n, 0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1].add_assign(c);
            let mut prod = c.mul_sparse(eta);
            prod.0.iter_mut().for_each(|x| *x = -*x);
            next[k].add_assign(&prod);
        }
        coeffs = next;
    }
    IntPoly::new(
        coeffs
            .iter()
            .map(|c| BigInt::from(c.rational_value()))
            .collect(),
    )
}

/// Narrow class number of discriminant `p` for a prime `p = 1 mod 4`: the
/// number of cycles of reduced indefinite forms `(a, b, c)`, `b^2 - 4ac = p`.
/// Since `Q(sqrt p)` has a unit of norm -1 here, this is also the wide class
/// number.
pub fn real_quadratic_class_number(p: u64) -> u64 {
    assert!(is_prime_u64(p) && p % 4 == 1, "p must be a prime = 1 mod 4");
    let d = p as i64;
    let s = isqrt_u128(p as u128) as i64;
    let mut forms: Vec<(i64, i64, i64)> = Vec::new();
    for b in (1..=s).filter(|b| b % 2 == 1) {
        let ac = (b * b - d) / 4;
        for a_abs in ((s - b + 2) / 2).max(1)..=(s + b) / 2 {
            if ac % a_abs != 0 {
                continue;
            }
            for a in [a_abs, -a_abs] {
                forms.push((a, b, ac / a));
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| -> (i64, i64, i64) {
        let m = 2 * c.abs();
        // b' = -b mod 2|c| in [s - 2|c| + 1, s]
        let lo = s - m + 1;
        let b2 = lo + (-b - lo).rem_euclid(m);
        (c, b2, (b2 * b2 - d) / (4 * c))
    };
    let mut seen: HashSet<(i64, i64, i64)> = HashSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut cur = f;
        while seen.insert(cur) {
            cur = rho(cur);
        }
        debug_assert_eq!(cur, f, "reduction operator left the reduced set");
    }
    cycles
}

/// Outcome of a sanity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum SanityReport {
    Pass(String),
    Fail(String),
    NotApplicable(String),
}

impl SanityReport {
    pub fn is_fail(&self) -> bool {
        matches!(self, SanityReport::Fail(_))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, SanityReport::Pass(_))
    }
}

impl fmt::Display for SanityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SanityReport::Pass(s) => write!(f, "pass: {s}"),
            SanityReport::Fail(s) => write!(f, "FAIL: {s}"),
            SanityReport::NotApplicable(s) => write!(f, "not applicable: {s}"),
        }
    }
}

fn disc_label(c: &FieldCertificate) -> Option<String> {
    c.field_disc_label()
}

/// Passes iff the certificates from a type-3a search at `p` contain the
/// cyclic field of conductor `p`.
pub fn cyclotomic_sanity(p: u64, results: &[FieldCertificate], seed: u64) -> SanityReport {
    if !is_prime_u64(p) || p % 5 != 1 {
        return SanityReport::NotApplicable(format!("{p} is not a prime = 1 mod 5"));
    }
    let label = format!("{p}^4");
    let target = fingerprint(&period_polynomial(p), &label, p, seed);
    let hit = results.iter().find(|c| {
        disc_label(c).as_deref() == Some(label.as_str())
            && c.e_p() == Some(5)
            && c.galois_class() == Some(GaloisClass::C5)
            && target.is_some()
            && fingerprint(&c.poly, &label, p, seed) == target
    });
    match hit {
        Some(c) => SanityReport::Pass(format!("cyclic field of conductor {p} found as {}", c.poly)),
        None => SanityReport::Fail(format!(
            "no cyclic record matching the period polynomial at {p}"
        )),
    }
}

/// Passes iff the certificates from a type-3c search at `p` contain a
/// dihedral quintic of discriminant `p^2`, when `5 | h(p)`.
pub fn dihedral_sanity(p: u64, results: &[FieldCertificate]) -> SanityReport {
    if !is_prime_u64(p) || p % 4 != 1 {
        return SanityReport::NotApplicable(format!("{p} is not a prime = 1 mod 4"));
    }
    let h = real_quadratic_class_number(p);
    if !h.is_multiple_of(5) {
        return SanityReport::NotApplicable(format!("class number {h} at {p} is prime to 5"));
    }
    let label = format!("{p}^2");
    let hit = results.iter().find(|c| {
        disc_label(c).as_deref() == Some(label.as_str())
            && c.e_p() == Some(2)
            && c.galois_class() == Some(GaloisClass::D5)
    });
    match hit {
        Some(c) => SanityReport::Pass(format!("dihedral quintic {} (class number {h})", c.poly)),
        None => SanityReport::Fail(format!("class number {h} at {p} but no dihedral record")),
    }
}
