//! Integer helpers: directed-rounding roots, valuations, primality and a
//! bounded factoring pipeline used for discriminant certification.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for [`iroot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

/// Integer k-th root of a non-negative integer with directed rounding.
///
/// `Floor` returns the largest `m` with `m^k <= n`, `Ceil` the smallest `m`
/// with `m^k >= n`.
///
/// # Panics
/// If `n` is negative or `k == 0`.
pub fn iroot(n: &BigInt, k: u32, rounding: Rounding) -> BigInt {
    assert!(k > 0, "iroot: k must be positive");
    assert!(!n.is_negative(), "iroot: negative radicand");
    let m = n.magnitude().nth_root(k);
    let m = BigInt::from_biguint(Sign::Plus, m);
    match rounding {
        Rounding::Floor => m,
        Rounding::Ceil => {
            if num_traits::pow(m.clone(), k as usize) == *n {
                m
            } else {
                m + 1
            }
        }
    }
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_square_u128(n: u128) -> bool {
    let r = isqrt_u128(n);
    r * r == n
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    // fix up the float estimate in both directions
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// q-adic valuation of a nonzero integer, together with the cofactor.
pub fn valuation(n: &BigInt, q: u64) -> (u32, BigInt) {
    assert!(q >= 2);
    if n.is_zero() {
        return (u32::MAX, BigInt::zero());
    }
    let q = BigInt::from(q);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (d, r) = m.div_rem(&q);
        if !r.is_zero() {
            break;
        }
        m = d;
        v += 1;
    }
    (v, m)
}

pub fn valuation_i128(mut n: i128, q: u64) -> u32 {
    debug_assert!(n != 0);
    let q = q as i128;
    let mut v = 0;
    while n % q == 0 {
        n /= q;
        v += 1;
    }
    v
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime (or any modulus coprime to `a`).
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // these bases are deterministic for all 64-bit integers
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first 20 prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in primes_up_to(71) {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Limits for [`factor_bounded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactoringBudget {
    pub trial_limit: u64,
    pub rho_iterations: u64,
}

impl Default for FactoringBudget {
    fn default() -> Self {
        FactoringBudget {
            trial_limit: 1_000_000,
            rho_iterations: 10_000_000,
        }
    }
}

/// Result of the bounded factoring pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors with exponents, ascending.
    pub primes: Vec<(BigInt, u32)>,
    /// Composite cofactor the budget could not split (1 when complete).
    pub unfactored: BigInt,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_one()
    }
}

/// Trial division to `budget.trial_limit`, then Pollard-rho (Brent) with an
/// iteration budget shared across all splits.
pub fn factor_bounded(n: &BigInt, budget: FactoringBudget) -> Factorization {
    assert!(n.is_positive(), "factor_bounded: n must be positive");
    let mut m = n.clone();
    let mut found: Vec<(BigInt, u32)> = Vec::new();
    for p in primes_up_to(budget.trial_limit) {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let (v, rest) = valuation(&m, p);
        if v > 0 {
            found.push((bp, v));
            m = rest;
        }
    }
    let mut unfactored = BigInt::one();
    if !m.is_one() {
        let bound = BigInt::from(budget.trial_limit);
        if m <= (&bound * &bound) || is_probable_prime(&m) {
            found.push((m, 1));
        } else {
            let mut iterations = budget.rho_iterations;
            let mut stack = vec![m];
            while let Some(c) = stack.pop() {
                if is_probable_prime(&c) {
                    found.push((c, 1));
                    continue;
                }
                if let Some(perfect) = exact_sqrt(&c) {
                    stack.push(perfect.clone());
                    stack.push(perfect);
                    continue;
                }
                match pollard_brent(&c, &mut iterations) {
                    Some(d) => {
                        let e = &c / &d;
                        stack.push(d);
                        stack.push(e);
                    }
                    None => unfactored *= c,
                }
            }
        }
    }
    found.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in found {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Factorization {
        primes: merged,
        unfactored,
    }
}

fn pollard_brent(n: &BigInt, iterations: &mut u64) -> Option<BigInt> {
    let one = BigInt::one();
    for c in 1u32..20 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigInt::from(2), 1u64, BigInt::one());
        let m = 128u64;
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                if *iterations < m {
                    return None;
                }
                *iterations -= m.min(r - k);
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

pub fn to_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}
