//! Irreducibility over Q for monic integer polynomials of degree at most 5.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor_bounded, iroot, primes_up_to, FactoringBudget, Rounding};
use crate::modp::ModPoly;
use crate::poly::IntPoly;
use crate::sturm::{isolate_real_roots, refine_root};

const MODULAR_PRIMES: u64 = 100;
const DIVISOR_SCAN_LIMIT: u64 = 1 << 20;

/// True iff the monic polynomial `f` (degree 1..=5, nonzero constant term)
/// has no factor of degree 1 or 2 over Z, which for degree at most 5 means
/// it is irreducible.
pub fn irreducible_over_q(f: &IntPoly) -> bool {
    assert!(
        f.is_monic() && (1..=5).contains(&f.deg()),
        "monic of degree 1..=5 expected"
    );
    let n = f.deg();
    if n == 1 {
        return true;
    }
    if f.coeff(0).is_zero() {
        return false;
    }
    if !f.is_squarefree() {
        return false;
    }
    let (mut linear_excluded, mut quadratic_excluded) = (false, n < 4);
    for q in primes_up_to(MODULAR_PRIMES) {
        let pattern = ModPoly::from_int_poly(f, q).factor_pattern();
        let degrees: Vec<usize> = pattern
            .iter()
            .flat_map(|&(d, m)| std::iter::repeat_n(d, m))
            .collect();
        if degrees.len() == 1 {
            return true;
        }
        linear_excluded |= !subset_sums_to(&degrees, 1);
        quadratic_excluded |= !subset_sums_to(&degrees, 2);
        if linear_excluded && quadratic_excluded {
            return true;
        }
    }
    !has_linear_factor(f) && (n < 4 || !has_quadratic_factor(f))
}

fn subset_sums_to(degrees: &[usize], target: usize) -> bool {
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=target).rev() {
            reach[s] |= reach[s - d];
        }
    }
    reach[target]
}

/// Integer `R` bounding the modulus of every complex root of monic `f`.
fn root_modulus_bound(f: &IntPoly) -> BigInt {
    let n = f.deg();
    let mut m = BigInt::one();
    for k in 1..=n {
        let c = f.coeff(n - k).abs();
        let r = iroot(&c, k as u32, Rounding::Ceil);
        if r > m {
            m = r;
        }
    }
    m * 2
}

/// Positive divisors of `|c|` not exceeding `limit`.
fn small_divisors(c: &BigInt, limit: &BigInt) -> Vec<BigInt> {
    let c = c.abs();
    let limit = limit.min(&c).clone();
    let scan = |l: u64| -> Vec<BigInt> {
        (1..=l)
            .map(BigInt::from)
            .filter(|d| c.is_multiple_of(d))
            .collect()
    };
    if let Some(l) = limit.to_u64().filter(|&l| l <= DIVISOR_SCAN_LIMIT) {
        return scan(l);
    }
    let fac = factor_bounded(&c, FactoringBudget::default());
    if !fac.is_complete() {
        return scan(limit.to_u64().expect("divisor bound fits in u64"));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in &fac.primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut x = d.clone();
            for _ in 0..=*e {
                if x > limit {
                    break;
                }
                next.push(x.clone());
                x *= p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

fn has_linear_factor(f: &IntPoly) -> bool {
    let bound = root_modulus_bound(f);
    small_divisors(&f.coeff(0), &bound)
        .into_iter()
        .any(|d| f.eval(&d).is_zero() || f.eval(&-d).is_zero())
}

/// Integer roots of a nonzero integer polynomial.
fn integer_roots(g: &IntPoly) -> Vec<BigInt> {
    if g.deg() == 0 {
        return Vec::new();
    }
    let sf = g.div_exact(&g.gcd(&g.derivative())).expect("gcd divides");
    let mut out = Vec::new();
    for (lo, hi) in isolate_real_roots(&sf).expect("squarefree part") {
        let (lo, hi) = refine_root(&sf, lo, hi, 2);
        let (a, b) = (lo.ceil().to_integer(), hi.floor().to_integer());
        let mut k = a;
        while k <= b {
            if sf.eval(&k).is_zero() {
                out.push(k.clone());
            }
            k += 1;
        }
    }
    out
}

/// Remainder of `f` modulo `x^2 + u x + v` as `(r1(u), r0(u))`, meaning
/// `r1(u) x + r0(u)`.
fn remainder_in_u(f: &IntPoly, v: &BigInt) -> (IntPoly, IntPoly) {
    let u = IntPoly::x();
    let negv = IntPoly::constant(-v);
    // x^k = A_k x + B_k
    let (mut a, mut b) = (IntPoly::zero(), IntPoly::constant(BigInt::one()));
    let (mut r1, mut r0) = (IntPoly::zero(), IntPoly::zero());
    for k in 0..=f.deg() {
        let c = IntPoly::constant(f.coeff(k));
        r1 = r1.add(&a.mul(&c));
        r0 = r0.add(&b.mul(&c));
        let na = b.sub(&u.mul(&a));
        let nb = negv.mul(&a);
        a = na;
        b = nb;
    }
    (r1, r0)
}

fn has_quadratic_factor(f: &IntPoly) -> bool {
    let r = root_modulus_bound(f);
    let limit = &r * &r;
    for d in small_divisors(&f.coeff(0), &limit) {
        for v in [d.clone(), -d] {
            let (r1, r0) = remainder_in_u(f, &v);
            let g = r1.gcd(&r0);
            if g.is_zero() {
                continue;
            }
            for u in integer_roots(&g) {
                let q = IntPoly::new(vec![v.clone(), u, BigInt::one()]);
                if f.div_exact(&q).is_some() {
                    return true;
                }
            }
        }
    }
    false
}
