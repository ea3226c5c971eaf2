//! Exact Sturm chains and real-root isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::KernelError;
use crate::poly::IntPoly;

/// Sturm chain `f, f', -rem(...)` with every member scaled to primitive form
/// by a positive constant, so signs are those of the classical chain.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(f: &IntPoly) -> Result<Self, KernelError> {
        if f.is_zero() {
            return Err(KernelError::ZeroPolynomial);
        }
        if f.deg() == 0 {
            return Ok(SturmChain {
                chain: vec![f.clone()],
            });
        }
        if !f.is_squarefree() {
            return Err(KernelError::NotSquarefree(f.to_string()));
        }
        let mut chain = vec![positive_primitive(f), positive_primitive(&f.derivative())];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.deg() == 0 {
                break;
            }
            let delta = a.deg() - b.deg();
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^(delta+1) * rem; the chain wants -rem up to a positive factor
            let flip = b.lc().is_negative() && (delta + 1) % 2 == 1;
            let next = if flip { r } else { r.neg() };
            chain.push(positive_primitive(&next));
        }
        Ok(SturmChain { chain })
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|g| sign_at(g, x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|g| {
            let s: i8 = if g.lc().is_positive() { 1 } else { -1 };
            if positive || g.deg() % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations_at(lo) - self.variations_at(hi)
    }
}

fn positive_primitive(f: &IntPoly) -> IntPoly {
    let c = f.content();
    if c.is_zero() || c.is_one() {
        f.clone()
    } else {
        IntPoly::new(f.coeffs().iter().map(|a| a / &c).collect())
    }
}

/// Sign of `f` at a rational point, as -1/0/1.
pub fn sign_at(f: &IntPoly, x: &BigRational) -> i8 {
    // BigRational keeps a positive denominator
    let v = f.eval_homogeneous(x.numer(), x.denom());
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of a squarefree polynomial, optionally
/// restricted to the half-open interval `(lo, hi]`.
pub fn sturm_real_root_count(
    f: &IntPoly,
    interval: Option<(&BigRational, &BigRational)>,
) -> Result<usize, KernelError> {
    let chain = SturmChain::new(f)?;
    Ok(match interval {
        None => chain.count_all(),
        Some((lo, hi)) => chain.count_in(lo, hi),
    })
}

/// Integer bound `B` with every real root in `(-B, B)`.
pub fn cauchy_bound(f: &IntPoly) -> BigInt {
    let lc = f.lc().abs();
    let max = f
        .coeffs()
        .iter()
        .take(f.deg())
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    // 1 + max|c_i| / |lc|, rounded up
    BigInt::one() + (&max + &lc - 1) / &lc + 1
}

/// Disjoint intervals `(lo, hi]`, each holding exactly one real root, in
/// ascending order.
pub fn isolate_real_roots(f: &IntPoly) -> Result<Vec<(BigRational, BigRational)>, KernelError> {
    let chain = SturmChain::new(f)?;
    let b = BigRational::from_integer(cauchy_bound(f));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match chain.count_in(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Halve an isolating interval of a simple root until its width is at most
/// `2^-bits`. The root stays in the closed interval.
pub fn refine_root(
    f: &IntPoly,
    mut lo: BigRational,
    mut hi: BigRational,
    bits: u32,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(BigInt::from(2));
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    if sign_at(f, &hi) == 0 {
        return (hi.clone(), hi);
    }
    let s_hi = sign_at(f, &hi);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s = sign_at(f, &mid);
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn counts() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_real_root_count(&f, None).unwrap(), 0);
        let f = IntPoly::from_i64(&[0, -1, 0, 1]);
        assert_eq!(sturm_real_root_count(&f, None).unwrap(), 3);
        let f = IntPoly::from_i64(&[0, 4, 0, -5, 0, 1]);
        assert_eq!(sturm_real_root_count(&f, None).unwrap(), 5);
        assert_eq!(
            sturm_real_root_count(&f, Some((&q(-1, 2), &q(3, 2)))).unwrap(),
            2
        );
        // half-open: root at 2 counted on the right end only
        assert_eq!(
            sturm_real_root_count(&f, Some((&q(1, 1), &q(2, 1)))).unwrap(),
            1
        );
        assert_eq!(
            sturm_real_root_count(&f, Some((&q(2, 1), &q(3, 1)))).unwrap(),
            0
        );
    }

    #[test]
    fn rejects_repeated_roots() {
        let f = IntPoly::from_i64(&[1, -2, 1]);
        assert!(matches!(
            sturm_real_root_count(&f, None),
            Err(KernelError::NotSquarefree(_))
        ));
    }

    #[test]
    fn negative_leading_coefficient() {
        let f = IntPoly::from_i64(&[0, 1, 0, -1]);
        assert_eq!(sturm_real_root_count(&f, None).unwrap(), 3);
    }

    #[test]
    fn isolation_and_refinement() {
        let f: IntPoly = "x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344"
            .parse()
            .unwrap();
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 5);
        for (lo, hi) in roots {
            let (a, b) = refine_root(&f, lo, hi, 40);
            assert!(&b - &a <= q(1, 1 << 40));
            assert!(sign_at(&f, &a) * sign_at(&f, &b) <= 0);
        }
    }
}
