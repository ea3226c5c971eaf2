//! Hunter coefficient bounds for totally real quintics.
//!
//! For a field of discriminant `D` there is a generator whose minimal
//! polynomial `x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5` satisfies
//! `0 <= a1 <= 2` and `T2 <= a1^2/5 + (4D/5)^(1/4)`. Newton's relations
//! then bound the remaining coefficients in the order a2, a3, a5, a4.
//!
//! Every real-valued bound is turned into an exact integer condition or
//! rounded outward, so no admissible coefficient is ever dropped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{iroot, Rounding};

/// Fractional bits of the fixed-point `t2` bound.
pub const T2_FRACTION_BITS: u32 = 32;

/// Inclusive integer interval; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub const EMPTY: IntRange = IntRange { lo: 1, hi: 0 };

    pub fn new(lo: i64, hi: i64) -> Self {
        IntRange { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }

    pub fn is_subset_of(&self, other: &IntRange) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// `ceil(a / b)` for `b > 0`.
fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn to_i64(x: BigInt) -> i64 {
    // bounds saturate; the enumerator rejects boxes this large up front
    x.to_i64().unwrap_or(if x.is_negative() {
        i64::MIN / 4
    } else {
        i64::MAX / 4
    })
}

/// Fixed-point upper bound `U` on `t2 = a1^2/5 + (4D/5)^(1/4)`, scaled by
/// `2^32`: the smallest integer `m` with `m / 2^32 >= t2`.
pub fn t2_upper(a1: i64, disc: &BigInt) -> BigInt {
    assert!(
        disc.is_positive(),
        "t2_upper: discriminant must be positive"
    );
    // 5 m - 2^32 a1^2 >= 5 * 2^32 * (4D/5)^(1/4) = (5^3 2^130 D)^(1/4)
    let radicand = BigInt::from(125) * (BigInt::from(1) << 130) * disc;
    let k = iroot(&radicand, 4, Rounding::Ceil);
    let shifted = BigInt::from(a1 * a1) << T2_FRACTION_BITS;
    div_ceil(&(k + shifted), &BigInt::from(5))
}

pub fn t2_to_f64(t2_fixed: &BigInt) -> f64 {
    t2_fixed.to_f64().unwrap_or(f64::INFINITY) / (1u64 << T2_FRACTION_BITS) as f64
}

/// Power sums `S1..S4` from Newton's relations.
pub fn power_sums(a1: i128, a2: i128, a3: i128, a4: i128) -> (i128, i128, i128, i128) {
    let s1 = a1;
    let s2 = a1 * s1 - 2 * a2;
    let s3 = a1 * s2 - a2 * s1 + 3 * a3;
    let s4 = a1 * s3 - a2 * s2 + a3 * s1 - 4 * a4;
    (s1, s2, s3, s4)
}

/// Search context for one trace value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundContext {
    pub disc: BigInt,
    pub a1: i64,
    /// Upper bound on t2, fixed point with [`T2_FRACTION_BITS`] fraction bits.
    pub t2_upper: BigInt,
}

impl BoundContext {
    pub fn new(a1: i64, disc: &BigInt) -> Self {
        assert!((0..=2).contains(&a1), "trace must lie in 0..=2");
        BoundContext {
            disc: disc.clone(),
            a1,
            t2_upper: t2_upper(a1, disc),
        }
    }

    /// Context with an explicit fixed-point bound (used to probe rounding).
    pub fn with_t2(a1: i64, disc: &BigInt, t2_upper: BigInt) -> Self {
        BoundContext {
            disc: disc.clone(),
            a1,
            t2_upper,
        }
    }

    /// `ceil((a1^2 - t2)/2) <= a2 <= floor((a1^2 - 6)/2)`.
    pub fn a2_interval(&self) -> IntRange {
        let a1sq = BigInt::from(self.a1 * self.a1);
        let num = (&a1sq << T2_FRACTION_BITS) - &self.t2_upper;
        let lo = div_ceil(&num, &(BigInt::from(1) << (T2_FRACTION_BITS + 1)));
        let hi = Integer::div_floor(&(self.a1 * self.a1 - 6), &2);
        IntRange::new(to_i64(lo), hi)
    }

    pub fn s2(&self, a2: i64) -> i64 {
        self.a1 * self.a1 - 2 * a2
    }

    /// Integers `a3` with `|3 a3 + a1^3 - 3 a1 a2| <= S2^(3/2)`.
    pub fn a3_interval(&self, a2: i64) -> IntRange {
        let s2 = self.s2(a2);
        assert!(s2 > 0, "a3_interval needs S2 > 0 (got {s2})");
        let a1 = self.a1 as i128;
        let center = -a1 * a1 * a1 + 3 * a1 * a2 as i128;
        let radius = iroot(&num_traits::pow(BigInt::from(s2), 3), 2, Rounding::Floor);
        let radius = radius.to_i128().expect("radius fits in i128");
        let lo = (center - radius).div_ceil_signed(3);
        let hi = Integer::div_floor(&(center + radius), &3);
        IntRange::new(lo as i64, hi as i64)
    }

    /// Largest `|a5|` with `|a5|^2 5^5 < S2^5`; `0` means no admissible a5.
    pub fn a5_max_abs(&self, a2: i64) -> i64 {
        let s2 = self.s2(a2);
        if s2 <= 0 {
            return 0;
        }
        let s2_5 = num_traits::pow(BigInt::from(s2), 5);
        let q = (s2_5 - 1u32).div_floor(&BigInt::from(3125));
        if q.is_negative() {
            return 0;
        }
        to_i64(iroot(&q, 2, Rounding::Floor))
    }

    /// Signed a5 range; zero is excluded by the enumerator.
    pub fn a5_interval(&self, a2: i64) -> IntRange {
        let m = self.a5_max_abs(a2);
        if m == 0 {
            IntRange::EMPTY
        } else {
            IntRange::new(-m, m)
        }
    }

    /// `(N - S2^2)/4 <= a4 <= (N - L)/4` with `N = a1(a3 + S3) - a2 S2`
    /// and `L` the least integer with `L >= 5|a5|^(4/5)`.
    pub fn a4_interval(&self, a2: i64, a3: i64, a5: i64) -> IntRange {
        let (a1, a2w, a3w) = (self.a1 as i128, a2 as i128, a3 as i128);
        let (_, s2, s3, _) = power_sums(a1, a2w, a3w, 0);
        let n = a1 * (a3w + s3) - a2w * s2;
        let l = s4_lower_bound(a5);
        let lo = (n - s2 * s2).div_ceil_signed(4);
        let hi = Integer::div_floor(&(n - l), &4);
        IntRange::new(lo as i64, hi as i64)
    }
}

/// Least integer `L` with `L^5 >= 5^5 |a5|^4`, i.e. `ceil(5 |a5|^(4/5))`.
pub fn s4_lower_bound(a5: i64) -> i128 {
    let a = a5.unsigned_abs() as u128;
    let target = a.checked_pow(4).and_then(|x| x.checked_mul(3125));
    match target {
        Some(t) => {
            let mut m = (t as f64).powf(0.2).floor() as u128;
            m = m.saturating_sub(2);
            while m.checked_pow(5).is_some_and(|v| v < t) {
                m += 1;
            }
            m as i128
        }
        None => {
            let t = BigInt::from(a).pow(4) * 3125;
            iroot(&t, 5, Rounding::Ceil)
                .to_i128()
                .expect("S4 bound fits in i128")
        }
    }
}

trait DivCeil {
    fn div_ceil_signed(self, d: i128) -> i128;
}

impl DivCeil for i128 {
    fn div_ceil_signed(self, d: i128) -> i128 {
        -Integer::div_floor(&(-self), &d)
    }
}
