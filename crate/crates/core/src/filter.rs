//! Cheap exact filters applied to every enumerated tuple.
//!
//! The Hankel matrix `H = [S_(i+j)]` of the power sums is positive definite
//! exactly when the quintic has five distinct real roots, and
//! `det H = disc(f)`. Its leading minors fall out of fraction-free Gaussian
//! elimination, so one pass decides squarefreeness, total reality and yields
//! the discriminant for the p-adic tests.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, is_square_u128, valuation, valuation_i128};

/// Stage at which a tuple left the filter chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterStage {
    /// repeated root or fewer than five real roots
    NotTotallyReal,
    /// `v_p(D) < e` or `v_p(D) - e` odd
    Valuation,
    /// `D / p^e` not a perfect square
    Cofactor,
    Passed,
}

/// Names of the filters a surviving candidate passed, in order.
pub const FILTER_NAMES: [&str; 4] = [
    "squarefree",
    "totally_real",
    "p_valuation",
    "square_cofactor",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub stage: FilterStage,
    /// Polynomial discriminant, known once the tuple is totally real.
    pub disc: Option<BigInt>,
}

/// Power sums `S_0..S_8` of the roots of `x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5`.
pub fn power_sums_8(a: &[i64; 5]) -> Option<[i128; 9]> {
    let e: [i128; 5] = a.map(|x| x as i128);
    let mut s = [0i128; 9];
    s[0] = 5;
    for k in 1..=8usize {
        let mut acc: i128 = 0;
        for i in 1..=k.min(5) {
            let term = if i == k {
                e[i - 1].checked_mul(k as i128)?
            } else {
                e[i - 1].checked_mul(s[k - i])?
            };
            acc = if i % 2 == 1 {
                acc.checked_add(term)?
            } else {
                acc.checked_sub(term)?
            };
        }
        s[k] = acc;
    }
    Some(s)
}

fn power_sums_8_big(a: &[i64; 5]) -> [BigInt; 9] {
    let e: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
    let mut s: [BigInt; 9] = Default::default();
    s[0] = BigInt::from(5);
    for k in 1..=8usize {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(5) {
            let term = if i == k {
                &e[i - 1] * k
            } else {
                &e[i - 1] * &s[k - i]
            };
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s[k] = acc;
    }
    s
}

enum Definite<T> {
    No,
    Yes(T),
    Overflow,
}

fn hankel_det_i128(s: &[i128; 9]) -> Definite<i128> {
    let mut m = [[0i128; 5]; 5];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = s[i + j];
        }
    }
    let mut prev: i128 = 1;
    for k in 0..4 {
        let piv = m[k][k];
        if piv <= 0 {
            return Definite::No;
        }
        for i in k + 1..5 {
            for j in i..5 {
                let v = piv
                    .checked_mul(m[i][j])
                    .zip(m[i][k].checked_mul(m[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y));
                let Some(v) = v else {
                    return Definite::Overflow;
                };
                m[i][j] = v / prev;
                m[j][i] = m[i][j];
            }
        }
        prev = piv;
    }
    if m[4][4] > 0 {
        Definite::Yes(m[4][4])
    } else {
        Definite::No
    }
}

fn hankel_det_big(s: &[BigInt; 9]) -> Option<BigInt> {
    let mut m: Vec<Vec<BigInt>> = (0..5)
        .map(|i| (0..5).map(|j| s[i + j].clone()).collect())
        .collect();
    let mut prev = BigInt::from(1);
    for k in 0..4 {
        let piv = m[k][k].clone();
        if !piv.is_positive() {
            return None;
        }
        for i in k + 1..5 {
            for j in i..5 {
                let v = (&piv * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[j][i] = v.clone();
                m[i][j] = v;
            }
        }
        prev = piv;
    }
    m[4][4].is_positive().then(|| m[4][4].clone())
}

/// Discriminant of the search quintic if it has five distinct real roots.
pub fn totally_real_disc(a: &[i64; 5]) -> Option<BigInt> {
    if let Some(s) = power_sums_8(a) {
        match hankel_det_i128(&s) {
            Definite::No => return None,
            Definite::Yes(d) => return Some(BigInt::from(d)),
            Definite::Overflow => {}
        }
    }
    hankel_det_big(&power_sums_8_big(a))
}

/// Runs the full cheap-filter chain for target discriminant `p^e`.
pub fn cheap_filter(a: &[i64; 5], p: u64, e: u32) -> FilterOutcome {
    if let Some(s) = power_sums_8(a) {
        match hankel_det_i128(&s) {
            Definite::No => {
                return FilterOutcome {
                    stage: FilterStage::NotTotallyReal,
                    disc: None,
                }
            }
            Definite::Yes(d) => {
                let stage = padic_stage_i128(d, p, e);
                return FilterOutcome {
                    stage,
                    disc: Some(BigInt::from(d)),
                };
            }
            Definite::Overflow => {}
        }
    }
    match hankel_det_big(&power_sums_8_big(a)) {
        None => FilterOutcome {
            stage: FilterStage::NotTotallyReal,
            disc: None,
        },
        Some(d) => FilterOutcome {
            stage: padic_stage(&d, p, e),
            disc: Some(d),
        },
    }
}

fn padic_stage_i128(d: i128, p: u64, e: u32) -> FilterStage {
    let v = valuation_i128(d, p);
    if v < e || (v - e) % 2 == 1 {
        return FilterStage::Valuation;
    }
    let mut rest = d;
    for _ in 0..v {
        rest /= p as i128;
    }
    if is_square_u128(rest as u128) {
        FilterStage::Passed
    } else {
        FilterStage::Cofactor
    }
}

/// The p-adic part of the chain for an arbitrary positive discriminant.
pub fn padic_stage(d: &BigInt, p: u64, e: u32) -> FilterStage {
    if let Some(small) = d.to_i128() {
        if small > 0 {
            return padic_stage_i128(small, p, e);
        }
    }
    let (v, rest) = valuation(d, p);
    if v < e || (v - e) % 2 == 1 {
        FilterStage::Valuation
    } else if exact_sqrt(&rest).is_some() {
        FilterStage::Passed
    } else {
        FilterStage::Cofactor
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;
    use crate::sturm::sturm_real_root_count;

    fn kernel_totally_real(a: &[i64; 5]) -> Option<BigInt> {
        let f = IntPoly::from_search_coeffs(a);
        if !f.is_squarefree() {
            return None;
        }
        (sturm_real_root_count(&f, None).unwrap() == 5).then(|| f.discriminant())
    }

    #[test]
    fn agrees_with_kernel_on_a_grid() {
        for a1 in 0..=2 {
            for a2 in -8..=-3 {
                for a3 in -5..=5 {
                    for a4 in -6..=6 {
                        for a5 in [-3, -1, 1, 2] {
                            let a = [a1, a2, a3, a4, a5];
                            assert_eq!(totally_real_disc(&a), kernel_totally_real(&a), "{a:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn table_row_passes() {
        let a = [1, -780, 1795, 3106, -344];
        let out = cheap_filter(&a, 1951, 4);
        assert_eq!(out.stage, FilterStage::Passed);
        assert_eq!(out.disc.unwrap().to_string(), "268684727248076769842884");
        // same tuple against the wrong prime
        assert_eq!(cheap_filter(&a, 11, 4).stage, FilterStage::Valuation);
    }

    #[test]
    fn repeated_roots_rejected() {
        // (x-1)^2 (x-2)(x-3)(x+4): a1 = 3
        let f = IntPoly::from_i64(&[1, -1])
            .pow(2)
            .mul(&IntPoly::from_i64(&[-2, 1]))
            .mul(&IntPoly::from_i64(&[-3, 1]))
            .mul(&IntPoly::from_i64(&[4, 1]));
        let a = f.search_coeffs().unwrap().map(|c| c.to_i64().unwrap());
        assert_eq!(cheap_filter(&a, 5, 0).stage, FilterStage::NotTotallyReal);
    }

    #[test]
    fn overflow_falls_back_to_bigints() {
        // roots near 0, +-10^4, +-2*10^4: the fast elimination overflows
        let r = 10_000i64;
        let f = IntPoly::from_i64(&[0, 1])
            .mul(&IntPoly::from_i64(&[-r, 1]))
            .mul(&IntPoly::from_i64(&[r, 1]))
            .mul(&IntPoly::from_i64(&[-2 * r, 1]))
            .mul(&IntPoly::from_i64(&[2 * r, 1]));
        let f = f.add(&IntPoly::from_i64(&[1]));
        let a = f.search_coeffs().unwrap().map(|c| c.to_i64().unwrap());
        assert!(
            power_sums_8(&a).is_none()
                || matches!(
                    hankel_det_i128(&power_sums_8(&a).unwrap()),
                    Definite::Overflow
                )
        );
        assert_eq!(totally_real_disc(&a), Some(f.discriminant()));
    }
}
