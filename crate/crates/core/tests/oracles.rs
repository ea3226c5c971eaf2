use std::f64::consts::PI;

use icosa_core::arith::{is_prime_u64, isqrt_u128, pow_mod};
use icosa_core::pipeline::{search_and_verify, PipelineOptions};
use icosa_core::sanity::{
    cyclotomic_sanity, dihedral_sanity, period_polynomial, real_quadratic_class_number,
};
use icosa_core::sturm::sturm_real_root_count;
use icosa_core::targeting::{RepType, SearchTarget};
use icosa_core::verifier::{irreducible_over_q, verify, DiscVerdict, GaloisClass, VerifyOptions};
use num_bigint::BigInt;

/// `log` of the fundamental unit of `Q(sqrt p)`, `p = 1 mod 4`, as the sum of
/// the logs of the complete quotients over one period of the continued
/// fraction of `(1 + sqrt p) / 2`.
fn regulator(p: u64) -> f64 {
    let d = p as i64;
    let s = isqrt_u128(p as u128) as i64;
    let root = (p as f64).sqrt();
    let step = |(pp, q): (i64, i64)| {
        let a = (pp + s).div_euclid(q);
        let np = a * q - pp;
        (np, (d - np * np) / q)
    };
    let start = step((1, 2));
    let mut cur = start;
    let mut log = 0.0;
    loop {
        log += ((cur.0 as f64 + root) / cur.1 as f64).ln();
        cur = step(cur);
        if cur == start {
            return log;
        }
    }
}

/// Class number from the analytic class number formula.
fn analytic_class_number(p: u64) -> f64 {
    let sum: f64 = (1..p)
        .map(|a| {
            let chi = if pow_mod(a, (p - 1) / 2, p) == 1 {
                1.0
            } else {
                -1.0
            };
            chi * (PI * a as f64 / p as f64).sin().ln()
        })
        .sum();
    -sum / (2.0 * regulator(p))
}

#[test]
fn class_numbers_agree_with_analytic_formula_below_500() {
    let mut checked = 0;
    for p in (5..500).filter(|&p| p % 4 == 1 && is_prime_u64(p)) {
        let h = analytic_class_number(p);
        assert!((h - h.round()).abs() < 1e-6, "p = {p}: analytic value {h}");
        assert_eq!(real_quadratic_class_number(p), h.round() as u64, "p = {p}");
        checked += 1;
    }
    assert!(checked > 40);
}

#[test]
fn smallest_prime_with_five_dividing_class_number() {
    let first = (5..)
        .filter(|&p| p % 4 == 1 && is_prime_u64(p))
        .find(|&p| real_quadratic_class_number(p).is_multiple_of(5))
        .unwrap();
    assert_eq!(first, 401);
}

#[test]
fn period_polynomials_below_200_certify_as_cyclic() {
    let opts = VerifyOptions {
        certify: true,
        ..VerifyOptions::default()
    };
    for p in (11..200).filter(|&p| p % 5 == 1 && is_prime_u64(p)) {
        let f = period_polynomial(p);
        assert_eq!(f.coeff(4), BigInt::from(1), "p = {p}");
        assert!(irreducible_over_q(&f), "p = {p}");
        assert_eq!(sturm_real_root_count(&f, None).unwrap(), 5, "p = {p}");
        let cert = verify(&f, p, 4, &opts).unwrap();
        assert!(
            matches!(cert.field_disc, DiscVerdict::Accept { .. }),
            "p = {p}: {:?}",
            cert.field_disc
        );
        assert_eq!(cert.e_p(), Some(5), "p = {p}");
        assert_eq!(cert.galois_class(), Some(GaloisClass::C5), "p = {p}");
        assert!(cert.rep_type.is_none(), "p = {p}");
    }
}

#[test]
fn cyclotomic_canary_at_11_and_31() {
    for p in [11, 31] {
        let target = SearchTarget::new(p, RepType::T3a).unwrap();
        let result = search_and_verify(target, &PipelineOptions::default());
        let certs = result.certificates();
        assert!(cyclotomic_sanity(p, &certs, 0).is_pass(), "p = {p}");
        let doctored: Vec<_> = certs
            .into_iter()
            .filter(|c| c.galois_class() != Some(GaloisClass::C5))
            .collect();
        assert!(cyclotomic_sanity(p, &doctored, 0).is_fail(), "p = {p}");
    }
}

#[test]
fn dihedral_canary_at_401() {
    let target = SearchTarget::new(401, RepType::T3c).unwrap();
    let result = search_and_verify(target, &PipelineOptions::default());
    assert!(dihedral_sanity(401, &result.certificates()).is_pass());
    assert_eq!(result.a5_count(), 0);
}
