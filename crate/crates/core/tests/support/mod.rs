//! Property suites shared by the `properties` and `acceptance` targets.
//!
//! Each suite runs a fixed number of proptest cases with a deterministic
//! seed and returns the first failure, if any.

#![allow(dead_code)]

use std::collections::HashSet;

use icosa_core::arith::primes_up_to;
use icosa_core::engine::{Checkpoint, RunOptions, RunStatus, Search, SearchSpace};
use icosa_core::hunter::IntRange;
use icosa_core::modp::ModPoly;
use icosa_core::pipeline::UNIT_BUDGET;
use icosa_core::sturm::sturm_real_root_count;
use icosa_core::targeting::{RepType, SearchTarget};
use icosa_core::verifier::irreducible_over_q;
use icosa_core::verifier::order::{q_maximal_order, q_maximal_order_by_enlargement};
use icosa_core::IntPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const KNOWN_FIELDS: [(u64, &str); 6] = [
    (1951, "x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344"),
    (2141, "x^5 - x^4 - 856x^3 + 4025x^2 + 28501x - 40877"),
    (3701, "x^5 - x^4 - 1480x^3 - 18209x^2 + 2191x + 9683"),
    (3821, "x^5 - x^4 - 1528x^3 - 1987x^2 + 16629x - 12281"),
    (8501, "x^5 - x^4 - 3400x^3 - 41825x^2 + 671511x - 966731"),
    (9461, "x^5 - x^4 - 3784x^3 + 2649x^2 + 2960082x - 2781864"),
];

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(
        config,
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn report<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Product of polynomials mod `p`, coefficients low first.
fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// All monic quintics mod `p` of the shape required by `rep`, as low-first
/// coefficient vectors `[c0, .., c4]`.
fn shape_set(rep: RepType, p: u64) -> HashSet<[u64; 5]> {
    let neg = |a: u64| (p - a) % p;
    let mut out = HashSet::new();
    let mut push = |f: Vec<u64>| {
        assert_eq!(f.len(), 6);
        out.insert([f[0], f[1], f[2], f[3], f[4]]);
    };
    match rep {
        RepType::T3a => {
            for a in 0..p {
                let lin = [neg(a), 1];
                let mut f = vec![1];
                for _ in 0..5 {
                    f = mul_mod(&f, &lin, p);
                }
                push(f);
            }
        }
        RepType::T3b => {
            for a in 0..p {
                let lin = [neg(a), 1];
                let cube = mul_mod(&mul_mod(&lin, &lin, p), &lin, p);
                for b in 0..p {
                    for c in 0..p {
                        push(mul_mod(&cube, &[c, b, 1], p));
                    }
                }
            }
        }
        RepType::T3c => {
            for b in 0..p {
                for c in 0..p {
                    let q = [c, b, 1];
                    let sq = mul_mod(&q, &q, p);
                    for d in 0..p {
                        push(mul_mod(&sq, &[d, 1], p));
                    }
                }
            }
        }
        RepType::Untargeted => unreachable!(),
    }
    out
}

/// Low-first coefficients mod `p` of `x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5`.
fn reduce(a: [i64; 5], p: u64) -> [u64; 5] {
    let m = |x: i64| x.rem_euclid(p as i64) as u64;
    [m(-a[4]), m(a[3]), m(-a[2]), m(a[1]), m(-a[0])]
}

/// Search coefficients of a low-first monic quintic mod `p`, lifted to `[0, p)`.
fn to_search(c: &[u64; 5], p: u64) -> [i64; 5] {
    let neg = |x: u64| ((p - x) % p) as i64;
    [neg(c[4]), c[3] as i64, neg(c[2]), c[1] as i64, neg(c[0])]
}

/// Suite (i): the targeted stream of a synthetic box equals the brute-force
/// selection of box members whose reduction has the target shape.
pub fn targeted_matches_brute_force() -> Result<(), String> {
    let mut runner = runner(30, 1);
    let cases = (
        prop_oneof![Just(RepType::T3a), Just(RepType::T3b), Just(RepType::T3c)],
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        prop::array::uniform5(-3i64..=3),
        prop::array::uniform4(4i64..=24),
        0i64..=2,
    );
    report(runner.run(
        &cases,
        |(rep, prime_ix, shape_ix, lift, widths, a1_extra)| {
            let primes: Vec<u64> = primes_up_to(44)
                .into_iter()
                .filter(|&p| p > 5 && rep.admits(p))
                .collect();
            let p = *prime_ix.get(&primes);
            let shapes: Vec<[u64; 5]> = {
                let mut v: Vec<_> = shape_set(rep, p).into_iter().collect();
                v.sort_unstable();
                v
            };
            let planted_mod = shape_ix.get(&shapes);
            let base = to_search(planted_mod, p);
            let planted: Vec<i64> = (0..5).map(|i| base[i] + lift[i] * p as i64).collect();
            let a1s: Vec<i64> = vec![planted[0], planted[0] + a1_extra];
            let around = |c: i64, w: i64| IntRange::new(c - w / 2, c - w / 2 + w - 1);
            let a2 = around(planted[1], widths[0]);
            let a3 = around(planted[2], widths[1]);
            let a4 = around(planted[3], widths[2]);
            let a5 = around(planted[4], widths[3]);
            let target = SearchTarget::new(p, rep).unwrap();
            let space = SearchSpace::synthetic(target, a1s.clone(), a2, a3, a4, a5);
            let visited = space.visited_tuples();
            let got: HashSet<[i64; 5]> = visited.iter().copied().collect();
            prop_assert_eq!(got.len(), visited.len(), "duplicate visits");

            let wanted = shape_set(rep, p);
            let mut expected = HashSet::new();
            let mut a1_sorted = a1s.clone();
            a1_sorted.dedup();
            for &x1 in &a1_sorted {
                for x2 in a2.iter() {
                    for x3 in a3.iter() {
                        for x5 in a5.iter().filter(|&x| x != 0) {
                            for x4 in a4.iter() {
                                let t = [x1, x2, x3, x4, x5];
                                if wanted.contains(&reduce(t, p)) {
                                    expected.insert(t);
                                }
                            }
                        }
                    }
                }
            }
            prop_assert_eq!(&got, &expected, "p = {}, type {}", p, rep);
            let planted_t = [planted[0], planted[1], planted[2], planted[3], planted[4]];
            if planted_t[4] != 0 {
                prop_assert!(got.contains(&planted_t));
            }
            Ok(())
        },
    ))
}

/// Suite (ii): every known icosahedral quintic lies in the targeted Hunter box of its prime
/// and is visited by the enumeration.
pub fn known_fields_in_box() -> Result<(), String> {
    for (p, text) in KNOWN_FIELDS {
        let f: IntPoly = text.parse().map_err(|e| format!("{e:?}"))?;
        let coeffs = f.search_coeffs().ok_or("not a monic quintic")?;
        let a: Vec<i64> = coeffs
            .iter()
            .map(|c| i64::try_from(c.clone()).unwrap())
            .collect();
        let a = [a[0], a[1], a[2], a[3], a[4]];
        let space = SearchSpace::hunter(SearchTarget::new(p, RepType::T3a).unwrap());
        let (a1, a2, a3, a4, a5) = (a[0], a[1], a[2], a[3], a[4]);
        if !(0..=2).contains(&a1)
            || !space.a2_range(a1).contains(a2)
            || !space.a3_range(a1, a2).contains(a3)
            || !space.a5_range(a1, a2).contains(a5)
            || !space.a4_range(a1, a2, a3, a5).contains(a4)
        {
            return Err(format!("{text} lies outside the box at {p}"));
        }
        if !space.prefixes().any(|x| x == (a1, a2, a3)) {
            return Err(format!("prefix of {text} not enumerated at {p}"));
        }
        let mut seen = false;
        space.for_each_tuple((a1, a2, a3), |t| seen |= t == a);
        if !seen {
            return Err(format!("{text} not visited at {p}"));
        }
    }
    Ok(())
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Suite (iii): Sturm counts on products of linear factors with known
/// rational roots and quadratics without real roots.
pub fn sturm_matches_constructed_roots() -> Result<(), String> {
    let mut runner = runner(500, 3);
    let cases = (
        prop::collection::vec((-40i64..=40, 1i64..=6), 0..=6),
        prop::collection::vec((-6i64..=6, 1i64..=30), 0..=2),
        (-45i64..=45, 1i64..=7),
        (0i64..=60, 1i64..=7),
    );
    report(runner.run(
        &cases,
        |(linears, quads, (lo_n, lo_d), (span_n, span_d))| {
            let mut roots: Vec<BigRational> = Vec::new();
            let mut f = IntPoly::from_i64(&[1]);
            for (n, d) in linears {
                let r = rational(n, d);
                if roots.contains(&r) {
                    continue;
                }
                roots.push(r);
                f = f.mul(&IntPoly::from_i64(&[-n, d]));
            }
            let mut used = HashSet::new();
            for (b, c) in quads {
                // b^2 < 4c keeps the quadratic free of real roots
                if b * b >= 4 * c || !used.insert((b, c)) {
                    continue;
                }
                f = f.mul(&IntPoly::from_i64(&[c, b, 1]));
            }
            if f.deg() == 0 {
                return Ok(());
            }
            let all =
                sturm_real_root_count(&f, None).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(all, roots.len());
            let lo = rational(lo_n, lo_d);
            let hi = &lo + rational(span_n, span_d);
            let inside = roots.iter().filter(|r| **r > lo && **r <= hi).count();
            let got = sturm_real_root_count(&f, Some((&lo, &hi)))
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(got, inside, "f = {}, ({}, {}]", f, lo, hi);
            Ok(())
        },
    ))
}

/// Suite (iv): roots mod `p` agree with evaluation at every residue.
pub fn modp_roots_match_scan() -> Result<(), String> {
    let primes = primes_up_to(3000);
    let mut runner = runner(1000, 4);
    let cases = (
        any::<prop::sample::Index>(),
        prop::collection::vec(any::<u64>(), 0..=4),
        prop::collection::vec(any::<u64>(), 1..=6),
    );
    report(runner.run(&cases, |(prime_ix, planted, cofactor)| {
        let p = *prime_ix.get(&primes);
        let mut coeffs: Vec<u64> = vec![1];
        for r in &planted {
            coeffs = mul_mod(&coeffs, &[(p - r % p) % p, 1], p);
        }
        let mut tail: Vec<u64> = cofactor.iter().map(|c| c % p).collect();
        tail.push(1);
        coeffs = mul_mod(&coeffs, &tail, p);
        let f = ModPoly::new(p, coeffs.clone());
        let eval = |x: u64| coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
        let expected: Vec<u64> = (0..p).filter(|&x| eval(x) == 0).collect();
        prop_assert_eq!(f.roots(), expected, "p = {}", p);
        Ok(())
    }))
}

/// Suite (v): the Dedekind shortcut and full enlargement agree on the
/// q-valuation of the field discriminant.
pub fn disc_valuation_paths_agree() -> Result<(), String> {
    let mut runner = runner(200, 5);
    let cases = (
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        0u8..3,
        prop::array::uniform5(-6i64..=6),
        0u32..=3,
    );
    let checked = std::cell::Cell::new(0usize);
    let result = runner.run(&cases, |(q, family, h, k)| {
        let qi = q as i64;
        // family 0: arbitrary, 1: q^k-scaled roots, 2: shifted Eisenstein
        let low: [i64; 5] = match family {
            0 => [h[0], h[1], h[2], h[3], h[4]],
            1 => {
                let s = qi.pow(k.min(2));
                [
                    h[0] * s.pow(5),
                    h[1] * s.pow(4),
                    h[2] * s.pow(3),
                    h[3] * s * s,
                    h[4] * s,
                ]
            }
            _ => [
                qi * (1 + qi * h[0]),
                qi * h[1],
                qi * h[2],
                qi * h[3],
                qi * h[4],
            ],
        };
        let f = IntPoly::from_i64(&[low[0], low[1], low[2], low[3], low[4], 1]);
        if f.discriminant() == BigInt::from(0) || !irreducible_over_q(&f) {
            return Ok(());
        }
        let fast = q_maximal_order(&f, q);
        let slow = q_maximal_order_by_enlargement(&f, q);
        prop_assert_eq!(
            fast.disc_valuation,
            slow.disc_valuation,
            "f = {}, q = {}",
            f,
            q
        );
        prop_assert_eq!(fast.index_valuation, slow.index_valuation);
        checked.set(checked.get() + 1);
        Ok(())
    });
    report(result)?;
    let checked = checked.get();
    if checked < 150 {
        return Err(format!("only {checked} irreducible cases"));
    }
    Ok(())
}

fn target(p: u64, rep: RepType) -> SearchTarget {
    SearchTarget::new(p, rep).unwrap()
}

fn full_run(t: SearchTarget, workers: usize) -> Search {
    let mut s = Search::new(SearchSpace::hunter(t), UNIT_BUDGET);
    let opts = RunOptions {
        workers,
        ..RunOptions::default()
    };
    assert_eq!(s.run(&opts, None).unwrap(), RunStatus::Complete);
    s
}

/// Suite (vi): killing a run at random points, reloading the checkpoint
/// from disk and resuming yields the uninterrupted stream and counts.
pub fn kill_and_resume_matches() -> Result<(), String> {
    let targets = [
        target(61, RepType::T3a),
        target(19, RepType::T3b),
        target(17, RepType::T3c),
    ];
    let reference: Vec<Search> = targets.iter().map(|&t| full_run(t, 1)).collect();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("run.ckpt");
    let mut runner = runner(12, 6);
    let cases = (
        0usize..3,
        prop::collection::vec((1u64..400, 1usize..=3), 1..=3),
    );
    report(runner.run(&cases, |(which, kills)| {
        let t = targets[which];
        let mut search = Search::new(SearchSpace::hunter(t), UNIT_BUDGET);
        let save = |ck: &Checkpoint| ck.save(&path);
        for (after, workers) in kills {
            let opts = RunOptions {
                workers,
                stop_after_prefixes: Some(after),
                ..RunOptions::default()
            };
            let status = search
                .run(&opts, Some(&save))
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            let ck = Checkpoint::load(&path).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&ck, &search.checkpoint());
            search = Search::from_checkpoint(ck);
            if status == RunStatus::Complete {
                break;
            }
        }
        search
            .run(&RunOptions::default(), Some(&save))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let ck = Checkpoint::load(&path).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let resumed = Search::from_checkpoint(ck);
        prop_assert_eq!(resumed.candidates(), reference[which].candidates());
        prop_assert_eq!(resumed.counts(), reference[which].counts());
        Ok(())
    }))
}

/// Suite (vii): the merged parallel stream equals the serial one.
pub fn serial_equals_parallel() -> Result<(), String> {
    let targets = [
        target(31, RepType::T3a),
        target(61, RepType::T3a),
        target(13, RepType::T3b),
        target(37, RepType::T3b),
        target(13, RepType::T3c),
        target(29, RepType::T3c),
    ];
    for t in targets {
        let serial = full_run(t, 1);
        for workers in [2, 4] {
            let parallel = full_run(t, workers);
            if parallel.candidates() != serial.candidates() || parallel.counts() != serial.counts()
            {
                return Err(format!(
                    "p = {}, type {}: {workers} workers differ from serial",
                    t.p, t.rep_type
                ));
            }
        }
    }
    Ok(())
}

/// Every suite, labelled as in the acceptance report.
pub const SUITES: [(&str, fn() -> Result<(), String>); 7] = [
    ("(i) targeted = brute force", targeted_matches_brute_force),
    ("(ii) known fields in box", known_fields_in_box),
    (
        "(iii) sturm vs constructed roots",
        sturm_matches_constructed_roots,
    ),
    ("(iv) roots mod p vs scan", modp_roots_match_scan),
    (
        "(v) fast vs enlargement valuation",
        disc_valuation_paths_agree,
    ),
    ("(vi) kill and resume", kill_and_resume_matches),
    ("(vii) serial = parallel", serial_equals_parallel),
];
