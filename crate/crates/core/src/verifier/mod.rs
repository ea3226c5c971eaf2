//! Certification of candidate quintics: irreducibility, signature, exact
//! field discriminant, ramification at `p`, Galois class and representation
//! type.

pub mod galois;
pub mod irreducible;
pub mod order;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{exact_sqrt, factor_bounded, is_prime_u64, valuation, FactoringBudget};
use crate::modp::ModPoly;
use crate::poly::IntPoly;
use crate::sturm::sturm_real_root_count;
use crate::targeting::RepType;

pub use galois::{
    f20_resolvent, galois_class, GaloisClass, GaloisEvidence, Resolvent, ResolventError,
};
pub use irreducible::irreducible_over_q;
pub use order::{
    dedekind_q_maximal, disc_valuation_at_q, q_maximal_order, splitting_type, Splitting,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("expected a monic quintic, got `{0}`")]
    NotMonicQuintic(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Outcome of certifying `d(K) = p^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum DiscVerdict {
    Accept { p: u64, e: u32, index: String },
    Reject { reason: String },
    Indeterminate { reason: String },
}

impl DiscVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, DiscVerdict::Accept { .. })
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, DiscVerdict::Indeterminate { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub sampling_budget: u32,
    pub certify: bool,
    pub factoring: FactoringBudget,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sampling_budget: 100,
            certify: false,
            factoring: FactoringBudget::default(),
            seed: 0,
        }
    }
}

/// Everything established about one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCertificate {
    pub poly: IntPoly,
    pub poly_disc: BigInt,
    pub p: u64,
    pub e: u32,
    pub irreducible: bool,
    /// `(real embeddings, complex pairs)`, when `f` is squarefree.
    pub signature: Option<(u32, u32)>,
    pub field_disc: DiscVerdict,
    pub ramification_shape: Option<Splitting>,
    pub galois: Option<GaloisEvidence>,
    pub rep_type: Option<RepType>,
}

impl FieldCertificate {
    /// Ramification index of the most ramified prime above `p`.
    pub fn e_p(&self) -> Option<u32> {
        self.ramification_shape
            .as_ref()
            .and_then(|s| s.iter().map(|&(e, _)| e).max())
    }

    pub fn galois_class(&self) -> Option<GaloisClass> {
        self.galois.as_ref().map(|g| g.class)
    }

    /// `"p^e"` on Accept.
    pub fn field_disc_label(&self) -> Option<String> {
        match self.field_disc {
            DiscVerdict::Accept { p, e, .. } => Some(format!("{p}^{e}")),
            _ => None,
        }
    }
}

fn signature(f: &IntPoly) -> Option<(u32, u32)> {
    let r = sturm_real_root_count(f, None).ok()? as u32;
    Some((r, (f.deg() as u32 - r) / 2))
}

/// Certifies that the field defined by `f` has discriminant exactly `p^e`.
pub fn field_disc_certificate(f: &IntPoly, p: u64, e: u32, budget: FactoringBudget) -> DiscVerdict {
    let reject = |reason: String| DiscVerdict::Reject { reason };
    let disc = f.discriminant();
    if disc.is_zero() {
        return reject("polynomial has a repeated root".into());
    }
    match signature(f) {
        Some((5, 0)) => {}
        Some((r, s)) => return reject(format!("not totally real: signature ({r},{s})")),
        None => return reject("signature unavailable".into()),
    }
    let (vp, rest) = valuation(&disc, p);
    let Some(s) = exact_sqrt(&rest) else {
        return reject(format!(
            "discriminant cofactor after removing {p} is not a square"
        ));
    };
    let vk = disc_valuation_at_q(f, p);
    if vk != e {
        return reject(format!(
            "field discriminant has {p}-valuation {vk}, expected {e}"
        ));
    }
    let fac = factor_bounded(&s, budget);
    if !fac.is_complete() {
        return DiscVerdict::Indeterminate {
            reason: format!("could not factor {} within budget", fac.unfactored),
        };
    }
    for (q, _) in &fac.primes {
        let Some(q) = q.to_u64() else {
            return DiscVerdict::Indeterminate {
                reason: format!("index prime {q} exceeds the word-size order arithmetic"),
            };
        };
        let v = disc_valuation_at_q(f, q);
        if v != 0 {
            return reject(format!("field discriminant divisible by {q}^{v}"));
        }
    }
    let index = BigInt::from(p).pow((vp - vk) / 2) * &s;
    assert_eq!(
        BigInt::from(p).pow(e) * &index * &index,
        disc,
        "discriminant identity failed on Accept"
    );
    DiscVerdict::Accept {
        p,
        e,
        index: index.to_string(),
    }
}

/// Splitting of `p` in the field as `(e_i, f_i)` pairs, largest first.
pub fn ramification_shape_at_p(f: &IntPoly, p: u64, seed: u64) -> Option<Splitting> {
    splitting_type(f, &q_maximal_order(f, p), seed)
}

/// The unique representation type matching the certificate, if any.
pub fn classify_representation(cert: &FieldCertificate) -> Option<RepType> {
    let DiscVerdict::Accept { p, e, .. } = cert.field_disc else {
        return None;
    };
    let galois = cert.galois.as_ref()?;
    if galois.class != GaloisClass::A5Certified || !galois.certified {
        return None;
    }
    let e_p = cert.e_p()?;
    [RepType::T3a, RepType::T3b, RepType::T3c]
        .into_iter()
        .find(|t| {
            t.admits(p) && t.disc_exponent() == Some(e) && t.ramification_index() == Some(e_p)
        })
}

pub const FINGERPRINT_PRIMES: usize = 20;

fn format_splitting(s: &Splitting) -> String {
    let mut parts: Vec<(u32, u32)> = s.iter().map(|&(e, f)| (f, e)).collect();
    parts.sort();
    parts
        .iter()
        .map(|&(f, e)| {
            if e == 1 {
                f.to_string()
            } else {
                format!("{f}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Splitting types of the first twenty primes `q >= 7`, `q != p`, tagged with
/// the field discriminant. Equal fields give equal fingerprints; the converse
/// is a heuristic.
pub fn fingerprint(f: &IntPoly, field_disc: &str, p: u64, seed: u64) -> Option<String> {
    let disc = f.discriminant();
    let mut parts = vec![field_disc.to_string()];
    let mut q = 6u64;
    while parts.len() <= FINGERPRINT_PRIMES {
        q += 1;
        if q == p || !is_prime_u64(q) {
            continue;
        }
        let s = if (&disc % q).is_zero() {
            splitting_type(f, &q_maximal_order(f, q), seed)?
        } else {
            ModPoly::from_int_poly(f, q)
                .factor_pattern()
                .iter()
                .flat_map(|&(d, m)| std::iter::repeat_n((1, d as u32), m))
                .collect()
        };
        parts.push(format!("{q}:{}", format_splitting(&s)));
    }
    Some(parts.join(" "))
}

/// Runs the full certification of `f` against the target `d(K) = p^e`.
pub fn verify(
    f: &IntPoly,
    p: u64,
    e: u32,
    opts: &VerifyOptions,
) -> Result<FieldCertificate, VerifyError> {
    if f.deg() != 5 || !f.is_monic() {
        return Err(VerifyError::NotMonicQuintic(f.to_string()));
    }
    if !is_prime_u64(p) {
        return Err(VerifyError::NotPrime(p));
    }
    let poly_disc = f.discriminant();
    let irreducible = irreducible_over_q(f);
    let sig = if poly_disc.is_zero() {
        None
    } else {
        signature(f)
    };
    let mut cert = FieldCertificate {
        poly: f.clone(),
        poly_disc: poly_disc.clone(),
        p,
        e,
        irreducible,
        signature: sig,
        field_disc: DiscVerdict::Reject {
            reason: "reducible over Q".into(),
        },
        ramification_shape: None,
        galois: None,
        rep_type: None,
    };
    if !irreducible {
        return Ok(cert);
    }
    cert.field_disc = field_disc_certificate(f, p, e, opts.factoring);
    cert.ramification_shape = ramification_shape_at_p(f, p, opts.seed);
    if cert.field_disc.is_accept() && poly_disc.is_positive() {
        cert.galois = Some(galois_class(
            f,
            &poly_disc,
            opts.sampling_budget,
            opts.certify,
        ));
    }
    cert.rep_type = classify_representation(&cert);
    Ok(cert)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The six defining polynomials listed for conductors below 10^4.
    pub(crate) const KNOWN_FIELDS: [(u64, &str); 6] = [
        (1951, "x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344"),
        (2141, "x^5 - x^4 - 856x^3 + 4025x^2 + 28501x - 40877"),
        (3701, "x^5 - x^4 - 1480x^3 - 18209x^2 + 2191x + 9683"),
        (3821, "x^5 - x^4 - 1528x^3 - 1987x^2 + 16629x - 12281"),
        (8501, "x^5 - x^4 - 3400x^3 - 41825x^2 + 671511x - 966731"),
        (9461, "x^5 - x^4 - 3784x^3 + 2649x^2 + 2960082x - 2781864"),
    ];

    #[test]
    fn known_fields_certify() {
        for (p, text) in KNOWN_FIELDS {
            let f: IntPoly = text.parse().unwrap();
            let cert = verify(&f, p, 4, &VerifyOptions::default()).unwrap();
            assert!(cert.field_disc.is_accept(), "{p}: {:?}", cert.field_disc);
            assert_eq!(cert.ramification_shape, Some(vec![(5, 1)]), "{p}");
            assert_eq!(cert.galois_class(), Some(GaloisClass::A5Certified), "{p}");
            assert_eq!(cert.rep_type, Some(RepType::T3a), "{p}");
            assert_eq!(cert.signature, Some((5, 0)));
            // the witness agrees with the resolvent
            let res = f20_resolvent(&f).unwrap();
            assert!(res.integer_root().is_none(), "{p}");
        }
    }

    #[test]
    fn known_field_against_a_wrong_prime_or_exponent() {
        let f: IntPoly = KNOWN_FIELDS[0].1.parse().unwrap();
        assert!(matches!(
            field_disc_certificate(&f, 1951, 2, FactoringBudget::default()),
            DiscVerdict::Reject { .. }
        ));
        assert!(matches!(
            field_disc_certificate(&f, 7, 4, FactoringBudget::default()),
            DiscVerdict::Reject { .. }
        ));
    }

    #[test]
    fn index_is_recorded() {
        // 2 * 7 * 71 * 137 * 1951^0
        let f: IntPoly = KNOWN_FIELDS[0].1.parse().unwrap();
        let DiscVerdict::Accept { index, .. } =
            field_disc_certificate(&f, 1951, 4, FactoringBudget::default())
        else {
            panic!()
        };
        assert_eq!(index, (2 * 7 * 71 * 137).to_string());
    }

    #[test]
    fn pure_quintic_is_rejected() {
        let f = IntPoly::from_i64(&[-2, 0, 0, 0, 0, 1]);
        let cert = verify(&f, 2, 4, &VerifyOptions::default()).unwrap();
        assert!(cert.irreducible);
        assert_eq!(cert.signature, Some((1, 2)));
        assert!(matches!(cert.field_disc, DiscVerdict::Reject { .. }));
        assert_eq!(cert.rep_type, None);
        assert_eq!(f.discriminant(), BigInt::from(3125 * 16));
    }

    #[test]
    fn cyclic_quintic() {
        let f = IntPoly::from_i64(&[1, 3, -3, -4, 1, 1]);
        let opts = VerifyOptions {
            certify: true,
            ..VerifyOptions::default()
        };
        let cert = verify(&f, 11, 4, &opts).unwrap();
        assert!(cert.field_disc.is_accept());
        assert_eq!(cert.ramification_shape, Some(vec![(5, 1)]));
        assert_eq!(cert.galois_class(), Some(GaloisClass::C5));
        assert_eq!(cert.rep_type, None);
        assert_eq!(cert.e_p(), Some(5));
    }

    #[test]
    fn incomplete_factoring_is_indeterminate() {
        let f: IntPoly = KNOWN_FIELDS[0].1.parse().unwrap();
        let tiny = FactoringBudget {
            trial_limit: 3,
            rho_iterations: 0,
        };
        assert!(field_disc_certificate(&f, 1951, 4, tiny).is_indeterminate());
    }

    #[test]
    fn fingerprints_identify_generators_of_one_field() {
        let f = IntPoly::from_i64(&[1, 3, -3, -4, 1, 1]);
        // theta^2 + theta generates the same field
        let g = order::charpoly(&f, &IntPoly::from_i64(&[0, 1, 1]), &BigInt::from(1)).unwrap();
        assert_ne!(f, g);
        let a = fingerprint(&f, "11^4", 11, 0).unwrap();
        assert_eq!(a, fingerprint(&g, "11^4", 11, 0).unwrap());
        assert_eq!(a.split(' ').count(), 1 + FINGERPRINT_PRIMES);
        let t: IntPoly = KNOWN_FIELDS[0].1.parse().unwrap();
        assert_ne!(a, fingerprint(&t, "11^4", 11, 0).unwrap());
    }

    #[test]
    fn classification_needs_every_condition() {
        let f: IntPoly = KNOWN_FIELDS[0].1.parse().unwrap();
        let mut cert = verify(&f, 1951, 4, &VerifyOptions::default()).unwrap();
        assert_eq!(classify_representation(&cert), Some(RepType::T3a));
        cert.ramification_shape = Some(vec![(2, 2), (1, 1)]);
        assert_eq!(classify_representation(&cert), None);
        cert.field_disc = DiscVerdict::Accept {
            p: 1951,
            e: 2,
            index: "1".into(),
        };
        // 1951 = 3 mod 4
        assert_eq!(classify_representation(&cert), None);
        cert.field_disc = DiscVerdict::Accept {
            p: 13,
            e: 2,
            index: "1".into(),
        };
        assert_eq!(classify_representation(&cert), Some(RepType::T3c));
        cert.ramification_shape = Some(vec![(3, 1), (1, 1), (1, 1)]);
        assert_eq!(classify_representation(&cert), Some(RepType::T3b));
        cert.galois.as_mut().unwrap().class = GaloisClass::D5;
        assert_eq!(classify_representation(&cert), None);
    }
}
