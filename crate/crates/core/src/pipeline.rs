//! Search one prime and certify every survivor.

use std::time::Duration;

use crate::checkpoint::CheckpointError;
use crate::engine::{
    CandidateRecord, Checkpoint, Counts, RunOptions, RunStatus, Search, SearchSpace,
};
use crate::poly::IntPoly;
use crate::targeting::SearchTarget;
use crate::verifier::{
    fingerprint, verify, DiscVerdict, FieldCertificate, GaloisClass, VerifyOptions,
};

/// Number of work units a prime is cut into. Fixed so that unit ids, and
/// hence output, do not depend on the worker count.
pub const UNIT_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub workers: usize,
    pub verify: VerifyOptions,
    pub checkpoint_interval: Duration,
    pub stop_after_prefixes: Option<u64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            workers: 1,
            verify: VerifyOptions::default(),
            checkpoint_interval: Duration::from_secs(30),
            stop_after_prefixes: None,
        }
    }
}

/// A survivor of the cheap filters with its certificate.
#[derive(Debug, Clone)]
pub struct Verified {
    pub candidate: CandidateRecord,
    pub cert: FieldCertificate,
    /// Present on Accept.
    pub fingerprint: Option<String>,
}

impl Verified {
    pub fn is_a5(&self) -> bool {
        self.cert.galois_class() == Some(GaloisClass::A5Certified)
    }

    pub fn is_indeterminate(&self) -> bool {
        self.cert.field_disc.is_indeterminate()
            || self.cert.galois_class() == Some(GaloisClass::Indeterminate)
    }
}

#[derive(Debug, Clone)]
pub struct PrimeResult {
    pub target: SearchTarget,
    pub counts: Counts,
    pub verified: Vec<Verified>,
}

impl PrimeResult {
    /// Certificates whose field discriminant was not rejected.
    pub fn records(&self) -> impl Iterator<Item = &Verified> {
        self.verified
            .iter()
            .filter(|v| !matches!(v.cert.field_disc, DiscVerdict::Reject { .. }))
    }

    pub fn certificates(&self) -> Vec<FieldCertificate> {
        self.records().map(|v| v.cert.clone()).collect()
    }

    pub fn a5_count(&self) -> usize {
        self.records().filter(|v| v.is_a5()).count()
    }

    pub fn indeterminate_count(&self) -> usize {
        self.records().filter(|v| v.is_indeterminate()).count()
    }
}

/// Certifies the candidates of a finished search in stream order.
pub fn verify_candidates(
    target: &SearchTarget,
    candidates: &[CandidateRecord],
    opts: &VerifyOptions,
) -> Vec<Verified> {
    candidates
        .iter()
        .map(|c| {
            let f = IntPoly::from_search_coeffs(&c.coeffs);
            let cert = verify(&f, target.p, target.disc_exponent, opts)
                .expect("search polynomials are monic quintics");
            let fingerprint = cert
                .field_disc_label()
                .and_then(|label| fingerprint(&f, &label, target.p, opts.seed));
            Verified {
                candidate: c.clone(),
                cert,
                fingerprint,
            }
        })
        .collect()
}

pub type SaveFn<'a> = dyn Fn(&Checkpoint) -> Result<(), CheckpointError> + Sync + 'a;

/// Runs (or continues) the search at one prime. Returns `None` if the run
/// was stopped early.
pub fn run_prime(
    target: SearchTarget,
    resume_from: Option<Checkpoint>,
    opts: &PipelineOptions,
    save: Option<&SaveFn<'_>>,
) -> Result<Option<PrimeResult>, CheckpointError> {
    let mut search = match resume_from {
        Some(ck) => {
            if ck.target != target {
                return Err(CheckpointError::Mismatch(format!(
                    "checkpoint is for p = {}, run wants p = {}",
                    ck.target.p, target.p
                )));
            }
            Search::from_checkpoint(ck)
        }
        None => Search::new(SearchSpace::hunter(target), UNIT_BUDGET),
    };
    let run_opts = RunOptions {
        workers: opts.workers,
        checkpoint_interval: opts.checkpoint_interval,
        stop_after_prefixes: opts.stop_after_prefixes,
    };
    if search.run(&run_opts, save)? == RunStatus::Stopped {
        return Ok(None);
    }
    let verified = verify_candidates(&target, &search.candidates(), &opts.verify);
    Ok(Some(PrimeResult {
        target,
        counts: search.counts(),
        verified,
    }))
}

/// Uninterrupted search and certification at one prime.
pub fn search_and_verify(target: SearchTarget, opts: &PipelineOptions) -> PrimeResult {
    run_prime(target, None, opts, None)
        .expect("no checkpoint i/o")
        .expect("run without a stop limit completes")
}
