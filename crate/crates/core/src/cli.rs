//! Command-line front end: `search`, `verify`, `table`, `sanity`, `resume`.
//!
//! Output is JSONL: a header record carrying the configuration and seed, one
//! record per certified field, and one summary record per prime. Timings go
//! to stderr so that identical configurations give identical bytes.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, FactoringBudget};
use crate::checkpoint::{self, CheckpointError};
use crate::engine::{Checkpoint, Counts};
use crate::pipeline::{run_prime, PipelineOptions, PrimeResult, Verified};
use crate::poly::IntPoly;
use crate::sanity::{
    cyclotomic_sanity, dihedral_sanity, real_quadratic_class_number, SanityReport,
};
use crate::targeting::{RepType, SearchTarget};
use crate::verifier::{verify, DiscVerdict, FieldCertificate, VerifyOptions};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INDETERMINATE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        }
    }
}

/// Inclusive prime range written `A..B` (or a single `A`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        RangeInclusive::new(self.lo, self.hi).filter(|&p| is_prime_u64(p))
    }
}

impl FromStr for PrimeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad bound `{t}`: {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(PrimeRange { lo, hi })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "icosa",
    version,
    about = "Targeted searches for quintic fields ramified at one prime"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search each prime in a range and certify the hits.
    Search(SearchArgs),
    /// Certify polynomials given inline or in files (one per line).
    Verify(VerifyArgs),
    /// Render the table of fields found by earlier searches.
    Table(TableArgs),
    /// Run the cyclic and dihedral completeness checks.
    Sanity(SanityArgs),
    /// Continue an interrupted search from its checkpoint.
    Resume(ResumeArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SearchArgs {
    /// 3a, 3b, 3c or untargeted
    #[arg(long = "type")]
    pub rep_type: Option<RepType>,
    /// Prime range `A..B`
    #[arg(long)]
    pub primes: Option<PrimeRange>,
    /// Discriminant exponent for untargeted searches
    #[arg(long)]
    pub disc_exponent: Option<u32>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decide the Galois group with the resolvent when sampling finds no 3-cycle
    #[arg(long)]
    pub certify: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pollard-rho iteration budget for factoring discriminant cofactors
    #[arg(long)]
    pub factoring_budget: Option<u64>,
    /// JSON file with defaults for any of the flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Stop after this many prefixes (testing aid)
    #[arg(long, hide = true)]
    pub stop_after_prefixes: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Polynomials such as "x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344", or files of them
    #[arg(required = true)]
    pub inputs: Vec<String>,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub e: u32,
    #[arg(long)]
    pub certify: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub factoring_budget: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// A JSONL file or a directory of them
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SanityArgs {
    #[arg(long)]
    pub primes: PrimeRange,
    /// Restrict to the cyclic (3a) or dihedral (3c) check
    #[arg(long = "type")]
    pub rep_type: Option<RepType>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ResumeArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Override the recorded worker count
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, hide = true)]
    pub stop_after_prefixes: Option<u64>,
}

/// Fully resolved search configuration, recorded in the output header and
/// the checkpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub rep_type: RepType,
    pub primes: PrimeRange,
    pub disc_exponent: u32,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub certify: bool,
    pub seed: u64,
    pub factoring_budget: u64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "type")]
    rep_type: Option<RepType>,
    primes: Option<String>,
    disc_exponent: Option<u32>,
    workers: Option<usize>,
    checkpoint: Option<PathBuf>,
    out: Option<PathBuf>,
    certify: Option<bool>,
    seed: Option<u64>,
    factoring_budget: Option<u64>,
}

impl RunConfig {
    /// Flags override the config file, which overrides built-in defaults.
    pub fn resolve(args: &SearchArgs) -> Result<Self, CliError> {
        let file: ConfigFile = match &args.config {
            Some(path) => serde_json::from_str(&fs::read_to_string(path)?)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?,
            None => ConfigFile::default(),
        };
        let rep_type = args
            .rep_type
            .or(file.rep_type)
            .ok_or_else(|| CliError::Usage("--type is required".into()))?;
        let primes = match (args.primes, &file.primes) {
            (Some(r), _) => r,
            (None, Some(s)) => s.parse().map_err(CliError::Usage)?,
            (None, None) => return Err(CliError::Usage("--primes is required".into())),
        };
        let disc_exponent = match rep_type.disc_exponent() {
            Some(e) => e,
            None => args.disc_exponent.or(file.disc_exponent).unwrap_or(4),
        };
        Ok(RunConfig {
            command: "search".into(),
            rep_type,
            primes,
            disc_exponent,
            workers: args.workers.or(file.workers).unwrap_or(1).max(1),
            checkpoint: args.checkpoint.clone().or(file.checkpoint),
            out: args.out.clone().or(file.out),
            certify: args.certify || file.certify.unwrap_or(false),
            seed: args.seed.or(file.seed).unwrap_or(0),
            factoring_budget: args
                .factoring_budget
                .or(file.factoring_budget)
                .unwrap_or(FactoringBudget::default().rho_iterations),
        })
    }

    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            certify: self.certify,
            seed: self.seed,
            factoring: FactoringBudget {
                rho_iterations: self.factoring_budget,
                ..FactoringBudget::default()
            },
            ..VerifyOptions::default()
        }
    }

    fn target(&self, p: u64) -> Option<SearchTarget> {
        if !is_prime_u64(p) {
            return None;
        }
        match self.rep_type {
            RepType::Untargeted => SearchTarget::untargeted(p, self.disc_exponent).ok(),
            t => SearchTarget::new(p, t).ok(),
        }
    }

    /// Primes of the range the search type applies to.
    pub fn primes(&self) -> Vec<u64> {
        self.primes
            .iter()
            .filter(|&p| self.target(p).is_some())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeaderRecord {
    pub schema_version: u32,
    pub kind: String,
    pub config: RunConfig,
    pub seed: u64,
}

/// One certified field generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub schema_version: u32,
    pub kind: String,
    pub prime: u64,
    pub search_type: RepType,
    pub coeffs: [i64; 5],
    pub polynomial: String,
    pub poly_disc: String,
    /// `p^e` on Accept, otherwise `indeterminate`.
    pub field_disc: String,
    pub field_disc_note: Option<String>,
    pub index: Option<String>,
    pub signature: Option<(u32, u32)>,
    pub galois_class: Option<String>,
    pub galois_certified: bool,
    pub ramification_shape: Option<Vec<(u32, u32)>>,
    pub e_p: Option<u32>,
    /// Classified representation type, or `none`.
    pub rep_type: String,
    pub fingerprint: Option<String>,
    pub unit_id: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub schema_version: u32,
    pub kind: String,
    pub prime: u64,
    pub search_type: RepType,
    pub disc_exponent: u32,
    pub counts: Counts,
    pub candidates: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub indeterminate: usize,
    pub a5_records: usize,
    pub fields: usize,
    pub seed: u64,
}

fn rep_label(t: Option<RepType>) -> String {
    t.map_or_else(|| "none".to_string(), |t| t.as_str().to_string())
}

pub fn field_record(search_type: RepType, v: &Verified, seed: u64) -> FieldRecord {
    let c = &v.cert;
    let (field_disc, note, index) = match &c.field_disc {
        DiscVerdict::Accept { p, e, index } => (format!("{p}^{e}"), None, Some(index.clone())),
        DiscVerdict::Indeterminate { reason } => {
            ("indeterminate".into(), Some(reason.clone()), None)
        }
        DiscVerdict::Reject { reason } => ("rejected".into(), Some(reason.clone()), None),
    };
    FieldRecord {
        schema_version: SCHEMA_VERSION,
        kind: "field".into(),
        prime: c.p,
        search_type,
        coeffs: v.candidate.coeffs,
        polynomial: c.poly.to_string(),
        poly_disc: c.poly_disc.to_string(),
        field_disc,
        field_disc_note: note,
        index,
        signature: c.signature,
        galois_class: c.galois.as_ref().map(|g| g.class.to_string()),
        galois_certified: c.galois.as_ref().is_some_and(|g| g.certified),
        ramification_shape: c.ramification_shape.clone(),
        e_p: c.e_p(),
        rep_type: rep_label(c.rep_type),
        fingerprint: v.fingerprint.clone(),
        unit_id: v.candidate.unit_id,
        seed,
    }
}

pub fn summary_record(config: &RunConfig, r: &PrimeResult) -> SummaryRecord {
    let records: Vec<&Verified> = r.records().collect();
    let mut fields: Vec<&str> = records
        .iter()
        .filter_map(|v| v.fingerprint.as_deref())
        .collect();
    fields.sort_unstable();
    fields.dedup();
    SummaryRecord {
        schema_version: SCHEMA_VERSION,
        kind: "summary".into(),
        prime: r.target.p,
        search_type: config.rep_type,
        disc_exponent: r.target.disc_exponent,
        counts: r.counts,
        candidates: r.verified.len(),
        accepted: records
            .iter()
            .filter(|v| v.cert.field_disc.is_accept())
            .count(),
        rejected: r.verified.len() - records.len(),
        indeterminate: r.indeterminate_count(),
        a5_records: r.a5_count(),
        fields: fields.len(),
        seed: config.seed,
    }
}

fn jsonl<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// Persistent state of a multi-prime run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunState {
    pub config: RunConfig,
    pub completed: Vec<u64>,
    /// Bytes of output that belong to completed primes.
    pub output_offset: u64,
    pub indeterminate: usize,
    /// Engine snapshot of the prime in progress.
    pub current: Option<Checkpoint>,
}

enum Sink {
    Stdout(io::Stdout),
    File(File),
}

impl Sink {
    fn open(config: &RunConfig, resume_offset: Option<u64>) -> Result<Self, CliError> {
        match (&config.out, resume_offset) {
            (None, _) => Ok(Sink::Stdout(io::stdout())),
            (Some(path), None) => Ok(Sink::File(File::create(path)?)),
            (Some(path), Some(offset)) => {
                let mut f = OpenOptions::new().read(true).write(true).open(path)?;
                f.set_len(offset)?;
                f.seek(SeekFrom::End(0))?;
                Ok(Sink::File(f))
            }
        }
    }

    fn write(&mut self, s: &str) -> Result<(), CliError> {
        match self {
            Sink::Stdout(o) => {
                o.write_all(s.as_bytes())?;
                o.flush()?;
            }
            Sink::File(f) => {
                f.write_all(s.as_bytes())?;
                f.sync_data()?;
            }
        }
        Ok(())
    }
}

fn save_state(state: &RunState) -> Result<(), CheckpointError> {
    match &state.config.checkpoint {
        Some(path) => checkpoint::save_json(path, state),
        None => Ok(()),
    }
}

/// Drives a search run from `state`, which is fresh or loaded from a
/// checkpoint.
fn drive(
    mut state: RunState,
    resuming: bool,
    workers: usize,
    stop_after: Option<u64>,
) -> Result<u8, CliError> {
    let config = state.config.clone();
    let mut sink = Sink::open(&config, resuming.then_some(state.output_offset))?;
    if !resuming {
        let header = jsonl(&HeaderRecord {
            schema_version: SCHEMA_VERSION,
            kind: "header".into(),
            config: config.clone(),
            seed: config.seed,
        })?;
        sink.write(&header)?;
        state.output_offset = header.len() as u64;
        save_state(&state)?;
    }
    let mut opts = PipelineOptions {
        workers,
        verify: config.verify_options(),
        checkpoint_interval: Duration::from_secs(30),
        stop_after_prefixes: stop_after,
    };
    let mut used = 0u64;
    for p in config.primes() {
        if state.completed.contains(&p) {
            continue;
        }
        let target = config.target(p).expect("filtered primes have targets");
        let started = Instant::now();
        let resume_from = state.current.take().filter(|ck| ck.target.p == p);
        if let Some(limit) = stop_after {
            if used >= limit {
                state.current = resume_from;
                save_state(&state)?;
                eprintln!("stopped before p = {p}; resume with `icosa resume --checkpoint ...`");
                return Ok(EXIT_INDETERMINATE);
            }
            opts.stop_after_prefixes = Some(limit - used);
        }
        let done_before = resume_from.as_ref().map_or(0, |ck| ck.counts().prefixes);
        let base = state.clone();
        let hook = |ck: &Checkpoint| {
            let mut s = base.clone();
            s.current = Some(ck.clone());
            save_state(&s)
        };
        let save: Option<&crate::pipeline::SaveFn<'_>> =
            config.checkpoint.is_some().then_some(&hook as _);
        let Some(result) = run_prime(target, resume_from, &opts, save)? else {
            eprintln!("stopped during p = {p}; resume with `icosa resume --checkpoint ...`");
            return Ok(EXIT_INDETERMINATE);
        };
        used += result.counts.prefixes - done_before;
        let mut text = String::new();
        for v in result.records() {
            text.push_str(&jsonl(&field_record(config.rep_type, v, config.seed))?);
        }
        let summary = summary_record(&config, &result);
        text.push_str(&jsonl(&summary)?);
        sink.write(&text)?;
        state.output_offset += text.len() as u64;
        state.indeterminate += summary.indeterminate;
        state.completed.push(p);
        state.current = None;
        save_state(&state)?;
        eprintln!(
            "p = {p}: {} tuples, {} candidates, {} records, {} A5 in {:.2}s",
            summary.counts.enumerated,
            summary.candidates,
            summary.accepted + summary.indeterminate,
            summary.a5_records,
            started.elapsed().as_secs_f64()
        );
    }
    Ok(if state.indeterminate > 0 {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    })
}

pub fn cmd_search(args: &SearchArgs) -> Result<u8, CliError> {
    let config = RunConfig::resolve(args)?;
    let state = RunState {
        config: config.clone(),
        completed: Vec::new(),
        output_offset: 0,
        indeterminate: 0,
        current: None,
    };
    drive(state, false, config.workers, args.stop_after_prefixes)
}

pub fn cmd_resume(args: &ResumeArgs) -> Result<u8, CliError> {
    let mut state: RunState = checkpoint::load_json(&args.checkpoint)?;
    // the checkpoint may have been moved since it was written
    state.config.checkpoint = Some(args.checkpoint.clone());
    let workers = args.workers.unwrap_or(state.config.workers).max(1);
    drive(state, true, workers, args.stop_after_prefixes)
}

/// JSON form of a certificate for `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub schema_version: u32,
    pub polynomial: String,
    pub poly_disc: String,
    pub irreducible: bool,
    pub signature: Option<(u32, u32)>,
    pub field_disc: DiscVerdict,
    pub galois_class: Option<String>,
    pub galois_certified: bool,
    pub three_cycle_prime: Option<u64>,
    pub ramification_shape: Option<Vec<(u32, u32)>>,
    pub e_p: Option<u32>,
    pub rep_type: String,
}

pub fn certificate_record(c: &FieldCertificate) -> CertificateRecord {
    CertificateRecord {
        schema_version: SCHEMA_VERSION,
        polynomial: c.poly.to_string(),
        poly_disc: c.poly_disc.to_string(),
        irreducible: c.irreducible,
        signature: c.signature,
        field_disc: c.field_disc.clone(),
        galois_class: c.galois.as_ref().map(|g| g.class.to_string()),
        galois_certified: c.galois.as_ref().is_some_and(|g| g.certified),
        three_cycle_prime: c.galois.as_ref().and_then(|g| g.three_cycle_prime),
        ramification_shape: c.ramification_shape.clone(),
        e_p: c.e_p(),
        rep_type: rep_label(c.rep_type),
    }
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut polys = Vec::new();
    for input in &args.inputs {
        let path = Path::new(input);
        let texts: Vec<String> = if path.is_file() {
            fs::read_to_string(path)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect()
        } else {
            vec![input.clone()]
        };
        for t in texts {
            let f: IntPoly = t
                .parse()
                .map_err(|e| CliError::Usage(format!("`{t}`: {e}")))?;
            polys.push(f);
        }
    }
    let opts = VerifyOptions {
        certify: args.certify,
        seed: args.seed,
        factoring: FactoringBudget {
            rho_iterations: args
                .factoring_budget
                .unwrap_or(FactoringBudget::default().rho_iterations),
            ..FactoringBudget::default()
        },
        ..VerifyOptions::default()
    };
    let mut code = EXIT_OK;
    for f in polys {
        let cert = verify(&f, args.p, args.e, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
        if cert.field_disc.is_indeterminate() {
            code = EXIT_INDETERMINATE;
        }
        out.write_all(jsonl(&certificate_record(&cert))?.as_bytes())?;
    }
    Ok(code)
}

/// Field records and summaries read back from search output.
#[derive(Debug, Default)]
pub struct Collected {
    pub fields: Vec<FieldRecord>,
    pub summaries: Vec<SummaryRecord>,
}

pub fn collect_records(input: &Path) -> Result<Collected, CliError> {
    let mut files = Vec::new();
    if input.is_dir() {
        for entry in fs::read_dir(input)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "jsonl") {
                files.push(path);
            }
        }
        files.sort();
    } else {
        files.push(input.to_path_buf());
    }
    let mut out = Collected::default();
    for path in files {
        for line in BufReader::new(File::open(&path)?).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: serde_json::Value = serde_json::from_str(&line)?;
            match v.get("kind").and_then(|k| k.as_str()) {
                Some("field") => out.fields.push(serde_json::from_value(v)?),
                Some("summary") => out.summaries.push(serde_json::from_value(v)?),
                _ => {}
            }
        }
    }
    Ok(out)
}

/// One row of the rendered table: a field and all its generators found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub conductor: u64,
    pub rep_type: String,
    pub polynomial: String,
    pub generators: Vec<String>,
}

/// Groups icosahedral records by fingerprint, conductor ascending. Each
/// field is represented by the generator with the smallest coefficients.
pub fn table_rows(fields: &[FieldRecord]) -> Vec<TableRow> {
    let mut groups: BTreeMap<(u64, String), Vec<&FieldRecord>> = BTreeMap::new();
    for f in fields.iter().filter(|f| f.rep_type != "none") {
        let key = f
            .fingerprint
            .clone()
            .unwrap_or_else(|| f.polynomial.clone());
        groups.entry((f.prime, key)).or_default().push(f);
    }
    groups
        .into_values()
        .map(|mut g| {
            g.sort_by_key(|f| {
                (
                    f.coeffs.iter().map(|c| c.unsigned_abs()).sum::<u64>(),
                    f.coeffs,
                )
            });
            TableRow {
                conductor: g[0].prime,
                rep_type: g[0].rep_type.clone(),
                polynomial: g[0].polynomial.clone(),
                generators: g.iter().map(|f| f.polynomial.clone()).collect(),
            }
        })
        .collect()
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut s = String::from("conductor  type  polynomial\n");
    for r in rows {
        s.push_str(&format!(
            "{:<10} {:<5} {}\n",
            r.conductor, r.rep_type, r.polynomial
        ));
    }
    s.push_str("\nAll generators found\n");
    for r in rows {
        s.push_str(&format!(
            "{} ({} generators)\n",
            r.conductor,
            r.generators.len()
        ));
        for g in &r.generators {
            s.push_str(&format!("    {g}\n"));
        }
    }
    s
}

pub fn cmd_table(args: &TableArgs) -> Result<u8, CliError> {
    let collected = collect_records(&args.input)?;
    let mut code = EXIT_OK;
    if collected.summaries.is_empty() {
        eprintln!(
            "warning: no search summaries under {}",
            args.input.display()
        );
    }
    for s in collected.summaries.iter().filter(|s| s.indeterminate > 0) {
        eprintln!(
            "warning: p = {} has {} indeterminate certificates",
            s.prime, s.indeterminate
        );
        code = EXIT_INDETERMINATE;
    }
    for f in &collected.fields {
        if !collected.summaries.iter().any(|s| s.prime == f.prime) {
            eprintln!(
                "warning: p = {} has records but no summary (incomplete run?)",
                f.prime
            );
            code = EXIT_INDETERMINATE;
            break;
        }
    }
    let rows = table_rows(&collected.fields);
    if rows.is_empty() {
        eprintln!("warning: empty table");
    }
    let text = render_table(&rows);
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(code)
}

pub fn cmd_sanity(args: &SanityArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let opts = PipelineOptions {
        workers: args.workers.max(1),
        verify: VerifyOptions {
            seed: args.seed,
            ..VerifyOptions::default()
        },
        ..PipelineOptions::default()
    };
    let want = |t: RepType| args.rep_type.is_none_or(|r| r == t);
    let mut failed = false;
    let mut report = |kind: &str, p: u64, r: SanityReport| -> Result<(), CliError> {
        failed |= r.is_fail();
        writeln!(out, "{kind} {p}: {r}")?;
        Ok(())
    };
    let mut dihedral_any = false;
    for p in args.primes.iter() {
        if want(RepType::T3a) && p % 5 == 1 {
            let target = SearchTarget::new(p, RepType::T3a)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let result = crate::pipeline::search_and_verify(target, &opts);
            report(
                "cyclic",
                p,
                cyclotomic_sanity(p, &result.certificates(), args.seed),
            )?;
        }
        if want(RepType::T3c) && p % 4 == 1 && real_quadratic_class_number(p).is_multiple_of(5) {
            dihedral_any = true;
            let target = SearchTarget::new(p, RepType::T3c)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let result = crate::pipeline::search_and_verify(target, &opts);
            report("dihedral", p, dihedral_sanity(p, &result.certificates()))?;
        }
    }
    if want(RepType::T3c) && !dihedral_any {
        writeln!(
            out,
            "dihedral: not applicable (no prime = 1 mod 4 in {}..{} has class number divisible by 5)",
            args.primes.lo, args.primes.hi
        )?;
    }
    Ok(if failed { EXIT_INTERNAL } else { EXIT_OK })
}

pub fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Search(a) => cmd_search(a),
        Command::Verify(a) => cmd_verify(a, &mut io::stdout()),
        Command::Table(a) => cmd_table(a),
        Command::Sanity(a) => cmd_sanity(a, &mut io::stdout()),
        Command::Resume(a) => cmd_resume(a),
    }
}

/// Entry point shared by the binary: parses arguments and maps outcomes to
/// exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
