//! Targeted enumeration over the coefficient box, work partitioning,
//! parallel execution and resumable progress.
//!
//! Tuples are visited in the order a1, a2, a3, a5, a4, each ascending, with
//! `a5 = 0` skipped. A work unit is a half-open range of `(a1, a2, a3)`
//! prefixes, so the concatenation of unit streams in unit order is the
//! single-threaded stream.

use std::ops::ControlFlow;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkpoint::{self, CheckpointError};
use crate::filter::{cheap_filter, FilterStage, FILTER_NAMES};
use crate::hunter::{BoundContext, IntRange};
use crate::targeting::{
    admissible_count, admissible_values, residues_3a, residues_3b, residues_3c, RepType,
    SearchTarget,
};

/// Leading coefficients `(a1, a2, a3)`.
pub type Prefix = (i64, i64, i64);

/// Position in the prefix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bound {
    Start,
    At(Prefix),
    End,
}

/// Shape of the coefficient box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxSpec {
    /// Hunter bounds for `D = p^e`.
    Hunter,
    /// Fixed intervals, used to compare against brute force.
    Synthetic {
        a1: Vec<i64>,
        a2: IntRange,
        a3: IntRange,
        a4: IntRange,
        a5: IntRange,
    },
}

/// Residue classes `(r4, r5)` allowed after a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completions {
    All,
    Classes(Vec<(u64, u64)>),
}

/// A target together with its coefficient box.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    pub target: SearchTarget,
    pub spec: BoxSpec,
    contexts: Vec<BoundContext>,
}

impl SearchSpace {
    pub fn hunter(target: SearchTarget) -> Self {
        let disc = target.disc();
        SearchSpace {
            target,
            spec: BoxSpec::Hunter,
            contexts: (0..=2).map(|a1| BoundContext::new(a1, &disc)).collect(),
        }
    }

    pub fn synthetic(
        target: SearchTarget,
        a1: Vec<i64>,
        a2: IntRange,
        a3: IntRange,
        a4: IntRange,
        a5: IntRange,
    ) -> Self {
        SearchSpace {
            target,
            spec: BoxSpec::Synthetic { a1, a2, a3, a4, a5 },
            contexts: Vec::new(),
        }
    }

    pub fn from_spec(target: SearchTarget, spec: BoxSpec) -> Self {
        match spec {
            BoxSpec::Hunter => SearchSpace::hunter(target),
            BoxSpec::Synthetic { a1, a2, a3, a4, a5 } => {
                SearchSpace::synthetic(target, a1, a2, a3, a4, a5)
            }
        }
    }

    fn a1_values(&self) -> Vec<i64> {
        match &self.spec {
            BoxSpec::Hunter => vec![0, 1, 2],
            BoxSpec::Synthetic { a1, .. } => {
                let mut v = a1.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    pub fn a2_range(&self, a1: i64) -> IntRange {
        match &self.spec {
            BoxSpec::Hunter => self.contexts[a1 as usize].a2_interval(),
            BoxSpec::Synthetic { a2, .. } => *a2,
        }
    }

    pub fn a3_range(&self, a1: i64, a2: i64) -> IntRange {
        match &self.spec {
            BoxSpec::Hunter => self.contexts[a1 as usize].a3_interval(a2),
            BoxSpec::Synthetic { a3, .. } => *a3,
        }
    }

    pub fn a5_range(&self, a1: i64, a2: i64) -> IntRange {
        match &self.spec {
            BoxSpec::Hunter => self.contexts[a1 as usize].a5_interval(a2),
            BoxSpec::Synthetic { a5, .. } => *a5,
        }
    }

    pub fn a4_range(&self, a1: i64, a2: i64, a3: i64, a5: i64) -> IntRange {
        match &self.spec {
            BoxSpec::Hunter => self.contexts[a1 as usize].a4_interval(a2, a3, a5),
            BoxSpec::Synthetic { a4, .. } => *a4,
        }
    }

    /// All prefixes in enumeration order, with 3a congruences on a2 and a3
    /// already applied.
    pub fn prefixes(&self) -> impl Iterator<Item = Prefix> + '_ {
        let p = self.target.p;
        let rep = self.target.rep_type;
        self.a1_values().into_iter().flat_map(move |a1| {
            let r = (rep == RepType::T3a).then(|| residues_3a(p, a1));
            let a2s: Box<dyn Iterator<Item = i64>> = match r {
                Some((r2, ..)) => Box::new(admissible_values(self.a2_range(a1), r2, p)),
                None => Box::new(self.a2_range(a1).iter()),
            };
            a2s.flat_map(move |a2| {
                let a3s: Box<dyn Iterator<Item = i64>> = match r {
                    Some((_, r3, ..)) => Box::new(admissible_values(self.a3_range(a1, a2), r3, p)),
                    None => Box::new(self.a3_range(a1, a2).iter()),
                };
                a3s.map(move |a3| (a1, a2, a3))
            })
        })
    }

    pub fn completions(&self, (a1, a2, a3): Prefix) -> Completions {
        let p = self.target.p;
        match self.target.rep_type {
            RepType::Untargeted => Completions::All,
            RepType::T3a => {
                let (_, _, r4, r5) = residues_3a(p, a1);
                Completions::Classes(vec![(r4, r5)])
            }
            RepType::T3b => Completions::Classes(residues_3b(p, a1, a2, a3)),
            RepType::T3c => Completions::Classes(residues_3c(p, a1, a2, a3)),
        }
    }

    /// Calls `visit` on every tuple below `prefix`, in order.
    pub fn for_each_tuple(&self, prefix: Prefix, mut visit: impl FnMut([i64; 5])) {
        let (a1, a2, a3) = prefix;
        let p = self.target.p;
        let a5_range = self.a5_range(a1, a2);
        match self.completions(prefix) {
            Completions::All => {
                for a5 in a5_range.iter().filter(|&x| x != 0) {
                    for a4 in self.a4_range(a1, a2, a3, a5).iter() {
                        visit([a1, a2, a3, a4, a5]);
                    }
                }
            }
            Completions::Classes(pairs) => {
                let mut r5s: Vec<u64> = pairs.iter().map(|&(_, r5)| r5).collect();
                r5s.sort_unstable();
                r5s.dedup();
                for a5 in merged_progressions(a5_range, &r5s, p) {
                    if a5 == 0 {
                        continue;
                    }
                    let r5 = a5.rem_euclid(p as i64) as u64;
                    let r4s: Vec<u64> = pairs.iter().filter(|x| x.1 == r5).map(|x| x.0).collect();
                    let a4_range = self.a4_range(a1, a2, a3, a5);
                    if r4s.len() == 1 {
                        for a4 in admissible_values(a4_range, r4s[0], p) {
                            visit([a1, a2, a3, a4, a5]);
                        }
                    } else {
                        for a4 in merged_progressions(a4_range, &r4s, p) {
                            visit([a1, a2, a3, a4, a5]);
                        }
                    }
                }
            }
        }
    }

    /// Number of tuples `for_each_tuple` visits, computed from the
    /// progression lengths.
    pub fn tuple_count(&self, prefix: Prefix) -> u64 {
        let (a1, a2, a3) = prefix;
        let p = self.target.p;
        let a5_range = self.a5_range(a1, a2);
        match self.completions(prefix) {
            Completions::All => a5_range
                .iter()
                .filter(|&x| x != 0)
                .map(|a5| self.a4_range(a1, a2, a3, a5).len())
                .sum(),
            Completions::Classes(pairs) => {
                let mut r5s: Vec<u64> = pairs.iter().map(|&(_, r5)| r5).collect();
                r5s.sort_unstable();
                r5s.dedup();
                merged_progressions(a5_range, &r5s, p)
                    .into_iter()
                    .filter(|&a5| a5 != 0)
                    .map(|a5| {
                        let r5 = a5.rem_euclid(p as i64) as u64;
                        let a4_range = self.a4_range(a1, a2, a3, a5);
                        let mut r4s: Vec<u64> =
                            pairs.iter().filter(|x| x.1 == r5).map(|x| x.0).collect();
                        r4s.sort_unstable();
                        r4s.dedup();
                        r4s.iter()
                            .map(|&r4| admissible_count(a4_range, r4, p))
                            .sum::<u64>()
                    })
                    .sum()
            }
        }
    }

    /// Every visited tuple of the whole space, in order.
    pub fn visited_tuples(&self) -> Vec<[i64; 5]> {
        let mut out = Vec::new();
        for prefix in self.prefixes() {
            self.for_each_tuple(prefix, |t| out.push(t));
        }
        out
    }
}

/// Union of the progressions `r mod p` inside `range`, ascending.
fn merged_progressions(range: IntRange, residues: &[u64], p: u64) -> Vec<i64> {
    let mut v: Vec<i64> = residues
        .iter()
        .flat_map(|&r| admissible_values(range, r, p))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkUnit {
    pub unit_id: u32,
    pub target: SearchTarget,
    /// Inclusive lower end of the prefix range.
    pub lo: Bound,
    /// Exclusive upper end of the prefix range.
    pub hi: Bound,
}

impl WorkUnit {
    pub fn contains(&self, prefix: Prefix) -> bool {
        self.lo <= Bound::At(prefix) && Bound::At(prefix) < self.hi
    }
}

/// Splits the prefix sequence into `unit_budget` contiguous units of
/// roughly equal tuple count.
pub fn plan(space: &SearchSpace, unit_budget: usize) -> Vec<WorkUnit> {
    let budget = unit_budget.max(1);
    let prefixes: Vec<(Prefix, u64)> = space
        .prefixes()
        .map(|x| (x, space.tuple_count(x) + 1))
        .collect();
    let total: u64 = prefixes.iter().map(|x| x.1).sum();
    let mut cuts = Vec::with_capacity(budget + 1);
    cuts.push(Bound::Start);
    let mut acc = 0u128;
    let mut idx = 0usize;
    for i in 1..budget {
        let threshold = total as u128 * i as u128 / budget as u128;
        while idx < prefixes.len() && acc < threshold {
            acc += prefixes[idx].1 as u128;
            idx += 1;
        }
        cuts.push(prefixes.get(idx).map_or(Bound::End, |x| Bound::At(x.0)));
    }
    cuts.push(Bound::End);
    (0..budget)
        .map(|i| WorkUnit {
            unit_id: i as u32,
            target: space.target,
            lo: cuts[i],
            hi: cuts[i + 1],
        })
        .collect()
}

/// Progress counters of a unit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub prefixes: u64,
    pub enumerated: u64,
    pub totally_real: u64,
    pub valuation_ok: u64,
    pub emitted: u64,
}

impl Counts {
    pub fn add(&mut self, o: &Counts) {
        self.prefixes += o.prefixes;
        self.enumerated += o.enumerated;
        self.totally_real += o.totally_real;
        self.valuation_ok += o.valuation_ok;
        self.emitted += o.emitted;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub coeffs: [i64; 5],
    pub unit_id: u32,
    /// Polynomial discriminant in decimal.
    pub poly_disc: String,
    /// Cheap filters passed, in order of application.
    pub filters: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitState {
    pub unit: WorkUnit,
    /// Last fully processed prefix.
    pub last_done: Option<Prefix>,
    pub counts: Counts,
    pub candidates: Vec<CandidateRecord>,
    pub finished: bool,
}

impl UnitState {
    pub fn fresh(unit: WorkUnit) -> Self {
        UnitState {
            unit,
            last_done: None,
            counts: Counts::default(),
            candidates: Vec::new(),
            finished: false,
        }
    }
}

/// Runs one prefix and appends its survivors.
fn run_prefix(space: &SearchSpace, prefix: Prefix, state: &mut UnitState) {
    let (p, e) = (space.target.p, space.target.disc_exponent);
    let unit_id = state.unit.unit_id;
    let counts = &mut state.counts;
    let out = &mut state.candidates;
    space.for_each_tuple(prefix, |a| {
        counts.enumerated += 1;
        let r = cheap_filter(&a, p, e);
        if r.stage == FilterStage::NotTotallyReal {
            return;
        }
        counts.totally_real += 1;
        if r.stage == FilterStage::Valuation {
            return;
        }
        counts.valuation_ok += 1;
        if r.stage == FilterStage::Passed {
            counts.emitted += 1;
            out.push(CandidateRecord {
                coeffs: a,
                unit_id,
                poly_disc: r.disc.expect("survivor has a discriminant").to_string(),
                filters: FILTER_NAMES.iter().map(|s| s.to_string()).collect(),
            });
        }
    });
    state.counts.prefixes += 1;
    state.last_done = Some(prefix);
}

/// Continues a unit from its recorded progress. `after_prefix` is called
/// after every completed prefix; returning `Break` stops the unit with
/// resumable state. Returns whether the unit finished.
pub fn run_unit(
    space: &SearchSpace,
    state: &mut UnitState,
    after_prefix: &mut dyn FnMut(&UnitState) -> ControlFlow<()>,
) -> bool {
    if state.finished {
        return true;
    }
    let unit = state.unit;
    let resume_from = match state.last_done {
        Some(x) => Bound::At(x),
        None => Bound::Start,
    };
    for prefix in space.prefixes() {
        let at = Bound::At(prefix);
        if at >= unit.hi {
            break;
        }
        if at < unit.lo || (state.last_done.is_some() && at <= resume_from) {
            continue;
        }
        run_prefix(space, prefix, state);
        if after_prefix(state).is_break() {
            return false;
        }
    }
    state.finished = true;
    true
}

/// Concatenation of the unit streams in unit order.
pub fn merged_stream(states: &[UnitState]) -> Vec<CandidateRecord> {
    states
        .iter()
        .flat_map(|s| s.candidates.iter().cloned())
        .collect()
}

/// Resumable snapshot of a search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub target: SearchTarget,
    pub spec: BoxSpec,
    pub units: Vec<UnitState>,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        checkpoint::save_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let c: Checkpoint = checkpoint::load_json(path)?;
        if c.version != checkpoint::FORMAT_VERSION {
            return Err(CheckpointError::Version {
                found: c.version,
                expected: checkpoint::FORMAT_VERSION,
            });
        }
        Ok(c)
    }

    pub fn is_complete(&self) -> bool {
        self.units.iter().all(|u| u.finished)
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for u in &self.units {
            c.add(&u.counts);
        }
        c
    }
}

/// Execution knobs for [`Search::run`].
#[derive(Clone, Default)]
pub struct RunOptions {
    pub workers: usize,
    /// Minimum time between checkpoint writes; zero writes after every prefix.
    pub checkpoint_interval: Duration,
    /// Stop (as if killed) after this many prefixes in this run.
    pub stop_after_prefixes: Option<u64>,
}

/// Outcome of [`Search::run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Complete,
    Stopped,
}

/// A planned search and the state of all its units.
#[derive(Debug, Clone)]
pub struct Search {
    pub space: SearchSpace,
    pub units: Vec<UnitState>,
}

type SaveHook<'a> = dyn Fn(&Checkpoint) -> Result<(), CheckpointError> + Sync + 'a;

impl Search {
    pub fn new(space: SearchSpace, unit_budget: usize) -> Self {
        let units = plan(&space, unit_budget)
            .into_iter()
            .map(UnitState::fresh)
            .collect();
        Search { space, units }
    }

    pub fn from_checkpoint(ck: Checkpoint) -> Self {
        Search {
            space: SearchSpace::from_spec(ck.target, ck.spec),
            units: ck.units,
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            version: checkpoint::FORMAT_VERSION,
            target: self.space.target,
            spec: self.space.spec.clone(),
            units: self.units.clone(),
        }
    }

    pub fn candidates(&self) -> Vec<CandidateRecord> {
        merged_stream(&self.units)
    }

    pub fn counts(&self) -> Counts {
        self.checkpoint().counts()
    }

    /// Runs all unfinished units, saving snapshots through `save` as
    /// progress is made and once at the end.
    pub fn run(
        &mut self,
        opts: &RunOptions,
        save: Option<&SaveHook<'_>>,
    ) -> Result<RunStatus, CheckpointError> {
        let workers = opts.workers.max(1);
        let snapshot = Mutex::new(self.checkpoint());
        let last_write = Mutex::new(Instant::now());
        let done_prefixes = AtomicU64::new(0);
        let stop = AtomicBool::new(false);
        let failure: Mutex<Option<CheckpointError>> = Mutex::new(None);
        let space = &self.space;

        let step = |state: &UnitState| -> ControlFlow<()> {
            if stop.load(Ordering::SeqCst) {
                return ControlFlow::Break(());
            }
            let n = done_prefixes.fetch_add(1, Ordering::SeqCst) + 1;
            let limit_hit = opts.stop_after_prefixes.is_some_and(|m| n >= m);
            if let Some(save) = save {
                let mut snap = snapshot.lock().expect("snapshot lock");
                let idx = snap
                    .units
                    .iter()
                    .position(|u| u.unit.unit_id == state.unit.unit_id)
                    .expect("unit in snapshot");
                snap.units[idx] = state.clone();
                let mut last = last_write.lock().expect("timer lock");
                if limit_hit || last.elapsed() >= opts.checkpoint_interval {
                    if let Err(e) = save(&snap) {
                        *failure.lock().expect("failure lock") = Some(e);
                        stop.store(true, Ordering::SeqCst);
                        return ControlFlow::Break(());
                    }
                    *last = Instant::now();
                }
            }
            if limit_hit {
                stop.store(true, Ordering::SeqCst);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        };

        if workers == 1 {
            for state in self.units.iter_mut() {
                if !run_unit(space, state, &mut |s| step(s)) {
                    break;
                }
            }
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            pool.install(|| {
                self.units.par_iter_mut().for_each(|state| {
                    if !stop.load(Ordering::SeqCst) {
                        run_unit(space, state, &mut |s| step(s));
                    }
                });
            });
        }

        if let Some(e) = failure.into_inner().expect("failure lock") {
            return Err(e);
        }
        let final_ck = self.checkpoint();
        if let Some(save) = save {
            save(&final_ck)?;
        }
        Ok(if final_ck.is_complete() {
            RunStatus::Complete
        } else {
            RunStatus::Stopped
        })
    }
}

/// Continues a checkpointed search and returns the candidates it had not
/// yet produced.
pub fn resume(
    ck: Checkpoint,
    opts: &RunOptions,
) -> Result<(Vec<CandidateRecord>, Search), CheckpointError> {
    let already: Vec<usize> = ck.units.iter().map(|u| u.candidates.len()).collect();
    let mut search = Search::from_checkpoint(ck);
    search.run(opts, None)?;
    let suffix = search
        .units
        .iter()
        .zip(already)
        .flat_map(|(u, n)| u.candidates[n..].iter().cloned())
        .collect();
    Ok((suffix, search))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3a(p: u64) -> SearchTarget {
        SearchTarget::new(p, RepType::T3a).unwrap()
    }

    #[test]
    fn single_unit_covers_everything() {
        let space = SearchSpace::hunter(t3a(11));
        let units = plan(&space, 1);
        assert_eq!(units.len(), 1);
        assert_eq!((units[0].lo, units[0].hi), (Bound::Start, Bound::End));
        // at p = 11 the a1 = 0 slice has no a2 = 0 mod 11 inside [-5, -3]
        let a1s: Vec<i64> = space.prefixes().map(|x| x.0).collect();
        assert!(!a1s.contains(&0) && a1s.contains(&1));
        assert!(space.prefixes().all(|x| units[0].contains(x)));
    }

    #[test]
    fn units_partition_prefixes() {
        let space = SearchSpace::hunter(t3a(1951));
        let units = plan(&space, 8);
        assert_eq!(units.len(), 8);
        for prefix in space.prefixes() {
            assert_eq!(units.iter().filter(|u| u.contains(prefix)).count(), 1);
        }
        for w in units.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
    }

    #[test]
    fn oversized_budget_leaves_empty_units() {
        let space = SearchSpace::hunter(t3a(11));
        let n = space.prefixes().count();
        let units = plan(&space, n + 5);
        assert_eq!(units.len(), n + 5);
        let empty = units
            .iter()
            .filter(|u| !space.prefixes().any(|x| u.contains(x)))
            .count();
        assert!(empty >= 5);
        for prefix in space.prefixes() {
            assert_eq!(units.iter().filter(|u| u.contains(prefix)).count(), 1);
        }
    }

    #[test]
    fn counts_match_visits() {
        for rep in [RepType::T3a, RepType::T3b, RepType::T3c] {
            let p = match rep {
                RepType::T3a => 31,
                RepType::T3b => 13,
                _ => 13,
            };
            let space = SearchSpace::hunter(SearchTarget::new(p, rep).unwrap());
            for prefix in space.prefixes().take(200) {
                let mut n = 0u64;
                space.for_each_tuple(prefix, |_| n += 1);
                assert_eq!(n, space.tuple_count(prefix));
            }
        }
    }

    #[test]
    fn period_polynomial_of_11_is_found() {
        let mut s = Search::new(SearchSpace::hunter(t3a(11)), 1);
        assert_eq!(
            s.run(&RunOptions::default(), None).unwrap(),
            RunStatus::Complete
        );
        // x^5 + x^4 - 4x^3 - 3x^2 + 3x + 1 under x -> -x
        let found: Vec<[i64; 5]> = s.candidates().iter().map(|c| c.coeffs).collect();
        assert!(found.contains(&[1, -4, -3, 3, 1]), "{found:?}");
    }
}
