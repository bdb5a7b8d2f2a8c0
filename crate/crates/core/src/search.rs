//! Exhaustive and seeded random searches for the best one-generator t-CIS code.
//!
//! Candidates are evaluated in batches. Each batch is swept in parallel with a
//! floor equal to the best distance known when the batch started, and results
//! are merged in candidate order, so the outcome never depends on the number
//! of worker threads.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{CodeRecord, GeneratorSpec};
use crate::distance::{Sweep, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::field::{field_of_size, Elem, Field};
use crate::poly::Poly;
use crate::ring::{QuotientRing, ResidueElement, Ring};

const BATCH: usize = 512;

/// Cap on unit-tuple space for exhaustive table rows.
pub const EXHAUSTIVE_CUTOFF: u128 = 1 << 24;

/// Candidate budget for random table rows.
pub const RANDOM_BUDGET: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Random => "random",
        })
    }
}

/// Where `h` comes from.
#[derive(Clone, Debug)]
pub enum HSource {
    Fixed(Ring),
    /// A fresh random monic separable `h` of degree `n` per candidate.
    RandomSeparable { field: Field, n: usize },
}

#[derive(Clone, Debug)]
pub struct SearchJob {
    pub t: usize,
    pub h: HSource,
    pub mode: SearchMode,
    /// Ignored in exhaustive mode.
    pub seed: u64,
    /// Maximum number of candidate tuples.
    pub budget: u64,
    /// Stop as soon as a code of at least this distance is found.
    pub target_d: Option<usize>,
}

impl SearchJob {
    pub fn exhaustive(ring: &Ring, t: usize) -> Self {
        SearchJob { t, h: HSource::Fixed(ring.clone()), mode: SearchMode::Exhaustive, seed: 0, budget: u64::MAX, target_d: None }
    }

    pub fn random(ring: &Ring, t: usize, seed: u64, budget: u64) -> Self {
        SearchJob { t, h: HSource::Fixed(ring.clone()), mode: SearchMode::Random, seed, budget, target_d: None }
    }

    pub fn with_target(mut self, target: Option<usize>) -> Self {
        self.target_d = target;
        self
    }

    pub fn n(&self) -> usize {
        match &self.h {
            HSource::Fixed(r) => r.n(),
            HSource::RandomSeparable { n, .. } => *n,
        }
    }

    pub fn field(&self) -> &Field {
        match &self.h {
            HSource::Fixed(r) => r.field(),
            HSource::RandomSeparable { field, .. } => field,
        }
    }

    pub fn run(&self) -> Result<SearchReport> {
        if self.t < 2 {
            return Err(Error::BadIndex(self.t));
        }
        let q = self.field().size() as u128;
        let needed = q.checked_pow(self.n() as u32).unwrap_or(u128::MAX);
        if needed > DEFAULT_BUDGET {
            return Err(Error::BudgetExceeded { needed, budget: DEFAULT_BUDGET });
        }
        match (&self.h, self.mode) {
            (HSource::Fixed(ring), SearchMode::Exhaustive) => exhaustive(ring, self.t, self.budget, self.target_d),
            (_, SearchMode::Random) => random(self),
            (HSource::RandomSeparable { .. }, SearchMode::Exhaustive) => {
                Err(Error::Invalid("exhaustive search needs a fixed h".into()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub best_d: usize,
    pub best_spec: GeneratorSpec,
    pub candidates_tried: u64,
    pub elapsed: Duration,
    pub mode: SearchMode,
    pub seed: Option<u64>,
}

impl SearchReport {
    /// `(n, d)` as it appears in a distance table.
    pub fn table_row(&self) -> (usize, usize) {
        (self.best_spec.n(), self.best_d)
    }

    /// Serializable summary without timing, so identical runs give identical JSON.
    pub fn record(&self) -> SearchRecord {
        SearchRecord {
            n: self.best_spec.n(),
            t: self.best_spec.t(),
            best_d: self.best_d,
            code: self.best_spec.to_record(Some(self.best_d)),
            candidates_tried: self.candidates_tried,
            mode: self.mode,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub n: usize,
    pub t: usize,
    pub best_d: usize,
    pub code: CodeRecord,
    pub candidates_tried: u64,
    pub mode: SearchMode,
    pub seed: Option<u64>,
}

/// Running best with the in-order merge rule: strictly larger distance wins.
struct Tracker {
    best: Option<(usize, GeneratorSpec)>,
    tried: u64,
    stop_at: usize,
}

impl Tracker {
    fn new(n: usize, t: usize, target: Option<usize>) -> Self {
        // Singleton bound for a [tn, n] code
        let ceiling = n * (t - 1) + 1;
        Tracker { best: None, tried: 0, stop_at: target.map_or(ceiling, |d| d.min(ceiling)) }
    }

    fn floor(&self) -> usize {
        self.best.as_ref().map_or(0, |(d, _)| *d)
    }

    /// Evaluates one batch; returns true once the stopping distance is reached.
    fn feed(&mut self, batch: Vec<GeneratorSpec>) -> Result<bool> {
        let floor = self.floor();
        let sweeps = batch
            .par_iter()
            .map(|spec| Ok(spec.kernel()?.sweep(floor)))
            .collect::<Result<Vec<Sweep>>>()?;
        for (spec, sweep) in batch.into_iter().zip(sweeps) {
            self.tried += 1;
            if let Sweep::Exact(d) = sweep {
                if d > self.floor() {
                    self.best = Some((d, spec));
                    if d >= self.stop_at {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn finish(self, start: Instant, mode: SearchMode, seed: Option<u64>) -> Result<SearchReport> {
        let (best_d, best_spec) = self.best.ok_or_else(|| Error::Invalid("no candidate was evaluated".into()))?;
        Ok(SearchReport { best_d, best_spec, candidates_tried: self.tried, elapsed: start.elapsed(), mode, seed })
    }
}

/// Number of `(t-1)`-tuples of units of `ring`.
pub fn unit_tuple_count(ring: &Ring, t: usize) -> u128 {
    (ring.unit_indices().len() as u128).checked_pow(t as u32 - 1).unwrap_or(u128::MAX)
}

/// Best distance over all `(t-1)`-tuples of units of `R`.
///
/// Permuting the `a_i` permutes the blocks, so the first maximal tuple in
/// lexicographic order is always nondecreasing; only those tuples are swept.
pub fn exhaustive_best(q: u64, t: usize, h: &Poly, budget: u128) -> Result<SearchReport> {
    if h.field().size() as u64 != q {
        return Err(Error::FieldMismatch);
    }
    let ring = QuotientRing::new(h)?;
    let needed = unit_tuple_count(&ring, t);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    SearchJob::exhaustive(&ring, t).run()
}

fn exhaustive(ring: &Ring, t: usize, budget: u64, target: Option<usize>) -> Result<SearchReport> {
    let start = Instant::now();
    let units: Vec<ResidueElement> = ring.unit_indices().into_iter().map(|i| ring.from_index(i)).collect();
    let mut tracker = Tracker::new(ring.n(), t, target);
    let mut slots = vec![0usize; t - 1];
    let mut done = units.is_empty();
    while !done {
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH && !done && tracker.tried + (batch.len() as u64) < budget {
            let gens = slots.iter().map(|&i| units[i].clone()).collect();
            batch.push(GeneratorSpec::new(ring, t, gens)?);
            done = !advance_nondecreasing(&mut slots, units.len());
        }
        if batch.is_empty() || tracker.feed(batch)? {
            break;
        }
    }
    tracker.finish(start, SearchMode::Exhaustive, None)
}

/// Next nondecreasing tuple over `0..base`; false after the last one.
fn advance_nondecreasing(slots: &mut [usize], base: usize) -> bool {
    for i in (0..slots.len()).rev() {
        if slots[i] + 1 < base {
            let v = slots[i] + 1;
            slots[i..].iter_mut().for_each(|s| *s = v);
            return true;
        }
    }
    false
}

fn random(job: &SearchJob) -> Result<SearchReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
    let mut tracker = Tracker::new(job.n(), job.t, job.target_d);
    while tracker.tried < job.budget {
        let size = (job.budget - tracker.tried).min(BATCH as u64) as usize;
        let mut batch = Vec::with_capacity(size);
        for _ in 0..size {
            let ring = match &job.h {
                HSource::Fixed(r) => r.clone(),
                HSource::RandomSeparable { field, n } => random_separable(&mut rng, field, *n)?,
            };
            let gens = (0..job.t - 1).map(|_| random_unit(&mut rng, &ring)).collect();
            batch.push(GeneratorSpec::new(&ring, job.t, gens)?);
        }
        if tracker.feed(batch)? {
            break;
        }
    }
    tracker.finish(start, SearchMode::Random, Some(job.seed))
}

/// Uniform residue, redrawn until it is a unit.
pub fn random_unit(rng: &mut ChaCha8Rng, ring: &Ring) -> ResidueElement {
    let size = ring.size() as u64;
    loop {
        let a = ring.from_index(rng.random_range(0..size));
        if a.is_unit() {
            return a;
        }
    }
}

/// Uniform monic polynomial of degree `n`, redrawn until separable.
pub fn random_separable(rng: &mut ChaCha8Rng, field: &Field, n: usize) -> Result<Ring> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = field.size();
    loop {
        let mut coeffs: Vec<Elem> = (0..n).map(|_| rng.random_range(0..q)).collect();
        coeffs.push(1);
        let h = Poly::from_coeffs(field, coeffs);
        if h.is_separable()? {
            return QuotientRing::new(&h);
        }
    }
}

/// Seeded random search with `h` drawn afresh for every candidate.
pub fn qpc_search(q: u64, t: usize, n: usize, seed: u64, budget: u64, target: Option<usize>) -> Result<SearchReport> {
    let field = field_of_size(q)?;
    let job = SearchJob {
        t,
        h: HSource::RandomSeparable { field, n },
        mode: SearchMode::Random,
        seed,
        budget,
        target_d: target,
    };
    job.run()
}

/// Seeded random search over unit tuples for a fixed `h`.
pub fn random_search(job: &SearchJob) -> Result<SearchReport> {
    if job.mode != SearchMode::Random {
        return Err(Error::Invalid("random_search needs a random-mode job".into()));
    }
    job.run()
}

/// The six distance tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "qc-t2")]
    QcT2,
    #[serde(rename = "qc-t3")]
    QcT3,
    #[serde(rename = "qt-t2")]
    QtT2,
    #[serde(rename = "qt-t3")]
    QtT3,
    #[serde(rename = "qpc-t2")]
    QpcT2,
    #[serde(rename = "qpc-t3")]
    QpcT3,
}

/// Reference row data for one table.
#[derive(Clone, Copy, Debug)]
pub struct TableData {
    pub q: u64,
    pub t: usize,
    pub first_n: usize,
    /// Distances reported for the construction.
    pub d: &'static [usize],
    /// Best known linear `[tn, n]` distance; an upper bound for every row.
    pub d_linear: &'static [usize],
}

impl TableId {
    pub const ALL: [TableId; 6] = [TableId::QcT2, TableId::QcT3, TableId::QtT2, TableId::QtT3, TableId::QpcT2, TableId::QpcT3];

    pub fn name(self) -> &'static str {
        match self {
            TableId::QcT2 => "qc-t2",
            TableId::QcT3 => "qc-t3",
            TableId::QtT2 => "qt-t2",
            TableId::QtT3 => "qt-t3",
            TableId::QpcT2 => "qpc-t2",
            TableId::QpcT3 => "qpc-t3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown table '{s}'")))
    }

    pub fn data(self) -> TableData {
        match self {
            TableId::QcT2 => TableData { q: 2, t: 2, first_n: 2, d: &[2, 3, 4, 4, 4, 4, 5, 6], d_linear: &[2, 3, 4, 4, 4, 4, 5, 6] },
            TableId::QcT3 => TableData { q: 2, t: 3, first_n: 2, d: &[4, 4, 6, 7, 8, 8, 8], d_linear: &[4, 4, 6, 7, 8, 8, 8] },
            TableId::QtT2 => TableData { q: 4, t: 2, first_n: 2, d: &[3, 3, 4, 5, 5, 6, 6], d_linear: &[3, 4, 4, 5, 6, 6, 7] },
            TableId::QtT3 => TableData { q: 4, t: 3, first_n: 2, d: &[4, 6, 7, 8, 9, 10, 11], d_linear: &[4, 6, 7, 8, 10, 11, 12] },
            TableId::QpcT2 => TableData { q: 2, t: 2, first_n: 2, d: &[2, 2, 3, 3, 4, 4], d_linear: &[2, 3, 4, 4, 4, 4] },
            TableId::QpcT3 => TableData { q: 2, t: 3, first_n: 2, d: &[4, 4, 5, 5, 6, 6], d_linear: &[4, 4, 6, 7, 8, 8] },
        }
    }

    pub fn ns(self) -> std::ops::RangeInclusive<usize> {
        let data = self.data();
        data.first_n..=data.first_n + data.d.len() - 1
    }

    /// Reported values must be matched exactly for QC rows (`h = x^n - 1` is
    /// fully determined); QT and QPC rows only need to be reached.
    pub fn exact_contract(self) -> bool {
        matches!(self, TableId::QcT2 | TableId::QcT3)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub seed: u64,
    pub exhaustive_cutoff: u128,
    pub random_budget: u64,
    /// `alpha` for the QT tables; defaults to the first element outside `{0, 1}`.
    pub alpha: Option<Elem>,
    /// Restrict to these co-indices.
    pub ns: Option<Vec<usize>>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { seed: 0, exhaustive_cutoff: EXHAUSTIVE_CUTOFF, random_budget: RANDOM_BUDGET, alpha: None, ns: None }
    }
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub n: usize,
    pub d_found: usize,
    pub d_table: usize,
    pub d_linear: usize,
    pub report: SearchReport,
}

impl TableRow {
    pub fn exact(&self) -> bool {
        self.d_found == self.d_table
    }

    pub fn meets(&self) -> bool {
        self.d_found >= self.d_table
    }

    pub fn record(&self, table: TableId) -> TableRowRecord {
        let ok = if table.exact_contract() { self.exact() } else { self.meets() };
        TableRowRecord {
            table: table.name().to_string(),
            n: self.n,
            d_found: self.d_found,
            d_table: self.d_table,
            d_linear: self.d_linear,
            exact: self.exact(),
            meets: self.meets(),
            ok,
            search: self.report.record(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRowRecord {
    pub table: String,
    pub n: usize,
    pub d_found: usize,
    pub d_table: usize,
    pub d_linear: usize,
    pub exact: bool,
    pub meets: bool,
    pub ok: bool,
    pub search: SearchRecord,
}

/// Default twist for the QT tables: the first element outside `{0, 1}`.
pub fn default_alpha(field: &Field) -> Result<Elem> {
    field.elements().find(|&a| a > 1).ok_or_else(|| Error::Invalid(format!("F{} has no element outside {{0, 1}}", field.size())))
}

/// Runs one search per row: exhaustive when the unit-tuple space fits
/// `exhaustive_cutoff`, otherwise seeded random with `random_budget`. QPC rows
/// are always random since `h` itself is sampled. Every row stops once it
/// reaches the best known linear distance, which no code can exceed, so an
/// exhaustive row still returns its first maximal candidate.
pub fn reproduce_table(table: TableId, options: &TableOptions) -> Result<Vec<TableRow>> {
    let data = table.data();
    let field = field_of_size(data.q)?;
    let mut rows = Vec::new();
    for (i, n) in table.ns().enumerate() {
        if options.ns.as_ref().is_some_and(|ns| !ns.contains(&n)) {
            continue;
        }
        let (d_table, d_linear) = (data.d[i], data.d_linear[i]);
        let report = match table {
            TableId::QpcT2 | TableId::QpcT3 => {
                qpc_search(data.q, data.t, n, options.seed, options.random_budget, Some(d_linear))?
            }
            _ => {
                let alpha = match table {
                    TableId::QtT2 | TableId::QtT3 => options.alpha.map_or_else(|| default_alpha(&field), Ok)?,
                    _ => 1,
                };
                let ring = QuotientRing::new(&Poly::binomial(&field, n, alpha))?;
                if unit_tuple_count(&ring, data.t) <= options.exhaustive_cutoff {
                    SearchJob::exhaustive(&ring, data.t).with_target(Some(d_linear)).run()?
                } else {
                    SearchJob::random(&ring, data.t, options.seed, options.random_budget).with_target(Some(d_linear)).run()?
                }
            }
        };
        rows.push(TableRow { n, d_found: report.best_d, d_table, d_linear, report });
    }
    Ok(rows)
}
