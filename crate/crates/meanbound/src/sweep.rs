//! Randomized sweeps over the inequality registry.
//!
//! Each id draws from its own stream, so the samples seen by an id depend
//! only on `(seed, id, index)` and never on which other ids run alongside it
//! or on how the index range is split across threads. Aggregation keeps the
//! smallest margin with the lowest index on ties, which makes the reduction
//! order independent.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use meanbound_core::catalog::{self, Arity, InequalityId};
use meanbound_core::kyfan::{self, KyFanId};
use meanbound_core::means::{self, PositivePair};
use meanbound_core::report::{Expectation, DEFAULT_TOLERANCE};
use meanbound_core::{Inputs, Link, MarginDomain, SlackReport, Verdict};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::sampling::{self, LogRange, SignConstraint};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "MEANBOUND_THREADS";

/// Anything a sweep can evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepId {
    /// The basic chain `H < G < L < I < A` on a pair.
    MeanChain,
    Catalog(InequalityId),
    KyFan(KyFanId),
}

impl SweepId {
    pub fn name(&self) -> &'static str {
        match self {
            SweepId::MeanChain => "MEAN_CHAIN",
            SweepId::Catalog(id) => id.name(),
            SweepId::KyFan(id) => id.name(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s.trim().eq_ignore_ascii_case("MEAN_CHAIN") {
            return Some(SweepId::MeanChain);
        }
        InequalityId::parse(s).map(SweepId::Catalog).or_else(|| KyFanId::parse(s).map(SweepId::KyFan))
    }

    pub fn all() -> Vec<SweepId> {
        std::iter::once(SweepId::MeanChain)
            .chain(InequalityId::ALL.into_iter().map(SweepId::Catalog))
            .chain(KyFanId::ALL.into_iter().map(SweepId::KyFan))
            .collect()
    }

    /// Parses a comma-separated list; `all` expands to every id.
    pub fn parse_list(s: &str) -> Result<Vec<SweepId>, Error> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                out.extend(Self::all());
            } else {
                out.push(Self::parse(part).ok_or_else(|| Error::Usage(unknown_id_message(part)))?);
            }
        }
        if out.is_empty() {
            return Err(Error::Usage("no ids given".into()));
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|id| seen.insert(*id));
        Ok(out)
    }

    pub fn default_tolerance(&self) -> f64 {
        match self {
            SweepId::Catalog(id) => id.default_tolerance(),
            _ => DEFAULT_TOLERANCE,
        }
    }
}

pub fn unknown_id_message(id: &str) -> String {
    let names: Vec<&str> = SweepId::all().iter().map(SweepId::name).collect();
    format!("unknown id {id:?}; valid ids: {}", names.join(", "))
}

impl fmt::Display for SweepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SweepId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SweepId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SweepId::parse(&s).ok_or_else(|| serde::de::Error::custom(unknown_id_message(&s)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub ids: Vec<SweepId>,
    pub samples: u64,
    pub seed: u64,
    pub sign: SignConstraint,
    pub range: LogRange,
    /// Inclusive bounds on the Ky Fan sample size.
    pub kyfan_n_range: (usize, usize),
    /// Upper bound of the log-uniform index for the integer family.
    pub index_max: u64,
    pub tolerance_overrides: BTreeMap<String, f64>,
    /// Worker count; `None` reads [`THREADS_ENV`] and falls back to the
    /// number of cores. Not part of the report.
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Keep one record per sample for CSV output. Not part of the report.
    #[serde(skip)]
    pub record_samples: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            ids: SweepId::all(),
            samples: 1000,
            seed: 0,
            sign: SignConstraint::Any,
            range: LogRange::default(),
            kyfan_n_range: (2, 20),
            index_max: 1_000_000,
            tolerance_overrides: BTreeMap::new(),
            threads: None,
            record_samples: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.samples == 0 {
            return Err(Error::Usage("samples must be at least 1".into()));
        }
        LogRange::new(self.range.lo, self.range.hi)?;
        let (lo, hi) = self.kyfan_n_range;
        if lo == 0 || hi < lo {
            return Err(Error::Usage(format!("invalid Ky Fan n range [{lo}, {hi}]")));
        }
        if self.index_max == 0 {
            return Err(Error::Usage("index_max must be at least 1".into()));
        }
        for (k, v) in &self.tolerance_overrides {
            if SweepId::parse(k).is_none() {
                return Err(Error::Usage(unknown_id_message(k)));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::Usage(format!("invalid tolerance {v} for {k}")));
            }
        }
        Ok(())
    }

    pub fn tolerance_for(&self, id: SweepId) -> f64 {
        self.tolerance_overrides
            .iter()
            .find(|(k, _)| SweepId::parse(k) == Some(id))
            .map(|(_, v)| *v)
            .unwrap_or_else(|| id.default_tolerance())
    }
}

/// One evaluated sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub inputs: Inputs,
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub index: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdSummary {
    pub id: SweepId,
    pub samples_run: u64,
    pub holds: u64,
    pub equality_cases: u64,
    pub violations: Vec<SampleRecord>,
    /// Samples that could not be evaluated (for instance overflow).
    pub errors: Vec<ErrorRecord>,
    pub tolerance: f64,
    pub min_margin: Option<f64>,
    pub argmin_index: Option<u64>,
    pub argmin_inputs: Option<Inputs>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub config: SweepConfig,
    /// Sampling distributions; min margins are artifacts of these choices.
    pub sampling: SamplingNote,
    pub results: Vec<IdSummary>,
    pub total_violations: u64,
    pub total_errors: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingNote {
    pub quads: String,
    pub pairs: String,
    pub exponents: String,
    pub index: String,
    pub kyfan: String,
}

impl SamplingNote {
    fn for_config(cfg: &SweepConfig) -> Self {
        Self {
            quads: format!(
                "four log-uniform draws on [{}, {}] sorted descending, b = c forced with probability {}, sign constraint {:?} by rejection (zero: d = bc/a), strict classes at least {:e} from ad = bc",
                cfg.range.lo, cfg.range.hi, sampling::TIE_PROBABILITY, cfg.sign, sampling::DISC_SEPARATION
            ),
            pairs: format!("two log-uniform draws on [{}, {}], a/b - 1 >= {:e}", cfg.range.lo, cfg.range.hi, sampling::PAIR_SEPARATION),
            exponents: format!(
                "p, q uniform on [-{r}, {r}], at least 1e-3 from 0 and -1, |p - q| >= {}",
                sampling::EXPONENT_SEPARATION,
                r = sampling::EXPONENT_RANGE
            ),
            index: format!("log-uniform integer on [1, {}]", cfg.index_max),
            kyfan: format!(
                "n uniform on [{}, {}], values uniform on ({:e}, 1/2]",
                cfg.kyfan_n_range.0, cfg.kyfan_n_range.1, sampling::KYFAN_EPS
            ),
        }
    }
}

impl VerificationReport {
    pub fn has_violations(&self) -> bool {
        self.total_violations > 0
    }

    /// JSON with the wall time zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> Result<String, Error> {
        let mut copy = self.clone();
        copy.wall_time_s = 0.0;
        Ok(serde_json::to_string_pretty(&copy)?)
    }
}

/// Slack report of the basic mean chain on a pair.
pub fn mean_chain_report(a: f64, b: f64, tol: f64) -> Result<SlackReport, Error> {
    let pair = PositivePair::new(a, b)?;
    let [h, g, l, i, am] = [
        means::harmonic_mean(pair),
        means::geometric_mean(pair),
        means::logarithmic_mean(pair),
        means::identric_mean(pair),
        means::arithmetic_mean(pair),
    ];
    let links = vec![
        Link::additive("H_G", h, g),
        Link::additive("G_L", g, l),
        Link::additive("L_I", l, i),
        Link::additive("I_A", i, am),
    ];
    let expectation =
        if pair.is_tie() { Expectation::Equality } else { Expectation::Strict { distance: (a - b).abs() / (a + b) } };
    Ok(SlackReport::assess("MEAN_CHAIN", Inputs::Pair { a, b }, MarginDomain::Additive, links, 1.0, expectation, tol))
}

/// Draws the inputs for sample `index` of `id`.
pub fn sample_inputs(id: SweepId, cfg: &SweepConfig, index: u64) -> Result<Inputs, Error> {
    let mut rng = sampling::rng_for(cfg.seed, sampling::stream_tag(id.name()), index);
    let quad = |rng: &mut _| -> Result<_, Error> {
        let [a, b, c, d] = sampling::sample_quad(rng, cfg.sign, cfg.range)?.coords();
        Ok((a, b, c, d))
    };
    Ok(match id {
        SweepId::MeanChain => {
            let (a, b) = sampling::sample_pair(&mut rng, cfg.range)?;
            Inputs::Pair { a, b }
        }
        SweepId::Catalog(cid) => match cid.info().arity {
            Arity::Pair => {
                let (a, b) = sampling::sample_pair(&mut rng, cfg.range)?;
                Inputs::Pair { a, b }
            }
            Arity::Quad | Arity::RelaxedQuad => {
                let (a, b, c, d) = quad(&mut rng)?;
                Inputs::Quad { a, b, c, d }
            }
            Arity::QuadExponents => {
                let (a, b, c, d) = quad(&mut rng)?;
                let (p, q) = sampling::sample_exponents(&mut rng)?;
                Inputs::QuadExponents { a, b, c, d, p, q }
            }
            Arity::Index => Inputs::Index { n: sampling::sample_index(&mut rng, cfg.index_max) },
        },
        SweepId::KyFan(_) => {
            use rand::Rng;
            let (lo, hi) = cfg.kyfan_n_range;
            let n = rng.gen_range(lo..=hi);
            Inputs::Sample { values: sampling::sample_kyfan(&mut rng, n).values().to_vec() }
        }
    })
}

/// Evaluates `id` on explicit inputs; used for sweeps and argmin replay.
pub fn evaluate(id: SweepId, inputs: &Inputs, tol: f64) -> Result<SlackReport, Error> {
    match (id, inputs) {
        (SweepId::MeanChain, &Inputs::Pair { a, b }) => mean_chain_report(a, b, tol),
        (SweepId::MeanChain, _) => Err(Error::Usage("MEAN_CHAIN takes a pair".into())),
        (SweepId::Catalog(cid), inputs) => Ok(catalog::evaluate_with_tolerance(cid, inputs, tol)?),
        (SweepId::KyFan(kid), Inputs::Sample { values }) => {
            let sample = kyfan::KyFanSample::new(values.clone())?;
            Ok(kyfan::evaluate(kid, &sample, tol)?)
        }
        (SweepId::KyFan(kid), _) => Err(Error::Usage(format!("{kid} takes a sample"))),
    }
}

enum Outcome {
    Evaluated(SampleRecord),
    Failed(ErrorRecord),
}

fn run_one(id: SweepId, cfg: &SweepConfig, tol: f64, index: u64) -> Outcome {
    let result = sample_inputs(id, cfg, index).and_then(|inputs| evaluate(id, &inputs, tol).map(|r| (inputs, r)));
    match result {
        Ok((inputs, report)) => {
            Outcome::Evaluated(SampleRecord { index, inputs, margin: report.margin, verdict: report.verdict })
        }
        Err(e) => Outcome::Failed(ErrorRecord { index, message: e.to_string() }),
    }
}

#[derive(Default)]
struct Acc {
    run: u64,
    holds: u64,
    equality: u64,
    violations: Vec<SampleRecord>,
    errors: Vec<ErrorRecord>,
    best: Option<(f64, u64, Inputs)>,
}

fn better(a: &(f64, u64, Inputs), b: &(f64, u64, Inputs)) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.1 < b.1,
    }
}

impl Acc {
    fn push(mut self, outcome: Outcome) -> Self {
        self.run += 1;
        match outcome {
            Outcome::Evaluated(rec) => {
                match rec.verdict {
                    Verdict::Holds => self.holds += 1,
                    Verdict::EqualityCase => self.equality += 1,
                    Verdict::Violated => self.violations.push(rec.clone()),
                }
                if !rec.margin.is_nan() {
                    let cand = (rec.margin, rec.index, rec.inputs);
                    if self.best.as_ref().is_none_or(|b| better(&cand, b)) {
                        self.best = Some(cand);
                    }
                }
            }
            Outcome::Failed(err) => self.errors.push(err),
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.run += other.run;
        self.holds += other.holds;
        self.equality += other.equality;
        self.violations.extend(other.violations);
        self.errors.extend(other.errors);
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }

    fn finish(mut self, id: SweepId, tolerance: f64) -> IdSummary {
        self.violations.sort_by_key(|r| r.index);
        self.errors.sort_by_key(|r| r.index);
        let (min_margin, argmin_index, argmin_inputs) = match self.best {
            Some((m, i, inputs)) => (Some(m), Some(i), Some(inputs)),
            None => (None, None, None),
        };
        IdSummary {
            id,
            samples_run: self.run,
            holds: self.holds,
            equality_cases: self.equality,
            violations: self.violations,
            errors: self.errors,
            tolerance,
            min_margin,
            argmin_index,
            argmin_inputs,
        }
    }
}

/// Per-sample records of one id, in index order.
pub type SampleDump = Vec<(SweepId, Vec<SampleRecord>)>;

fn worker_count(cfg: &SweepConfig) -> Result<Option<usize>, Error> {
    if let Some(n) = cfg.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<VerificationReport, Error> {
    run_sweep_with_dump(cfg).map(|(report, _)| report)
}

/// Runs the sweep; the dump is empty unless `record_samples` is set.
pub fn run_sweep_with_dump(cfg: &SweepConfig) -> Result<(VerificationReport, SampleDump), Error> {
    cfg.validate()?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count(cfg)? {
        if n == 0 {
            return Err(Error::Usage("thread count must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let (results, dump) = pool.install(|| {
        let mut results = Vec::with_capacity(cfg.ids.len());
        let mut dump = Vec::new();
        for &id in &cfg.ids {
            let tol = cfg.tolerance_for(id);
            let summary = if cfg.record_samples {
                let outcomes: Vec<Outcome> =
                    (0..cfg.samples).into_par_iter().map(|i| run_one(id, cfg, tol, i)).collect();
                let records = outcomes
                    .iter()
                    .filter_map(|o| if let Outcome::Evaluated(r) = o { Some(r.clone()) } else { None })
                    .collect();
                dump.push((id, records));
                outcomes.into_iter().fold(Acc::default(), Acc::push).finish(id, tol)
            } else {
                (0..cfg.samples)
                    .into_par_iter()
                    .map(|i| run_one(id, cfg, tol, i))
                    .fold(Acc::default, Acc::push)
                    .reduce(Acc::default, Acc::merge)
                    .finish(id, tol)
            };
            results.push(summary);
        }
        (results, dump)
    });
    let total_violations = results.iter().map(|r| r.violations.len() as u64).sum();
    let total_errors = results.iter().map(|r| r.errors.len() as u64).sum();
    Ok((
        VerificationReport {
            seed: cfg.seed,
            config: cfg.clone(),
            sampling: SamplingNote::for_config(cfg),
            results,
            total_violations,
            total_errors,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        dump,
    ))
}
