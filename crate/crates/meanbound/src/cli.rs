//! Command-line front end. JSON goes to stdout, human summaries to stderr.
//!
//! Exit status: 0 when every check holds, 1 when a violation was observed,
//! 2 for usage and hypothesis errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use meanbound_core::catalog::{Arity, InequalityId};
use meanbound_core::kyfan::{self, KyFanId, KyFanSample};
use meanbound_core::means::{self, PExponent, PositivePair};
use meanbound_core::report::DEFAULT_TOLERANCE;
use meanbound_core::{Inputs, MeanId, SlackReport, Verdict};
use serde::Serialize;

use crate::error::Error;
use crate::oracle::{self, OracleInputs, OracleOp};
use crate::output;
use crate::sampling::{LogRange, SignConstraint};
use crate::sweep::{self, SweepConfig, SweepId, VerificationReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "meanbound",
    version,
    about = "Special means, ratio-function inequalities and randomized verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one mean of a pair.
    MeansEval {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// One of A, G, H, L, I, Lp.
        #[arg(long)]
        mean: String,
        /// Exponent, required for Lp.
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
    },
    /// List the registered inequality ids.
    IneqList,
    /// Evaluate one inequality on explicit inputs.
    IneqCheck {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        inputs: PointArgs,
        /// Verdict tolerance; defaults to the id's own.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Randomized sweep over the registry.
    Sweep {
        #[command(flatten)]
        common: SweepArgs,
        /// Comma-separated ids, or `all`.
        #[arg(long, default_value = "all")]
        ids: String,
        /// Quad sign constraint: any, positive, negative or zero.
        #[arg(long, default_value = "any")]
        sign: String,
        /// Log-uniform coordinate range as `lo,hi`.
        #[arg(long, default_value = "1e-3,1e3")]
        range: String,
        /// Ky Fan sample size range as `lo..hi` (inclusive).
        #[arg(long, default_value = "2..20")]
        kyfan_n_range: String,
    },
    /// Evaluate the Ky Fan family on one sample.
    KyfanCheck {
        /// Comma-separated values in (0, 1/2], or a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Randomized sweep over the Ky Fan family.
    KyfanSweep {
        #[command(flatten)]
        common: SweepArgs,
        /// Sample size range as `lo..hi` (inclusive).
        #[arg(long, default_value = "2..20")]
        n_range: String,
        /// Comma-separated Ky Fan ids; defaults to all of them.
        #[arg(long)]
        ids: Option<String>,
    },
    /// Compare a binary64 kernel against the high-precision oracle.
    OracleCompare {
        /// One of A, G, H, L, I, Lp, f, g, f', g'.
        #[arg(long)]
        op: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        d: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = oracle::DEFAULT_DIGITS)]
        digits: u32,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path; the report goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-sample CSV dump.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Worker threads; defaults to MEANBOUND_THREADS, then the core count.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Tolerance override `ID=VALUE`, repeatable.
    #[arg(long = "tol", value_name = "ID=VALUE")]
    pub tolerances: Vec<String>,
}

/// Runs a parsed command and returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    match cli.command {
        Command::MeansEval { a, b, mean, p } => means_eval(a, b, &mean, p, out),
        Command::IneqList => ineq_list(out),
        Command::IneqCheck { id, inputs, tol } => ineq_check(&id, &inputs, tol, out, err),
        Command::Sweep { common, ids, sign, range, kyfan_n_range } => {
            let mut cfg = common.config()?;
            cfg.ids = SweepId::parse_list(&ids)?;
            cfg.sign = SignConstraint::parse(&sign).ok_or_else(|| {
                Error::Usage(format!("unknown sign {sign:?}; expected any, positive, negative or zero"))
            })?;
            cfg.range = parse_range(&range)?;
            cfg.kyfan_n_range = parse_n_range(&kyfan_n_range)?;
            run_sweep(&cfg, &common, out, err)
        }
        Command::KyfanCheck { x, tol } => kyfan_check(&x, tol, out, err),
        Command::KyfanSweep { common, n_range, ids } => {
            let mut cfg = common.config()?;
            cfg.ids = match ids {
                Some(list) => {
                    let ids = SweepId::parse_list(&list)?;
                    if let Some(bad) = ids.iter().find(|id| !matches!(id, SweepId::KyFan(_))) {
                        return Err(Error::Usage(format!("{bad} is not a Ky Fan id")));
                    }
                    ids
                }
                None => KyFanId::ALL.into_iter().map(SweepId::KyFan).collect(),
            };
            cfg.kyfan_n_range = parse_n_range(&n_range)?;
            run_sweep(&cfg, &common, out, err)
        }
        Command::OracleCompare { op, a, b, c, d, p, x, digits } => {
            let op = OracleOp::parse(&op).ok_or_else(|| {
                let names: Vec<&str> = OracleOp::ALL.iter().map(OracleOp::name).collect();
                Error::Usage(format!("unknown op {op:?}; valid ops: {}", names.join(", ")))
            })?;
            let inputs = OracleInputs { a, b, c, d, p, x };
            if !op.is_ratio() && (c.is_some() || d.is_some() || x.is_some()) {
                return Err(Error::Usage(format!("{op} takes --a and --b only")));
            }
            if op != OracleOp::Lp && p.is_some() {
                return Err(Error::Usage(format!("--p only applies to Lp, not {op}")));
            }
            let cmp = oracle::compare(op, &inputs, digits)?;
            print_json(out, &cmp)?;
            writeln!(
                err,
                "{op}: fast {:e}, oracle {}, error {:.3e} (bound {:e}) {}",
                cmp.fast,
                cmp.oracle.decimal,
                cmp.rel_err,
                cmp.bound,
                if cmp.within_bound { "ok" } else { "EXCEEDS BOUND" }
            )?;
            Ok(if cmp.within_bound { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Error> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn means_eval(a: f64, b: f64, mean: &str, p: Option<f64>, out: &mut dyn Write) -> Result<u8, Error> {
    let id = MeanId::parse(mean)
        .ok_or_else(|| Error::Usage(format!("unknown mean {mean:?}; expected A, G, H, L, I or Lp")))?;
    let p = match (id, p) {
        (MeanId::Lp, Some(p)) => Some(PExponent::new(p)?),
        (MeanId::Lp, None) => return Err(Error::Usage("--mean Lp requires --p".into())),
        (_, Some(_)) => return Err(Error::Usage(format!("--p only applies to Lp, not {}", id.name()))),
        (_, None) => None,
    };
    let pair = PositivePair::new(a, b)?;
    #[derive(Serialize)]
    struct MeanOut {
        mean_id: &'static str,
        a: f64,
        b: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        value: f64,
    }
    let value = means::evaluate(id, pair, p).value;
    print_json(out, &MeanOut { mean_id: id.name(), a, b, p: p.map(|p| p.value()), value })?;
    Ok(EXIT_OK)
}

fn ineq_list(out: &mut dyn Write) -> Result<u8, Error> {
    #[derive(Serialize)]
    struct Entry {
        id: &'static str,
        family: &'static str,
        arity: &'static str,
        domain: meanbound_core::MarginDomain,
        statement: &'static str,
        default_tolerance: f64,
    }
    let mut entries = vec![Entry {
        id: "MEAN_CHAIN",
        family: "means",
        arity: "pair",
        domain: meanbound_core::MarginDomain::Additive,
        statement: "H < G < L < I < A",
        default_tolerance: DEFAULT_TOLERANCE,
    }];
    for id in InequalityId::ALL {
        let info = id.info();
        entries.push(Entry {
            id: info.id,
            family: "catalog",
            arity: arity_name(info.arity),
            domain: info.domain,
            statement: info.statement,
            default_tolerance: id.default_tolerance(),
        });
    }
    for id in KyFanId::ALL {
        entries.push(Entry {
            id: id.name(),
            family: "kyfan",
            arity: "sample",
            domain: id.domain(),
            statement: id.statement(),
            default_tolerance: DEFAULT_TOLERANCE,
        });
    }
    print_json(out, &entries)?;
    Ok(EXIT_OK)
}

fn arity_name(arity: Arity) -> &'static str {
    match arity {
        Arity::Pair => "pair",
        Arity::Quad => "quad",
        Arity::RelaxedQuad => "relaxed_quad",
        Arity::QuadExponents => "quad_exponents",
        Arity::Index => "index",
    }
}

impl PointArgs {
    fn given(&self) -> Vec<&'static str> {
        let flags = [
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("c", self.c.is_some()),
            ("d", self.d.is_some()),
            ("p", self.p.is_some()),
            ("q", self.q.is_some()),
            ("n", self.n.is_some()),
        ];
        flags.into_iter().filter(|(_, set)| *set).map(|(name, _)| name).collect()
    }

    /// Inputs for an id taking exactly the flags `names`.
    fn take(&self, id: &str, names: &[&str]) -> Result<Inputs, Error> {
        let given = self.given();
        if let Some(extra) = given.iter().find(|g| !names.contains(g)) {
            return Err(Error::Usage(format!("{id} does not take --{extra}; expected {}", flag_list(names))));
        }
        if let Some(missing) = names.iter().find(|n| !given.contains(n)) {
            return Err(Error::Usage(format!("{id} requires --{missing}; expected {}", flag_list(names))));
        }
        let v = |x: Option<f64>| x.unwrap_or_default();
        Ok(match names.len() {
            1 => Inputs::Index { n: self.n.unwrap_or_default() },
            2 => Inputs::Pair { a: v(self.a), b: v(self.b) },
            4 => Inputs::Quad { a: v(self.a), b: v(self.b), c: v(self.c), d: v(self.d) },
            _ => Inputs::QuadExponents {
                a: v(self.a),
                b: v(self.b),
                c: v(self.c),
                d: v(self.d),
                p: v(self.p),
                q: v(self.q),
            },
        })
    }
}

fn flag_list(names: &[&str]) -> String {
    names.iter().map(|n| format!("--{n}")).collect::<Vec<_>>().join(" ")
}

const PAIR: &[&str] = &["a", "b"];
const QUAD: &[&str] = &["a", "b", "c", "d"];
const QUAD_EXP: &[&str] = &["a", "b", "c", "d", "p", "q"];

fn ineq_check(
    id: &str,
    args: &PointArgs,
    tol: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, Error> {
    let id = SweepId::parse(id).ok_or_else(|| Error::Usage(sweep::unknown_id_message(id)))?;
    let tol = checked_tolerance(tol)?.unwrap_or_else(|| id.default_tolerance());
    let inputs = match id {
        SweepId::MeanChain => args.take(id.name(), PAIR)?,
        SweepId::Catalog(InequalityId::Eq12) if args.c.is_some() || args.d.is_some() => args.take(id.name(), QUAD)?,
        SweepId::Catalog(cid) => match cid.info().arity {
            Arity::Pair => args.take(id.name(), PAIR)?,
            Arity::Quad | Arity::RelaxedQuad => args.take(id.name(), QUAD)?,
            Arity::QuadExponents => args.take(id.name(), QUAD_EXP)?,
            Arity::Index => args.take(id.name(), &["n"])?,
        },
        SweepId::KyFan(_) => return Err(Error::Usage(format!("{id} is a Ky Fan id; use kyfan-check"))),
    };
    let report = sweep::evaluate(id, &inputs, tol)?;
    print_json(out, &report)?;
    writeln!(err, "{}", report_line(&report))?;
    Ok(exit_for(report.verdict))
}

fn checked_tolerance(tol: Option<f64>) -> Result<Option<f64>, Error> {
    match tol {
        Some(t) if !(t.is_finite() && t >= 0.0) => Err(Error::Usage(format!("invalid tolerance {t}"))),
        t => Ok(t),
    }
}

fn exit_for(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Violated => EXIT_VIOLATION,
        _ => EXIT_OK,
    }
}

fn report_line(r: &SlackReport) -> String {
    format!("{}: {:?}, margin {:e} (tolerance {:e})", r.id, r.verdict, r.margin, r.tolerance)
}

/// Accepts `0.1,0.2` or `[0.1, 0.2]`.
pub fn parse_sample(s: &str) -> Result<Vec<f64>, Error> {
    let trimmed = s.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Error::Usage(format!("invalid sample {s:?}: {e}")));
    }
    trimmed
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Usage(format!("invalid sample value {v:?}"))))
        .collect()
}

#[derive(Serialize)]
struct KyFanCheckOut {
    sample: Vec<f64>,
    stats: kyfan::KyFanStats,
    derived: Option<kyfan::Derived>,
    classic: Vec<SlackReport>,
    refinements: Vec<SlackReport>,
    /// Strict ids not evaluated because the sample is constant.
    skipped: Vec<&'static str>,
}

fn kyfan_check(x: &str, tol: Option<f64>, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let sample = KyFanSample::new(parse_sample(x)?)?;
    let tol = checked_tolerance(tol)?.unwrap_or(DEFAULT_TOLERANCE);
    let stats = kyfan::compute_stats(&sample);
    let classic = kyfan::classic_slacks(&sample, tol).to_vec();
    let refinements = kyfan::refinement_slacks(&sample, tol)?;
    let skipped =
        KyFanId::ALL.into_iter().filter(|id| sample.all_equal() && id.is_strict()).map(|id| id.name()).collect();
    let worst = classic.iter().chain(&refinements).map(|r| r.verdict).max().unwrap_or(Verdict::Holds);
    for r in classic.iter().chain(&refinements) {
        writeln!(err, "{}", report_line(r))?;
    }
    print_json(
        out,
        &KyFanCheckOut {
            sample: sample.values().to_vec(),
            stats,
            derived: stats.derived(),
            classic,
            refinements,
            skipped,
        },
    )?;
    Ok(exit_for(worst))
}

impl SweepArgs {
    fn config(&self) -> Result<SweepConfig, Error> {
        let mut tolerance_overrides = BTreeMap::new();
        for t in &self.tolerances {
            let (id, v) = t.split_once('=').ok_or_else(|| Error::Usage(format!("expected ID=VALUE, got {t:?}")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Usage(format!("invalid tolerance in {t:?}")))?;
            tolerance_overrides.insert(id.trim().to_string(), v);
        }
        Ok(SweepConfig {
            samples: self.samples,
            seed: self.seed,
            threads: self.threads,
            record_samples: self.csv.is_some(),
            tolerance_overrides,
            ..SweepConfig::default()
        })
    }
}

fn parse_range(s: &str) -> Result<LogRange, Error> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| Error::Usage(format!("expected lo,hi, got {s:?}")))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Usage(format!("invalid range bound {v:?}")));
    LogRange::new(num(lo)?, num(hi)?)
}

pub fn parse_n_range(s: &str) -> Result<(usize, usize), Error> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once(','))
        .ok_or_else(|| Error::Usage(format!("expected lo..hi, got {s:?}")))?;
    let num = |v: &str| v.trim().parse::<usize>().map_err(|_| Error::Usage(format!("invalid sample size {v:?}")));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo == 0 || hi < lo {
        return Err(Error::Usage(format!("invalid sample size range {s:?}")));
    }
    Ok((lo, hi))
}

fn summary_line(s: &sweep::IdSummary) -> String {
    let argmin = match (s.min_margin, s.argmin_index) {
        (Some(m), Some(i)) => format!("min margin {m:e} at sample {i}"),
        _ => "no margin".to_string(),
    };
    format!(
        "{}: {} samples, {} hold, {} equality, {} violations, {} errors, {argmin}",
        s.id,
        s.samples_run,
        s.holds,
        s.equality_cases,
        s.violations.len(),
        s.errors.len()
    )
}

fn run_sweep(cfg: &SweepConfig, args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let (report, dump): (VerificationReport, _) = sweep::run_sweep_with_dump(cfg)?;
    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => writeln!(out, "{json}")?,
    }
    if let Some(path) = &args.csv {
        output::write_csv(&dump, std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    for s in &report.results {
        writeln!(err, "{}", summary_line(s))?;
    }
    writeln!(
        err,
        "total: {} violations, {} errors, {:.2} s",
        report.total_violations, report.total_errors, report.wall_time_s
    )?;
    Ok(if report.has_violations() { EXIT_VIOLATION } else { EXIT_OK })
}
