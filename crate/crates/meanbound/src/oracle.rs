//! High-precision reference values.
//!
//! Every operation is the literal closed form evaluated in binary
//! floating point with `(digits + 40)` decimal digits of working precision,
//! so the cancellation in differences such as `a - b` or `a^x - b^x` costs
//! guard digits rather than result digits. The binary64 kernels use
//! different algebra; the two routes share nothing but the inputs.

use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use meanbound_core::means::{self, PExponent, PositivePair};
use meanbound_core::ratio::{self, OrderedQuad};
use meanbound_core::MeanId;
use serde::{Deserialize, Serialize};

use crate::error::Error;

type Big = FBig<HalfEven, 2>;

pub const DEFAULT_DIGITS: u32 = 50;
pub const MIN_DIGITS: u32 = 30;
const GUARD_DIGITS: u32 = 40;

/// Bound for well-separated inputs.
pub const SEPARATED_BOUND: f64 = 1e-13;
/// Bound for inputs near a removable singularity or limit exponent.
pub const DEGENERATE_BOUND: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleOp {
    A,
    G,
    H,
    L,
    I,
    Lp,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "g")]
    LnF,
    #[serde(rename = "f'")]
    FPrime,
    #[serde(rename = "g'")]
    GPrime,
}

impl OracleOp {
    pub const ALL: [OracleOp; 10] = [
        OracleOp::A,
        OracleOp::G,
        OracleOp::H,
        OracleOp::L,
        OracleOp::I,
        OracleOp::Lp,
        OracleOp::F,
        OracleOp::LnF,
        OracleOp::FPrime,
        OracleOp::GPrime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OracleOp::A => "A",
            OracleOp::G => "G",
            OracleOp::H => "H",
            OracleOp::L => "L",
            OracleOp::I => "I",
            OracleOp::Lp => "Lp",
            OracleOp::F => "f",
            OracleOp::LnF => "g",
            OracleOp::FPrime => "f'",
            OracleOp::GPrime => "g'",
        }
    }

    /// Mean tags are case-insensitive; `f`/`g` are not, since `G` is the
    /// geometric mean.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" => return Some(OracleOp::F),
            "g" => return Some(OracleOp::LnF),
            "f'" | "f′" | "fprime" | "df" => return Some(OracleOp::FPrime),
            "g'" | "g′" | "gprime" | "dg" => return Some(OracleOp::GPrime),
            _ => {}
        }
        MeanId::parse(s).map(|m| match m {
            MeanId::A => OracleOp::A,
            MeanId::G => OracleOp::G,
            MeanId::H => OracleOp::H,
            MeanId::L => OracleOp::L,
            MeanId::I => OracleOp::I,
            MeanId::Lp => OracleOp::Lp,
        })
    }

    pub fn is_ratio(&self) -> bool {
        matches!(self, OracleOp::F | OracleOp::LnF | OracleOp::FPrime | OracleOp::GPrime)
    }

    /// `g` crosses zero, so its error is measured against `max(|g|, 1)`.
    pub fn metric(&self) -> ErrorMetric {
        match self {
            OracleOp::LnF => ErrorMetric::RelativeFloorOne,
            _ => ErrorMetric::Relative,
        }
    }
}

impl fmt::Display for OracleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMetric {
    Relative,
    RelativeFloorOne,
}

impl ErrorMetric {
    pub fn apply(&self, fast: f64, reference: f64) -> f64 {
        let diff = (fast - reference).abs();
        match self {
            ErrorMetric::Relative if reference == 0.0 => diff,
            ErrorMetric::Relative => diff / reference.abs(),
            ErrorMetric::RelativeFloorOne => diff / reference.abs().max(1.0),
        }
    }
}

/// Inputs of an oracle operation: a pair for the means, a quad and `x` for
/// the ratio functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleInputs {
    pub a: f64,
    pub b: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<f64>,
}

impl OracleInputs {
    pub fn pair(a: f64, b: f64) -> Self {
        Self { a, b, ..Self::default() }
    }

    pub fn lp(a: f64, b: f64, p: f64) -> Self {
        Self { a, b, p: Some(p), ..Self::default() }
    }

    pub fn ratio(a: f64, b: f64, c: f64, d: f64, x: f64) -> Self {
        Self { a, b, c: Some(c), d: Some(d), x: Some(x), ..Self::default() }
    }

    fn check(&self, op: OracleOp) -> Result<(), Error> {
        let missing = |name: &str| Error::Usage(format!("{op} needs --{name}"));
        if op.is_ratio() {
            let (c, d, x) = (self.c.ok_or(missing("c"))?, self.d.ok_or(missing("d"))?, self.x.ok_or(missing("x"))?);
            OrderedQuad::new(self.a, self.b, c, d)?;
            if !x.is_finite() {
                return Err(Error::Usage(format!("x must be finite, got {x}")));
            }
        } else {
            PositivePair::new(self.a, self.b)?;
            if op == OracleOp::Lp {
                PExponent::new(self.p.ok_or(missing("p"))?)?;
            }
        }
        Ok(())
    }

    fn quad(&self) -> Result<OrderedQuad, Error> {
        Ok(OrderedQuad::new(self.a, self.b, self.c.unwrap_or(f64::NAN), self.d.unwrap_or(f64::NAN))?)
    }
}

/// A reference value with its claimed absolute error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub decimal: String,
    pub value: f64,
    pub error_bound: f64,
}

/// Precision context for one evaluation.
struct Ctx {
    bits: usize,
}

impl Ctx {
    fn new(digits: u32) -> Self {
        let bits = ((digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as usize;
        Self { bits }
    }

    fn num(&self, x: f64) -> Big {
        Big::try_from(x).expect("finite input").with_precision(self.bits).value()
    }

    fn int(&self, k: i64) -> Big {
        Big::from(k).with_precision(self.bits).value()
    }
}

fn mean_literal(ctx: &Ctx, op: OracleOp, a: f64, b: f64, p: Option<f64>) -> Big {
    let (ba, bb) = (ctx.num(a), ctx.num(b));
    let two = ctx.int(2);
    match op {
        OracleOp::A => (&ba + &bb) / &two,
        OracleOp::G => (&ba * &bb).sqrt(),
        OracleOp::H => &two * &ba * &bb / (&ba + &bb),
        _ if a == b => ba,
        OracleOp::L => (&ba - &bb) / (ba.ln() - bb.ln()),
        OracleOp::I => identric(ctx, &ba, &bb),
        OracleOp::Lp => {
            let p = p.expect("checked");
            if p == 0.0 {
                identric(ctx, &ba, &bb)
            } else if p == -1.0 {
                (&ba - &bb) / (ba.ln() - bb.ln())
            } else {
                let bp = ctx.num(p);
                let s = &bp + ctx.int(1);
                let inner = (ba.powf(&s) - bb.powf(&s)) / (&s * (&ba - &bb));
                (inner.ln() / &bp).exp()
            }
        }
        _ => unreachable!("not a mean"),
    }
}

fn identric(ctx: &Ctx, a: &Big, b: &Big) -> Big {
    let e = (a * a.ln() - b * b.ln()) / (a - b) - ctx.int(1);
    e.exp()
}

/// `(u^x ln u - v^x ln v) / (u^x - v^x)`, or `(ln u + ln v)/2` at `x = 0`.
fn log_slope(ctx: &Ctx, u: &Big, v: &Big, x: &Big, at_zero: bool) -> Big {
    if at_zero {
        return (u.ln() + v.ln()) / ctx.int(2);
    }
    let (ux, vx) = (u.powf(x), v.powf(x));
    (&ux * u.ln() - &vx * v.ln()) / (ux - vx)
}

fn ratio_literal(ctx: &Ctx, op: OracleOp, q: [f64; 4], x: f64) -> Big {
    let [a, b, c, d] = q.map(|v| ctx.num(v));
    let bx = ctx.num(x);
    let f = if x == 0.0 {
        (a.ln() - b.ln()) / (c.ln() - d.ln())
    } else {
        (a.powf(&bx) - b.powf(&bx)) / (c.powf(&bx) - d.powf(&bx))
    };
    let g_prime = || log_slope(ctx, &a, &b, &bx, x == 0.0) - log_slope(ctx, &c, &d, &bx, x == 0.0);
    match op {
        OracleOp::F => f,
        OracleOp::LnF => f.ln(),
        OracleOp::GPrime => g_prime(),
        OracleOp::FPrime => &f * g_prime(),
        _ => unreachable!("not a ratio function"),
    }
}

fn to_f64(v: &Big) -> f64 {
    v.to_f64().value()
}

/// Evaluates `op` at `digits` significant decimal digits.
pub fn oracle_eval(op: OracleOp, inputs: &OracleInputs, digits: u32) -> Result<OracleValue, Error> {
    if digits < MIN_DIGITS {
        return Err(Error::Usage(format!("digits must be at least {MIN_DIGITS}, got {digits}")));
    }
    inputs.check(op)?;
    let ctx = Ctx::new(digits);
    let v = if op.is_ratio() {
        let q = [inputs.a, inputs.b, inputs.c.unwrap_or_default(), inputs.d.unwrap_or_default()];
        ratio_literal(&ctx, op, q, inputs.x.unwrap_or_default())
    } else {
        mean_literal(&ctx, op, inputs.a, inputs.b, inputs.p)
    };
    let value = to_f64(&v);
    if !value.is_finite() {
        return Err(Error::Oracle(format!("{op} is outside the binary64 range at these inputs")));
    }
    let decimal = v.to_decimal().value().with_precision(digits as usize).value().to_string();
    Ok(OracleValue { decimal, value, error_bound: 10f64.powi(1 - digits as i32) * value.abs() })
}

/// The binary64 route for `op`.
pub fn fast_eval(op: OracleOp, inputs: &OracleInputs) -> Result<f64, Error> {
    inputs.check(op)?;
    if op.is_ratio() {
        let q = inputs.quad()?;
        let x = inputs.x.unwrap_or_default();
        return Ok(match op {
            OracleOp::F => ratio::eval_f(&q, x)?,
            OracleOp::LnF => ratio::eval_g(&q, x),
            OracleOp::FPrime => ratio::eval_f_prime(&q, x)?,
            _ => ratio::eval_g_prime(&q, x),
        });
    }
    let pair = PositivePair::new(inputs.a, inputs.b)?;
    let id = match op {
        OracleOp::A => MeanId::A,
        OracleOp::G => MeanId::G,
        OracleOp::H => MeanId::H,
        OracleOp::L => MeanId::L,
        OracleOp::I => MeanId::I,
        _ => MeanId::Lp,
    };
    let p = inputs.p.map(PExponent::new).transpose()?;
    Ok(means::evaluate(id, pair, p).value)
}

fn relative_gap(hi: f64, lo: f64) -> f64 {
    (hi - lo).abs() / hi.max(lo)
}

/// `DEGENERATE_BOUND` when a pair is within 1e-4 relative of a tie, `|x|` is
/// below 1e-6 or `p` is within 1e-4 of a limit exponent; otherwise
/// `SEPARATED_BOUND`.
pub fn published_bound(op: OracleOp, inputs: &OracleInputs) -> f64 {
    let mut degenerate = relative_gap(inputs.a, inputs.b) < 1e-4;
    if op.is_ratio() {
        let (c, d) = (inputs.c.unwrap_or(1.0), inputs.d.unwrap_or(0.5));
        degenerate |= relative_gap(c, d) < 1e-4 || inputs.x.is_some_and(|x| x.abs() < 1e-6);
    }
    if op == OracleOp::Lp {
        degenerate |= inputs.p.is_some_and(|p| p.abs() < 1e-4 || (p + 1.0).abs() < 1e-4);
    }
    if degenerate {
        DEGENERATE_BOUND
    } else {
        SEPARATED_BOUND
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub op: OracleOp,
    pub inputs: OracleInputs,
    pub digits: u32,
    pub fast: f64,
    pub oracle: OracleValue,
    pub rel_err: f64,
    pub metric: ErrorMetric,
    pub bound: f64,
    pub within_bound: bool,
}

pub fn compare(op: OracleOp, inputs: &OracleInputs, digits: u32) -> Result<Comparison, Error> {
    let oracle = oracle_eval(op, inputs, digits)?;
    let fast = fast_eval(op, inputs)?;
    let metric = op.metric();
    let rel_err = metric.apply(fast, oracle.value);
    let bound = published_bound(op, inputs);
    Ok(Comparison { op, inputs: *inputs, digits, fast, oracle, rel_err, metric, bound, within_bound: rel_err <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logarithmic_mean_reference() {
        let v = oracle_eval(OracleOp::L, &OracleInputs::pair(4.0, 2.0), 50).unwrap();
        assert!(v.decimal.starts_with("2.88539008177792681"), "{}", v.decimal);
        let c = compare(OracleOp::L, &OracleInputs::pair(4.0, 2.0), 50).unwrap();
        assert!(c.rel_err <= 1e-13 && c.within_bound);
    }

    #[test]
    fn near_tie_identric() {
        let c = compare(OracleOp::I, &OracleInputs::pair(1.00000001, 1.0), 50).unwrap();
        assert!(c.rel_err <= 1e-10, "{c:?}");
    }

    #[test]
    fn ratio_at_and_near_zero() {
        let c = compare(OracleOp::F, &OracleInputs::ratio(4.0, 3.0, 2.0, 1.0, 0.0), 50).unwrap();
        assert!(c.rel_err <= 1e-12, "{c:?}");
        assert!((c.oracle.value - 0.4150374992788438).abs() < 1e-15);
        let c = compare(OracleOp::F, &OracleInputs::ratio(4.0, 3.0, 2.0, 1.0, 1e-9), 50).unwrap();
        assert!(c.rel_err <= 1e-10, "{c:?}");
        for op in [OracleOp::LnF, OracleOp::FPrime, OracleOp::GPrime] {
            for x in [0.0, 1e-9, 0.5, -2.0] {
                let c = compare(op, &OracleInputs::ratio(8.0, 2.0, 2.0, 1.0, x), 50).unwrap();
                assert!(c.within_bound, "{c:?}");
            }
        }
    }

    #[test]
    fn lp_limits_match_closed_forms() {
        let i = oracle_eval(OracleOp::I, &OracleInputs::pair(4.0, 2.0), 40).unwrap();
        let lp0 = oracle_eval(OracleOp::Lp, &OracleInputs::lp(4.0, 2.0, 0.0), 40).unwrap();
        assert_eq!(i.decimal, lp0.decimal);
        let lp1 = oracle_eval(OracleOp::Lp, &OracleInputs::lp(4.0, 2.0, 1.0), 40).unwrap();
        assert_eq!((lp1.decimal.as_str(), lp1.value), ("3", 3.0));
    }

    #[test]
    fn input_validation() {
        assert!(oracle_eval(OracleOp::L, &OracleInputs::pair(4.0, 2.0), 10).is_err());
        assert!(oracle_eval(OracleOp::Lp, &OracleInputs::pair(4.0, 2.0), 50).is_err());
        assert!(oracle_eval(OracleOp::F, &OracleInputs::pair(4.0, 2.0), 50).is_err());
        assert!(oracle_eval(OracleOp::L, &OracleInputs::pair(-4.0, 2.0), 50).is_err());
        assert_eq!(OracleOp::parse("g"), Some(OracleOp::LnF));
        assert_eq!(OracleOp::parse("G"), Some(OracleOp::G));
        assert_eq!(OracleOp::parse("lp"), Some(OracleOp::Lp));
    }
}
