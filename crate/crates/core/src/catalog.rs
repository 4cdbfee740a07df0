//! Registry of the mean inequalities derived from the ratio function, each
//! reported link by link as signed slacks.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::EvalError;
use crate::math;
use crate::means::{self, PExponent, PositivePair};
use crate::ratio::{self, DiscClass, OrderedQuad, RelaxedQuad};
use crate::report::{Expectation, Inputs, Link, MarginDomain, SlackReport, DEFAULT_TOLERANCE};
use crate::sequence;

/// Smallest admissible `a/b - 1` for the pair ids whose members degenerate
/// to `0/0` at `a = b`.
pub const PAIR_GAP_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum InequalityId {
    Eq4,
    Eq5,
    Eq6,
    Eq8,
    Eq9,
    Eq10,
    Eq11,
    Eq12,
    Eq13,
    Eq14,
    Eq15,
    Eq16,
    Eq17,
    Slope3,
}

/// Shape of the inputs an id consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Arity {
    /// `a > b > 0`.
    Pair,
    /// `a > b >= c > d > 0`.
    Quad,
    /// `a >= b >= c >= d > 0`.
    RelaxedQuad,
    /// Strict quad plus exponents `p, q` away from `0` and `-1`.
    QuadExponents,
    /// Integer `n >= 1`.
    Index,
}

/// Static description of an id.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IdInfo {
    pub id: &'static str,
    pub arity: Arity,
    pub domain: MarginDomain,
    pub links: usize,
    pub statement: &'static str,
    pub equality: &'static str,
    /// Whether the direction follows the sign of `ad - bc`.
    pub disc_keyed: bool,
}

impl InequalityId {
    pub const ALL: [InequalityId; 14] = [
        InequalityId::Eq4,
        InequalityId::Eq5,
        InequalityId::Eq6,
        InequalityId::Eq8,
        InequalityId::Eq9,
        InequalityId::Eq10,
        InequalityId::Eq11,
        InequalityId::Eq12,
        InequalityId::Eq13,
        InequalityId::Eq14,
        InequalityId::Eq15,
        InequalityId::Eq16,
        InequalityId::Eq17,
        InequalityId::Slope3,
    ];

    pub fn name(&self) -> &'static str {
        self.info().id
    }

    /// Accepts the id itself or one of its link labels (`EQ5_L`, `EQ8_2`, ...),
    /// ignoring ASCII case.
    pub fn parse(s: &str) -> Option<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let base = match upper.as_str() {
            "SLOPE_3" | "SLOPE3" => return Some(InequalityId::Slope3),
            other => other.split('_').next().unwrap_or(other),
        };
        Self::ALL.iter().copied().find(|id| id.name() == base)
    }

    pub fn default_tolerance(&self) -> f64 {
        match self {
            // members are carried as exact excesses over 1, so the sign of
            // the slack itself is meaningful at every n
            InequalityId::Eq15 | InequalityId::Eq16 | InequalityId::Eq17 => 0.0,
            _ => DEFAULT_TOLERANCE,
        }
    }

    pub fn info(&self) -> IdInfo {
        use Arity::*;
        use MarginDomain::*;
        let (id, arity, domain, links, statement, equality, disc_keyed) = match self {
            InequalityId::Eq4 => (
                "EQ4",
                QuadExponents,
                Additive,
                1,
                "L_p^p(a,b)/L_p^p(c,d) >= L_q^q(a,b)/L_q^q(c,d) * (1 + (p-q)/(q+1) ln(I(a^{q+1},b^{q+1})/I(c^{q+1},d^{q+1})))",
                "p = q",
                false,
            ),
            InequalityId::Eq5 => (
                "EQ5",
                Quad,
                LogRatio,
                2,
                "exp(1 - L(c,d)/L(a,b)) < I(a,b)/I(c,d) < exp(L(a,b)/L(c,d) - 1)",
                "none",
                false,
            ),
            InequalityId::Eq6 => (
                "EQ6",
                Pair,
                LogRatio,
                2,
                "exp(1 - b/L(a,b)) < I(a,b)/b < exp(L(a,b)/b - 1)",
                "a = b (limit)",
                false,
            ),
            InequalityId::Eq8 => (
                "EQ8",
                Quad,
                Additive,
                2,
                "L(a,b)/L(c,d) > 1 + ln(G(a,b)/G(c,d)) > 2ab/(ab+cd)",
                "none",
                false,
            ),
            InequalityId::Eq9 => (
                "EQ9",
                Quad,
                Additive,
                1,
                "L(a,b)/L(c,d) > ln(G(a,b)/G(c,d)) / ln(I(a,b)/I(c,d))",
                "none",
                false,
            ),
            InequalityId::Eq10 => (
                "EQ10",
                Pair,
                Additive,
                3,
                "L(a,b)/b > 1 + ln(a/b)/2 > 2a/(a+b) > ln(a/b)/(2 ln(I(a,b)/b))",
                "a = b (limit)",
                false,
            ),
            InequalityId::Eq11 => (
                "EQ11",
                Quad,
                Additive,
                1,
                "ln(G(a,b)/G(c,d)) > (ab-cd)/(ab+cd)",
                "none",
                false,
            ),
            InequalityId::Eq12 => (
                "EQ12",
                Pair,
                Additive,
                1,
                "ln(x/y)/2 > (x/y-1)/(x/y+1) for x > y",
                "x = y (limit)",
                false,
            ),
            InequalityId::Eq13 => (
                "EQ13",
                QuadExponents,
                LogRatio,
                1,
                "p ln(L_p(a,b)/L_p(c,d)) - q ln(L_q(a,b)/L_q(c,d)) > (p-q)/(q+1) ln(I(a^{q+1},b^{q+1})/I(c^{q+1},d^{q+1})) for ad > bc, reversed for ad < bc",
                "ad = bc or p = q",
                true,
            ),
            InequalityId::Eq14 => (
                "EQ14",
                RelaxedQuad,
                LogRatio,
                4,
                "H(a,b)/H(c,d) < G(a,b)/G(c,d) < L(a,b)/L(c,d) < I(a,b)/I(c,d) < A(a,b)/A(c,d) for ad > bc, reversed for ad < bc",
                "ad = bc",
                true,
            ),
            InequalityId::Eq15 => (
                "EQ15",
                Index,
                Additive,
                2,
                "(n+2)/(n+1) < 1 + ln sqrt((n+2)/n) < ln((n+1)/n)/ln((n+2)/(n+1))",
                "none",
                false,
            ),
            InequalityId::Eq16 => (
                "EQ16",
                Index,
                Additive,
                1,
                "ln(G(n+2,n+1)/G(n+1,n)) / ln(I(n+2,n+1)/I(n+1,n)) < L(n+2,n+1)/L(n+1,n)",
                "none",
                false,
            ),
            InequalityId::Eq17 => (
                "EQ17",
                Index,
                Additive,
                4,
                "(2n+3)/(2n+1) < I(n+2,n+1)/I(n+1,n) < L(n+2,n+1)/L(n+1,n) < sqrt((n+2)/n) < (n+2)(2n+1)/(n(2n+3))",
                "none",
                false,
            ),
            InequalityId::Slope3 => (
                "SLOPE_3",
                Quad,
                LogRatio,
                1,
                "ln(slope of f over [d,b]) < ln(slope of f over [c,a])",
                "none",
                false,
            ),
        };
        IdInfo { id, arity, domain, links, statement, equality, disc_keyed }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogError {
    /// The inputs fail the id's precondition; no slack was computed.
    HypothesisViolation {
        id: &'static str,
        reason: String,
    },
    /// The inputs have the wrong shape for the id.
    WrongInputs {
        id: &'static str,
        expected: Arity,
    },
    Eval(EvalError),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::HypothesisViolation { id, reason } => write!(f, "{id}: hypothesis violated: {reason}"),
            CatalogError::WrongInputs { id, expected } => write!(f, "{id}: expected {expected:?} inputs"),
            CatalogError::Eval(e) => write!(f, "evaluation failed: {e}"),
        }
    }
}

impl core::error::Error for CatalogError {}

impl From<EvalError> for CatalogError {
    fn from(e: EvalError) -> Self {
        CatalogError::Eval(e)
    }
}

impl From<crate::error::DomainError> for CatalogError {
    fn from(e: crate::error::DomainError) -> Self {
        CatalogError::HypothesisViolation { id: "INPUT", reason: e.to_string() }
    }
}

fn hypothesis(id: InequalityId, e: impl fmt::Display) -> CatalogError {
    CatalogError::HypothesisViolation { id: id.name(), reason: e.to_string() }
}

fn strict_quad(id: InequalityId, a: f64, b: f64, c: f64, d: f64) -> Result<OrderedQuad, CatalogError> {
    OrderedQuad::new(a, b, c, d).map_err(|e| hypothesis(id, e))
}

fn generic_exponent(id: InequalityId, v: f64) -> Result<PExponent, CatalogError> {
    let p = PExponent::new(v).map_err(|e| hypothesis(id, e))?;
    if !p.is_generic() {
        return Err(hypothesis(id, format_args!("exponent {v} is within the snapping window of 0 or -1")));
    }
    Ok(p)
}

fn ordered_pair(id: InequalityId, a: f64, b: f64) -> Result<PositivePair, CatalogError> {
    let pair = PositivePair::new(a, b).map_err(|e| hypothesis(id, e))?;
    if a <= b {
        return Err(hypothesis(id, format_args!("expected a > b, got a = {a}, b = {b}")));
    }
    Ok(pair)
}

fn pair_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a + b)
}

fn spread(q: [f64; 4]) -> f64 {
    (q[0] - q[3]) / (q[0] + q[3])
}

fn ln_geometric_ratio(a: f64, b: f64, c: f64, d: f64) -> f64 {
    // ln(G/G') = atanh((ab - cd)/(ab + cd)); atanh is ill-conditioned near 1
    let z = ab_minus_cd_over_sum(a, b, c, d);
    if z.abs() < 0.5 {
        libm::atanh(z)
    } else {
        0.5 * (math::ln(a / c) + math::ln(b / d))
    }
}

/// `(ab - cd)/(ab + cd)` with the difference formed by `fma`.
fn ab_minus_cd_over_sum(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let (_, e) = libm::frexp(a);
    let k = libm::ldexp(1.0, -e);
    let (a, b, c, d) = (a * k, b * k, c * k, d * k);
    let cd = c * d;
    let diff = math::fma(a, b, -cd) + math::fma(-c, d, cd);
    diff / math::fma(a, b, cd)
}

/// `ln(M(a,b)/M(c,d))` for M = H, G, L, I, A, in that order.
pub fn mean_log_ratios(upper: PositivePair, lower: PositivePair) -> [f64; 5] {
    let lr = |f: fn(PositivePair) -> f64| math::ln(f(upper)) - math::ln(f(lower));
    [
        lr(means::harmonic_mean),
        lr(means::geometric_mean),
        lr(means::logarithmic_mean),
        means::ln_identric_mean(upper) - means::ln_identric_mean(lower),
        lr(means::arithmetic_mean),
    ]
}

/// `ln I(x^s, y^s)`, with the powers formed literally.
fn ln_identric_of_powers(pair: PositivePair, s: f64) -> Result<f64, EvalError> {
    let x = math::powf(pair.a(), s);
    let y = math::powf(pair.b(), s);
    let powered = PositivePair::new(x, y).map_err(|_| EvalError::Range { log_value: s * math::ln(pair.hi()) })?;
    Ok(means::ln_identric_mean(powered))
}

/// Shared pieces of the two exponent-pair ids: `p ln(L_p/L_p')`,
/// `q ln(L_q/L_q')` and `ln(I(a^{q+1},..)/I(c^{q+1},..))`.
fn exponent_terms(q: &OrderedQuad, p: PExponent, qe: PExponent) -> Result<(f64, f64, f64), EvalError> {
    let (up, lo) = (q.upper(), q.lower());
    let lp = |e: PExponent| {
        e.value() * (math::ln(means::p_logarithmic_mean(up, e)) - math::ln(means::p_logarithmic_mean(lo, e)))
    };
    let s = qe.value() + 1.0;
    let j = ln_identric_of_powers(up, s)? - ln_identric_of_powers(lo, s)?;
    Ok((lp(p), lp(qe), j))
}

fn finish(
    id: InequalityId,
    inputs: Inputs,
    links: Vec<Link>,
    orientation: f64,
    expectation: Expectation,
    tol: f64,
) -> SlackReport {
    SlackReport::assess(id.name(), inputs, id.info().domain, links, orientation, expectation, tol)
}

pub fn slack_eq4(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq4;
    let quad = strict_quad(id, a, b, c, d)?;
    let pe = generic_exponent(id, p)?;
    let qe = generic_exponent(id, q)?;
    let (lnp, lnq, j) = exponent_terms(&quad, pe, qe)?;
    let r_p = math::exp(lnp);
    let r_q = math::exp(lnq);
    let rhs_factor = 1.0 + (p - q) / (q + 1.0) * j;
    // rhs side of the stated inequality is the lower bound
    let lower = r_q * rhs_factor;
    let slack = r_q * (math::exp_m1(lnp - lnq) - (p - q) / (q + 1.0) * j);
    let link = Link::with_slack("EQ4", lower, r_p, slack, lower.abs().max(r_p.abs()));
    let expectation = if p == q { Expectation::Equality } else { Expectation::Strict { distance: (p - q).abs() } };
    Ok(finish(id, Inputs::QuadExponents { a, b, c, d, p, q }, vec![link], 1.0, expectation, tol))
}

pub fn slack_eq5(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq5;
    let quad = strict_quad(id, a, b, c, d)?;
    let (l1, l2) = (means::logarithmic_mean(quad.upper()), means::logarithmic_mean(quad.lower()));
    let ln_i = means::ln_identric_mean(quad.upper()) - means::ln_identric_mean(quad.lower());
    let links = vec![Link::absolute("EQ5_L", 1.0 - l2 / l1, ln_i), Link::absolute("EQ5_R", ln_i, l1 / l2 - 1.0)];
    let distance = spread(quad.coords());
    Ok(finish(id, Inputs::Quad { a, b, c, d }, links, 1.0, Expectation::Strict { distance }, tol))
}

pub fn slack_eq6(a: f64, b: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq6;
    let pair = ordered_pair(id, a, b)?;
    let l = means::logarithmic_mean(pair);
    let ln_i_b = means::ln_identric_mean(pair) - math::ln(b);
    let links = vec![Link::absolute("EQ6_L", 1.0 - b / l, ln_i_b), Link::absolute("EQ6_R", ln_i_b, l / b - 1.0)];
    let distance = pair_gap(a, b);
    Ok(finish(id, Inputs::Pair { a, b }, links, 1.0, Expectation::Strict { distance }, tol))
}

pub fn slack_eq8(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq8;
    let quad = strict_quad(id, a, b, c, d)?;
    let l_ratio = means::logarithmic_mean(quad.upper()) / means::logarithmic_mean(quad.lower());
    let mid = 1.0 + ln_geometric_ratio(a, b, c, d);
    let low = 2.0 * a * b / (a * b + c * d);
    let links = vec![Link::additive("EQ8_1", mid, l_ratio), Link::additive("EQ8_2", low, mid)];
    let distance = spread(quad.coords());
    Ok(finish(id, Inputs::Quad { a, b, c, d }, links, 1.0, Expectation::Strict { distance }, tol))
}

pub fn slack_eq9(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq9;
    let quad = strict_quad(id, a, b, c, d)?;
    let l_ratio = means::logarithmic_mean(quad.upper()) / means::logarithmic_mean(quad.lower());
    let ln_i = means::ln_identric_mean(quad.upper()) - means::ln_identric_mean(quad.lower());
    let lhs = ln_geometric_ratio(a, b, c, d) / ln_i;
    let links = vec![Link::additive("EQ9", lhs, l_ratio)];
    let distance = spread(quad.coords());
    Ok(finish(id, Inputs::Quad { a, b, c, d }, links, 1.0, Expectation::Strict { distance }, tol))
}

pub fn slack_eq10(a: f64, b: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq10;
    let pair = ordered_pair(id, a, b)?;
    let gap = (a - b) / b;
    if gap < PAIR_GAP_FLOOR {
        return Err(hypothesis(id, format_args!("a/b - 1 = {gap:e} is below {PAIR_GAP_FLOOR:e}")));
    }
    let ln_ab = math::ln_1p(gap);
    let m1 = means::logarithmic_mean(pair) / b;
    let m2 = 1.0 + 0.5 * ln_ab;
    let m3 = 2.0 * a / (a + b);
    let m4 = ln_ab / (2.0 * (means::ln_identric_mean(pair) - math::ln(b)));
    let links =
        vec![Link::additive("EQ10_1", m2, m1), Link::additive("EQ10_2", m3, m2), Link::additive("EQ10_3", m4, m3)];
    Ok(finish(id, Inputs::Pair { a, b }, links, 1.0, Expectation::Strict { distance: pair_gap(a, b) }, tol))
}

fn eq12_link(label: &str, t: f64, half_log: f64) -> Link {
    // half_log - t with half_log = atanh(t); the difference is kept
    // cancellation free
    Link::with_slack(label, t, half_log, math::atanh_excess(t), t.abs().max(half_log.abs()))
}

pub fn slack_eq11(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq11;
    let quad = strict_quad(id, a, b, c, d)?;
    let t = ab_minus_cd_over_sum(a, b, c, d);
    let ln_g = ln_ratio(means::geometric_mean(quad.upper()), means::geometric_mean(quad.lower()));
    let links = vec![eq12_link("EQ11", t, ln_g)];
    Ok(finish(id, Inputs::Quad { a, b, c, d }, links, 1.0, Expectation::Strict { distance: t }, tol))
}

pub fn slack_eq12(x: f64, y: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq12;
    ordered_pair(id, x, y)?;
    let r_minus_1 = (x - y) / y;
    let t = (x - y) / (x + y);
    let links = vec![eq12_link("EQ12", t, 0.5 * math::ln_1p(r_minus_1))];
    Ok(finish(id, Inputs::Pair { a: x, b: y }, links, 1.0, Expectation::Strict { distance: t }, tol))
}

/// Both auxiliary statements on one quad, the second at `x = ab, y = cd`.
pub fn slack_eq11_12(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<[SlackReport; 2], CatalogError> {
    Ok([slack_eq11(a, b, c, d, tol)?, slack_eq12(a * b, c * d, tol)?])
}

pub fn slack_eq13(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq13;
    let quad = strict_quad(id, a, b, c, d)?;
    let pe = generic_exponent(id, p)?;
    let qe = generic_exponent(id, q)?;
    let (lnp, lnq, j) = exponent_terms(&quad, pe, qe)?;
    let lhs = (p - q) / (q + 1.0) * j;
    let link = Link::absolute("EQ13", lhs, lnp - lnq);
    let class = quad.disc_class();
    let expectation = if class == DiscClass::Zero || p == q {
        Expectation::Equality
    } else {
        Expectation::Strict { distance: (p - q).abs().min(DiscClass::relative_distance(a, b, c, d)) }
    };
    let orientation = if class == DiscClass::Zero { 1.0 } else { class.sign() };
    Ok(finish(id, Inputs::QuadExponents { a, b, c, d, p, q }, vec![link], orientation, expectation, tol))
}

pub fn chain_eq14(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Eq14;
    let quad = RelaxedQuad::new(a, b, c, d).map_err(|e| hypothesis(id, e))?;
    let r = mean_log_ratios(quad.upper(), quad.lower());
    let links = vec![
        Link::absolute("EQ14_1", r[0], r[1]),
        Link::absolute("EQ14_2", r[1], r[2]),
        Link::absolute("EQ14_3", r[2], r[3]),
        Link::absolute("EQ14_4", r[3], r[4]),
    ];
    let class = quad.disc_class();
    let (orientation, expectation) = match class {
        DiscClass::Zero => (1.0, Expectation::Equality),
        _ => (class.sign(), Expectation::Strict { distance: DiscClass::relative_distance(a, b, c, d) }),
    };
    Ok(finish(id, Inputs::Quad { a, b, c, d }, links, orientation, expectation, tol))
}

pub fn sequence_report(id: InequalityId, n: u64, tol: f64) -> Result<SlackReport, CatalogError> {
    if n == 0 {
        return Err(hypothesis(id, "n must be at least 1"));
    }
    let [l15, l16, l17] = sequence::chain_links(n);
    let links = match id {
        InequalityId::Eq15 => l15,
        InequalityId::Eq16 => l16,
        InequalityId::Eq17 => l17,
        _ => return Err(CatalogError::WrongInputs { id: id.name(), expected: id.info().arity }),
    };
    let distance = 1.0 / n as f64;
    Ok(finish(id, Inputs::Index { n }, links, 1.0, Expectation::Strict { distance }, tol))
}

/// Compared as `ln m` so that `f` itself never has to be formed; both
/// slopes are positive because `f` is increasing.
pub fn slope_3(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<SlackReport, CatalogError> {
    let id = InequalityId::Slope3;
    let quad = strict_quad(id, a, b, c, d)?;
    let ln_slope = |u: f64, v: f64| {
        let (gu, gv) = (ratio::eval_g(&quad, u), ratio::eval_g(&quad, v));
        gv + math::ln_one_minus_exp_neg(gv - gu) - math::ln(v - u)
    };
    let (left, right) = (ln_slope(d, b), ln_slope(c, a));
    let links = vec![Link::absolute("SLOPE_3", left, right)];
    let distance = spread(quad.coords());
    Ok(finish(id, Inputs::Quad { a, b, c, d }, links, 1.0, Expectation::Strict { distance }, tol))
}

/// Dispatch with the id's default tolerance.
pub fn evaluate(id: InequalityId, inputs: &Inputs) -> Result<SlackReport, CatalogError> {
    evaluate_with_tolerance(id, inputs, id.default_tolerance())
}

pub fn evaluate_with_tolerance(id: InequalityId, inputs: &Inputs, tol: f64) -> Result<SlackReport, CatalogError> {
    use InequalityId::*;
    let wrong = || CatalogError::WrongInputs { id: id.name(), expected: id.info().arity };
    match (id, inputs) {
        (Eq4, &Inputs::QuadExponents { a, b, c, d, p, q }) => slack_eq4(a, b, c, d, p, q, tol),
        (Eq13, &Inputs::QuadExponents { a, b, c, d, p, q }) => slack_eq13(a, b, c, d, p, q, tol),
        (Eq5, &Inputs::Quad { a, b, c, d }) => slack_eq5(a, b, c, d, tol),
        (Eq8, &Inputs::Quad { a, b, c, d }) => slack_eq8(a, b, c, d, tol),
        (Eq9, &Inputs::Quad { a, b, c, d }) => slack_eq9(a, b, c, d, tol),
        (Eq11, &Inputs::Quad { a, b, c, d }) => slack_eq11(a, b, c, d, tol),
        (Eq12, &Inputs::Quad { a, b, c, d }) => slack_eq12(a * b, c * d, tol),
        (Eq14, &Inputs::Quad { a, b, c, d }) => chain_eq14(a, b, c, d, tol),
        (Slope3, &Inputs::Quad { a, b, c, d }) => slope_3(a, b, c, d, tol),
        (Eq6, &Inputs::Pair { a, b }) => slack_eq6(a, b, tol),
        (Eq10, &Inputs::Pair { a, b }) => slack_eq10(a, b, tol),
        (Eq12, &Inputs::Pair { a, b }) => slack_eq12(a, b, tol),
        (Eq15 | Eq16 | Eq17, &Inputs::Index { n }) => sequence_report(id, n, tol),
        _ => Err(wrong()),
    }
}

/// `ln(x/y)` through `log1p` of the relative gap.
fn ln_ratio(x: f64, y: f64) -> f64 {
    math::ln_1p((x - y) / y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use core::f64::consts::E;

    const TOL: f64 = DEFAULT_TOLERANCE;

    fn close(x: f64, y: f64, eps: f64) -> bool {
        (x - y).abs() <= eps
    }

    #[test]
    fn eq4_equality_iff_p_equals_q() {
        let r = slack_eq4(4.0, 3.0, 2.0, 1.0, 2.0, 2.0, TOL).unwrap();
        assert!(r.links[0].slack.abs() <= 1e-12);
        assert_eq!(r.verdict, Verdict::EqualityCase);
        let r = slack_eq4(4.0, 3.0, 2.0, 1.0, 2.0, 3.0, TOL).unwrap();
        assert!(r.links[0].slack > 0.0 && r.verdict == Verdict::Holds);
        let r = slack_eq4(8.0, 2.0, 2.0, 1.0, 0.5, -0.5, TOL).unwrap();
        assert!(r.links[0].slack > 0.0 && r.verdict == Verdict::Holds);
    }

    #[test]
    fn eq4_rejects_limit_exponents_and_loose_quads() {
        assert!(matches!(slack_eq4(4.0, 3.0, 2.0, 1.0, 1e-8, 2.0, TOL), Err(CatalogError::HypothesisViolation { .. })));
        assert!(matches!(slack_eq4(4.0, 3.0, 2.0, 1.0, 2.0, -1.0, TOL), Err(CatalogError::HypothesisViolation { .. })));
        assert!(matches!(slack_eq4(4.0, 4.0, 2.0, 1.0, 2.0, 3.0, TOL), Err(CatalogError::HypothesisViolation { .. })));
    }

    #[test]
    fn eq5_chain_values() {
        let r = slack_eq5(4.0, 3.0, 2.0, 1.0, TOL).unwrap();
        let [left, mid, right] = [r.links[0].lhs.exp(), r.links[0].rhs.exp(), r.links[1].rhs.exp()];
        assert!(close(left, 1.7949, 1e-4) && close(mid, 64.0 / 27.0, 1e-14) && close(right, 4.0936, 1e-4));
        for q in [[4.0, 3.0, 2.0, 1.0], [8.0, 2.0, 2.0, 1.0], [2.0, 1.5, 1.5, 1.0]] {
            let r = slack_eq5(q[0], q[1], q[2], q[3], TOL).unwrap();
            assert_eq!(r.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn eq6_values_and_near_tie() {
        let r = slack_eq6(4.0, 2.0, TOL).unwrap();
        assert!(close(r.links[0].rhs.exp(), 1.4715, 1e-4));
        assert!(close(r.links[0].lhs.exp(), 1.3592, 1e-4));
        assert!(close(r.links[1].rhs.exp(), 1.5569, 1e-4));
        assert_eq!(r.verdict, Verdict::Holds);
        let r = slack_eq6(1.0 + 1e-6, 1.0, TOL).unwrap();
        assert!(r.links.iter().all(|l| l.slack >= -TOL));
        assert_ne!(r.verdict, Verdict::Violated);
        assert_eq!(slack_eq6(100.0, 1.0, TOL).unwrap().verdict, Verdict::Holds);
        assert!(slack_eq6(1.0, 2.0, TOL).is_err());
    }

    #[test]
    fn eq8_eq9_values() {
        let r = slack_eq8(4.0, 3.0, 2.0, 1.0, TOL).unwrap();
        assert!(close(r.links[0].rhs, 2.4094, 1e-4));
        assert!(close(r.links[0].lhs, 1.0 + 6f64.sqrt().ln(), 1e-15));
        assert!(close(r.links[1].lhs, 24.0 / 14.0, 1e-15));
        assert_eq!(r.verdict, Verdict::Holds);
        for q in [[8.0, 2.0, 2.0, 1.0], [4.0, 2.0, 2.0, 1.0]] {
            assert_eq!(slack_eq8(q[0], q[1], q[2], q[3], TOL).unwrap().verdict, Verdict::Holds);
        }
        let r = slack_eq9(4.0, 3.0, 2.0, 1.0, TOL).unwrap();
        // ln(sqrt 6)/ln(64/27); the four-digit quotient of rounded logs reads 1.0379
        assert!(close(r.links[0].lhs, 1.0380437531599379, 1e-14));
        assert_eq!(r.verdict, Verdict::Holds);
        for q in [[5.5, 1.25, 0.75, 0.01], [1.3, 1.2, 1.1, 1.0]] {
            assert_eq!(slack_eq9(q[0], q[1], q[2], q[3], TOL).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn eq10_values_and_floor() {
        let r = slack_eq10(4.0, 2.0, TOL).unwrap();
        let m = [r.links[0].rhs, r.links[0].lhs, r.links[1].lhs, r.links[2].lhs];
        for (got, want) in m.iter().zip([1.4427, 1.3466, 8.0 / 6.0, 0.8971]) {
            assert!(close(*got, want, 1e-4), "{got} vs {want}");
        }
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(slack_eq10(E, 1.0, TOL).unwrap().verdict, Verdict::Holds);
        let r = slack_eq10(1.001, 1.0, TOL).unwrap();
        assert!(r.links.iter().all(|l| l.normalized() >= -TOL));
        assert_ne!(r.verdict, Verdict::Violated);
        assert!(matches!(slack_eq10(1.0 + 1e-7, 1.0, TOL), Err(CatalogError::HypothesisViolation { .. })));
    }

    #[test]
    fn eq11_eq12_values() {
        let [r11, r12] = slack_eq11_12(4.0, 3.0, 2.0, 1.0, TOL).unwrap();
        assert!(close(r11.links[0].rhs, 6f64.sqrt().ln(), 1e-15));
        assert!(close(r11.links[0].lhs, 10.0 / 14.0, 1e-15));
        assert!(close(r11.links[0].slack, r11.links[0].rhs - r11.links[0].lhs, 1e-15));
        assert_eq!(r11.verdict, Verdict::Holds);
        assert_eq!(r12.verdict, Verdict::Holds);
        let r = slack_eq12(2.0, 1.0, TOL).unwrap();
        assert!(close(r.links[0].rhs, 0.5 * 2f64.ln(), 1e-16) && close(r.links[0].lhs, 1.0 / 3.0, 1e-16));
        let r = slack_eq12(1.0 + 1e-9, 1.0, TOL).unwrap();
        assert!(r.links[0].slack >= -TOL);
        assert_ne!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn eq13_direction_follows_discriminant() {
        let r = slack_eq13(4.0, 2.0, 2.0, 1.0, 3.0, -2.0, TOL).unwrap();
        assert!(r.links[0].slack.abs() <= 1e-11);
        assert_eq!(r.verdict, Verdict::EqualityCase);
        let r = slack_eq13(8.0, 2.0, 2.0, 1.0, 2.0, 0.5, TOL).unwrap();
        assert!(r.links[0].slack > 0.0 && r.verdict == Verdict::Holds);
        let r = slack_eq13(4.0, 3.0, 2.0, 1.0, 2.0, 0.5, TOL).unwrap();
        assert!(r.links[0].slack < 0.0 && r.verdict == Verdict::Holds);
        assert_eq!(r.orientation, -1.0);
    }

    #[test]
    fn eq13_matches_ratio_kernel() {
        // p ln(L_p/L_p') - q ln(L_q/L_q') is g(p+1) - g(q+1), and the identric
        // term is (p-q) g'(q+1)
        for (quad, p, q) in
            [([8.0, 2.0, 2.0, 1.0], 2.0, 0.5), ([4.0, 3.0, 2.0, 1.0], -0.7, 1.5), ([9.0, 4.0, 3.0, 0.5], 0.3, -2.5)]
        {
            let o = OrderedQuad::new(quad[0], quad[1], quad[2], quad[3]).unwrap();
            let want =
                ratio::eval_g(&o, p + 1.0) - ratio::eval_g(&o, q + 1.0) - (p - q) * ratio::eval_g_prime(&o, q + 1.0);
            let r = slack_eq13(quad[0], quad[1], quad[2], quad[3], p, q, TOL).unwrap();
            assert!(close(r.links[0].slack, want, 1e-12), "{} vs {want}", r.links[0].slack);
        }
    }

    #[test]
    fn eq14_chains() {
        let r = chain_eq14(4.0, 3.0, 2.0, 1.0, TOL).unwrap();
        let ratios = [r.links[0].lhs, r.links[1].lhs, r.links[2].lhs, r.links[3].lhs, r.links[3].rhs].map(f64::exp);
        for (got, want) in ratios.iter().zip([2.5714, 2.4495, 2.4094, 2.3704, 2.3333]) {
            assert!(close(*got, want, 1e-4));
        }
        assert!(r.links.iter().all(|l| l.slack < 0.0));
        assert_eq!(r.verdict, Verdict::Holds);
        let r = chain_eq14(4.0, 2.0, 2.0, 1.0, TOL).unwrap();
        assert!(r.links.iter().all(|l| close(l.lhs.exp(), 2.0, 1e-14) && l.slack.abs() < 1e-14));
        assert_eq!(r.verdict, Verdict::EqualityCase);
        let r = chain_eq14(8.0, 2.0, 2.0, 1.0, TOL).unwrap();
        assert!(r.links.iter().all(|l| l.slack > 0.0));
        // relaxed order is accepted
        let r = chain_eq14(3.0, 3.0, 2.0, 1.0, TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(chain_eq14(2.0, 2.0, 1.0, 1.0, TOL).unwrap().verdict, Verdict::EqualityCase);
    }

    #[test]
    fn log_ratio_ids_are_scale_invariant() {
        for lambda in [1e-3, 0.37, 64.0, 1e5] {
            let base = [chain_eq14(8.0, 2.0, 2.0, 1.0, TOL).unwrap(), slack_eq5(5.0, 3.5, 1.25, 0.5, TOL).unwrap()];
            let scaled = [
                chain_eq14(8.0 * lambda, 2.0 * lambda, 2.0 * lambda, lambda, TOL).unwrap(),
                slack_eq5(5.0 * lambda, 3.5 * lambda, 1.25 * lambda, 0.5 * lambda, TOL).unwrap(),
            ];
            for (b, s) in base.iter().zip(scaled.iter()) {
                for (lb, ls) in b.links.iter().zip(s.links.iter()) {
                    assert!(close(lb.slack, ls.slack, 1e-12));
                }
            }
        }
    }

    #[test]
    fn sequence_and_slope() {
        let r = sequence_report(InequalityId::Eq15, 1, 0.0).unwrap();
        assert!(r.links.iter().all(|l| l.slack > 0.0) && r.verdict == Verdict::Holds);
        let r = evaluate(InequalityId::Eq17, &Inputs::Index { n: 1_000_000 }).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(sequence_report(InequalityId::Eq16, 0, 0.0).is_err());
        let r = slope_3(4.0, 3.0, 2.0, 1.0, TOL).unwrap();
        assert!(r.links[0].lhs < r.links[0].rhs && r.verdict == Verdict::Holds);
        let q = OrderedQuad::new(4.0, 3.0, 2.0, 1.0).unwrap();
        let direct = [ratio::secant_slope(&q, 1.0, 3.0).unwrap(), ratio::secant_slope(&q, 2.0, 4.0).unwrap()];
        assert!(close(r.links[0].lhs, direct[0].ln(), 1e-13) && close(r.links[0].rhs, direct[1].ln(), 1e-13));
        // f(1000) overflows; the log form does not.
        let r = slope_3(1000.0, 3.0, 2.0, 1e-3, TOL).unwrap();
        assert!(r.margin.is_finite() && r.verdict == Verdict::Holds);
    }

    #[test]
    fn parse_and_dispatch() {
        assert_eq!(InequalityId::parse("eq5_l"), Some(InequalityId::Eq5));
        assert_eq!(InequalityId::parse("EQ8_2"), Some(InequalityId::Eq8));
        assert_eq!(InequalityId::parse("SLOPE_3"), Some(InequalityId::Slope3));
        assert_eq!(InequalityId::parse("EQ7"), None);
        assert_eq!(InequalityId::parse("EQ18"), None);
        for id in InequalityId::ALL {
            assert_eq!(InequalityId::parse(id.name()), Some(id));
        }
        let quad = Inputs::Quad { a: 4.0, b: 3.0, c: 2.0, d: 1.0 };
        assert!(matches!(evaluate(InequalityId::Eq6, &quad), Err(CatalogError::WrongInputs { .. })));
        assert_eq!(evaluate(InequalityId::Eq12, &quad).unwrap().inputs, Inputs::Pair { a: 12.0, b: 2.0 });
        let r = evaluate(InequalityId::Eq4, &Inputs::QuadExponents { a: 4.0, b: 3.0, c: 2.0, d: 1.0, p: 2.0, q: 2.0 })
            .unwrap();
        assert_eq!(r.verdict, Verdict::EqualityCase);
    }
}
