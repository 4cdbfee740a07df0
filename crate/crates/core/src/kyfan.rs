//! Ky Fan statistics of samples in `(0, 1/2]` and the classical, refined and
//! inverse forms of Ky Fan's inequality.
//!
//! Notation used throughout (primes refer to the complements `1 - x_i`):
//!
//! * `ell = ln(A/G)`, `ell' = ln(A'/G')`
//! * `delta = A - G`, `delta' = A' - G'`
//! * `kappa = delta'/delta`, `lambda = ell'/ell`
//! * `mu = ln sqrt(A'G'/(AG))`, `nu = ln(A'/A)`
//! * `iota = ln(I(A',G')/I(A,G))`
//! * `K_n = (A'^n - G'^n)/(A^n - G^n)`
//!
//! `ell` is accumulated as the mean of `d - ln(1 + d)` over the relative
//! deviations `d = (x_i - A)/A`, which is exact in sign and keeps full
//! relative accuracy as the sample contracts to its mean. `G` is then
//! `A exp(-ell)`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::catalog::{self, CatalogError};
use crate::error::DomainError;
use crate::math;
use crate::means::{self, PositivePair};
use crate::ratio::{self, OrderedQuad};
use crate::report::{Expectation, Inputs, Link, MarginDomain, SlackReport};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KyFanSample {
    values: Vec<f64>,
    all_equal: bool,
}

impl KyFanSample {
    pub fn new(values: Vec<f64>) -> Result<Self, DomainError> {
        if values.is_empty() {
            return Err(DomainError::EmptySample);
        }
        for &x in &values {
            if !(x > 0.0 && x <= 0.5) {
                return Err(DomainError::OutOfUnitHalf(x));
            }
        }
        let all_equal = values.iter().all(|&x| x == values[0]);
        Ok(Self { values, all_equal })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn all_equal(&self) -> bool {
        self.all_equal
    }

    /// `(max - min)/(max + min)`.
    pub fn relative_spread(&self) -> f64 {
        let (lo, hi) =
            self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        (hi - lo) / (hi + lo)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KyFanStats {
    pub n: usize,
    pub a: f64,
    pub g: f64,
    pub a_prime: f64,
    pub g_prime: f64,
    /// `ln(A/G)`.
    pub ell: f64,
    /// `ln(A'/G')`.
    pub ell_prime: f64,
    pub all_equal: bool,
}

/// Compensated (Neumaier) sum.
fn neumaier_sum(iter: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in iter {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `mean(d - ln(1 + d))` over `d = dev/mean`.
fn log_am_gm_gap(devs: impl Iterator<Item = f64>, mean: f64, n: f64) -> f64 {
    neumaier_sum(devs.map(|dev| math::excess_over_ln_1p(dev / mean))) / n
}

/// Both gaps are built from the same deviations `x_i - A`; the complements
/// `1 - x_i` are never rounded individually, so the two gaps stay consistent
/// to a few ulp even for tightly clustered samples.
pub fn compute_stats(sample: &KyFanSample) -> KyFanStats {
    let xs = sample.values();
    let n = xs.len();
    let nf = n as f64;
    let a = neumaier_sum(xs.iter().copied()) / nf;
    let a_prime = 1.0 - a;
    let (ell, ell_prime) = if sample.all_equal() {
        (0.0, 0.0)
    } else {
        (log_am_gm_gap(xs.iter().map(|&x| x - a), a, nf), log_am_gm_gap(xs.iter().map(|&x| a - x), a_prime, nf))
    };
    KyFanStats {
        n,
        a,
        g: a * math::exp(-ell),
        a_prime,
        g_prime: a_prime * math::exp(-ell_prime),
        ell,
        ell_prime,
        all_equal: sample.all_equal(),
    }
}

/// Composite quantities shared by the refinement chains. Only defined when
/// both log gaps are positive.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Derived {
    pub delta: f64,
    pub delta_prime: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub iota: f64,
    /// `ln K_n`.
    pub ln_k_n: f64,
    /// `(A + G)/(A' + G')`.
    pub rho: f64,
}

impl KyFanStats {
    /// `A - G`.
    pub fn delta(&self) -> f64 {
        -self.a * math::exp_m1(-self.ell)
    }

    pub fn delta_prime(&self) -> f64 {
        -self.a_prime * math::exp_m1(-self.ell_prime)
    }

    /// `A^n - G^n = A^n (1 - e^{-n ell})`.
    pub fn power_gap(&self) -> f64 {
        power_gap(self.a, self.ell, self.n)
    }

    pub fn power_gap_prime(&self) -> f64 {
        power_gap(self.a_prime, self.ell_prime, self.n)
    }

    pub fn upper_pair(&self) -> PositivePair {
        PositivePair::new(self.a_prime, self.g_prime).expect("complement means are positive")
    }

    pub fn lower_pair(&self) -> PositivePair {
        PositivePair::new(self.a, self.g).expect("sample means are positive")
    }

    pub fn derived(&self) -> Option<Derived> {
        if !(self.ell > 0.0 && self.ell_prime > 0.0) {
            return None;
        }
        let n = self.n as f64;
        let delta = self.delta();
        let delta_prime = self.delta_prime();
        let nu = math::ln(self.a_prime / self.a);
        let iota = means::ln_identric_mean(self.upper_pair()) - means::ln_identric_mean(self.lower_pair());
        let ln_k_n = n * nu + math::ln_one_minus_exp_neg(n * self.ell_prime) - math::ln_one_minus_exp_neg(n * self.ell);
        Some(Derived {
            delta,
            delta_prime,
            kappa: delta_prime / delta,
            lambda: self.ell_prime / self.ell,
            mu: nu + 0.5 * (self.ell - self.ell_prime),
            nu,
            iota,
            ln_k_n,
            rho: (self.a + self.g) / (self.a_prime + self.g_prime),
        })
    }
}

fn power_gap(a: f64, ell: f64, n: usize) -> f64 {
    if ell == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    math::exp(nf * math::ln(a) + math::ln_one_minus_exp_neg(nf * ell))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum KyFanId {
    Eq18,
    Eq19,
    Eq20,
    Eq21,
    Eq22,
    Eq23,
    Eq24,
    Eq25,
    Eq26,
    Eq27,
    Eq28,
    Eq29,
    Eq30,
    Eq31,
}

impl KyFanId {
    pub const ALL: [KyFanId; 14] = [
        KyFanId::Eq18,
        KyFanId::Eq19,
        KyFanId::Eq20,
        KyFanId::Eq21,
        KyFanId::Eq22,
        KyFanId::Eq23,
        KyFanId::Eq24,
        KyFanId::Eq25,
        KyFanId::Eq26,
        KyFanId::Eq27,
        KyFanId::Eq28,
        KyFanId::Eq29,
        KyFanId::Eq30,
        KyFanId::Eq31,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KyFanId::Eq18 => "EQ18",
            KyFanId::Eq19 => "EQ19",
            KyFanId::Eq20 => "EQ20",
            KyFanId::Eq21 => "EQ21",
            KyFanId::Eq22 => "EQ22",
            KyFanId::Eq23 => "EQ23",
            KyFanId::Eq24 => "EQ24",
            KyFanId::Eq25 => "EQ25",
            KyFanId::Eq26 => "EQ26",
            KyFanId::Eq27 => "EQ27",
            KyFanId::Eq28 => "EQ28",
            KyFanId::Eq29 => "EQ29",
            KyFanId::Eq30 => "EQ30",
            KyFanId::Eq31 => "EQ31",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let base = upper.split('_').next().unwrap_or("");
        Self::ALL.iter().copied().find(|id| id.name() == base)
    }

    /// Strict chains, stated only for samples that are not all equal.
    pub fn is_strict(&self) -> bool {
        *self >= KyFanId::Eq23
    }

    pub fn domain(&self) -> MarginDomain {
        match self {
            KyFanId::Eq19 | KyFanId::Eq20 | KyFanId::Eq26 | KyFanId::Eq29 => MarginDomain::Additive,
            _ => MarginDomain::LogRatio,
        }
    }

    pub fn statement(&self) -> &'static str {
        match self {
            KyFanId::Eq18 => "A'/G' <= A/G",
            KyFanId::Eq19 => "A' - G' <= A - G",
            KyFanId::Eq20 => "A^n - G^n <= A'^n - G'^n, with equality for n <= 2",
            KyFanId::Eq21 => "(A'/G')^(A'+G') <= (A/G)^(A+G)",
            KyFanId::Eq22 => "(A'/G')^(A-G) <= (A/G)^(A'-G')",
            KyFanId::Eq23 => {
                "A'/G' < (A/G)^(kappa - lambda mu) < (A/G)^(kappa - lambda nu) < (A/G)^(1 - lambda nu) < A/G"
            }
            KyFanId::Eq24 => "A'/G' < max{(A'/G')^(1+mu), (A'/G')^(1/kappa)} < (A'/G')^((1+mu)/kappa) < A/G",
            KyFanId::Eq25 => "K_n < (A'G')^n ln(A'/G') / ((AG)^n ln(A/G))",
            KyFanId::Eq26 => "max{K_n e^(-n mu), kappa e^(-mu)} < lambda < kappa iota/mu < min{kappa, iota/mu} < 1",
            KyFanId::Eq27 => "A'/G' < (A'/G')^(mu/iota) < (A/G)^kappa < A/G < (A'/G')^(e^(n mu))",
            KyFanId::Eq28 => "K_n < lambda e^(n mu) < e^(n mu)",
            KyFanId::Eq29 => "A'/G' < (A/G)^(rho kappa) < min{(A/G)^rho, (A/G)^kappa} < A/G",
            KyFanId::Eq30 => "A'/G' < (A'/G')^(e^iota / kappa) < A/G",
            KyFanId::Eq31 => "e^(-2 mu) < min{(lambda/kappa)^2, (lambda/K_n)^(2/n)} < 1",
        }
    }
}

impl fmt::Display for KyFanId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest magnitude among the terms a comparison is built from. Members
/// that are themselves near zero (`ln K_2 = 0`, for instance) are compared
/// against this rather than against their own size.
fn magnitude(terms: &[f64]) -> f64 {
    terms.iter().fold(0.0, |m, t| m.max(t.abs()))
}

fn scaled(label: &str, lhs: f64, rhs: f64, scale: f64) -> Link {
    Link::with_slack(label, lhs, rhs, rhs - lhs, scale)
}

fn chain(prefix: &str, members: &[f64]) -> Vec<Link> {
    members.windows(2).enumerate().map(|(i, w)| Link::additive(&format!("{prefix}_{}", i + 1), w[0], w[1])).collect()
}

fn classic_links(id: KyFanId, s: &KyFanStats) -> Vec<Link> {
    match id {
        KyFanId::Eq18 => vec![Link::additive("EQ18", s.ell_prime, s.ell)],
        KyFanId::Eq19 => vec![Link::additive("EQ19", s.delta_prime(), s.delta())],
        KyFanId::Eq20 => {
            let lo = s.power_gap();
            let hi = s.power_gap_prime();
            if lo > 0.0 && lo.is_normal() && hi.is_finite() {
                let ln_ratio = math::ln(hi) - math::ln(lo);
                vec![Link::with_slack("EQ20", lo, hi, lo * math::exp_m1(ln_ratio), lo.max(hi))]
            } else if s.ell == 0.0 {
                vec![Link::additive("EQ20", 0.0, 0.0)]
            } else {
                // both powers underflow; compare logarithms instead
                let n = s.n as f64;
                let ln_lo = n * math::ln(s.a) + math::ln_one_minus_exp_neg(n * s.ell);
                let ln_hi = n * math::ln(s.a_prime) + math::ln_one_minus_exp_neg(n * s.ell_prime);
                vec![Link::additive("EQ20", ln_lo, ln_hi)]
            }
        }
        KyFanId::Eq21 => vec![Link::additive("EQ21", (s.a_prime + s.g_prime) * s.ell_prime, (s.a + s.g) * s.ell)],
        KyFanId::Eq22 => {
            let lhs = s.delta() * s.ell_prime;
            let rhs = s.delta_prime() * s.ell;
            // delta'ell - delta ell' = ell ell' (L(A',G') - L(A,G))
            let gap = means::logarithmic_mean(s.upper_pair()) - means::logarithmic_mean(s.lower_pair());
            vec![Link::with_slack("EQ22", lhs, rhs, s.ell * s.ell_prime * gap, lhs.abs().max(rhs.abs()))]
        }
        _ => unreachable!("not a classical id"),
    }
}

fn refinement_links(id: KyFanId, s: &KyFanStats, d: &Derived) -> Vec<Link> {
    let (l, lp) = (s.ell, s.ell_prime);
    let n = s.n as f64;
    let Derived { kappa, lambda, mu, nu, iota, ln_k_n, rho, .. } = *d;
    match id {
        KyFanId::Eq23 => {
            let e1 = kappa - lambda * mu;
            let e2 = kappa - lambda * nu;
            let e3 = 1.0 - lambda * nu;
            chain("EQ23", &[lp, e1 * l, e2 * l, e3 * l, l])
        }
        KyFanId::Eq24 => {
            let top = ((1.0 + mu) * lp).max(lp / kappa);
            chain("EQ24", &[lp, top, (1.0 + mu) * lp / kappa, l])
        }
        KyFanId::Eq25 => {
            let ln_lambda = math::ln(lambda);
            let scale = magnitude(&[ln_k_n, ln_lambda, 2.0 * n * mu]);
            vec![scaled("EQ25", ln_k_n, ln_lambda + 2.0 * n * mu, scale)]
        }
        KyFanId::Eq26 => {
            let mid = kappa * iota / mu;
            vec![
                Link::additive("EQ26_1", math::exp(ln_k_n - n * mu), lambda),
                Link::additive("EQ26_2", kappa * math::exp(-mu), lambda),
                Link::additive("EQ26_3", lambda, mid),
                Link::additive("EQ26_4", mid, kappa),
                Link::additive("EQ26_5", mid, iota / mu),
                Link::additive("EQ26_6", kappa.min(iota / mu), 1.0),
            ]
        }
        KyFanId::Eq27 => chain("EQ27", &[lp, lp * mu / iota, kappa * l, l, lp * math::exp(n * mu)]),
        KyFanId::Eq28 => {
            let ln_lambda = math::ln(lambda);
            let scale = magnitude(&[ln_k_n, ln_lambda, n * mu]);
            let mid = ln_lambda + n * mu;
            vec![scaled("EQ28_1", ln_k_n, mid, scale), scaled("EQ28_2", mid, n * mu, scale)]
        }
        KyFanId::Eq29 => {
            let both = l * rho * kappa;
            vec![
                Link::additive("EQ29_1", lp, both),
                Link::additive("EQ29_2", both, rho * l),
                Link::additive("EQ29_3", both, kappa * l),
                Link::additive("EQ29_4", (rho * l).min(kappa * l), l),
            ]
        }
        KyFanId::Eq30 => chain("EQ30", &[lp, lp * math::exp(iota) / kappa, l]),
        KyFanId::Eq31 => {
            let first = 2.0 * math::ln(lambda / kappa);
            let second = 2.0 / n * (math::ln(lambda) - ln_k_n);
            let scale = magnitude(&[2.0 * mu, first, second, 2.0 / n * ln_k_n, 2.0 * math::ln(lambda)]);
            vec![
                scaled("EQ31_1", -2.0 * mu, first, scale),
                scaled("EQ31_2", -2.0 * mu, second, scale),
                scaled("EQ31_3", first.min(second), 0.0, scale),
            ]
        }
        _ => unreachable!("not a refinement id"),
    }
}

fn degenerate(id: KyFanId) -> CatalogError {
    CatalogError::HypothesisViolation { id: id.name(), reason: "the sample values are all equal".to_string() }
}

/// Slack report for one id on a sample.
pub fn evaluate(id: KyFanId, sample: &KyFanSample, tol: f64) -> Result<SlackReport, CatalogError> {
    let stats = compute_stats(sample);
    evaluate_stats(id, sample, &stats, tol)
}

fn evaluate_stats(
    id: KyFanId,
    sample: &KyFanSample,
    stats: &KyFanStats,
    tol: f64,
) -> Result<SlackReport, CatalogError> {
    let links = if id.is_strict() {
        if sample.all_equal() {
            return Err(degenerate(id));
        }
        let derived = stats.derived().ok_or_else(|| degenerate(id))?;
        refinement_links(id, stats, &derived)
    } else {
        classic_links(id, stats)
    };
    let expectation = if sample.all_equal() || (id == KyFanId::Eq20 && stats.n <= 2) {
        Expectation::Equality
    } else {
        Expectation::Strict { distance: sample.relative_spread() }
    };
    let inputs = Inputs::Sample { values: sample.values().to_vec() };
    Ok(SlackReport::assess(id.name(), inputs, id.domain(), links, 1.0, expectation, tol))
}

/// Reports for the three classical inequalities.
pub fn classic_slacks(sample: &KyFanSample, tol: f64) -> [SlackReport; 3] {
    let stats = compute_stats(sample);
    [KyFanId::Eq18, KyFanId::Eq19, KyFanId::Eq20]
        .map(|id| evaluate_stats(id, sample, &stats, tol).expect("classical ids accept every sample"))
}

/// Reports for the refinements and inverses. For an all-equal sample only
/// the two non-strict ids are returned; the strict ones reject it.
pub fn refinement_slacks(sample: &KyFanSample, tol: f64) -> Result<Vec<SlackReport>, CatalogError> {
    let stats = compute_stats(sample);
    KyFanId::ALL[3..]
        .iter()
        .filter(|id| !(sample.all_equal() && id.is_strict()))
        .map(|&id| evaluate_stats(id, sample, &stats, tol))
        .collect()
}

/// Quad `(A', G', A, G)`, valid whenever the sample is not all equal.
pub fn stats_quad(stats: &KyFanStats) -> Result<OrderedQuad, DomainError> {
    OrderedQuad::new(stats.a_prime, stats.g_prime, stats.a, stats.g)
}

/// `(A'^x - G'^x)/(A^x - G^x)` through the ratio function kernel.
pub fn ky_fan_f_probe(stats: &KyFanStats, x: f64) -> Result<f64, CatalogError> {
    let quad =
        stats_quad(stats).map_err(|e| CatalogError::HypothesisViolation { id: "KYFAN_F", reason: e.to_string() })?;
    ratio::eval_f(&quad, x).map_err(CatalogError::from)
}

/// One quantity computed both from the Ky Fan statistics and from the mean
/// registry on the quad `(A', G', A, G)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BridgeEntry {
    pub label: &'static str,
    pub kyfan: f64,
    pub catalog: f64,
}

impl BridgeEntry {
    pub fn difference(&self) -> f64 {
        (self.kyfan - self.catalog).abs()
    }
}

pub fn bridge(stats: &KyFanStats) -> Result<Vec<BridgeEntry>, CatalogError> {
    let d = stats.derived().ok_or(CatalogError::HypothesisViolation {
        id: "BRIDGE",
        reason: "the sample values are all equal".to_string(),
    })?;
    let (ap, gp, a, g) = (stats.a_prime, stats.g_prime, stats.a, stats.g);
    let tol = crate::report::DEFAULT_TOLERANCE;
    let eq8 = catalog::slack_eq8(ap, gp, a, g, tol)?;
    let eq9 = catalog::slack_eq9(ap, gp, a, g, tol)?;
    let ratios = catalog::mean_log_ratios(stats.upper_pair(), stats.lower_pair());
    let l_ratio = d.kappa / d.lambda;
    let entry = |label, kyfan, catalog| BridgeEntry { label, kyfan, catalog };
    Ok(vec![
        entry("L_ratio_vs_1_plus_mu", l_ratio - (1.0 + d.mu), eq8.links[0].slack),
        entry("L_ratio_vs_mu_over_iota", l_ratio - d.mu / d.iota, eq9.links[0].slack),
        entry("ln_G_ratio", d.mu, ratios[1]),
        entry("ln_L_ratio", math::ln(d.kappa) - math::ln(d.lambda), ratios[2]),
        entry("ln_I_ratio", d.iota, ratios[3]),
        entry("ln_A_ratio", -math::ln(d.rho), ratios[4]),
    ])
}
