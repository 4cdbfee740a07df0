//! The classical two-argument means and the p-logarithmic family.
//!
//! Every kernel short-circuits bit-identical arguments to the common value,
//! works on the ordered pair `hi >= lo`, and avoids forming `ln a - ln b` or
//! `a ln a - b ln b` directly, which lose all digits as `a -> b`.

use crate::error::DomainError;
use crate::math;

/// Two positive finite reals. Order is irrelevant; every mean is symmetric.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self, DomainError> {
        for x in [a, b] {
            if !(x.is_finite() && x > 0.0) {
                return Err(DomainError::NonPositive(x));
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn hi(&self) -> f64 {
        self.a.max(self.b)
    }

    pub fn lo(&self) -> f64 {
        self.a.min(self.b)
    }

    /// Bit-identical arguments.
    pub fn is_tie(&self) -> bool {
        self.a == self.b
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }

    /// `(hi - lo) / lo`, the relative gap used by the logarithmic kernels.
    fn rel_gap(&self) -> f64 {
        (self.hi() - self.lo()) / self.lo()
    }

    /// `ln(hi / lo)` without forming the quotient.
    fn log_ratio(&self) -> f64 {
        let d = self.rel_gap();
        if d.is_finite() {
            math::ln_1p(d)
        } else {
            math::ln(self.hi()) - math::ln(self.lo())
        }
    }

    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo(), self.hi())
    }
}

/// Distance from 0 or -1 at or below which an exponent snaps to the limit.
/// The -1 test allows one ulp of 1 so that a literal like `-1.000001` snaps.
pub const EXPONENT_SNAP: f64 = 1e-6;

/// Relative half-gap `|a - b| / (a + b)` below which the identric mean uses
/// its even series.
pub const IDENTRIC_SERIES_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ExponentKind {
    Generic,
    /// `|p| <= EXPONENT_SNAP`; the mean is the identric mean.
    ZeroLimit,
    /// `|p + 1| <= EXPONENT_SNAP`; the mean is the logarithmic mean.
    MinusOneLimit,
}

/// Parameter of the p-logarithmic mean, tagged with its limit kind.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PExponent {
    value: f64,
    kind: ExponentKind,
}

impl PExponent {
    pub fn new(value: f64) -> Result<Self, DomainError> {
        if !value.is_finite() {
            return Err(DomainError::BadExponent(value));
        }
        let kind = if value.abs() <= EXPONENT_SNAP {
            ExponentKind::ZeroLimit
        } else if (value + 1.0).abs() <= EXPONENT_SNAP + f64::EPSILON {
            ExponentKind::MinusOneLimit
        } else {
            ExponentKind::Generic
        };
        Ok(Self { value, kind })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kind(&self) -> ExponentKind {
        self.kind
    }

    pub fn is_generic(&self) -> bool {
        self.kind == ExponentKind::Generic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MeanId {
    A,
    G,
    H,
    L,
    I,
    Lp,
}

impl MeanId {
    pub const ALL: [MeanId; 6] = [MeanId::A, MeanId::G, MeanId::H, MeanId::L, MeanId::I, MeanId::Lp];

    pub fn name(&self) -> &'static str {
        match self {
            MeanId::A => "A",
            MeanId::G => "G",
            MeanId::H => "H",
            MeanId::L => "L",
            MeanId::I => "I",
            MeanId::Lp => "Lp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanValue {
    pub mean_id: MeanId,
    pub value: f64,
}

/// Evaluates the mean named by `id`. `p` is only read for [`MeanId::Lp`];
/// a missing exponent there is treated as `p = 1`.
pub fn evaluate(id: MeanId, pair: PositivePair, p: Option<PExponent>) -> MeanValue {
    let value = match id {
        MeanId::A => arithmetic_mean(pair),
        MeanId::G => geometric_mean(pair),
        MeanId::H => harmonic_mean(pair),
        MeanId::L => logarithmic_mean(pair),
        MeanId::I => identric_mean(pair),
        MeanId::Lp => {
            let p = p.unwrap_or(PExponent { value: 1.0, kind: ExponentKind::Generic });
            p_logarithmic_mean(pair, p)
        }
    };
    MeanValue { mean_id: id, value }
}

pub fn arithmetic_mean(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    let s = pair.a + pair.b;
    if s.is_finite() {
        0.5 * s
    } else {
        0.5 * pair.a + 0.5 * pair.b
    }
}

pub fn geometric_mean(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    let prod = pair.a * pair.b;
    let g = if prod.is_normal() {
        math::sqrt(prod)
    } else {
        // a·b over/underflows; the split root keeps full precision
        math::sqrt(pair.a) * math::sqrt(pair.b)
    };
    pair.clamp(g)
}

pub fn harmonic_mean(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    pair.clamp(2.0 / (1.0 / pair.a + 1.0 / pair.b))
}

pub fn logarithmic_mean(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    pair.clamp((pair.hi() - pair.lo()) / pair.log_ratio())
}

/// Even series of `ln I - ln A` in `t = (a - b)/(a + b)`:
/// `-t^2/6 - t^4/20 - t^6/42 - t^8/72`.
fn identric_log_excess_series(t: f64) -> f64 {
    let t2 = t * t;
    -t2 * (1.0 / 6.0 + t2 * (1.0 / 20.0 + t2 * (1.0 / 42.0 + t2 * (1.0 / 72.0))))
}

fn half_gap(pair: PositivePair) -> f64 {
    (pair.hi() - pair.lo()) / (pair.hi() + pair.lo())
}

pub fn identric_mean(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    let t = half_gap(pair);
    let v = if t < IDENTRIC_SERIES_THRESHOLD {
        arithmetic_mean(pair) * math::exp(identric_log_excess_series(t))
    } else {
        identric_mean_direct(pair)
    };
    pair.clamp(v)
}

/// `I = hi · exp(lo/L - 1)`, the rearrangement of
/// `exp(-1 + (a ln a - b ln b)/(a - b))` that needs no log cancellation.
/// Exposed for the branch-continuity checks.
pub fn identric_mean_direct(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    pair.hi() * math::exp(pair.lo() / logarithmic_mean(pair) - 1.0)
}

/// Series branch of the identric mean, valid for small half-gap.
pub fn identric_mean_series(pair: PositivePair) -> f64 {
    arithmetic_mean(pair) * math::exp(identric_log_excess_series(half_gap(pair)))
}

/// `ln I(a, b)`, computed without exponentiating.
pub fn ln_identric_mean(pair: PositivePair) -> f64 {
    if pair.is_tie() {
        return math::ln(pair.a);
    }
    let t = half_gap(pair);
    if t < IDENTRIC_SERIES_THRESHOLD {
        math::ln(arithmetic_mean(pair)) + identric_log_excess_series(t)
    } else {
        math::ln(pair.hi()) + (pair.lo() / logarithmic_mean(pair) - 1.0)
    }
}

/// `L_p(a, b) = ((a^{p+1} - b^{p+1}) / ((p+1)(a - b)))^{1/p}`.
///
/// With `u = ln(hi/lo)` the target is `ln(L_p/lo) = N(p)/p` where
/// `N(p) = ln((e^{(p+1)u} - 1)/((p+1)(e^u - 1)))`. For `|p| < 1/2` the
/// numerator is formed as `ln(1 + w) - ln(1 + p)` with
/// `w = e^u (e^{pu} - 1)/(e^u - 1)`, which carries the `O(p)` signal without
/// a difference quotient. Elsewhere the three log terms are combined directly.
pub fn p_logarithmic_mean(pair: PositivePair, p: PExponent) -> f64 {
    if pair.is_tie() {
        return pair.a;
    }
    match p.kind {
        ExponentKind::ZeroLimit => return identric_mean(pair),
        ExponentKind::MinusOneLimit => return logarithmic_mean(pair),
        ExponentKind::Generic => {}
    }
    let p = p.value;
    let (hi, lo) = (pair.hi(), pair.lo());
    let u = pair.log_ratio();
    let s = p + 1.0;
    let ln_em1_u = math::ln_abs_exp_m1(u);
    let log_ratio = if p.abs() < 0.5 {
        let w = math::exp_m1(p * u) * (hi / (hi - lo));
        let ln_1p_w = if w.is_finite() && w > -0.5 { math::ln_1p(w) } else { math::ln_abs_exp_m1(s * u) - ln_em1_u };
        (ln_1p_w - math::ln_1p(p)) / p
    } else {
        (math::ln_abs_exp_m1(s * u) - math::ln(s.abs()) - ln_em1_u) / p
    };
    pair.clamp(lo * math::exp(log_ratio))
}

/// Additive slacks `(G - H, L - G, I - L, A - I)` of the basic mean chain.
pub fn mean_chain_slacks(pair: PositivePair) -> [f64; 4] {
    let h = harmonic_mean(pair);
    let g = geometric_mean(pair);
    let l = logarithmic_mean(pair);
    let i = identric_mean(pair);
    let a = arithmetic_mean(pair);
    [g - h, l - g, i - l, a - i]
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use core::f64::consts::E;

    fn pair(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs()
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(PositivePair::new(0.0, 1.0).is_err());
        assert!(PositivePair::new(1.0, -2.0).is_err());
        assert!(PositivePair::new(f64::NAN, 1.0).is_err());
        assert!(PositivePair::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(arithmetic_mean(pair(1.0, 1.0)), 1.0);
        assert_eq!(arithmetic_mean(pair(4.0, 2.0)), 3.0);
        assert_eq!(arithmetic_mean(pair(4.0, 3.0)), 3.5);
        assert_eq!(arithmetic_mean(pair(f64::MAX, f64::MAX / 2.0)), 0.75 * f64::MAX);
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(geometric_mean(pair(4.0, 1.0)), 2.0);
        // 2·sqrt(2), 50-digit value 2.8284271247461900976...
        assert!(close(geometric_mean(pair(4.0, 2.0)), 2.8284271247461900976, 1e-15));
        assert_eq!(geometric_mean(pair(1e200, 1e200)), 1e200);
        assert!(close(geometric_mean(pair(1e200, 1e100)), 1e150, 1e-15));
        assert!(close(geometric_mean(pair(1e-200, 1e-180)), 1e-190, 1e-15));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_mean(pair(1.0, 1.0)), 1.0);
        assert!(close(harmonic_mean(pair(4.0, 2.0)), 8.0 / 3.0, 1e-15));
        assert!(close(harmonic_mean(pair(4.0, 3.0)), 24.0 / 7.0, 1e-15));
    }

    #[test]
    fn logarithmic_examples() {
        assert!(close(logarithmic_mean(pair(E, 1.0)), E - 1.0, 1e-15));
        // 50-digit oracle: 2.8853900817779268147198493620037842748532919083061
        assert!(close(logarithmic_mean(pair(4.0, 2.0)), 2.8853900817779268147, 1e-15));
        let a = 1.0 + 1e-12;
        assert!(close(logarithmic_mean(pair(a, 1.0)), 1.0 + 5e-13, 1e-13));
        assert_eq!(logarithmic_mean(pair(3.0, 3.0)), 3.0);
    }

    #[test]
    fn identric_examples() {
        assert_eq!(identric_mean(pair(5.0, 5.0)), 5.0);
        // 8/e and 4/e
        assert!(close(identric_mean(pair(4.0, 2.0)), 8.0 / E, 1e-15));
        assert!(close(identric_mean(pair(2.0, 1.0)), 4.0 / E, 1e-15));
        assert!(close(ln_identric_mean(pair(4.0, 2.0)), (8.0f64).ln() - 1.0, 1e-15));
    }

    #[test]
    fn identric_series_matches_direct_at_switch() {
        // t = 1e-3 exactly at a/b = 1.001/0.999
        for &t in &[IDENTRIC_SERIES_THRESHOLD * (1.0 - 1e-9), IDENTRIC_SERIES_THRESHOLD] {
            let p = pair(1.0 + t, 1.0 - t);
            let s = identric_mean_series(p);
            let d = identric_mean_direct(p);
            assert!(close(s, d, 1e-12), "{s} vs {d}");
        }
    }

    #[test]
    fn p_logarithmic_examples() {
        let p = |v| PExponent::new(v).unwrap();
        assert!(close(p_logarithmic_mean(pair(4.0, 2.0), p(1.0)), 3.0, 1e-15));
        assert!(close(p_logarithmic_mean(pair(4.0, 2.0), p(-2.0)), 8f64.sqrt(), 1e-15));
        assert!(close(p_logarithmic_mean(pair(4.0, 2.0), p(1e-9)), 8.0 / E, 1e-6));
        assert_eq!(p(1e-9).kind(), ExponentKind::ZeroLimit);
        assert_eq!(p(-1.0 + 5e-7).kind(), ExponentKind::MinusOneLimit);
        assert_eq!(p(2e-6).kind(), ExponentKind::Generic);
        assert_eq!(p_logarithmic_mean(pair(7.0, 7.0), p(3.0)), 7.0);
        // p = 2: ((a^3 - b^3)/(3(a-b)))^{1/2} = sqrt((a^2+ab+b^2)/3)
        assert!(close(p_logarithmic_mean(pair(4.0, 2.0), p(2.0)), (28.0f64 / 3.0).sqrt(), 1e-15));
        // p = -3: ((a^-2 - b^-2)/(-2(a-b)))^{-1/3} = ((a+b)/(2 a^2 b^2))^{-1/3}
        let v = (6.0f64 / (2.0 * 16.0 * 4.0)).powf(-1.0 / 3.0);
        assert!(close(p_logarithmic_mean(pair(4.0, 2.0), p(-3.0)), v, 1e-14));
    }

    #[test]
    fn p_logarithmic_limits_are_exact_when_snapped() {
        let q = pair(9.0, 2.0);
        assert_eq!(p_logarithmic_mean(q, PExponent::new(0.0).unwrap()), identric_mean(q));
        assert_eq!(p_logarithmic_mean(q, PExponent::new(-1.0).unwrap()), logarithmic_mean(q));
    }

    #[test]
    fn p_logarithmic_near_limits_is_smooth() {
        let q = pair(9.0, 2.0);
        let i = identric_mean(q);
        let l = logarithmic_mean(q);
        let above = p_logarithmic_mean(q, PExponent::new(1.1e-6).unwrap());
        let below = p_logarithmic_mean(q, PExponent::new(-1.1e-6).unwrap());
        assert!(close(above, i, 1e-5) && close(below, i, 1e-5));
        assert!(below < i && i < above);
        let m = p_logarithmic_mean(q, PExponent::new(-1.0 + 1.1e-6).unwrap());
        assert!(close(m, l, 1e-5) && m > l);
    }

    #[test]
    fn chain_examples() {
        assert_eq!(mean_chain_slacks(pair(1.0, 1.0)), [0.0; 4]);
        let s = mean_chain_slacks(pair(4.0, 2.0));
        let expect = [0.16176045807952358, 0.05696295703173672, 0.05764544759361176, 0.05696447062846143];
        for (x, y) in s.iter().zip(expect) {
            assert!(close(*x, y, 1e-13), "{x} vs {y}");
        }
        assert!(mean_chain_slacks(pair(2.0, 1.0)).iter().all(|&v| v > 0.0));
    }

    #[test]
    fn id_parsing() {
        assert_eq!(MeanId::parse("lp"), Some(MeanId::Lp));
        assert_eq!(MeanId::parse("I"), Some(MeanId::I));
        assert_eq!(MeanId::parse("Q"), None);
        let v = evaluate(MeanId::L, pair(4.0, 2.0), None);
        assert_eq!(v.mean_id, MeanId::L);
    }
}
