//! `f(x) = (a^x - b^x)/(c^x - d^x)` and `g = ln f` on an ordered quadruple.
//!
//! With `alpha = ln(a/b)`, `gamma = ln(c/d)` and `beta = ln(b/d)`,
//!
//! ```text
//! g(x) = x·beta + max(x, 0)·(alpha - gamma) + r(|x|·alpha) - r(|x|·gamma)
//! r(t) = ln(1 - e^{-t})
//! ```
//!
//! which is exact for every `x != 0`, never forms `a^x`, and isolates the
//! piecewise-linear part so midpoint slacks of `g` can be taken without
//! cancelling large terms. Inside `|x| <= SINGULAR_WINDOW` the removable
//! singularity at `x = 0` is bridged by its second-order Taylor polynomial.

use crate::error::{DomainError, EvalError};
use crate::math;
use crate::means::{self, PositivePair};

/// Half-width of the window around `x = 0` served by the Taylor branch.
pub const SINGULAR_WINDOW: f64 = 1e-7;

/// Relative tolerance on `|ad - bc| / (ad + bc)` for the zero class.
pub const DISC_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DiscClass {
    Positive,
    Zero,
    Negative,
}

impl DiscClass {
    /// Classifies `ad - bc` under [`DISC_ZERO_TOL`].
    pub fn of(a: f64, b: f64, c: f64, d: f64) -> Self {
        // exact power-of-two rescale keeps the products in range
        let (_, e) = libm::frexp(a);
        let k = libm::ldexp(1.0, -e);
        let (a, b, c, d) = (a * k, b * k, c * k, d * k);
        let bc = b * c;
        let disc = math::fma(a, d, -bc);
        let scale = math::fma(a, d, bc);
        if disc.abs() <= DISC_ZERO_TOL * scale {
            DiscClass::Zero
        } else if disc > 0.0 {
            DiscClass::Positive
        } else {
            DiscClass::Negative
        }
    }

    /// `|ad - bc| / (ad + bc)`, the relative distance from the linear case.
    pub fn relative_distance(a: f64, b: f64, c: f64, d: f64) -> f64 {
        let (_, e) = libm::frexp(a);
        let k = libm::ldexp(1.0, -e);
        let (a, b, c, d) = (a * k, b * k, c * k, d * k);
        let bc = b * c;
        math::fma(a, d, -bc).abs() / math::fma(a, d, bc)
    }

    pub fn sign(&self) -> f64 {
        match self {
            DiscClass::Positive => 1.0,
            DiscClass::Zero => 0.0,
            DiscClass::Negative => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConvexityClass {
    StrictlyConvex,
    StrictlyConcave,
    Linear,
}

/// `a > b >= c > d > 0`, with the logarithms the kernels need cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderedQuad {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    alpha: f64,
    gamma: f64,
    beta: f64,
    disc: DiscClass,
}

fn check_positive(xs: [f64; 4]) -> Result<(), DomainError> {
    for x in xs {
        if !(x.is_finite() && x > 0.0) {
            return Err(DomainError::NonPositive(x));
        }
    }
    Ok(())
}

/// `ln(hi/lo)` for `hi > lo > 0` via the relative gap.
fn log_ratio(hi: f64, lo: f64) -> f64 {
    let gap = (hi - lo) / lo;
    if gap.is_finite() {
        math::ln_1p(gap)
    } else {
        math::ln(hi) - math::ln(lo)
    }
}

impl OrderedQuad {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, DomainError> {
        check_positive([a, b, c, d])?;
        if !(a > b && b >= c && c > d) {
            return Err(DomainError::NotOrdered { a, b, c, d });
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            alpha: log_ratio(a, b),
            gamma: log_ratio(c, d),
            beta: log_ratio(b, d),
            disc: DiscClass::of(a, b, c, d),
        })
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn disc_class(&self) -> DiscClass {
        self.disc
    }

    pub fn upper(&self) -> PositivePair {
        PositivePair::new(self.a, self.b).expect("validated")
    }

    pub fn lower(&self) -> PositivePair {
        PositivePair::new(self.c, self.d).expect("validated")
    }

    /// `ln(a/b)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ln(c/d)`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ln(b/d)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn scaled(&self, lambda: f64) -> Result<Self, DomainError> {
        Self::new(self.a * lambda, self.b * lambda, self.c * lambda, self.d * lambda)
    }
}

/// `a >= b >= c >= d > 0`, accepted only by the mean-ratio chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxedQuad {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    disc: DiscClass,
}

impl RelaxedQuad {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, DomainError> {
        check_positive([a, b, c, d])?;
        if !(a >= b && b >= c && c >= d) {
            return Err(DomainError::NotOrdered { a, b, c, d });
        }
        Ok(Self { a, b, c, d, disc: DiscClass::of(a, b, c, d) })
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn disc_class(&self) -> DiscClass {
        self.disc
    }

    pub fn upper(&self) -> PositivePair {
        PositivePair::new(self.a, self.b).expect("validated")
    }

    pub fn lower(&self) -> PositivePair {
        PositivePair::new(self.c, self.d).expect("validated")
    }
}

impl From<OrderedQuad> for RelaxedQuad {
    fn from(q: OrderedQuad) -> Self {
        Self { a: q.a, b: q.b, c: q.c, d: q.d, disc: q.disc }
    }
}

/// Which evaluation route to use for `g`; [`Branch::Auto`] picks by
/// [`SINGULAR_WINDOW`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Auto,
    Direct,
    Singular,
}

/// `g'(0) = ln(G(a,b)/G(c,d)) = beta + (alpha - gamma)/2`.
fn g_prime_at_zero(q: &OrderedQuad) -> f64 {
    q.beta + 0.5 * (q.alpha - q.gamma)
}

/// `r(|x| alpha) - r(|x| gamma)`, the curved part of `g`. Continuous at 0,
/// where it equals `ln(alpha/gamma)`.
fn curved_part(q: &OrderedQuad, x: f64) -> f64 {
    let t = x.abs();
    if t <= SINGULAR_WINDOW {
        let (al, ga) = (q.alpha, q.gamma);
        math::ln(al / ga) - 0.5 * t * (al - ga) + t * t * (al * al - ga * ga) / 24.0
    } else {
        math::ln_one_minus_exp_neg(t * q.alpha) - math::ln_one_minus_exp_neg(t * q.gamma)
    }
}

pub fn eval_g_with(q: &OrderedQuad, x: f64, branch: Branch) -> f64 {
    let singular = match branch {
        Branch::Auto => x.abs() <= SINGULAR_WINDOW,
        Branch::Direct => false,
        Branch::Singular => true,
    };
    if singular {
        let (al, ga) = (q.alpha, q.gamma);
        math::ln(al / ga) + x * g_prime_at_zero(q) + x * x * (al * al - ga * ga) / 24.0
    } else if x == 0.0 {
        math::ln(q.alpha / q.gamma)
    } else {
        let t = x.abs();
        x * q.beta
            + x.max(0.0) * (q.alpha - q.gamma)
            + (math::ln_one_minus_exp_neg(t * q.alpha) - math::ln_one_minus_exp_neg(t * q.gamma))
    }
}

pub fn eval_g(q: &OrderedQuad, x: f64) -> f64 {
    eval_g_with(q, x, Branch::Auto)
}

fn checked_exp(log_value: f64) -> Result<f64, EvalError> {
    let v = math::exp(log_value);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Range { log_value })
    }
}

pub fn eval_f(q: &OrderedQuad, x: f64) -> Result<f64, EvalError> {
    checked_exp(eval_g(q, x))
}

/// `g'(x)`. For `x != 0` this is `(1/x) ln(I(a^x,b^x)/I(c^x,d^x))`, rewritten
/// as `g'(0) + (B(x alpha) - B(x gamma))/x` with `B` the Bernoulli remainder
/// so that no `1/x` terms cancel.
pub fn eval_g_prime(q: &OrderedQuad, x: f64) -> f64 {
    let base = g_prime_at_zero(q);
    if x == 0.0 {
        return base;
    }
    base + (math::bernoulli_remainder(x * q.alpha) - math::bernoulli_remainder(x * q.gamma)) / x
}

pub fn eval_f_prime(q: &OrderedQuad, x: f64) -> Result<f64, EvalError> {
    let gp = eval_g_prime(q, x);
    let lg = eval_g(q, x) + math::ln(gp);
    checked_exp(lg)
}

/// The log-derivative through identric means of the powered pairs, i.e. the
/// closed form `(1/x) ln(I(a^x, b^x)/I(c^x, d^x))` (and `ln(G/G')` at 0)
/// taken literally. Slower and less accurate for tiny `|x|` than
/// [`eval_g_prime`]; kept as an independent cross-check.
pub fn log_derivative_via_means(q: &OrderedQuad, x: f64) -> Result<f64, EvalError> {
    if x == 0.0 {
        let g1 = means::geometric_mean(q.upper());
        let g2 = means::geometric_mean(q.lower());
        return Ok(math::ln(g1 / g2));
    }
    let pow = |v: f64| math::powf(v, x);
    let [a, b, c, d] = q.coords();
    let top = PositivePair::new(pow(a), pow(b)).map_err(|_| EvalError::Range { log_value: x * math::ln(a) })?;
    let bot = PositivePair::new(pow(c), pow(d)).map_err(|_| EvalError::Range { log_value: x * math::ln(d) })?;
    Ok((means::ln_identric_mean(top) - means::ln_identric_mean(bot)) / x)
}

pub fn classify_g(q: &OrderedQuad) -> ConvexityClass {
    match q.disc {
        DiscClass::Positive => ConvexityClass::StrictlyConvex,
        DiscClass::Negative => ConvexityClass::StrictlyConcave,
        DiscClass::Zero => ConvexityClass::Linear,
    }
}

/// `(f(x2) - f(x1)) / (x2 - x1)`.
pub fn secant_slope(q: &OrderedQuad, x1: f64, x2: f64) -> Result<f64, EvalError> {
    if x1 == x2 {
        return Err(EvalError::DegenerateInterval(x1));
    }
    Ok((eval_f(q, x2)? - eval_f(q, x1)?) / (x2 - x1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RatioFn {
    F,
    G,
}

/// `(phi(x1) + phi(x2))/2 - phi((x1 + x2)/2)` for `phi` in `{f, g}`.
pub fn midpoint_convexity_slack(which: RatioFn, q: &OrderedQuad, x1: f64, x2: f64) -> Result<f64, EvalError> {
    if x1 == x2 {
        return Err(EvalError::DegenerateInterval(x1));
    }
    let m = 0.5 * (x1 + x2);
    match which {
        RatioFn::F => {
            let gm = eval_g(q, m);
            let fm = checked_exp(gm)?;
            let e1 = math::exp_m1(eval_g(q, x1) - gm);
            let e2 = math::exp_m1(eval_g(q, x2) - gm);
            // keep the outer values representable too
            checked_exp(eval_g(q, x1).max(eval_g(q, x2)))?;
            Ok(fm * 0.5 * (e1 + e2))
        }
        RatioFn::G => {
            // x·beta is affine and drops out; the hinge max(x,0)(alpha-gamma)
            // contributes only when the points straddle zero.
            let hinge = 0.5 * (x1.max(0.0) + x2.max(0.0)) - m.max(0.0);
            let linear = (q.alpha - q.gamma) * hinge;
            let curved = 0.5 * (curved_part(q, x1) + curved_part(q, x2)) - curved_part(q, m);
            Ok(linear + curved)
        }
    }
}

/// Same slack on the quad scaled by `lambda`; used by invariance checks.
pub fn scaled_quad(q: &OrderedQuad, lambda: f64) -> Result<OrderedQuad, DomainError> {
    q.scaled(lambda)
}
