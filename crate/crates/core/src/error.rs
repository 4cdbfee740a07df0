use core::fmt;

/// Rejected constructor input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainError {
    /// A coordinate was zero, negative, NaN or infinite.
    NonPositive(f64),
    /// The quadruple violates `a > b >= c > d > 0` (or the relaxed order).
    NotOrdered {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// A Ky Fan sample value outside `(0, 1/2]`.
    OutOfUnitHalf(f64),
    EmptySample,
    /// Non-finite exponent.
    BadExponent(f64),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::NonPositive(x) => write!(f, "expected a positive finite value, got {x}"),
            DomainError::NotOrdered { a, b, c, d } => {
                write!(f, "quadruple ({a}, {b}, {c}, {d}) is not ordered as a > b >= c > d > 0")
            }
            DomainError::OutOfUnitHalf(x) => write!(f, "sample value {x} is outside (0, 1/2]"),
            DomainError::EmptySample => write!(f, "sample is empty"),
            DomainError::BadExponent(p) => write!(f, "exponent {p} is not finite"),
        }
    }
}

impl core::error::Error for DomainError {}

/// Failure while evaluating a ratio function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalError {
    /// The result is not representable in binary64.
    Range { log_value: f64 },
    /// Two evaluation points coincide where distinct points are required.
    DegenerateInterval(f64),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Range { log_value } => {
                write!(f, "result exp({log_value}) overflows binary64")
            }
            EvalError::DegenerateInterval(x) => {
                write!(f, "evaluation points coincide at {x}")
            }
        }
    }
}

impl core::error::Error for EvalError {}
