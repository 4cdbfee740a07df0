//! Slack reports: one signed margin per chain link plus a verdict.

use alloc::string::String;
use alloc::vec::Vec;

/// Default verdict tolerance on normalized link slacks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MarginDomain {
    /// Difference of the compared quantities, normalized by their magnitude.
    Additive,
    /// Difference of logarithms.
    LogRatio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Holds,
    EqualityCase,
    Violated,
}

/// One comparison `lhs < rhs` of a chain, stored as `slack = rhs - lhs`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Link {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Divisor applied before comparing against the tolerance.
    pub scale: f64,
}

impl Link {
    /// Link with slack `rhs - lhs` normalized by `max(|lhs|, |rhs|)`.
    pub fn additive(label: &str, lhs: f64, rhs: f64) -> Self {
        Self { label: label.into(), lhs, rhs, slack: rhs - lhs, scale: lhs.abs().max(rhs.abs()) }
    }

    /// Link with an absolute (unit-scale) slack `rhs - lhs`.
    pub fn absolute(label: &str, lhs: f64, rhs: f64) -> Self {
        Self { label: label.into(), lhs, rhs, slack: rhs - lhs, scale: 1.0 }
    }

    /// Link whose slack was computed separately in a cancellation-free form.
    pub fn with_slack(label: &str, lhs: f64, rhs: f64, slack: f64, scale: f64) -> Self {
        Self { label: label.into(), lhs, rhs, slack, scale }
    }

    pub fn normalized(&self) -> f64 {
        if self.scale > 0.0 && self.scale.is_finite() {
            self.slack / self.scale
        } else {
            self.slack
        }
    }
}

/// Arguments echoed back for replay.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Inputs {
    Pair { a: f64, b: f64 },
    Quad { a: f64, b: f64, c: f64, d: f64 },
    QuadExponents { a: f64, b: f64, c: f64, d: f64, p: f64, q: f64 },
    Index { n: u64 },
    Sample { values: Vec<f64> },
}

/// What the inputs say about the equality manifold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expectation {
    /// The inequality is strict here; `distance` measures how far the inputs
    /// sit from the closest equality manifold and is echoed in the report.
    Strict { distance: f64 },
    /// The inputs satisfy an equality condition; every link must vanish.
    Equality,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlackReport {
    pub id: String,
    pub inputs: Inputs,
    pub domain: MarginDomain,
    pub links: Vec<Link>,
    /// `+1` when the links hold in the stated direction, `-1` when the
    /// direction is reversed by the inputs (discriminant keyed ids).
    pub orientation: f64,
    /// Minimum oriented normalized slack.
    pub margin: f64,
    /// Distance of the inputs from the equality manifold, when they are not
    /// on it.
    pub manifold_distance: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl SlackReport {
    /// Builds the report. On an equality condition every link must vanish to
    /// within `tolerance`. Otherwise the margin decides: above `tolerance` it
    /// holds, within the band it is an equality case (the slack is not
    /// resolvable), below `-tolerance` it is violated. NaN is always a
    /// violation.
    pub fn assess(
        id: &str,
        inputs: Inputs,
        domain: MarginDomain,
        links: Vec<Link>,
        orientation: f64,
        expectation: Expectation,
        tolerance: f64,
    ) -> Self {
        let margin = links.iter().map(|l| orientation * l.normalized()).fold(f64::INFINITY, f64::min);
        let worst_abs = links.iter().map(|l| l.normalized().abs()).fold(0.0, f64::max);
        let verdict = if margin.is_nan() || links.iter().any(|l| l.slack.is_nan()) {
            Verdict::Violated
        } else {
            match expectation {
                Expectation::Equality => {
                    if worst_abs <= tolerance {
                        Verdict::EqualityCase
                    } else {
                        Verdict::Violated
                    }
                }
                Expectation::Strict { .. } => {
                    if margin > tolerance {
                        Verdict::Holds
                    } else if margin >= -tolerance {
                        Verdict::EqualityCase
                    } else {
                        Verdict::Violated
                    }
                }
            }
        };
        let manifold_distance = match expectation {
            Expectation::Strict { distance } => Some(distance),
            Expectation::Equality => None,
        };
        Self { id: id.into(), inputs, domain, links, orientation, margin, manifold_distance, tolerance, verdict }
    }

    pub fn slacks(&self) -> Vec<f64> {
        self.links.iter().map(|l| l.slack).collect()
    }

    pub fn link(&self, label: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.label == label)
    }
}
