//! Counter-based sampling: every draw is a pure function of
//! `(seed, stream, index)`, so samples can be generated in any order and on
//! any number of threads.

use meanbound_core::kyfan::KyFanSample;
use meanbound_core::ratio::{DiscClass, OrderedQuad};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Lower end of the Ky Fan sampling interval `(EPS, 1/2]`.
pub const KYFAN_EPS: f64 = 1e-6;

/// Probability of forcing `b = c` in quad sampling.
pub const TIE_PROBABILITY: f64 = 0.2;

/// Minimum `|ad - bc|/(ad + bc)` for quads drawn under a strict sign
/// constraint.
pub const DISC_SEPARATION: f64 = 1e-6;

/// Minimum `a/b - 1` for sampled pairs.
pub const PAIR_SEPARATION: f64 = 1e-6;

/// Minimum `|p - q|` for sampled exponent pairs.
pub const EXPONENT_SEPARATION: f64 = 0.05;

/// Exponents are drawn uniformly from `[-EXPONENT_RANGE, EXPONENT_RANGE]`.
pub const EXPONENT_RANGE: f64 = 3.0;

pub const MAX_REDRAWS: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConstraint {
    #[default]
    Any,
    Positive,
    Negative,
    Zero,
}

impl SignConstraint {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "any" => Some(Self::Any),
            "positive" | "pos" => Some(Self::Positive),
            "negative" | "neg" => Some(Self::Negative),
            "zero" => Some(Self::Zero),
            _ => None,
        }
    }
}

/// Log-uniform bounds for quad and pair coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRange {
    pub lo: f64,
    pub hi: f64,
}

impl Default for LogRange {
    fn default() -> Self {
        Self { lo: 1e-3, hi: 1e3 }
    }
}

impl LogRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self, Error> {
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Usage(format!("invalid sampling range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let (l, h) = (self.lo.ln(), self.hi.ln());
        (l + (h - l) * rng.gen::<f64>()).exp().clamp(self.lo, self.hi)
    }
}

/// Stable 64-bit tag for a named stream (FNV-1a).
pub fn stream_tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Generator for sample `index` of stream `tag`; independent of any other
/// `(tag, index)`.
pub fn rng_for(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

fn sorted_desc<const N: usize>(mut v: [f64; N]) -> [f64; N] {
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Strict quad `a > b >= c > d > 0` under a sign constraint.
pub fn sample_quad(rng: &mut ChaCha8Rng, sign: SignConstraint, range: LogRange) -> Result<OrderedQuad, Error> {
    for _ in 0..MAX_REDRAWS {
        let tie = rng.gen::<f64>() < TIE_PROBABILITY;
        let candidate = if sign == SignConstraint::Zero {
            let [a, b, c] = sorted_desc([range.draw(rng), range.draw(rng), range.draw(rng)]);
            let c = if tie { b } else { c };
            [a, b, c, b * c / a]
        } else {
            let [a, b, c, d] = sorted_desc([range.draw(rng), range.draw(rng), range.draw(rng), range.draw(rng)]);
            [a, b, if tie { b } else { c }, d]
        };
        let [a, b, c, d] = candidate;
        let Ok(quad) = OrderedQuad::new(a, b, c, d) else { continue };
        let class = quad.disc_class();
        let separated = DiscClass::relative_distance(a, b, c, d) >= DISC_SEPARATION;
        let accept = match sign {
            SignConstraint::Any => true,
            SignConstraint::Zero => class == DiscClass::Zero,
            SignConstraint::Positive => class == DiscClass::Positive && separated,
            SignConstraint::Negative => class == DiscClass::Negative && separated,
        };
        if accept {
            return Ok(quad);
        }
    }
    Err(Error::Sampling(format!("no quad satisfying {sign:?} after {MAX_REDRAWS} draws")))
}

/// Pair `a > b` with `a/b - 1 >= PAIR_SEPARATION`.
pub fn sample_pair(rng: &mut ChaCha8Rng, range: LogRange) -> Result<(f64, f64), Error> {
    for _ in 0..MAX_REDRAWS {
        let [a, b] = sorted_desc([range.draw(rng), range.draw(rng)]);
        if (a - b) / b >= PAIR_SEPARATION {
            return Ok((a, b));
        }
    }
    Err(Error::Sampling("no separated pair after the redraw limit".into()))
}

/// Exponents `(p, q)` away from the limit points and from each other.
pub fn sample_exponents(rng: &mut ChaCha8Rng) -> Result<(f64, f64), Error> {
    let away = |v: f64| v.abs() > 1e-3 && (v + 1.0).abs() > 1e-3;
    for _ in 0..MAX_REDRAWS {
        let p = rng.gen_range(-EXPONENT_RANGE..=EXPONENT_RANGE);
        let q = rng.gen_range(-EXPONENT_RANGE..=EXPONENT_RANGE);
        if away(p) && away(q) && (p - q).abs() >= EXPONENT_SEPARATION {
            return Ok((p, q));
        }
    }
    Err(Error::Sampling("no exponent pair after the redraw limit".into()))
}

/// Integer log-uniform in `[1, max]`.
pub fn sample_index(rng: &mut ChaCha8Rng, max: u64) -> u64 {
    let u: f64 = rng.gen();
    ((max as f64).powf(u).floor() as u64).clamp(1, max)
}

/// `n` values uniform in `(KYFAN_EPS, 1/2]`.
pub fn sample_kyfan(rng: &mut ChaCha8Rng, n: usize) -> KyFanSample {
    let values = (0..n).map(|_| 0.5 - (0.5 - KYFAN_EPS) * rng.gen::<f64>()).collect();
    KyFanSample::new(values).expect("values lie in (0, 1/2]")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_pure_functions_of_seed_and_index() {
        let q1 = sample_quad(&mut rng_for(7, 1, 99), SignConstraint::Any, LogRange::default()).unwrap();
        let q2 = sample_quad(&mut rng_for(7, 1, 99), SignConstraint::Any, LogRange::default()).unwrap();
        assert_eq!(q1.coords(), q2.coords());
        let q3 = sample_quad(&mut rng_for(7, 1, 100), SignConstraint::Any, LogRange::default()).unwrap();
        assert_ne!(q1.coords(), q3.coords());
        let q4 = sample_quad(&mut rng_for(8, 1, 99), SignConstraint::Any, LogRange::default()).unwrap();
        assert_ne!(q1.coords(), q4.coords());
    }

    #[test]
    fn sign_constraints_are_honoured() {
        for i in 0..2000 {
            let z = sample_quad(&mut rng_for(3, 0, i), SignConstraint::Zero, LogRange::default()).unwrap();
            let [a, b, c, d] = z.coords();
            assert!(DiscClass::relative_distance(a, b, c, d) <= 1e-12);
            let n = sample_quad(&mut rng_for(3, 1, i), SignConstraint::Negative, LogRange::default()).unwrap();
            assert_eq!(n.disc_class(), DiscClass::Negative);
            let p = sample_quad(&mut rng_for(3, 2, i), SignConstraint::Positive, LogRange::default()).unwrap();
            assert_eq!(p.disc_class(), DiscClass::Positive);
        }
    }

    #[test]
    fn ties_occur_at_roughly_the_declared_rate() {
        let ties = (0..5000)
            .filter(|&i| {
                let [_, b, c, _] =
                    sample_quad(&mut rng_for(11, 0, i), SignConstraint::Any, LogRange::default()).unwrap().coords();
                b == c
            })
            .count();
        assert!((800..1200).contains(&ties), "{ties}");
    }

    #[test]
    fn kyfan_values_in_range() {
        for i in 0..200 {
            let s = sample_kyfan(&mut rng_for(5, 0, i), 20);
            assert!(s.values().iter().all(|&x| x > KYFAN_EPS && x <= 0.5));
        }
    }

    #[test]
    fn index_sampling_covers_range() {
        let mut rng = rng_for(1, 2, 3);
        let v: Vec<u64> = (0..10_000).map(|_| sample_index(&mut rng, 1_000_000)).collect();
        assert!(v.iter().all(|&n| (1..=1_000_000).contains(&n)));
        assert!(v.iter().any(|&n| n < 10) && v.iter().any(|&n| n > 100_000));
    }
}
