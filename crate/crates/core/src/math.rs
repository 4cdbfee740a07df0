//! Thin layer over `libm` plus the cancellation-free helpers shared by the
//! mean and ratio kernels.

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn fma(x: f64, y: f64, z: f64) -> f64 {
    libm::fma(x, y, z)
}

/// `ln(1 - e^{-t})` for `t > 0`.
///
/// Switches between the `expm1` and `log1p` forms at `ln 2`, which keeps the
/// result accurate to a few ulp over the whole half line.
pub(crate) fn ln_one_minus_exp_neg(t: f64) -> f64 {
    debug_assert!(t > 0.0);
    if t <= core::f64::consts::LN_2 {
        ln(-exp_m1(-t))
    } else {
        ln_1p(-exp(-t))
    }
}

/// `ln |e^z - 1|` for `z != 0`, without overflow for large `|z|`.
pub(crate) fn ln_abs_exp_m1(z: f64) -> f64 {
    z.max(0.0) + ln_one_minus_exp_neg(z.abs())
}

/// `z / (e^z - 1) - 1 + z/2`, the even remainder of the Bernoulli generating
/// function. Series below `|z| = 0.5`, closed form above.
pub(crate) fn bernoulli_remainder(z: f64) -> f64 {
    if z.abs() < 0.5 {
        let z2 = z * z;
        // B_{2k} / (2k)! for k = 1..6
        const C: [f64; 6] =
            [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0];
        let mut acc = 0.0;
        for &c in C.iter().rev() {
            acc = acc * z2 + c;
        }
        acc * z2
    } else {
        let em1 = exp_m1(z);
        let head = if em1.is_infinite() { 0.0 } else { z / em1 };
        head - 1.0 + 0.5 * z
    }
}

/// `d - ln(1 + d)` for `d > -1`, accurate relative to its own (nonnegative)
/// value.
pub(crate) fn excess_over_ln_1p(d: f64) -> f64 {
    if d.abs() < 0.125 {
        // sum_{k>=2} (-1)^k d^k / k
        let mut term = d * d;
        let mut acc = 0.0;
        let mut k = 2u32;
        loop {
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let contrib = sign * term / k as f64;
            acc += contrib;
            if contrib.abs() <= acc.abs() * 1e-18 || k > 40 {
                break;
            }
            term *= d;
            k += 1;
        }
        acc
    } else {
        d - ln_1p(d)
    }
}

/// `atanh(t) - t` for `|t| < 1`, accurate relative to its own value.
pub(crate) fn atanh_excess(t: f64) -> f64 {
    if t.abs() < 0.125 {
        // sum_{k>=1} t^(2k+1) / (2k+1)
        let t2 = t * t;
        let mut term = t * t2;
        let mut acc = 0.0;
        let mut k = 3u32;
        loop {
            let contrib = term / k as f64;
            acc += contrib;
            if contrib.abs() <= acc.abs() * 1e-18 || k > 60 {
                break;
            }
            term *= t2;
            k += 2;
        }
        acc
    } else {
        libm::atanh(t) - t
    }
}

/// Horner evaluation of `sum coeffs[i] * y^i`.
pub(crate) fn horner(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn ln_abs_exp_m1_matches_direct_in_safe_range() {
        for &z in &[-30.0, -2.0, -0.3, -1e-6, 1e-6, 0.3, 2.0, 30.0] {
            let direct = ln(exp_m1(z).abs());
            assert!((ln_abs_exp_m1(z) - direct).abs() <= 1e-14 * direct.abs().max(1.0));
        }
        // no overflow
        assert!((ln_abs_exp_m1(2000.0) - 2000.0).abs() < 1e-12);
        assert!(ln_abs_exp_m1(-2000.0).abs() < 1e-300);
    }

    #[test]
    fn bernoulli_remainder_is_continuous_at_switch() {
        let below = bernoulli_remainder(0.5 - 1e-15);
        let z: f64 = 0.5;
        let direct = z / exp_m1(z) - 1.0 + 0.5 * z;
        assert!((below - direct).abs() < 1e-15);
        let z = -0.5f64;
        let direct = z / exp_m1(z) - 1.0 + 0.5 * z;
        assert!((bernoulli_remainder(-0.5 + 1e-15) - direct).abs() < 1e-15);
    }

    #[test]
    fn excess_over_ln_1p_small_and_large() {
        let d = 1e-5;
        // d^2/2 - d^3/3 + d^4/4
        let expect = d * d / 2.0 - d * d * d / 3.0 + d * d * d * d / 4.0;
        assert!((excess_over_ln_1p(d) - expect).abs() <= 1e-15 * expect);
        let d = 0.2;
        assert!((excess_over_ln_1p(d) - (d - ln_1p(d))).abs() < 1e-16);
        let s = excess_over_ln_1p(0.124999);
        let t = 0.124999 - ln_1p(0.124999);
        assert!((s - t).abs() < 1e-15 * t);
    }

    #[test]
    fn atanh_excess_is_continuous_and_small_t_accurate() {
        let t: f64 = 0.125;
        let below = atanh_excess(t - 1e-16);
        assert!((below - (libm::atanh(t) - t)).abs() <= 1e-13 * below);
        // t^3/3 + t^5/5 leading terms
        let tiny: f64 = 1e-5;
        let want = tiny * tiny * tiny / 3.0 + tiny * tiny * tiny * tiny * tiny / 5.0;
        assert!((atanh_excess(tiny) - want).abs() <= 1e-15 * want);
        assert_eq!(atanh_excess(0.0), 0.0);
    }
}
