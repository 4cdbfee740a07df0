//! The integer family obtained from the quad `(n+2, n+1, n+1, n)`.
//!
//! Every member tends to 1 as `n` grows and the slacks shrink like `n^-3`,
//! so members are carried as excesses over 1 and the slacks switch to a
//! truncated series in `y = 1/n` once the direct differences start losing
//! digits.

use crate::math::{exp_m1, horner, ln_1p};
use crate::report::Link;

/// First `n` that uses the series form of the slacks.
pub const SERIES_FROM: u64 = 64;

// Exact rational coefficients of each slack in powers of y = 1/n, rounded to
// f64; the y^15 remainder is below 1e-18 relative for n >= 64.
const SERIES_L1: [f64; 15] = [
    0.0,
    0.0,
    0.0,
    0.3333333333333333,
    -1.0,
    2.2,
    -4.333333333333333,
    8.142857142857142,
    -15.0,
    27.444444444444443,
    -50.2,
    92.0909090909091,
    -169.66666666666666,
    314.0769230769231,
    -584.1428571428571,
];
const SERIES_L2: [f64; 15] = [
    0.0,
    0.0,
    0.5,
    -0.9166666666666666,
    1.5416666666666667,
    -2.6013888888888888,
    4.4631944444444445,
    -7.789765211640212,
    13.801182208994708,
    -24.76159694664903,
    44.894833691578484,
    -82.11470510954452,
    151.30497847293202,
    -280.5530969956517,
    523.025588914132,
];
const SERIES_L3: [f64; 15] = [
    0.0,
    1.0,
    -0.6666666666666666,
    0.75,
    -1.0638888888888889,
    1.6875,
    -2.837466931216931,
    4.934837962962963,
    -8.769977402998236,
    15.822494764109347,
    -28.869496047612365,
    53.14119449496619,
    -98.52066231600175,
    183.74039855847087,
    -344.4052483056287,
];
const SERIES_L4: [f64; 15] = [
    0.0,
    0.0,
    0.0,
    0.08333333333333333,
    -0.16666666666666666,
    0.2625,
    -0.40069444444444446,
    0.624454365079365,
    -1.0022817460317461,
    1.650803295855379,
    -2.7748626267636682,
    4.739195645693042,
    -8.198272789694231,
    14.333217450991974,
    -25.28614266063694,
];
const SERIES_L5: [f64; 15] = [
    0.0,
    0.0,
    0.0,
    0.08333333333333333,
    -0.16666666666666666,
    0.27361111111111114,
    -0.43819444444444444,
    0.7130125661375661,
    -1.188723544973545,
    2.0281379519400353,
    -3.5283505566578484,
    6.23603177317153,
    -11.162927122790403,
    20.19036448965443,
    -36.8310034977758,
];
const SERIES_L6: [f64; 15] = [
    0.0,
    0.0,
    0.0,
    0.08333333333333333,
    -0.16666666666666666,
    0.2763888888888889,
    -0.4423611111111111,
    0.7094080687830688,
    -1.152744708994709,
    1.9030900022045856,
    -3.1909274415784834,
    5.426139768635428,
    -9.342413368765365,
    16.260353606228595,
    -28.568766927524766,
];
const SERIES_L7: [f64; 15] = [
    0.0,
    0.0,
    0.0,
    0.25,
    -0.5,
    0.8125,
    -1.21875,
    1.734375,
    -2.34375,
    2.95703125,
    -3.318359375,
    2.8193359375,
    -0.12841796875,
    -7.535400390625,
    25.8128662109375,
];

/// Members of the three chains as excesses over 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceMembers {
    /// `(n+2)/(n+1) - 1`.
    pub s1: f64,
    /// `ln(G(a,b)/G(c,d))`, the excess of `1 + ln(G/G')`.
    pub s2: f64,
    /// `L(a,b)/L(c,d) - 1`.
    pub s3: f64,
    /// Left member of the single link chain.
    pub left16: f64,
    pub t1: f64,
    pub t2: f64,
    pub t4: f64,
    pub t5: f64,
}

pub fn members(n: u64) -> SequenceMembers {
    let nf = n as f64;
    let inv_n1 = 1.0 / (nf + 1.0);
    let ln_n1 = ln_1p(inv_n1);
    let s1 = inv_n1;
    let s2 = 0.5 * ln_1p(2.0 / nf);
    let s3 = ln_1p(1.0 / (nf * (nf + 2.0))) / ln_n1;
    let d = ln_n1 + (nf + 1.0) * ln_n1 - nf * ln_1p(1.0 / nf);
    let left16 = s2 / d - 1.0;
    SequenceMembers {
        s1,
        s2,
        s3,
        left16,
        t1: 2.0 / (2.0 * nf + 1.0),
        t2: exp_m1(d),
        t4: exp_m1(s2),
        t5: (2.0 * nf + 2.0) / (nf * (2.0 * nf + 3.0)),
    }
}

/// The seven slacks `[L1, .., L7]`: two links of the first chain, one of the
/// second, four of the third.
pub fn slacks(n: u64) -> [f64; 7] {
    if n >= SERIES_FROM {
        let y = 1.0 / n as f64;
        [
            horner(&SERIES_L1, y),
            horner(&SERIES_L2, y),
            horner(&SERIES_L3, y),
            horner(&SERIES_L4, y),
            horner(&SERIES_L5, y),
            horner(&SERIES_L6, y),
            horner(&SERIES_L7, y),
        ]
    } else {
        let m = members(n);
        [m.s2 - m.s1, m.s3 - m.s2, m.s3 - m.left16, m.t2 - m.t1, m.s3 - m.t2, m.t4 - m.s3, m.t5 - m.t4]
    }
}

fn link(label: &str, lo: f64, hi: f64, slack: f64) -> Link {
    Link::with_slack(label, 1.0 + lo, 1.0 + hi, slack, lo.abs().max(hi.abs()))
}

/// Links grouped per chain; slacks are normalized by the larger excess.
pub fn chain_links(n: u64) -> [alloc::vec::Vec<Link>; 3] {
    let m = members(n);
    let s = slacks(n);
    [
        alloc::vec![link("EQ15_1", m.s1, m.s2, s[0]), link("EQ15_2", m.s2, m.s3, s[1])],
        alloc::vec![link("EQ16", m.left16, m.s3, s[2])],
        alloc::vec![
            link("EQ17_1", m.t1, m.t2, s[3]),
            link("EQ17_2", m.t2, m.s3, s[4]),
            link("EQ17_3", m.s3, m.t4, s[5]),
            link("EQ17_4", m.t4, m.t5, s[6]),
        ],
    ]
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    // 60-digit evaluations of the exact closed forms
    const FROZEN: [(u64, [f64; 7]); 5] = [
        (
            1,
            [
                0.049306144334054845698,
                0.16020514701739993128,
                0.65971082692547367637,
                0.020833333333333333333,
                0.022011291351454776976,
                0.022539516217422516551,
                0.067949192431122706473,
            ],
        ),
        (
            63,
            [
                1.2717520522113792018e-6,
                0.00012240565243523278972,
                0.015707981007577721384,
                3.2294890334095857131e-7,
                3.2295952111108436371e-7,
                3.2296225263920662317e-7,
                9.6887160124798904473e-7,
            ],
        ),
        (
            64,
            [
                1.2139487614595701295e-6,
                0.00011866303765954285311,
                0.015465038724971264805,
                3.0819611115672454461e-7,
                3.0820593298225206683e-7,
                3.082084586580188585e-7,
                9.246113446495990031e-7,
            ],
        ),
        (
            1000,
            [
                3.3233552900812788454e-10,
                4.9908487240306652957e-7,
                0.0009993340822711291119,
                8.3166928766595675954e-11,
                8.3166939840295159201e-11,
                8.3166942613902701668e-11,
                2.495008112829820342e-10,
            ],
        ),
        (
            1_000_000,
            [
                3.33332333335533329e-19,
                4.999990833348749974e-13,
                9.9999933333408333227e-7,
                8.3333166666929166266e-20,
                8.333316666694027734e-20,
                8.3333166666943055113e-20,
                2.4999950000081249878e-19,
            ],
        ),
    ];

    #[test]
    fn slacks_match_frozen_values() {
        for (n, want) in FROZEN {
            let got = slacks(n);
            let tol = if n < SERIES_FROM { 1e-9 } else { 1e-12 };
            for (k, (g, w)) in got.iter().zip(want.iter()).enumerate() {
                assert!(((g - w) / w).abs() <= tol, "n={n} link {k}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn first_members() {
        let m = members(1);
        assert!((1.0 + m.s1 - 1.5).abs() < 1e-15);
        assert!((1.0 + m.s2 - 1.549306144334055).abs() < 1e-6);
        assert!((1.0 + m.s3 - 1.709511291351455).abs() < 1e-6);
        assert!((1.0 + m.t1 - 5.0 / 3.0).abs() < 1e-15);
        assert!((1.0 + m.t2 - 1.6875).abs() < 1e-14);
        assert!((1.0 + m.t4 - 3f64.sqrt()).abs() < 1e-15);
        assert!((1.0 + m.t5 - 1.8).abs() < 1e-15);
    }

    #[test]
    fn series_and_direct_agree_at_switch() {
        let y = 1.0 / SERIES_FROM as f64;
        let series = [horner(&SERIES_L1, y), horner(&SERIES_L4, y), horner(&SERIES_L7, y)];
        let m = members(SERIES_FROM);
        let direct = [m.s2 - m.s1, m.t2 - m.t1, m.t5 - m.t4];
        for (s, d) in series.iter().zip(direct.iter()) {
            assert!(((s - d) / s).abs() < 1e-8);
        }
    }

    #[test]
    fn positive_across_magnitudes() {
        let mut n = 1u64;
        while n <= 10_000_000_000 {
            for n in [n, n + 1, n + 7] {
                assert!(slacks(n).iter().all(|&s| s > 0.0), "n={n}");
            }
            n *= 3;
        }
    }
}
