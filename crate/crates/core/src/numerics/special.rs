//! Error function family.
//!
//! Rational Chebyshev approximations (W. J. Cody, Math. Comp. 23, 1969) on
//! the three intervals |x| <= 0.46875, 0.46875 < |x| <= 4 and |x| > 4. The
//! only transcendental used is `exp`, so results are stable across platforms.
//! `erfcx` never forms `exp(x^2)` for positive arguments.

use std::f64::consts::PI;

const THRESH: f64 = 0.46875;
/// 1/sqrt(pi)
const FRAC_1_SQRT_PI: f64 = 5.641_895_835_477_562_869_5e-1;
/// Above this erfc underflows to zero.
const XBIG: f64 = 26.543;
/// Above this 1 - 1/(2x^2) == 1 in double precision.
const XHUGE: f64 = 6.71e7;
/// Below this 2 exp(x^2) overflows.
const XNEG: f64 = -26.628;

const A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_56e2,
    3.774_852_376_853_020_21e2,
    3.209_377_589_138_469_47e3,
    1.857_777_061_846_031_53e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_09e1,
    2.440_246_379_344_441_73e2,
    1.282_616_526_077_372_28e3,
    2.844_236_833_439_170_62e3,
];
const C: [f64; 9] = [
    5.641_884_969_886_700_89e-1,
    8.883_149_794_388_375_94e0,
    6.611_919_063_714_162_95e1,
    2.986_351_381_974_001_31e2,
    8.819_522_212_417_690_9e2,
    1.712_047_612_634_070_58e3,
    2.051_078_377_826_071_47e3,
    1.230_339_354_797_997_25e3,
    2.153_115_354_744_038_46e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_47e1,
    1.176_939_508_913_124_99e2,
    5.371_811_018_620_098_58e2,
    1.621_389_574_566_690_19e3,
    3.290_799_235_733_459_63e3,
    4.362_619_090_143_247_16e3,
    3.439_367_674_143_721_64e3,
    1.230_339_354_803_749_42e3,
];
const P: [f64; 6] = [
    3.053_266_349_612_323_44e-1,
    3.603_448_999_498_044_39e-1,
    1.257_817_261_112_292_46e-1,
    1.608_378_514_874_227_66e-2,
    6.587_491_615_298_378_03e-4,
    1.631_538_713_730_209_78e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_42e0,
    1.872_952_849_923_460_47e0,
    5.279_051_029_514_284_12e-1,
    6.051_834_131_244_131_91e-2,
    2.335_204_976_268_691_85e-3,
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Erf,
    Erfc,
    Erfcx,
}

/// erf(y) for |y| <= THRESH.
fn erf_small(y: f64) -> f64 {
    let ysq = if y.abs() > f64::EPSILON * 0.5 { y * y } else { 0.0 };
    let mut num = A[4] * ysq;
    let mut den = ysq;
    for i in 0..3 {
        num = (num + A[i]) * ysq;
        den = (den + B[i]) * ysq;
    }
    y * (num + A[3]) / (den + B[3])
}

/// erfcx(y) for THRESH < y <= 4.
fn erfcx_mid(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    (num + C[7]) / (den + D[7])
}

/// erfcx(y) for y > 4.
fn erfcx_large(y: f64) -> f64 {
    if y >= XHUGE {
        return FRAC_1_SQRT_PI / y;
    }
    let ysq = 1.0 / (y * y);
    let mut num = P[5] * ysq;
    let mut den = ysq;
    for i in 0..4 {
        num = (num + P[i]) * ysq;
        den = (den + Q[i]) * ysq;
    }
    let r = ysq * (num + P[4]) / (den + Q[4]);
    (FRAC_1_SQRT_PI - r) / y
}

/// exp(-y^2) with the argument split so that the rounding of y^2 does not
/// amplify into the result.
fn exp_neg_sq(y: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp()
}

fn exp_sq(y: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (ysq * ysq).exp() * del.exp()
}

fn calerf(x: f64, kind: Kind) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        let e = erf_small(x);
        return match kind {
            Kind::Erf => e,
            Kind::Erfc => 1.0 - e,
            Kind::Erfcx => (x * x).exp() * (1.0 - e),
        };
    }

    // For y > THRESH compute erfc(y) (or erfcx(y)) first, then fix the sign.
    let tail = if y <= 4.0 {
        let r = erfcx_mid(y);
        if kind == Kind::Erfcx {
            r
        } else {
            exp_neg_sq(y) * r
        }
    } else if kind != Kind::Erfcx && y >= XBIG {
        0.0
    } else {
        let r = erfcx_large(y);
        if kind == Kind::Erfcx {
            r
        } else {
            exp_neg_sq(y) * r
        }
    };

    match kind {
        Kind::Erf => {
            let r = (0.5 - tail) + 0.5;
            if x < 0.0 {
                -r
            } else {
                r
            }
        }
        Kind::Erfc => {
            if x < 0.0 {
                2.0 - tail
            } else {
                tail
            }
        }
        Kind::Erfcx => {
            if x >= 0.0 {
                tail
            } else if x < XNEG {
                f64::MAX
            } else {
                let e = exp_sq(x);
                (e + e) - tail
            }
        }
    }
}

/// The error function (2/sqrt(pi)) * integral_0^x exp(-y^2) dy.
pub fn erf(x: f64) -> f64 {
    calerf(x, Kind::Erf)
}

/// Complementary error function 1 - erf(x), accurate in the right tail.
pub fn erfc(x: f64) -> f64 {
    calerf(x, Kind::Erfc)
}

/// Scaled complementary error function exp(x^2) * erfc(x).
///
/// For x > 0 it decays like 1/(x sqrt(pi)) and is evaluated without any
/// overflowing intermediate. Below x = -26.628, where 2 exp(x^2) is not
/// representable, the result saturates at `f64::MAX`.
pub fn erfcx(x: f64) -> f64 {
    calerf(x, Kind::Erfcx)
}

/// d/dx erfcx(x) = 2x erfcx(x) - 2/sqrt(pi).
pub fn erfcx_derivative(x: f64) -> f64 {
    2.0 * x * erfcx(x) - 2.0 / PI.sqrt()
}
