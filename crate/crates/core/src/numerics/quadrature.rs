//! Adaptive 15-point Gauss-Kronrod quadrature with global bisection.

use crate::error::{Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter(format!(
                "quadrature spec needs abs_tol > 0, rel_tol > 0, max_subdivisions >= 1 (got {self:?})"
            )));
        }
        Ok(())
    }

    /// Same relative target, absolute target replaced.
    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadratureSpec { abs_tol, ..self }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 200,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    /// Estimate of the integral of |f|.
    pub magnitude: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// 7-point Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    res_abs: f64,
}

/// Per-segment error estimates never drop below 50 eps * integral(|f|).
/// Twice that is treated as roundoff-limited.
const ROUNDOFF_FLOOR: f64 = 100.0;

/// One 15-point Kronrod evaluation on [a, b] with the QUADPACK error
/// rescaling.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;

    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment {
        a,
        b,
        value,
        error,
        res_abs,
    }
}

/// Integrates `f` over [a, b].
///
/// Converged when the summed error estimate is at most
/// `max(abs_tol, rel_tol * |value|)`, or when it is at most the roundoff
/// floor `100 eps * integral(|f|)`, in which case the returned `error` may
/// exceed the target. Fails with
/// `NonConvergence` once the interval list reaches `max_subdivisions`
/// without either.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            magnitude: 0.0,
        });
    }
    let first = gk15(&mut f, a, b);
    let target = |v: f64| spec.abs_tol.max(spec.rel_tol * v.abs());
    let floor = |m: f64| ROUNDOFF_FLOOR * f64::EPSILON * m;
    if first.error <= target(first.value) || first.error <= floor(first.res_abs) {
        return Ok(Integral {
            value: first.value,
            error: first.error,
            magnitude: first.res_abs,
        });
    }

    let mut segments = Vec::with_capacity(spec.max_subdivisions.min(64));
    segments.push(first);
    loop {
        let (value, error, magnitude) = segments
            .iter()
            .fold((0.0, 0.0, 0.0), |(v, e, m), s| (v + s.value, e + s.error, m + s.res_abs));
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                a,
                b,
                subdivisions: segments.len(),
                estimate: f64::INFINITY,
            });
        }
        if error <= target(value) || error <= floor(magnitude) {
            return Ok(Integral {
                value,
                error,
                magnitude,
            });
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                a,
                b,
                subdivisions: segments.len(),
                estimate: error,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a.min(s.b) || mid >= s.a.max(s.b) {
            return Err(Error::NonConvergence {
                a,
                b,
                subdivisions: segments.len() + 1,
                estimate: error,
            });
        }
        segments.push(gk15(&mut f, s.a, mid));
        segments.push(gk15(&mut f, mid, s.b));
    }
}
