//! Histograms of relative positions and their comparison with the reference
//! density.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Side, WaveModel};
use crate::numerics::quadrature::{integrate, QuadratureSpec};

pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

/// Minimum expected count for a bin to enter the chi-square sum.
pub const CHI2_MIN_EXPECTED: f64 = 5.0;

/// Fixed-width counts. Bin k covers [k w, (k+1) w) with the edge computed as
/// `k as f64 * w`, so the origin is always 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub origin: f64,
    pub counts: BTreeMap<i64, u64>,
    pub total: u64,
}

impl Histogram {
    pub fn empty(bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0) || !bin_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bin width must be positive (got {bin_width})"
            )));
        }
        Ok(Histogram {
            bin_width,
            origin: 0.0,
            counts: BTreeMap::new(),
            total: 0,
        })
    }

    pub fn edge(&self, k: i64) -> f64 {
        self.origin + k as f64 * self.bin_width
    }

    /// Index of the bin containing x.
    pub fn bin_of(&self, x: f64) -> i64 {
        let mut k = ((x - self.origin) / self.bin_width).floor() as i64;
        if x < self.edge(k) {
            k -= 1;
        } else if x >= self.edge(k + 1) {
            k += 1;
        }
        k
    }

    pub fn insert(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!("cannot bin non-finite sample {x}")));
        }
        *self.counts.entry(self.bin_of(x)).or_insert(0) += 1;
        self.total += 1;
        Ok(())
    }

    /// Lowest and highest occupied bin.
    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.counts.keys().next()?, *self.counts.keys().next_back()?))
    }

    pub fn count(&self, k: i64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    fn compatible(&self, other: &Histogram) -> Result<()> {
        if self.bin_width != other.bin_width || self.origin != other.origin {
            return Err(Error::IncompatibleHistograms(self.bin_width, other.bin_width));
        }
        Ok(())
    }
}

pub fn build_histogram(samples: &[f64], bin_width: f64) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut h = Histogram::empty(bin_width)?;
    for &x in samples {
        h.insert(x)?;
    }
    Ok(h)
}

/// (bin centre, density) over the contiguous occupied range, empty bins
/// included; density = count / (total w).
pub fn to_pdf(h: &Histogram) -> Vec<(f64, f64)> {
    let Some((lo, hi)) = h.range() else {
        return Vec::new();
    };
    let norm = h.total as f64 * h.bin_width;
    (lo..=hi)
        .map(|k| (0.5 * (h.edge(k) + h.edge(k + 1)), h.count(k) as f64 / norm))
        .collect()
}

/// Sum of counts bin by bin.
pub fn merge(a: &Histogram, b: &Histogram) -> Result<Histogram> {
    a.compatible(b)?;
    let mut out = a.clone();
    for (&k, &c) in &b.counts {
        *out.counts.entry(k).or_insert(0) += c;
    }
    out.total += b.total;
    Ok(out)
}

/// L1 distance between the two empirical densities.
pub fn histogram_l1(a: &Histogram, b: &Histogram) -> Result<f64> {
    a.compatible(b)?;
    if a.total == 0 || b.total == 0 {
        return Err(Error::EmptyInput);
    }
    let (na, nb) = (a.total as f64, b.total as f64);
    let keys: std::collections::BTreeSet<i64> = a.counts.keys().chain(b.counts.keys()).copied().collect();
    Ok(keys
        .into_iter()
        .map(|k| (a.count(k) as f64 / na - b.count(k) as f64 / nb).abs())
        .sum())
}

/// Distances between a histogram and a reference density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityComparison {
    /// Integral of |empirical - reference|, with the reference averaged over
    /// each bin; reference mass outside the occupied bins counts in full.
    pub l1: f64,
    /// Largest |empirical - bin-averaged reference| density over the occupied
    /// range.
    pub sup: f64,
    /// Largest CDF distance, taken at bin edges.
    pub ks: f64,
    /// Pearson statistic over bins with expected count >= 5.
    pub chi2: f64,
    pub chi2_bins: usize,
    pub n: u64,
}

/// Compares `h` with a normalised reference given by its density and CDF.
pub fn compare_density<P, C>(h: &Histogram, pdf: P, cdf: C) -> Result<DensityComparison>
where
    P: Fn(f64) -> f64,
    C: Fn(f64) -> f64,
{
    let (lo, hi) = h.range().ok_or(Error::EmptyInput)?;
    let n = h.total as f64;
    let w = h.bin_width;
    let quad = QuadratureSpec::default();
    let bin_mass = |k: i64| {
        let (a, b) = (h.edge(k), h.edge(k + 1));
        integrate(&pdf, a, b, &quad)
            .map(|q| q.value)
            .unwrap_or_else(|_| cdf(b) - cdf(a))
    };

    let mut l1 = 0.0;
    let mut sup: f64 = 0.0;
    let mut covered = 0.0;
    let mut ks = (cdf(h.edge(lo))).abs();
    let mut cumulative = 0u64;
    let mut chi2 = 0.0;
    let mut chi2_bins = 0;
    for k in lo..=hi {
        let mass = bin_mass(k);
        let c = h.count(k);
        let p_hat = c as f64 / n;
        l1 += (p_hat - mass).abs();
        sup = sup.max((p_hat - mass).abs() / w);
        covered += mass;
        cumulative += c;
        ks = ks.max((cumulative as f64 / n - cdf(h.edge(k + 1))).abs());
        let expected = n * mass;
        if expected >= CHI2_MIN_EXPECTED {
            chi2 += (c as f64 - expected).powi(2) / expected;
            chi2_bins += 1;
        }
    }
    l1 += (1.0 - covered).max(0.0);

    // empty bins outside the occupied range that still expect >= 5 counts
    for dir in [-1i64, 1] {
        let mut k = if dir < 0 { lo - 1 } else { hi + 1 };
        loop {
            let expected = n * bin_mass(k);
            if expected < CHI2_MIN_EXPECTED {
                break;
            }
            chi2 += expected;
            chi2_bins += 1;
            k += dir;
        }
    }

    Ok(DensityComparison {
        l1,
        sup,
        ks,
        chi2,
        chi2_bins,
        n: h.total,
    })
}

/// [`compare_density`] against `model`'s reference density.
pub fn compare_to_model<M: WaveModel + ?Sized>(h: &Histogram, model: &M) -> Result<DensityComparison> {
    compare_density(h, |x| model.reference_density(x), |x| model.reference_cdf(x))
}

/// (p_left, p_right).
pub fn outcome_fractions(outcomes: &[Side]) -> Result<(f64, f64)> {
    if outcomes.is_empty() {
        return Err(Error::EmptyInput);
    }
    let left = outcomes.iter().filter(|&&s| s == Side::Left).count();
    let p_left = left as f64 / outcomes.len() as f64;
    Ok((p_left, (outcomes.len() - left) as f64 / outcomes.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::erf;
    use std::f64::consts::PI;

    fn gauss(x: f64) -> f64 {
        (-x * x).exp() / PI.sqrt()
    }

    fn gauss_cdf(x: f64) -> f64 {
        0.5 * (1.0 + erf(x))
    }

    #[test]
    fn small_histogram() {
        let h = build_histogram(&[0.05, 0.15, 0.15], 0.1).unwrap();
        assert_eq!(h.count(0), 1);
        assert_eq!(h.count(1), 2);
        assert_eq!(h.total, 3);
    }

    #[test]
    fn half_open_bins() {
        let h = build_histogram(&[0.1, 0.2, -0.1, 0.0, -1e-300], 0.1).unwrap();
        assert_eq!(h.count(1), 1);
        assert_eq!(h.count(2), 1);
        assert_eq!(h.count(-1), 2);
        assert_eq!(h.count(0), 1);
        for i in -500..500 {
            let x = i as f64 * 0.01 + 0.003;
            let k = h.bin_of(x);
            assert!(h.edge(k) <= x && x < h.edge(k + 1));
        }
    }

    #[test]
    fn empty_and_invalid() {
        assert_eq!(build_histogram(&[], 0.1), Err(Error::EmptyInput));
        assert!(build_histogram(&[1.0], 0.0).is_err());
        assert!(build_histogram(&[f64::NAN], 0.1).is_err());
        assert_eq!(outcome_fractions(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn pdf_shapes() {
        let h = build_histogram(&[0.31, 0.32, 0.33], 0.1).unwrap();
        let pdf = to_pdf(&h);
        assert_eq!(pdf.len(), 1);
        assert!((pdf[0].1 - 10.0).abs() < 1e-12);

        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.1 + 0.05).collect();
        let pdf = to_pdf(&build_histogram(&xs, 0.1).unwrap());
        assert!(pdf.iter().all(|&(_, d)| (d - 1.0).abs() < 1e-12));

        let gap = to_pdf(&build_histogram(&[0.05, 0.45], 0.1).unwrap());
        assert_eq!(gap.len(), 5);
        let total: f64 = gap.iter().map(|p| p.1 * 0.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_comparison_is_zero() {
        // counts equal to n times the bin masses
        let n = 1u64 << 40;
        let mut h = Histogram::empty(0.25).unwrap();
        for k in -40..40 {
            let m = gauss_cdf(h.edge(k + 1)) - gauss_cdf(h.edge(k));
            let c = (m * n as f64).round() as u64;
            if c > 0 {
                h.counts.insert(k, c);
                h.total += c;
            }
        }
        let cmp = compare_density(&h, gauss, gauss_cdf).unwrap();
        assert!(cmp.l1 < 1e-10, "{cmp:?}");
        assert!(cmp.ks < 1e-10);
        // rounding the counts contributes at most 0.25 / E per bin
        assert!(cmp.chi2 < 0.25 * cmp.chi2_bins as f64 / CHI2_MIN_EXPECTED, "{cmp:?}");
    }

    #[test]
    fn disjoint_support() {
        let h = build_histogram(&[40.0; 10], 0.1).unwrap();
        let cmp = compare_density(&h, gauss, gauss_cdf).unwrap();
        assert!((cmp.l1 - 2.0).abs() < 1e-12);
        assert!((cmp.ks - 1.0).abs() < 1e-12);
        assert!(cmp.l1 <= 2.0);
    }

    #[test]
    fn fractions() {
        assert_eq!(outcome_fractions(&[Side::Left, Side::Right]).unwrap(), (0.5, 0.5));
        let f = outcome_fractions(&[Side::Left, Side::Left, Side::Left, Side::Right]).unwrap();
        assert_eq!(f, (0.75, 0.25));
    }

    #[test]
    fn merge_equals_concatenation() {
        let a = [0.3, -1.2, 0.31, 2.2];
        let b = [-0.05, 0.3, 7.0];
        let ha = build_histogram(&a, 0.1).unwrap();
        let hb = build_histogram(&b, 0.1).unwrap();
        let all: Vec<f64> = a.iter().chain(&b).copied().collect();
        assert_eq!(merge(&ha, &hb).unwrap(), build_histogram(&all, 0.1).unwrap());
        let hc = build_histogram(&b, 0.2).unwrap();
        assert!(matches!(merge(&ha, &hc), Err(Error::IncompatibleHistograms(..))));
        assert_eq!(histogram_l1(&ha, &ha).unwrap(), 0.0);
    }
}
