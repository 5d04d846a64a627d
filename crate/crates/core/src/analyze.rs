//! Evaluation battery for synthesized paths: block aggregation, variance-time
//! curves, the Anderson-Darling A² normality test and Q-Q plot data.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{FgnError, Result};
use crate::rng::RngStream;
use crate::synth::{mean, sample_variance, Trace};

/// 5% critical value of the modified A² statistic with estimated mean and
/// variance. Frozen from a Monte Carlo run of 100k standard normal samples per
/// size at n = 20, 50, 200 and 1000 (quantiles 0.755, 0.751, 0.751, 0.753);
/// [`calibrate_ad_critical`] reproduces it.
pub const AD_CRITICAL_5PCT: f64 = 0.752;

/// Minimum number of aggregated points required at every variance-time level.
pub const MIN_AGGREGATED_POINTS: usize = 10;

/// Block means of non-overlapping windows of `m` samples. A trailing partial
/// block is dropped.
pub fn aggregate(t: &Trace, m: usize) -> Result<Trace> {
    if m == 0 || m > t.len() {
        return Err(FgnError::AggregationTooLarge { m, n: t.len(), limit: t.len() });
    }
    let values = t.values().chunks_exact(m).map(mean).collect();
    Trace::with_provenance(values, *t.provenance())
}

/// `Var(X^(m)) / Var(X)` against `m` with a log-log least-squares slope.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceTimeCurve {
    pub m_levels: Vec<usize>,
    pub norm_vars: Vec<f64>,
    /// Slope of `log10 norm_var` on `log10 m`; `-2(1 - H)` for FGN.
    pub fitted_slope: f64,
    /// `1 + fitted_slope / 2`.
    pub implied_h: f64,
}

/// Log-spaced levels `round(10^(j/12))`, `j = 0..=36`, deduplicated and capped
/// so that every level leaves at least ten aggregated points.
pub fn default_m_levels(n: usize) -> Vec<usize> {
    let cap = n / MIN_AGGREGATED_POINTS;
    let mut levels: Vec<usize> = (0..=36)
        .map(|j| 10f64.powf(j as f64 / 12.0).round() as usize)
        .filter(|&m| m <= cap)
        .collect();
    levels.dedup();
    levels
}

/// Variance-time curve over `m_levels` (level 1 is always included).
pub fn variance_time_curve(t: &Trace, m_levels: &[usize]) -> Result<VarianceTimeCurve> {
    t.ensure_nondegenerate()?;
    let n = t.len();
    let limit = n / MIN_AGGREGATED_POINTS;
    let mut levels: Vec<usize> = m_levels.to_vec();
    levels.push(1);
    levels.sort_unstable();
    levels.dedup();
    if levels[0] == 0 {
        return Err(FgnError::InvalidArgument("aggregation level 0".into()));
    }
    if let Some(&m) = levels.iter().find(|&&m| m > limit) {
        return Err(FgnError::AggregationTooLarge { m, n, limit });
    }
    let base = t.sample_variance();
    let norm_vars: Vec<f64> = levels
        .iter()
        .map(|&m| {
            if m == 1 {
                Ok(1.0)
            } else {
                Ok(aggregate(t, m)?.sample_variance() / base)
            }
        })
        .collect::<Result<_>>()?;
    if norm_vars.iter().any(|&v| !(v > 0.0)) {
        return Err(FgnError::DegenerateTrace);
    }
    let xs: Vec<f64> = levels.iter().map(|&m| (m as f64).log10()).collect();
    let ys: Vec<f64> = norm_vars.iter().map(|v| v.log10()).collect();
    let fitted_slope = if levels.len() < 2 { 0.0 } else { linear_fit(&xs, &ys).slope };
    Ok(VarianceTimeCurve {
        m_levels: levels,
        norm_vars,
        fitted_slope,
        implied_h: 1.0 + fitted_slope / 2.0,
    })
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len(), "paired samples");
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LineFit { slope, intercept: my - slope * mx, r_squared }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityReport {
    /// Modified statistic `A²(1 + 0.75/n + 2.25/n²)`.
    pub a2_statistic: f64,
    pub pass_at_5pct: bool,
    pub n: usize,
    /// Always true: mean and variance are estimated from the sample.
    pub standardized: bool,
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Modified A² for a sample; mean and variance estimated from the data.
fn modified_a2(values: &[f64]) -> f64 {
    let n = values.len();
    let m = mean(values);
    let sd = sample_variance(values).sqrt();
    let mut z: Vec<f64> = values.iter().map(|x| (x - m) / sd).collect();
    z.sort_unstable_by(f64::total_cmp);
    let normal = standard_normal();
    let s: f64 = (0..n)
        .map(|i| {
            let lower = normal.cdf(z[i]).ln();
            let upper = normal.cdf(-z[n - 1 - i]).ln();
            (2 * i + 1) as f64 * (lower + upper)
        })
        .sum();
    let nf = n as f64;
    let a2 = -nf - s / nf;
    a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf))
}

/// Anderson-Darling test for a normal marginal at the 5% level.
pub fn ad_normality_test(t: &Trace) -> Result<NormalityReport> {
    if t.len() < 20 {
        return Err(FgnError::InvalidLength(t.len(), 20));
    }
    t.ensure_nondegenerate()?;
    let a2 = modified_a2(t.values()).max(0.0);
    Ok(NormalityReport {
        a2_statistic: a2,
        pass_at_5pct: a2 < AD_CRITICAL_5PCT,
        n: t.len(),
        standardized: true,
    })
}

/// Monte Carlo `1 - alpha` quantile of the modified A² statistic for standard
/// normal samples of size `n`.
pub fn calibrate_ad_critical(n: usize, replicates: usize, alpha: f64, rng: &mut RngStream) -> f64 {
    let mut stats: Vec<f64> = (0..replicates)
        .map(|_| {
            let xs: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
            modified_a2(&xs)
        })
        .collect();
    stats.sort_unstable_by(f64::total_cmp);
    let idx = (((1.0 - alpha) * replicates as f64).ceil() as usize).clamp(1, replicates) - 1;
    stats[idx]
}

/// Sorted sample values against standard normal quantiles at plotting
/// positions `(i - 0.5)/n`, as `(theoretical, sample)` pairs.
pub fn qq_points(t: &Trace) -> Result<Vec<(f64, f64)>> {
    let n = t.len();
    if n < 2 {
        return Err(FgnError::InvalidLength(n, 2));
    }
    let mut sorted = t.values().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let normal = standard_normal();
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, x)| (normal.inverse_cdf((i as f64 + 0.5) / n as f64), x))
        .collect())
}

/// R² of the least-squares line through Q-Q points.
pub fn qq_r_squared(points: &[(f64, f64)]) -> f64 {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    linear_fit(&xs, &ys).r_squared
}
