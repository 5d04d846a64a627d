//! FGN autocorrelation and power spectrum.
//!
//! The spectrum of FGN is
//!
//! ```text
//! f(λ, H) = A(λ, H) [ |λ|^(-2H-1) + B(λ, H) ]
//! A(λ, H) = 2 sin(πH) Γ(2H+1) (1 - cos λ)
//! B(λ, H) = Σ_{j≥1} (2πj + λ)^(-2H-1) + (2πj - λ)^(-2H-1)
//! ```
//!
//! `B` has no closed form. [`BMode`] selects how it is approximated: a
//! partial sum, or the first `k` terms plus a closed-form integral estimate of
//! the tail, optionally with fitted bias corrections for `k = 3`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::gamma;

use crate::error::{FgnError, Result};

/// Exponent slope of the additive correction `2^(-7.65 H - 7.4)`.
pub const PRIME_SLOPE: f64 = -7.65;
/// Exponent offset of the additive correction `2^(-7.65 H - 7.4)`.
pub const PRIME_OFFSET: f64 = -7.4;
/// Constant term of the multiplicative correction `k1 + k2 λ`.
pub const DOUBLE_PRIME_K1: f64 = 1.0002;
/// Linear term of the multiplicative correction `k1 + k2 λ`.
pub const DOUBLE_PRIME_K2: f64 = -0.000134;

/// Hurst parameter of a long-range dependent process.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HurstParam(f64);

impl HurstParam {
    /// Accepts `0.5 < h < 1`.
    pub fn new(h: f64) -> Result<Self> {
        if h > 0.5 && h < 1.0 {
            Ok(Self(h))
        } else {
            Err(FgnError::InvalidHurst(h))
        }
    }

    /// Accepts `0.5 <= h < 1`, so white noise (`h = 0.5`) can be expressed.
    pub fn permissive(h: f64) -> Result<Self> {
        if (0.5..1.0).contains(&h) {
            Ok(Self(h))
        } else {
            Err(FgnError::InvalidHurst(h))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for HurstParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Approximation used for the infinite sum `B(λ, H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BMode {
    /// First `k` terms plus the midpoint-of-integrals tail estimate.
    Truncated(u32),
    /// `Truncated(3)` minus the fitted bias `2^(-7.65 H - 7.4)`.
    TruncatedPrime,
    /// `TruncatedPrime` scaled by `1.0002 - 0.000134 λ`.
    TruncatedDoublePrime,
    /// Plain partial sum of the first `n` terms.
    Partial(u32),
}

impl BMode {
    /// Best-corrected fast approximation.
    pub const FAST: BMode = BMode::TruncatedDoublePrime;
    /// The 200-term sum used by the reference Whittle implementation.
    pub const EXACT: BMode = BMode::Partial(200);
    /// Near-exact sum used as the accuracy reference.
    pub const REFERENCE: BMode = BMode::Partial(10_000);

    pub fn validate(self) -> Result<Self> {
        match self {
            BMode::Truncated(0) => Err(FgnError::InvalidMode("truncation k must be >= 1".into())),
            BMode::Partial(0) => Err(FgnError::InvalidMode("partial sum needs >= 1 term".into())),
            mode => Ok(mode),
        }
    }
}

impl fmt::Display for BMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BMode::Truncated(k) => write!(f, "k:{k}"),
            BMode::TruncatedPrime => write!(f, "prime"),
            BMode::TruncatedDoublePrime => write!(f, "doubleprime"),
            BMode::Partial(n) => write!(f, "partial:{n}"),
        }
    }
}

impl FromStr for BMode {
    type Err = FgnError;

    /// Parses `fast`, `exact`, `prime`, `doubleprime`, `k:<K>` and `partial:<N>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || FgnError::InvalidMode(format!("unrecognized mode {s:?}"));
        let mode = match s {
            "fast" | "doubleprime" => BMode::TruncatedDoublePrime,
            "exact" => BMode::EXACT,
            "prime" => BMode::TruncatedPrime,
            _ => {
                let (kind, count) = s.split_once(':').ok_or_else(bad)?;
                let count: u32 = count.parse().map_err(|_| bad())?;
                match kind {
                    "k" => BMode::Truncated(count),
                    "partial" => BMode::Partial(count),
                    _ => return Err(bad()),
                }
            }
        };
        mode.validate()
    }
}

/// Exact autocorrelation of FGN at lag `k`.
pub fn fgn_autocorrelation(h: HurstParam, k: u64) -> f64 {
    autocorrelation_raw(h.value(), k)
}

pub(crate) fn autocorrelation_raw(h: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let two_h = 2.0 * h;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).powf(two_h))
}

/// `A(λ, H) = 2 sin(πH) Γ(2H+1) (1 - cos λ)`.
pub fn spectrum_factor_a(h: HurstParam, lambda: f64) -> f64 {
    scale_raw(h.value()) * (1.0 - lambda.cos())
}

fn scale_raw(h: f64) -> f64 {
    2.0 * (PI * h).sin() * gamma(2.0 * h + 1.0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= PI {
        Ok(())
    } else {
        Err(FgnError::FrequencyOutOfDomain(lambda))
    }
}

/// Approximation of the infinite sum `B(λ, H)` selected by `mode`.
pub fn spectrum_b(h: HurstParam, lambda: f64, mode: BMode) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(b_raw(h.value(), lambda, mode.validate()?))
}

pub(crate) fn b_raw(h: f64, lambda: f64, mode: BMode) -> f64 {
    match mode {
        BMode::Truncated(k) => truncated_b(h, lambda, k),
        BMode::TruncatedPrime => truncated_prime_b(h, lambda),
        BMode::TruncatedDoublePrime => {
            (DOUBLE_PRIME_K1 + DOUBLE_PRIME_K2 * lambda) * truncated_prime_b(h, lambda)
        }
        BMode::Partial(n) => partial_b(h, lambda, n),
    }
}

fn truncated_prime_b(h: f64, lambda: f64) -> f64 {
    truncated_b(h, lambda, 3) - (PRIME_SLOPE * h + PRIME_OFFSET).exp2()
}

fn truncated_b(h: f64, lambda: f64, k: u32) -> f64 {
    let d = -2.0 * h - 1.0;
    let d_tail = -2.0 * h;
    let a = |j: u32| 2.0 * f64::from(j) * PI + lambda;
    let b = |j: u32| 2.0 * f64::from(j) * PI - lambda;
    let head: f64 = (1..=k).map(|j| a(j).powf(d) + b(j).powf(d)).sum();
    let tail = a(k).powf(d_tail) + a(k + 1).powf(d_tail) + b(k).powf(d_tail) + b(k + 1).powf(d_tail);
    head + tail / (8.0 * h * PI)
}

fn partial_b(h: f64, lambda: f64, n: u32) -> f64 {
    let d = -2.0 * h - 1.0;
    (1..=n)
        .map(|j| {
            let base = 2.0 * PI * f64::from(j);
            (base + lambda).powf(d) + (base - lambda).powf(d)
        })
        .sum()
}

/// Power spectrum `f(λ, H)` with `B` approximated per `mode`.
pub fn fgn_power_spectrum(h: HurstParam, lambda: f64, mode: BMode) -> Result<f64> {
    check_lambda(lambda)?;
    let mode = mode.validate()?;
    Ok(SpectrumModel::new(h.value(), mode).eval(lambda))
}

/// Spectrum evaluator with the `λ`-independent factors precomputed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SpectrumModel {
    h: f64,
    mode: BMode,
    scale: f64,
}

impl SpectrumModel {
    /// `h` is only required to lie in (0, 1); callers validate.
    pub(crate) fn new(h: f64, mode: BMode) -> Self {
        Self { h, mode, scale: scale_raw(h) }
    }

    pub(crate) fn eval(&self, lambda: f64) -> f64 {
        let a = self.scale * (1.0 - lambda.cos());
        a * (lambda.powf(-2.0 * self.h - 1.0) + b_raw(self.h, lambda, self.mode))
    }

    pub(crate) fn eval_all(&self, lambdas: &[f64]) -> Vec<f64> {
        lambdas.iter().map(|&l| self.eval(l)).collect()
    }
}

/// Paired Fourier frequencies and spectral values on (0, π].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    lambdas: Vec<f64>,
    values: Vec<f64>,
}

impl SpectrumGrid {
    pub fn new(lambdas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if lambdas.len() != values.len() {
            return Err(FgnError::InvalidArgument(format!(
                "{} frequencies but {} values",
                lambdas.len(),
                values.len()
            )));
        }
        if let Some(&l) = lambdas.iter().find(|&&l| !(l > 0.0 && l <= PI)) {
            return Err(FgnError::FrequencyOutOfDomain(l));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FgnError::InvalidArgument("frequencies must be strictly increasing".into()));
        }
        if values.iter().any(|&v| !(v >= 0.0)) {
            return Err(FgnError::InvalidArgument("spectral values must be >= 0".into()));
        }
        Ok(Self { lambdas, values })
    }

    /// Replaces the values, keeping the frequencies.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.lambdas.clone(), values)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Fourier frequencies `2πj/n` for `j = 1..=n/2`.
pub fn fourier_frequencies(n: usize) -> Vec<f64> {
    (1..=n / 2).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Spectrum at the `n/2` positive Fourier frequencies of a length-`n` path.
pub fn build_spectrum_grid(h: HurstParam, n: usize, mode: BMode) -> Result<SpectrumGrid> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(FgnError::InvalidLength(n, 2));
    }
    let mode = mode.validate()?;
    let mut lambdas = fourier_frequencies(n);
    // exact pi at the Nyquist bin
    *lambdas.last_mut().expect("n >= 2") = PI;
    let values = SpectrumModel::new(h.value(), mode).eval_all(&lambdas);
    Ok(SpectrumGrid { lambdas, values })
}
