//! Periodogram and Whittle's estimator of the Hurst parameter.
//!
//! The objective is the discretized integral of the periodogram over a model
//! spectrum normalized to unit (discrete) mean:
//!
//! ```text
//! g(H) = (2π/n) Σ_j I(λ_j) / f_norm(λ_j, H),   f_norm = f / mean_j f
//! ```
//!
//! summed over `λ_j = 2πj/n`, `j = 1..=n/2`. The periodogram of a real path is
//! symmetric about π, so the upper half of the frequency range adds nothing
//! that changes the argmin. `g` is minimized by golden-section search.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{FgnError, Result};
use crate::spectrum::{fourier_frequencies, BMode, HurstParam, SpectrumModel};
use crate::synth::Trace;

/// Bracket width at which the search stops.
pub const DEFAULT_TOLERANCE: f64 = 0.001;
/// Lower end of the Hurst search interval.
pub const SEARCH_LO: f64 = 0.5 + 1e-3;
/// Upper end of the Hurst search interval.
pub const SEARCH_HI: f64 = 1.0 - 1e-3;

const SIGMA_GRID_POINTS: usize = 2048;
const SIGMA_FD_STEP: f64 = 1e-4;

/// Periodogram ordinates `|DFT_j(x)|² / n` at the positive Fourier frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    lambdas: Vec<f64>,
    ordinates: Vec<f64>,
    n: usize,
}

impl Periodogram {
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// Length of the trace the periodogram was computed from.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }
}

pub fn periodogram(t: &Trace) -> Result<Periodogram> {
    let n = t.len();
    if n < 4 {
        return Err(FgnError::InvalidLength(n, 4));
    }
    let mut buf: Vec<Complex64> = t.values().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let ordinates = buf[1..=n / 2].iter().map(|z| z.norm_sqr() / n as f64).collect();
    let mut lambdas = fourier_frequencies(n);
    if n.is_multiple_of(2) {
        *lambdas.last_mut().expect("n >= 4") = PI;
    }
    Ok(Periodogram { lambdas, ordinates, n })
}

/// Whittle objective `g(H)` for the periodogram `p`.
pub fn whittle_objective(p: &Periodogram, h: HurstParam, mode: BMode) -> Result<f64> {
    if p.is_empty() {
        return Err(FgnError::InvalidArgument("empty periodogram".into()));
    }
    let mode = mode.validate()?;
    Ok(objective_raw(p, h.value(), mode))
}

// The spectrum is normalized by its geometric mean over the evaluation
// frequencies, i.e. `∫ log f` is held fixed. Dividing by the arithmetic mean
// instead would make the minimizer track `sqrt(f)` rather than `f` (by
// Cauchy-Schwarz) and bias the estimate heavily toward 0.5.
fn objective_raw(p: &Periodogram, h: f64, mode: BMode) -> f64 {
    let f = SpectrumModel::new(h, mode).eval_all(&p.lambdas);
    let log_mean = f.iter().map(|v| v.ln()).sum::<f64>() / f.len() as f64;
    let ratio: f64 = p.ordinates.iter().zip(&f).map(|(i, f)| i / f).sum();
    ratio * log_mean.exp() * (2.0 * PI / p.n as f64)
}

/// Outcome of a Whittle fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittleResult {
    pub h_hat: f64,
    pub sigma_h: f64,
    /// Objective value at `h_hat`.
    pub objective: f64,
    pub mode: BMode,
    pub n: usize,
    /// Final bracket width.
    pub bracket_width: f64,
    /// The minimizer ended within `tol` of a search boundary, so `h_hat` is
    /// not an interior minimum.
    pub at_boundary: bool,
}

/// Final bracket from [`golden_section`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is no wider than `tol`. Ties keep the lower
/// half of the bracket.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Bracket {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            if b - a > tol {
                fc = f(c);
                evaluations += 1;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            if b - a > tol {
                fd = f(d);
                evaluations += 1;
            }
        }
    }
    Bracket { lo: a, hi: b, evaluations }
}

/// Whittle estimate of `H` for `t` with the spectrum approximated per `mode`.
pub fn whittle_estimate(t: &Trace, mode: BMode, tol: f64) -> Result<WhittleResult> {
    if !(tol >= 1e-6) {
        return Err(FgnError::InvalidArgument(format!("tolerance {tol} below 1e-6")));
    }
    let mode = mode.validate()?;
    t.ensure_nondegenerate()?;
    let p = periodogram(t)?;
    let bracket = golden_section(|h| objective_raw(&p, h, mode), SEARCH_LO, SEARCH_HI, tol);
    let h_hat = bracket.midpoint();
    let at_boundary = h_hat - SEARCH_LO <= tol || SEARCH_HI - h_hat <= tol;
    let h = HurstParam::new(h_hat)?;
    Ok(WhittleResult {
        h_hat,
        sigma_h: whittle_sigma(h, t.len(), mode),
        objective: objective_raw(&p, h_hat, mode),
        mode,
        n: t.len(),
        bracket_width: bracket.width(),
        at_boundary,
    })
}

/// Asymptotic standard deviation of the Whittle estimate,
/// `sqrt((4π/n) / ∫_{-π}^{π} (∂ log f/∂H - c)² dω)`.
///
/// `c` is the mean of `∂ log f/∂H` over the frequency range: the spectrum's
/// overall scale is not estimated, so only the shape information counts. The
/// derivative is a central difference with step `1e-4`, the integral a
/// trapezoid rule over 2048 points in `(0, π]`, doubled by symmetry.
pub fn whittle_sigma(h: HurstParam, n: usize, mode: BMode) -> f64 {
    let h = h.value();
    let step = SIGMA_FD_STEP;
    let (h_lo, h_hi) = if h + step < 1.0 { (h - step, h + step) } else { (h - 2.0 * step, h) };
    let hi_model = SpectrumModel::new(h_hi, mode);
    let lo_model = SpectrumModel::new(h_lo, mode);
    let omegas: Vec<f64> =
        (1..=SIGMA_GRID_POINTS).map(|i| PI * i as f64 / SIGMA_GRID_POINTS as f64).collect();
    let deriv: Vec<f64> = omegas
        .iter()
        .map(|&w| (hi_model.eval(w).ln() - lo_model.eval(w).ln()) / (h_hi - h_lo))
        .collect();
    let dw = PI / SIGMA_GRID_POINTS as f64;
    let span = omegas[SIGMA_GRID_POINTS - 1] - omegas[0];
    let centre = trapezoid(&deriv, dw) / span;
    let centred: Vec<f64> = deriv.iter().map(|d| (d - centre).powi(2)).collect();
    let info = 2.0 * trapezoid(&centred, dw);
    ((4.0 * PI / n as f64) / info).sqrt()
}

fn trapezoid(ys: &[f64], dx: f64) -> f64 {
    match ys {
        [] | [_] => 0.0,
        [first, .., last] => dx * (ys.iter().sum::<f64>() - 0.5 * (first + last)),
    }
}
