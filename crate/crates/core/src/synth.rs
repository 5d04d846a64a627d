//! FFT synthesis of approximate FGN sample paths.
//!
//! The pipeline, for an even length `n`:
//!
//! 1. evaluate the spectrum at `λ_j = 2πj/n`, `j = 1..=n/2`;
//! 2. multiply each value by an independent Exp(1) variate;
//! 3. build complex coefficients with modulus `sqrt(f̂_j)` and uniform phase,
//!    the Nyquist coefficient made real;
//! 4. mirror them into a Hermitian-symmetric length-`n` vector with a zero
//!    DC term;
//! 5. inverse-transform into a real sample path.
//!
//! The inverse transform divides by `n`. The absolute variance of the output is
//! therefore a convention; use [`rescale_trace`] to obtain physical units.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{FgnError, Result};
use crate::rng::RngStream;
use crate::spectrum::{build_spectrum_grid, BMode, HurstParam, SpectrumGrid};

/// Where a trace came from, when it was synthesized here.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Provenance {
    pub h: Option<HurstParam>,
    pub seed: Option<u64>,
    pub mode: Option<BMode>,
}

/// A finite real-valued sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    values: Vec<f64>,
    provenance: Provenance,
}

impl Trace {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_provenance(values, Provenance::default())
    }

    pub fn with_provenance(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FgnError::NonFinite(i));
        }
        Ok(Self { values, provenance })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Unbiased sample variance (`n - 1` denominator).
    pub fn sample_variance(&self) -> f64 {
        sample_variance(&self.values)
    }

    pub fn std_dev(&self) -> f64 {
        self.sample_variance().sqrt()
    }

    /// Fails with [`FgnError::DegenerateTrace`] when the sample variance is
    /// zero (or the trace too short to have one).
    pub fn ensure_nondegenerate(&self) -> Result<()> {
        let var = self.sample_variance();
        if self.len() < 2 || !(var > 0.0) {
            return Err(FgnError::DegenerateTrace);
        }
        // values equal up to rounding noise
        let scale = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if var.sqrt() <= 1e-13 * scale {
            return Err(FgnError::DegenerateTrace);
        }
        Ok(())
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Half of a Hermitian spectrum: coefficients for `j = 1..=n/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexHalfSpectrum {
    entries: Vec<Complex64>,
}

impl ComplexHalfSpectrum {
    /// The last entry is the Nyquist coefficient and must be real.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        match entries.last() {
            None => Err(FgnError::InvalidArgument("empty half spectrum".into())),
            Some(z) if z.im != 0.0 => {
                Err(FgnError::InvalidArgument("Nyquist coefficient must be real".into()))
            }
            Some(_) => Ok(Self { entries }),
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Multiplies every spectral value by an independent Exp(1) variate.
pub fn fuzz_spectrum(grid: &SpectrumGrid, rng: &mut RngStream) -> SpectrumGrid {
    let values = grid.values().iter().map(|&f| f * rng.exp1()).collect();
    grid.with_values(values).expect("scaling by nonnegative factors keeps the grid valid")
}

/// Coefficients with modulus `sqrt(value)` and uniform phase on `[0, 2π)`.
///
/// One uniform is drawn per entry, including the Nyquist entry, whose phase is
/// then discarded so that it is real and nonnegative.
pub fn random_phase_complexify(grid: &SpectrumGrid, rng: &mut RngStream) -> ComplexHalfSpectrum {
    let mut entries: Vec<Complex64> = grid
        .values()
        .iter()
        .map(|&f| Complex64::from_polar(f.sqrt(), 2.0 * PI * rng.uniform()))
        .collect();
    if let Some(last) = entries.last_mut() {
        *last = Complex64::new(last.norm(), 0.0);
    }
    ComplexHalfSpectrum { entries }
}

/// Expands `z_1..z_{n/2}` into `[0, z_1, .., z_{n/2}, conj(z_{n/2-1}), .., conj(z_1)]`.
pub fn hermitian_expand(half: &ComplexHalfSpectrum) -> Vec<Complex64> {
    let m = half.len();
    let mut out = Vec::with_capacity(2 * m);
    out.push(Complex64::new(0.0, 0.0));
    out.extend_from_slice(&half.entries);
    out.extend(half.entries[..m - 1].iter().rev().map(|z| z.conj()));
    out
}

/// Inverse DFT with a `1/n` factor, returning the real part.
pub(crate) fn inverse_real(mut coeffs: Vec<Complex64>) -> (Vec<f64>, f64) {
    let n = coeffs.len();
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut coeffs);
    let scale = 1.0 / n as f64;
    let max_im = coeffs.iter().fold(0.0_f64, |m, z| m.max(z.im.abs())) * scale;
    (coeffs.iter().map(|z| z.re * scale).collect(), max_im)
}

/// Runs the five synthesis steps with an explicit random stream.
///
/// Draw order is all `n/2` exponentials, then all `n/2` phase uniforms.
pub fn synthesize_with(
    h: HurstParam,
    n: usize,
    mode: BMode,
    rng: &mut RngStream,
) -> Result<Trace> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(FgnError::InvalidLength(n, 4));
    }
    let grid = build_spectrum_grid(h, n, mode)?;
    let fuzzed = fuzz_spectrum(&grid, rng);
    let half = random_phase_complexify(&fuzzed, rng);
    let (values, _) = inverse_real(hermitian_expand(&half));
    let provenance = Provenance { h: Some(h), seed: Some(rng.seed()), mode: Some(mode) };
    Trace::with_provenance(values, provenance)
}

/// Synthesizes a length-`n` approximate FGN path, deterministic per `seed`.
pub fn synthesize_fgn(h: HurstParam, n: usize, seed: u64, mode: BMode) -> Result<Trace> {
    synthesize_with(h, n, mode, &mut RngStream::from_seed(seed))
}

/// Affine map giving the trace the requested sample mean and standard
/// deviation. Affine maps leave the Hurst parameter unchanged.
pub fn rescale_trace(t: &Trace, target_mean: f64, target_sd: f64) -> Result<Trace> {
    if !(target_sd > 0.0) || !target_sd.is_finite() || !target_mean.is_finite() {
        return Err(FgnError::InvalidArgument(format!(
            "target sd must be positive and finite (mean {target_mean}, sd {target_sd})"
        )));
    }
    t.ensure_nondegenerate()?;
    let (m, sd) = (t.mean(), t.std_dev());
    let gain = target_sd / sd;
    let values = t.values().iter().map(|x| target_mean + (x - m) * gain).collect();
    Trace::with_provenance(values, t.provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hp(h: f64) -> HurstParam {
        HurstParam::permissive(h).unwrap()
    }

    #[test]
    fn fuzz_zero_grid_stays_zero() {
        let g = SpectrumGrid::new(vec![1.0, 2.0, 3.0], vec![0.0; 3]).unwrap();
        let out = fuzz_spectrum(&g, &mut RngStream::from_seed(1));
        assert_eq!(out.values(), &[0.0; 3]);
    }

    #[test]
    fn fuzz_factors_have_unit_mean() {
        let g = build_spectrum_grid(hp(0.7), 32_768, BMode::FAST).unwrap();
        let out = fuzz_spectrum(&g, &mut RngStream::from_seed(5));
        let ratios: Vec<f64> = out.values().iter().zip(g.values()).map(|(a, b)| a / b).collect();
        assert!(ratios.iter().all(|&r| r >= 0.0));
        assert!((mean(&ratios) - 1.0).abs() < 0.03);
        let again = fuzz_spectrum(&g, &mut RngStream::from_seed(5));
        assert_eq!(out, again);
    }

    #[test]
    fn complexify_modulus_and_real_nyquist() {
        let g = build_spectrum_grid(hp(0.8), 64, BMode::FAST).unwrap();
        let g = g.with_values({
            let mut v = g.values().to_vec();
            v[3] = 0.0;
            v
        })
        .unwrap();
        let half = random_phase_complexify(&g, &mut RngStream::from_seed(9));
        assert_eq!(half.entries()[3], Complex64::new(0.0, 0.0));
        for (z, &f) in half.entries().iter().zip(g.values()) {
            if f > 0.0 {
                assert!((z.norm_sqr() - f).abs() <= 1e-12 * f);
            }
        }
        let last = half.entries().last().unwrap();
        assert_eq!(last.im, 0.0);
        assert!(last.re >= 0.0);
    }

    #[test]
    fn expand_small_case() {
        let z1 = Complex64::new(1.0, 2.0);
        let z2 = Complex64::new(3.0, 0.0);
        let half = ComplexHalfSpectrum::new(vec![z1, z2]).unwrap();
        assert_eq!(hermitian_expand(&half), vec![Complex64::new(0.0, 0.0), z1, z2, z1.conj()]);
        assert!(ComplexHalfSpectrum::new(vec![z1]).is_err());
        assert!(ComplexHalfSpectrum::new(vec![]).is_err());
    }

    #[test]
    fn inverse_of_expansion_is_real() {
        let grid = build_spectrum_grid(hp(0.75), 4096, BMode::FAST).unwrap();
        let mut rng = RngStream::from_seed(21);
        let half = random_phase_complexify(&fuzz_spectrum(&grid, &mut rng), &mut rng);
        let full = hermitian_expand(&half);
        let n = full.len();
        for j in 1..n {
            assert_eq!(full[j], full[n - j].conj());
        }
        let (re, max_im) = inverse_real(full);
        let max_re = re.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(max_im <= 1e-9 * max_re);
    }

    #[test]
    fn synthesis_is_deterministic_and_zero_mean() {
        let a = synthesize_fgn(hp(0.8), 8192, 42, BMode::FAST).unwrap();
        let b = synthesize_fgn(hp(0.8), 8192, 42, BMode::FAST).unwrap();
        assert_eq!(a.len(), 8192);
        assert!(a.values().iter().zip(b.values()).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert!(a.mean().abs() <= 1e-8 * a.std_dev());
        assert_eq!(a.provenance().seed, Some(42));
        assert_eq!(a.provenance().mode, Some(BMode::FAST));
        let c = synthesize_fgn(hp(0.8), 8192, 43, BMode::FAST).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn synthesis_rejects_bad_lengths() {
        for n in [0, 2, 7, 33] {
            assert!(matches!(
                synthesize_fgn(hp(0.7), n, 1, BMode::FAST),
                Err(FgnError::InvalidLength(..))
            ));
        }
        assert!(synthesize_fgn(hp(0.7), 4, 1, BMode::FAST).is_ok());
    }

    #[test]
    fn rescale_hits_targets() {
        let t = synthesize_fgn(hp(0.7), 4096, 3, BMode::FAST).unwrap();
        let r = rescale_trace(&t, 100.0, 10.0).unwrap();
        assert!((r.mean() - 100.0).abs() <= 1e-10 * 100.0);
        assert!((r.std_dev() - 10.0).abs() <= 1e-10 * 10.0);
        let z = rescale_trace(&t, 0.0, 1.0).unwrap();
        assert!(z.mean().abs() < 1e-12);
        assert!((z.std_dev() - 1.0).abs() < 1e-10);
        let same = rescale_trace(&r, r.mean(), r.std_dev()).unwrap();
        for (a, b) in same.values().iter().zip(r.values()) {
            assert!((a - b).abs() <= 1e-10 * 100.0);
        }
        let flat = Trace::new(vec![2.0; 16]).unwrap();
        assert_eq!(rescale_trace(&flat, 0.0, 1.0), Err(FgnError::DegenerateTrace));
        assert!(rescale_trace(&t, 0.0, 0.0).is_err());
    }

    #[test]
    fn trace_rejects_non_finite() {
        assert_eq!(Trace::new(vec![0.0, f64::NAN]), Err(FgnError::NonFinite(1)));
        assert_eq!(Trace::new(vec![f64::INFINITY]), Err(FgnError::NonFinite(0)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn expansion_is_conjugate_symmetric(
            parts in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..64),
            nyquist in 0.0f64..10.0,
        ) {
            let mut entries: Vec<Complex64> =
                parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            entries.push(Complex64::new(nyquist, 0.0));
            let half = ComplexHalfSpectrum::new(entries).unwrap();
            let full = hermitian_expand(&half);
            let n = full.len();
            prop_assert_eq!(n, 2 * half.len());
            prop_assert_eq!(full[0], Complex64::new(0.0, 0.0));
            for j in 1..n {
                prop_assert_eq!(full[j], full[n - j].conj());
            }
        }
    }
}
