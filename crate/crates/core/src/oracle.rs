//! Reference generators and sample statistics for checking the FFT path.
//!
//! [`exact_fgn`] draws exact Gaussian FGN by Cholesky factorization of the
//! Toeplitz covariance `Σ_ij = r(|i - j|)`. It is `O(n³)`, so `n` is capped at
//! [`MAX_EXACT_LEN`].

use crate::error::{FgnError, Result};
use crate::rng::RngStream;
use crate::spectrum::{autocorrelation_raw, HurstParam};
use crate::synth::{mean, Provenance, Trace};

pub const MAX_EXACT_LEN: usize = 4096;

/// Lower-triangular Cholesky factor of the FGN covariance, packed by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceFactor {
    n: usize,
    h: HurstParam,
    packed: Vec<f64>,
}

fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl CovarianceFactor {
    pub fn new(h: HurstParam, n: usize) -> Result<Self> {
        if !(2..=MAX_EXACT_LEN).contains(&n) {
            return Err(FgnError::InvalidArgument(format!(
                "exact FGN length {n} outside 2..={MAX_EXACT_LEN}"
            )));
        }
        let acf: Vec<f64> = (0..n as u64).map(|k| autocorrelation_raw(h.value(), k)).collect();
        let mut packed = vec![0.0; row_start(n)];
        for i in 0..n {
            let ri = row_start(i);
            for j in 0..=i {
                let rj = row_start(j);
                let dot: f64 =
                    packed[ri..ri + j].iter().zip(&packed[rj..rj + j]).map(|(a, b)| a * b).sum();
                let s = acf[i - j] - dot;
                if i == j {
                    if !(s > 0.0) {
                        return Err(FgnError::Factorization(i));
                    }
                    packed[ri + i] = s.sqrt();
                } else {
                    packed[ri + j] = s / packed[rj + j];
                }
            }
        }
        Ok(Self { n, h, packed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hurst(&self) -> HurstParam {
        self.h
    }

    /// Entry `L[i][j]`; zero above the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.packed[row_start(i) + j]
        }
    }

    /// `max |L Lᵀ - Σ|` over all entries. `O(n³)`.
    pub fn reconstruction_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let (ri, rj) = (row_start(i), row_start(j));
                let prod: f64 =
                    self.packed[ri..=ri + j].iter().zip(&self.packed[rj..=rj + j]).map(|(a, b)| a * b).sum();
                let target = autocorrelation_raw(self.h.value(), (i - j) as u64);
                worst = worst.max((prod - target).abs());
            }
        }
        worst
    }

    /// `x = L g` with `g` i.i.d. standard normal.
    pub fn sample(&self, rng: &mut RngStream) -> Trace {
        let g: Vec<f64> = (0..self.n).map(|_| rng.standard_normal()).collect();
        let values = (0..self.n)
            .map(|i| {
                let ri = row_start(i);
                self.packed[ri..=ri + i].iter().zip(&g).map(|(l, z)| l * z).sum()
            })
            .collect();
        let provenance = Provenance { h: Some(self.h), seed: Some(rng.seed()), mode: None };
        Trace::with_provenance(values, provenance).expect("finite by construction")
    }
}

/// Exact Gaussian FGN of length `n` (`2 <= n <= 4096`).
pub fn exact_fgn(h: HurstParam, n: usize, rng: &mut RngStream) -> Result<Trace> {
    Ok(CovarianceFactor::new(h, n)?.sample(rng))
}

/// Biased sample autocorrelation `ρ̂(0..=max_lag)`.
pub fn sample_autocorrelation(t: &Trace, max_lag: usize) -> Result<Vec<f64>> {
    let n = t.len();
    if max_lag >= n / 4 {
        return Err(FgnError::InvalidArgument(format!(
            "max lag {max_lag} must be below n/4 = {}",
            n / 4
        )));
    }
    t.ensure_nondegenerate()?;
    let m = mean(t.values());
    let centred: Vec<f64> = t.values().iter().map(|x| x - m).collect();
    let denom: f64 = centred.iter().map(|x| x * x).sum();
    Ok((0..=max_lag)
        .map(|k| centred.iter().zip(&centred[k..]).map(|(a, b)| a * b).sum::<f64>() / denom)
        .collect())
}
