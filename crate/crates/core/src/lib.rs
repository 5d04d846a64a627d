//! Approximate fractional Gaussian noise (FGN) for traffic modelling.
//!
//! The crate covers the whole loop from model to measurement:
//!
//! - [`spectrum`]: FGN autocorrelation and power spectrum, with fast
//!   truncated approximations of the infinite sum in the spectrum.
//! - [`synth`]: FFT synthesis of sample paths from a fuzzed spectrum.
//! - [`estimate`]: periodogram and Whittle's estimator for the Hurst parameter.
//! - [`analyze`]: aggregation, variance-time curves, Anderson-Darling
//!   normality and Q-Q data.
//! - [`traffic`]: conversion of real-valued paths into arrival counts and
//!   interarrival times.
//! - [`oracle`]: exact (Cholesky) FGN and sample statistics used to check the
//!   approximate machinery.

pub mod analyze;
pub mod error;
pub mod estimate;
pub mod oracle;
pub mod rng;
pub mod spectrum;
pub mod synth;
pub mod traffic;

pub use error::{FgnError, Result};
pub use estimate::{periodogram, whittle_estimate, whittle_objective, whittle_sigma};
pub use estimate::{Periodogram, WhittleResult, DEFAULT_TOLERANCE};
pub use rng::RngStream;
pub use spectrum::{BMode, HurstParam, SpectrumGrid};
pub use synth::{rescale_trace, synthesize_fgn, Provenance, Trace};
