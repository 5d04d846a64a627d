//! Conversion of real-valued paths into physical traffic.
//!
//! A path is first mapped to nonnegative rates, either linearly
//! ([`crate::synth::rescale_trace`]) or through `y = 2^x`
//! ([`exp2_transform`]), then rounded to per-bin arrival counts, which can in
//! turn be spread into event times within their bins.

use crate::error::{FgnError, Result};
use crate::rng::RngStream;
use crate::synth::Trace;

/// Clamp fraction above which the Gaussian count model is considered suspect.
pub const SUSPECT_CLAMP_FRACTION: f64 = 0.10;

const EXP2_LIMIT: f64 = 1000.0;

/// Elementwise `y = 2^x`.
pub fn exp2_transform(t: &Trace) -> Result<Trace> {
    if let Some((index, &value)) = t.values().iter().enumerate().find(|(_, v)| v.abs() > EXP2_LIMIT) {
        return Err(FgnError::Exp2OutOfRange { index, value });
    }
    Trace::with_provenance(t.values().iter().map(|x| x.exp2()).collect(), *t.provenance())
}

/// Arrival counts per fixed-duration bin.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalTrace {
    counts: Vec<u64>,
    bin_width: f64,
    clamp_fraction: f64,
}

impl ArrivalTrace {
    pub fn new(counts: Vec<u64>, bin_width: f64) -> Result<Self> {
        check_bin_width(bin_width)?;
        Ok(Self { counts, bin_width, clamp_fraction: 0.0 })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Bin duration in seconds.
    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// Fraction of bins whose value was negative before clamping to zero.
    pub fn clamp_fraction(&self) -> f64 {
        self.clamp_fraction
    }

    /// True when so many bins were clamped that a Gaussian model of the
    /// arrival process is doubtful.
    pub fn is_suspect(&self) -> bool {
        self.clamp_fraction > SUSPECT_CLAMP_FRACTION
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn check_bin_width(bin_width: f64) -> Result<()> {
    if bin_width > 0.0 && bin_width.is_finite() {
        Ok(())
    } else {
        Err(FgnError::InvalidArgument(format!("bin width {bin_width} must be positive")))
    }
}

/// Rounds each value half-to-even, clamping negatives to zero.
pub fn to_integer_counts(t: &Trace, bin_width: f64) -> Result<ArrivalTrace> {
    check_bin_width(bin_width)?;
    let mut clamped = 0usize;
    let counts = t
        .values()
        .iter()
        .map(|&x| {
            if x < 0.0 {
                clamped += 1;
            }
            // saturating float-to-int conversion
            x.round_ties_even().max(0.0) as u64
        })
        .collect();
    let clamp_fraction = if t.is_empty() { 0.0 } else { clamped as f64 / t.len() as f64 };
    Ok(ArrivalTrace { counts, bin_width, clamp_fraction })
}

/// How arrivals are placed inside their bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadMode {
    /// Sorted i.i.d. uniform times; gaps are approximately exponential.
    Uniform,
    /// Constant spacing at the centred offsets `(j + 0.5) Δ / c`.
    Even,
}

/// Strictly increasing event times in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct InterarrivalSeq {
    times: Vec<f64>,
}

impl InterarrivalSeq {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Gaps between consecutive events (the first gap is measured from 0).
    pub fn gaps(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.times
            .iter()
            .map(|&t| {
                let g = t - prev;
                prev = t;
                g
            })
            .collect()
    }
}

/// Spreads each bin's arrivals over `[tΔ, (t+1)Δ)`.
///
/// Floating-point ties are broken by moving the later event up by one ulp.
pub fn counts_to_interarrivals(
    a: &ArrivalTrace,
    mode: SpreadMode,
    rng: &mut RngStream,
) -> InterarrivalSeq {
    let width = a.bin_width;
    let mut times = Vec::with_capacity(a.total() as usize);
    let mut offsets = Vec::new();
    for (bin, &c) in a.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let start = bin as f64 * width;
        let end = (bin + 1) as f64 * width;
        offsets.clear();
        match mode {
            SpreadMode::Uniform => {
                offsets.extend((0..c).map(|_| rng.uniform()));
                offsets.sort_unstable_by(f64::total_cmp);
            }
            SpreadMode::Even => offsets.extend((0..c).map(|j| (j as f64 + 0.5) / c as f64)),
        }
        for &u in &offsets {
            let mut t = start + u * width;
            if t >= end {
                t = end.next_down();
            }
            if let Some(&prev) = times.last() {
                if t <= prev {
                    t = prev.next_up();
                }
            }
            times.push(t);
        }
    }
    InterarrivalSeq { times }
}
