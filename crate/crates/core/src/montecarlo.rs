//! Haar-random pure states, fixed-width histograms and functional scans.
//!
//! Sample `i` of a scan draws its state from RNG stream
//! `(seed, HaarSample, i)`, so any split of the index range across workers
//! produces the same samples. Histogram sums are kept in fixed point, making
//! [`Histogram::merge`] exactly associative and commutative; together these
//! make scans bit-reproducible for any worker count.

use std::ops::Range;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bounds::known_bound;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::{evaluate_raw, FunctionalKind};
use crate::linalg::{StateVector, C64};
use crate::mub::{BasisLabel, MubSet};
use crate::rng::{stream_from_key, stream_key, Domain};

/// Fixed-point scale for running sums (2⁴⁸ per unit).
const FIXED_SCALE: f64 = (1u64 << 48) as f64;

/// Samples per parallel work item.
const CHUNK: u64 = 1 << 14;

pub const DEFAULT_BINS: usize = 250;

/// Normalized vector of d independent standard complex Gaussians; this is
/// distributed according to the unitarily invariant (Haar) measure.
pub fn haar_random_state<const D: usize, R: Rng + ?Sized>(rng: &mut R) -> StateVector<D> {
    loop {
        let amps: [C64; D] = std::array::from_fn(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        });
        if let Ok(psi) = StateVector::normalized(amps) {
            return psi;
        }
    }
}

/// Binned counts of a scalar functional with extreme-value records.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram<const D: usize> {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
    samples: u64,
    min_seen: f64,
    min_index: u64,
    min_state: Option<StateVector<D>>,
    max_seen: f64,
    max_index: u64,
    sum_fixed: i128,
    sum_sq_fixed: i128,
}

impl<const D: usize> Histogram<D> {
    pub fn new(bin_count: usize, lo: f64, hi: f64) -> Result<Self> {
        if bin_count == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!("histogram needs bins > 0 and lo < hi, got {bin_count} [{lo}, {hi}]")));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bin_count],
            underflow: 0,
            overflow: 0,
            samples: 0,
            min_seen: f64::INFINITY,
            min_index: u64::MAX,
            min_state: None,
            max_seen: f64::NEG_INFINITY,
            max_index: u64::MAX,
            sum_fixed: 0,
            sum_sq_fixed: 0,
        })
    }

    /// Records sample `index` with value `value`.
    pub fn push(&mut self, value: f64, index: u64, state: &StateVector<D>) {
        let bins = self.counts.len();
        if value < self.lo {
            self.underflow += 1;
        } else if value > self.hi {
            self.overflow += 1;
        } else {
            let pos = ((value - self.lo) / (self.hi - self.lo) * bins as f64) as usize;
            self.counts[pos.min(bins - 1)] += 1;
        }
        self.samples += 1;
        if value < self.min_seen || (value == self.min_seen && index < self.min_index) {
            self.min_seen = value;
            self.min_index = index;
            self.min_state = Some(*state);
        }
        if value > self.max_seen || (value == self.max_seen && index < self.max_index) {
            self.max_seen = value;
            self.max_index = index;
        }
        self.sum_fixed += (value * FIXED_SCALE).round() as i128;
        self.sum_sq_fixed += (value * value * FIXED_SCALE).round() as i128;
    }

    /// Combines two histograms over disjoint sample sets.
    pub fn merge(mut self, other: Self) -> Result<Self> {
        if self.counts.len() != other.counts.len() || self.lo != other.lo || self.hi != other.hi {
            return Err(Error::IncompatibleHistograms(format!(
                "{} bins on [{}, {}] vs {} bins on [{}, {}]",
                self.counts.len(),
                self.lo,
                self.hi,
                other.counts.len(),
                other.lo,
                other.hi
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.samples += other.samples;
        if other.min_seen < self.min_seen || (other.min_seen == self.min_seen && other.min_index < self.min_index) {
            self.min_seen = other.min_seen;
            self.min_index = other.min_index;
            self.min_state = other.min_state;
        }
        if other.max_seen > self.max_seen || (other.max_seen == self.max_seen && other.max_index < self.max_index) {
            self.max_seen = other.max_seen;
            self.max_index = other.max_index;
        }
        self.sum_fixed += other.sum_fixed;
        self.sum_sq_fixed += other.sum_sq_fixed;
        Ok(self)
    }

    fn empty_like(&self) -> Self {
        Self::new(self.counts.len(), self.lo, self.hi).expect("validated at construction")
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let w = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + w * bin as f64, self.lo + w * (bin + 1) as f64)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Samples that fell inside the binned range.
    pub fn accepted(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn underflow(&self) -> u64 {
        self.underflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn min_seen(&self) -> f64 {
        self.min_seen
    }

    pub fn max_seen(&self) -> f64 {
        self.max_seen
    }

    pub fn min_state(&self) -> Option<&StateVector<D>> {
        self.min_state.as_ref()
    }

    /// Index of the sample attaining `min_seen`.
    pub fn min_index(&self) -> Option<u64> {
        (self.samples > 0).then_some(self.min_index)
    }

    pub fn sum(&self) -> f64 {
        self.sum_fixed as f64 / FIXED_SCALE
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq_fixed as f64 / FIXED_SCALE
    }

    pub fn mean(&self) -> f64 {
        if self.samples == 0 {
            return f64::NAN;
        }
        self.sum() / self.samples as f64
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.samples < 2 {
            return f64::NAN;
        }
        let n = self.samples as f64;
        let mean = self.mean();
        let var = ((self.sum_sq() - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarSamplerConfig {
    pub seed: u64,
    pub samples: u64,
    /// Worker threads (0 = all available). Results do not depend on it.
    pub workers: usize,
    pub bins: usize,
    /// Histogram range; derived from the known bound when absent.
    pub range: Option<(f64, f64)>,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for HaarSamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000_000,
            workers: 0,
            bins: DEFAULT_BINS,
            range: None,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport<const D: usize> {
    pub functional: FunctionalKind,
    pub bases: Vec<BasisLabel>,
    pub histogram: Histogram<D>,
    pub mean: f64,
    pub std_error: f64,
    pub runtime: Duration,
}

/// Histogram range: 0.05 below the known bound (or 0) to 0.05 above the
/// largest attainable value.
pub fn default_range(dim: usize, functional: FunctionalKind, bases: &[BasisLabel]) -> (f64, f64) {
    let k = bases.len() as f64;
    let max_single = match functional {
        FunctionalKind::ShannonEntropySum => (dim as f64).log2(),
        // Largest variance of any distribution supported on [0, d − 1].
        FunctionalKind::MinVarianceSum => ((dim - 1) as f64 / 2.0).powi(2),
    };
    let lo = known_bound(dim, functional, bases).map(|b| (b.value - 0.05).max(0.0)).unwrap_or(0.0);
    (lo, k * max_single + 0.05)
}

/// Histogram of the functional over Haar samples `indices` (global sample
/// indices, which address the RNG streams).
pub fn scan_indices<const D: usize>(
    set: &MubSet<D>,
    functional: FunctionalKind,
    bases: &[BasisLabel],
    cfg: &HaarSamplerConfig,
    indices: Range<u64>,
) -> Result<Histogram<D>> {
    let selected = set.select(bases)?;
    if selected.len() < 2 {
        return Err(Error::BasisCount { min: 2, max: D + 1, got: selected.len() });
    }
    let (lo, hi) = cfg.range.unwrap_or_else(|| default_range(D, functional, bases));
    let template = Histogram::<D>::new(cfg.bins, lo, hi)?;
    let key = stream_key(cfg.seed, Domain::HaarSample);
    let span = indices.end.saturating_sub(indices.start);
    let chunks = span.div_ceil(CHUNK) as usize;

    let run_chunk = |c: usize| {
        let mut h = template.empty_like();
        let start = indices.start + c as u64 * CHUNK;
        let end = (start + CHUNK).min(indices.end);
        for i in start..end {
            let mut rng = stream_from_key(&key, i);
            let psi = haar_random_state::<D, _>(&mut rng);
            let value = evaluate_raw(functional, psi.amplitudes(), &selected);
            h.push(value, i, &psi);
        }
        h
    };
    let merge = |a: Histogram<D>, b: Histogram<D>| a.merge(b).expect("identical binning");

    Ok(cfg.execution.with_workers(cfg.workers, || {
        cfg.execution.map_reduce(chunks, || template.empty_like(), run_chunk, merge)
    }))
}

/// Monte-Carlo scan of `cfg.samples` Haar states.
pub fn scan<const D: usize>(
    set: &MubSet<D>,
    functional: FunctionalKind,
    bases: &[BasisLabel],
    cfg: &HaarSamplerConfig,
) -> Result<ScanReport<D>> {
    if cfg.samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let started = Instant::now();
    let histogram = scan_indices(set, functional, bases, cfg, 0..cfg.samples)?;
    Ok(ScanReport {
        functional,
        bases: bases.to_vec(),
        mean: histogram.mean(),
        std_error: histogram.std_error(),
        histogram,
        runtime: started.elapsed(),
    })
}
