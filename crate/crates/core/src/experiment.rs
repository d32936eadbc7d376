//! Forward model of the experiment: post-selected state preparation, HOM dips,
//! pseudo photon-number-resolving detection and Monte Carlo photon counting.
//!
//! Each output arm is split over `k` threshold detectors. A group of `n`
//! photons is counted correctly only if every photon lands in a different
//! channel, which happens with probability `k!/((k−n)! kⁿ)`; otherwise fewer
//! clicks are registered. Corrected rates divide raw counts by that
//! probability for each arm.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ModeLabel, Spatial, StateVector};
use crate::format::sig12;
use crate::interferometer::{balanced_bs_3mode, scattering_distribution, evolve_substitution, SpatialUnitary};
use crate::states::{bell_phi, double_a0_b1};

/// Shots simulated per independent RNG stream.
pub const SHARD_SHOTS: u64 = 1 << 16;

/// Default number of detector channels per output arm.
pub const DEFAULT_CHANNELS: usize = 4;

/// Width of the HOM dip in delay units.
pub const HOM_WIDTH: f64 = 1.0;

/// Which heralding outcome of the addition splitter is kept.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Herald {
    /// No photon in mode γ: the photon was added to the Bell pair.
    GammaEmpty,
    /// At least one photon in mode γ.
    GammaOccupied,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prepared {
    pub state: StateVector,
    pub success_probability: f64,
}

/// Adds a photon to the Bell pair `|Ψ^φ⟩` by interfering `γ†₀|vac⟩` with arm
/// a on the balanced splitter and keeping events with mode γ empty.
///
/// The returned state is renormalized and phase-fixed so that its
/// `|2a₀, b₁⟩` amplitude is real and positive, like [`three_photon`].
///
/// [`three_photon`]: crate::states::three_photon
pub fn prepare_postselected(phi: f64) -> Result<Prepared> {
    prepare_branch(phi, Herald::GammaEmpty)
}

pub fn prepare_branch(phi: f64, herald: Herald) -> Result<Prepared> {
    let input = bell_phi(phi).with_photon_added(ModeLabel::G0)?;
    let out = evolve_substitution(&input, &balanced_bs_3mode())?;
    let gamma = Spatial::Gamma.index();
    let kept = out.project(|b| {
        let occupied = b.spatial_counts()[gamma] > 0;
        match herald {
            Herald::GammaEmpty => !occupied,
            Herald::GammaOccupied => occupied,
        }
    });
    let success_probability = kept.norm_sqr();
    let state = kept.normalized()?.with_positive_amplitude_on(&double_a0_b1());
    Ok(Prepared { state, success_probability })
}

/// Coincidence probability behind a balanced splitter for two photons with
/// mode overlap `overlap`, delayed by `tau`:
/// `½(1 − V exp(−τ²/2σ²))`.
pub fn hom_coincidence(tau: f64, overlap: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!("overlap must lie in [0, 1], got {overlap}")));
    }
    let x = tau / HOM_WIDTH;
    Ok(0.5 * (1.0 - overlap * (-0.5 * x * x).exp()))
}

pub fn hom_scan(delays: &[f64], overlap: f64) -> Result<Vec<(f64, f64)>> {
    delays.iter().map(|&t| Ok((t, hom_coincidence(t, overlap)?))).collect()
}

/// Probability that `n` photons spread uniformly over `k` channels hit `n`
/// different channels: `k!/((k−n)! kⁿ)`, and 0 for `n > k`.
pub fn pnr_resolve_probability(n: usize, k: usize) -> f64 {
    if n > k {
        return 0.0;
    }
    (0..n).map(|i| (k - i) as f64 / k as f64).product()
}

/// Number of distinct channels hit when `n` photons each pick one of `k`
/// channels uniformly.
pub fn demux_sample<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> usize {
    if n == 0 || k == 0 {
        return 0;
    }
    let mut hit = vec![false; k];
    let mut distinct = 0;
    for _ in 0..n {
        let c = rng.random_range(0..k);
        if !hit[c] {
            hit[c] = true;
            distinct += 1;
        }
    }
    distinct
}

/// Fraction of `samples` demultiplexing trials in which all `n` photons hit
/// different channels, drawn from a ChaCha8 generator seeded with `seed`.
pub fn resolved_fraction(n: usize, k: usize, samples: u64, seed: u64) -> f64 {
    if samples == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples).filter(|_| demux_sample(n, k, &mut rng) == n).count();
    hits as f64 / samples as f64
}

/// Detection settings shared by both output arms.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DetectorModel {
    pub channels: usize,
    /// Probability that each photon is detected at all.
    pub efficiency: f64,
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self { channels: DEFAULT_CHANNELS, efficiency: 1.0 }
    }
}

impl DetectorModel {
    pub fn new(channels: usize, efficiency: f64) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidParameter("at least one detector channel is required".into()));
        }
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(Error::InvalidParameter(format!("efficiency must lie in [0, 1], got {efficiency}")));
        }
        Ok(Self { channels, efficiency })
    }

    /// Clicks registered in one arm receiving `n` photons.
    pub fn detect<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> usize {
        let survivors = if self.efficiency >= 1.0 {
            n
        } else {
            (0..n).filter(|_| rng.random::<f64>() < self.efficiency).count()
        };
        demux_sample(survivors, self.channels, rng)
    }
}

/// Clicks in each output arm, each bounded by the channel count `k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClickPattern {
    pub clicks_a: u8,
    pub clicks_b: u8,
    pub k: u8,
}

impl ClickPattern {
    pub fn new(clicks_a: u8, clicks_b: u8, k: u8) -> Result<Self> {
        if clicks_a > k || clicks_b > k {
            return Err(Error::InvalidParameter(format!("clicks ({clicks_a}, {clicks_b}) exceed {k} channels")));
        }
        Ok(Self { clicks_a, clicks_b, k })
    }

    pub fn total(&self) -> usize {
        (self.clicks_a + self.clicks_b) as usize
    }
}

/// Raw click counts of a run. Shots without any click are not recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CountRecordWire", into = "CountRecordWire")]
pub struct CountRecord {
    pub shots: u64,
    pub seed: u64,
    pub k: usize,
    counts: BTreeMap<(u8, u8), u64>,
}

#[derive(Serialize, Deserialize)]
struct CountRecordWire {
    shots: u64,
    seed: u64,
    k: usize,
    counts: BTreeMap<String, u64>,
}

impl From<CountRecord> for CountRecordWire {
    fn from(r: CountRecord) -> Self {
        let counts = r.counts.iter().map(|(&(a, b), &c)| (format!("{a},{b}"), c)).collect();
        Self { shots: r.shots, seed: r.seed, k: r.k, counts }
    }
}

impl TryFrom<CountRecordWire> for CountRecord {
    type Error = Error;

    fn try_from(w: CountRecordWire) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (key, c) in w.counts {
            let parsed = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<u8>().ok()?, b.trim().parse::<u8>().ok()?)));
            let pair = parsed.ok_or_else(|| Error::Malformed(format!("bad click pattern key {key:?}")))?;
            counts.insert(pair, c);
        }
        let record = CountRecord { shots: w.shots, seed: w.seed, k: w.k, counts };
        if record.total() > record.shots {
            return Err(Error::Malformed("counts exceed the number of shots".into()));
        }
        Ok(record)
    }
}

impl CountRecord {
    pub fn empty(shots: u64, seed: u64, k: usize) -> Self {
        Self { shots, seed, k, counts: BTreeMap::new() }
    }

    /// Builds a record from `((clicks_a, clicks_b), count)` pairs.
    pub fn from_counts<I>(shots: u64, seed: u64, k: usize, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u8, u8), u64)>,
    {
        let wire_counts = counts.into_iter().map(|((a, b), c)| (format!("{a},{b}"), c)).collect();
        Self::try_from(CountRecordWire { shots, seed, k, counts: wire_counts })
    }

    pub fn get(&self, clicks_a: u8, clicks_b: u8) -> u64 {
        self.counts.get(&(clicks_a, clicks_b)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClickPattern, u64)> + '_ {
        let k = self.k as u8;
        self.counts.iter().map(move |(&(a, b), &c)| (ClickPattern { clicks_a: a, clicks_b: b, k }, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("count record serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Samples photon-number patterns of `U|s⟩` and pushes each through the
/// detectors. Photons in mode γ are not detected.
///
/// Shots are split into shards of [`SHARD_SHOTS`]; shard `i` draws from the
/// ChaCha8 stream `i` of `seed`, so the record depends only on the inputs and
/// not on the thread count.
pub fn simulate_counts(
    s: &StateVector,
    u: &SpatialUnitary,
    shots: u64,
    detector: DetectorModel,
    seed: u64,
) -> Result<CountRecord> {
    let dist = scattering_distribution(s, u)?;
    let mut patterns = Vec::new();
    let mut cumulative = Vec::new();
    let mut acc = 0.0;
    for (pat, &p) in dist.iter() {
        if p > 0.0 {
            acc += p;
            patterns.push((pat.a as usize, pat.b as usize));
            cumulative.push(acc);
        }
    }
    let mut record = CountRecord::empty(shots, seed, detector.channels);
    if shots == 0 || patterns.is_empty() {
        return Ok(record);
    }

    let shards = shots.div_ceil(SHARD_SHOTS);
    let partials: Vec<BTreeMap<(u8, u8), u64>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let len = SHARD_SHOTS.min(shots - shard * SHARD_SHOTS);
            let mut counts = BTreeMap::new();
            for _ in 0..len {
                let x = rng.random::<f64>() * acc;
                let idx = cumulative.partition_point(|&c| c <= x).min(patterns.len() - 1);
                let (na, nb) = patterns[idx];
                let ca = detector.detect(na, &mut rng) as u8;
                let cb = detector.detect(nb, &mut rng) as u8;
                if ca + cb > 0 {
                    *counts.entry((ca, cb)).or_insert(0) += 1;
                }
            }
            counts
        })
        .collect();
    for part in partials {
        for (key, c) in part {
            *record.counts.entry(key).or_insert(0) += c;
        }
    }
    Ok(record)
}

/// Raw count with the demultiplexing correction applied. `rate` and `error`
/// are `None` when a pattern cannot be resolved with the given channels.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CorrectedCount {
    pub raw: u64,
    pub rate: Option<f64>,
    pub error: Option<f64>,
}

/// `raw / (P(n_a,k) P(n_b,k))` with Poisson error `√raw` scaled alike.
pub fn correct_counts(raw: &CountRecord, k: usize) -> BTreeMap<(u8, u8), CorrectedCount> {
    raw.counts
        .iter()
        .map(|(&(a, b), &c)| {
            let p = pnr_resolve_probability(a as usize, k) * pnr_resolve_probability(b as usize, k);
            let corrected = if p > 0.0 {
                CorrectedCount { raw: c, rate: Some(c as f64 / p), error: Some((c as f64).sqrt() / p) }
            } else {
                CorrectedCount { raw: c, rate: None, error: None }
            };
            ((a, b), corrected)
        })
        .collect()
}

pub const CORRECTED_HEADER: &str = "na,nb,raw,corrected,error";

/// Corrected counts as CSV; unresolvable entries print `nan`.
pub fn corrected_csv(corrected: &BTreeMap<(u8, u8), CorrectedCount>) -> String {
    let mut out = String::from(CORRECTED_HEADER);
    out.push('\n');
    for (&(a, b), c) in corrected {
        let rate = c.rate.map_or_else(|| "nan".to_string(), sig12);
        let err = c.error.map_or_else(|| "nan".to_string(), sig12);
        writeln!(out, "{a},{b},{},{rate},{err}", c.raw).expect("writing to a String");
    }
    out
}

/// Estimated probability of a photon-number pattern with its one-sigma error.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Estimate {
    pub na: u8,
    pub nb: u8,
    pub probability: f64,
    pub sigma: f64,
}

/// Normalizes corrected rates over the patterns whose click total equals
/// `photons`. Lower-click patterns hold unresolved events and are ignored.
pub fn estimate_distribution(corrected: &BTreeMap<(u8, u8), CorrectedCount>, photons: usize) -> Vec<Estimate> {
    let full: Vec<(&(u8, u8), &CorrectedCount)> = corrected
        .iter()
        .filter(|(&(a, b), c)| (a + b) as usize == photons && c.rate.is_some())
        .collect();
    let total: f64 = full.iter().filter_map(|(_, c)| c.rate).sum();
    if total <= 0.0 {
        return Vec::new();
    }
    full.into_iter()
        .map(|(&(na, nb), c)| Estimate {
            na,
            nb,
            probability: c.rate.unwrap_or(0.0) / total,
            sigma: c.error.unwrap_or(0.0) / total,
        })
        .collect()
}
