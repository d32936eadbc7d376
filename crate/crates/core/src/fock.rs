//! Second-quantized states over three spatial modes (γ, a, b), each carrying
//! two internal states (0, 1).
//!
//! A [`FockBasisState`] is an occupation vector over the six [`ModeLabel`]s in
//! their canonical order `(γ,0) < (γ,1) < (a,0) < (a,1) < (b,0) < (b,1)`. A
//! [`StateVector`] is a sparse complex superposition of basis states that all
//! carry the same total photon number.
//!
//! The creation-operator monomial `a†₀ a†₀ b†₁ |vac⟩` equals `√2 |2,0,1⟩` in
//! occupation notation; every conversion in this crate keeps that `√(∏ n!)`
//! bookkeeping explicit.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::distribution::{OutcomeDistribution, Pattern};
use crate::error::{Error, Result};

/// Number of (spatial, internal) modes.
pub const NUM_MODES: usize = 6;
/// Largest photon number any state may carry.
pub const MAX_PHOTONS: usize = 6;
/// Amplitudes smaller than this are dropped after arithmetic.
pub const PRUNE_EPSILON: f64 = 1e-14;
/// Comparison tolerance for amplitudes.
pub const AMPLITUDE_TOL: f64 = 1e-10;

/// External (detected) degree of freedom.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spatial {
    Gamma,
    A,
    B,
}

impl Spatial {
    pub const ALL: [Spatial; 3] = [Spatial::Gamma, Spatial::A, Spatial::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Spatial::Gamma => "gamma",
            Spatial::A => "a",
            Spatial::B => "b",
        }
    }
}

/// Internal (undetected) degree of freedom, e.g. polarisation H/V.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Internal {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

impl Internal {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn flipped(self) -> Internal {
        match self {
            Internal::Zero => Internal::One,
            Internal::One => Internal::Zero,
        }
    }
}

/// One of the six single-photon modes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    pub spatial: Spatial,
    pub internal: Internal,
}

impl ModeLabel {
    pub const fn new(spatial: Spatial, internal: Internal) -> Self {
        Self { spatial, internal }
    }

    pub const G0: ModeLabel = ModeLabel::new(Spatial::Gamma, Internal::Zero);
    pub const G1: ModeLabel = ModeLabel::new(Spatial::Gamma, Internal::One);
    pub const A0: ModeLabel = ModeLabel::new(Spatial::A, Internal::Zero);
    pub const A1: ModeLabel = ModeLabel::new(Spatial::A, Internal::One);
    pub const B0: ModeLabel = ModeLabel::new(Spatial::B, Internal::Zero);
    pub const B1: ModeLabel = ModeLabel::new(Spatial::B, Internal::One);

    /// All labels in canonical order.
    pub const ALL: [ModeLabel; NUM_MODES] = [
        ModeLabel::G0,
        ModeLabel::G1,
        ModeLabel::A0,
        ModeLabel::A1,
        ModeLabel::B0,
        ModeLabel::B1,
    ];

    /// Position in the canonical ordering.
    pub fn index(self) -> usize {
        2 * self.spatial.index() + self.internal.index()
    }

    pub fn from_index(idx: usize) -> ModeLabel {
        ModeLabel::ALL[idx]
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.spatial {
            Spatial::Gamma => "γ",
            Spatial::A => "a",
            Spatial::B => "b",
        };
        write!(f, "{}{}", s, self.internal.index())
    }
}

/// Occupation numbers over the six modes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockBasisState([u8; NUM_MODES]);

impl FockBasisState {
    pub fn new(occupations: [u8; NUM_MODES]) -> Result<Self> {
        let total: usize = occupations.iter().map(|&n| n as usize).sum();
        if total > MAX_PHOTONS {
            return Err(Error::TooManyPhotons(total));
        }
        Ok(Self(occupations))
    }

    /// Basis state reached by applying the listed creation operators to vacuum.
    pub fn from_modes(modes: &[ModeLabel]) -> Result<Self> {
        if modes.len() > MAX_PHOTONS {
            return Err(Error::TooManyPhotons(modes.len()));
        }
        let mut occ = [0u8; NUM_MODES];
        for m in modes {
            occ[m.index()] += 1;
        }
        Ok(Self(occ))
    }

    pub fn occupations(&self) -> &[u8; NUM_MODES] {
        &self.0
    }

    pub fn occupation(&self, mode: ModeLabel) -> u8 {
        self.0[mode.index()]
    }

    pub fn total_photons(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    /// Photon count per spatial mode `(γ, a, b)`, summed over internal states.
    pub fn spatial_counts(&self) -> [u8; 3] {
        [self.0[0] + self.0[1], self.0[2] + self.0[3], self.0[4] + self.0[5]]
    }

    pub fn pattern(&self) -> Pattern {
        let [g, a, b] = self.spatial_counts();
        Pattern::new(g, a, b)
    }

    /// `∏ n_m!` over modes.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n as usize)).product()
    }

    /// Modes listed with multiplicity, in canonical order.
    pub fn modes(&self) -> Vec<ModeLabel> {
        let mut out = Vec::with_capacity(self.total_photons());
        for (idx, &n) in self.0.iter().enumerate() {
            for _ in 0..n {
                out.push(ModeLabel::from_index(idx));
            }
        }
        out
    }

    /// The same configuration with internal states 0 and 1 swapped everywhere.
    pub fn flip_internal(&self) -> Self {
        let o = self.0;
        Self([o[1], o[0], o[3], o[2], o[5], o[4]])
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in ModeLabel::ALL {
            let n = self.occupation(m);
            if n == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}^{n}")?;
            }
        }
        if first {
            write!(f, "vac")?;
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Every basis state with `photons` photons spread over `modes`, in
/// lexicographic order of the occupations listed in `modes` order.
pub fn basis_states(photons: usize, modes: &[ModeLabel]) -> Vec<FockBasisState> {
    fn rec(n: usize, modes: &[ModeLabel], occ: &mut [u8; NUM_MODES], out: &mut Vec<FockBasisState>) {
        match modes {
            [] => {
                if n == 0 {
                    out.push(FockBasisState(*occ));
                }
            }
            [first, rest @ ..] => {
                let idx = first.index();
                let before = occ[idx];
                let upper = if rest.is_empty() { n..=n } else { 0..=n };
                for k in upper {
                    occ[idx] = before + k as u8;
                    rec(n - k, rest, occ, out);
                }
                occ[idx] = before;
            }
        }
    }
    let mut out = Vec::new();
    if photons <= MAX_PHOTONS {
        rec(photons, modes, &mut [0; NUM_MODES], &mut out);
    }
    out
}

/// Complex superposition over basis states of a single photon-number sector.
///
/// Values are immutable; every operation returns a new state. Constructors that
/// mirror physical preparations return normalized states, while
/// [`StateVector::project`] and [`StateVector::from_terms`] keep raw amplitudes
/// so that success probabilities can be read off as `norm_sqr`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    photons: usize,
    terms: BTreeMap<FockBasisState, C64>,
}

impl StateVector {
    /// The zero vector of a sector. Used for projections that remove everything.
    pub fn zero(photons: usize) -> Self {
        Self { photons, terms: BTreeMap::new() }
    }

    pub fn basis(state: FockBasisState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(state, C64::new(1.0, 0.0));
        Self { photons: state.total_photons(), terms }
    }

    /// Unit-norm state `∏ a†_m |vac⟩` (normalized), i.e. the single basis state
    /// with the listed occupations.
    pub fn from_monomial(ops: &[ModeLabel]) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyMonomial);
        }
        Ok(Self::basis(FockBasisState::from_modes(ops)?))
    }

    /// Collects raw amplitudes, summing duplicates and pruning near-zeros.
    /// No normalization is applied.
    pub fn from_terms<I>(photons: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockBasisState, C64)>,
    {
        if photons > MAX_PHOTONS {
            return Err(Error::TooManyPhotons(photons));
        }
        let mut map: BTreeMap<FockBasisState, C64> = BTreeMap::new();
        for (basis, amp) in terms {
            let n = basis.total_photons();
            if n != photons {
                return Err(Error::SectorMismatch { left: photons, right: n });
            }
            *map.entry(basis).or_default() += amp;
        }
        map.retain(|_, a| a.norm() >= PRUNE_EPSILON);
        Ok(Self { photons, terms: map })
    }

    /// Normalized linear combination `∑ c_k |ψ_k⟩`.
    pub fn superpose(parts: &[(C64, &StateVector)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::EmptySuperposition)?;
        let photons = first.photons;
        let mut acc = Vec::new();
        for (coeff, state) in parts {
            if state.photons != photons {
                return Err(Error::SectorMismatch { left: photons, right: state.photons });
            }
            acc.extend(state.terms.iter().map(|(b, a)| (*b, coeff * a)));
        }
        Self::from_terms(photons, acc)?.normalized()
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the state carries no amplitude at all, e.g. after a
    /// projection that removed every term.
    pub fn is_zero(&self) -> bool {
        self.norm_sqr() < PRUNE_EPSILON * PRUNE_EPSILON
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockBasisState, &C64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, basis: &FockBasisState) -> C64 {
        self.terms.get(basis).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(b, a)| (*b, a * factor))
            .filter(|(_, a)| a.norm() >= PRUNE_EPSILON)
            .collect();
        Self { photons: self.photons, terms }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<C64> {
        if self.photons != other.photons {
            return Err(Error::SectorMismatch { left: self.photons, right: other.photons });
        }
        // iterate the smaller map
        let (small, large, conj_small) = if self.terms.len() <= other.terms.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = C64::default();
        for (b, a) in &small.terms {
            if let Some(c) = large.terms.get(b) {
                acc += if conj_small { a.conj() * c } else { c.conj() * a };
            }
        }
        Ok(acc)
    }

    /// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)`; insensitive to global phase and scale.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom < 1e-24 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.inner_product(other)?.norm_sqr() / denom)
    }

    /// Largest `|a_k - b_k|` over the union of supports.
    pub fn max_amplitude_difference(&self, other: &StateVector) -> f64 {
        let mut worst: f64 = 0.0;
        for (b, a) in &self.terms {
            worst = worst.max((a - other.amplitude(b)).norm());
        }
        for (b, a) in &other.terms {
            if !self.terms.contains_key(b) {
                worst = worst.max(a.norm());
            }
        }
        worst
    }

    /// Rotates the global phase so that the amplitude on `reference` is real
    /// and positive. Leaves the state unchanged when that amplitude vanishes.
    pub fn with_positive_amplitude_on(&self, reference: &FockBasisState) -> Self {
        let a = self.amplitude(reference);
        if a.norm() < PRUNE_EPSILON {
            return self.clone();
        }
        self.scaled(a.conj() / a.norm())
    }

    /// Keeps the basis states accepted by `keep`; raw amplitudes, no
    /// renormalization.
    pub fn project<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&FockBasisState) -> bool,
    {
        let terms = self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, a)| (*b, *a)).collect();
        Self { photons: self.photons, terms }
    }

    /// `a†_mode |ψ⟩`, renormalized.
    pub fn with_photon_added(&self, mode: ModeLabel) -> Result<Self> {
        let photons = self.photons + 1;
        if photons > MAX_PHOTONS {
            return Err(Error::TooManyPhotons(photons));
        }
        let idx = mode.index();
        let raised = self.terms.iter().map(|(b, a)| {
            let mut occ = *b.occupations();
            occ[idx] += 1;
            let factor = (occ[idx] as f64).sqrt();
            (FockBasisState(occ), a * factor)
        });
        Self::from_terms(photons, raised)?.normalized()
    }

    /// Relabels internal states 0 ↔ 1 in every mode.
    pub fn flip_internal(&self) -> Self {
        let terms = self.terms.iter().map(|(b, a)| (b.flip_internal(), *a)).collect();
        Self { photons: self.photons, terms }
    }

    /// Probability of each spatial photon-number pattern `(n_γ, n_a, n_b)`,
    /// summed over internal configurations.
    pub fn marginal_spatial_distribution(&self) -> OutcomeDistribution {
        let mut dist = OutcomeDistribution::new();
        for (b, a) in &self.terms {
            dist.add(b.pattern(), a.norm_sqr());
        }
        dist
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, a)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, b)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    occ: [u8; NUM_MODES],
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct WireState {
    photons: usize,
    terms: Vec<WireTerm>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = WireState {
            photons: self.photons,
            terms: self
                .terms
                .iter()
                .map(|(b, a)| WireTerm { occ: b.0, re: a.re, im: a.im })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WireState::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(wire.terms.len());
        for t in wire.terms {
            let basis = FockBasisState::new(t.occ).map_err(D::Error::custom)?;
            terms.push((basis, C64::new(t.re, t.im)));
        }
        StateVector::from_terms(wire.photons, terms).map_err(D::Error::custom)
    }
}
