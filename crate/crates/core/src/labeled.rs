//! First-quantized wavefunctions: each particle carries its own
//! `(spatial, internal)` label and amplitudes live on ordered label tuples.
//!
//! This is where pair exchange `P̂_ij`, symmetrization `Ŝ_ij = 1 + P̂_ij` and
//! antisymmetrization `Â_ij = 1 − P̂_ij` act, optionally on only one degree of
//! freedom. Two bridges connect to [`StateVector`]:
//!
//! * [`LabeledWavefunction::from_second_quantized`] /
//!   [`LabeledWavefunction::to_second_quantized`] map physical (fully
//!   exchange-symmetric) states both ways, exactly.
//! * [`LabeledWavefunction::canonical_slots`] /
//!   [`LabeledWavefunction::to_creation_operators`] read a Fock state as a
//!   single ordered creation-operator string per basis state (photons sorted
//!   by mode) and back. The slot order is what gives photons an identity
//!   ("the first photon in a", "the photon in b") for pairwise exchanges.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{factorial, FockBasisState, ModeLabel, StateVector, MAX_PHOTONS, PRUNE_EPSILON};

/// Label of a single particle; same value space as a mode.
pub type ParticleLabel = ModeLabel;

/// Tolerance for exchange-symmetry comparisons.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Which degree of freedom an exchange touches.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dof {
    Internal,
    External,
    Both,
}

impl Dof {
    pub const ALL: [Dof; 3] = [Dof::Internal, Dof::External, Dof::Both];
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
    Neither,
    Vanishes,
}

impl SymmetryClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryClass::Symmetric => "symmetric",
            SymmetryClass::Antisymmetric => "antisymmetric",
            SymmetryClass::Neither => "neither",
            SymmetryClass::Vanishes => "vanishes",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledWavefunction {
    particles: usize,
    terms: BTreeMap<Vec<ParticleLabel>, C64>,
}

impl LabeledWavefunction {
    /// The zero ("vanished") wavefunction of `particles` particles.
    pub fn zero(particles: usize) -> Self {
        Self { particles, terms: BTreeMap::new() }
    }

    /// Product state `|l₁, l₂, …⟩`.
    pub fn product(labels: &[ParticleLabel]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(labels.to_vec(), C64::new(1.0, 0.0));
        Self { particles: labels.len(), terms }
    }

    pub fn from_terms<I>(particles: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<ParticleLabel>, C64)>,
    {
        let mut map: BTreeMap<Vec<ParticleLabel>, C64> = BTreeMap::new();
        for (labels, amp) in terms {
            if labels.len() != particles {
                return Err(Error::Malformed(format!(
                    "tuple of length {} in a {particles}-particle wavefunction",
                    labels.len()
                )));
            }
            *map.entry(labels).or_default() += amp;
        }
        map.retain(|_, a| a.norm() >= PRUNE_EPSILON);
        Ok(Self { particles, terms: map })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<ParticleLabel>, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, labels: &[ParticleLabel]) -> C64 {
        self.terms.get(labels).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// True for the explicit zero value produced when a projection removes
    /// everything.
    pub fn is_vanished(&self) -> bool {
        self.norm_sqr().sqrt() < 1e-12
    }

    /// Unit-norm copy; the zero wavefunction when the norm is below `1e-12`.
    pub fn normalized(&self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-12 {
            return Self::zero(self.particles);
        }
        self.scaled(C64::new(1.0 / norm, 0.0))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(l, a)| (l.clone(), a * factor))
            .filter(|(_, a)| a.norm() >= PRUNE_EPSILON)
            .collect();
        Self { particles: self.particles, terms }
    }

    /// `self + other`, no normalization.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.particles != other.particles {
            return Err(Error::SectorMismatch { left: self.particles, right: other.particles });
        }
        let all = self.terms.iter().chain(other.terms.iter()).map(|(l, a)| (l.clone(), *a));
        Self::from_terms(self.particles, all)
    }

    pub fn inner_product(&self, other: &Self) -> Result<C64> {
        if self.particles != other.particles {
            return Err(Error::SectorMismatch { left: self.particles, right: other.particles });
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(l, a)| other.terms.get(l).map(|b| a.conj() * b))
            .sum())
    }

    /// Largest `|a_t − b_t|` over the union of supports.
    pub fn max_difference(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, a) in &self.terms {
            worst = worst.max((a - other.amplitude(l)).norm());
        }
        for (l, b) in &other.terms {
            if !self.terms.contains_key(l) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i < j && j < self.particles {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { i, j, n: self.particles })
        }
    }

    /// `P̂_ij` restricted to `dof`: swaps the chosen part of the labels of
    /// particles `i` and `j` in every term. Norm-preserving, never renormalized.
    pub fn exchange(&self, i: usize, j: usize, dof: Dof) -> Result<Self> {
        self.check_pair(i, j)?;
        let terms = self.terms.iter().map(|(labels, a)| {
            let mut l = labels.clone();
            match dof {
                Dof::Both => l.swap(i, j),
                Dof::Internal => {
                    let t = l[i].internal;
                    l[i].internal = l[j].internal;
                    l[j].internal = t;
                }
                Dof::External => {
                    let t = l[i].spatial;
                    l[i].spatial = l[j].spatial;
                    l[j].spatial = t;
                }
            }
            (l, *a)
        });
        Self::from_terms(self.particles, terms)
    }

    /// `(1 + sign·P̂_ij) ψ` without normalization; `sign` is `+1` or `−1`.
    pub fn apply_pair_projector(&self, i: usize, j: usize, dof: Dof, sign: f64) -> Result<Self> {
        let swapped = self.exchange(i, j, dof)?;
        self.add(&swapped.scaled(C64::new(sign, 0.0)))
    }

    /// `Ŝ_ij ψ`, renormalized (zero wavefunction if it vanishes).
    pub fn symmetrize(&self, i: usize, j: usize, dof: Dof) -> Result<Self> {
        Ok(self.apply_pair_projector(i, j, dof, 1.0)?.normalized())
    }

    /// `Â_ij ψ`, renormalized (zero wavefunction if it vanishes).
    pub fn antisymmetrize(&self, i: usize, j: usize, dof: Dof) -> Result<Self> {
        Ok(self.apply_pair_projector(i, j, dof, -1.0)?.normalized())
    }

    /// Mixed-symmetry construction: symmetrize particles 0,1 then
    /// antisymmetrize particles 1,2 (both on `dof`).
    pub fn mixed_symmetry(&self, dof: Dof) -> Result<Self> {
        self.symmetrize(0, 1, dof)?.antisymmetrize(1, 2, dof)
    }

    /// Projection onto the fully exchange-symmetric subspace,
    /// `(1/N!) ∑_σ P̂_σ ψ`, renormalized.
    pub fn bosonize(&self) -> Self {
        let perms = permutations(self.particles);
        let count = perms.len() as f64;
        let terms = self.terms.iter().flat_map(|(labels, a)| {
            perms.iter().map(move |p| {
                let l: Vec<ParticleLabel> = p.iter().map(|&k| labels[k]).collect();
                (l, a / count)
            })
        });
        Self::from_terms(self.particles, terms)
            .expect("permutations preserve length")
            .normalized()
    }

    /// Largest deviation of `P̂_ij ψ` from `ψ` over all pairs, with the pair
    /// attaining it.
    fn bosonic_deviation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.particles {
            for j in i + 1..self.particles {
                let d = self.exchange(i, j, Dof::Both).expect("valid pair").max_difference(self);
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    pub fn is_bosonic(&self) -> bool {
        self.bosonic_deviation().0 <= SYMMETRY_TOL
    }

    /// Fully symmetrized first-quantized form of a Fock state:
    /// `|n⟩ = √(∏ n!/N!) ∑_{distinct orderings} |l_σ(1) … l_σ(N)⟩`.
    pub fn from_second_quantized(s: &StateVector) -> Self {
        let n = s.photons();
        let mut terms = Vec::new();
        for (basis, amp) in s.terms() {
            let modes = basis.modes();
            let orderings = distinct_orderings(&modes);
            let weight = (basis.factorial_product() / factorial(n)).sqrt();
            terms.extend(orderings.into_iter().map(|l| (l, amp * weight)));
        }
        Self::from_terms(n, terms).expect("all orderings have N labels")
    }

    /// Inverse of [`from_second_quantized`](Self::from_second_quantized).
    /// Rejects wavefunctions that are not symmetric under every pair exchange.
    pub fn to_second_quantized(&self) -> Result<StateVector> {
        if self.particles > MAX_PHOTONS {
            return Err(Error::TooManyPhotons(self.particles));
        }
        let (deviation, i, j) = self.bosonic_deviation();
        if deviation > SYMMETRY_TOL {
            return Err(Error::NonBosonic { i, j, deviation });
        }
        let n_fact = factorial(self.particles);
        let mut terms = BTreeMap::new();
        for (labels, amp) in &self.terms {
            let basis = FockBasisState::from_modes(labels)?;
            // every ordering carries the same amplitude; keep one
            terms.entry(basis).or_insert_with(|| amp * (n_fact / basis.factorial_product()).sqrt());
        }
        StateVector::from_terms(self.particles, terms)
    }

    /// One creation-operator string per basis state, photons sorted by mode:
    /// `α|n⟩ ↦ (α/√∏n!) |sorted labels⟩`. Slot `k` is then the `k`-th photon
    /// in mode order, which fixes photon roles for pairwise exchanges.
    pub fn canonical_slots(s: &StateVector) -> Self {
        let terms = s.terms().map(|(b, a)| (b.modes(), a / b.factorial_product().sqrt()));
        Self::from_terms(s.photons(), terms).expect("basis modes have N labels")
    }

    /// Reads every tuple as the creation-operator product `l₁† l₂† … |vac⟩`
    /// and sums. Not normalized; returns the zero vector if everything
    /// cancels. Inverse of [`canonical_slots`](Self::canonical_slots).
    pub fn to_creation_operators(&self) -> Result<StateVector> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (labels, amp) in &self.terms {
            let basis = FockBasisState::from_modes(labels)?;
            terms.push((basis, amp * basis.factorial_product().sqrt()));
        }
        StateVector::from_terms(self.particles, terms)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::with_capacity(out.len() * (k + 1));
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Distinct orderings of a multiset of labels.
fn distinct_orderings(labels: &[ParticleLabel]) -> Vec<Vec<ParticleLabel>> {
    let mut all: Vec<Vec<ParticleLabel>> = permutations(labels.len())
        .into_iter()
        .map(|p| p.into_iter().map(|k| labels[k]).collect())
        .collect();
    all.sort();
    all.dedup();
    all
}

/// Photon roles in an `a, a, b` three-photon state, as slots of
/// [`LabeledWavefunction::canonical_slots`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhotonPair {
    /// The two photons in spatial mode a.
    SameModeA,
    /// The second photon in mode a and the photon in mode b.
    SecondAWithB,
    /// The first photon in mode a (always internal state 0) and the photon in
    /// mode b.
    FirstAWithB,
}

impl PhotonPair {
    pub const ALL: [PhotonPair; 3] = [PhotonPair::SameModeA, PhotonPair::SecondAWithB, PhotonPair::FirstAWithB];

    pub fn slots(self) -> (usize, usize) {
        match self {
            PhotonPair::SameModeA => (0, 1),
            PhotonPair::SecondAWithB => (1, 2),
            PhotonPair::FirstAWithB => (0, 2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhotonPair::SameModeA => "same_mode_a",
            PhotonPair::SecondAWithB => "second_a_with_b",
            PhotonPair::FirstAWithB => "first_a_with_b",
        }
    }
}

/// Exchange symmetry of `s` under swapping `dof` of the photons in `pair`.
pub fn classify_pair_symmetry(s: &StateVector, pair: PhotonPair, dof: Dof) -> Result<SymmetryClass> {
    let (i, j) = pair.slots();
    classify_slots(s, i, j, dof)
}

/// As [`classify_pair_symmetry`] with explicit slots (photons ordered by mode).
///
/// The state is lifted to its canonical slot form, the selected degree of
/// freedom of slots `i` and `j` is swapped, and the result is read back as
/// creation operators. It is symmetric if that reproduces `+s`, antisymmetric
/// for `−s`, vanishes if nothing survives, and neither otherwise.
pub fn classify_slots(s: &StateVector, i: usize, j: usize, dof: Dof) -> Result<SymmetryClass> {
    if i >= j || j >= s.photons() {
        return Err(Error::PairNotResolvable(i, j));
    }
    let lifted = LabeledWavefunction::canonical_slots(s);
    let exchanged = lifted.exchange(i, j, dof)?;
    let reading = exchanged.to_creation_operators()?;
    let scale = s.norm_sqr().sqrt();
    if reading.norm_sqr().sqrt() < 1e-12 * scale.max(1.0) {
        return Ok(SymmetryClass::Vanishes);
    }
    let tol = SYMMETRY_TOL * scale.max(1.0);
    if reading.max_amplitude_difference(s) <= tol {
        Ok(SymmetryClass::Symmetric)
    } else if reading.max_amplitude_difference(&s.scaled(C64::new(-1.0, 0.0))) <= tol {
        Ok(SymmetryClass::Antisymmetric)
    } else {
        Ok(SymmetryClass::Neither)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryCell {
    pub state: &'static str,
    pub pair: PhotonPair,
    pub dof: Dof,
    pub class: SymmetryClass,
}

/// Classification of the symmetric and mixed-symmetry states under every
/// pair and degree of freedom.
pub fn symmetry_table() -> Result<Vec<SymmetryCell>> {
    let states = [("sym", crate::states::sym_state()), ("mix", crate::states::mix_state())];
    let mut cells = Vec::new();
    for (name, s) in &states {
        for pair in PhotonPair::ALL {
            for dof in Dof::ALL {
                cells.push(SymmetryCell { state: name, pair, dof, class: classify_pair_symmetry(s, pair, dof)? });
            }
        }
    }
    Ok(cells)
}
