//! The two evolution engines.
//!
//! [`evolve_substitution`] expands the creation-operator polynomial of each
//! input basis state after substituting every operator by its image.
//! [`evolve_permanent`] computes every transition amplitude
//! `⟨out|U|in⟩ = perm(U_{out,in}) / √(∏ n_in! ∏ n_out!)` directly. They share
//! nothing beyond the unitary and the state types, so each checks the other.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use super::permanent::{permanent, SquareMatrix};
use super::SpatialUnitary;
use crate::distribution::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::fock::{basis_states, FockBasisState, ModeLabel, StateVector, NUM_MODES};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Engine {
    Substitution,
    Permanent,
}

pub fn evolve(engine: Engine, s: &StateVector, u: &SpatialUnitary) -> Result<StateVector> {
    match engine {
        Engine::Substitution => evolve_substitution(s, u),
        Engine::Permanent => evolve_permanent(s, u),
    }
}

/// Rejects states with photons in spatial modes the unitary does not act on.
fn check_support(s: &StateVector, u: &SpatialUnitary) -> Result<()> {
    for (basis, _) in s.terms() {
        for m in ModeLabel::ALL {
            if basis.occupation(m) > 0 && u.slot(m.spatial).is_none() {
                return Err(Error::DimensionMismatch { unitary: u.dim(), mode: m.spatial.name() });
            }
        }
    }
    Ok(())
}

/// Images `(mode index, coefficient)` of the creation operator of `mode`.
fn operator_image(mode: ModeLabel, u: &SpatialUnitary) -> Vec<(usize, C64)> {
    let col = u.slot(mode.spatial).expect("support checked");
    (0..u.dim())
        .map(|k| (ModeLabel::new(u.spatial_at(k), mode.internal).index(), u.get(k, col)))
        .filter(|(_, c)| *c != C64::default())
        .collect()
}

/// Polynomial substitution engine.
pub fn evolve_substitution(s: &StateVector, u: &SpatialUnitary) -> Result<StateVector> {
    check_support(s, u)?;
    let images: Vec<Vec<(usize, C64)>> = ModeLabel::ALL
        .iter()
        .map(|&m| if u.slot(m.spatial).is_some() { operator_image(m, u) } else { Vec::new() })
        .collect();

    // coefficients of creation-operator monomials ∏ a†^n, keyed by exponent
    let mut out: HashMap<[u8; NUM_MODES], C64> = HashMap::new();
    for (basis, amp) in s.terms() {
        // |n⟩ = ∏ a†^n / √(∏ n!) |vac⟩
        let mut poly: HashMap<[u8; NUM_MODES], C64> = HashMap::new();
        poly.insert([0; NUM_MODES], amp / basis.factorial_product().sqrt());
        for mode in basis.modes() {
            let mut next: HashMap<[u8; NUM_MODES], C64> = HashMap::with_capacity(poly.len() * 2);
            for (mono, c) in &poly {
                for &(target, coeff) in &images[mode.index()] {
                    let mut m = *mono;
                    m[target] += 1;
                    *next.entry(m).or_default() += c * coeff;
                }
            }
            poly = next;
        }
        for (mono, c) in poly {
            *out.entry(mono).or_default() += c;
        }
    }

    let terms = out.into_iter().map(|(mono, c)| {
        let basis = FockBasisState::new(mono).expect("photon number conserved");
        (basis, c * basis.factorial_product().sqrt())
    });
    StateVector::from_terms(s.photons(), terms)
}

/// Permanent engine: output amplitudes from permanents of the
/// row/column-repeated submatrix of `U ⊗ 1_internal`.
pub fn evolve_permanent(s: &StateVector, u: &SpatialUnitary) -> Result<StateVector> {
    check_support(s, u)?;
    // full 6x6 mode matrix, W[out][in]
    let mode_matrix = |out: ModeLabel, inp: ModeLabel| -> C64 {
        match (u.slot(out.spatial), u.slot(inp.spatial)) {
            (Some(r), Some(c)) if out.internal == inp.internal => u.get(r, c),
            _ => C64::default(),
        }
    };
    let support: Vec<ModeLabel> = ModeLabel::ALL.iter().copied().filter(|m| u.slot(m.spatial).is_some()).collect();
    let outputs = basis_states(s.photons(), &support);

    let inputs: Vec<(Vec<ModeLabel>, f64, C64)> = s
        .terms()
        .map(|(b, a)| (b.modes(), b.factorial_product(), *a))
        .collect();

    let mut terms = Vec::with_capacity(outputs.len());
    for out in outputs {
        let rows = out.modes();
        let out_fact = out.factorial_product();
        let mut amp = C64::default();
        for (cols, in_fact, in_amp) in &inputs {
            let m = SquareMatrix::from_fn(rows.len(), |i, j| mode_matrix(rows[i], cols[j]));
            amp += in_amp * permanent(&m) / (in_fact * out_fact).sqrt();
        }
        terms.push((out, amp));
    }
    StateVector::from_terms(s.photons(), terms)
}

/// Spatial photon-number distribution after evolving `s` through `u`.
pub fn scattering_distribution(s: &StateVector, u: &SpatialUnitary) -> Result<OutcomeDistribution> {
    Ok(evolve_substitution(s, u)?.marginal_spatial_distribution())
}
