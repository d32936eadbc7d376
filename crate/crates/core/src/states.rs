//! Named two- and three-photon states.
//!
//! Phase convention: every constructor makes the amplitude of its first listed
//! basis state real and positive (`a†₀b†₁` for the Ψ family, `a†₀a†₀b†₁` for
//! the three-photon family).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockBasisState, ModeLabel, Spatial, StateVector};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
        }
    }
}

fn basis(modes: &[ModeLabel]) -> FockBasisState {
    FockBasisState::from_modes(modes).expect("named states stay within the photon cap")
}

/// `|Φ±⟩ = (a†₀b†₀ ± a†₁b†₁)/√2`, `|Ψ±⟩ = (a†₀b†₁ ± a†₁b†₀)/√2`.
pub fn bell(kind: BellKind) -> StateVector {
    use ModeLabel as M;
    let (first, second, sign) = match kind {
        BellKind::PhiPlus => ([M::A0, M::B0], [M::A1, M::B1], 1.0),
        BellKind::PhiMinus => ([M::A0, M::B0], [M::A1, M::B1], -1.0),
        BellKind::PsiPlus => ([M::A0, M::B1], [M::A1, M::B0], 1.0),
        BellKind::PsiMinus => ([M::A0, M::B1], [M::A1, M::B0], -1.0),
    };
    let h = FRAC_1_SQRT_2;
    StateVector::from_terms(2, [(basis(&first), C64::new(h, 0.0)), (basis(&second), C64::new(sign * h, 0.0))])
        .expect("two-photon terms")
}

/// `|Ψ^φ⟩ = (a†₀b†₁ + e^{iφ} a†₁b†₀)/√2`.
pub fn bell_phi(phi: f64) -> StateVector {
    use ModeLabel as M;
    let h = FRAC_1_SQRT_2;
    StateVector::from_terms(
        2,
        [(basis(&[M::A0, M::B1]), C64::new(h, 0.0)), (basis(&[M::A1, M::B0]), C64::from_polar(h, phi))],
    )
    .expect("two-photon terms")
}

/// Basis state `|2 a₀, 1 b₁⟩`, i.e. `a†₀a†₀b†₁|vac⟩/√2`.
pub fn double_a0_b1() -> FockBasisState {
    basis(&[ModeLabel::A0, ModeLabel::A0, ModeLabel::B1])
}

/// Basis state `|1 a₀, 1 a₁, 1 b₀⟩`.
pub fn a0_a1_b0() -> FockBasisState {
    basis(&[ModeLabel::A0, ModeLabel::A1, ModeLabel::B0])
}

/// `|Ψ^φ⟩ = (1/√3)(a†₀a†₀b†₁ + e^{iφ} a†₀a†₁b†₀)|vac⟩`, which in the
/// occupation basis is `√(2/3)|2a₀,b₁⟩ + (e^{iφ}/√3)|a₀,a₁,b₀⟩`.
pub fn three_photon(phi: f64) -> StateVector {
    let s = (1.0 / 3.0f64).sqrt();
    StateVector::from_terms(
        3,
        [(double_a0_b1(), C64::new((2.0f64 / 3.0).sqrt(), 0.0)), (a0_a1_b0(), C64::from_polar(s, phi))],
    )
    .expect("three-photon terms")
}

/// Fully symmetric state, `three_photon(0)`.
pub fn sym_state() -> StateVector {
    three_photon(0.0)
}

/// Mixed-symmetry state, `three_photon(π)` with real amplitudes.
pub fn mix_state() -> StateVector {
    let s = (1.0 / 3.0f64).sqrt();
    StateVector::from_terms(
        3,
        [(double_a0_b1(), C64::new((2.0f64 / 3.0).sqrt(), 0.0)), (a0_a1_b0(), C64::new(-s, 0.0))],
    )
    .expect("three-photon terms")
}

/// `cos(φ/2)|Ψ_sym⟩ − i sin(φ/2)|Ψ_mix⟩ = e^{−iφ/2}|Ψ^φ⟩`.
///
/// Same physical state as [`three_photon`] but with the half-angle global
/// phase kept, so it changes sign under `φ → φ + 2π`.
pub fn three_photon_half_angle(phi: f64) -> StateVector {
    let (s, c) = (phi / 2.0).sin_cos();
    let sym = sym_state().scaled(C64::new(c, 0.0));
    let mix = mix_state().scaled(C64::new(0.0, -s));
    let terms = sym.terms().chain(mix.terms()).map(|(b, a)| (*b, *a));
    StateVector::from_terms(3, terms).expect("three-photon terms")
}

/// Expansion of a three-photon `(a, b)` state over the pair
/// `{|Ψ_sym⟩, |Ψ_mix⟩}`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SymMixDecomposition {
    pub c_sym: C64,
    pub c_mix: C64,
    /// Squared distance of the (normalized) state from the span of the pair.
    pub residual: f64,
}

/// Writes `s/‖s‖ = c_sym|Ψ_sym⟩ + c_mix|Ψ_mix⟩ + r` with `r` orthogonal to
/// both. The two states overlap (`⟨Ψ_sym|Ψ_mix⟩ = 1/3`), so the
/// coefficients come from the Gram system rather than plain projections.
pub fn decompose_sym_mix(s: &StateVector) -> Result<SymMixDecomposition> {
    if s.photons() != 3 {
        return Err(Error::WrongSector);
    }
    if s.terms().any(|(b, _)| b.spatial_counts()[Spatial::Gamma.index()] > 0) {
        return Err(Error::WrongSector);
    }
    let s = s.normalized()?;
    let sym = sym_state();
    let mix = mix_state();
    let g = sym.inner_product(&mix)?;
    let b_sym = sym.inner_product(&s)?;
    let b_mix = mix.inner_product(&s)?;
    // [[1, g], [g*, 1]] (c_sym, c_mix) = (b_sym, b_mix)
    let det = 1.0 - g.norm_sqr();
    let c_sym = (b_sym - g * b_mix) / det;
    let c_mix = (b_mix - g.conj() * b_sym) / det;
    let fit = sym.scaled(c_sym);
    let fit = StateVector::from_terms(3, fit.terms().chain(mix.scaled(c_mix).terms()).map(|(b, a)| (*b, *a)))?;
    let rest = StateVector::from_terms(3, s.terms().chain(fit.scaled(C64::new(-1.0, 0.0)).terms()).map(|(b, a)| (*b, *a)))?;
    Ok(SymMixDecomposition { c_sym, c_mix, residual: rest.norm_sqr() })
}
