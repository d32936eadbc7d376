use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two states (or parts of a superposition) live in different
    /// photon-number sectors.
    #[error("photon-number sector mismatch: {left} vs {right} photons")]
    SectorMismatch { left: usize, right: usize },

    #[error("empty superposition")]
    EmptySuperposition,

    #[error("empty creation-operator monomial")]
    EmptyMonomial,

    #[error("photon number {0} exceeds the supported maximum of {max}", max = crate::fock::MAX_PHOTONS)]
    TooManyPhotons(usize),

    /// A linear combination cancelled to (numerically) nothing.
    #[error("state has zero norm")]
    ZeroNorm,

    #[error("unitary acts on {unitary} spatial modes but the state occupies mode {mode}")]
    DimensionMismatch { unitary: usize, mode: &'static str },

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("unsupported unitary dimension {0}; expected 2 or 3")]
    UnsupportedDimension(usize),

    #[error("particle index out of range: ({i}, {j}) for {n} particles")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    /// Labeled wavefunction is not symmetric under exchange of every pair.
    #[error("wavefunction is not bosonic: exchange of particles {i} and {j} deviates by {deviation:.3e}")]
    NonBosonic { i: usize, j: usize, deviation: f64 },

    #[error("photon pair ({0}, {1}) cannot be resolved in the state's support")]
    PairNotResolvable(usize, usize),

    #[error("expected a three-photon state in modes a and b")]
    WrongSector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed state: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
