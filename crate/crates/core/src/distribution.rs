//! Outcome distributions over spatial photon-number patterns.

use std::collections::BTreeMap;
use std::fmt;

/// Photon counts per spatial mode `(γ, a, b)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub gamma: u8,
    pub a: u8,
    pub b: u8,
}

impl Pattern {
    pub const fn new(gamma: u8, a: u8, b: u8) -> Self {
        Self { gamma, a, b }
    }

    /// Pattern with mode γ empty, written `(n_a, n_b)` throughout.
    pub const fn ab(a: u8, b: u8) -> Self {
        Self { gamma: 0, a, b }
    }

    pub fn total(&self) -> usize {
        (self.gamma + self.a + self.b) as usize
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gamma == 0 {
            write!(f, "{},{}", self.a, self.b)
        } else {
            write!(f, "{},{},{}", self.gamma, self.a, self.b)
        }
    }
}

/// Map from pattern to (possibly signed) probability. Absent patterns read as 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutcomeDistribution {
    entries: BTreeMap<Pattern, f64>,
}

impl OutcomeDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ab<I: IntoIterator<Item = ((u8, u8), f64)>>(items: I) -> Self {
        let entries = items.into_iter().map(|((a, b), p)| (Pattern::ab(a, b), p)).collect();
        Self { entries }
    }

    pub fn insert(&mut self, pattern: Pattern, p: f64) {
        self.entries.insert(pattern, p);
    }

    pub fn add(&mut self, pattern: Pattern, p: f64) {
        *self.entries.entry(pattern).or_insert(0.0) += p;
    }

    /// Probability of `n_a` photons in a and `n_b` in b with γ empty.
    pub fn get(&self, n_a: u8, n_b: u8) -> f64 {
        self.get_pattern(Pattern::ab(n_a, n_b))
    }

    pub fn get_pattern(&self, pattern: Pattern) -> f64 {
        self.entries.get(&pattern).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, &f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Entrywise `self − other` over the union of patterns.
    pub fn difference(&self, other: &OutcomeDistribution) -> OutcomeDistribution {
        let mut out = self.clone();
        for (pat, p) in &other.entries {
            out.add(*pat, -p);
        }
        out
    }

    /// `max |self − other|` over the union of patterns.
    pub fn max_abs_difference(&self, other: &OutcomeDistribution) -> f64 {
        self.difference(other).entries.values().fold(0.0, |m, d| m.max(d.abs()))
    }
}

impl fmt::Display for OutcomeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (pat, p)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({pat}): {p:.12}")?;
        }
        write!(f, "}}")
    }
}
