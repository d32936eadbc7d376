//! Analytic scattering probabilities at the variable beam splitter.
//!
//! Outcomes are keyed by the photon numbers `(n_a, n_b)` in the two output
//! arms. The three-photon joint statistics split into a `cos²(φ/2)` part
//! weighted by the `p` functions below and a `sin²(φ/2)` part that carries
//! the mixed-symmetry contribution.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::distribution::OutcomeDistribution;
use crate::format::sig12;

/// Sign in front of the `sin²(φ/2)` terms of `P(1,2)` and `P_Bell(1,1)`.
///
/// `Derived` is the physical one. `MainText` flips it and exists only so
/// that validation can demonstrate that the engines reject it.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    #[default]
    Derived,
    MainText,
}

impl SignConvention {
    fn factor(self) -> f64 {
        match self {
            SignConvention::Derived => 1.0,
            SignConvention::MainText => -1.0,
        }
    }
}

pub const OUTCOMES_3: [(u8, u8); 4] = [(3, 0), (0, 3), (2, 1), (1, 2)];
pub const OUTCOMES_2: [(u8, u8); 3] = [(2, 0), (0, 2), (1, 1)];

/// `p₃,₀(θ) = (8/3) cos⁴θ sin²θ`.
pub fn p30(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    8.0 / 3.0 * c.powi(4) * s * s
}

/// `p₀,₃(θ) = (8/3) sin⁴θ cos²θ`.
pub fn p03(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    8.0 / 3.0 * s.powi(4) * c * c
}

/// `p₁,₂(θ) = (1/3)[sin²3θ + 2 sin²θ cos²2θ]`.
pub fn p12(theta: f64) -> f64 {
    let s3 = (3.0 * theta).sin();
    let s = theta.sin();
    let c2 = (2.0 * theta).cos();
    (s3 * s3 + 2.0 * s * s * c2 * c2) / 3.0
}

/// `p₂,₁(θ) = (1/3)[cos²3θ + 2 cos²θ cos²2θ]`, kept as the sum of its two
/// squared amplitude contributions.
pub fn p21(theta: f64) -> f64 {
    let c3 = (3.0 * theta).cos();
    let c = theta.cos();
    let c2 = (2.0 * theta).cos();
    (c3 * c3 + 2.0 * c * c * c2 * c2) / 3.0
}

/// `p′₁,₂(θ) = sin²θ`.
pub fn p12_prime(theta: f64) -> f64 {
    theta.sin().powi(2)
}

/// `p′₂,₁(θ) = cos²θ`.
pub fn p21_prime(theta: f64) -> f64 {
    theta.cos().powi(2)
}

/// `p̃₃,₀(θ) = ½ sin²2θ cos²θ`, the product-statistics counterpart of `p₃,₀`.
pub fn p30_tilde(theta: f64) -> f64 {
    0.5 * (2.0 * theta).sin().powi(2) * theta.cos().powi(2)
}

/// `p̃₀,₃(θ) = ½ sin²2θ sin²θ`.
pub fn p03_tilde(theta: f64) -> f64 {
    0.5 * (2.0 * theta).sin().powi(2) * theta.sin().powi(2)
}

fn half_angle_weights(phi: f64) -> (f64, f64) {
    let (s, c) = (phi / 2.0).sin_cos();
    (c * c, s * s)
}

/// One photon entering arm a: `{(1,0): cos²θ, (0,1): sin²θ}`.
pub fn single_photon_stats(theta: f64) -> OutcomeDistribution {
    let (s, c) = theta.sin_cos();
    OutcomeDistribution::from_ab([((1, 0), c * c), ((0, 1), s * s)])
}

pub fn bell_stats(theta: f64, phi: f64) -> OutcomeDistribution {
    bell_stats_with(theta, phi, SignConvention::Derived)
}

/// Generalized Bell state `|Ψ^φ⟩` at the splitter.
pub fn bell_stats_with(theta: f64, phi: f64, sign: SignConvention) -> OutcomeDistribution {
    let (cc, ss) = half_angle_weights(phi);
    let s2 = (2.0 * theta).sin();
    let c2 = (2.0 * theta).cos();
    let bunched = 0.5 * cc * s2 * s2;
    OutcomeDistribution::from_ab([((2, 0), bunched), ((0, 2), bunched), ((1, 1), cc * c2 * c2 + sign.factor() * ss)])
}

pub fn three_photon_stats(theta: f64, phi: f64) -> OutcomeDistribution {
    three_photon_stats_with(theta, phi, SignConvention::Derived)
}

/// Three-photon state `|Ψ^φ⟩` at the splitter.
pub fn three_photon_stats_with(theta: f64, phi: f64, sign: SignConvention) -> OutcomeDistribution {
    let (cc, ss) = half_angle_weights(phi);
    OutcomeDistribution::from_ab([
        ((3, 0), cc * p30(theta)),
        ((0, 3), cc * p03(theta)),
        ((1, 2), cc * p12(theta) + sign.factor() * ss * p12_prime(theta)),
        ((2, 1), cc * p21(theta) + ss * p21_prime(theta)),
    ])
}

/// Product statistics `ξ`: a single photon and the Bell pair scattering
/// without interfering with each other.
pub fn product_stats(theta: f64, phi: f64) -> OutcomeDistribution {
    let single = single_photon_stats(theta);
    let pair = bell_stats(theta, phi);
    let (s10, s01) = (single.get(1, 0), single.get(0, 1));
    let (b20, b02, b11) = (pair.get(2, 0), pair.get(0, 2), pair.get(1, 1));
    OutcomeDistribution::from_ab([
        ((3, 0), s10 * b20),
        ((0, 3), s01 * b02),
        ((1, 2), s10 * b02 + s01 * b11),
        ((2, 1), s10 * b11 + s01 * b20),
    ])
}

/// `ΔP = ξ − P`, entrywise.
pub fn delta_p(theta: f64, phi: f64) -> OutcomeDistribution {
    product_stats(theta, phi).difference(&three_photon_stats(theta, phi))
}

/// `n` equally spaced angles `iπ/(n−1)` covering `[0, π]`.
pub fn theta_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| i as f64 * std::f64::consts::PI / (n - 1) as f64).collect(),
    }
}

pub const SWEEP_HEADER: &str = "theta,phi,P30,P03,P21,P12,xi30,xi03,xi21,xi12,dP30,dP03,dP21,dP12";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub joint: OutcomeDistribution,
    pub product: OutcomeDistribution,
    pub delta: OutcomeDistribution,
}

impl SweepRow {
    pub fn compute(theta: f64, phi: f64) -> Self {
        let joint = three_photon_stats(theta, phi);
        let product = product_stats(theta, phi);
        let delta = product.difference(&joint);
        Self { theta, phi, joint, product, delta }
    }

    pub fn to_csv_line(&self) -> String {
        let mut fields = vec![sig12(self.theta), sig12(self.phi)];
        for dist in [&self.joint, &self.product, &self.delta] {
            fields.extend(OUTCOMES_3.iter().map(|&(a, b)| sig12(dist.get(a, b))));
        }
        fields.join(",")
    }
}

/// Rows ordered by `φ` (outer) then `θ` (inner).
pub fn sweep(theta_points: usize, phis: &[f64]) -> Vec<SweepRow> {
    let thetas = theta_grid(theta_points);
    let pairs: Vec<(f64, f64)> = phis.iter().flat_map(|&p| thetas.iter().map(move |&t| (t, p))).collect();
    pairs.into_par_iter().map(|(t, p)| SweepRow::compute(t, p)).collect()
}

/// Sweep as CSV text with header and LF line endings.
pub fn sweep_csv(theta_points: usize, phis: &[f64]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in sweep(theta_points, phis) {
        writeln!(out, "{}", row.to_csv_line()).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const TOL: f64 = 1e-12;

    #[test]
    fn single_photon_values() {
        let d = single_photon_stats(0.0);
        assert_eq!((d.get(1, 0), d.get(0, 1)), (1.0, 0.0));
        let d = single_photon_stats(FRAC_PI_4);
        assert!((d.get(1, 0) - 0.5).abs() < TOL && (d.get(0, 1) - 0.5).abs() < TOL);
        let d = single_photon_stats(FRAC_PI_2);
        assert!(d.get(1, 0).abs() < TOL && (d.get(0, 1) - 1.0).abs() < TOL);
    }

    #[test]
    fn bell_values() {
        for theta in [0.0, 0.3, 1.2] {
            let d = bell_stats(theta, PI);
            assert!(d.get(2, 0).abs() < TOL && d.get(0, 2).abs() < TOL);
            assert!((d.get(1, 1) - 1.0).abs() < TOL);
        }
        let d = bell_stats(FRAC_PI_4, 0.0);
        assert!((d.get(2, 0) - 0.5).abs() < TOL && (d.get(0, 2) - 0.5).abs() < TOL && d.get(1, 1).abs() < TOL);
        let d = bell_stats(0.0, FRAC_PI_2);
        assert!((d.get(1, 1) - 1.0).abs() < TOL);
    }

    #[test]
    fn three_photon_values() {
        for theta in [0.2, 0.9, 2.0] {
            let d = three_photon_stats(theta, PI);
            assert!(d.get(3, 0).abs() < TOL && d.get(0, 3).abs() < TOL);
            assert!((d.get(1, 2) - theta.sin().powi(2)).abs() < TOL);
            assert!((d.get(2, 1) - theta.cos().powi(2)).abs() < TOL);
        }
        assert!((three_photon_stats(FRAC_PI_4, 0.0).get(3, 0) - 1.0 / 3.0).abs() < TOL);
        for phi in [0.0, 1.0, PI] {
            assert!((three_photon_stats(0.0, phi).get(2, 1) - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn product_values() {
        assert!((product_stats(FRAC_PI_4, 0.0).get(3, 0) - 0.25).abs() < TOL);
        assert!((p30_tilde(FRAC_PI_4) - 0.25).abs() < TOL);
        for theta in [0.1, 0.8, 2.9] {
            let x = product_stats(theta, PI);
            assert!((x.get(1, 2) - theta.sin().powi(2)).abs() < TOL);
            assert!((x.get(2, 1) - theta.cos().powi(2)).abs() < TOL);
            assert!(x.get(3, 0).abs() < TOL && x.get(0, 3).abs() < TOL);
            // φ = 0 product statistics through the tilde functions
            let x0 = product_stats(theta, 0.0);
            assert!((x0.get(3, 0) - p30_tilde(theta)).abs() < TOL);
            assert!((x0.get(0, 3) - p03_tilde(theta)).abs() < TOL);
        }
        let x = product_stats(0.0, 0.7);
        assert!((x.get(2, 1) - bell_stats(0.0, 0.7).get(1, 1)).abs() < TOL);
        assert!(x.get(3, 0).abs() < TOL && x.get(0, 3).abs() < TOL && x.get(1, 2).abs() < TOL);
    }

    #[test]
    fn delta_values() {
        for theta in theta_grid(33) {
            let d = delta_p(theta, PI);
            assert!(d.iter().all(|(_, v)| v.abs() < TOL));
            assert!(delta_p(0.0, theta).iter().all(|(_, v)| v.abs() < TOL));
        }
        assert!((delta_p(FRAC_PI_4, 0.0).get(3, 0) + 1.0 / 12.0).abs() < TOL);
    }

    #[test]
    fn normalization_on_grid() {
        for theta in theta_grid(33) {
            for phi in [0.0, 0.5, FRAC_PI_2, 2.2, PI] {
                assert!((three_photon_stats(theta, phi).total() - 1.0).abs() < 1e-10);
                assert!((bell_stats(theta, phi).total() - 1.0).abs() < 1e-10);
                assert!((product_stats(theta, phi).total() - 1.0).abs() < 1e-10);
                assert!(delta_p(theta, phi).total().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn main_text_sign_breaks_normalization() {
        let d = three_photon_stats_with(1.0, PI, SignConvention::MainText);
        assert!(d.get(1, 2) < 0.0);
        assert!((d.total() - 1.0).abs() > 0.1);
        assert!(bell_stats_with(0.3, PI, SignConvention::MainText).get(1, 1) < 0.0);
    }

    #[test]
    fn grid_spacing() {
        let g = theta_grid(33);
        assert_eq!(g.len(), 33);
        assert_eq!(g[0], 0.0);
        assert!((g[32] - PI).abs() < 1e-15);
        assert!((g[8] - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(theta_grid(1), vec![0.0]);
        assert!(theta_grid(0).is_empty());
    }

    #[test]
    fn csv_layout() {
        let csv = sweep_csv(3, &[0.0, PI]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 7);
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with('\n'));
        assert!(lines.iter().all(|l| l.split(',').count() == 14));
        // θ = 0 row: all three photons' statistics concentrate on (2,1)
        assert_eq!(lines[1], "0,0,0,0,1,0,0,0,1,0,0,0,0,0");
    }
}
