//! Self-check suite behind `triphoton validate`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;

use triphoton::closed_form::{bell_stats_with, delta_p, sweep_csv, theta_grid, three_photon_stats_with, SignConvention};
use triphoton::experiment::{pnr_resolve_probability, prepare_postselected, resolved_fraction};
use triphoton::fock::basis_states;
use triphoton::interferometer::{evolve_permanent, evolve_substitution, haar_random_seeded, scattering_distribution, vbs};
use triphoton::states::{bell_phi, three_photon};
use triphoton::{ModeLabel, StateVector};

/// Grid and phase list of the golden sweep fixture.
pub const FIXTURE_THETA_POINTS: usize = 33;
pub const FIXTURE_PHIS: [f64; 3] = [0.0, FRAC_PI_2, PI];

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct Options<'a> {
    pub sign: SignConvention,
    pub fixture: Option<&'a Path>,
}

pub fn run(opts: &Options<'_>) -> Result<Vec<Check>, triphoton::Error> {
    let mut checks = vec![
        engine_equivalence()?,
        grid_agreement(opts.sign)?,
        postselection()?,
        demux_law(),
        coincidence_at_pi(),
    ];
    if let Some(path) = opts.fixture {
        checks.push(fixture_diff(path));
    }
    Ok(checks)
}

fn engine_equivalence() -> Result<Check, triphoton::Error> {
    let modes = [ModeLabel::A0, ModeLabel::A1, ModeLabel::B0, ModeLabel::B1];
    let basis: Vec<_> = (1..=4).flat_map(|n| basis_states(n, &modes)).collect();
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let u = haar_random_seeded(2, seed)?;
        for b in &basis {
            let s = StateVector::basis(*b);
            worst = worst.max(evolve_substitution(&s, &u)?.max_amplitude_difference(&evolve_permanent(&s, &u)?));
        }
    }
    Ok(Check {
        name: "engine equivalence",
        passed: worst < 1e-10,
        detail: format!("{} basis states x 100 unitaries, max |diff| {worst:.3e}", basis.len()),
    })
}

fn grid_agreement(sign: SignConvention) -> Result<Check, triphoton::Error> {
    let phis = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];
    let mut worst: f64 = 0.0;
    let mut worst_at = (0.0, 0.0);
    for phi in phis {
        for theta in theta_grid(33) {
            let u = vbs(theta)?;
            let d3 = scattering_distribution(&three_photon(phi), &u)?;
            let d2 = scattering_distribution(&bell_phi(phi), &u)?;
            let dev = d3
                .max_abs_difference(&three_photon_stats_with(theta, phi, sign))
                .max(d2.max_abs_difference(&bell_stats_with(theta, phi, sign)));
            if dev > worst {
                worst = dev;
                worst_at = (theta, phi);
            }
        }
    }
    Ok(Check {
        name: "formula-engine grid agreement",
        passed: worst < 1e-10,
        detail: format!(
            "33x5 grid, max |diff| {worst:.3e} at theta={:.4}, phi={:.4}",
            worst_at.0, worst_at.1
        ),
    })
}

fn postselection() -> Result<Check, triphoton::Error> {
    let mut worst_rate: f64 = 0.0;
    let mut worst_fid: f64 = 1.0;
    for i in 0..16 {
        let phi = 2.0 * PI * i as f64 / 16.0;
        let p = prepare_postselected(phi)?;
        worst_rate = worst_rate.max((p.success_probability - 0.375).abs());
        worst_fid = worst_fid.min(p.state.fidelity(&three_photon(phi))?);
    }
    Ok(Check {
        name: "post-selection 3/8",
        passed: worst_rate < 1e-12 && worst_fid >= 1.0 - 1e-10,
        detail: format!("max |P - 3/8| {worst_rate:.3e}, min fidelity {worst_fid:.12}"),
    })
}

fn demux_law() -> Check {
    const SAMPLES: u64 = 100_000;
    let mut worst_z: f64 = 0.0;
    let mut exact = true;
    for k in 1..=4usize {
        for n in 1..=k {
            let f = resolved_fraction(n, k, SAMPLES, (10 * k + n) as u64);
            let p = pnr_resolve_probability(n, k);
            let sigma = (p * (1.0 - p) / SAMPLES as f64).sqrt();
            if sigma == 0.0 {
                exact &= f == p;
            } else {
                worst_z = worst_z.max((f - p).abs() / sigma);
            }
        }
    }
    Check {
        name: "demux law",
        passed: exact && worst_z <= 4.0,
        detail: format!("n <= k <= 4 at {SAMPLES} samples, max z {worst_z:.2}"),
    }
}

fn coincidence_at_pi() -> Check {
    let worst = theta_grid(33)
        .into_iter()
        .flat_map(|t| delta_p(t, PI).iter().map(|(_, v)| v.abs()).collect::<Vec<_>>())
        .fold(0.0f64, f64::max);
    Check { name: "phi = pi coincidence", passed: worst < 1e-12, detail: format!("max |xi - P| {worst:.3e}") }
}

fn fixture_diff(path: &Path) -> Check {
    let name = "golden fixture";
    let expected = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => return Check { name, passed: false, detail: format!("cannot read {}: {e}", path.display()) },
    };
    let actual = sweep_csv(FIXTURE_THETA_POINTS, &FIXTURE_PHIS);
    if actual == expected {
        return Check { name, passed: true, detail: format!("{} matches", path.display()) };
    }
    let line = actual
        .lines()
        .zip(expected.lines())
        .position(|(a, e)| a != e)
        .map(|i| i + 1)
        .unwrap_or_else(|| actual.lines().count().min(expected.lines().count()) + 1);
    Check { name, passed: false, detail: format!("{} differs from the computed sweep at line {line}", path.display()) }
}
