//! Readout statistics, the arccos estimator and the feasibility calculator.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). A readout seeded with `s`
//! uses `ChaCha8Rng::seed_from_u64(s)`; calibration trial `k` uses the same
//! key with stream `k`, so trials can run in any order.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::metrology::PerturbationSpec;
use crate::protocol::{dispersive_protocol, resonant_protocol};
use crate::{Error, Result, C64};

/// Above this many repetitions the binomial is drawn from its normal limit.
pub const NORMAL_APPROX_THRESHOLD: u64 = 100_000;

/// Which fringe the excited count is inverted against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FringeConvention {
    /// `p_e = [1 − cos 4|α|s]/2`.
    #[default]
    Dispersive,
    /// `p_e = [1 + cos 4|α|s]/2`.
    Resonant,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimationRun {
    pub repetitions: u64,
    pub excited_count: u64,
    pub estimate: f64,
    /// `1/(8√(R n̄))`.
    pub sigma: f64,
    pub alpha_mag: f64,
    pub seed: Option<u64>,
}

fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn draw_binomial(rng: &mut impl RngCore, p: f64, repetitions: u64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return repetitions;
    }
    if repetitions <= NORMAL_APPROX_THRESHOLD {
        return (0..repetitions).filter(|_| unit_f64(rng) < p).count() as u64;
    }
    // Box-Muller
    let u1 = 1.0 - unit_f64(rng);
    let u2 = unit_f64(rng);
    let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
    let n = repetitions as f64;
    let r = (n * p + z * (n * p * (1.0 - p)).sqrt()).round();
    r.clamp(0.0, n) as u64
}

fn check_readout(p_e: f64, repetitions: u64) -> Result<()> {
    if !(0.0..=1.0).contains(&p_e) {
        return Err(Error::InvalidArgument("p_e must lie in [0, 1]"));
    }
    if repetitions == 0 {
        return Err(Error::InvalidArgument("need at least one repetition"));
    }
    Ok(())
}

/// Number of excited outcomes in `repetitions` independent shots.
pub fn simulate_readout(p_e: f64, repetitions: u64, seed: u64) -> Result<u64> {
    check_readout(p_e, repetitions)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(draw_binomial(&mut rng, p_e, repetitions))
}

/// `1/(8√(R n̄))`.
pub fn theory_sigma(repetitions: u64, alpha_mag: f64) -> f64 {
    1.0 / (8.0 * (repetitions as f64).sqrt() * alpha_mag)
}

/// Propagated binomial noise at mid-fringe, `1/(4√(R n̄))`.
pub fn delta_method_sigma(repetitions: u64, alpha_mag: f64) -> f64 {
    1.0 / (4.0 * (repetitions as f64).sqrt() * alpha_mag)
}

/// Inverts an excited count into `s̃ ∈ [0, π/(4|α|)]`.
pub fn estimate_displacement(
    excited: u64,
    repetitions: u64,
    alpha_mag: f64,
    convention: FringeConvention,
) -> Result<EstimationRun> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("need at least one repetition"));
    }
    if excited > repetitions {
        return Err(Error::CountExceedsRepetitions {
            excited,
            repetitions,
        });
    }
    if !(alpha_mag > 0.0 && alpha_mag.is_finite()) {
        return Err(Error::InvalidArgument(
            "|alpha| must be positive and finite",
        ));
    }
    let xi = excited as f64 / repetitions as f64;
    let arg = match convention {
        FringeConvention::Dispersive => 1.0 - 2.0 * xi,
        FringeConvention::Resonant => 2.0 * xi - 1.0,
    };
    Ok(EstimationRun {
        repetitions,
        excited_count: excited,
        estimate: arg.clamp(-1.0, 1.0).acos() / (4.0 * alpha_mag),
        sigma: theory_sigma(repetitions, alpha_mag),
        alpha_mag,
        seed: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub true_s: f64,
    pub p_e: f64,
    pub mean: f64,
    pub bias: f64,
    pub empirical_sigma: f64,
    pub theory_sigma: f64,
    pub delta_method_sigma: f64,
    pub runs: alloc::vec::Vec<EstimationRun>,
}

/// Excited probability of the full protocol for a displacement `s`.
pub fn protocol_probability(true_s: f64, alpha: C64, convention: FringeConvention) -> Result<f64> {
    match convention {
        FringeConvention::Dispersive => {
            let pert = PerturbationSpec::displacement_orthogonal_to(alpha, true_s);
            Ok(dispersive_protocol(alpha, &pert)?.p_e)
        }
        FringeConvention::Resonant => {
            let pert = PerturbationSpec::displacement(true_s, alpha.arg());
            Ok(resonant_protocol(alpha, &pert, 1.0)?.p_e)
        }
    }
}

/// Repeats protocol, readout and inversion `n_trials` times.
pub fn estimator_calibration(
    true_s: f64,
    alpha: C64,
    repetitions: u64,
    n_trials: u64,
    seed: u64,
    convention: FringeConvention,
) -> Result<Calibration> {
    let alpha_mag = alpha.norm();
    if !(true_s > 0.0 && true_s < PI / (4.0 * alpha_mag)) {
        return Err(Error::InvalidArgument(
            "true_s must lie inside (0, pi/(4|alpha|))",
        ));
    }
    if repetitions < 100 {
        return Err(Error::InvalidArgument(
            "calibration needs at least 100 repetitions",
        ));
    }
    if n_trials < 2 {
        return Err(Error::InvalidArgument(
            "calibration needs at least two trials",
        ));
    }
    let p_e = protocol_probability(true_s, alpha, convention)?;
    check_readout(p_e, repetitions)?;

    let mut runs = alloc::vec::Vec::with_capacity(n_trials as usize);
    for trial in 0..n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let r = draw_binomial(&mut rng, p_e, repetitions);
        let mut run = estimate_displacement(r, repetitions, alpha_mag, convention)?;
        run.seed = Some(seed);
        runs.push(run);
    }
    let n = n_trials as f64;
    let mean = runs.iter().map(|r| r.estimate).sum::<f64>() / n;
    let var = runs
        .iter()
        .map(|r| (r.estimate - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok(Calibration {
        true_s,
        p_e,
        mean,
        bias: mean - true_s,
        empirical_sigma: var.sqrt(),
        theory_sigma: theory_sigma(repetitions, alpha_mag),
        delta_method_sigma: delta_method_sigma(repetitions, alpha_mag),
        runs,
    })
}

/// Least-squares slope of `ln σ` against `ln n̄`.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(n, s)| !(n > 0.0 && s > 0.0)) {
        return Err(Error::InvalidArgument(
            "need two or more positive (nbar, sigma) points",
        ));
    }
    let k = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), &(n, s)| {
        (a + n.ln() / k, b + s.ln() / k)
    });
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), &(n, s)| {
        let dx = n.ln() - mx;
        (a + dx * (s.ln() - my), b + dx * dx)
    });
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("nbar values must differ"));
    }
    Ok(sxy / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Platform {
    Cavity,
    Ion,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub interaction_time: f64,
    pub decoherence_threshold: f64,
    pub ratio: f64,
    pub verdict: bool,
}

/// Compares the protocol duration against a decoherence budget.
///
/// Cavity: threshold `2π n̄^{3/2}/Ω₀`, the interaction time sped up by the
/// cat's `n̄`-fold decoherence. Ion: the budget is already the cat-state
/// decoherence time, so the threshold is `T = 2π√n̄/Ω₀` itself.
pub fn feasibility(
    omega0: f64,
    nbar: f64,
    budget: f64,
    platform: Platform,
) -> Result<FeasibilityReport> {
    let positive = |x: f64| x > 0.0 && x.is_finite();
    if !(positive(omega0) && positive(nbar) && positive(budget)) {
        return Err(Error::InvalidArgument(
            "omega0, nbar and budget must be positive",
        ));
    }
    let interaction_time = 2.0 * PI * nbar.sqrt() / omega0;
    let decoherence_threshold = match platform {
        Platform::Cavity => interaction_time * nbar,
        Platform::Ion => interaction_time,
    };
    let ratio = budget / decoherence_threshold;
    Ok(FeasibilityReport {
        interaction_time,
        decoherence_threshold,
        ratio,
        verdict: ratio >= 10.0,
    })
}
