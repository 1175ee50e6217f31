//! Overlap laws for displaced and rotated circular states, and the
//! SQL/Heisenberg sensitivity scales they imply.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::states::{make_circular_state, CoherentSuperposition};
use crate::{Error, Result, C64};

/// Largest mapped displacement `s` (or `θ|α|`) for which the phase-linearized
/// overlap law is considered in its regime.
pub const REGIME_MAX_S: f64 = 0.2;
/// Smallest circle radius for which cross terms are negligible.
pub const REGIME_MIN_ALPHA: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbationKind {
    Displacement,
    Rotation,
}

/// A small unitary perturbation: `D(s e^{iφ})` or `R(θ)`.
///
/// `direction` is the absolute phase-space angle of the displacement and
/// is ignored for rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    pub magnitude: f64,
    pub direction: f64,
}

impl PerturbationSpec {
    pub fn displacement(s: f64, direction: f64) -> Self {
        Self {
            kind: PerturbationKind::Displacement,
            magnitude: s,
            direction,
        }
    }

    /// `β = iαs/|α|`, the most sensitive direction for a cat along `α`.
    pub fn displacement_orthogonal_to(alpha: C64, s: f64) -> Self {
        Self::displacement(s, alpha.arg() + FRAC_PI_2)
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            kind: PerturbationKind::Rotation,
            magnitude: theta,
            direction: 0.0,
        }
    }

    pub fn identity() -> Self {
        Self::displacement(0.0, 0.0)
    }

    /// Displacement amplitude `s e^{iφ}` (zero for rotations).
    pub fn beta(&self) -> C64 {
        match self.kind {
            PerturbationKind::Displacement => C64::from_polar(self.magnitude, self.direction),
            PerturbationKind::Rotation => C64::new(0.0, 0.0),
        }
    }

    /// Exact action on a superposition.
    pub fn apply(&self, state: &CoherentSuperposition) -> CoherentSuperposition {
        match self.kind {
            PerturbationKind::Displacement => state.displace(self.beta()),
            PerturbationKind::Rotation => state.rotate(self.magnitude),
        }
    }

    /// Equivalent displacement magnitude on a circle of radius `|α|`.
    pub fn mapped_s(&self, alpha_mag: f64) -> f64 {
        match self.kind {
            PerturbationKind::Displacement => self.magnitude,
            PerturbationKind::Rotation => self.magnitude * alpha_mag,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.magnitude >= 0.0) || !self.magnitude.is_finite() || !self.direction.is_finite() {
            return Err(Error::InvalidArgument(
                "perturbation magnitude must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

/// Parameters of a circular state: radius/orientation `α`, `M` points and
/// phases `γ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularSpec {
    pub alpha: C64,
    pub m: usize,
    pub gammas: Vec<f64>,
}

impl CircularSpec {
    pub fn new(alpha: C64, m: usize) -> Self {
        Self {
            alpha,
            m,
            gammas: alloc::vec![0.0; m],
        }
    }

    pub fn with_gammas(alpha: C64, gammas: Vec<f64>) -> Self {
        Self {
            alpha,
            m: gammas.len(),
            gammas,
        }
    }

    pub fn state(&self) -> Result<CoherentSuperposition> {
        make_circular_state(self.alpha, self.m, &self.gammas)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Valid,
    OutsideRegime,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxOverlap {
    pub value: f64,
    pub regime: Regime,
}

/// Phase-linearized overlap
/// `(1/M²)[M + Σ_k Σ_{l>k} 2 cos(2 s a_kl |α|)]`,
/// `a_kl = sin(φ − φ_k) − sin(φ − φ_l)` with `φ` measured from `arg α`.
/// Rotations map to `s = θ|α|` orthogonal to `α`. The phases `γ_k` drop
/// out at this order.
pub fn approx_overlap(m: usize, alpha: C64, pert: &PerturbationSpec) -> Result<ApproxOverlap> {
    if m == 0 {
        return Err(Error::EmptySuperposition);
    }
    pert.validate()?;
    let r = alpha.norm();
    let s = pert.mapped_s(r);
    let phi = match pert.kind {
        PerturbationKind::Displacement => pert.direction - alpha.arg(),
        PerturbationKind::Rotation => FRAC_PI_2,
    };
    let angle = |k: usize| 2.0 * PI * (k + 1) as f64 / m as f64;
    let mut acc = m as f64;
    for k in 0..m {
        for l in (k + 1)..m {
            let a_kl = (phi - angle(k)).sin() - (phi - angle(l)).sin();
            acc += 2.0 * (2.0 * s * a_kl * r).cos();
        }
    }
    let regime = if s <= REGIME_MAX_S && r >= REGIME_MIN_ALPHA {
        Regime::Valid
    } else {
        Regime::OutsideRegime
    };
    Ok(ApproxOverlap {
        value: acc / (m * m) as f64,
        regime,
    })
}

/// `|⟨ψ|U|ψ⟩|²` through exact coherent-state algebra.
pub fn exact_overlap(state: &CoherentSuperposition, pert: &PerturbationSpec) -> f64 {
    state.inner_product(&pert.apply(state)).norm_sqr() / (state.norm_sqr() * state.norm_sqr())
}

/// Standard-quantum-limit and Heisenberg-limit scales for one kind of
/// perturbation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales {
    pub sql: f64,
    pub heisenberg: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensitivityReport {
    pub displacement: Scales,
    pub rotation: Scales,
    /// Effective support action `A` (ħ = 1).
    pub support_action: f64,
    /// Sub-Planck structure area `a = 1/A`.
    pub structure_area: f64,
    pub mean_excitation: f64,
}

/// Sensitivity scales read off the amplitude geometry.
///
/// `A = max(r², 1)` with `r` the radius of the smallest disk enclosing all
/// amplitudes: about `n̄` for a circular state and one Planck cell for a
/// coherent state. Heisenberg scales are `√a` (displacement) and `a`
/// (rotation), never worse than the SQL values `1` and `n̄^{-1/2}`.
pub fn sensitivity_report(state: &CoherentSuperposition) -> SensitivityReport {
    let points: Vec<C64> = state.terms().iter().map(|t| t.amplitude).collect();
    let r = enclosing_radius(&points);
    let support_action = (r * r).max(1.0);
    let structure_area = 1.0 / support_action;
    let nbar = state.mean_excitation();
    let sql_rotation = if nbar > 0.0 {
        1.0 / nbar.sqrt()
    } else {
        f64::INFINITY
    };
    SensitivityReport {
        displacement: Scales {
            sql: 1.0,
            heisenberg: structure_area.sqrt().min(1.0),
        },
        rotation: Scales {
            sql: sql_rotation,
            heisenberg: structure_area.min(sql_rotation),
        },
        support_action,
        structure_area,
        mean_excitation: nbar,
    }
}

/// Radius of the minimum enclosing circle, by checking every circle
/// through two or three of the points. Amplitude sets are small.
fn enclosing_radius(points: &[C64]) -> f64 {
    const SLACK: f64 = 1e-9;
    let covers = |c: C64, r: f64| points.iter().all(|p| (p - c).norm() <= r + SLACK);
    if points.len() < 2 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let c = (points[i] + points[j]) / 2.0;
            let r = (points[i] - c).norm();
            if r < best && covers(c, r) {
                best = r;
            }
            for k in (j + 1)..points.len() {
                if let Some((c, r)) = circumcircle(points[i], points[j], points[k]) {
                    if r < best && covers(c, r) {
                        best = r;
                    }
                }
            }
        }
    }
    best
}

fn circumcircle(a: C64, b: C64, c: C64) -> Option<(C64, f64)> {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    if d.abs() < 1e-14 {
        return None;
    }
    let (a2, b2, c2) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (a2 * (b.im - c.im) + b2 * (c.im - a.im) + c2 * (a.im - b.im)) / d;
    let uy = (a2 * (c.re - b.re) + b2 * (a.re - c.re) + c2 * (b.re - a.re)) / d;
    let centre = C64::new(ux, uy);
    Some((centre, (a - centre).norm()))
}

/// What an overlap sweep perturbs. Rotations act on the circle displaced
/// by `η = α`, so that it passes through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTarget {
    pub circle: CircularSpec,
    pub kind: PerturbationKind,
    /// Absolute displacement direction; `None` means orthogonal to `α`.
    pub direction: Option<f64>,
}

impl SweepTarget {
    pub fn perturbation(&self, magnitude: f64) -> PerturbationSpec {
        match self.kind {
            PerturbationKind::Displacement => {
                let dir = self
                    .direction
                    .unwrap_or(self.circle.alpha.arg() + FRAC_PI_2);
                PerturbationSpec::displacement(magnitude, dir)
            }
            PerturbationKind::Rotation => PerturbationSpec::rotation(magnitude),
        }
    }

    /// The state the exact pipeline perturbs.
    pub fn probe_state(&self) -> Result<CoherentSuperposition> {
        let s = self.circle.state()?;
        Ok(match self.kind {
            PerturbationKind::Displacement => s,
            PerturbationKind::Rotation => s.displace(self.circle.alpha),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub magnitude: f64,
    pub exact: f64,
    pub approx: f64,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapSweep {
    pub rows: Vec<SweepRow>,
}

impl OverlapSweep {
    /// Magnitude of the first interior local minimum of the exact column.
    pub fn first_minimum(&self) -> Option<f64> {
        self.rows
            .windows(3)
            .find(|w| w[1].exact <= w[0].exact && w[1].exact < w[2].exact)
            .map(|w| w[1].magnitude)
    }

    /// First magnitude where the exact overlap drops through ½.
    pub fn first_half_crossing(&self) -> Option<f64> {
        self.rows
            .windows(2)
            .find(|w| (w[0].exact - 0.5) > 0.0 && (w[1].exact - 0.5) <= 0.0)
            .map(|w| {
                let t = (w[0].exact - 0.5) / (w[0].exact - w[1].exact);
                w[0].magnitude + t * (w[1].magnitude - w[0].magnitude)
            })
    }
}

/// Exact and linearized overlaps on `n_points` evenly spaced magnitudes.
pub fn overlap_sweep(
    target: &SweepTarget,
    from: f64,
    to: f64,
    n_points: usize,
) -> Result<OverlapSweep> {
    if n_points < 2 {
        return Err(Error::InvalidArgument("a sweep needs at least two points"));
    }
    if !(from >= 0.0 && to > from && to.is_finite()) {
        return Err(Error::InvalidArgument(
            "sweep range must satisfy 0 <= from < to",
        ));
    }
    let probe = target.probe_state()?;
    let rows = (0..n_points)
        .map(|i| {
            let magnitude = from + (to - from) * i as f64 / (n_points - 1) as f64;
            let pert = target.perturbation(magnitude);
            let approx = approx_overlap(target.circle.m, target.circle.alpha, &pert)?;
            Ok(SweepRow {
                magnitude,
                exact: exact_overlap(&probe, &pert),
                approx: approx.value,
                regime: approx.regime,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OverlapSweep { rows })
}
