//! Two-level system ⊗ oscillator measurement sequences.
//!
//! The generic strategy prepares `U|level, α⟩`, applies a perturbation to
//! the oscillator only, then undoes `U`. The excited-state probability of
//! the final state carries the perturbation's overlap fringe.
//!
//! Two perturbation models are available. [`PerturbationModel::Exact`] uses
//! the exact displacement and rotation identities. The linearized model
//! keeps every coherent component in place and only attaches the phase
//! `e^{2i Im(βγ*)}` (displacement) or `e^{iθ|γ|²}` (rotation) to the
//! component at `γ`; this is the bookkeeping behind the closed-form fringe
//! laws `P_e = [1 ∓ cos(4|α|s)]/2`, and it is the default for the named
//! protocols.

mod jc;

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

use crate::metrology::{PerturbationKind, PerturbationSpec};
use crate::states::{CoherentSuperposition, Term};
use crate::{Error, Result, C64};

pub use jc::{jc_numeric_evolve, revival_time, JCParams, JointState};

/// Branches with squared norm below this are reported as empty.
const EMPTY_BRANCH: f64 = 1e-28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Excited,
    Ground,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PerturbationModel {
    Exact,
    #[default]
    Linearized,
}

/// One branch `weight · |level⟩ ⊗ |state⟩` with `state` normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub weight: C64,
    pub state: CoherentSuperposition,
}

/// `w_e |e, ψ_e⟩ + w_g |g, ψ_g⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    pub excited: Branch,
    pub ground: Branch,
}

impl HybridState {
    pub fn product(level: Level, field: CoherentSuperposition) -> Result<Self> {
        let field = field.normalize()?;
        let mut joint = Joint::default();
        *joint.branch_mut(level) = field.terms().to_vec();
        Ok(joint.into_hybrid(field.terms()[0].amplitude))
    }

    pub fn p_excited(&self) -> f64 {
        self.excited.weight.norm_sqr()
    }

    pub fn p_ground(&self) -> f64 {
        self.ground.weight.norm_sqr()
    }

    pub fn branch(&self, level: Level) -> &Branch {
        match level {
            Level::Excited => &self.excited,
            Level::Ground => &self.ground,
        }
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> C64 {
        let part =
            |a: &Branch, b: &Branch| a.weight.conj() * b.weight * a.state.inner_product(&b.state);
        part(&self.excited, &other.excited) + part(&self.ground, &other.ground)
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.overlap(other).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.overlap(self).re
    }

    fn to_joint(&self) -> Joint {
        let scaled = |b: &Branch| {
            b.state
                .terms()
                .iter()
                .map(|t| Term::new(t.weight * b.weight, t.amplitude))
                .collect()
        };
        Joint {
            excited: scaled(&self.excited),
            ground: scaled(&self.ground),
        }
    }
}

/// Unnormalized branch term lists used while a sequence runs.
#[derive(Clone, Debug, Default)]
struct Joint {
    excited: Vec<Term>,
    ground: Vec<Term>,
}

impl Joint {
    fn branch_mut(&mut self, level: Level) -> &mut Vec<Term> {
        match level {
            Level::Excited => &mut self.excited,
            Level::Ground => &mut self.ground,
        }
    }

    fn map_terms(mut self, f: impl Fn(Term) -> Term) -> Self {
        for t in self.excited.iter_mut().chain(self.ground.iter_mut()) {
            *t = f(*t);
        }
        self
    }

    fn map_fields(self, f: impl Fn(&CoherentSuperposition) -> CoherentSuperposition) -> Self {
        let apply = |terms: Vec<Term>| {
            if terms.is_empty() {
                terms
            } else {
                f(&CoherentSuperposition::from_term_vec(terms))
                    .terms()
                    .to_vec()
            }
        };
        Joint {
            excited: apply(self.excited),
            ground: apply(self.ground),
        }
    }

    /// `fallback` is the amplitude used to represent an empty branch.
    fn into_hybrid(self, fallback: C64) -> HybridState {
        let branch = |terms: Vec<Term>| {
            if terms.is_empty() {
                return Branch {
                    weight: C64::new(0.0, 0.0),
                    state: CoherentSuperposition::coherent(fallback),
                };
            }
            let state = CoherentSuperposition::from_term_vec(terms).merged();
            let n2 = state.norm_sqr();
            if n2 < EMPTY_BRANCH {
                let amp = state.terms()[0].amplitude;
                return Branch {
                    weight: C64::new(0.0, 0.0),
                    state: CoherentSuperposition::coherent(amp),
                };
            }
            // put the leading term's phase on the branch weight
            let lead = state.terms()[0].weight;
            let phase = lead / lead.norm();
            let weight = phase * n2.sqrt();
            Branch {
                state: state.scaled(weight.inv()),
                weight,
            }
        };
        HybridState {
            excited: branch(self.excited),
            ground: branch(self.ground),
        }
    }
}

/// Operations the preparation unitary `U` is composed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    /// `|g⟩ → (|e⟩ + |g⟩)/√2`, `|e⟩ → (|g⟩ − |e⟩)/√2`; its own inverse.
    HalfPiPulse,
    /// `e^{iπ a†a}` on the ground branch (`|g, α⟩ → |g, −α⟩`), excited
    /// branch untouched: the dispersive interaction with `Ω₀²T/4δ = π`.
    ConditionalPhase,
    Displace(C64),
    Rotate(f64),
    /// `σ_z`: flips the sign of the ground branch.
    PhaseKick,
}

impl Step {
    pub fn inverse(&self) -> Step {
        match *self {
            Step::Displace(beta) => Step::Displace(-beta),
            Step::Rotate(theta) => Step::Rotate(-theta),
            other => other,
        }
    }

    fn is_valid(&self) -> bool {
        match *self {
            Step::Displace(beta) => beta.re.is_finite() && beta.im.is_finite(),
            Step::Rotate(theta) => theta.is_finite(),
            _ => true,
        }
    }

    fn apply(&self, joint: Joint) -> Joint {
        match *self {
            Step::HalfPiPulse => {
                let r = FRAC_1_SQRT_2;
                let scaled = |terms: &[Term], f: f64| -> Vec<Term> {
                    terms
                        .iter()
                        .map(|t| Term::new(t.weight * f, t.amplitude))
                        .collect()
                };
                let mut excited = scaled(&joint.excited, -r);
                excited.extend(scaled(&joint.ground, r));
                let mut ground = scaled(&joint.excited, r);
                ground.extend(scaled(&joint.ground, r));
                Joint {
                    excited: merge(excited),
                    ground: merge(ground),
                }
            }
            Step::ConditionalPhase => {
                let turn = C64::from_polar(1.0, PI);
                let ground = joint
                    .ground
                    .into_iter()
                    .map(|t| Term::new(t.weight, t.amplitude * turn))
                    .collect();
                Joint {
                    excited: joint.excited,
                    ground,
                }
            }
            Step::Displace(beta) => joint.map_fields(|s| s.displace(beta)),
            Step::Rotate(theta) => joint.map_fields(|s| s.rotate(theta)),
            Step::PhaseKick => {
                let ground = joint
                    .ground
                    .into_iter()
                    .map(|t| Term::new(-t.weight, t.amplitude))
                    .collect();
                Joint {
                    excited: joint.excited,
                    ground,
                }
            }
        }
    }
}

fn merge(terms: Vec<Term>) -> Vec<Term> {
    if terms.is_empty() {
        terms
    } else {
        CoherentSuperposition::from_term_vec(terms)
            .merged()
            .terms()
            .to_vec()
    }
}

/// Applies the perturbation to the oscillator part of each branch; the
/// two-level weights are never touched.
fn perturb(joint: Joint, pert: &PerturbationSpec, model: PerturbationModel) -> Joint {
    match model {
        PerturbationModel::Exact => joint.map_fields(|s| pert.apply(s)),
        PerturbationModel::Linearized => joint
            .map_terms(|t| Term::new(t.weight * linearized_phase(pert, t.amplitude), t.amplitude)),
    }
}

/// Phase the linearized model attaches to a component at `gamma`.
fn linearized_phase(pert: &PerturbationSpec, gamma: C64) -> C64 {
    let angle = match pert.kind {
        PerturbationKind::Displacement => 2.0 * (pert.beta() * gamma.conj()).im,
        PerturbationKind::Rotation => pert.magnitude * gamma.norm_sqr(),
    };
    C64::from_polar(1.0, angle)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult {
    pub final_state: HybridState,
    pub p_e: f64,
    pub p_g: f64,
    /// State right before the perturbation.
    pub intermediate: Option<HybridState>,
    /// `|⟨initial|Ψ_f⟩|²`, equal to the overlap of the intermediate state
    /// with its perturbed copy.
    pub return_probability: f64,
}

impl ProtocolResult {
    fn from_final(
        final_state: HybridState,
        intermediate: Option<HybridState>,
        initial: &HybridState,
    ) -> Self {
        let p_e = final_state.p_excited();
        let p_g = final_state.p_ground();
        let total = p_e + p_g;
        let return_probability = initial.fidelity(&final_state);
        Self {
            p_e: p_e / total,
            p_g: p_g / total,
            final_state,
            intermediate,
            return_probability,
        }
    }
}

/// `|Ψ_f⟩ = U† U_x U |level, α⟩` with `U = steps[last] ⋯ steps[0]`.
pub fn generic_strategy(
    steps: &[Step],
    pert: &PerturbationSpec,
    model: PerturbationModel,
    alpha: C64,
    initial: Level,
) -> Result<ProtocolResult> {
    if !steps.iter().all(Step::is_valid) {
        return Err(Error::InvalidArgument("step parameters must be finite"));
    }
    if !(pert.magnitude.is_finite() && pert.direction.is_finite()) {
        return Err(Error::InvalidArgument("perturbation must be finite"));
    }
    let start = HybridState::product(initial, CoherentSuperposition::coherent(alpha))?;
    let mut joint = start.to_joint();
    for step in steps {
        joint = step.apply(joint);
    }
    let intermediate = joint.clone().into_hybrid(alpha);
    joint = perturb(joint, pert, model);
    for step in steps.iter().rev() {
        joint = step.inverse().apply(joint);
    }
    let final_state = joint.into_hybrid(alpha);
    let result = ProtocolResult::from_final(final_state, Some(intermediate), &start);
    debug_assert!(readout_identity_residual(&result, initial, alpha) < 1e-10);
    Ok(result)
}

/// `|P · |⟨α|ψ⟩|² − |⟨level, α|Ψ_f⟩|²|` for the initial level's branch.
fn readout_identity_residual(result: &ProtocolResult, level: Level, alpha: C64) -> f64 {
    let branch = result.final_state.branch(level);
    let p = branch.weight.norm_sqr();
    let probe = CoherentSuperposition::coherent(alpha);
    let lhs = p * probe.inner_product(&branch.state).norm_sqr();
    (lhs - result.return_probability).abs()
}

/// Preparation sequence of the dispersive protocol. Rotations need the
/// extra `D(α)` so the cat circle passes through the origin.
pub fn dispersive_steps(alpha: C64, kind: PerturbationKind) -> Vec<Step> {
    let mut steps = alloc::vec![Step::HalfPiPulse, Step::ConditionalPhase];
    if kind == PerturbationKind::Rotation {
        steps.push(Step::Displace(alpha));
    }
    steps
}

/// Dispersive protocol from `|g, α⟩` with the linearized perturbation.
pub fn dispersive_protocol(alpha: C64, pert: &PerturbationSpec) -> Result<ProtocolResult> {
    dispersive_protocol_with(alpha, pert, PerturbationModel::Linearized)
}

pub fn dispersive_protocol_with(
    alpha: C64,
    pert: &PerturbationSpec,
    model: PerturbationModel,
) -> Result<ProtocolResult> {
    if alpha.norm() < 2.0 {
        return Err(Error::InvalidArgument(
            "dispersive protocol needs |alpha| >= 2",
        ));
    }
    generic_strategy(
        &dispersive_steps(alpha, pert.kind),
        pert,
        model,
        alpha,
        Level::Ground,
    )
}

/// Closed-form final weights `(½(1 − e^{iφ}), ½(1 + e^{iφ}))`, `φ = 4|α|s`.
pub fn dispersive_weights(alpha_mag: f64, s: f64) -> (C64, C64) {
    let e = C64::from_polar(1.0, 4.0 * alpha_mag * s);
    let one = C64::new(1.0, 0.0);
    ((one - e) / 2.0, (one + e) / 2.0)
}

/// Closed-form final weights `(½(e^{iφ} + 1), (b/2)(1 − e^{iφ}))`,
/// `b = e^{−i arg α}`, `φ = 4|α|s_eff`.
pub fn resonant_weights(alpha: C64, s_eff: f64) -> (C64, C64) {
    let e = C64::from_polar(1.0, 4.0 * alpha.norm() * s_eff);
    let one = C64::new(1.0, 0.0);
    let b = C64::from_polar(1.0, -alpha.arg());
    ((e + one) / 2.0, b * (one - e) / 2.0)
}

/// The factorized half-revival state
/// `[e^{−iπn̄/2}|−iα⟩ − e^{iπn̄/2}|iα⟩]/√2 ⊗ (e^{−iπ/2}|e⟩ + e^{−i arg α}|g⟩)/√2`.
pub fn resonant_product_state(alpha: C64) -> Result<HybridState> {
    let nbar = alpha.norm_sqr();
    let i = C64::new(0.0, 1.0);
    let field = CoherentSuperposition::from_terms([
        (C64::from_polar(FRAC_1_SQRT_2, -PI * nbar / 2.0), -i * alpha),
        (-C64::from_polar(FRAC_1_SQRT_2, PI * nbar / 2.0), i * alpha),
    ])?;
    let atom_e = C64::from_polar(FRAC_1_SQRT_2, -PI / 2.0);
    let atom_g = C64::from_polar(FRAC_1_SQRT_2, -alpha.arg());
    let joint = Joint {
        excited: field.clone().scaled(atom_e).terms().to_vec(),
        ground: field.scaled(atom_g).terms().to_vec(),
    };
    Ok(joint.into_hybrid(alpha))
}

/// One semiclassical dressed path of the resonant interaction: the atom
/// follows `D_±` while the field component counter-rotates.
struct DressedPath {
    sign: f64,
    amplitude: C64,
    field: C64,
}

impl DressedPath {
    /// Atomic state `D_+ = (e^{−iφ/2}|e⟩ + b|g⟩)/√2`,
    /// `D_− = (e^{iφ/2}|e⟩ − b|g⟩)/√2`, `b = e^{−i arg α}`.
    fn atom(&self, phi: f64, alpha: C64) -> (C64, C64) {
        let b = C64::from_polar(1.0, -alpha.arg());
        (
            C64::from_polar(FRAC_1_SQRT_2, -self.sign * phi / 2.0),
            b * self.sign * FRAC_1_SQRT_2,
        )
    }
}

/// Resonant protocol from `|e, α⟩` with the phase-kick inversion.
///
/// The interaction runs for `dt_fraction · T_R/2`; the field components
/// sit at `α e^{∓iφ/2}` with `φ = π · dt_fraction`, and a full half revival
/// gives the factorized state of [`resonant_product_state`]. Only the
/// linearized perturbation model is meaningful here.
pub fn resonant_protocol(
    alpha: C64,
    pert: &PerturbationSpec,
    dt_fraction: f64,
) -> Result<ProtocolResult> {
    if !(dt_fraction > 0.0 && dt_fraction <= 1.0) {
        return Err(Error::DtFraction(dt_fraction));
    }
    if alpha.norm_sqr() < 4.0 {
        return Err(Error::InvalidArgument(
            "resonant protocol needs nbar = |alpha|^2 >= 4",
        ));
    }
    if !(pert.magnitude.is_finite() && pert.direction.is_finite()) {
        return Err(Error::InvalidArgument("perturbation must be finite"));
    }
    let nbar = alpha.norm_sqr();
    let phi = PI * dt_fraction;
    let paths = [1.0, -1.0].map(|sign| DressedPath {
        sign,
        // |e⟩ = (D_+(0) + D_−(0))/√2, then e^{∓iφn̄/2} from the field rotation
        amplitude: C64::from_polar(FRAC_1_SQRT_2, -sign * phi * nbar / 2.0),
        field: alpha * C64::from_polar(1.0, -sign * phi / 2.0),
    });

    let mut inter = Joint::default();
    for p in &paths {
        let (ae, ag) = p.atom(phi, alpha);
        inter.excited.push(Term::new(p.amplitude * ae, p.field));
        inter.ground.push(Term::new(p.amplitude * ag, p.field));
    }
    let intermediate = inter.into_hybrid(alpha);

    // Perturb each path's field component; rotations are bracketed by
    // D(±iα) so that one component sits near the origin.
    let eta = C64::new(0.0, 1.0) * alpha;
    let path_phase = |field: C64| -> C64 {
        let term = CoherentSuperposition::coherent(field);
        let moved = match pert.kind {
            PerturbationKind::Displacement => term,
            PerturbationKind::Rotation => term.displace(eta),
        };
        let t = moved.terms()[0];
        let kicked = Term::new(t.weight * linearized_phase(pert, t.amplitude), t.amplitude);
        let back = match pert.kind {
            PerturbationKind::Displacement => {
                CoherentSuperposition::from_term_vec(alloc::vec![kicked])
            }
            PerturbationKind::Rotation => {
                CoherentSuperposition::from_term_vec(alloc::vec![kicked]).displace(-eta)
            }
        };
        back.terms()[0].weight
    };

    // σ_z kick, second interaction: U(T)σ_z = σ_z U(T)†, which returns each
    // path to D_±(0) ⊗ |α⟩ and cancels the dynamical phases.
    let mut fin = Joint::default();
    for p in &paths {
        let chi = path_phase(p.field);
        let amp = chi * FRAC_1_SQRT_2;
        let (ae, ag) = p.atom(0.0, alpha);
        fin.excited.push(Term::new(amp * ae, alpha));
        fin.ground.push(Term::new(amp * ag, alpha));
    }
    let fin = Step::PhaseKick.apply(fin);
    let start = HybridState::product(Level::Excited, CoherentSuperposition::coherent(alpha))?;
    Ok(ProtocolResult::from_final(
        fin.into_hybrid(alpha),
        Some(intermediate),
        &start,
    ))
}

#[cfg(test)]
mod tests;
