//! Truncated-Fock Jaynes–Cummings evolution in the interaction picture,
//! `H = (Ω₀/2)(e^{iδt} σ† a + e^{−iδt} σ a†)`.
//!
//! The Hamiltonian only couples `|e, n⟩ ↔ |g, n+1⟩`, so each pair is
//! integrated on its own as a 2×2 time-dependent system.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::ode::{integrate, Tolerance};
use crate::states::FockVector;
use crate::{Error, Result, C64};

use super::HybridState;

const TOLERANCE: Tolerance = Tolerance {
    rtol: 1e-11,
    atol: 1e-14,
};
const MAX_LEAKAGE: f64 = 1e-8;
const MAX_TOP_POPULATION: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JCParams {
    /// Vacuum Rabi frequency Ω₀ (s⁻¹).
    pub omega0_rabi: f64,
    /// δ = ω₀ − ω (s⁻¹).
    pub detuning: f64,
    pub nbar: f64,
    /// Interaction time (s).
    pub interaction_time: f64,
}

impl JCParams {
    pub fn resonant(omega0_rabi: f64, nbar: f64, interaction_time: f64) -> Self {
        Self {
            omega0_rabi,
            detuning: 0.0,
            nbar,
            interaction_time,
        }
    }

    /// Far-detuned parameters with the interaction time set so that
    /// `Ω₀² T / 4δ = π`.
    pub fn dispersive_half_period(omega0_rabi: f64, nbar: f64, detuning: f64) -> Self {
        Self {
            omega0_rabi,
            detuning,
            nbar,
            interaction_time: 4.0 * PI * detuning / (omega0_rabi * omega0_rabi),
        }
    }

    /// `δ ≥ 10 Ω₀ √n̄`.
    pub fn is_dispersive(&self) -> bool {
        self.detuning.abs() >= 10.0 * self.omega0_rabi * self.nbar.sqrt()
    }

    pub fn revival_time(&self) -> f64 {
        revival_time(self)
    }
}

/// `T_R = 4π√n̄/Ω₀`.
pub fn revival_time(params: &JCParams) -> f64 {
    4.0 * PI * params.nbar.sqrt() / params.omega0_rabi
}

/// Joint amplitudes `c_{e,n}` and `c_{g,n}`, `n < N`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    pub excited: Vec<C64>,
    pub ground: Vec<C64>,
}

impl JointState {
    pub fn product(tls: [C64; 2], psi: &FockVector) -> Self {
        Self {
            excited: psi.coefficients.iter().map(|c| tls[0] * c).collect(),
            ground: psi.coefficients.iter().map(|c| tls[1] * c).collect(),
        }
    }

    /// Number-basis image of an analytic hybrid state.
    pub fn from_hybrid(state: &HybridState, n_trunc: usize) -> Result<Self> {
        let e = state.excited.state.to_fock(n_trunc)?;
        let g = state.ground.state.to_fock(n_trunc)?;
        Ok(Self {
            excited: e
                .coefficients
                .iter()
                .map(|c| c * state.excited.weight)
                .collect(),
            ground: g
                .coefficients
                .iter()
                .map(|c| c * state.ground.weight)
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.excited.len()
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>();
        dot(&self.excited, &other.excited) + dot(&self.ground, &other.ground)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.overlap(self).re
    }

    pub fn fidelity(&self, other: &Self) -> f64 {
        self.overlap(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    pub fn p_excited(&self) -> f64 {
        self.excited.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.norm_sqr()
    }
}

/// Integrates the interaction-picture JC dynamics for
/// `params.interaction_time`, starting from `tls ⊗ psi` with
/// `tls = [c_e, c_g]`.
pub fn jc_numeric_evolve(psi: &FockVector, tls: [C64; 2], params: &JCParams) -> Result<JointState> {
    if !(params.omega0_rabi > 0.0) || !params.detuning.is_finite() {
        return Err(Error::InvalidArgument(
            "need omega0 > 0 and a finite detuning",
        ));
    }
    if !(params.interaction_time >= 0.0) {
        return Err(Error::InvalidArgument(
            "interaction time must be non-negative",
        ));
    }
    if psi.leakage > MAX_LEAKAGE {
        return Err(Error::Truncation(psi.leakage));
    }
    if psi.top_population() > MAX_TOP_POPULATION {
        return Err(Error::Truncation(psi.top_population()));
    }
    let mut out = JointState::product(tls, psi);
    let n = psi.dim();
    let (omega, delta, t_end) = (params.omega0_rabi, params.detuning, params.interaction_time);

    // block k couples e_k with g_{k+1}; e_{N-1} would need g_N and is left
    // alone, which the top-population check makes harmless
    for k in 0..n.saturating_sub(1) {
        let y0 = [out.excited[k], out.ground[k + 1]];
        if y0[0].norm_sqr() + y0[1].norm_sqr() == 0.0 {
            continue;
        }
        let g = omega * ((k + 1) as f64).sqrt() / 2.0;
        let rhs = move |t: f64, y: &[C64; 2]| {
            let phase = C64::from_polar(1.0, delta * t);
            let mi = C64::new(0.0, -g);
            [mi * phase * y[1], mi * phase.conj() * y[0]]
        };
        let h0 = 0.05 / (g + delta.abs());
        let y = integrate(rhs, y0, 0.0, t_end, TOLERANCE, h0)?;
        out.excited[k] = y[0];
        out.ground[k + 1] = y[1];
    }
    Ok(out)
}
