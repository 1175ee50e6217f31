//! Finite superpositions of coherent states.
//!
//! A [`CoherentSuperposition`] is a list of `weight · |amplitude⟩` terms.
//! Displacements and rotations act exactly on each term, and inner
//! products are evaluated through the coherent-state Gram kernel
//! `⟨β|α⟩ = exp(−(|α|² + |β|²)/2 + β*α)`, so no basis truncation is
//! involved until [`CoherentSuperposition::to_fock`] is called.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Amplitudes closer than this (relative to their size) are merged.
const MERGE_TOLERANCE: f64 = 1e-12;

/// `⟨bra|ket⟩` for two coherent states.
pub fn coherent_overlap(bra: C64, ket: C64) -> C64 {
    (-(bra.norm_sqr() + ket.norm_sqr()) / 2.0 + bra.conj() * ket).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub weight: C64,
    pub amplitude: C64,
}

impl Term {
    pub fn new(weight: C64, amplitude: C64) -> Self {
        Self { weight, amplitude }
    }
}

/// `Σ_k w_k |α_k⟩`, not necessarily normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentSuperposition {
    terms: Vec<Term>,
}

impl CoherentSuperposition {
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C64, C64)>,
    {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(weight, amplitude)| Term { weight, amplitude })
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptySuperposition);
        }
        if terms
            .iter()
            .any(|t| !is_finite(t.weight) || !is_finite(t.amplitude))
        {
            return Err(Error::NonFinite("superposition terms"));
        }
        Ok(Self { terms })
    }

    pub(crate) fn from_term_vec(terms: Vec<Term>) -> Self {
        debug_assert!(!terms.is_empty());
        Self { terms }
    }

    pub fn coherent(alpha: C64) -> Self {
        Self {
            terms: alloc::vec![Term::new(C64::new(1.0, 0.0), alpha)],
        }
    }

    pub fn vacuum() -> Self {
        Self::coherent(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Squared norm through the full Gram matrix.
    pub fn norm_sqr(&self) -> f64 {
        self.inner_product(self).re
    }

    pub fn normalize(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        for t in &mut self.terms {
            t.weight *= factor;
        }
        self
    }

    /// Combines terms that sit on the same amplitude.
    pub fn merged(self) -> Self {
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            let tol = MERGE_TOLERANCE * (1.0 + t.amplitude.norm());
            match out
                .iter_mut()
                .find(|o| (o.amplitude - t.amplitude).norm() <= tol)
            {
                Some(o) => o.weight += t.weight,
                None => out.push(t),
            }
        }
        Self { terms: out }
    }

    /// `D(β)` applied term-wise: `D(β)|α⟩ = e^{i Im(βα*)} |α + β⟩`.
    pub fn displace(&self, beta: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let phase = (beta * t.amplitude.conj()).im;
                Term::new(t.weight * C64::from_polar(1.0, phase), t.amplitude + beta)
            })
            .collect();
        Self { terms }
    }

    /// `R(θ) = e^{iθ a†a}` applied term-wise: `R(θ)|α⟩ = |e^{iθ}α⟩`.
    pub fn rotate(&self, theta: f64) -> Self {
        let turn = C64::from_polar(1.0, theta);
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.weight, t.amplitude * turn))
            .collect();
        Self { terms }
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                acc += a.weight.conj() * b.weight * coherent_overlap(a.amplitude, b.amplitude);
            }
        }
        acc
    }

    /// Exact `⟨a†a⟩`, using `⟨α_l|a†a|α_k⟩ = α_l* α_k ⟨α_l|α_k⟩`.
    pub fn mean_excitation(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for l in &self.terms {
            for k in &self.terms {
                acc += l.weight.conj()
                    * k.weight
                    * l.amplitude.conj()
                    * k.amplitude
                    * coherent_overlap(l.amplitude, k.amplitude);
            }
        }
        acc.re / self.norm_sqr()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amplitude.norm())
            .fold(0.0, f64::max)
    }

    /// `ceil(|α|² + 6|α| + 10)` for the largest amplitude; keeps the
    /// truncation leakage below 1e-10.
    pub fn default_truncation(&self) -> usize {
        let a = self.max_amplitude();
        (a * a + 6.0 * a + 10.0).ceil() as usize
    }

    pub fn to_fock(&self, n_trunc: usize) -> Result<FockVector> {
        if n_trunc == 0 {
            return Err(Error::InvalidArgument("n_trunc must be at least 1"));
        }
        let mut coefficients = alloc::vec![C64::new(0.0, 0.0); n_trunc];
        for t in &self.terms {
            for (c, basis) in coefficients
                .iter_mut()
                .zip(CoherentCoefficients::new(t.amplitude))
            {
                *c += t.weight * basis;
            }
        }
        let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        let leakage = (1.0 - captured / self.norm_sqr()).max(0.0);
        if coefficients.iter().any(|c| !is_finite(*c)) {
            return Err(Error::NonFinite("Fock coefficients"));
        }
        Ok(FockVector {
            coefficients,
            leakage,
        })
    }
}

/// Number-basis coefficients `e^{−|α|²/2} αⁿ / √n!` evaluated in log
/// magnitude so large `n` and `|α|` neither overflow nor underflow early.
struct CoherentCoefficients {
    log_abs: f64,
    half_norm: f64,
    unit: C64,
    phase: C64,
    log_factorial: f64,
    n: usize,
}

impl CoherentCoefficients {
    fn new(alpha: C64) -> Self {
        let r = alpha.norm();
        let unit = if r > 0.0 {
            alpha / r
        } else {
            C64::new(1.0, 0.0)
        };
        Self {
            log_abs: if r > 0.0 { r.ln() } else { f64::NEG_INFINITY },
            half_norm: r * r / 2.0,
            unit,
            phase: C64::new(1.0, 0.0),
            log_factorial: 0.0,
            n: 0,
        }
    }
}

impl Iterator for CoherentCoefficients {
    type Item = C64;

    fn next(&mut self) -> Option<C64> {
        let n = self.n;
        if n > 0 {
            self.log_factorial += (n as f64).ln();
            self.phase *= self.unit;
        }
        self.n += 1;
        let log_mag = if n == 0 {
            -self.half_norm
        } else if self.log_abs == f64::NEG_INFINITY {
            return Some(C64::new(0.0, 0.0));
        } else {
            -self.half_norm + n as f64 * self.log_abs - 0.5 * self.log_factorial
        };
        Some(self.phase * log_mag.exp())
    }
}

/// Truncated number-basis vector with its reported leakage
/// `1 − Σ|c_n|²` relative to the source state's norm.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub coefficients: Vec<C64>,
    pub leakage: f64,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn dot(&self, other: &Self) -> C64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn mean_excitation(&self) -> f64 {
        let n: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm_sqr())
            .sum();
        n / self.norm_sqr()
    }

    /// Population of the highest retained number state.
    pub fn top_population(&self) -> f64 {
        self.coefficients.last().map_or(0.0, |c| c.norm_sqr())
    }
}

/// `Σ_k e^{iγ_k} |e^{iφ_k} α⟩` with `φ_k = 2πk/M` (`k = 1..M`), normalized
/// through the Gram matrix rather than the asymptotic `1/√M`.
pub fn make_circular_state(alpha: C64, m: usize, gammas: &[f64]) -> Result<CoherentSuperposition> {
    if m == 0 {
        return Err(Error::EmptySuperposition);
    }
    if gammas.len() != m {
        return Err(Error::PhaseCount {
            expected: m,
            got: gammas.len(),
        });
    }
    let terms = gammas.iter().enumerate().map(|(idx, &gamma)| {
        let k = (idx + 1) as f64;
        let phi = 2.0 * PI * k / m as f64;
        (
            C64::from_polar(1.0, gamma),
            alpha * C64::from_polar(1.0, phi),
        )
    });
    CoherentSuperposition::from_terms(terms)?.normalize()
}

/// `(|α⟩ + |−α⟩)` normalized.
pub fn cat(alpha: C64) -> CoherentSuperposition {
    make_circular_state(alpha, 2, &[0.0; 2]).expect("cat state is always normalizable")
}

/// `(|α⟩ + |−α⟩ + |iα⟩ + |−iα⟩)` normalized.
pub fn compass(alpha: C64) -> CoherentSuperposition {
    make_circular_state(alpha, 4, &[0.0; 4]).expect("compass state is always normalizable")
}

fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn single_term_circle() {
        let s = make_circular_state(c(3.0, 0.0), 1, &[0.0]).unwrap();
        assert_eq!(s.len(), 1);
        assert_abs_diff_eq!(s.terms()[0].amplitude.re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.terms()[0].amplitude.im, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cat_and_compass_amplitudes() {
        let amps = |s: &CoherentSuperposition| -> Vec<C64> {
            s.terms().iter().map(|t| t.amplitude).collect()
        };
        let close = |a: C64, b: C64| (a - b).norm() < 1e-12;

        let cat2 = make_circular_state(c(0.0, 4.0), 2, &[0.0, 0.0]).unwrap();
        let a = amps(&cat2);
        assert!(close(a[0], c(0.0, -4.0)) && close(a[1], c(0.0, 4.0)));

        let comp = make_circular_state(c(0.0, 4.0), 4, &[0.0; 4]).unwrap();
        for want in [c(4.0, 0.0), c(-4.0, 0.0), c(0.0, 4.0), c(0.0, -4.0)] {
            assert!(amps(&comp).iter().any(|&z| close(z, want)));
        }
        assert_abs_diff_eq!(comp.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gamma_count_mismatch() {
        let err = make_circular_state(c(1.0, 0.0), 3, &[0.0, 1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::PhaseCount {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn small_alpha_normalization_uses_gram_matrix() {
        let s = make_circular_state(c(0.3, 0.0), 2, &[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        // 1/sqrt(2) would be badly off here
        assert!((s.terms()[0].weight.norm() - 1.0 / 2f64.sqrt()).abs() > 0.05);
    }

    #[test]
    fn displace_vacuum_and_back_to_origin() {
        let beta = c(0.7, -1.1);
        let s = CoherentSuperposition::vacuum().displace(beta);
        assert_eq!(s.terms()[0].amplitude, beta);
        assert_abs_diff_eq!(s.terms()[0].weight.re, 1.0, epsilon = 1e-15);

        let alpha = c(1.5, 2.0);
        let back = CoherentSuperposition::coherent(alpha).displace(-alpha);
        assert_abs_diff_eq!(back.terms()[0].amplitude.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(back.terms()[0].weight.arg(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn displaced_cat_overlap_near_fringe_value() {
        let alpha = c(0.0, 4.0);
        let cat2 = cat(alpha);
        let beta = c(0.0, 1.0) * alpha / alpha.norm() * 0.1;
        let ov = cat2.inner_product(&cat2.displace(beta)).norm_sqr();
        // exact: e^{-s^2} (1 + cos 1.6)/2
        let fringe = (1.0 + 1.6f64.cos()) / 2.0;
        assert_abs_diff_eq!(ov, (-0.01f64).exp() * fringe, epsilon = 1e-12);
        assert_abs_diff_eq!(ov, 0.485, epsilon = 5e-3);
    }

    #[test]
    fn rotation_identity_and_half_turn() {
        let s = cat(c(1.0, 2.0));
        assert_eq!(s.rotate(0.0), s);
        let half = CoherentSuperposition::coherent(c(2.0, 1.0)).rotate(PI);
        assert!((half.terms()[0].amplitude - c(-2.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn rotated_displaced_cat_is_quasi_orthogonal() {
        let alpha = c(0.0, 4.0);
        let shifted = cat(alpha).displace(alpha);
        let rotated = shifted.rotate(PI / (4.0 * 16.0));
        assert!(shifted.inner_product(&rotated).norm_sqr() < 0.01);
    }

    #[test]
    fn inner_product_basics() {
        let a = c(1.2, -0.4);
        let s = CoherentSuperposition::coherent(a);
        assert_abs_diff_eq!(s.inner_product(&s).re, 1.0, epsilon = 1e-14);
        let v = CoherentSuperposition::vacuum().inner_product(&s);
        assert_abs_diff_eq!(v.re, (-a.norm_sqr() / 2.0).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cat_quasi_orthogonal_at_first_zero() {
        let alpha = c(0.0, 4.0);
        let cat2 = cat(alpha);
        let s = PI / 16.0;
        let beta = c(0.0, 1.0) * alpha / alpha.norm() * s;
        assert!(cat2.inner_product(&cat2.displace(beta)).norm_sqr() < 1e-12);
    }

    #[test]
    fn fock_vacuum_and_coherent() {
        let f = CoherentSuperposition::vacuum().to_fock(4).unwrap();
        assert_eq!(f.coefficients[0], c(1.0, 0.0));
        assert!(f.coefficients[1..].iter().all(|z| z.norm() == 0.0));

        let f = CoherentSuperposition::coherent(c(1.0, 0.0))
            .to_fock(32)
            .unwrap();
        assert_abs_diff_eq!(f.coefficients[0].re, (-0.5f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(f.coefficients[1].re, (-0.5f64).exp(), epsilon = 1e-15);
        assert!(f.leakage < 1e-14);
        assert!(matches!(
            CoherentSuperposition::vacuum().to_fock(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn fock_cat_parity() {
        let s = make_circular_state(c(2.0, 0.0), 2, &[0.0, 0.0]).unwrap();
        let f = s.to_fock(s.default_truncation()).unwrap();
        for odd in f.coefficients.iter().skip(1).step_by(2) {
            assert!(odd.norm() < 1e-14);
        }
        assert!(f.leakage < 1e-10);
    }

    #[test]
    fn fock_large_amplitude_is_finite() {
        let s = CoherentSuperposition::coherent(c(30.0, 20.0));
        let f = s.to_fock(s.default_truncation()).unwrap();
        assert!(f
            .coefficients
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite()));
        // the default cut sits ~6.3 standard deviations out at |α| ≈ 36
        assert!(f.leakage < 1e-9, "{}", f.leakage);
        let moderate = CoherentSuperposition::coherent(c(6.0, 5.0));
        assert!(
            moderate
                .to_fock(moderate.default_truncation())
                .unwrap()
                .leakage
                < 1e-10
        );
    }

    #[test]
    fn mean_excitation_values() {
        assert_abs_diff_eq!(
            CoherentSuperposition::coherent(c(3.0, 0.0)).mean_excitation(),
            9.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(cat(c(0.0, 4.0)).mean_excitation(), 16.0, epsilon = 1e-10);

        let small = cat(c(0.5, 0.0));
        let oracle = small.to_fock(60).unwrap().mean_excitation();
        assert_abs_diff_eq!(small.mean_excitation(), oracle, epsilon = 1e-12);
        // tanh(|α|²)|α|² for the even cat
        assert!((small.mean_excitation() - 0.25).abs() > 0.1);
    }

    #[test]
    fn merge_collapses_cancelling_terms() {
        let a = c(1.0, 1.0);
        let s = CoherentSuperposition::from_terms([(c(1.0, 0.0), a), (c(-1.0, 0.0), a)]).unwrap();
        let m = s.merged();
        assert_eq!(m.len(), 1);
        assert_eq!(m.terms()[0].weight, c(0.0, 0.0));
        assert_eq!(m.clone().normalize(), Err(Error::ZeroNorm));
    }
}
