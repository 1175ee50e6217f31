//! Wigner functions of coherent superpositions on rectangular grids.
//!
//! Convention: `(1/π) ∫ W d²ᾱ = 1`, and a coherent state peaks at 2. The
//! overlap of two pure states is then `(1/π) ∫ W₁ W₂ d²ᾱ`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::states::CoherentSuperposition;
use crate::{Error, Result, C64};

/// Padding around the amplitude bounding box, in units of the vacuum
/// half-width: `e^{−2·4²}` is below 1e-13.
const AUTO_PADDING: f64 = 4.0;
/// Coarsest step the auto-sizer will pick, even for the vacuum.
const AUTO_MAX_STEP: f64 = 0.1;

/// Weyl symbol of `|ket⟩⟨bra|` at `point`.
///
/// `2 ⟨bra|ket⟩ exp(−2 (ᾱ − ket)(ᾱ* − bra*))`; the modulus is the Gaussian
/// `2 exp(−2|ᾱ − (ket + bra)/2|²)` and the phase carries the interference
/// fringes with spatial frequency `2|ket − bra|`.
pub fn cross_wigner(ket: C64, bra: C64, point: C64) -> C64 {
    let exponent = -(ket.norm_sqr() + bra.norm_sqr()) / 2.0 + bra.conj() * ket
        - 2.0 * (point - ket) * (point.conj() - bra.conj());
    2.0 * exponent.exp()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl PhaseSpaceGrid {
    pub fn new(re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid("need at least two samples per axis"));
        }
        if !(re.0 < re.1) || !(im.0 < im.1) {
            return Err(Error::InvalidGrid("bounds must be finite and ordered"));
        }
        if ![re.0, re.1, im.0, im.1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite and ordered"));
        }
        Ok(Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            nx,
            ny,
        })
    }

    /// Bounding box of every amplitude in `states`, padded by four vacuum
    /// widths, with a step meeting `h ≤ π/(8|α|_max)`. Interval counts are
    /// even so the half-resolution error estimate uses the same domain.
    pub fn auto(states: &[&CoherentSuperposition]) -> Result<Self> {
        let mut lo = C64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut amp_max: f64 = 0.0;
        for t in states.iter().flat_map(|s| s.terms()) {
            lo.re = lo.re.min(t.amplitude.re);
            lo.im = lo.im.min(t.amplitude.im);
            hi.re = hi.re.max(t.amplitude.re);
            hi.im = hi.im.max(t.amplitude.im);
            amp_max = amp_max.max(t.amplitude.norm());
        }
        if !lo.re.is_finite() {
            return Err(Error::EmptySuperposition);
        }
        let h = required_step(amp_max).min(AUTO_MAX_STEP);
        let intervals = |span: f64| {
            let n = (span / h).ceil() as usize;
            n + n % 2
        };
        let re = (lo.re - AUTO_PADDING, hi.re + AUTO_PADDING);
        let im = (lo.im - AUTO_PADDING, hi.im + AUTO_PADDING);
        let nx = intervals(re.1 - re.0) + 1;
        let ny = intervals(im.1 - im.0) + 1;
        Self::new(re, im, nx, ny)
    }

    pub fn step_re(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64
    }

    pub fn step_im(&self) -> f64 {
        (self.im_max - self.im_min) / (self.ny - 1) as f64
    }

    pub fn step(&self) -> f64 {
        self.step_re().max(self.step_im())
    }

    pub fn re(&self, ix: usize) -> f64 {
        self.re_min + ix as f64 * self.step_re()
    }

    pub fn im(&self, iy: usize) -> f64 {
        self.im_min + iy as f64 * self.step_im()
    }

    pub fn point(&self, ix: usize, iy: usize) -> C64 {
        C64::new(self.re(ix), self.im(iy))
    }

    /// Whether fringes of a state with largest amplitude `amp_max` are
    /// resolved by this grid.
    pub fn resolves(&self, amp_max: f64) -> bool {
        self.step() <= required_step(amp_max)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn required_step(amp_max: f64) -> f64 {
    if amp_max > 0.0 {
        PI / (8.0 * amp_max)
    } else {
        f64::INFINITY
    }
}

/// Wigner samples, row-major with `iy` (imaginary axis) as the slow index.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    pub grid: PhaseSpaceGrid,
    pub values: Vec<f64>,
    /// False when the grid step exceeds `π/(8|α|_max)`.
    pub resolved: bool,
    /// Largest imaginary part discarded from the Hermitian double sum.
    pub imag_residue: f64,
}

impl WignerField {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    /// `(1/π) ∫ W d²ᾱ` by the trapezoid rule.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.grid, |i| self.values[i], 1) / PI
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise `W₁ · W₂`, the integrand of the phase-space overlap.
    pub fn product_values(&self, other: &Self) -> Result<Vec<f64>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect())
    }
}

/// `W(ᾱ) = Σ_{k,l} w_k w_l* W_{kl}(ᾱ)` over the grid, divided by the
/// state's squared norm.
pub fn wigner_field(state: &CoherentSuperposition, grid: &PhaseSpaceGrid) -> WignerField {
    let norm = state.norm_sqr();
    let terms = state.terms();
    let mut values = Vec::with_capacity(grid.len());
    let mut imag_residue: f64 = 0.0;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let p = grid.point(ix, iy);
            let mut w = C64::new(0.0, 0.0);
            for k in terms {
                for l in terms {
                    w += k.weight * l.weight.conj() * cross_wigner(k.amplitude, l.amplitude, p);
                }
            }
            w /= norm;
            imag_residue = imag_residue.max(w.im.abs());
            values.push(w.re);
        }
    }
    debug_assert!(imag_residue < 1e-10, "Wigner residue {imag_residue}");
    WignerField {
        resolved: grid.resolves(state.max_amplitude()),
        grid: grid.clone(),
        values,
        imag_residue,
    }
}

/// Trapezoid result together with a full-vs-half resolution error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    /// Both fields met the fringe-resolution condition.
    pub resolved: bool,
}

/// `(1/π) ∫ W₁ W₂ d²ᾱ` by the composite trapezoid rule.
pub fn phase_space_overlap(w1: &WignerField, w2: &WignerField) -> Result<Quadrature> {
    let product = w1.product_values(w2)?;
    let grid = &w1.grid;
    let value = trapezoid(grid, |i| product[i], 1) / PI;

    // Half resolution over the largest sub-domain with even interval counts,
    // compared against full resolution on that same sub-domain.
    let sub = PhaseSpaceGrid {
        nx: grid.nx - (grid.nx - 1) % 2,
        ny: grid.ny - (grid.ny - 1) % 2,
        ..grid.clone()
    };
    let error = if sub.nx >= 3 && sub.ny >= 3 {
        let pick = |i: usize| {
            let (ix, iy) = (i % sub.nx, i / sub.nx);
            product[iy * grid.nx + ix]
        };
        let fine = trapezoid_sub(&sub, grid, &pick, 1);
        let coarse = trapezoid_sub(&sub, grid, &pick, 2);
        (fine - coarse).abs() / PI
    } else {
        f64::INFINITY
    };
    Ok(Quadrature {
        value,
        error,
        resolved: w1.resolved && w2.resolved,
    })
}

fn trapezoid(grid: &PhaseSpaceGrid, f: impl Fn(usize) -> f64, stride: usize) -> f64 {
    trapezoid_sub(grid, grid, &|i| f(i), stride)
}

/// Trapezoid sum over `sub` (a prefix of `full`, same spacing) taking
/// every `stride`-th sample along each axis. `f` is indexed row-major
/// over `sub`.
fn trapezoid_sub(
    sub: &PhaseSpaceGrid,
    full: &PhaseSpaceGrid,
    f: &dyn Fn(usize) -> f64,
    stride: usize,
) -> f64 {
    let hx = full.step_re() * stride as f64;
    let hy = full.step_im() * stride as f64;
    let last_x = sub.nx - 1;
    let last_y = sub.ny - 1;
    let mut acc = 0.0;
    for iy in (0..sub.ny).step_by(stride) {
        let wy = if iy == 0 || iy == last_y { 0.5 } else { 1.0 };
        let mut row = 0.0;
        for ix in (0..sub.nx).step_by(stride) {
            let wx = if ix == 0 || ix == last_x { 0.5 } else { 1.0 };
            row += wx * f(iy * sub.nx + ix);
        }
        acc += wy * row;
    }
    acc * hx * hy
}
