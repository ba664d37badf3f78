//! Closed-form scattering amplitudes of the two-level giant atom.
//!
//! With `Δ = E − ω_e`, `k = E / v_g` and `p = e^{i k x0}`:
//!
//! ```text
//! t = [i(Δ + iγ_e) v_g − 2i f² sin(k x0)] / [i(Δ + iγ_e) v_g − 2 f² (1 + p)]
//! r = 2 f² (1 + cos(k x0)) p              / [i(Δ + iγ_e) v_g − 2 f² (1 + p)]
//! ```
//!
//! At a decoherence-free phase (`1 + p = 0`) numerator and denominator of `t`
//! coincide, so `t = 1`, `r = 0`; when additionally `Δ + iγ_e = 0` the
//! expression is 0/0 and the analytic limit `t = 1`, `r = 0` is returned.

use num_complex::Complex64;

use crate::error::Result;
use crate::params::{reduce, SystemParams};

/// Relative tolerance for detecting the removable 0/0 at a decoherence-free point.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    pub energy: f64,
    pub t: Complex64,
    pub r: Complex64,
    /// `|t|²`
    pub transmission: f64,
    /// `|r|²`
    pub reflection: f64,
}

impl ScatterResult {
    pub fn new(energy: f64, t: Complex64, r: Complex64) -> Self {
        Self {
            energy,
            t,
            r,
            transmission: t.norm_sqr(),
            reflection: r.norm_sqr(),
        }
    }

    /// `1 − T − R`: probability lost to spontaneous emission.
    pub fn loss(&self) -> f64 {
        1.0 - self.transmission - self.reflection
    }
}

/// True when the two coupling points interfere destructively, `|1 + e^{iφ}| ≤ tol`.
pub(crate) fn at_phase_node(phase_factor: Complex64) -> bool {
    (1.0 + phase_factor).norm() <= DEGENERACY_TOLERANCE
}

pub(crate) fn amplitudes(
    params: &SystemParams,
    energy: f64,
    gamma_e: f64,
) -> Result<(Complex64, Complex64)> {
    let red = reduce(params, energy)?;
    let v_g = params.v_g();
    let f2 = params.f() * params.f();
    let p = Complex64::from_polar(1.0, red.phase);
    let (sin, cos) = red.phase.sin_cos();
    let detuning = Complex64::new(red.detuning, gamma_e);

    let decoupled = params.f() == 0.0 || at_phase_node(p);
    if decoupled && detuning.norm() <= DEGENERACY_TOLERANCE * params.omega_e() {
        return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }

    let free = Complex64::i() * detuning * v_g;
    let denominator = free - 2.0 * f2 * (1.0 + p);
    let t = (free - Complex64::new(0.0, 2.0 * f2 * sin)) / denominator;
    let r = 2.0 * f2 * (1.0 + cos) * p / denominator;
    Ok((t, r))
}

/// Lossless transmission amplitude; `γ_e` in `params` is ignored.
pub fn t1(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, 0.0).map(|(t, _)| t)
}

/// Transmission amplitude with the excited level broadened to `ω_e − iγ_e`.
pub fn t1_dissipative(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, params.gamma_e()).map(|(t, _)| t)
}

/// Reflection amplitude, including `γ_e` from `params`.
pub fn r1(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, params.gamma_e()).map(|(_, r)| r)
}

pub fn scatter(params: &SystemParams, energy: f64) -> Result<ScatterResult> {
    let (t, r) = amplitudes(params, energy, params.gamma_e())?;
    Ok(ScatterResult::new(energy, t, r))
}
