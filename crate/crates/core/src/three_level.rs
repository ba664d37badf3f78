//! Driven Λ-type giant atom: scattering amplitudes and dressed-state analysis.
//!
//! In the frame rotating with the drive the |f⟩ level sits at the two-photon
//! pole `δ = ω_f + ω_d`. With `Δ_f = E − δ + iγ_f` and `Δ = E − ω_e + iγ_e`:
//!
//! ```text
//! D = Δ_f [i Δ v_g − 2 f² (1 + p)] − i v_g η²
//! t = (Δ_f [i Δ v_g − 2i f² sin(k x0)] − i v_g η²) / D
//! r = 2 f² Δ_f (1 + cos(k x0)) p / D
//! ```

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{drive_detuning, reduce, Drive, SystemParams, ThreeLevelAtom};
use crate::two_level::{self, at_phase_node, ScatterResult, DEGENERACY_TOLERANCE};

fn amplitudes(
    params: &SystemParams,
    energy: f64,
    gamma_e: f64,
    gamma_f: f64,
) -> Result<(Complex64, Complex64)> {
    let eta = params.eta();
    if eta == 0.0 {
        // The (E − δ) factor cancels and the |f⟩ level drops out.
        return two_level::amplitudes(params, energy, gamma_e);
    }

    let red = reduce(params, energy)?;
    let v_g = params.v_g();
    let f2 = params.f() * params.f();
    let p = Complex64::from_polar(1.0, red.phase);
    let (sin, cos) = red.phase.sin_cos();
    let detuning = Complex64::new(red.detuning, gamma_e);
    let pole_detuning = Complex64::new(energy - red.two_photon_pole, gamma_f);

    // Without the coupling term both numerator and denominator reduce to
    // i v_g (Δ_f Δ − η²), which vanishes at the dressed frequencies.
    let decoupled = params.f() == 0.0 || at_phase_node(p);
    let scale = params.omega_e() * params.omega_e();
    if decoupled && (pole_detuning * detuning - eta * eta).norm() <= DEGENERACY_TOLERANCE * scale {
        return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }

    let free = Complex64::i() * detuning * v_g;
    let drive_term = Complex64::new(0.0, v_g * eta * eta);
    let denominator = pole_detuning * (free - 2.0 * f2 * (1.0 + p)) - drive_term;
    let numerator = pole_detuning * (free - Complex64::new(0.0, 2.0 * f2 * sin)) - drive_term;
    let t = numerator / denominator;
    let r = 2.0 * f2 * (1.0 + cos) * pole_detuning * p / denominator;
    Ok((t, r))
}

/// Lossless transmission amplitude; `γ_e`, `γ_f` in `params` are ignored.
pub fn t2(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, 0.0, 0.0).map(|(t, _)| t)
}

/// Lossless reflection amplitude.
pub fn r2(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, 0.0, 0.0).map(|(_, r)| r)
}

pub fn t2_dissipative(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, params.gamma_e(), params.gamma_f()).map(|(t, _)| t)
}

pub fn r2_dissipative(params: &SystemParams, energy: f64) -> Result<Complex64> {
    amplitudes(params, energy, params.gamma_e(), params.gamma_f()).map(|(_, r)| r)
}

/// Amplitudes and rates including whatever loss `params` carries.
pub fn scatter(params: &SystemParams, energy: f64) -> Result<ScatterResult> {
    let (t, r) = amplitudes(params, energy, params.gamma_e(), params.gamma_f())?;
    Ok(ScatterResult::new(energy, t, r))
}

/// Eigenfrequencies `(ω₊, ω₋)` of the driven |e⟩, |f⟩ subspace in the rotating frame.
pub fn dressed_frequencies(atom: &ThreeLevelAtom, drive: &Drive) -> (f64, f64) {
    let detuning = drive_detuning(atom, drive);
    let eta = drive.eta();
    let centre = atom.omega_e() - 0.5 * detuning;
    let half_split = 0.5 * detuning.hypot(2.0 * eta);
    (centre + half_split, centre - half_split)
}

/// Mixing angle θ of `|ψ₊⟩ = cos(θ/2)|e⟩ + sin(θ/2)|f⟩`.
pub fn mixing_angle(atom: &ThreeLevelAtom, drive: &Drive) -> Result<f64> {
    let detuning = drive_detuning(atom, drive);
    let eta = drive.eta();
    if detuning == 0.0 {
        if eta == 0.0 {
            return Err(Error::DegenerateDressing);
        }
        return Ok(FRAC_PI_2);
    }
    let base = (2.0 * eta / detuning).atan();
    Ok(if detuning > 0.0 {
        base
    } else {
        std::f64::consts::PI + base
    })
}

/// `(|G₊,k₊|, |G₋,k₋|)`, the couplings of the dressed states to waveguide modes `k±`.
pub fn effective_couplings(params: &SystemParams, k_plus: f64, k_minus: f64) -> Result<(f64, f64)> {
    for (name, k) in [("k_plus", k_plus), ("k_minus", k_minus)] {
        if k <= 0.0 || !k.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value: k,
                reason: "wave vector must be positive",
            });
        }
    }
    let theta = mixing_angle(params.atom(), params.drive())?;
    let x0 = params.x0();
    let interference = |k: f64| (1.0 + Complex64::from_polar(1.0, k * x0)).norm();
    let f = params.f();
    Ok((
        f * (0.5 * theta).cos() * interference(k_plus),
        f * (0.5 * theta).sin() * interference(k_minus),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub theta: f64,
    /// `|G₊|` at `k = ω₊ / v_g`.
    pub g_plus_abs: f64,
    /// `|G₋|` at `k = ω₋ / v_g`.
    pub g_minus_abs: f64,
}

/// Dressed frequencies, mixing angle and couplings evaluated at `k± = ω± / v_g`.
pub fn dressed_pair(params: &SystemParams) -> Result<DressedPair> {
    let (omega_plus, omega_minus) = dressed_frequencies(params.atom(), params.drive());
    let theta = mixing_angle(params.atom(), params.drive())?;
    let v_g = params.v_g();
    let (g_plus_abs, g_minus_abs) =
        effective_couplings(params, omega_plus / v_g, omega_minus / v_g)?;
    Ok(DressedPair {
        omega_plus,
        omega_minus,
        theta,
        g_plus_abs,
        g_minus_abs,
    })
}
