//! Reference system: two identical small atoms at `x = 0` and `x = x0`.
//!
//! Only the transmission rate has a closed form here; the complex amplitudes
//! come from the matching-system oracle.

use num_complex::Complex64;

use crate::error::Result;
use crate::oracle::{self, SystemKind};
use crate::params::{reduce, SystemParams};
use crate::two_level;

/// Transmission rate `T₃` of the lossless two-atom chain.
pub fn transmission_rate(params: &SystemParams, energy: f64) -> Result<f64> {
    let red = reduce(params, energy)?;
    let v_g = params.v_g();
    let f2 = params.f() * params.f();
    let f4_over_vg = f2 * f2 / v_g;
    let d = red.detuning;

    if params.f() == 0.0 {
        return Ok(1.0);
    }
    if d == 0.0 {
        return Ok(0.0);
    }

    let (sin, _) = red.phase.sin_cos();
    let num = d * d * v_g;
    let re = num - 2.0 * f4_over_vg * sin * sin;
    let im = 2.0 * f2 * d + f4_over_vg * (2.0 * red.phase).sin();
    Ok(num * num / (re * re + im * im))
}

/// `(t, r)` from the matching system, including `γ_e` on both atoms.
///
/// Co-located atoms (`x0 = 0`) leave the matching system singular, since only
/// the symmetric combination couples. That combination is a single atom with
/// coupling `√2 f`, which is evaluated instead.
pub fn amplitudes(params: &SystemParams, energy: f64) -> Result<(Complex64, Complex64)> {
    if params.x0() == 0.0 {
        let bright = params.with_coupling(params.f() / std::f64::consts::SQRT_2)?;
        let s = two_level::scatter(&bright, energy)?;
        return Ok((s.t, s.r));
    }
    let system = oracle::assemble(SystemKind::TwoSmallAtoms, params, energy)?;
    let solution = oracle::solve(&system)?;
    Ok((solution.t(), solution.r()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn resonance_always_reflects() {
        let p = SystemParams::standard();
        for x0 in [0.0, 0.1, 0.5, 1.48, 3.3, 9.9] {
            let q = p.with_x0(x0).unwrap();
            assert_eq!(transmission_rate(&q, q.omega_e()).unwrap(), 0.0);
        }
    }

    #[test]
    fn commensurate_spacing_gives_single_lorentzian() {
        let p = SystemParams::standard();
        let e = p.omega_e() * 1.003;
        let d = e - p.omega_e();
        let width = p.decay_scale();
        for m in 1..4 {
            let q = p.with_x0(m as f64 * PI * p.v_g() / e).unwrap();
            let expected = d * d / (d * d + width * width);
            assert!((transmission_rate(&q, e).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn colocated_atoms_act_as_one() {
        let p = SystemParams::standard();
        for d in [-0.01, -1e-4, 2e-3, 0.015] {
            let e = p.omega_e() * (1.0 + d);
            let (t, r) = amplitudes(&p, e).unwrap();
            assert!((t.norm_sqr() - transmission_rate(&p, e).unwrap()).abs() < 1e-12);
            assert!((t.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-12);
            // Nearby spacing goes through the matching system and must agree.
            let (tn, _) = amplitudes(&p.with_x0(1e-9).unwrap(), e).unwrap();
            assert!((tn - t).norm() < 1e-6);
        }
    }

    #[test]
    fn uncoupled_atoms_are_transparent() {
        let p = SystemParams::standard().with_coupling(0.0).unwrap();
        assert_eq!(transmission_rate(&p, 3.1e9).unwrap(), 1.0);
        let p = SystemParams::standard().with_coupling(1e-3).unwrap();
        assert!((transmission_rate(&p, 3.1e9).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rate_is_bounded() {
        let p = SystemParams::standard().with_x0(2.7).unwrap();
        for i in 0..1000 {
            let e = p.omega_e() * (0.98 + 4e-5 * i as f64);
            let t = transmission_rate(&p, e).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&t));
        }
    }
}
