//! Complete-reflection conditions and the size-induced frequency shift.
//!
//! Two-level: the photon is fully reflected at detunings `Δ_r` solving
//! `Δ_r = (2f²/v_g) sin(k_r x0)` with `k_r = (ω_e + Δ_r)/v_g`. Since the sine is
//! bounded, every root lies in `|Δ_r| ≤ 2f²/v_g`.
//!
//! Three-level: the valleys sit at the energies `E±` solving
//! `E = ω_e + s/2 − Δ₂/2 ± √((Δ₂ + s)² + 4η²)/2` with `s = (2f²/v_g) sin(E x0/v_g)`.
//!
//! Both are solved by a uniform sign-change scan followed by bisection.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::three_level::dressed_frequencies;

pub const DEFAULT_SCAN_POINTS: usize = 10_000;
/// Bisection stops once the bracket is narrower than this fraction of `ω_e`.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
/// Roots are accepted only if `|residual| < RESIDUAL_TOLERANCE · ω_e`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Valley brackets are `ω± ± VALLEY_BRACKET · f²/v_g`.
pub const VALLEY_BRACKET: f64 = 3.0;
const VALLEY_WIDENING: f64 = 3.0;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// Detuning `Δ_r` (complete reflection) or energy `E±` (valleys), rad/s.
    pub value: f64,
    /// Defining equation evaluated at `value`, rad/s.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub bracket: (f64, f64),
    pub scan_points: usize,
}

impl RootSet {
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().map(|r| r.value)
    }

    /// Root closest to `target`.
    pub fn nearest(&self, target: f64) -> Option<Root> {
        self.roots.iter().copied().min_by(|a, b| {
            (a.value - target)
                .abs()
                .total_cmp(&(b.value - target).abs())
        })
    }
}

fn bisect(h: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut h_lo: f64, tol: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let h_mid = h(mid);
        if h_mid == 0.0 {
            return mid;
        }
        if (h_mid < 0.0) == (h_lo < 0.0) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Every sign change of `h` on a uniform `points`-grid over `[lo, hi]`, refined by bisection.
/// Roots closer together than one grid step merge.
fn scan_roots(h: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize, tol: f64) -> Vec<Root> {
    let step = (hi - lo) / (points - 1) as f64;
    let grid = |i: usize| {
        if i + 1 == points {
            hi
        } else {
            lo + step * i as f64
        }
    };
    let mut roots: Vec<f64> = Vec::new();
    let push = |x: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&last| x - last > step) {
            roots.push(x);
        }
    };

    let mut x_prev = grid(0);
    let mut h_prev = h(x_prev);
    if h_prev == 0.0 {
        push(x_prev, &mut roots);
    }
    for i in 1..points {
        let x = grid(i);
        let h_x = h(x);
        if h_x == 0.0 {
            push(x, &mut roots);
        } else if h_prev != 0.0 && (h_prev < 0.0) != (h_x < 0.0) {
            push(bisect(&h, x_prev, x, h_prev, tol), &mut roots);
        }
        x_prev = x;
        h_prev = h_x;
    }
    roots
        .into_iter()
        .map(|value| Root {
            value,
            residual: h(value),
        })
        .collect()
}

fn check_scan_points(points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidInput(format!(
            "scan needs at least 2 points, got {points}"
        )));
    }
    Ok(())
}

/// Residual of the complete-reflection condition at detuning `delta`.
pub fn shift_residual(params: &SystemParams, x0: f64, delta: f64) -> f64 {
    let k = (params.omega_e() + delta) / params.v_g();
    delta - params.decay_scale() * (k * x0).sin()
}

/// All complete-reflection detunings `Δ_r` at size `x0`, with the default scan density.
pub fn complete_reflection_detunings(params: &SystemParams, x0: f64) -> Result<RootSet> {
    complete_reflection_detunings_with(params, x0, DEFAULT_SCAN_POINTS)
}

pub fn complete_reflection_detunings_with(
    params: &SystemParams,
    x0: f64,
    scan_points: usize,
) -> Result<RootSet> {
    check_scan_points(scan_points)?;
    if x0 < 0.0 || !x0.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x0",
            value: x0,
            reason: "must be non-negative",
        });
    }
    let band = params.decay_scale();
    // Without coupling, or with both points at the origin, the sine term vanishes.
    if band == 0.0 || x0 == 0.0 {
        return Ok(RootSet {
            roots: vec![Root {
                value: 0.0,
                residual: 0.0,
            }],
            bracket: (-band, band),
            scan_points,
        });
    }
    let tol = BISECTION_TOLERANCE * params.omega_e();
    let roots = scan_roots(
        |d| shift_residual(params, x0, d),
        -band,
        band,
        scan_points,
        tol,
    );
    Ok(RootSet {
        roots,
        bracket: (-band, band),
        scan_points,
    })
}

/// Residual of the valley condition for the upper (`sign = +1`) or lower branch.
pub fn valley_residual(params: &SystemParams, x0: f64, energy: f64, sign: f64) -> f64 {
    let shift = params.decay_scale() * (energy * x0 / params.v_g()).sin();
    let d2 = params.drive_detuning();
    let eta = params.eta();
    energy
        - (params.omega_e() + 0.5 * shift - 0.5 * d2 + sign * 0.5 * (d2 + shift).hypot(2.0 * eta))
}

/// Valley energies `(E₋, E₊)` of the driven three-level giant atom at size `x0`.
pub fn valley_energies(params: &SystemParams, x0: f64) -> Result<(RootSet, RootSet)> {
    valley_energies_with(params, x0, DEFAULT_SCAN_POINTS)
}

pub fn valley_energies_with(
    params: &SystemParams,
    x0: f64,
    scan_points: usize,
) -> Result<(RootSet, RootSet)> {
    check_scan_points(scan_points)?;
    if params.eta() <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: params.eta(),
            reason: "valley energies need a driven atom",
        });
    }
    let (omega_plus, omega_minus) = dressed_frequencies(params.atom(), params.drive());
    let half_band = 0.5 * params.decay_scale();
    let tol = BISECTION_TOLERANCE * params.omega_e();
    let max_residual = RESIDUAL_TOLERANCE * params.omega_e();

    let branch = |centre: f64, sign: f64| -> Result<RootSet> {
        if half_band == 0.0 {
            return Ok(RootSet {
                roots: vec![Root {
                    value: centre,
                    residual: valley_residual(params, x0, centre, sign),
                }],
                bracket: (centre, centre),
                scan_points,
            });
        }
        let mut width = VALLEY_BRACKET * half_band;
        for attempt in 0..2 {
            let (lo, hi) = (centre - width, centre + width);
            let roots: Vec<Root> = scan_roots(
                |e| valley_residual(params, x0, e, sign),
                lo,
                hi,
                scan_points,
                tol,
            )
            .into_iter()
            .filter(|r| r.residual.abs() < max_residual)
            .collect();
            if !roots.is_empty() {
                return Ok(RootSet {
                    roots,
                    bracket: (lo, hi),
                    scan_points,
                });
            }
            if attempt == 0 {
                width *= VALLEY_WIDENING;
            } else {
                return Err(Error::NoConvergence {
                    equation: "valley",
                    lo,
                    hi,
                });
            }
        }
        unreachable!()
    };

    Ok((branch(omega_minus, -1.0)?, branch(omega_plus, 1.0)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftFit {
    /// Fitted amplitude `S` of `Δ_r ≈ S sin(ω_e x0 / v_g)`, rad/s.
    pub amplitude: f64,
    /// `(x0, Δ_r)` pairs the fit used.
    pub samples: Vec<(f64, f64)>,
    pub rms_residual: f64,
}

/// Unweighted least-squares amplitude of `y ≈ S sin(ω x0 / v_g)`.
pub fn fit_sinusoid_amplitude(samples: &[(f64, f64)], omega: f64, v_g: f64) -> Result<ShiftFit> {
    let basis: Vec<f64> = samples
        .iter()
        .map(|&(x, _)| (omega * x / v_g).sin())
        .collect();
    let norm: f64 = basis.iter().map(|s| s * s).sum();
    if norm <= 1e-12 * samples.len() as f64 {
        return Err(Error::IllConditionedFit(
            "all samples sit on nodes of the sine basis".into(),
        ));
    }
    let projection: f64 = samples.iter().zip(&basis).map(|(&(_, y), s)| y * s).sum();
    let amplitude = projection / norm;
    let sse: f64 = samples
        .iter()
        .zip(&basis)
        .map(|(&(_, y), s)| (y - amplitude * s).powi(2))
        .sum();
    Ok(ShiftFit {
        amplitude,
        samples: samples.to_vec(),
        rms_residual: (sse / samples.len() as f64).sqrt(),
    })
}

/// Minimum number of `x0` samples accepted by [`fit_shift_amplitude`].
pub const MIN_FIT_SAMPLES: usize = 8;

/// Fits `Δ_r(x0) ≈ S sin(ω_e x0 / v_g)` from the transcendental roots at each sample.
///
/// When several roots exist, the one nearest the first-order prediction
/// `(2f²/v_g) sin(ω_e x0 / v_g)` is used.
pub fn fit_shift_amplitude(params: &SystemParams, x0_samples: &[f64]) -> Result<ShiftFit> {
    if x0_samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "shift fit needs at least {MIN_FIT_SAMPLES} samples, got {}",
            x0_samples.len()
        )));
    }
    let period = TAU * params.v_g() / params.omega_e();
    let (min, max) = x0_samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if max - min < period * (1.0 - 1e-9) {
        return Err(Error::InvalidInput(format!(
            "shift fit samples span {:e} m, less than one period {period:e} m",
            max - min
        )));
    }

    let samples = x0_samples
        .iter()
        .map(|&x0| {
            let predicted = params.decay_scale() * (params.omega_e() * x0 / params.v_g()).sin();
            let roots = complete_reflection_detunings(params, x0)?;
            let root = roots.nearest(predicted).ok_or(Error::NoConvergence {
                equation: "complete-reflection",
                lo: roots.bracket.0,
                hi: roots.bracket.1,
            })?;
            Ok((x0, root.value))
        })
        .collect::<Result<Vec<_>>>()?;

    fit_sinusoid_amplitude(&samples, params.omega_e(), params.v_g())
}

/// `n` evenly spaced sizes covering exactly one shift period, `[start, start + 2π v_g/ω_e]`.
pub fn one_period_samples(params: &SystemParams, start: f64, n: usize) -> Vec<f64> {
    let period = TAU * params.v_g() / params.omega_e();
    (0..n)
        .map(|i| start + period * i as f64 / (n - 1) as f64)
        .collect()
}
