//! Spectrum grids over the detuning (or energy) and the atom size.

use std::path::PathBuf;

use giant_atom::oracle::SystemKind;
use giant_atom::{small_atoms, three_level, two_level, SystemParams};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::quantity::{AxisName, AxisSpec, Range};
use crate::table::Format;

pub const SCATTER_COLUMNS: [&str; 6] = ["T", "R", "t_re", "t_im", "r_re", "r_im"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis1: AxisSpec,
    pub axis2: Option<AxisSpec>,
    /// Parameters for every point; swept axes override `x0` and the energy.
    pub fixed: SystemParams,
    /// Photon energy used when no energy-like axis is swept.
    pub fixed_energy: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl SweepSpec {
    /// Builds the sweep from an energy-like range and an `x0` range. Swept
    /// `x0` is the outer axis so that each block of rows is one spectrum cut.
    pub fn new(
        fixed: SystemParams,
        energy: Range,
        x0: Range,
        output_path: Option<PathBuf>,
        format: Format,
    ) -> Result<Self> {
        let mut axes = Vec::new();
        let mut fixed = fixed;
        match x0 {
            Range::Axis(a) => {
                if a.lo < 0.0 {
                    return Err(CliError::Validation(format!(
                        "x0: sizes must be non-negative, got {:e}",
                        a.lo
                    )));
                }
                axes.push(a)
            }
            Range::Fixed(v) => fixed = fixed.with_x0(v)?,
        }
        let fixed_energy = match energy {
            Range::Axis(a) => {
                axes.push(a);
                None
            }
            Range::Fixed(_) if axes.is_empty() => {
                return Err(CliError::Validation(
                    "nothing to sweep: give a lo:hi:points range for the detuning or x0".into(),
                ))
            }
            Range::Fixed(v) => Some(v),
        };
        let mut axes = axes.into_iter();
        let axis1 = axes.next().expect("at least one axis");
        let axis2 = axes.next();
        if let Some(a2) = axis2 {
            if a2.name == axis1.name {
                return Err(CliError::Validation(format!(
                    "axis `{}` given twice",
                    a2.name
                )));
            }
        }
        Ok(Self {
            axis1,
            axis2,
            fixed,
            fixed_energy,
            output_path,
            format,
        })
    }

    pub fn axes(&self) -> Vec<AxisSpec> {
        std::iter::once(self.axis1).chain(self.axis2).collect()
    }

    pub fn len(&self) -> usize {
        self.axis1.points * self.axis2.map_or(1, |a| a.points)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis coordinates, parameters and photon energy at flat index `i`.
    fn point(&self, i: usize, grids: &[Vec<f64>]) -> Result<(Vec<f64>, SystemParams, f64)> {
        let inner = self.axis2.map_or(1, |a| a.points);
        let idx = [i / inner, i % inner];
        let mut coords = Vec::with_capacity(2);
        let mut params = self.fixed;
        let mut energy = self.fixed_energy;
        for (k, axis) in self.axes().iter().enumerate() {
            let v = grids[k][idx[k]];
            coords.push(v);
            match axis.name {
                AxisName::X0 => params = params.with_x0(v)?,
                AxisName::Delta => energy = Some(params.omega_e() + v),
                AxisName::Energy => energy = Some(v),
            }
        }
        let energy = energy.expect("energy fixed or swept");
        Ok((coords, params, energy))
    }
}

/// `(t, r)` for one system kind. Loss enters through the rates in `params`.
pub fn amplitudes(
    kind: SystemKind,
    params: &SystemParams,
    energy: f64,
) -> giant_atom::Result<(Complex64, Complex64)> {
    match kind {
        SystemKind::TwoLevelGiant => two_level::scatter(params, energy).map(|s| (s.t, s.r)),
        SystemKind::ThreeLevelGiant => three_level::scatter(params, energy).map(|s| (s.t, s.r)),
        SystemKind::TwoSmallAtoms => small_atoms::amplitudes(params, energy),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub axes: Vec<AxisSpec>,
    /// One row per grid point: axis coordinates, then `T, R, t_re, t_im, r_re, r_im`.
    pub values: Vec<Vec<f64>>,
}

impl SpectrumGrid {
    pub fn columns(&self) -> Vec<&'static str> {
        self.axes
            .iter()
            .map(|a| a.name.column())
            .chain(SCATTER_COLUMNS)
            .collect()
    }
}

/// Evaluates the grid in parallel; rows come back in axis order.
pub fn evaluate(kind: SystemKind, spec: &SweepSpec) -> Result<SpectrumGrid> {
    let axes = spec.axes();
    let grids: Vec<Vec<f64>> = axes.iter().map(AxisSpec::values).collect();
    let values = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let (mut row, params, energy) = spec.point(i, &grids)?;
            let (t, r) = amplitudes(kind, &params, energy)?;
            row.extend([t.norm_sqr(), r.norm_sqr(), t.re, t.im, r.re, r.im]);
            if row.iter().any(|v| !v.is_finite()) {
                return Err(CliError::NonConvergence(format!(
                    "non-finite amplitude at E = {energy:e} rad/s, x0 = {:e} m",
                    params.x0()
                )));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumGrid { axes, values })
}
