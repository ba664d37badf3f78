//! Validated parameter records and the reduced quantities shared by every solver.
//!
//! Units: frequencies, detunings and rates are angular frequencies in rad/s,
//! lengths are in metres, ħ = 1. The coupling `f` carries units of
//! √(rad/s · m/s) so that `f² / v_g` is a rate.
//!
//! All records are validated at construction and immutable afterwards, so the
//! scattering and resonance code downstream never re-checks them.

use crate::error::{Error, Result};

fn require(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams {
    v_g: f64,
}

impl WaveguideParams {
    pub fn new(v_g: f64) -> Result<Self> {
        require("v_g", v_g, v_g > 0.0, "group velocity must be positive")?;
        Ok(Self { v_g })
    }

    pub fn v_g(&self) -> f64 {
        self.v_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelAtom {
    omega_e: f64,
    gamma_e: f64,
}

impl TwoLevelAtom {
    pub fn new(omega_e: f64, gamma_e: f64) -> Result<Self> {
        require("omega_e", omega_e, omega_e > 0.0, "must be positive")?;
        require("gamma_e", gamma_e, gamma_e >= 0.0, "must be non-negative")?;
        Ok(Self { omega_e, gamma_e })
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }

    pub fn gamma_e(&self) -> f64 {
        self.gamma_e
    }
}

/// Λ-type atom: ground |g⟩ at 0, metastable |f⟩ at `omega_f`, excited |e⟩ at `omega_e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelAtom {
    omega_e: f64,
    omega_f: f64,
    gamma_e: f64,
    gamma_f: f64,
}

impl ThreeLevelAtom {
    pub fn new(omega_e: f64, omega_f: f64, gamma_e: f64, gamma_f: f64) -> Result<Self> {
        require("omega_e", omega_e, omega_e > 0.0, "must be positive")?;
        require(
            "omega_f",
            omega_f,
            omega_f > 0.0 && omega_f < omega_e,
            "must satisfy 0 < omega_f < omega_e",
        )?;
        require("gamma_e", gamma_e, gamma_e >= 0.0, "must be non-negative")?;
        require("gamma_f", gamma_f, gamma_f >= 0.0, "must be non-negative")?;
        Ok(Self {
            omega_e,
            omega_f,
            gamma_e,
            gamma_f,
        })
    }

    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }

    pub fn omega_f(&self) -> f64 {
        self.omega_f
    }

    pub fn gamma_e(&self) -> f64 {
        self.gamma_e
    }

    pub fn gamma_f(&self) -> f64 {
        self.gamma_f
    }

    pub fn two_level(&self) -> TwoLevelAtom {
        TwoLevelAtom {
            omega_e: self.omega_e,
            gamma_e: self.gamma_e,
        }
    }
}

/// Classical field driving |f⟩ ↔ |e⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    eta: f64,
    omega_d: f64,
}

impl Drive {
    pub fn new(eta: f64, omega_d: f64) -> Result<Self> {
        require("eta", eta, eta >= 0.0, "must be non-negative")?;
        require("omega_d", omega_d, omega_d > 0.0, "must be positive")?;
        Ok(Self { eta, omega_d })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }
}

/// Atom–waveguide coupling strength `f` and coupling-point separation `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    f: f64,
    x0: f64,
}

impl Coupling {
    pub fn new(f: f64, x0: f64) -> Result<Self> {
        require("f", f, f >= 0.0, "must be non-negative")?;
        require("x0", x0, x0 >= 0.0, "must be non-negative")?;
        Ok(Self { f, x0 })
    }

    /// Builds the coupling from the dimensionless ratio `g = f / √(v_g ω_e)`.
    pub fn from_ratio(g: f64, waveguide: &WaveguideParams, omega_e: f64, x0: f64) -> Result<Self> {
        require("g", g, g >= 0.0, "must be non-negative")?;
        require("omega_e", omega_e, omega_e > 0.0, "must be positive")?;
        Self::new(g * (waveguide.v_g() * omega_e).sqrt(), x0)
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
}

/// Full parameter set for one waveguide + atom configuration.
///
/// The two-level giant atom is the η = 0 member of the driven three-level
/// family; [`SystemParams::two_level`] fills the Λ-system fields with inert
/// values so every solver can take the same record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    waveguide: WaveguideParams,
    coupling: Coupling,
    atom: ThreeLevelAtom,
    drive: Drive,
}

/// Reference excited-level frequency, rad/s.
pub const STANDARD_OMEGA_E: f64 = 3.0e9;
/// Reference group velocity, m/s.
pub const STANDARD_V_G: f64 = 3.0e8;
/// Reference coupling ratio `f / √(v_g ω_e)`.
pub const STANDARD_COUPLING_RATIO: f64 = 0.05;
/// Metastable level as a fraction of `ω_e`.
pub const STANDARD_OMEGA_F_RATIO: f64 = 0.7;
/// Drive strength as a fraction of `ω_e`.
pub const STANDARD_ETA_RATIO: f64 = 0.08;
/// Resonant drive frequency as a fraction of `ω_e`.
pub const STANDARD_OMEGA_D_RATIO: f64 = 0.3;

impl SystemParams {
    pub fn new(
        waveguide: WaveguideParams,
        coupling: Coupling,
        atom: ThreeLevelAtom,
        drive: Drive,
    ) -> Self {
        Self {
            waveguide,
            coupling,
            atom,
            drive,
        }
    }

    /// Two-level giant atom: undriven, with the metastable level parked at 0.7 ω_e.
    pub fn two_level(waveguide: WaveguideParams, coupling: Coupling, atom: TwoLevelAtom) -> Self {
        let omega_e = atom.omega_e();
        Self {
            waveguide,
            coupling,
            atom: ThreeLevelAtom {
                omega_e,
                omega_f: STANDARD_OMEGA_F_RATIO * omega_e,
                gamma_e: atom.gamma_e(),
                gamma_f: 0.0,
            },
            drive: Drive {
                eta: 0.0,
                omega_d: STANDARD_OMEGA_D_RATIO * omega_e,
            },
        }
    }

    /// ω_e = 3×10⁹ rad/s, v_g = 3×10⁸ m/s, g = 0.05, ω_f = 0.7 ω_e,
    /// η = 0.08 ω_e, ω_d = 0.3 ω_e, no loss, x0 = 0.
    pub fn standard() -> Self {
        let omega_e = STANDARD_OMEGA_E;
        let waveguide = WaveguideParams { v_g: STANDARD_V_G };
        let f = STANDARD_COUPLING_RATIO * (STANDARD_V_G * omega_e).sqrt();
        Self {
            waveguide,
            coupling: Coupling { f, x0: 0.0 },
            atom: ThreeLevelAtom {
                omega_e,
                omega_f: STANDARD_OMEGA_F_RATIO * omega_e,
                gamma_e: 0.0,
                gamma_f: 0.0,
            },
            drive: Drive {
                eta: STANDARD_ETA_RATIO * omega_e,
                omega_d: STANDARD_OMEGA_D_RATIO * omega_e,
            },
        }
    }

    pub fn with_x0(self, x0: f64) -> Result<Self> {
        Ok(Self {
            coupling: Coupling::new(self.coupling.f, x0)?,
            ..self
        })
    }

    pub fn with_coupling(self, f: f64) -> Result<Self> {
        Ok(Self {
            coupling: Coupling::new(f, self.coupling.x0)?,
            ..self
        })
    }

    pub fn with_coupling_ratio(self, g: f64) -> Result<Self> {
        let coupling = Coupling::from_ratio(g, &self.waveguide, self.omega_e(), self.x0())?;
        Ok(Self { coupling, ..self })
    }

    pub fn with_drive(self, eta: f64, omega_d: f64) -> Result<Self> {
        Ok(Self {
            drive: Drive::new(eta, omega_d)?,
            ..self
        })
    }

    pub fn with_loss(self, gamma_e: f64, gamma_f: f64) -> Result<Self> {
        let a = self.atom;
        Ok(Self {
            atom: ThreeLevelAtom::new(a.omega_e, a.omega_f, gamma_e, gamma_f)?,
            ..self
        })
    }

    pub fn waveguide(&self) -> &WaveguideParams {
        &self.waveguide
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn atom(&self) -> &ThreeLevelAtom {
        &self.atom
    }

    pub fn drive(&self) -> &Drive {
        &self.drive
    }

    pub fn v_g(&self) -> f64 {
        self.waveguide.v_g
    }

    pub fn f(&self) -> f64 {
        self.coupling.f
    }

    pub fn x0(&self) -> f64 {
        self.coupling.x0
    }

    pub fn omega_e(&self) -> f64 {
        self.atom.omega_e
    }

    pub fn omega_f(&self) -> f64 {
        self.atom.omega_f
    }

    pub fn gamma_e(&self) -> f64 {
        self.atom.gamma_e
    }

    pub fn gamma_f(&self) -> f64 {
        self.atom.gamma_f
    }

    pub fn eta(&self) -> f64 {
        self.drive.eta
    }

    pub fn omega_d(&self) -> f64 {
        self.drive.omega_d
    }

    /// `f / √(v_g ω_e)`.
    pub fn coupling_ratio(&self) -> f64 {
        self.f() / (self.v_g() * self.omega_e()).sqrt()
    }

    /// `2 f² / v_g`: decay scale of one coupling pair and the bound on the size-induced shift.
    pub fn decay_scale(&self) -> f64 {
        2.0 * self.f() * self.f() / self.v_g()
    }

    /// Two-photon resonance position `ω_f + ω_d`.
    pub fn two_photon_pole(&self) -> f64 {
        self.omega_f() + self.omega_d()
    }

    /// Drive detuning from the |f⟩ ↔ |e⟩ transition, `ω_e − ω_f − ω_d`.
    pub fn drive_detuning(&self) -> f64 {
        drive_detuning(&self.atom, &self.drive)
    }

    pub fn is_lossless(&self) -> bool {
        self.gamma_e() == 0.0 && self.gamma_f() == 0.0
    }
}

/// Detunings below this fraction of `ω_e` count as resonant driving.
pub const RESONANT_DRIVE_TOLERANCE: f64 = 1e-12;

/// `ω_e − ω_f − ω_d`, snapped to exactly zero within [`RESONANT_DRIVE_TOLERANCE`]
/// so that standard values such as `ω_f = 0.7 ω_e`, `ω_d = 0.3 ω_e` are resonant.
pub fn drive_detuning(atom: &ThreeLevelAtom, drive: &Drive) -> f64 {
    let detuning = atom.omega_e() - atom.omega_f() - drive.omega_d();
    if detuning.abs() <= RESONANT_DRIVE_TOLERANCE * atom.omega_e() {
        0.0
    } else {
        detuning
    }
}

/// Photon wave vector from the linear dispersion `E = v_g k`.
pub fn wave_vector(energy: f64, waveguide: &WaveguideParams) -> Result<f64> {
    if energy <= 0.0 || !energy.is_finite() {
        return Err(Error::NonPositiveEnergy(energy));
    }
    Ok(energy / waveguide.v_g())
}

/// Symbols evaluated at one photon energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    /// `2 f² / v_g`, rad/s.
    pub decay_scale: f64,
    /// Propagation phase `k x0`, rad.
    pub phase: f64,
    /// Photon–atom detuning `E − ω_e`, rad/s.
    pub detuning: f64,
    /// `ω_e − ω_f − ω_d`, rad/s.
    pub drive_detuning: f64,
    /// `ω_f + ω_d`, rad/s.
    pub two_photon_pole: f64,
}

pub fn reduce(params: &SystemParams, energy: f64) -> Result<ReducedParams> {
    let k = wave_vector(energy, &params.waveguide)?;
    Ok(ReducedParams {
        decay_scale: params.decay_scale(),
        phase: k * params.x0(),
        detuning: energy - params.omega_e(),
        drive_detuning: params.drive_detuning(),
        two_photon_pole: params.two_photon_pole(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_waveguide() -> WaveguideParams {
        WaveguideParams::new(3.0e8).unwrap()
    }

    #[test]
    fn wave_vector_examples() {
        let wg = standard_waveguide();
        assert_eq!(wave_vector(3.0e9, &wg).unwrap(), 10.0);
        assert_eq!(wave_vector(3.0e8, &wg).unwrap(), 1.0);
        assert!((wave_vector(3.24e9, &wg).unwrap() - 10.8).abs() < 1e-12);
    }

    #[test]
    fn wave_vector_rejects_non_positive_energy() {
        let wg = standard_waveguide();
        assert_eq!(wave_vector(0.0, &wg), Err(Error::NonPositiveEnergy(0.0)));
        assert!(wave_vector(-1.0, &wg).is_err());
        assert!(wave_vector(f64::NAN, &wg).is_err());
    }

    #[test]
    fn standard_decay_scale() {
        let p = SystemParams::standard();
        let r = reduce(&p, 3.0e9).unwrap();
        assert!((r.decay_scale - 1.5e7).abs() / 1.5e7 < 1e-14);
        assert!((p.coupling_ratio() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn zero_coupling_and_zero_size() {
        let p = SystemParams::standard().with_coupling(0.0).unwrap();
        assert_eq!(reduce(&p, 3.1e9).unwrap().decay_scale, 0.0);
        let p = SystemParams::standard().with_x0(0.0).unwrap();
        for e in [1.0, 2.9e9, 3.0e9, 1e12] {
            assert_eq!(reduce(&p, e).unwrap().phase, 0.0);
        }
    }

    #[test]
    fn drive_detuning_sign() {
        let p = SystemParams::standard();
        let we = p.omega_e();
        let b = p.with_drive(0.08 * we, 0.33 * we).unwrap();
        assert!((b.drive_detuning() / we + 0.03).abs() < 1e-12);
        let c = p.with_drive(0.08 * we, 0.27 * we).unwrap();
        assert!((c.drive_detuning() / we - 0.03).abs() < 1e-12);
        let r = reduce(&c, 3.0e9).unwrap();
        assert!((r.drive_detuning - (we - r.two_photon_pole)).abs() < 1e-12 * we);
        assert_eq!(p.drive_detuning(), 0.0);
    }

    #[test]
    fn construction_rejects_invalid_values() {
        assert!(WaveguideParams::new(0.0).is_err());
        assert!(TwoLevelAtom::new(1.0, -1e-3).is_err());
        assert!(ThreeLevelAtom::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ThreeLevelAtom::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(Drive::new(-1.0, 1.0).is_err());
        assert!(Drive::new(1.0, 0.0).is_err());
        assert!(Coupling::new(1.0, -0.1).is_err());
        assert!(Coupling::new(f64::INFINITY, 0.1).is_err());
    }

    #[test]
    fn two_level_record_is_undriven() {
        let wg = standard_waveguide();
        let atom = TwoLevelAtom::new(3.0e9, 1e6).unwrap();
        let c = Coupling::from_ratio(0.05, &wg, 3.0e9, 1.0).unwrap();
        let p = SystemParams::two_level(wg, c, atom);
        assert_eq!(p.eta(), 0.0);
        assert_eq!(p.gamma_e(), 1e6);
        assert_eq!(p.gamma_f(), 0.0);
        assert!((p.coupling_ratio() - 0.05).abs() < 1e-15);
    }
}
