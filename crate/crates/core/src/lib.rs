//! Single-photon scattering off giant atoms in a one-dimensional waveguide.
//!
//! A giant atom couples to the waveguide at `x = 0` and `x = x0`, so a photon
//! of wave vector `k` picks up the phase `k x0` between the two coupling
//! points. This crate evaluates the resulting transmission and reflection
//! amplitudes for
//!
//! - a two-level giant atom ([`two_level`]),
//! - a Λ-type three-level giant atom with a classical drive on |f⟩ ↔ |e⟩
//!   ([`three_level`], including dressed-state frequencies and couplings),
//! - two separate small atoms at the same positions ([`small_atoms`]),
//!
//! solves the complete-reflection conditions ([`resonance`]) and provides an
//! independent boundary-matching linear solver ([`oracle`]) that checks every
//! closed form.

pub mod error;
pub mod lineshape;
pub mod oracle;
pub mod params;
pub mod resonance;
pub mod small_atoms;
pub mod three_level;
pub mod two_level;

pub use error::{Error, Result};
pub use params::{
    reduce, wave_vector, Coupling, Drive, ReducedParams, SystemParams, ThreeLevelAtom,
    TwoLevelAtom, WaveguideParams,
};
pub use resonance::{Root, RootSet, ShiftFit};
pub use three_level::DressedPair;
pub use two_level::ScatterResult;
