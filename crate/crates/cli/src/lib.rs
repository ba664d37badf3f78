//! Command-line front end for the `giant-atom` scattering library: spectrum
//! sweeps, complete-reflection traces, dressed-state couplings and the oracle
//! cross-check, written as CSV or JSON.

pub mod commands;
pub mod error;
pub mod quantity;
pub mod settings;
pub mod sweep;
pub mod table;

pub use error::{CliError, Result};
pub use settings::Settings;
pub use table::{Cell, DataTable, Format};
