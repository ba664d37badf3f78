//! Brute-force verifier: the boundary-matching linear system, solved numerically.
//!
//! Nothing here uses the closed-form amplitudes. The photon field is
//!
//! ```text
//! φ_R(x) = e^{ikx} { θ(−x) + A [θ(x) − θ(x − x0)] + t θ(x − x0) }
//! φ_L(x) = e^{−ikx} { r θ(−x) + B [θ(x) − θ(x − x0)] }
//! ```
//!
//! with the step function taking the value ½ at its jump. Integrating the
//! stationary amplitude equations across a coupling point at `x_j` with
//! atomic amplitude `u` gives one jump condition per mover,
//!
//! ```text
//! −i v_g [φ_R(x_j⁺) − φ_R(x_j⁻)] + f u = 0
//!  i v_g [φ_L(x_j⁺) − φ_L(x_j⁻)] + f u = 0
//! ```
//!
//! and each atomic equation samples the field at its coupling points at the
//! midpoint, e.g. `φ_R(0) = (1 + A)/2`, `φ_R(x0) = p (A + t)/2`,
//! `φ_L(0) = (r + B)/2`, `φ_L(x0) = B / (2p)` with `p = e^{ikx0}`:
//!
//! ```text
//! giant, two-level:   (E − ω̃_e) u_e − f N = 0
//! giant, three-level: (E − ω̃_e) λ_e − f N − η λ_f = 0,   (E − δ̃) λ_f − η λ_e = 0
//! two small atoms:    (E − ω̃_e) u_1 − f [φ_R(0) + φ_L(0)] = 0
//!                     (E − ω̃_e) u_2 − f [φ_R(x0) + φ_L(x0)] = 0
//! ```
//!
//! where `N` sums the field at both points and loss enters through the complex
//! level energies `ω̃_e = ω_e − iγ_e`, `δ̃ = ω_f + ω_d − iγ_f`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{wave_vector, SystemParams};

/// Condition estimates above this are logged as a warning.
pub const CONDITION_WARNING: f64 = 1e12;
/// Condition estimates above this are treated as singular.
pub const CONDITION_SINGULAR: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    TwoLevelGiant,
    ThreeLevelGiant,
    TwoSmallAtoms,
}

impl SystemKind {
    pub const ALL: [SystemKind; 3] = [
        SystemKind::TwoLevelGiant,
        SystemKind::ThreeLevelGiant,
        SystemKind::TwoSmallAtoms,
    ];

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            SystemKind::TwoLevelGiant => &["A", "B", "t", "r", "u_e"],
            SystemKind::ThreeLevelGiant => &["A", "B", "t", "r", "lambda_e", "lambda_f"],
            SystemKind::TwoSmallAtoms => &["A", "B", "t", "r", "u_1", "u_2"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::TwoLevelGiant => "two-level",
            SystemKind::ThreeLevelGiant => "three-level",
            SystemKind::TwoSmallAtoms => "two-small-atoms",
        }
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown system kind `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct MatchingSystem {
    pub kind: SystemKind,
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
}

impl MatchingSystem {
    pub fn labels(&self) -> &'static [&'static str] {
        self.kind.labels()
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub kind: SystemKind,
    pub values: Vec<Complex64>,
    /// 1-norm condition estimate of the matching matrix.
    pub condition: f64,
    /// `‖M x − b‖ / ‖b‖`.
    pub relative_residual: f64,
}

impl Solution {
    pub fn get(&self, label: &str) -> Option<Complex64> {
        self.kind
            .labels()
            .iter()
            .position(|&l| l == label)
            .map(|i| self.values[i])
    }

    pub fn t(&self) -> Complex64 {
        self.values[2]
    }

    pub fn r(&self) -> Complex64 {
        self.values[3]
    }
}

const A: usize = 0;
const B: usize = 1;
const T: usize = 2;
const R: usize = 3;

pub fn assemble(kind: SystemKind, params: &SystemParams, energy: f64) -> Result<MatchingSystem> {
    let k = wave_vector(energy, params.waveguide())?;
    let v_g = params.v_g();
    let f = Complex64::new(params.f(), 0.0);
    let p = Complex64::from_polar(1.0, k * params.x0());
    let p_inv = p.conj();
    let i = Complex64::i();
    let half = Complex64::new(0.5, 0.0);
    let atom_detuning = Complex64::new(energy - params.omega_e(), params.gamma_e());

    let n = kind.labels().len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut b = DVector::<Complex64>::zeros(n);

    // Atomic amplitude coupled at x = 0 and at x = x0.
    let (at_origin, at_far) = match kind {
        SystemKind::TwoSmallAtoms => (4, 5),
        _ => (4, 4),
    };

    // Right mover across x = 0 and x = x0.
    m[(0, A)] = -i * v_g;
    m[(0, at_origin)] += f;
    b[0] = -i * v_g;
    m[(1, T)] = -i * v_g * p;
    m[(1, A)] = i * v_g * p;
    m[(1, at_far)] += f;

    // Left mover across x = 0 and x = x0.
    m[(2, B)] = i * v_g;
    m[(2, R)] = -i * v_g;
    m[(2, at_origin)] += f;
    m[(3, B)] = -i * v_g * p_inv;
    m[(3, at_far)] += f;

    match kind {
        SystemKind::TwoLevelGiant | SystemKind::ThreeLevelGiant => {
            let row = 4;
            m[(row, 4)] = atom_detuning;
            // −f [φ_R(0) + φ_R(x0) + φ_L(0) + φ_L(x0)]
            m[(row, A)] -= f * half * (1.0 + p);
            m[(row, T)] -= f * half * p;
            m[(row, R)] -= f * half;
            m[(row, B)] -= f * half * (1.0 + p_inv);
            b[row] += f * half;
            if kind == SystemKind::ThreeLevelGiant {
                let eta = Complex64::new(params.eta(), 0.0);
                let pole_detuning =
                    Complex64::new(energy - params.two_photon_pole(), params.gamma_f());
                m[(row, 5)] = -eta;
                m[(5, 5)] = pole_detuning;
                m[(5, 4)] = -eta;
            }
        }
        SystemKind::TwoSmallAtoms => {
            m[(4, 4)] = atom_detuning;
            m[(4, A)] -= f * half;
            m[(4, R)] -= f * half;
            m[(4, B)] -= f * half;
            b[4] += f * half;

            m[(5, 5)] = atom_detuning;
            m[(5, A)] -= f * half * p;
            m[(5, T)] -= f * half * p;
            m[(5, B)] -= f * half * p_inv;
        }
    }

    Ok(MatchingSystem {
        kind,
        matrix: m,
        rhs: b,
    })
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense LU solve with partial pivoting.
pub fn solve(system: &MatchingSystem) -> Result<Solution> {
    let lu = system.matrix.clone().lu();
    let inverse = lu.try_inverse().ok_or(Error::SingularSystem {
        condition: f64::INFINITY,
    })?;
    let condition = norm1(&system.matrix) * norm1(&inverse);
    if !condition.is_finite() || condition > CONDITION_SINGULAR {
        return Err(Error::SingularSystem { condition });
    }
    if condition > CONDITION_WARNING {
        log::warn!(
            "{} matching system is ill-conditioned (condition estimate {condition:e})",
            system.kind.name()
        );
    }
    let x = lu
        .solve(&system.rhs)
        .ok_or(Error::SingularSystem { condition })?;
    let residual = (&system.matrix * &x - &system.rhs).norm();
    let relative_residual = residual / system.rhs.norm();
    Ok(Solution {
        kind: system.kind,
        values: x.iter().copied().collect(),
        condition,
        relative_residual,
    })
}

/// Assemble and solve in one step.
pub fn scatter(kind: SystemKind, params: &SystemParams, energy: f64) -> Result<Solution> {
    solve(&assemble(kind, params, energy)?)
}
