//! Subcommand implementations. Each returns a [`Report`]; writing it out is
//! left to the caller.

use std::f64::consts::TAU;

use giant_atom::oracle::{self, SystemKind};
use giant_atom::resonance::{
    complete_reflection_detunings_with, fit_sinusoid_amplitude, DEFAULT_SCAN_POINTS,
    MIN_FIT_SAMPLES,
};
use giant_atom::three_level::dressed_pair;
use giant_atom::{small_atoms, three_level, two_level, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::quantity::{parse_absolute, parse_frequency, parse_range, AxisName, AxisSpec, Range};
use crate::settings::{params_metadata, Settings};
use crate::sweep::{self, SweepSpec};
use crate::table::{Cell, DataTable, Format};

/// Closed forms and the oracle must agree to this, per amplitude.
pub const ORACLE_AGREEMENT: f64 = 1e-10;
pub const DEFAULT_DRAWS: usize = 1000;
pub const DEFAULT_RESONANCE_POINTS: usize = 64;

#[derive(Debug, Clone)]
pub enum Body {
    Table(DataTable),
    Json(Value),
}

#[derive(Debug)]
pub struct Report {
    pub body: Body,
    /// Set when the output is complete but the run must exit non-zero.
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(body: Body) -> Self {
        Self {
            body,
            failure: None,
        }
    }

    pub fn write(&self, format: Format, w: &mut impl std::io::Write) -> Result<()> {
        match &self.body {
            Body::Table(t) => t.write(format, w),
            Body::Json(v) => {
                serde_json::to_writer_pretty(&mut *w, v)?;
                writeln!(w)?;
                Ok(())
            }
        }
    }
}

/// Run-level information echoed in every output header.
#[derive(Debug, Clone, PartialEq)]
pub struct RunInfo {
    pub command: String,
    pub timestamp: String,
}

impl RunInfo {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    fn header(&self, table: &mut DataTable) {
        table.meta("tool", "giant-atom");
        table.meta("version", env!("CARGO_PKG_VERSION"));
        table.meta("timestamp", &self.timestamp);
        table.meta("command", &self.command);
    }
}

fn with_params(table: &mut DataTable, p: &SystemParams) {
    for (k, v) in params_metadata(p) {
        table.meta(&k, v);
    }
}

/// `x0` as a fixed value or a sweep; defaults to `default`.
fn x0_range(settings: &Settings, default: Range) -> Result<Range> {
    match settings.get("x0") {
        Some(s) => parse_range(s, AxisName::X0, |v| parse_absolute(v, "x0")),
        None => Ok(default),
    }
}

fn default_delta(kind: SystemKind, omega_e: f64) -> Range {
    let half = match kind {
        SystemKind::ThreeLevelGiant => 0.1,
        _ => 0.02,
    };
    Range::Axis(AxisSpec {
        name: AxisName::Delta,
        lo: -half * omega_e,
        hi: half * omega_e,
        points: 2001,
    })
}

pub fn spectrum_spec(kind: SystemKind, settings: &Settings) -> Result<SweepSpec> {
    let params = settings.params()?;
    let we = params.omega_e();
    let energy = match (settings.get("delta"), settings.get("energy")) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "give either delta or energy, not both".into(),
            ))
        }
        (Some(d), None) => parse_range(d, AxisName::Delta, |v| parse_frequency(v, we, "delta"))?
            .map_fixed(|d| we + d),
        (None, Some(e)) => parse_range(e, AxisName::Energy, |v| parse_frequency(v, we, "energy"))?,
        (None, None) => default_delta(kind, we),
    };
    let x0 = x0_range(settings, Range::Fixed(1.0))?;
    let format = match settings.get("format") {
        Some(f) => f.parse()?,
        None => Format::Csv,
    };
    SweepSpec::new(
        params,
        energy,
        x0,
        settings.get("output").map(Into::into),
        format,
    )
}

pub fn cmd_spectrum(kind: SystemKind, settings: &Settings, run: &RunInfo) -> Result<Report> {
    let spec = spectrum_spec(kind, settings)?;
    let grid = sweep::evaluate(kind, &spec)?;

    let mut table = DataTable::new(&grid.columns());
    run.header(&mut table);
    table.meta("kind", kind.name());
    table.meta("dissipative", settings.dissipative()?);
    for axis in &grid.axes {
        table.meta(&format!("axis_{}", axis.name), axis.describe());
    }
    if let Some(e) = spec.fixed_energy {
        table.meta("E", format!("{e:e}"));
    }
    with_params(&mut table, &spec.fixed);
    for row in grid.values {
        table.push(row.into_iter().map(Cell::Num).collect());
    }
    Ok(Report::ok(Body::Table(table)))
}

fn scan_points(settings: &Settings) -> Result<usize> {
    let n = settings
        .integer::<usize>("scan-points")?
        .unwrap_or(DEFAULT_SCAN_POINTS);
    if n < 2 {
        return Err(CliError::Validation(format!(
            "scan-points: need at least 2, got {n}"
        )));
    }
    Ok(n)
}

/// The root nearest `(2f²/v_g) sin(ω_e x0/v_g)` at each size, `None` where
/// the band holds no root.
pub fn resonance_trace(
    params: &SystemParams,
    x0s: &[f64],
    scan_points: usize,
) -> Result<Vec<(f64, Option<giant_atom::Root>, usize)>> {
    x0s.par_iter()
        .map(|&x0| {
            let p = params.with_x0(x0)?;
            let set = complete_reflection_detunings_with(&p, x0, scan_points)?;
            let predicted = p.decay_scale() * (p.omega_e() * x0 / p.v_g()).sin();
            Ok((x0, set.nearest(predicted), set.roots.len()))
        })
        .collect()
}

fn spans_period(params: &SystemParams, x0s: &[f64]) -> bool {
    let period = TAU * params.v_g() / params.omega_e();
    let span = x0s.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - x0s.iter().copied().fold(f64::INFINITY, f64::min);
    x0s.len() >= MIN_FIT_SAMPLES && span >= period * (1.0 - 1e-9)
}

fn fit_trace(
    params: &SystemParams,
    trace: &[(f64, Option<giant_atom::Root>, usize)],
) -> Result<giant_atom::ShiftFit> {
    let samples: Vec<(f64, f64)> = trace
        .iter()
        .filter_map(|(x0, root, _)| root.map(|r| (*x0, r.value)))
        .collect();
    Ok(fit_sinusoid_amplitude(
        &samples,
        params.omega_e(),
        params.v_g(),
    )?)
}

pub fn cmd_resonance(settings: &Settings, run: &RunInfo) -> Result<Report> {
    let params = settings.params()?;
    let scan = scan_points(settings)?;
    let period = TAU * params.v_g() / params.omega_e();
    let one_period = Range::Axis(AxisSpec {
        name: AxisName::X0,
        lo: 0.0,
        hi: period,
        points: DEFAULT_RESONANCE_POINTS,
    });
    let x0s = match x0_range(settings, one_period)? {
        Range::Fixed(v) => vec![v],
        Range::Axis(a) => a.values(),
    };

    if let Some(g_sweep) = settings.get("g-sweep") {
        return resonance_g_sweep(settings, &params, g_sweep, &x0s, scan, run);
    }

    let trace = resonance_trace(&params, &x0s, scan)?;
    let mut table = DataTable::new(&["x0", "Delta_r", "residual", "roots", "predicted"]);
    run.header(&mut table);
    table.meta("scan_points", scan);
    with_params(&mut table, &params);
    let two_f2_over_vg = params.decay_scale();
    table.meta("two_f2_over_vg", format!("{two_f2_over_vg:e}"));
    if spans_period(&params, &x0s) {
        let fit = fit_trace(&params, &trace)?;
        table.meta("fit_S", format!("{:e}", fit.amplitude));
        table.meta("fit_rms", format!("{:e}", fit.rms_residual));
        table.meta(
            "fit_rel_dev",
            format!("{:e}", (fit.amplitude - two_f2_over_vg) / two_f2_over_vg),
        );
    } else {
        table.meta("fit_S", "null");
    }
    for (x0, root, count) in trace {
        let predicted = params.decay_scale() * (params.omega_e() * x0 / params.v_g()).sin();
        table.push(vec![
            Cell::Num(x0),
            root.map(|r| r.value).into(),
            root.map(|r| r.residual).into(),
            Cell::Num(count as f64),
            Cell::Num(predicted),
        ]);
    }
    Ok(Report::ok(Body::Table(table)))
}

fn resonance_g_sweep(
    settings: &Settings,
    params: &SystemParams,
    g_sweep: &str,
    x0s: &[f64],
    scan: usize,
    run: &RunInfo,
) -> Result<Report> {
    if settings.get("f").is_some() || settings.get("g").is_some() {
        return Err(CliError::Validation(
            "g-sweep sets the coupling; drop f and g".into(),
        ));
    }
    if !spans_period(params, x0s) {
        return Err(CliError::Validation(format!(
            "g-sweep needs an x0 sweep of at least {MIN_FIT_SAMPLES} points spanning one period"
        )));
    }
    let gs = match parse_range(g_sweep, AxisName::X0, |v| parse_absolute(v, "g-sweep"))? {
        Range::Fixed(g) => vec![g],
        Range::Axis(a) => a.values(),
    };

    let mut table = DataTable::new(&["g", "f", "S", "two_f2_over_vg", "rel_dev", "rms"]);
    run.header(&mut table);
    table.meta("scan_points", scan);
    table.meta("g_sweep", g_sweep);
    table.meta("x0_samples", x0s.len());
    with_params(&mut table, params);

    let (mut sf2, mut f4) = (0.0, 0.0);
    for g in gs {
        let p = params.with_coupling_ratio(g)?;
        let trace = resonance_trace(&p, x0s, scan)?;
        let fit = fit_trace(&p, &trace)?;
        let f2 = p.f() * p.f();
        sf2 += fit.amplitude * f2;
        f4 += f2 * f2;
        let expected = p.decay_scale();
        table.push(vec![
            Cell::Num(g),
            Cell::Num(p.f()),
            Cell::Num(fit.amplitude),
            Cell::Num(expected),
            Cell::Num((fit.amplitude - expected) / expected),
            Cell::Num(fit.rms_residual),
        ]);
    }
    if f4 > 0.0 {
        let c = sf2 / f4;
        table.meta("quadratic_coefficient", format!("{c:e}"));
        table.meta("two_over_vg", format!("{:e}", 2.0 / params.v_g()));
    }
    Ok(Report::ok(Body::Table(table)))
}

pub fn cmd_dressed(settings: &Settings, run: &RunInfo) -> Result<Report> {
    let p = settings.params()?;
    let d = dressed_pair(&p)?;
    let mut meta = DataTable::default();
    run.header(&mut meta);
    with_params(&mut meta, &p);
    let metadata: serde_json::Map<String, Value> = meta
        .metadata
        .into_iter()
        .map(|(k, v)| (k, Value::String(v)))
        .collect();
    let we = p.omega_e();
    let f = p.f();
    let ratio = |g: f64| if f > 0.0 { json!(g / f) } else { Value::Null };
    Ok(Report::ok(Body::Json(json!({
        "metadata": metadata,
        "omega_plus": d.omega_plus,
        "omega_minus": d.omega_minus,
        "omega_plus_over_we": d.omega_plus / we,
        "omega_minus_over_we": d.omega_minus / we,
        "theta": d.theta,
        "g_plus_abs": d.g_plus_abs,
        "g_minus_abs": d.g_minus_abs,
        "g_plus_over_f": ratio(d.g_plus_abs),
        "g_minus_over_f": ratio(d.g_minus_abs),
    }))))
}

/// A line of the published coupling table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableLine {
    pub label: &'static str,
    pub omega_d_ratio: f64,
    pub delta_2_ratio: f64,
    pub x0: f64,
    pub g_minus: f64,
    pub g_plus: f64,
}

pub const TABLE_I: [TableLine; 4] = [
    TableLine {
        label: "A",
        omega_d_ratio: 0.3,
        delta_2_ratio: 0.0,
        x0: 1.48,
        g_minus: 1.2069,
        g_plus: 0.1783,
    },
    TableLine {
        label: "B",
        omega_d_ratio: 0.3,
        delta_2_ratio: 0.0,
        x0: 2.43,
        g_minus: 0.2574,
        g_plus: 1.1892,
    },
    TableLine {
        label: "C",
        omega_d_ratio: 0.33,
        delta_2_ratio: -0.03,
        x0: 3.98,
        g_minus: 1.4813,
        g_plus: 1.2469,
    },
    TableLine {
        label: "D",
        omega_d_ratio: 0.27,
        delta_2_ratio: 0.03,
        x0: 3.98,
        g_minus: 0.7944,
        g_plus: 1.0316,
    },
];

/// Computed values for one table line, with `|G±|` in units of `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub line: TableLine,
    pub delta_2_ratio: f64,
    pub g_minus: f64,
    pub g_plus: f64,
}

impl TableRow {
    pub fn rel_dev_minus(&self) -> f64 {
        (self.g_minus - self.line.g_minus) / self.line.g_minus
    }

    pub fn rel_dev_plus(&self) -> f64 {
        (self.g_plus - self.line.g_plus) / self.line.g_plus
    }
}

pub fn table1_rows() -> Result<Vec<TableRow>> {
    let base = SystemParams::standard();
    let we = base.omega_e();
    TABLE_I
        .iter()
        .map(|line| {
            let p = base
                .with_drive(base.eta(), line.omega_d_ratio * we)?
                .with_x0(line.x0)?;
            let d = dressed_pair(&p)?;
            Ok(TableRow {
                line: *line,
                delta_2_ratio: p.drive_detuning() / we,
                g_minus: d.g_minus_abs / p.f(),
                g_plus: d.g_plus_abs / p.f(),
            })
        })
        .collect()
}

pub fn cmd_table1(run: &RunInfo) -> Result<Report> {
    let mut table = DataTable::new(&[
        "line",
        "omega_d_over_we",
        "delta_2_over_we",
        "x0",
        "G_minus_over_f",
        "ref_G_minus_over_f",
        "rel_dev_minus",
        "G_plus_over_f",
        "ref_G_plus_over_f",
        "rel_dev_plus",
    ]);
    run.header(&mut table);
    table.meta("evaluated_at", "k=omega_pm/v_g");
    with_params(&mut table, &SystemParams::standard());
    for row in table1_rows()? {
        table.push(vec![
            Cell::Text(row.line.label.into()),
            Cell::Num(row.line.omega_d_ratio),
            Cell::Num(row.delta_2_ratio),
            Cell::Num(row.line.x0),
            Cell::Num(row.g_minus),
            Cell::Num(row.line.g_minus),
            Cell::Num(row.rel_dev_minus()),
            Cell::Num(row.g_plus),
            Cell::Num(row.line.g_plus),
            Cell::Num(row.rel_dev_plus()),
        ]);
    }
    Ok(Report::ok(Body::Table(table)))
}

/// One random parameter point for the oracle comparison.
pub fn random_draw(rng: &mut ChaCha8Rng, lossy: bool) -> Result<(SystemParams, f64)> {
    let base = SystemParams::standard();
    let we = base.omega_e();
    let mut p = base
        .with_coupling_ratio(rng.gen_range(0.01..=0.1))?
        .with_x0(rng.gen_range(0.0..=10.0))?
        .with_drive(
            rng.gen_range(0.0..=0.1) * we,
            rng.gen_range(0.25..=0.35) * we,
        )?;
    if lossy {
        p = p.with_loss(
            rng.gen_range(0.0..=1e-2) * we,
            rng.gen_range(0.0..=1e-2) * we,
        )?;
    }
    Ok((p, we + rng.gen_range(-0.02..=0.02) * we))
}

/// Largest deviations between the closed forms and the oracle for one kind.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleDeviation {
    pub dev_t: f64,
    pub dev_r: f64,
    /// `|T + R − 1|` when lossless, `max(T + R − 1, 0)` when lossy.
    pub dev_energy: f64,
}

impl OracleDeviation {
    fn max(self, o: Self) -> Self {
        Self {
            dev_t: self.dev_t.max(o.dev_t),
            dev_r: self.dev_r.max(o.dev_r),
            dev_energy: self.dev_energy.max(o.dev_energy),
        }
    }

    pub fn passes(&self) -> bool {
        self.dev_t < ORACLE_AGREEMENT
            && self.dev_r < ORACLE_AGREEMENT
            && self.dev_energy < ORACLE_AGREEMENT
    }
}

fn compare(kind: SystemKind, p: &SystemParams, e: f64, lossy: bool) -> Result<OracleDeviation> {
    let s = oracle::scatter(kind, p, e)?;
    let (t, r) = (s.t(), s.r());
    let total = t.norm_sqr() + r.norm_sqr() - 1.0;
    let dev_energy = if lossy { total.max(0.0) } else { total.abs() };
    let (dev_t, dev_r) = match kind {
        SystemKind::TwoLevelGiant => (
            (two_level::t1_dissipative(p, e)? - t).norm(),
            (two_level::r1(p, e)? - r).norm(),
        ),
        SystemKind::ThreeLevelGiant => (
            (three_level::t2_dissipative(p, e)? - t).norm(),
            (three_level::r2_dissipative(p, e)? - r).norm(),
        ),
        // Only the lossless transmission rate has a closed form.
        SystemKind::TwoSmallAtoms => (
            (small_atoms::transmission_rate(p, e)? - t.norm_sqr()).abs(),
            0.0,
        ),
    };
    Ok(OracleDeviation {
        dev_t,
        dev_r,
        dev_energy,
    })
}

pub fn oracle_deviation(
    kind: SystemKind,
    lossy: bool,
    draws: usize,
    seed: u64,
) -> Result<OracleDeviation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..draws)
        .map(|_| random_draw(&mut rng, lossy))
        .collect::<Result<Vec<_>>>()?;
    points
        .par_iter()
        .map(|(p, e)| compare(kind, p, *e, lossy))
        .try_reduce(OracleDeviation::default, |a, b| Ok(a.max(b)))
}

pub fn cmd_oracle_check(settings: &Settings, seed: u64, run: &RunInfo) -> Result<Report> {
    let draws = settings.integer::<usize>("draws")?.unwrap_or(DEFAULT_DRAWS);
    if draws == 0 {
        return Err(CliError::Validation("draws: need at least 1".into()));
    }
    let mut table = DataTable::new(&[
        "kind",
        "lossy",
        "draws",
        "max_dev_t",
        "max_dev_r",
        "max_dev_energy",
        "pass",
    ]);
    run.header(&mut table);
    table.meta("seed", seed);
    table.meta("draws", draws);
    table.meta("tolerance", format!("{ORACLE_AGREEMENT:e}"));

    let mut failed = Vec::new();
    for (i, kind) in SystemKind::ALL.into_iter().enumerate() {
        let modes: &[bool] = match kind {
            SystemKind::TwoSmallAtoms => &[false],
            _ => &[false, true],
        };
        for &lossy in modes {
            // Each (kind, loss) block gets its own stream so blocks are independent.
            let stream = seed
                .wrapping_mul(8)
                .wrapping_add(2 * i as u64 + lossy as u64);
            let dev = oracle_deviation(kind, lossy, draws, stream)?;
            if !dev.passes() {
                failed.push(format!(
                    "{}{}",
                    kind.name(),
                    if lossy { " (lossy)" } else { "" }
                ));
            }
            table.push(vec![
                Cell::Text(kind.name().into()),
                Cell::Num(lossy as u8 as f64),
                Cell::Num(draws as f64),
                Cell::Num(dev.dev_t),
                Cell::Num(dev.dev_r),
                Cell::Num(dev.dev_energy),
                Cell::Text(if dev.passes() { "yes" } else { "no" }.into()),
            ]);
        }
    }
    let failure = (!failed.is_empty())
        .then(|| CliError::NonConvergence(format!("oracle mismatch for {}", failed.join(", "))));
    Ok(Report {
        body: Body::Table(table),
        failure,
    })
}
