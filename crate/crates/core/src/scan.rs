//! Parameter sweeps over the field and the coupling ratio, the analytic
//! violation table, sector-boundary location, and figure-ready CSV/JSON
//! emission with a pinned deterministic float format.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::basis::SiteCount;
use crate::bell::{maximize, BellTarget, OptimizerConfig};
use crate::concurrence::gme_concurrence;
use crate::error::Error;
use crate::hamiltonian::ChainParams;
use crate::spectral::{global_ground, locate_boundary, SectorEnergyTable};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Config(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        if min >= max || min.is_nan() || max.is_nan() {
            return Err(Error::Config(format!(
                "grid min {min} must be below max {max}"
            )));
        }
        Ok(GridSpec { min, max, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.count as f64 - 1.0);
        (0..self.count).map(|i| self.min + i as f64 * h).collect()
    }
}

/// Which derived quantities a sweep computes. Sector and energy come free
/// with the diagonalization and are always present in the records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSelection {
    pub violation: bool,
    pub concurrence: bool,
}

impl OutputSelection {
    pub fn all() -> Self {
        OutputSelection {
            violation: true,
            concurrence: true,
        }
    }

    pub fn none() -> Self {
        OutputSelection {
            violation: false,
            concurrence: false,
        }
    }

    /// Comma-separated list of violation, concurrence, sector, energy.
    /// The latter two are accepted for completeness but always emitted.
    pub fn parse(list: &str) -> Result<Self> {
        let mut sel = OutputSelection::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "violation" => sel.violation = true,
                "concurrence" => sel.concurrence = true,
                "sector" | "energy" => {}
                other => {
                    return Err(Error::Config(format!("unknown output '{other}'")));
                }
            }
        }
        Ok(sel)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n: SiteCount,
    /// Fixed jx for a field sweep, fixed b for a coupling sweep.
    pub fixed: f64,
    pub grid: GridSpec,
    pub seed: u64,
    pub restarts: usize,
    pub outputs: OutputSelection,
}

/// One grid point of a sweep; optional fields follow the output selection.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub swept_value: f64,
    pub sector_k: usize,
    pub degenerate: bool,
    pub energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta4: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_partition: Option<Vec<usize>>,
}

fn analyze_point(cfg: &SweepConfig, jx: f64, b: f64, swept: f64) -> Result<ScanRecord> {
    let params = ChainParams::new(cfg.n, jx, b);
    let g = global_ground(&params)?;
    let mut rec = ScanRecord {
        swept_value: swept,
        sector_k: g.k,
        degenerate: g.degenerate,
        energy: g.energy,
        violation: None,
        theta1: None,
        theta2: None,
        theta3: None,
        theta4: None,
        concurrence: None,
        min_partition: None,
    };
    if cfg.outputs.violation {
        let opt = OptimizerConfig {
            restarts: cfg.restarts,
            seed: cfg.seed,
            ..OptimizerConfig::default()
        };
        let r = maximize(BellTarget::Ground(&g), &opt)?;
        rec.violation = Some(r.value);
        let t = r.angles.as_array();
        rec.theta1 = Some(t[0]);
        rec.theta2 = Some(t[1]);
        rec.theta3 = Some(t[2]);
        rec.theta4 = Some(t[3]);
    }
    if cfg.outputs.concurrence {
        let c = gme_concurrence(&g);
        rec.concurrence = Some(c.value);
        rec.min_partition = Some(c.minimizing_partition.sites());
    }
    Ok(rec)
}

/// Sweeps the field b at fixed coupling cfg.fixed = jx.
pub fn run_field_sweep(cfg: &SweepConfig) -> Result<Vec<ScanRecord>> {
    cfg.grid
        .points()
        .into_iter()
        .map(|b| analyze_point(cfg, cfg.fixed, b, b))
        .collect()
}

/// Sweeps the coupling jx at fixed field cfg.fixed = b. The whole grid must
/// sit strictly inside the ferromagnetic regime jx > jz.
pub fn run_coupling_sweep(cfg: &SweepConfig) -> Result<Vec<ScanRecord>> {
    let jz = 1.0;
    for jx in cfg.grid.points() {
        if jx <= jz * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "coupling grid point jx={jx} outside the regime jx > jz"
            )));
        }
    }
    cfg.grid
        .points()
        .into_iter()
        .map(|jx| analyze_point(cfg, jx, cfg.fixed, jx))
        .collect()
}

/// One row of the analytic single-excitation violation table.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticRow {
    pub n: usize,
    pub violation: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
}

/// Maximizes the closed-form violation for each n in the range.
pub fn run_analytic_w(
    n_min: usize,
    n_max: usize,
    seed: u64,
    restarts: usize,
) -> Result<Vec<AnalyticRow>> {
    if n_min < 4 || n_max > 64 || n_min > n_max {
        return Err(Error::Config(format!(
            "analytic range {n_min}..{n_max} outside 4..64"
        )));
    }
    let cfg = OptimizerConfig {
        restarts,
        seed,
        ..OptimizerConfig::default()
    };
    (n_min..=n_max)
        .map(|n| {
            let r = maximize(BellTarget::AnalyticW(n), &cfg)?;
            let t = r.angles.as_array();
            Ok(AnalyticRow {
                n,
                violation: r.value,
                theta1: t[0],
                theta2: t[1],
                theta3: t[2],
                theta4: t[3],
            })
        })
        .collect()
}

/// A located ground-state sector crossing.
#[derive(Debug, Clone, Serialize)]
pub struct Boundary {
    pub k_left: usize,
    pub k_right: usize,
    pub b: f64,
}

/// Scans [b_lo, b_hi] on a coarse grid and bisects every detected sector
/// change. The coarse grid must be finer than the narrowest plateau in the
/// range, otherwise a cell may hide a pair of crossings.
pub fn locate_boundaries(
    n: SiteCount,
    jx: f64,
    b_lo: f64,
    b_hi: f64,
    coarse: usize,
) -> Result<Vec<Boundary>> {
    let grid = GridSpec::new(b_lo, b_hi, coarse.max(2))?;
    let points = grid.points();
    let params = ChainParams::new(n, jx, 0.0);
    let table = SectorEnergyTable::new(&params)?;
    let sectors: Vec<usize> = points.iter().map(|&b| table.ground_sector(b)).collect();
    let mut out = Vec::new();
    for i in 0..points.len() - 1 {
        if sectors[i] != sectors[i + 1] {
            let b = locate_boundary(
                &params,
                sectors[i],
                sectors[i + 1],
                points[i],
                points[i + 1],
            )?;
            out.push(Boundary {
                k_left: sectors[i],
                k_right: sectors[i + 1],
                b,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// 12 significant digits; pinned so identical runs emit identical bytes.
pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// Serializes one value as JSON with every float in the pinned format.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

const FULL_HEADER: &str =
    "swept_value,sector_k,degenerate,energy,violation,theta1,theta2,theta3,theta4,concurrence,min_partition";

fn scan_header(outputs: OutputSelection) -> String {
    if outputs.violation && outputs.concurrence {
        return FULL_HEADER.to_string();
    }
    let mut cols = vec!["swept_value", "sector_k", "degenerate", "energy"];
    if outputs.violation {
        cols.extend(["violation", "theta1", "theta2", "theta3", "theta4"]);
    }
    if outputs.concurrence {
        cols.extend(["concurrence", "min_partition"]);
    }
    cols.join(",")
}

pub fn write_scan_csv<W: Write>(
    w: &mut W,
    records: &[ScanRecord],
    outputs: OutputSelection,
) -> Result<()> {
    writeln!(w, "{}", scan_header(outputs))?;
    for r in records {
        let mut cols = vec![
            sci(r.swept_value),
            r.sector_k.to_string(),
            r.degenerate.to_string(),
            sci(r.energy),
        ];
        if outputs.violation {
            for v in [r.violation, r.theta1, r.theta2, r.theta3, r.theta4] {
                cols.push(sci(v.ok_or_else(|| {
                    Error::Config("record missing requested violation output".into())
                })?));
            }
        }
        if outputs.concurrence {
            cols.push(sci(r.concurrence.ok_or_else(|| {
                Error::Config("record missing requested concurrence output".into())
            })?));
            let sites = r.min_partition.as_ref().ok_or_else(|| {
                Error::Config("record missing requested concurrence output".into())
            })?;
            cols.push(
                sites
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join("+"),
            );
        }
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

/// serde_json formatter that routes every float through the pinned format,
/// keeping JSON and CSV byte-for-byte consistent on reruns.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.11e}")
    }
}

fn write_json_array<W: Write, T: Serialize>(w: &mut W, items: &[T]) -> Result<()> {
    writeln!(w, "[")?;
    for (i, item) in items.iter().enumerate() {
        w.write_all(to_json_string(item)?.as_bytes())?;
        if i + 1 < items.len() {
            writeln!(w, ",")?;
        } else {
            writeln!(w)?;
        }
    }
    writeln!(w, "]")?;
    Ok(())
}

pub fn write_scan_json<W: Write>(w: &mut W, records: &[ScanRecord]) -> Result<()> {
    write_json_array(w, records)
}

pub fn write_analytic_csv<W: Write>(w: &mut W, rows: &[AnalyticRow]) -> Result<()> {
    writeln!(w, "n,violation,theta1,theta2,theta3,theta4")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            sci(r.violation),
            sci(r.theta1),
            sci(r.theta2),
            sci(r.theta3),
            sci(r.theta4)
        )?;
    }
    Ok(())
}

pub fn write_analytic_json<W: Write>(w: &mut W, rows: &[AnalyticRow]) -> Result<()> {
    write_json_array(w, rows)
}

pub fn write_boundaries_csv<W: Write>(w: &mut W, rows: &[Boundary]) -> Result<()> {
    writeln!(w, "k_left,k_right,b")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.k_left, r.k_right, sci(r.b))?;
    }
    Ok(())
}

pub fn write_boundaries_json<W: Write>(w: &mut W, rows: &[Boundary]) -> Result<()> {
    write_json_array(w, rows)
}

fn open_dest(dest: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match dest {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn emit_scan(
    records: &[ScanRecord],
    outputs: OutputSelection,
    format: OutputFormat,
    dest: Option<&Path>,
) -> Result<()> {
    let mut w = open_dest(dest)?;
    match format {
        OutputFormat::Csv => write_scan_csv(&mut w, records, outputs)?,
        OutputFormat::Json => write_scan_json(&mut w, records)?,
    }
    w.flush()?;
    Ok(())
}

pub fn emit_analytic(
    rows: &[AnalyticRow],
    format: OutputFormat,
    dest: Option<&Path>,
) -> Result<()> {
    let mut w = open_dest(dest)?;
    match format {
        OutputFormat::Csv => write_analytic_csv(&mut w, rows)?,
        OutputFormat::Json => write_analytic_json(&mut w, rows)?,
    }
    w.flush()?;
    Ok(())
}

pub fn emit_boundaries(rows: &[Boundary], format: OutputFormat, dest: Option<&Path>) -> Result<()> {
    let mut w = open_dest(dest)?;
    match format {
        OutputFormat::Csv => write_boundaries_csv(&mut w, rows)?,
        OutputFormat::Json => write_boundaries_json(&mut w, rows)?,
    }
    w.flush()?;
    Ok(())
}
