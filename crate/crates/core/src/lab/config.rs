//! Scenario files: a line-oriented `key = value` dialect with `[section]`
//! headers. `#` starts a comment. Every key has a default except `name`,
//! `grid.n`, `time.t_end`, `time.dt` and `initial.kind`.
//!
//! ```text
//! name = taylor-green
//! seed = 1
//!
//! [model]
//! kind = navier-stokes        # navier-stokes | burgers | heat | custom
//!
//! [grid]
//! n = 32
//! box_length = 6.283185307179586
//!
//! [time]
//! t_end = 1
//! dt = 0.001
//! log_cadence = 0.1
//!
//! [initial]
//! kind = taylor-green         # taylor-green | cole-hopf | synthetic | snapshot
//! amplitude = 1
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::spectral::{ModelConfig, Projection, ZeroModeRule};
use crate::stability::DirectionKind;

const SECTIONS: [&str; 8] = ["", "model", "grid", "time", "initial", "diagnostics", "stability", "output"];
const MAX_N: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    NavierStokes,
    Burgers,
    Heat,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub m: [[f64; 3]; 3],
    pub projection: Projection,
    pub zero_mode: ZeroModeRule,
}

impl ModelSpec {
    pub fn config(&self) -> Result<ModelConfig> {
        let mut cfg = ModelConfig::new(self.m, self.projection)?;
        cfg.zero_mode_rule = self.zero_mode;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub box_length: f64,
    pub dealias: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub log_cadence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum InitialData {
    TaylorGreen { amplitude: f64 },
    /// The exact example sampled on the torus at clock time `t0`.
    ColeHopf { t0: f64 },
    SyntheticSpectrum { beta: f64, amplitude: f64, band: Option<f64> },
    SnapshotFile { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Check {
    Norms,
    Radius,
    Energy,
    OracleError,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Norms => "norms",
            Check::Radius => "radius",
            Check::Energy => "energy",
            Check::OracleError => "oracle-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsSpec {
    pub checks: Vec<Check>,
    pub r_list: Vec<f64>,
    pub lambda_list: Vec<f64>,
    pub energy_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilitySpec {
    pub deltas: Vec<f64>,
    pub direction: DirectionKind,
    /// `λ√τ_end` as a fraction of the estimated final radius.
    pub lambda_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExportFormat {
    Csv,
    Json,
    Both,
}

impl ExportFormat {
    pub fn csv(self) -> bool {
        matches!(self, ExportFormat::Csv | ExportFormat::Both)
    }
    pub fn json(self) -> bool {
        matches!(self, ExportFormat::Json | ExportFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub format: ExportFormat,
    pub snapshots: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub model: ModelSpec,
    pub grid: GridSpec,
    pub time: TimeSpec,
    pub initial: InitialData,
    pub diagnostics: DiagnosticsSpec,
    pub stability: StabilitySpec,
    pub output: OutputSpec,
}

struct Entry {
    value: String,
    line: usize,
}

/// Raw `(section, key) → value` table with per-key consumption tracking.
struct Table {
    entries: BTreeMap<(String, String), Entry>,
    used: BTreeSet<(String, String)>,
}

fn config_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<(String, String), Entry> = BTreeMap::new();
        let mut section = String::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| config_err(format!("line {line_no}: malformed section header")))?
                    .trim();
                if name.is_empty() || !SECTIONS.contains(&name) {
                    return Err(config_err(format!("line {line_no}: unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {line_no}: expected key = value")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(config_err(format!("line {line_no}: empty key")));
            }
            let slot = (section.clone(), key.to_string());
            if let Some(prev) = entries.get(&slot) {
                return Err(config_err(format!(
                    "line {line_no}: duplicate key '{}' (first set on line {})",
                    qualified(&slot),
                    prev.line
                )));
            }
            entries.insert(
                slot,
                Entry {
                    value: value.trim().to_string(),
                    line: line_no,
                },
            );
        }
        Ok(Self {
            entries,
            used: BTreeSet::new(),
        })
    }

    fn raw(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        let slot = (section.to_string(), key.to_string());
        let e = self.entries.get(&slot)?;
        let out = (e.value.clone(), e.line);
        self.used.insert(slot);
        Some(out)
    }

    fn require(&mut self, section: &str, key: &str) -> Result<(String, usize)> {
        self.raw(section, key)
            .ok_or_else(|| config_err(format!("missing required key '{}'", qualified(&(section.into(), key.into())))))
    }

    fn f64_or(&mut self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.raw(section, key) {
            Some((v, line)) => parse_f64(&v, line, key),
            None => Ok(default),
        }
    }

    fn unknown(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(k, _)| !self.used.contains(*k))
            .map(|(k, e)| format!("{} (line {})", qualified(k), e.line))
            .collect()
    }
}

fn qualified(slot: &(String, String)) -> String {
    if slot.0.is_empty() {
        slot.1.clone()
    } else {
        format!("{}.{}", slot.0, slot.1)
    }
}

fn parse_f64(v: &str, line: usize, key: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| config_err(format!("line {line}: '{key}' expects a number, got '{v}'")))?;
    if !x.is_finite() {
        return Err(config_err(format!("line {line}: '{key}' must be finite")));
    }
    Ok(x)
}

fn parse_list(v: &str, line: usize, key: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_f64(s.trim(), line, key)).collect()
}

fn parse_bool(v: &str, line: usize, key: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config_err(format!("line {line}: '{key}' expects true or false, got '{v}'"))),
    }
}

fn range(ok: bool, line: Option<usize>, msg: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(config_err(match line {
            Some(l) => format!("line {l}: {msg}"),
            None => msg,
        }))
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl Scenario {
    /// Parse a scenario from text; relative snapshot paths resolve against `base_dir`.
    pub fn parse_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut t = Table::parse(text)?;
        let name = t.require("", "name")?.0;
        range(!name.is_empty(), None, "name must not be empty".into())?;
        let seed = match t.raw("", "seed") {
            Some((v, line)) => v
                .parse::<u64>()
                .map_err(|_| config_err(format!("line {line}: 'seed' expects an unsigned integer")))?,
            None => 1,
        };

        let model = {
            let (kind, line) = t.raw("model", "kind").unwrap_or(("navier-stokes".into(), 0));
            let kind = match kind.as_str() {
                "navier-stokes" => ModelKind::NavierStokes,
                "burgers" => ModelKind::Burgers,
                "heat" => ModelKind::Heat,
                "custom" => ModelKind::Custom,
                other => return Err(config_err(format!("line {line}: unknown model kind '{other}'"))),
            };
            let preset = match kind {
                ModelKind::NavierStokes | ModelKind::Custom => ModelConfig::navier_stokes(),
                ModelKind::Burgers => ModelConfig::burgers(),
                ModelKind::Heat => ModelConfig::heat_only(),
            };
            let m = match t.raw("model", "m") {
                Some((v, line)) => {
                    let vals = parse_list(&v, line, "m")?;
                    range(vals.len() == 9, Some(line), format!("'m' needs 9 entries, got {}", vals.len()))?;
                    std::array::from_fn(|i| std::array::from_fn(|j| vals[3 * i + j]))
                }
                None => preset.m,
            };
            let projection = match t.raw("model", "projection") {
                Some((v, line)) => match v.as_str() {
                    "leray" => Projection::Leray,
                    "identity" => Projection::Identity,
                    other => return Err(config_err(format!("line {line}: unknown projection '{other}'"))),
                },
                None => preset.projection,
            };
            let zero_mode = match t.raw("model", "zero_mode") {
                Some((v, line)) => match v.as_str() {
                    "identity" => ZeroModeRule::Identity,
                    "annihilate" => ZeroModeRule::Annihilate,
                    other => return Err(config_err(format!("line {line}: unknown zero_mode '{other}'"))),
                },
                None => preset.zero_mode_rule,
            };
            ModelSpec {
                kind,
                m,
                projection,
                zero_mode,
            }
        };

        let grid = {
            let (v, line) = t.require("grid", "n")?;
            let n: usize = v
                .parse()
                .map_err(|_| config_err(format!("line {line}: 'n' expects a positive integer, got '{v}'")))?;
            range(n >= 4 && n % 2 == 0 && n <= MAX_N, Some(line), format!("'n' must be even in [4, {MAX_N}], got {n}"))?;
            let box_length = t.f64_or("grid", "box_length", 2.0 * std::f64::consts::PI)?;
            range(box_length > 0.0, None, format!("grid.box_length must be positive, got {box_length}"))?;
            let dl = t.raw("grid", "dealias");
            let dealias = match &dl {
                Some((v, line)) => parse_f64(v, *line, "dealias")?,
                None => 2.0 / 3.0,
            };
            range(
                dealias > 0.0 && dealias <= 1.0,
                dl.map(|d| d.1),
                format!("'dealias' must lie in (0, 1], got {dealias}"),
            )?;
            GridSpec { n, box_length, dealias }
        };

        let time = {
            let t_start = t.f64_or("time", "t_start", 0.0)?;
            let (v, line) = t.require("time", "t_end")?;
            let t_end = parse_f64(&v, line, "t_end")?;
            let (v, dline) = t.require("time", "dt")?;
            let dt = parse_f64(&v, dline, "dt")?;
            range(t_start >= 0.0, None, format!("time.t_start must be nonnegative, got {t_start}"))?;
            range(t_end > t_start, Some(line), format!("'t_end' must exceed t_start ({t_start}), got {t_end}"))?;
            range(dt > 0.0 && dt <= t_end - t_start, Some(dline), format!("'dt' must lie in (0, t_end - t_start], got {dt}"))?;
            let log_cadence = t.f64_or("time", "log_cadence", t_end - t_start)?;
            range(
                log_cadence > 0.0 && log_cadence <= t_end - t_start,
                None,
                format!("time.log_cadence must lie in (0, t_end - t_start], got {log_cadence}"),
            )?;
            TimeSpec {
                t_start,
                t_end,
                dt,
                log_cadence,
            }
        };

        let initial = {
            let (kind, line) = t.require("initial", "kind")?;
            match kind.as_str() {
                "taylor-green" => InitialData::TaylorGreen {
                    amplitude: t.f64_or("initial", "amplitude", 1.0)?,
                },
                "cole-hopf" => {
                    let t0 = t.f64_or("initial", "t0", time.t_start)?;
                    range(t0 > 0.0, None, format!("initial.t0 must be positive, got {t0}"))?;
                    InitialData::ColeHopf { t0 }
                }
                "synthetic" => {
                    let beta = t.f64_or("initial", "beta", 1.5)?;
                    let amplitude = t.f64_or("initial", "amplitude", 1.0)?;
                    let band = match t.raw("initial", "band") {
                        Some((v, l)) => Some(parse_f64(&v, l, "band")?),
                        None => None,
                    };
                    range(beta >= 0.0, None, format!("initial.beta must be nonnegative, got {beta}"))?;
                    range(band.is_none_or(|b| b > 0.0), None, "initial.band must be positive".into())?;
                    InitialData::SyntheticSpectrum { beta, amplitude, band }
                }
                "snapshot" => {
                    let (p, pline) = t.require("initial", "path")?;
                    let path = base_dir.join(&p);
                    range(path.is_file(), Some(pline), format!("snapshot '{}' does not exist", path.display()))?;
                    InitialData::SnapshotFile { path }
                }
                other => return Err(config_err(format!("line {line}: unknown initial kind '{other}'"))),
            }
        };

        let diagnostics = {
            let checks = match t.raw("diagnostics", "checks") {
                Some((v, line)) => {
                    let mut out = Vec::new();
                    for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        out.push(match name {
                            "norms" => Check::Norms,
                            "radius" => Check::Radius,
                            "energy" => Check::Energy,
                            "oracle-error" => Check::OracleError,
                            other => return Err(config_err(format!("line {line}: unknown check '{other}'"))),
                        });
                    }
                    out.sort();
                    out.dedup();
                    out
                }
                None => vec![Check::Norms],
            };
            let r_list = match t.raw("diagnostics", "r_list") {
                Some((v, line)) => parse_list(&v, line, "r_list")?,
                None => vec![0.0, 0.5],
            };
            let lambda_list = match t.raw("diagnostics", "lambda_list") {
                Some((v, line)) => parse_list(&v, line, "lambda_list")?,
                None => vec![0.0],
            };
            range(
                r_list.iter().chain(&lambda_list).all(|v| *v >= 0.0),
                None,
                "r_list and lambda_list entries must be nonnegative".into(),
            )?;
            let energy_tolerance = t.f64_or("diagnostics", "energy_tolerance", 1e-5)?;
            range(energy_tolerance > 0.0, None, "diagnostics.energy_tolerance must be positive".into())?;
            if checks.contains(&Check::OracleError) {
                range(
                    matches!(initial, InitialData::ColeHopf { .. }),
                    None,
                    "check 'oracle-error' needs cole-hopf initial data".into(),
                )?;
            }
            DiagnosticsSpec {
                checks,
                r_list,
                lambda_list,
                energy_tolerance,
            }
        };

        let stability = {
            let deltas = match t.raw("stability", "deltas") {
                Some((v, line)) => parse_list(&v, line, "deltas")?,
                None => vec![1e-2, 1e-3, 1e-4],
            };
            range(deltas.iter().all(|d| *d >= 0.0), None, "stability.deltas must be nonnegative".into())?;
            let direction = match t.raw("stability", "direction") {
                Some((v, line)) => match v.as_str() {
                    "low-mode" => DirectionKind::LowMode,
                    "high-shell" => DirectionKind::HighShell,
                    other => return Err(config_err(format!("line {line}: unknown direction '{other}'"))),
                },
                None => DirectionKind::LowMode,
            };
            let lambda_fraction = t.f64_or("stability", "lambda_fraction", 0.5)?;
            range(
                lambda_fraction >= 0.0 && lambda_fraction < 1.0,
                None,
                format!("stability.lambda_fraction must lie in [0, 1), got {lambda_fraction}"),
            )?;
            StabilitySpec {
                deltas,
                direction,
                lambda_fraction,
            }
        };

        let output = {
            let dir = PathBuf::from(t.raw("output", "dir").map(|v| v.0).unwrap_or_else(|| "out".into()));
            let format = match t.raw("output", "format") {
                Some((v, line)) => match v.as_str() {
                    "csv" => ExportFormat::Csv,
                    "json" => ExportFormat::Json,
                    "both" => ExportFormat::Both,
                    other => return Err(config_err(format!("line {line}: unknown format '{other}'"))),
                },
                None => ExportFormat::Csv,
            };
            let snapshots = match t.raw("output", "snapshots") {
                Some((v, line)) => parse_bool(&v, line, "snapshots")?,
                None => false,
            };
            OutputSpec { dir, format, snapshots }
        };

        let unknown = t.unknown();
        if !unknown.is_empty() {
            return Err(config_err(format!("unknown keys: {}", unknown.join(", "))));
        }
        Ok(Scenario {
            name,
            seed,
            model,
            grid,
            time,
            initial,
            diagnostics,
            stability,
            output,
        })
    }

    pub fn parse_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Canonical text form with every key written out.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "seed = {}", self.seed);
        let kind = match self.model.kind {
            ModelKind::NavierStokes => "navier-stokes",
            ModelKind::Burgers => "burgers",
            ModelKind::Heat => "heat",
            ModelKind::Custom => "custom",
        };
        let m: Vec<f64> = self.model.m.iter().flatten().copied().collect();
        let _ = writeln!(s, "\n[model]\nkind = {kind}\nm = {}", fmt_list(&m));
        let _ = writeln!(
            s,
            "projection = {}\nzero_mode = {}",
            match self.model.projection {
                Projection::Leray => "leray",
                Projection::Identity => "identity",
            },
            match self.model.zero_mode {
                ZeroModeRule::Identity => "identity",
                ZeroModeRule::Annihilate => "annihilate",
            }
        );
        let g = &self.grid;
        let _ = writeln!(s, "\n[grid]\nn = {}\nbox_length = {}\ndealias = {}", g.n, g.box_length, g.dealias);
        let t = &self.time;
        let _ = writeln!(
            s,
            "\n[time]\nt_start = {}\nt_end = {}\ndt = {}\nlog_cadence = {}",
            t.t_start, t.t_end, t.dt, t.log_cadence
        );
        let _ = writeln!(s, "\n[initial]");
        match &self.initial {
            InitialData::TaylorGreen { amplitude } => {
                let _ = writeln!(s, "kind = taylor-green\namplitude = {amplitude}");
            }
            InitialData::ColeHopf { t0 } => {
                let _ = writeln!(s, "kind = cole-hopf\nt0 = {t0}");
            }
            InitialData::SyntheticSpectrum { beta, amplitude, band } => {
                let _ = writeln!(s, "kind = synthetic\nbeta = {beta}\namplitude = {amplitude}");
                if let Some(b) = band {
                    let _ = writeln!(s, "band = {b}");
                }
            }
            InitialData::SnapshotFile { path } => {
                let _ = writeln!(s, "kind = snapshot\npath = {}", path.display());
            }
        }
        let d = &self.diagnostics;
        let checks: Vec<&str> = d.checks.iter().map(|c| c.name()).collect();
        let _ = writeln!(
            s,
            "\n[diagnostics]\nchecks = {}\nr_list = {}\nlambda_list = {}\nenergy_tolerance = {}",
            checks.join(", "),
            fmt_list(&d.r_list),
            fmt_list(&d.lambda_list),
            d.energy_tolerance
        );
        let st = &self.stability;
        let _ = writeln!(
            s,
            "\n[stability]\ndeltas = {}\ndirection = {}\nlambda_fraction = {}",
            fmt_list(&st.deltas),
            match st.direction {
                DirectionKind::LowMode => "low-mode",
                DirectionKind::HighShell => "high-shell",
            },
            st.lambda_fraction
        );
        let o = &self.output;
        let _ = writeln!(
            s,
            "\n[output]\ndir = {}\nformat = {}\nsnapshots = {}",
            o.dir.display(),
            match o.format {
                ExportFormat::Csv => "csv",
                ExportFormat::Json => "json",
                ExportFormat::Both => "both",
            },
            o.snapshots
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "name = tg\n[grid]\nn = 16\n[time]\nt_end = 1\ndt = 0.01\n[initial]\nkind = taylor-green\n";

    fn parse(text: &str) -> Result<Scenario> {
        Scenario::parse_str(text, Path::new("."))
    }

    #[test]
    fn minimal_scenario_gets_defaults() {
        let s = parse(MINIMAL).unwrap();
        assert_eq!(s.model.kind, ModelKind::NavierStokes);
        assert_eq!(s.grid.dealias, 2.0 / 3.0);
        assert_eq!(s.time.log_cadence, 1.0);
        assert_eq!(s.initial, InitialData::TaylorGreen { amplitude: 1.0 });
        assert_eq!(s.diagnostics.checks, vec![Check::Norms]);
    }

    #[test]
    fn dealias_out_of_range() {
        let text = MINIMAL.replace("n = 16", "n = 16\ndealias = 1.5");
        let err = parse(&text).unwrap_err();
        assert!(matches!(err, LabError::Config(_)));
        assert!(err.to_string().contains("dealias"), "{err}");
    }

    #[test]
    fn duplicate_key_names_line() {
        let text = MINIMAL.replace("n = 16", "n = 16\nn = 32");
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("line 3"), "{err}");
    }

    #[test]
    fn unknown_keys_are_listed() {
        let text = format!("{MINIMAL}colour = red\n[output]\nshape = round\n");
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("initial.colour") && err.contains("output.shape"), "{err}");
    }

    #[test]
    fn unknown_section_rejected() {
        let err = parse(&format!("{MINIMAL}[extras]\n")).unwrap_err().to_string();
        assert!(err.contains("extras"), "{err}");
    }

    #[test]
    fn missing_required_key() {
        let err = parse(&MINIMAL.replace("dt = 0.01\n", "")).unwrap_err().to_string();
        assert!(err.contains("time.dt"), "{err}");
    }

    #[test]
    fn serialize_is_idempotent() {
        let text = "name = x\nseed = 9\n[model]\nkind = burgers\n[grid]\nn = 8\nbox_length = 20\n[time]\nt_start = 1\nt_end = 2\ndt = 0.001\nlog_cadence = 0.25\n[initial]\nkind = synthetic\nbeta = 2\nband = 3.5\n[diagnostics]\nchecks = radius, norms\nr_list = 0, 0.5, 1.25\nlambda_list = 0, 0.3\n";
        let a = parse(text).unwrap();
        let once = a.to_config_string();
        let b = parse(&once).unwrap();
        assert_eq!(a, b);
        assert_eq!(once, b.to_config_string());
    }
}
