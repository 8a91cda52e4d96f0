//! Scenario configuration: a sectioned key = value document (TOML-like
//! surface, documented in the README) parsed strictly. Unknown sections or
//! keys are rejected with the nearest valid name, and every parse or
//! validation error carries the key path and line number.

use crate::analysis::TheoremId;
use crate::growth_laws::GrowthLaw;
use crate::pressure_laws::PressureLaw;
use crate::solver::Boundary;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse { line: usize, message: String },
    Validation { key: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Validation { key, message } => write!(f, "{key}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

const SECTIONS: [(&str, &[&str]); 7] = [
    ("law", &["kind", "gamma", "epsilon", "p_max"]),
    ("growth", &["kind", "rate", "p_max"]),
    ("grid", &["dim", "extent", "cells", "boundary"]),
    ("initial", &["kind", "t0", "c0", "center", "radius", "height", "path"]),
    (
        "run",
        &[
            "form",
            "t_end",
            "snapshots",
            "mask_threshold",
            "cfl_safety",
            "warmup_fraction",
            "tol_rel",
            "theorems",
            "output_dir",
        ],
    ),
    ("sweep", &["parameter", "values", "parallelism"]),
    ("checks", &["bound_scale"]),
];

fn levenshtein(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn nearest<'a>(word: &str, candidates: impl Iterator<Item = &'a str>) -> Option<&'a str> {
    candidates.min_by_key(|c| levenshtein(word, c))
}

/// Raw parsed document: `section.key -> (value, line)`.
#[derive(Debug, Clone, Default)]
pub struct Document {
    entries: BTreeMap<String, (String, usize)>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut section: Option<&str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                match SECTIONS.iter().find(|(s, _)| *s == name) {
                    Some((s, _)) => section = Some(s),
                    None => {
                        let hint = nearest(name, SECTIONS.iter().map(|(s, _)| *s)).unwrap();
                        return Err(ConfigError::Parse {
                            line: line_no,
                            message: format!("unknown section `{name}`; nearest valid section is `{hint}`"),
                        });
                    }
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim().trim_matches('"').to_string();
            let section = section.ok_or_else(|| ConfigError::Parse {
                line: line_no,
                message: format!("key `{key}` appears before any [section] header"),
            })?;
            let valid = SECTIONS.iter().find(|(s, _)| *s == section).unwrap().1;
            if !valid.contains(&key) {
                let hint = nearest(key, valid.iter().copied()).unwrap();
                return Err(ConfigError::Parse {
                    line: line_no,
                    message: format!(
                        "unknown key `{key}` in [{section}]; nearest valid key is `{hint}`"
                    ),
                });
            }
            entries.insert(format!("{section}.{key}"), (value, line_no));
        }
        Ok(Self { entries })
    }

    /// Applies `--set section.key=value` overrides (fault injection and
    /// sweep parameterisation). The path must name a known key.
    pub fn set(&mut self, path: &str, value: &str) -> Result<(), ConfigError> {
        let (section, key) = path.split_once('.').ok_or_else(|| ConfigError::Validation {
            key: path.to_string(),
            message: "override paths are `section.key`".into(),
        })?;
        let valid = SECTIONS
            .iter()
            .find(|(s, _)| *s == section)
            .ok_or_else(|| ConfigError::Validation {
                key: path.to_string(),
                message: format!(
                    "unknown section `{section}`; nearest is `{}`",
                    nearest(section, SECTIONS.iter().map(|(s, _)| *s)).unwrap()
                ),
            })?
            .1;
        if !valid.contains(&key) {
            return Err(ConfigError::Validation {
                key: path.to_string(),
                message: format!(
                    "unknown key `{key}`; nearest is `{}`",
                    nearest(key, valid.iter().copied()).unwrap()
                ),
            });
        }
        self.entries.insert(path.to_string(), (value.to_string(), 0));
        Ok(())
    }

    fn get(&self, path: &str) -> Option<&(String, usize)> {
        self.entries.get(path)
    }

    fn require(&self, path: &str) -> Result<&(String, usize), ConfigError> {
        self.get(path).ok_or_else(|| ConfigError::Validation {
            key: path.to_string(),
            message: "missing required key".into(),
        })
    }

    fn f64_at(&self, path: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(path) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| ConfigError::Parse {
                line: *line,
                message: format!("{path}: expected a number, got `{v}`"),
            }),
        }
    }

    fn usize_at(&self, path: &str) -> Result<Option<usize>, ConfigError> {
        match self.get(path) {
            None => Ok(None),
            Some((v, line)) => v.parse::<usize>().map(Some).map_err(|_| ConfigError::Parse {
                line: *line,
                message: format!("{path}: expected an integer, got `{v}`"),
            }),
        }
    }

    fn str_at(&self, path: &str) -> Option<&str> {
        self.get(path).map(|(v, _)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawSpec {
    PowerLaw { gamma: f64 },
    Dhv { epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthSpec {
    Zero,
    Linear { rate: f64, p_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Barenblatt { t0: f64, c0: f64 },
    CosSquared,
    Bump { center: f64, radius: f64, height: f64 },
    FromCsv { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunForm {
    /// The conservative density equation.
    Density,
    /// The direct 1D pressure equation (regularity counterexample runs).
    Pressure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Gamma,
    Epsilon,
    Cells,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Gamma => "gamma",
            SweepParameter::Epsilon => "epsilon",
            SweepParameter::Cells => "cells",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub parallelism: usize,
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub law: LawSpec,
    pub law_p_max: Option<f64>,
    pub growth: GrowthSpec,
    pub grid_dim: u32,
    pub grid_extent: f64,
    pub grid_cells: usize,
    pub boundary: Boundary,
    pub initial: InitialData,
    pub form: RunForm,
    pub t_end: f64,
    pub snapshot_count: usize,
    pub mask_threshold: f64,
    pub cfl_safety: f64,
    pub warmup_fraction: f64,
    pub tol_rel: f64,
    pub theorems: Vec<TheoremId>,
    pub output_dir: PathBuf,
    pub bound_scale: f64,
    pub sweep: Option<SweepSpec>,
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation { key: key.to_string(), message: message.into() }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc = Document::parse(text)?;
    build_config(&doc)
}

/// Parses, applies `--set` overrides, then validates.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[(String, String)],
) -> Result<ScenarioConfig, ConfigError> {
    let mut doc = Document::parse(text)?;
    for (k, v) in overrides {
        doc.set(k, v)?;
    }
    build_config(&doc)
}

pub fn build_config(doc: &Document) -> Result<ScenarioConfig, ConfigError> {
    let law = match doc.require("law.kind")?.0.as_str() {
        "power-law" => {
            let gamma = doc
                .f64_at("law.gamma")?
                .ok_or_else(|| invalid("law.gamma", "missing required key"))?;
            if !(gamma > 0.0) {
                return Err(invalid("law.gamma", "law.gamma must be positive"));
            }
            LawSpec::PowerLaw { gamma }
        }
        "dhv" => {
            let epsilon = doc
                .f64_at("law.epsilon")?
                .ok_or_else(|| invalid("law.epsilon", "missing required key"))?;
            if !(epsilon > 0.0) {
                return Err(invalid("law.epsilon", "law.epsilon must be positive"));
            }
            LawSpec::Dhv { epsilon }
        }
        other => {
            return Err(invalid("law.kind", format!("unknown law `{other}` (power-law | dhv)")))
        }
    };
    let law_p_max = doc.f64_at("law.p_max")?;
    if let Some(pm) = law_p_max {
        if !(pm > 0.0) {
            return Err(invalid("law.p_max", "law.p_max must be positive"));
        }
    }

    let growth = match doc.str_at("growth.kind").unwrap_or("zero") {
        "zero" => GrowthSpec::Zero,
        "linear" => {
            let rate = doc
                .f64_at("growth.rate")?
                .ok_or_else(|| invalid("growth.rate", "missing required key"))?;
            let p_max = doc
                .f64_at("growth.p_max")?
                .ok_or_else(|| invalid("growth.p_max", "missing required key"))?;
            if !(rate > 0.0) {
                return Err(invalid("growth.rate", "growth.rate must be positive"));
            }
            if !(p_max > 0.0) {
                return Err(invalid("growth.p_max", "growth.p_max must be positive"));
            }
            GrowthSpec::Linear { rate, p_max }
        }
        other => {
            return Err(invalid("growth.kind", format!("unknown growth `{other}` (zero | linear)")))
        }
    };

    let grid_dim = doc.usize_at("grid.dim")?.unwrap_or(1);
    if grid_dim != 1 && grid_dim != 2 {
        return Err(invalid("grid.dim", "grid.dim must be 1 or 2"));
    }
    let grid_extent = doc
        .f64_at("grid.extent")?
        .ok_or_else(|| invalid("grid.extent", "missing required key"))?;
    if !(grid_extent > 0.0) {
        return Err(invalid("grid.extent", "grid.extent must be positive"));
    }
    let grid_cells = doc
        .usize_at("grid.cells")?
        .ok_or_else(|| invalid("grid.cells", "missing required key"))?;
    if grid_cells < 8 || !grid_cells.is_power_of_two() {
        return Err(invalid("grid.cells", "grid.cells must be a power of two, at least 8"));
    }
    let boundary = match doc.str_at("grid.boundary").unwrap_or("no-flux") {
        "no-flux" => Boundary::NoFlux,
        "periodic" => Boundary::Periodic,
        other => {
            return Err(invalid(
                "grid.boundary",
                format!("unknown boundary `{other}` (no-flux | periodic)"),
            ))
        }
    };

    let initial = match doc.require("initial.kind")?.0.as_str() {
        "barenblatt" => {
            let t0 = doc.f64_at("initial.t0")?.unwrap_or(1.0);
            let c0 = doc.f64_at("initial.c0")?.unwrap_or(1.0);
            if !(t0 > 0.0) {
                return Err(invalid("initial.t0", "initial.t0 must be positive"));
            }
            if !(c0 > 0.0) {
                return Err(invalid("initial.c0", "initial.c0 must be positive"));
            }
            InitialData::Barenblatt { t0, c0 }
        }
        "cos-squared" => InitialData::CosSquared,
        "bump" => {
            let center = doc.f64_at("initial.center")?.unwrap_or(0.0);
            let radius = doc
                .f64_at("initial.radius")?
                .ok_or_else(|| invalid("initial.radius", "missing required key"))?;
            let height = doc
                .f64_at("initial.height")?
                .ok_or_else(|| invalid("initial.height", "missing required key"))?;
            if !(radius > 0.0) {
                return Err(invalid("initial.radius", "initial.radius must be positive"));
            }
            if !(height > 0.0) {
                return Err(invalid("initial.height", "initial.height must be positive"));
            }
            InitialData::Bump { center, radius, height }
        }
        "from-csv" => {
            let path = doc
                .str_at("initial.path")
                .ok_or_else(|| invalid("initial.path", "missing required key"))?;
            let path = PathBuf::from(path);
            if !Path::new(&path).exists() {
                return Err(invalid(
                    "initial.path",
                    format!("file `{}` does not exist", path.display()),
                ));
            }
            InitialData::FromCsv { path }
        }
        other => {
            return Err(invalid(
                "initial.kind",
                format!("unknown initial data `{other}` (barenblatt | cos-squared | bump | from-csv)"),
            ))
        }
    };

    let form = match doc.str_at("run.form").unwrap_or("density") {
        "density" => RunForm::Density,
        "pressure" => RunForm::Pressure,
        other => return Err(invalid("run.form", format!("unknown form `{other}` (density | pressure)"))),
    };
    let t_end = doc
        .f64_at("run.t_end")?
        .ok_or_else(|| invalid("run.t_end", "missing required key"))?;
    if !(t_end >= 0.0) {
        return Err(invalid("run.t_end", "run.t_end must be nonnegative"));
    }
    let snapshot_count = doc.usize_at("run.snapshots")?.unwrap_or(16);
    if snapshot_count < 2 {
        return Err(invalid("run.snapshots", "run.snapshots must be at least 2"));
    }
    let mask_threshold = doc.f64_at("run.mask_threshold")?.unwrap_or(1e-6);
    if !(0.0..1.0).contains(&mask_threshold) {
        return Err(invalid("run.mask_threshold", "run.mask_threshold must be in [0, 1)"));
    }
    let cfl_safety = doc.f64_at("run.cfl_safety")?.unwrap_or(0.45);
    if !(cfl_safety > 0.0 && cfl_safety < 1.0) {
        return Err(invalid("run.cfl_safety", "run.cfl_safety must be in (0, 1)"));
    }
    let warmup_fraction = doc.f64_at("run.warmup_fraction")?.unwrap_or(0.05);
    if !(0.0..1.0).contains(&warmup_fraction) {
        return Err(invalid("run.warmup_fraction", "run.warmup_fraction must be in [0, 1)"));
    }
    let tol_rel = doc.f64_at("run.tol_rel")?.unwrap_or(0.1);
    if !(0.0..1.0).contains(&tol_rel) {
        return Err(invalid("run.tol_rel", "run.tol_rel must be in [0, 1)"));
    }
    let mut theorems = Vec::new();
    if let Some(list) = doc.str_at("run.theorems") {
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let id = TheoremId::from_name(name).ok_or_else(|| {
                invalid(
                    "run.theorems",
                    format!(
                        "unknown theorem `{name}`; valid ids: {}",
                        TheoremId::ALL.map(|t| t.as_str()).join(", ")
                    ),
                )
            })?;
            theorems.push(id);
        }
    }
    let output_dir = PathBuf::from(doc.str_at("run.output_dir").unwrap_or("out"));
    let bound_scale = doc.f64_at("checks.bound_scale")?.unwrap_or(1.0);
    if !(bound_scale > 0.0) {
        return Err(invalid("checks.bound_scale", "checks.bound_scale must be positive"));
    }

    let sweep = match doc.str_at("sweep.parameter") {
        None => None,
        Some(name) => {
            let parameter = match name {
                "gamma" => SweepParameter::Gamma,
                "epsilon" => SweepParameter::Epsilon,
                "cells" => SweepParameter::Cells,
                other => {
                    return Err(invalid(
                        "sweep.parameter",
                        format!("unknown parameter `{other}` (gamma | epsilon | cells)"),
                    ))
                }
            };
            let raw = doc
                .str_at("sweep.values")
                .ok_or_else(|| invalid("sweep.values", "missing required key"))?;
            let mut values = Vec::new();
            for part in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                values.push(part.parse::<f64>().map_err(|_| {
                    invalid("sweep.values", format!("expected numbers, got `{part}`"))
                })?);
            }
            if values.len() < 3 {
                return Err(invalid("sweep.values", "need at least 3 sweep values"));
            }
            let increasing = values.windows(2).all(|w| w[1] > w[0]);
            let decreasing = values.windows(2).all(|w| w[1] < w[0]);
            if !increasing && !decreasing {
                return Err(invalid("sweep.values", "sweep values must be strictly monotone"));
            }
            if parameter == SweepParameter::Cells {
                for &v in &values {
                    let c = v as usize;
                    if c as f64 != v || !c.is_power_of_two() || c < 8 {
                        return Err(invalid(
                            "sweep.values",
                            "cell sweeps need powers of two, at least 8",
                        ));
                    }
                }
            }
            let parallelism = doc.usize_at("sweep.parallelism")?.unwrap_or(1);
            if parallelism == 0 {
                return Err(invalid("sweep.parallelism", "sweep.parallelism must be at least 1"));
            }
            Some(SweepSpec { parameter, values, parallelism })
        }
    };

    let config = ScenarioConfig {
        law,
        law_p_max,
        growth,
        grid_dim: grid_dim as u32,
        grid_extent,
        grid_cells,
        boundary,
        initial,
        form,
        t_end,
        snapshot_count,
        mask_threshold,
        cfl_safety,
        warmup_fraction,
        tol_rel,
        theorems,
        output_dir,
        bound_scale,
        sweep,
    };
    cross_validate(&config)?;
    Ok(config)
}

fn cross_validate(c: &ScenarioConfig) -> Result<(), ConfigError> {
    if c.grid_dim == 2 {
        if !matches!(c.law, LawSpec::PowerLaw { .. }) {
            return Err(invalid("grid.dim", "2D scenarios support the power law only"));
        }
        if c.grid_cells > 256 {
            return Err(invalid("grid.cells", "2D scenarios are capped at 256^2 cells"));
        }
    }
    if c.form == RunForm::Pressure {
        if c.grid_dim != 1 || c.boundary != Boundary::Periodic {
            return Err(invalid("run.form", "pressure-form runs need a 1D periodic grid"));
        }
        if !matches!(c.law, LawSpec::PowerLaw { .. }) {
            return Err(invalid("run.form", "pressure-form runs need the power law"));
        }
        if c.growth != GrowthSpec::Zero {
            return Err(invalid("run.form", "pressure-form runs need zero growth"));
        }
    }
    if matches!(c.initial, InitialData::Barenblatt { .. }) && !matches!(c.law, LawSpec::PowerLaw { .. })
    {
        return Err(invalid("initial.kind", "Barenblatt data needs the power law"));
    }
    if let (LawSpec::Dhv { .. }, InitialData::Bump { height, .. }) = (&c.law, &c.initial) {
        if *height >= 1.0 && c.form == RunForm::Density {
            return Err(invalid("initial.height", "DHV density must stay below 1"));
        }
    }
    for id in &c.theorems {
        if id.requires_zero_growth() && c.growth != GrowthSpec::Zero {
            return Err(invalid(
                "run.theorems",
                format!("{id} is a zero-growth bound but the scenario has growth"),
            ));
        }
    }
    Ok(())
}

impl ScenarioConfig {
    /// Builds the pressure law with a provisional range; the runner widens
    /// the range to cover the initial data and homeostatic pressure.
    pub fn pressure_law(&self, p_max: f64) -> Result<PressureLaw, ConfigError> {
        match self.law {
            LawSpec::PowerLaw { gamma } => PressureLaw::power_law(gamma, p_max),
            LawSpec::Dhv { epsilon } => PressureLaw::dhv(epsilon, p_max),
        }
        .map_err(|e| invalid("law", e.to_string()))
    }

    pub fn growth_law(&self) -> Result<GrowthLaw, ConfigError> {
        match self.growth {
            GrowthSpec::Zero => Ok(GrowthLaw::zero()),
            GrowthSpec::Linear { rate, p_max } => {
                GrowthLaw::linear(rate, p_max).map_err(|e| invalid("growth", e.to_string()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[law]
kind = "power-law"
gamma = 2.0

[grid]
extent = 8.0
cells = 128

[initial]
kind = "bump"
radius = 1.0
height = 0.8

[run]
t_end = 1.0
"#;

    #[test]
    fn minimal_document_fills_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.cfl_safety, 0.45);
        assert_eq!(c.mask_threshold, 1e-6);
        assert_eq!(c.snapshot_count, 16);
        assert_eq!(c.boundary, Boundary::NoFlux);
        assert_eq!(c.law, LawSpec::PowerLaw { gamma: 2.0 });
        assert_eq!(c.output_dir, PathBuf::from("out"));
        assert!(c.theorems.is_empty());
    }

    #[test]
    fn negative_gamma_names_the_key() {
        let text = MINIMAL.replace("gamma = 2.0", "gamma = -1.0");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err.to_string(), "law.gamma: law.gamma must be positive");
    }

    #[test]
    fn unknown_section_suggests_nearest() {
        let text = MINIMAL.replace("[law]", "[lawx]");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown section `lawx`"), "{msg}");
        assert!(msg.contains("`law`"), "{msg}");
        assert!(msg.starts_with("line "), "{msg}");
    }

    #[test]
    fn unknown_key_suggests_nearest() {
        let text = MINIMAL.replace("gamma = 2.0", "gamm = 2.0");
        let err = parse_config(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown key `gamm`"), "{msg}");
        assert!(msg.contains("`gamma`"), "{msg}");
    }

    #[test]
    fn type_mismatch_carries_line_number() {
        let text = MINIMAL.replace("t_end = 1.0", "t_end = soon");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line, .. } if line > 0), "{err}");
    }

    #[test]
    fn cells_must_be_power_of_two() {
        let text = MINIMAL.replace("cells = 128", "cells = 100");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn theorem_list_parses() {
        let text = MINIMAL.replace(
            "t_end = 1.0",
            "t_end = 1.0\ntheorems = \"LINF_NO_G_B1, L1_NO_G\"",
        );
        let c = parse_config(&text).unwrap();
        assert_eq!(c.theorems, vec![TheoremId::LinfNoGB1, TheoremId::L1NoG]);
    }

    #[test]
    fn growth_theorem_mismatch_rejected() {
        let text = MINIMAL.replace(
            "[run]",
            "[growth]\nkind = \"linear\"\nrate = 1.0\np_max = 1.0\n\n[run]",
        );
        let text = text.replace("t_end = 1.0", "t_end = 1.0\ntheorems = \"L1_NO_G\"");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("zero-growth"), "{err}");
    }

    #[test]
    fn overrides_change_values_and_reject_unknown_paths() {
        let mut doc = Document::parse(MINIMAL).unwrap();
        doc.set("checks.bound_scale", "0.1").unwrap();
        let c = build_config(&doc).unwrap();
        assert_eq!(c.bound_scale, 0.1);
        assert!(Document::parse(MINIMAL).unwrap().set("checks.scale", "1").is_err());
    }

    #[test]
    fn sweep_values_must_be_monotone() {
        let text = format!(
            "{MINIMAL}\n[sweep]\nparameter = \"gamma\"\nvalues = \"5, 3, 10\"\n"
        );
        assert!(parse_config(&text).is_err());
        let text = format!(
            "{MINIMAL}\n[sweep]\nparameter = \"gamma\"\nvalues = \"5, 10, 20, 40\"\n"
        );
        let c = parse_config(&text).unwrap();
        let sweep = c.sweep.unwrap();
        assert_eq!(sweep.values, vec![5.0, 10.0, 20.0, 40.0]);
        assert_eq!(sweep.parallelism, 1);
    }

    #[test]
    fn pressure_form_constraints() {
        let text = MINIMAL
            .replace("kind = \"bump\"", "kind = \"cos-squared\"")
            .replace("radius = 1.0", "")
            .replace("height = 0.8", "")
            .replace("t_end = 1.0", "t_end = 0.1\nform = \"pressure\"");
        // missing periodic boundary
        assert!(parse_config(&text).is_err());
        let text = text.replace("cells = 128", "cells = 128\nboundary = \"periodic\"");
        assert!(parse_config(&text).is_ok());
    }
}
