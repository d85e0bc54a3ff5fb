//! Flat `key = value` sweep configuration.
//!
//! ```text
//! model = ising            # ising | xy
//! n_spins = 2
//! field_h = 1
//! coupling_delta = 0.5     # omitted for coupling sweeps
//! style = both             # global | local | both
//! kappa = 1
//! grid = temperature       # temperature | coupling | gradient
//! grid_start = 0.01
//! grid_stop = 100
//! grid_points = 50
//! grid_spacing = log       # linear | log
//! t_right = 0              # temperature and coupling grids
//! t_left = 10              # coupling grid only
//! mean_temperature = 5     # gradient grid only
//! output_path = out/sweep.csv
//! ```
//!
//! Blank lines and `#` comments are ignored; unknown, repeated or
//! inapplicable keys are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use super::table::Table;
use super::{linspace, logspace};
use crate::error::{Error, Result};
use crate::lindblad::DissipatorStyle;
use crate::model::TwoBathModel;
use crate::parallel::Execution;
use crate::spinops::{SpinChainSpec, SpinModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StyleChoice {
    Global,
    Local,
    Both,
}

impl StyleChoice {
    pub fn styles(self) -> Vec<DissipatorStyle> {
        match self {
            StyleChoice::Global => vec![DissipatorStyle::Global],
            StyleChoice::Local => vec![DissipatorStyle::Local],
            StyleChoice::Both => vec![DissipatorStyle::Global, DissipatorStyle::Local],
        }
    }

    pub fn style_name(style: DissipatorStyle) -> &'static str {
        match style {
            DissipatorStyle::Global => "global",
            DissipatorStyle::Local => "local",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StyleChoice::Global => "global",
            StyleChoice::Local => "local",
            StyleChoice::Both => "both",
        }
    }
}

impl FromStr for StyleChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(StyleChoice::Global),
            "local" => Ok(StyleChoice::Local),
            "both" => Ok(StyleChoice::Both),
            other => Err(Error::Config(format!("unknown style '{other}' (global|local|both)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.start, self.stop, self.points),
            Spacing::Log => logspace(self.start, self.stop, self.points),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        if self.start >= self.stop {
            return Err(Error::Config(format!("grid must ascend, got {} .. {}", self.start, self.stop)));
        }
        if self.points < 2 {
            return Err(Error::Config("grid needs at least 2 points".into()));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::Config("log grid needs a positive start".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepGrid {
    /// Sweep `T_L` at fixed `T_R`.
    Temperature { t_left: GridRange, t_right: f64 },
    /// Sweep `Δ` at fixed temperatures.
    Coupling { delta: GridRange, t_left: f64, t_right: f64 },
    /// Sweep `δT = T_L − T_R` at fixed mean `(T_L + T_R)/2`.
    Gradient { delta_t: GridRange, mean_temperature: f64 },
}

impl SweepGrid {
    pub fn range(&self) -> &GridRange {
        match self {
            SweepGrid::Temperature { t_left, .. } => t_left,
            SweepGrid::Coupling { delta, .. } => delta,
            SweepGrid::Gradient { delta_t, .. } => delta_t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// For coupling sweeps `coupling_delta` is a placeholder replaced per point.
    pub model: SpinChainSpec,
    pub style: StyleChoice,
    pub kappa: f64,
    pub grid: SweepGrid,
    pub output_path: Option<PathBuf>,
}

const KEYS: [&str; 15] = [
    "model",
    "n_spins",
    "field_h",
    "coupling_delta",
    "style",
    "kappa",
    "grid",
    "grid_start",
    "grid_stop",
    "grid_points",
    "grid_spacing",
    "t_left",
    "t_right",
    "mean_temperature",
    "output_path",
];

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.take(key)
            .map(|v| v.parse::<T>().map_err(|e| Error::Config(format!("{key}: cannot parse '{v}': {e}"))))
            .transpose()
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(key)?.ok_or_else(|| Error::Config(format!("missing key '{key}'")))
    }
}

fn check_temperature(name: &str, t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::Config(format!("{name} must be a non-negative temperature, got {t}")))
    }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
            if map.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: repeated key '{key}'", lineno + 1)));
            }
        }
        let mut e = Entries(map);

        let model = match e.take("model").as_deref() {
            Some("ising") => SpinModel::IsingZZ,
            Some("xy") => SpinModel::XYTransverse,
            Some(other) => return Err(Error::Config(format!("unknown model '{other}' (ising|xy)"))),
            None => return Err(Error::Config("missing key 'model'".into())),
        };
        let n_spins = e.parse("n_spins")?.unwrap_or(2);
        let field_h = e.parse("field_h")?.unwrap_or(1.0);
        let style = e.parse("style")?.unwrap_or(StyleChoice::Global);
        let kappa: f64 = e.parse("kappa")?.unwrap_or(1.0);
        let spacing = match e.take("grid_spacing").as_deref() {
            None | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(other) => return Err(Error::Config(format!("unknown grid_spacing '{other}' (linear|log)"))),
        };
        let range = GridRange {
            start: e.require("grid_start")?,
            stop: e.require("grid_stop")?,
            points: e.require("grid_points")?,
            spacing,
        };
        range.validate()?;
        let grid_kind = e.take("grid").ok_or_else(|| Error::Config("missing key 'grid'".into()))?;
        let (grid, coupling_delta) = match grid_kind.as_str() {
            "temperature" => {
                check_temperature("grid_start", range.start)?;
                let t_right = check_temperature("t_right", e.require("t_right")?)?;
                (SweepGrid::Temperature { t_left: range, t_right }, e.require("coupling_delta")?)
            }
            "coupling" => {
                if range.start < 0.0 {
                    return Err(Error::Config("coupling grid must be non-negative".into()));
                }
                let t_left = check_temperature("t_left", e.require("t_left")?)?;
                let t_right = check_temperature("t_right", e.require("t_right")?)?;
                (SweepGrid::Coupling { delta: range, t_left, t_right }, range.start)
            }
            "gradient" => {
                let mean_temperature = check_temperature("mean_temperature", e.require("mean_temperature")?)?;
                let reach = range.start.abs().max(range.stop.abs());
                if reach > 2.0 * mean_temperature {
                    return Err(Error::Config(format!(
                        "|delta_T| up to {reach} would need a negative temperature at mean {mean_temperature}"
                    )));
                }
                (SweepGrid::Gradient { delta_t: range, mean_temperature }, e.require("coupling_delta")?)
            }
            other => return Err(Error::Config(format!("unknown grid '{other}' (temperature|coupling|gradient)"))),
        };
        let output_path = e.take("output_path").map(PathBuf::from);
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Config(format!("kappa must be positive, got {kappa}")));
        }
        if let Some(key) = e.0.keys().next() {
            return Err(Error::Config(format!("key '{key}' does not apply to grid '{grid_kind}'")));
        }
        if !super::figures::XY_SPIN_RANGE.contains(&n_spins) {
            return Err(Error::Config(format!("sweeps support 2..=6 spins, got {n_spins}")));
        }
        let model = SpinChainSpec::new(model, n_spins, field_h, coupling_delta)
            .map_err(|err| Error::Config(err.to_string()))?;
        Ok(Self { model, style, kappa, grid, output_path })
    }

    /// Serialize to the flat format accepted by [`SweepConfig::parse`].
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("model", match self.model.model {
            SpinModel::IsingZZ => "ising".into(),
            SpinModel::XYTransverse => "xy".into(),
        });
        kv("n_spins", self.model.n_spins.to_string());
        kv("field_h", self.model.field_h.to_string());
        if !matches!(self.grid, SweepGrid::Coupling { .. }) {
            kv("coupling_delta", self.model.coupling_delta.to_string());
        }
        kv("style", self.style.as_str().into());
        kv("kappa", self.kappa.to_string());
        let (name, range) = match &self.grid {
            SweepGrid::Temperature { t_left, .. } => ("temperature", t_left),
            SweepGrid::Coupling { delta, .. } => ("coupling", delta),
            SweepGrid::Gradient { delta_t, .. } => ("gradient", delta_t),
        };
        kv("grid", name.into());
        kv("grid_start", range.start.to_string());
        kv("grid_stop", range.stop.to_string());
        kv("grid_points", range.points.to_string());
        kv("grid_spacing", match range.spacing {
            Spacing::Linear => "linear".into(),
            Spacing::Log => "log".into(),
        });
        match self.grid {
            SweepGrid::Temperature { t_right, .. } => kv("t_right", t_right.to_string()),
            SweepGrid::Coupling { t_left, t_right, .. } => {
                kv("t_left", t_left.to_string());
                kv("t_right", t_right.to_string());
            }
            SweepGrid::Gradient { mean_temperature, .. } => kv("mean_temperature", mean_temperature.to_string()),
        }
        if let Some(p) = &self.output_path {
            kv("output_path", p.display().to_string());
        }
        out
    }

    /// Recover the configuration embedded in a sweep table's comments.
    pub fn from_table(table: &Table) -> Result<Self> {
        let text: String = table
            .comments
            .iter()
            .filter_map(|c| c.strip_prefix("config: "))
            .map(|line| format!("{line}\n"))
            .collect();
        Self::parse(&text)
    }
}

type Points = (Vec<(f64, f64, f64)>, Vec<&'static str>, Vec<Vec<f64>>);

/// Per-point `(Δ, T_L, T_R)`, and the swept columns written before the currents.
fn points(config: &SweepConfig) -> Points {
    let grid = config.grid.range().values();
    let delta = config.model.coupling_delta;
    match config.grid {
        SweepGrid::Temperature { t_right, .. } => (
            grid.iter().map(|&tl| (delta, tl, t_right)).collect(),
            vec!["T_L", "T_R"],
            grid.iter().map(|&tl| vec![tl, t_right]).collect(),
        ),
        SweepGrid::Coupling { t_left, t_right, .. } => (
            grid.iter().map(|&d| (d, t_left, t_right)).collect(),
            vec!["delta"],
            grid.iter().map(|&d| vec![d]).collect(),
        ),
        SweepGrid::Gradient { mean_temperature, .. } => {
            let temps: Vec<(f64, f64)> = grid
                .iter()
                .map(|&dt| ((mean_temperature + dt / 2.0).max(0.0), (mean_temperature - dt / 2.0).max(0.0)))
                .collect();
            (
                temps.iter().map(|&(tl, tr)| (delta, tl, tr)).collect(),
                vec!["delta_T", "T_L", "T_R"],
                grid.iter().zip(&temps).map(|(&dt, &(tl, tr))| vec![dt, tl, tr]).collect(),
            )
        }
    }
}

/// Evaluate the sweep. The table comments carry the configuration so the
/// file is self-describing.
pub fn run_sweep(config: &SweepConfig, exec: Execution) -> Result<Table> {
    let (pts, lead, lead_values) = points(config);
    let styles = config.style.styles();
    let jobs: Vec<(f64, f64, f64, DissipatorStyle)> = pts
        .iter()
        .flat_map(|&(d, tl, tr)| styles.iter().map(move |&s| (d, tl, tr, s)))
        .collect();
    let currents = exec
        .map(&jobs, |&(d, tl, tr, s)| {
            let chain = SpinChainSpec { coupling_delta: d, ..config.model };
            TwoBathModel::new(chain, config.kappa, s)?.current(tl, tr)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;

    let mut columns: Vec<String> = lead.iter().map(|s| s.to_string()).collect();
    columns.extend(styles.iter().map(|s| format!("J_{}", StyleChoice::style_name(*s))));
    let mut table = Table::new(columns);
    table
        .comments
        .extend(config.to_config_string().lines().map(|l| format!("config: {l}")));
    for (k, lead) in lead_values.into_iter().enumerate() {
        let mut row = lead;
        row.extend_from_slice(&currents[k * styles.len()..(k + 1) * styles.len()]);
        table.push_row(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TEMPERATURE: &str = "
        model = ising
        coupling_delta = 0.5   # Δ/h
        style = both
        grid = temperature
        grid_start = 0.1
        grid_stop = 10
        grid_points = 4
        grid_spacing = log
        t_right = 0
    ";

    #[test]
    fn parses_with_defaults() {
        let c = SweepConfig::parse(TEMPERATURE).unwrap();
        assert_eq!(c.model, SpinChainSpec::ising(1.0, 0.5).unwrap());
        assert_eq!(c.kappa, 1.0);
        assert_eq!(c.style, StyleChoice::Both);
        assert!(c.output_path.is_none());
        let SweepGrid::Temperature { t_left, t_right } = c.grid else { panic!("wrong grid") };
        assert_eq!(t_right, 0.0);
        assert_eq!(t_left.values().len(), 4);
    }

    #[test]
    fn rejects_unknown_repeated_and_inapplicable_keys() {
        let unknown = format!("{TEMPERATURE}\ncolour = blue\n");
        assert!(matches!(SweepConfig::parse(&unknown), Err(Error::Config(m)) if m.contains("unknown key")));
        let repeated = format!("{TEMPERATURE}\nkappa = 1\nkappa = 2\n");
        assert!(SweepConfig::parse(&repeated).is_err());
        let inapplicable = format!("{TEMPERATURE}\nmean_temperature = 1\n");
        assert!(matches!(SweepConfig::parse(&inapplicable), Err(Error::Config(m)) if m.contains("does not apply")));
    }

    #[test]
    fn rejects_bad_grids() {
        let descending = TEMPERATURE.replace("grid_stop = 10", "grid_stop = 0.01");
        assert!(SweepConfig::parse(&descending).is_err());
        let single = TEMPERATURE.replace("grid_points = 4", "grid_points = 1");
        assert!(SweepConfig::parse(&single).is_err());
        let gradient = "model = ising\ncoupling_delta = 0.5\ngrid = gradient\ngrid_start = -2\ngrid_stop = 2\ngrid_points = 5\nmean_temperature = 0.5\n";
        assert!(SweepConfig::parse(gradient).is_err());
        let bad_model = TEMPERATURE.replace("model = ising", "model = xy\nn_spins = 9");
        assert!(SweepConfig::parse(&bad_model).is_err());
    }

    #[test]
    fn sweep_table_carries_its_config() {
        let c = SweepConfig::parse(TEMPERATURE).unwrap();
        let t = run_sweep(&c, Execution::Sequential).unwrap();
        assert_eq!(t.columns, vec!["T_L", "T_R", "J_global", "J_local"]);
        let back = Table::parse(&t.to_csv()).unwrap();
        let recovered = SweepConfig::from_table(&back).unwrap();
        assert_eq!(recovered, c);
        let grid = recovered.grid.range().values();
        for (row, g) in back.rows.iter().zip(&grid) {
            assert!((row[0] - g).abs() <= 1e-14 * g.abs());
        }
        assert!(back.rows.iter().all(|r| r[3].abs() < 1e-10));
    }

    #[test]
    fn coupling_and_gradient_sweeps() {
        let coupling = "model = ising\ngrid = coupling\ngrid_start = 0.1\ngrid_stop = 0.9\ngrid_points = 3\nt_left = 0\nt_right = 10\n";
        let t = run_sweep(&SweepConfig::parse(coupling).unwrap(), Execution::Parallel).unwrap();
        assert!(t.rows.iter().all(|r| r[1].abs() < 1e-12));
        let gradient = "model = xy\nn_spins = 3\ncoupling_delta = 0.5\ngrid = gradient\ngrid_start = -1\ngrid_stop = 1\ngrid_points = 3\nmean_temperature = 1\nstyle = local\n";
        let t = run_sweep(&SweepConfig::parse(gradient).unwrap(), Execution::Parallel).unwrap();
        assert_eq!(t.columns, vec!["delta_T", "T_L", "T_R", "J_local"]);
        assert!(t.rows[1][3].abs() < 1e-10);
        assert!(t.rows[2][3] > 0.0 && t.rows[0][3] < 0.0);
    }

    fn arb_config() -> impl Strategy<Value = SweepConfig> {
        let model = prop_oneof![
            (0.1f64..3.0, 0.0f64..2.0).prop_map(|(h, d)| SpinChainSpec::ising(h, d).unwrap()),
            (2usize..=6, 0.1f64..3.0, 0.0f64..2.0).prop_map(|(n, h, d)| SpinChainSpec::xy(n, h, d).unwrap()),
        ];
        let style = prop_oneof![Just(StyleChoice::Global), Just(StyleChoice::Local), Just(StyleChoice::Both)];
        let range = (1e-3f64..5.0, 0.1f64..5.0, 2usize..300, any::<bool>()).prop_map(|(a, w, n, log)| GridRange {
            start: a,
            stop: a + w,
            points: n,
            spacing: if log { Spacing::Log } else { Spacing::Linear },
        });
        let grid = prop_oneof![
            (range.clone(), 0.0f64..10.0).prop_map(|(r, t)| SweepGrid::Temperature { t_left: r, t_right: t }),
            (range.clone(), 0.0f64..10.0, 0.0f64..10.0).prop_map(|(r, a, b)| SweepGrid::Coupling { delta: r, t_left: a, t_right: b }),
            (range, 0.0f64..1.0).prop_map(|(r, f)| {
                let mean = r.start.abs().max(r.stop.abs()) / 2.0 * (1.0 + f);
                SweepGrid::Gradient { delta_t: r, mean_temperature: mean }
            }),
        ];
        (model, style, 0.01f64..5.0, grid, any::<bool>()).prop_map(|(model, style, kappa, grid, out)| {
            let model = match grid {
                SweepGrid::Coupling { delta, .. } => SpinChainSpec { coupling_delta: delta.start, ..model },
                _ => model,
            };
            SweepConfig { model, style, kappa, grid, output_path: out.then(|| PathBuf::from("out/run.csv")) }
        })
    }

    proptest! {
        #[test]
        fn config_round_trips(c in arb_config()) {
            let back = SweepConfig::parse(&c.to_config_string()).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
