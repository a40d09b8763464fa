//! Line-based run configuration: `[section]` headers, `key = value` pairs, `#` comments.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::solvers::{make_initial_state, IcKind, IcTarget, InitialConditionSpec, InitialState, SimulationConfig};
use crate::state::Parameters;

pub const DEFAULT_NX: usize = 100;
pub const DEFAULT_T_FINAL: f64 = 10.0;
pub const DEFAULT_EPS_LIST: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_BURN_IN: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub nx: usize,
    pub dt: f64,
    pub t_final: f64,
    pub record_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcSection {
    pub u0: IcKind,
    pub u1: IcKind,
    pub p0: IcKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSection {
    pub eps_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub burn_in: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Parameters,
    pub grid: GridSection,
    pub ic: IcSection,
    pub experiment: ExperimentSection,
}

impl RunConfig {
    pub fn spatial_grid(&self) -> Result<SpatialGrid> {
        SpatialGrid::new(self.grid.nx)
    }

    pub fn simulation_config(&self) -> Result<SimulationConfig> {
        SimulationConfig::new(
            self.params,
            self.spatial_grid()?,
            self.grid.dt,
            self.grid.t_final,
            self.grid.record_stride,
        )
    }

    pub fn initial_state(&self, g: &SpatialGrid) -> Result<InitialState> {
        make_initial_state(
            &[
                InitialConditionSpec::new(IcTarget::U0, self.ic.u0.clone()),
                InitialConditionSpec::new(IcTarget::U1, self.ic.u1.clone()),
                InitialConditionSpec::new(IcTarget::P0, self.ic.p0.clone()),
            ],
            g,
        )
    }
}

const SECTIONS: [(&str, &[&str]); 4] = [
    ("params", &["a", "b", "c", "d", "epsilon", "mu"]),
    ("grid", &["nx", "dt", "t_final", "record_stride"]),
    ("ic", &["u0", "u1", "p0"]),
    ("experiment", &["eps_list", "trials", "seed", "burn_in"]),
];

/// Raw values keyed by (section, key), with their line numbers.
struct Entries(BTreeMap<(&'static str, &'static str), (usize, String)>);

impl Entries {
    fn get(&self, section: &str, key: &str) -> Option<&(usize, String)> {
        self.0
            .iter()
            .find(|((s, k), _)| *s == section && *k == key)
            .map(|(_, v)| v)
    }

    fn number<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::Config(format!("line {line}: malformed number for `{key}`: {raw:?}"))
            }),
        }
    }

    fn float(&self, section: &str, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.number(section, key)?;
        if let Some(x) = v {
            if !x.is_finite() {
                let line = self.get(section, key).map_or(0, |e| e.0);
                return Err(Error::Config(format!("line {line}: `{key}` must be finite")));
            }
        }
        Ok(v)
    }

    fn required(&self, section: &str, key: &str) -> Result<f64> {
        self.float(section, key)?
            .ok_or_else(|| Error::Config(format!("missing key `{key}` in [{section}]")))
    }

    fn line(&self, section: &str, key: &str) -> usize {
        self.get(section, key).map_or(0, |e| e.0)
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut out = BTreeMap::new();
    let mut section: Option<(&'static str, &'static [&'static str])> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            section = Some(
                SECTIONS
                    .iter()
                    .find(|(s, _)| *s == name)
                    .copied()
                    .ok_or_else(|| Error::Config(format!("line {line_no}: unknown section [{name}]")))?,
            );
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {line_no}: expected `key = value`")))?;
        let (key, value) = (key.trim(), value.trim());
        let (sname, keys) =
            section.ok_or_else(|| Error::Config(format!("line {line_no}: `{key}` outside any section")))?;
        let key = keys
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| Error::Config(format!("line {line_no}: unknown key `{key}` in [{sname}]")))?;
        if out.insert((sname, *key), (line_no, value.to_string())).is_some() {
            return Err(Error::Config(format!("line {line_no}: duplicate key `{key}` in [{sname}]")));
        }
    }
    Ok(Entries(out))
}

fn as_config(line: usize, e: Error) -> Error {
    match e {
        Error::Config(m) if line > 0 => Error::Config(format!("line {line}: {m}")),
        Error::Config(m) => Error::Config(m),
        other if line > 0 => Error::Config(format!("line {line}: {other}")),
        other => Error::Config(other.to_string()),
    }
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let e = tokenize(text)?;
    let p = Parameters {
        a: e.required("params", "a")?,
        b: e.required("params", "b")?,
        c: e.required("params", "c")?,
        d: e.required("params", "d")?,
        epsilon: e.required("params", "epsilon")?,
        mu: e.required("params", "mu")?,
    };
    if p.epsilon <= 0.0 {
        return Err(Error::Config(format!(
            "line {}: epsilon must be positive, got {}",
            e.line("params", "epsilon"),
            p.epsilon
        )));
    }
    if p.mu <= 0.0 {
        return Err(Error::Config(format!(
            "line {}: mu must be positive, got {}",
            e.line("params", "mu"),
            p.mu
        )));
    }

    let nx = e.number::<usize>("grid", "nx")?.unwrap_or(DEFAULT_NX);
    SpatialGrid::new(nx).map_err(|err| as_config(e.line("grid", "nx"), err))?;
    let grid = GridSection {
        nx,
        dt: e.float("grid", "dt")?.unwrap_or(0.5 / nx as f64),
        t_final: e.float("grid", "t_final")?.unwrap_or(DEFAULT_T_FINAL),
        record_stride: e.number("grid", "record_stride")?.unwrap_or(1),
    };
    for (key, ok) in [
        ("dt", grid.dt > 0.0),
        ("t_final", grid.t_final > 0.0),
        ("record_stride", grid.record_stride >= 1),
    ] {
        if !ok {
            return Err(Error::Config(format!(
                "line {}: `{key}` must be positive",
                e.line("grid", key)
            )));
        }
    }

    let preset = |key: &str, default: &str| -> Result<IcKind> {
        match e.get("ic", key) {
            None => default.parse(),
            Some((line, raw)) => raw.parse().map_err(|err| as_config(*line, err)),
        }
    };
    let ic = IcSection {
        u0: preset("u0", "sine 1")?,
        u1: preset("u1", "zero")?,
        p0: preset("p0", "zero")?,
    };

    let eps_list = match e.get("experiment", "eps_list") {
        None => DEFAULT_EPS_LIST.to_vec(),
        Some((line, raw)) => parse_eps_list(raw).map_err(|err| as_config(*line, err))?,
    };
    let experiment = ExperimentSection {
        eps_list,
        trials: e.number("experiment", "trials")?.unwrap_or(DEFAULT_TRIALS),
        seed: e.number("experiment", "seed")?.unwrap_or(0),
        burn_in: e.float("experiment", "burn_in")?.unwrap_or(DEFAULT_BURN_IN),
    };
    if experiment.trials == 0 {
        return Err(Error::Config(format!(
            "line {}: `trials` must be at least 1",
            e.line("experiment", "trials")
        )));
    }
    if !(0.0..1.0).contains(&experiment.burn_in) {
        return Err(Error::Config(format!(
            "line {}: `burn_in` must lie in [0, 1)",
            e.line("experiment", "burn_in")
        )));
    }
    Ok(RunConfig {
        params: p,
        grid,
        ic,
        experiment,
    })
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| Error::Config(format!("cannot read {}: {err}", path.display())))?;
    parse_config_str(&text)
}

/// Comma-separated positive numbers.
pub fn parse_eps_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            let s = s.trim();
            match s.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
                _ => Err(Error::Config(format!("invalid epsilon value {s:?}"))),
            }
        })
        .collect()
}
