//! Scenario configuration: a JSON object whose keys can each be overridden
//! from the command line.

use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use rsl_core::qcore::{states, CMatrix, DensityMatrix, HermitianOperator};

use crate::CliError;

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "RSL_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Dephasing,
    DephasingNm,
    Depolarising,
    DepolarisingNm,
    Thermal,
    /// Unitary evolution under a user-supplied `hamiltonian`.
    Custom,
}

impl ScenarioKind {
    pub fn non_monotonic(self) -> bool {
        matches!(self, Self::DephasingNm | Self::DepolarisingNm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Incoherent,
    WernerSeparable,
    Gibbs,
    Fixed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FramingKind {
    #[default]
    None,
    /// Generation from `ρ₀`, which must be free.
    Generation,
    /// Degradation into the closest free state of `ρ_τ`, which must be reached.
    Degradation,
    /// Degradation towards the closest free state of `ρ_τ` without requiring
    /// the trajectory to reach it.
    DegradationNearFree,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    #[default]
    Increment,
    Trapezoid,
    Simpson,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrientationKind {
    #[default]
    Flipped,
    Literal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionKind {
    #[default]
    Standard,
    AsWritten,
}

/// A matrix entry: a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for Entry {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

/// A named state (`bell`, `plus-y`, `werner(p)`, `diag(a, b, ...)`,
/// `basis(i)`, `maximally-mixed`, `gibbs`) or a matrix literal given as rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Matrix(Vec<Vec<Entry>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub k: Option<f64>,
    /// Werner mixing parameter; shorthand for `initial_state = werner(p)`.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub hamiltonian: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub initial_state: Option<StateSpec>,
    #[serde(default)]
    pub oracle: Option<OracleKind>,
    /// Free state of the `fixed` oracle.
    #[serde(default)]
    pub free_state: Option<StateSpec>,
    #[serde(default)]
    pub framing: FramingKind,
    pub tau_list: Vec<f64>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_floor")]
    pub floor: f64,
    #[serde(default)]
    pub quadrature: QuadratureKind,
    #[serde(default)]
    pub orientation: OrientationKind,
    #[serde(default)]
    pub occupation: ConventionKind,
    #[serde(default)]
    pub dissipator: ConventionKind,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Compare the oracle's closest free state of ρ₀ against a numerical
    /// separable-state search (two-qubit states only).
    #[serde(default)]
    pub separable_check: bool,
}

fn default_grid_points() -> usize {
    1000
}
fn default_epsilon() -> f64 {
    1e-6
}
fn default_floor() -> f64 {
    1e-12
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

impl ScenarioConfig {
    /// Parses a JSON document, applies `--key value` overrides and the
    /// output-directory environment override, then validates.
    pub fn load(
        text: &str,
        overrides: &[(String, String)],
        env_output_dir: Option<&Path>,
    ) -> Result<Self, CliError> {
        let mut value: Value =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config is not valid JSON: {e}")))?;
        let Value::Object(map) = &mut value else {
            return Err(CliError::Usage("config must be a JSON object".into()));
        };
        apply_overrides(map, overrides);
        let mut cfg: Self =
            serde_json::from_value(value).map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
        if let Some(dir) = env_output_dir {
            cfg.output_dir = dir.to_path_buf();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(
        path: &Path,
        overrides: &[(String, String)],
        env_output_dir: Option<&Path>,
    ) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::load(&text, overrides, env_output_dir)
    }

    /// Field-level consistency checks; every problem is reported at once.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut errs = Vec::new();
        let kind = self.scenario;
        let mut need = |name: &str, v: Option<f64>, wanted: bool| match (v, wanted) {
            (None, true) => errs.push(format!("{name}: required for scenario {kind:?}")),
            (Some(_), false) => errs.push(format!("{name}: not used by scenario {kind:?}")),
            (Some(x), true) if !(x > 0.0 && x.is_finite()) => {
                errs.push(format!("{name}: must be positive and finite, got {x}"))
            }
            _ => {}
        };
        need("gamma", self.gamma, kind != ScenarioKind::Custom);
        need("k", self.k, kind.non_monotonic());
        need("omega", self.omega, kind == ScenarioKind::Thermal);
        need("beta", self.beta, kind == ScenarioKind::Thermal);
        if let (Some(g), Some(k)) = (self.gamma, self.k) {
            if k <= g {
                errs.push(format!("k: must exceed gamma ({k} <= {g})"));
            }
        }
        match (&self.hamiltonian, kind) {
            (None, ScenarioKind::Custom) => errs.push("hamiltonian: required for scenario Custom".into()),
            (Some(_), k) if k != ScenarioKind::Custom => {
                errs.push(format!("hamiltonian: only used by scenario Custom, not {k:?}"))
            }
            _ => {}
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                errs.push(format!("p: must lie in [0, 1], got {p}"));
            }
            if self.initial_state.is_some() {
                errs.push("p: conflicts with initial_state".into());
            }
        }
        if self.p.is_none() && self.initial_state.is_none() && kind != ScenarioKind::Thermal {
            errs.push("initial_state: required (or give p for a Werner state)".into());
        }
        if self.tau_list.is_empty() {
            errs.push("tau_list: must not be empty".into());
        }
        if let Some(t) = self.tau_list.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            errs.push(format!("tau_list: entries must be positive and finite, got {t}"));
        }
        if self.grid_points < 2 {
            errs.push(format!("grid_points: need at least 2, got {}", self.grid_points));
        }
        if !(0.0..=1e-3).contains(&self.epsilon) {
            errs.push(format!("epsilon: must lie in [0, 1e-3], got {}", self.epsilon));
        }
        if !(self.floor > 0.0 && self.floor <= 1e-6) {
            errs.push(format!("floor: must lie in (0, 1e-6], got {}", self.floor));
        }
        match (self.oracle, &self.free_state) {
            (Some(OracleKind::Fixed), None) => errs.push("free_state: required by the fixed oracle".into()),
            (Some(o), Some(_)) if o != OracleKind::Fixed => {
                errs.push("free_state: only used by the fixed oracle".into())
            }
            (None, Some(_)) => errs.push("free_state: only used by the fixed oracle".into()),
            _ => {}
        }
        if self.oracle == Some(OracleKind::Gibbs) && kind != ScenarioKind::Thermal {
            errs.push("oracle: gibbs needs the thermal scenario's omega and beta".into());
        }
        if kind != ScenarioKind::Thermal
            && (self.occupation != ConventionKind::Standard || self.dissipator != ConventionKind::Standard)
        {
            errs.push("occupation/dissipator: only used by the thermal scenario".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(errs.join("; ")))
        }
    }

    /// The initial state, defaulting to `(I + σ_y)/2` for the thermal scenario.
    pub fn initial_state(&self) -> Result<DensityMatrix<f64>, CliError> {
        match (&self.initial_state, self.p) {
            (Some(s), _) => self.resolve_state(s, "initial_state"),
            (None, Some(p)) => states::werner(p).map_err(|e| CliError::Usage(format!("p: {e}"))),
            (None, None) => Ok(states::plus_y()),
        }
    }

    pub fn free_state(&self) -> Result<Option<DensityMatrix<f64>>, CliError> {
        self.free_state
            .as_ref()
            .map(|s| self.resolve_state(s, "free_state"))
            .transpose()
    }

    pub fn hamiltonian(&self) -> Result<Option<HermitianOperator<f64>>, CliError> {
        self.hamiltonian
            .as_ref()
            .map(|rows| {
                let m = matrix_from_rows(rows).map_err(|e| CliError::Usage(format!("hamiltonian: {e}")))?;
                HermitianOperator::new(m).map_err(|e| CliError::Usage(format!("hamiltonian: {e}")))
            })
            .transpose()
    }

    fn resolve_state(&self, spec: &StateSpec, field: &str) -> Result<DensityMatrix<f64>, CliError> {
        let usage = |msg: String| CliError::Usage(format!("{field}: {msg}"));
        match spec {
            StateSpec::Matrix(rows) => {
                let m = matrix_from_rows(rows).map_err(usage)?;
                let dims = local_dims(m.dim());
                DensityMatrix::new(m, dims).map_err(|e| usage(e.to_string()))
            }
            StateSpec::Named(name) => {
                let name = name.trim();
                let (head, arg) = split_call(name).map_err(usage)?;
                let nums = || -> Result<Vec<f64>, CliError> {
                    arg.ok_or_else(|| usage(format!("{head} needs arguments")))?
                        .split(',')
                        .map(|x| x.trim().parse::<f64>().map_err(|e| usage(format!("{x:?}: {e}"))))
                        .collect()
                };
                match head {
                    "bell" => Ok(states::bell_phi_plus()),
                    "plus-y" => Ok(states::plus_y()),
                    "maximally-mixed" => Ok(DensityMatrix::maximally_mixed(vec![2, 2])),
                    "gibbs" => match (self.omega, self.beta) {
                        (Some(w), Some(b)) => Ok(states::gibbs(w, b)),
                        _ => Err(usage("gibbs needs omega and beta".into())),
                    },
                    "werner" => match nums()?.as_slice() {
                        [p] => states::werner(*p).map_err(|e| usage(e.to_string())),
                        _ => Err(usage("werner takes one argument".into())),
                    },
                    "diag" => {
                        let p = nums()?;
                        let dims = local_dims(p.len());
                        DensityMatrix::from_populations(&p, dims).map_err(|e| usage(e.to_string()))
                    }
                    "basis" => match nums()?.as_slice() {
                        [i] if *i >= 0.0 && i.fract() == 0.0 => {
                            states::basis_state(&[2, 2], *i as usize).map_err(|e| usage(e.to_string()))
                        }
                        _ => Err(usage("basis takes one index in 0..4".into())),
                    },
                    other => Err(usage(format!("unknown state {other:?}"))),
                }
            }
        }
    }
}

fn split_call(s: &str) -> Result<(&str, Option<&str>), String> {
    match s.find('(') {
        None => Ok((s, None)),
        Some(i) if s.ends_with(')') => Ok((s[..i].trim(), Some(&s[i + 1..s.len() - 1]))),
        Some(_) => Err(format!("malformed state {s:?}")),
    }
}

/// Two qubits for dimension 4, one qubit for 2, a single system otherwise.
fn local_dims(dim: usize) -> Vec<usize> {
    match dim {
        4 => vec![2, 2],
        d => vec![d],
    }
}

fn matrix_from_rows(rows: &[Vec<Entry>]) -> Result<CMatrix<f64>, String> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err("matrix must be square and non-empty".into());
    }
    let data = rows
        .iter()
        .flatten()
        .map(|e| match *e {
            Entry::Real(x) => Complex::new(x, 0.0),
            Entry::Complex([re, im]) => Complex::new(re, im),
        })
        .collect();
    CMatrix::from_vec(n, data).ok_or_else(|| "matrix must be square".into())
}

/// Applies `--key value` pairs. Values are parsed as JSON where possible
/// and kept as strings otherwise, so `--scenario thermal` and
/// `--tau_list [0.5,1]` both work. Dashes in keys map to underscores.
fn apply_overrides(map: &mut Map<String, Value>, overrides: &[(String, String)]) {
    for (key, raw) in overrides {
        let key = key.trim_start_matches('-').replace('-', "_");
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        map.insert(key, value);
    }
}

/// Splits `--key value --key2 value2` into pairs.
pub fn parse_override_args(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(key) = it.next() {
        let Some(name) = key.strip_prefix("--") else {
            return Err(CliError::Usage(format!("expected --<key>, found {key:?}")));
        };
        if let Some((k, v)) = name.split_once('=') {
            out.push((k.to_string(), v.to_string()));
            continue;
        }
        let value = it
            .next()
            .ok_or_else(|| CliError::Usage(format!("--{name} needs a value")))?;
        out.push((name.to_string(), value.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<ScenarioConfig, CliError> {
        ScenarioConfig::load(text, &[], None)
    }

    #[test]
    fn minimal_dephasing_config() {
        let cfg = load(r#"{"scenario": "dephasing", "gamma": 1, "p": 0.5, "tau_list": [0.5, 1, 2]}"#).unwrap();
        assert_eq!(cfg.grid_points, 1000);
        assert_eq!(cfg.epsilon, 1e-6);
        assert_eq!(cfg.floor, 1e-12);
        assert_eq!(cfg.initial_state().unwrap(), states::werner(0.5).unwrap());
    }

    #[test]
    fn unknown_scenario_and_keys_are_rejected() {
        let e = load(r#"{"scenario": "teleport", "gamma": 1, "tau_list": [1]}"#).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
        let e = load(r#"{"scenario": "dephasing", "gamma": 1, "p": 0.5, "tau_list": [1], "gama": 2}"#).unwrap_err();
        assert!(e.to_string().contains("gama"));
    }

    #[test]
    fn consistency_diagnostics_name_the_fields() {
        let e = load(r#"{"scenario": "dephasing-nm", "gamma": 1, "omega": 4, "p": 0.5, "tau_list": []}"#)
            .unwrap_err()
            .to_string();
        for field in ["k:", "omega:", "tau_list:"] {
            assert!(e.contains(field), "{e}");
        }
        let e = load(r#"{"scenario": "depolarising-nm", "gamma": 1, "k": 0.5, "p": 0.5, "tau_list": [1]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("must exceed gamma"));
    }

    #[test]
    fn overrides_and_environment() {
        let text = r#"{"scenario": "dephasing", "gamma": 1, "p": 0.5, "tau_list": [1], "output_dir": "a"}"#;
        let o = parse_override_args(&[
            "--gamma".into(),
            "0.1".into(),
            "--tau-list".into(),
            "[2, 3]".into(),
            "--output_dir=b".into(),
        ])
        .unwrap();
        let cfg = ScenarioConfig::load(text, &o, None).unwrap();
        assert_eq!(cfg.gamma, Some(0.1));
        assert_eq!(cfg.tau_list, vec![2.0, 3.0]);
        assert_eq!(cfg.output_dir, PathBuf::from("b"));
        let cfg = ScenarioConfig::load(text, &o, Some(Path::new("c"))).unwrap();
        assert_eq!(cfg.output_dir, PathBuf::from("c"));
        assert!(parse_override_args(&["gamma".into()]).is_err());
        assert!(parse_override_args(&["--gamma".into()]).is_err());
    }

    #[test]
    fn state_descriptors() {
        let base = r#"{"scenario": "thermal", "gamma": 2, "omega": 4, "beta": 0.2, "tau_list": [1]"#;
        let with = |s: &str| load(&format!("{base}, \"initial_state\": {s}}}")).unwrap().initial_state().unwrap();
        assert_eq!(with("\"plus-y\""), states::plus_y());
        assert_eq!(with("\"gibbs\""), states::gibbs(4.0, 0.2));
        let d = with("\"diag(0.9, 0.1)\"");
        assert_eq!(d.matrix()[(0, 0)].re, 0.9);
        let m = with("[[0.5, [0, -0.5]], [[0, 0.5], 0.5]]");
        assert_eq!(m, states::plus_y());
        let thermal = load(&format!("{base}}}")).unwrap();
        assert_eq!(thermal.initial_state().unwrap(), states::plus_y());
        let bad = load(&format!("{base}, \"initial_state\": \"diag(0.9, 0.2)\"}}")).unwrap();
        assert!(bad.initial_state().is_err());
        let bad = load(&format!("{base}, \"initial_state\": \"ghz\"}}")).unwrap();
        assert!(bad.initial_state().is_err());
    }

    #[test]
    fn custom_scenario_needs_a_hamiltonian() {
        assert!(load(r#"{"scenario": "custom", "initial_state": "bell", "tau_list": [1]}"#).is_err());
        let cfg = load(
            r#"{"scenario": "custom", "initial_state": "basis(0)", "tau_list": [1],
                "hamiltonian": [[0,0,0,1],[0,0,1,0],[0,1,0,0],[1,0,0,0]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.hamiltonian().unwrap().unwrap().dim(), 4);
    }
}
