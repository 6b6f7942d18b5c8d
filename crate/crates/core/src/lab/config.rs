use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::LabError;
use crate::density_engine::{ErrorBudget, DEFAULT_TRUNCATION};
use crate::ec_reduction::{parse_rational, CurveSpec, RationalPoint, MAX_PRIME};
use crate::galois_model::{CongruenceCondition, GenericImageModel};
use crate::prime_engine::SQUAREFREE_MAX_LIMIT;

pub const DEFAULT_PROBE_BUDGET: usize = 3_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub a: i64,
    pub b: i64,
    /// Each point as `"x,y"` with rational coordinates.
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub conductor_support: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionConfig {
    pub f: u64,
    /// `None` admits every unit modulo `f`.
    #[serde(default)]
    pub residues: Option<Vec<u64>>,
}

impl Default for ConditionConfig {
    fn default() -> Self {
        ConditionConfig { f: 1, residues: None }
    }
}

/// Budget constants as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    #[serde(default)]
    pub aux: Vec<(String, String)>,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { alpha: "3/2".into(), beta: "2".into(), gamma: "0".into(), aux: vec![("1".into(), "1".into())] }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub curve: CurveConfig,
    pub condition: ConditionConfig,
    pub x_limit: u64,
    /// Empty means powers of ten up to `x_limit`, then `x_limit` itself.
    pub checkpoints: Vec<u64>,
    pub truncation: u64,
    pub budget: BudgetConfig,
    pub degree_overrides: BTreeMap<u64, u64>,
    pub workers: usize,
    pub probe_budget: usize,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            curve: CurveConfig { a: -16, b: 16, points: Vec::new(), conductor_support: Vec::new() },
            condition: ConditionConfig::default(),
            x_limit: 1_000_000,
            checkpoints: Vec::new(),
            truncation: DEFAULT_TRUNCATION,
            budget: BudgetConfig::default(),
            degree_overrides: BTreeMap::new(),
            workers: 1,
            probe_budget: DEFAULT_PROBE_BUDGET,
            output: OutputConfig::default(),
        }
    }
}

/// The validated, typed form of a configuration.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub curve: CurveSpec,
    pub condition: CongruenceCondition,
    pub model: GenericImageModel,
    pub budget: ErrorBudget,
    pub x_limit: u64,
    pub checkpoints: Vec<u64>,
    pub truncation: u64,
    pub workers: usize,
    pub probe_budget: usize,
}

fn parse_fraction(s: &str, what: &str) -> Result<Rational64, LabError> {
    parse_rational(s).ok_or_else(|| LabError::Config(format!("cannot parse {what} = {s:?}")))
}

pub fn parse_point(s: &str) -> Result<RationalPoint, LabError> {
    let (x, y) = s.split_once(',').ok_or_else(|| LabError::Config(format!("point {s:?} is not \"x,y\"")))?;
    Ok(RationalPoint::affine(parse_fraction(x, "point x")?, parse_fraction(y, "point y")?))
}

/// Powers of ten up to `x_limit`, then `x_limit` if it is not one.
pub fn default_checkpoints(x_limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 10u64;
    while x <= x_limit {
        out.push(x);
        x = match x.checked_mul(10) {
            Some(v) => v,
            None => break,
        };
    }
    if out.last() != Some(&x_limit) {
        out.push(x_limit);
    }
    out
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<Experiment, LabError> {
        if self.x_limit > MAX_PRIME {
            return Err(LabError::Capacity(format!("x_limit {} exceeds {MAX_PRIME}", self.x_limit)));
        }
        if self.truncation > SQUAREFREE_MAX_LIMIT {
            return Err(LabError::Capacity(format!("truncation {} exceeds {SQUAREFREE_MAX_LIMIT}", self.truncation)));
        }
        if self.truncation == 0 {
            return Err(LabError::Config("truncation must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(LabError::Config("workers must be at least 1".into()));
        }
        let checkpoints =
            if self.checkpoints.is_empty() { default_checkpoints(self.x_limit) } else { self.checkpoints.clone() };
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Config("checkpoints must be strictly increasing".into()));
        }
        if checkpoints.last().is_some_and(|&c| c > self.x_limit) {
            return Err(LabError::Config("checkpoints must not exceed x_limit".into()));
        }
        let points = self.curve.points.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
        let curve = CurveSpec::new(self.curve.a, self.curve.b, points, &self.curve.conductor_support)
            .map_err(|e| LabError::Config(e.to_string()))?;
        let f = self.condition.f;
        let condition = match &self.condition.residues {
            None if f >= 1 => CongruenceCondition::full(f),
            None => return Err(LabError::Config("modulus must be at least 1".into())),
            Some(r) => CongruenceCondition::new(f, r.iter().copied()).map_err(|e| LabError::Config(e.to_string()))?,
        };
        let model = GenericImageModel::with_overrides(curve.points().len() as u32, self.degree_overrides.clone())
            .map_err(|e| LabError::Config(e.to_string()))?;
        let budget = ErrorBudget {
            alpha: parse_fraction(&self.budget.alpha, "alpha")?,
            beta: parse_fraction(&self.budget.beta, "beta")?,
            gamma: parse_fraction(&self.budget.gamma, "gamma")?,
            aux: self
                .budget
                .aux
                .iter()
                .map(|(a, b)| Ok((parse_fraction(a, "alpha_i")?, parse_fraction(b, "beta_i")?)))
                .collect::<Result<_, LabError>>()?,
        };
        budget.validate().map_err(|e| LabError::Config(e.to_string()))?;
        Ok(Experiment {
            curve,
            condition,
            model,
            budget,
            x_limit: self.x_limit,
            checkpoints,
            truncation: self.truncation,
            workers: self.workers,
            probe_budget: self.probe_budget,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let e = ExperimentConfig::default().validate().unwrap();
        assert_eq!(e.checkpoints, vec![10, 100, 1_000, 10_000, 100_000, 1_000_000]);
        assert!(e.condition.is_full());
    }

    #[test]
    fn checkpoint_defaults() {
        assert_eq!(default_checkpoints(2), vec![2]);
        assert_eq!(default_checkpoints(250), vec![10, 100, 250]);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = ExperimentConfig::default();
        c.checkpoints = vec![100, 10];
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
        let mut c = ExperimentConfig::default();
        c.checkpoints = vec![10, 10_000_000];
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
        let mut c = ExperimentConfig::default();
        c.condition = ConditionConfig { f: 4, residues: Some(vec![2]) };
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
        let mut c = ExperimentConfig::default();
        c.truncation = 0;
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
        let mut c = ExperimentConfig::default();
        c.x_limit = u64::MAX;
        assert!(matches!(c.validate(), Err(LabError::Capacity(_))));
        let mut c = ExperimentConfig::default();
        c.curve.points = vec!["1,2".into()];
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
        let mut c = ExperimentConfig::default();
        c.budget.alpha = "1/3".into();
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut c = ExperimentConfig::default();
        c.curve.points = vec!["0,4".into()];
        c.degree_overrides.insert(2, 2);
        let text = serde_json::to_string(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let partial: ExperimentConfig = serde_json::from_str(r#"{"x_limit": 500, "condition": {"f": 4, "residues": [3]}}"#).unwrap();
        assert_eq!(partial.x_limit, 500);
        assert_eq!(partial.truncation, DEFAULT_TRUNCATION);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
