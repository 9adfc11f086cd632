//! Scenario files: the JSON inputs of the `build`, `seleznev` and `greedy`
//! commands.

use serde::{Deserialize, Serialize};

use crate::compact::CompactSpec;
use crate::constructive::{BuildOptions, IndexSequence, RequirementSpec, SeleznevRequirement, TargetDescriptor};
use crate::error::{Error, Result};
use crate::series::{Complex, ToleranceConfig};

/// Optional knobs shared by every scenario kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_fit_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_halvings: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_override: Option<Complex>,
}

impl ScenarioOptions {
    pub fn build_options(&self) -> BuildOptions {
        let defaults = BuildOptions::default();
        BuildOptions {
            tol: self.tolerances.unwrap_or(defaults.tol),
            max_fit_degree: self.max_fit_degree.unwrap_or(defaults.max_fit_degree),
            max_halvings: self.max_halvings.unwrap_or(defaults.max_halvings),
            d_override: self.d_override,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalScenario {
    pub requirement: RequirementSpec,
    #[serde(rename = "f_on_L")]
    pub f_on_l: TargetDescriptor,
    /// Compact inside the domain where `f_on_L` is checked; defaults to `L`.
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<CompactSpec>,
    #[serde(rename = "F")]
    pub f: IndexSequence,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub options: ScenarioOptions,
}

impl UniversalScenario {
    pub fn j(&self) -> &CompactSpec {
        self.j.as_ref().unwrap_or(&self.requirement.l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeleznevScenario {
    pub prefix: Vec<Complex>,
    pub requirement: SeleznevRequirement,
    #[serde(rename = "F")]
    pub f: IndexSequence,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub options: ScenarioOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyScenario {
    pub prefix: Vec<Complex>,
    pub schedule: Vec<SeleznevRequirement>,
    #[serde(rename = "F")]
    pub f: IndexSequence,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub options: ScenarioOptions,
}

/// Parses a scenario, reporting malformed input as a schema error.
pub fn parse<T: for<'de> Deserialize<'de>>(value: &serde_json::Value) -> Result<T> {
    T::deserialize(value).map_err(|e| Error::Schema(e.to_string()))
}
