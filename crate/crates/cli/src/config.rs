//! Scenario configuration: a JSON document selecting a geometry, a set of
//! verification suites, sample counts, a seed and tolerance overrides.

use std::collections::BTreeMap;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use pseudogeo::Tolerances;

/// Suites understood by the runner. `frenet` and `wcurve` apply to curve
/// geometries (`curve:<name>`); the rest apply to charts.
pub const KNOWN_SUITES: &[&str] = &[
    "frenet",
    "wcurve",
    "extrinsic",
    "normal_sections",
    "prop31",
    "prop32",
    "prop33",
    "prop34",
    "lemma31",
    "thm33",
];

fn default_samples() -> usize {
    20
}

fn default_seed() -> u64 {
    1
}

/// One scenario: geometry + suites + sampling controls.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Catalog chart name (`sphere2`, `pseudo_sphere:n=2,r=1,c=1`, ...) or
    /// a reference curve (`curve:circle`).
    pub geometry: String,
    pub suites: Vec<String>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Per-name tolerance overrides, merged over the defaults.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let config: ScenarioConfig =
            serde_json::from_str(text).context("scenario config does not match the schema")?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        for suite in &self.suites {
            if !KNOWN_SUITES.contains(&suite.as_str()) {
                bail!("unknown suite '{suite}' (known: {})", KNOWN_SUITES.join(", "));
            }
        }
        if self.is_curve_geometry() {
            let name = self.curve_name().expect("curve geometry");
            pseudogeo::catalog::lookup_curve(name)
                .map_err(|e| anyhow::anyhow!("unknown curve geometry: {e}"))?;
            for suite in &self.suites {
                if !matches!(suite.as_str(), "frenet" | "wcurve") {
                    bail!("suite '{suite}' applies to charts; geometry '{}' is a curve", self.geometry);
                }
            }
        } else {
            pseudogeo::catalog::lookup(&self.geometry)
                .map_err(|e| anyhow::anyhow!("unknown geometry: {e}"))?;
            for suite in &self.suites {
                if matches!(suite.as_str(), "frenet" | "wcurve") {
                    bail!(
                        "suite '{suite}' applies to reference curves; use a 'curve:<name>' geometry"
                    );
                }
            }
        }
        if self.samples == 0 {
            bail!("samples must be positive");
        }
        let defaults = Tolerances::default();
        for key in self.tolerances.keys() {
            if apply_override(&mut defaults.clone(), key, 1.0).is_err() {
                bail!("unknown tolerance key '{key}'");
            }
        }
        Ok(())
    }

    pub fn is_curve_geometry(&self) -> bool {
        self.geometry.starts_with("curve:")
    }

    pub fn curve_name(&self) -> Option<&str> {
        self.geometry.strip_prefix("curve:")
    }

    /// Effective tolerances: defaults, overrides, then global scaling.
    pub fn tolerances(&self, tol_scale: f64) -> anyhow::Result<Tolerances> {
        let mut tols = Tolerances::default();
        for (key, value) in &self.tolerances {
            apply_override(&mut tols, key, *value)
                .map_err(|_| anyhow::anyhow!("unknown tolerance key '{key}'"))?;
        }
        Ok(tols.scaled(tol_scale))
    }
}

fn apply_override(tols: &mut Tolerances, key: &str, value: f64) -> Result<(), ()> {
    match key {
        "null" => tols.null = value,
        "rank" => tols.rank = value,
        "curvature" => tols.curvature = value,
        "constancy" => tols.constancy = value,
        "geodesic_flag" => tols.geodesic_flag = value,
        "planarity" => tols.planarity = value,
        "frenet_residual" => tols.frenet_residual = value,
        "w2_identity" => tols.w2_identity = value,
        "w3_identity" => tols.w3_identity = value,
        "section_order2" => tols.section_order2 = value,
        "section_order3" => tols.section_order3 = value,
        "section_order4" => tols.section_order4 = value,
        "shape_identity" => tols.shape_identity = value,
        "decomposition" => tols.decomposition = value,
        "isotropy_spread" => tols.isotropy_spread = value,
        "parallel_spread" => tols.parallel_spread = value,
        "duality" => tols.duality = value,
        "codazzi" => tols.codazzi = value,
        "normal_valued" => tols.normal_valued = value,
        "conservation" => tols.conservation = value,
        "intrinsic_w2" => tols.intrinsic_w2 = value,
        "umbilical" => tols.umbilical = value,
        "parallel_h" => tols.parallel_h = value,
        "newton" => tols.newton = value,
        _ => return Err(()),
    }
    Ok(())
}
