use serde::{Deserialize, Serialize};

use super::{digest_of, load_catalog, read_text, Outputs, SimulateArgs};
use crate::coverage::{
    parse_distance_range, scenario_compare, write_rate_csv, GainReductionMode, SimulationPlan,
    SystemConfig,
};
use crate::error::{Error, Result};

const DEFAULT_DISTANCES: &str = "5:300:5";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum DistanceSpec {
    Range(String),
    List(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanSection {
    distances: Option<DistanceSpec>,
    links_per_distance: Option<usize>,
    coverage_quantile: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFile {
    #[serde(default)]
    plan: PlanSection,
    system: Vec<SystemConfig>,
}

#[derive(Debug, Serialize)]
struct EffectiveRun<'a> {
    systems: &'a [SystemConfig],
    plan: &'a SimulationPlan,
}

/// Resolves the config file and flag overrides into systems and a plan.
fn resolve(a: &SimulateArgs) -> Result<(Vec<SystemConfig>, SimulationPlan)> {
    let (mut systems, section) = match &a.config {
        Some(p) => {
            let f: SimulateFile = toml::from_str(&read_text(p)?)
                .map_err(|e| Error::Config(format!("{}: {}", p.display(), e.message())))?;
            (f.system, f.plan)
        }
        None => (
            vec![SystemConfig::reference_28ghz("same_street")],
            PlanSection::default(),
        ),
    };
    if systems.is_empty() {
        return Err(Error::Config("no [[system]] tables".into()));
    }
    if let Some(m) = &a.model {
        for s in &mut systems {
            s.pathloss_model = m.clone();
        }
    }
    if let Some(mode) = &a.mode {
        let modes: Vec<GainReductionMode> = if mode == "all" {
            GainReductionMode::ALL.to_vec()
        } else {
            vec![mode.parse()?]
        };
        systems = systems
            .iter()
            .flat_map(|s| modes.iter().map(|&m| s.clone().with_mode(m)))
            .collect();
    }
    for s in &systems {
        s.validate()?;
    }

    let distances_m = match (&a.distances, section.distances) {
        (Some(s), _) => parse_distance_range(s)?,
        (None, Some(DistanceSpec::Range(s))) => parse_distance_range(&s)?,
        (None, Some(DistanceSpec::List(v))) => v,
        (None, None) => parse_distance_range(DEFAULT_DISTANCES)?,
    };
    let mut plan = SimulationPlan::new(distances_m, a.seed)?;
    if let Some(n) = a.links.or(section.links_per_distance) {
        plan.links_per_distance = n;
    }
    if let Some(q) = a.quantile.or(section.coverage_quantile) {
        plan.coverage_quantile = q;
    }
    plan.validate()?;
    Ok((systems, plan))
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let (systems, plan) = resolve(&a)?;
    let catalog = load_catalog(a.catalog.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let rows = pool.install(|| scenario_compare(&systems, &catalog, &plan))?;

    let mut out = Outputs::new();
    out.write_with(&a.output, |w| write_rate_csv(w, &rows))?;
    let inputs = a.config.iter().chain(&a.catalog).cloned().collect();
    let digest = digest_of(&EffectiveRun {
        systems: &systems,
        plan: &plan,
    })?;
    out.commit(&a.output, "simulate", inputs, digest, Some(a.seed))
}
