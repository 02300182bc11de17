use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    csv_error, digest_of, load_catalog, read_text, FitArgs, Outputs, SynthArgs, TworayArgs,
};
use crate::coverage::parse_distance_range;
use crate::error::{Error, Result};
use crate::pathloss::{
    fit_power_law, friis_path_gain, two_ray_path_gain, CatalogEntry, FitDataset, ModelCatalog,
    PathGainModel, TwoRayGeometry,
};
use crate::scan::{
    synthesize_scan_record, write_scan_dataset, ScanFormat, SceneTruth, SounderConfig,
};

/// Default number of model-drawn points, the size of the same-street set.
const DEFAULT_MODEL_POINTS: usize = 1764;

#[derive(Debug, Deserialize)]
struct PointRow {
    distance_m: f64,
    path_gain_db: f64,
    #[serde(default)]
    scenario: Option<String>,
}

pub fn fit(a: FitArgs) -> Result<()> {
    let mut rdr = csv::Reader::from_path(&a.input).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(&a.input, io),
        other => Error::Serialization(format!("{other:?}")),
    })?;
    let mut points = Vec::new();
    for (i, row) in rdr.deserialize::<PointRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            row: i + 2,
            message: e.to_string(),
        })?;
        if let Some(want) = &a.scenario {
            if row.scenario.as_deref() != Some(want.as_str()) {
                continue;
            }
        }
        points.push((row.distance_m, row.path_gain_db));
    }
    let data = FitDataset::new(a.name.clone(), points)?;
    let model = fit_power_law(&data, a.fixed_intercept)?;

    let (lo, hi) = data
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    let source = match a.fixed_intercept {
        Some(i) => format!("fit of {} points, intercept fixed at {i} dB", data.len()),
        None => format!("fit of {} points", data.len()),
    };
    let mut catalog = ModelCatalog::empty();
    catalog.insert(
        a.name.clone(),
        CatalogEntry {
            model: PathGainModel::PowerLaw(model),
            valid_range_m: [lo, hi],
            source,
        },
    );
    let toml_text = catalog.to_toml_string()?;

    let residuals = a.residuals.clone().unwrap_or_else(|| {
        let stem = a.output.file_stem().unwrap_or_default().to_string_lossy();
        a.output.with_file_name(format!("{stem}.residuals.csv"))
    });
    let mut out = Outputs::new();
    out.write_bytes(&a.output, toml_text.as_bytes())?;
    out.write_with(&residuals, |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["distance_m", "path_gain_db", "predicted_db", "residual_db"])
            .map_err(csv_error)?;
        for &(d, g) in &data.points {
            let p = model.mean_db(d);
            c.write_record([
                d.to_string(),
                g.to_string(),
                p.to_string(),
                (g - p).to_string(),
            ])
            .map_err(csv_error)?;
        }
        c.flush().map_err(|e| Error::io(&residuals, e))
    })?;
    let digest = digest_of(&(&a.name, a.fixed_intercept, &a.scenario))?;
    out.commit(&a.output, "fit", vec![a.input.clone()], digest, None)
}

#[derive(Debug, Deserialize)]
struct SceneList {
    scene: Vec<SceneTruth>,
}

fn parse_scenes(text: &str) -> Result<Vec<SceneTruth>> {
    let table: toml::Table =
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    let cfg = |e: toml::de::Error| Error::Config(e.message().to_string());
    if table.contains_key("scene") {
        Ok(toml::from_str::<SceneList>(text).map_err(cfg)?.scene)
    } else {
        Ok(vec![toml::from_str::<SceneTruth>(text).map_err(cfg)?])
    }
}

pub fn synth(a: SynthArgs) -> Result<()> {
    let mut inputs: Vec<_> = a
        .config
        .iter()
        .chain(&a.sounder)
        .chain(&a.catalog)
        .cloned()
        .collect();
    inputs.dedup();
    let mut out = Outputs::new();
    let digest;
    if let Some(name) = &a.model {
        let catalog = load_catalog(a.catalog.as_deref())?;
        let entry = catalog.get(name)?.clone();
        let base = match &a.distances {
            Some(s) => parse_distance_range(s)?,
            None => FitDataset::route_distances(a.points.unwrap_or(DEFAULT_MODEL_POINTS)),
        };
        let n = a.points.unwrap_or(base.len());
        if n == 0 {
            return Err(Error::InvalidArgument("--points must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let points = base
            .iter()
            .cycle()
            .take(n)
            .map(|&d| Ok((d, entry.model.sample_with(d, &mut rng)?)))
            .collect::<Result<Vec<_>>>()?;
        out.write_with(&a.output, |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["distance_m", "path_gain_db", "model"])
                .map_err(csv_error)?;
            for (d, g) in &points {
                c.write_record([d.to_string(), g.to_string(), name.clone()])
                    .map_err(csv_error)?;
            }
            c.flush().map_err(|e| Error::io(&a.output, e))
        })?;
        digest = digest_of(&(&entry, &a.distances, n))?;
    } else {
        let path = a
            .config
            .as_ref()
            .expect("clap requires --config without --model");
        let mut scenes = parse_scenes(&read_text(path)?)?;
        let sounder = match &a.sounder {
            Some(p) => SounderConfig::from_toml_str(&read_text(p)?)?,
            None => SounderConfig::reference_28ghz(),
        };
        for (i, s) in scenes.iter_mut().enumerate() {
            s.rng_seed = a.seed.wrapping_add(i as u64);
        }
        let records = scenes
            .iter()
            .map(|s| synthesize_scan_record(s, &sounder))
            .collect::<Result<Vec<_>>>()?;
        let format = ScanFormat::from_path(&a.output);
        out.write_with(&a.output, |w| write_scan_dataset(w, &records, format))?;
        digest = digest_of(&(&scenes, &sounder))?;
    }
    out.commit(&a.output, "synth", inputs, digest, Some(a.seed))
}

#[derive(Debug, Serialize)]
struct TworayRun<'a> {
    geometry: &'a TwoRayGeometry,
    distances: &'a str,
}

pub fn tworay(a: TworayArgs) -> Result<()> {
    let mut geom = match &a.config {
        Some(p) => toml::from_str::<TwoRayGeometry>(&read_text(p)?)
            .map_err(|e| Error::Config(e.message().to_string()))?,
        None => TwoRayGeometry::open_field_28ghz(),
    };
    if a.beams {
        geom = geom.with_horn_beams();
    }
    geom.validate()?;
    let distances = parse_distance_range(&a.distances)?;
    let rows = distances
        .iter()
        .map(|&d| {
            Ok((
                d,
                two_ray_path_gain(d, &geom)?,
                friis_path_gain(d, geom.freq_hz)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = Outputs::new();
    out.write_with(&a.output, |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["distance_m", "two_ray_db", "friis_db", "excess_db"])
            .map_err(csv_error)?;
        for (d, t, f) in &rows {
            c.write_record([
                d.to_string(),
                t.to_string(),
                f.to_string(),
                (t - f).to_string(),
            ])
            .map_err(csv_error)?;
        }
        c.flush().map_err(|e| Error::io(&a.output, e))
    })?;
    let digest = digest_of(&TworayRun {
        geometry: &geom,
        distances: &a.distances,
    })?;
    out.commit(
        &a.output,
        "tworay",
        a.config.iter().cloned().collect(),
        digest,
        None,
    )
}
