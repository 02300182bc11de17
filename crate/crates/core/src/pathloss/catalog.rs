//! Named path-gain models.
//!
//! A catalog file is TOML with one table per model:
//!
//! ```toml
//! [same_street]
//! kind = "power_law"
//! intercept_db = -45.1
//! slope = -4.06
//! sigma_db = 6.4
//! valid_range_m = [20.0, 200.0]
//! source = "28 GHz suburban same-street fit, 1764 links"
//! ```
//!
//! `kind = "umi_nlos"` entries take `freq_ghz` and `sigma_db` instead.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::free_space::{umi_nlos_path_loss, UMI_VALID_RANGE_M};
use super::power_law::PowerLawModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathGainModel {
    PowerLaw(PowerLawModel),
    /// UMi NLOS path loss with log-normal shadowing, as path gain.
    UmiNlos {
        freq_ghz: f64,
        sigma_db: f64,
    },
}

impl PathGainModel {
    pub fn mean_db(&self, d_m: f64) -> Result<f64> {
        if !(d_m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "distance must be positive, got {d_m}"
            )));
        }
        match self {
            PathGainModel::PowerLaw(m) => Ok(m.mean_db(d_m)),
            PathGainModel::UmiNlos { freq_ghz, .. } => Ok(-umi_nlos_path_loss(d_m, *freq_ghz)?),
        }
    }

    pub fn sigma_db(&self) -> f64 {
        match self {
            PathGainModel::PowerLaw(m) => m.sigma_db,
            PathGainModel::UmiNlos { sigma_db, .. } => *sigma_db,
        }
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, d_m: f64, rng: &mut R) -> Result<f64> {
        let z: f64 = rng.sample(StandardNormal);
        Ok(self.mean_db(d_m)? + self.sigma_db() * z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    #[serde(flatten)]
    pub model: PathGainModel,
    pub valid_range_m: [f64; 2],
    #[serde(default)]
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModelCatalog {
    entries: BTreeMap<String, CatalogEntry>,
}

fn power_law(
    intercept_db: f64,
    slope: f64,
    sigma_db: f64,
    ci: (f64, f64),
    n: usize,
    range: [f64; 2],
    source: &str,
) -> CatalogEntry {
    CatalogEntry {
        model: PathGainModel::PowerLaw(
            PowerLawModel::new(intercept_db, slope, sigma_db).with_ci(ci.0, ci.1, n),
        ),
        valid_range_m: range,
        source: source.to_string(),
    }
}

impl ModelCatalog {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Models fitted to the 28 GHz suburban campaign plus the 2 GHz UMi
    /// NLOS baseline.
    pub fn builtin() -> Self {
        let mut c = Self::empty();
        let street = [20.0, 200.0];
        c.insert(
            "same_street",
            power_law(
                -45.1,
                -4.06,
                6.4,
                (1.4, 0.08),
                1764,
                street,
                "28 GHz same-street (vegetation-blocked LOS), NJ + Chile combined",
            ),
        );
        c.insert(
            "other_street",
            power_law(
                -80.3,
                -3.13,
                4.8,
                (4.1, 0.21),
                180,
                street,
                "28 GHz other-street (NLOS across one block)",
            ),
        );
        c.insert(
            "visual_los",
            power_law(
                -61.4,
                -2.44,
                4.2,
                (0.0, 0.21),
                0,
                street,
                "28 GHz visual-LOS links, intercept fixed at Friis 1 m",
            ),
        );
        c.insert(
            "nj_only",
            power_law(
                -48.6,
                -3.87,
                6.0,
                (1.6, 0.09),
                1322,
                street,
                "28 GHz same-street, New Jersey subset",
            ),
        );
        c.insert(
            "chile_only",
            power_law(
                -37.8,
                -4.44,
                7.2,
                (2.8, 0.16),
                442,
                street,
                "28 GHz same-street, Chile subset",
            ),
        );
        c.insert(
            "umi_nlos_2ghz",
            CatalogEntry {
                model: PathGainModel::UmiNlos {
                    freq_ghz: 2.0,
                    sigma_db: 4.0,
                },
                valid_range_m: [UMI_VALID_RANGE_M.0, UMI_VALID_RANGE_M.1],
                source: "UMi NLOS, 2 GHz small-cell baseline".into(),
            },
        );
        c
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: CatalogEntry) {
        self.entries.insert(name.into(), entry);
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownModel(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CatalogEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds (or replaces) every entry of `other`.
    pub fn merge(&mut self, other: ModelCatalog) {
        self.entries.extend(other.entries);
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Built-ins overlaid with the entries of the file at `path`.
    pub fn builtin_with_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = Self::builtin();
        c.merge(Self::from_toml_str(&text)?);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_present() {
        let c = ModelCatalog::builtin();
        for name in [
            "same_street",
            "other_street",
            "visual_los",
            "nj_only",
            "chile_only",
        ] {
            assert!(matches!(
                c.get(name).unwrap().model,
                PathGainModel::PowerLaw(_)
            ));
        }
        assert!(matches!(c.get("nope"), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn umi_entry_is_negative_path_loss() {
        let c = ModelCatalog::builtin();
        let g = c
            .get("umi_nlos_2ghz")
            .unwrap()
            .model
            .mean_db(100.0)
            .unwrap();
        assert!((g + 103.927).abs() < 1e-3);
    }

    #[test]
    fn toml_round_trip() {
        let c = ModelCatalog::builtin();
        let text = c.to_toml_string().unwrap();
        assert!(text.contains("kind = \"power_law\""));
        let back = ModelCatalog::from_toml_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parses_hand_written_entry() {
        let c = ModelCatalog::from_toml_str(
            r#"
            [my_street]
            kind = "power_law"
            intercept_db = -50.0
            slope = -3.5
            sigma_db = 5.0
            valid_range_m = [20.0, 200.0]
            "#,
        )
        .unwrap();
        let e = c.get("my_street").unwrap();
        assert!((e.model.mean_db(10.0).unwrap() + 85.0).abs() < 1e-12);
        assert_eq!(e.source, "");
    }
}
