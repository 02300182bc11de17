use super::doppler::{doppler_spectrum, DopplerSpectrum, MIN_SERIES_LEN};
use super::kfactor::estimate_k_factor_mom;
use super::profile::{
    angular_profile, best_on_average_angle, compute_path_gain, effective_azimuth_gain,
};
use super::temporal::{beamswitch_gain_db, temporal_series, turn_fluctuation_stats, SeriesMode};
use crate::error::{Error, Result};
use crate::scan::{validate_record, ScanRecord, Scenario, SounderConfig};

/// Everything extracted from one scan record.
///
/// Temporal quantities are `None` when the record is too short for them;
/// the reason is then listed in `warnings`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkMetrics {
    pub link_id: String,
    pub street_id: String,
    pub scenario: Scenario,
    pub distance_m: f64,
    pub path_gain_db: f64,
    pub eff_azim_gain_db: f64,
    pub best_bin: usize,
    pub k_factor_db: Option<f64>,
    pub fluct_p90_db: Option<f64>,
    pub beamswitch_gain_db: Option<f64>,
    pub doppler: Option<DopplerSpectrum>,
    pub warnings: Vec<String>,
}

/// Validates `record` and computes its path gain, effective azimuth gain
/// and, at the best-on-average angle, its temporal statistics.
pub fn link_metrics(record: &ScanRecord, sounder: &SounderConfig) -> Result<LinkMetrics> {
    let report = validate_record(record);
    if let Some(v) = report.fatal().next() {
        return Err(Error::InvalidArgument(format!(
            "link {}: {v}",
            record.link_id
        )));
    }
    let mut warnings: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();

    let profile = angular_profile(record)?;
    let path_gain_db = compute_path_gain(record, sounder)?;
    let eff_azim_gain_db = effective_azimuth_gain(&profile)?;
    let best_bin = best_on_average_angle(&profile)?;

    let mut out = LinkMetrics {
        link_id: record.link_id.clone(),
        street_id: record.street_id.clone(),
        scenario: record.scenario,
        distance_m: record.distance_m,
        path_gain_db,
        eff_azim_gain_db,
        best_bin,
        k_factor_db: None,
        fluct_p90_db: None,
        beamswitch_gain_db: None,
        doppler: None,
        warnings: Vec::new(),
    };

    let fixed = match temporal_series(record, SeriesMode::FixedAngle(best_bin)) {
        Ok(s) => s,
        Err(e) => {
            warnings.push(e.to_string());
            out.warnings = warnings;
            return Ok(out);
        }
    };
    if !fixed.interpolated.is_empty() {
        warnings.push(format!(
            "{} turns interpolated at the best angle",
            fixed.interpolated.len()
        ));
    }
    out.k_factor_db = Some(estimate_k_factor_mom(&fixed)?.k_db);
    out.fluct_p90_db = Some(turn_fluctuation_stats(&fixed)?.p90_db);
    let best = temporal_series(record, SeriesMode::PerTurnBest)?;
    out.beamswitch_gain_db = Some(beamswitch_gain_db(&best, &fixed));
    if fixed.len() >= MIN_SERIES_LEN {
        out.doppler = Some(doppler_spectrum(&fixed)?);
    } else {
        warnings.push(format!(
            "doppler spectrum needs at least {MIN_SERIES_LEN} turns"
        ));
    }
    out.warnings = warnings;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::{synthesize_scan_record, SceneTruth};

    #[test]
    fn five_turn_record_warns_but_succeeds() {
        let sounder = SounderConfig::reference_28ghz();
        let truth = SceneTruth::new(-90.0, 5).with_path(40.0, 0.0).with_seed(3);
        let rec = synthesize_scan_record(&truth, &sounder).unwrap();
        let m = link_metrics(&rec, &sounder).unwrap();
        assert!(m.warnings.iter().any(|w| w.contains("insufficient turns")));
        assert!(m.k_factor_db.is_some());
        assert!(m.doppler.is_none());
        assert!((m.path_gain_db + 90.0).abs() < 0.2);
    }

    #[test]
    fn compliant_record_has_no_warnings() {
        let sounder = SounderConfig::reference_28ghz();
        let truth = SceneTruth::new(-100.0, 60)
            .with_path(200.0, 0.0)
            .with_k_factor(10.0)
            .with_seed(9);
        let rec = synthesize_scan_record(&truth, &sounder).unwrap();
        let m = link_metrics(&rec, &sounder).unwrap();
        assert!(m.warnings.is_empty(), "{:?}", m.warnings);
        assert!(m.doppler.is_some());
        assert!((m.best_bin as f64 - 200.0).abs() <= 1.0);
    }

    #[test]
    fn fatal_violation_is_an_error() {
        let sounder = SounderConfig::reference_28ghz();
        let mut rec =
            synthesize_scan_record(&SceneTruth::new(-90.0, 3).with_path(0.0, 0.0), &sounder)
                .unwrap();
        rec.distance_m = -1.0;
        assert!(link_metrics(&rec, &sounder).is_err());
    }
}
