use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use super::{csv_error, digest_of, opt, read_text, MetricsArgs, Outputs, ReportArgs};
use crate::error::{Error, Result};
use crate::metrics::{link_metrics, EmpiricalCdf, LinkMetrics};
use crate::scan::{parse_scan_dataset, ScanFormat, SounderConfig};

pub const METRICS_HEADER: [&str; 9] = [
    "link_id",
    "distance_m",
    "scenario",
    "path_gain_db",
    "eff_azim_gain_db",
    "k_factor_db",
    "fluct_p90_db",
    "beamswitch_gain_db",
    "warnings",
];

pub fn metrics(a: MetricsArgs) -> Result<()> {
    let sounder = match &a.config {
        Some(p) => SounderConfig::from_toml_str(&read_text(p)?)?,
        None => SounderConfig::reference_28ghz(),
    };
    let records = parse_scan_dataset(&a.input, ScanFormat::from_path(&a.input))?;
    let rows: Vec<LinkMetrics> = records
        .iter()
        .map(|r| link_metrics(r, &sounder))
        .collect::<Result<_>>()?;
    for m in &rows {
        for w in &m.warnings {
            log::warn!("link {}: {w}", m.link_id);
        }
    }

    let mut out = Outputs::new();
    out.write_with(&a.output, |w| write_metrics_csv(w, &rows))?;
    if let Some(dir) = &a.psd_dir {
        for (i, m) in rows.iter().enumerate() {
            if let Some(psd) = &m.doppler {
                let dest = dir.join(format!("{:04}_{}.psd.csv", i, sanitize(&m.link_id)));
                out.write_with(&dest, |w| {
                    let mut c = csv::Writer::from_writer(w);
                    c.write_record(["frequency_hz", "psd_mw_per_hz"])
                        .map_err(csv_error)?;
                    for (f, p) in psd.frequencies_hz.iter().zip(&psd.psd) {
                        c.write_record([f.to_string(), p.to_string()])
                            .map_err(csv_error)?;
                    }
                    c.flush().map_err(|e| Error::io(&dest, e))
                })?;
            }
        }
    }
    let inputs = std::iter::once(a.input.clone())
        .chain(a.config.clone())
        .collect();
    out.commit(&a.output, "metrics", inputs, digest_of(&sounder)?, None)
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn write_metrics_csv(w: &mut dyn Write, rows: &[LinkMetrics]) -> Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(METRICS_HEADER).map_err(csv_error)?;
    for m in rows {
        c.write_record([
            m.link_id.clone(),
            m.distance_m.to_string(),
            m.scenario.to_string(),
            m.path_gain_db.to_string(),
            m.eff_azim_gain_db.to_string(),
            opt(m.k_factor_db),
            opt(m.fluct_p90_db),
            opt(m.beamswitch_gain_db),
            m.warnings.join("; "),
        ])
        .map_err(csv_error)?;
    }
    c.flush().map_err(|e| Error::Serialization(e.to_string()))
}

#[derive(Debug, Deserialize)]
struct MetricsRow {
    scenario: String,
    path_gain_db: f64,
    eff_azim_gain_db: f64,
    k_factor_db: Option<f64>,
    fluct_p90_db: Option<f64>,
    beamswitch_gain_db: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct RateRowIn {
    distance_m: f64,
    gamma_q_db: f64,
    rate_bps: f64,
    config_label: String,
    mode: String,
}

pub fn report(a: ReportArgs) -> Result<()> {
    let text = read_text(&a.input)?;
    let header = text.lines().next().unwrap_or_default();
    let mut out = Outputs::new();
    if header.starts_with("link_id,") {
        let rows: Vec<MetricsRow> = parse_rows(&text, &a.input)?;
        out.write_with(&a.output, |w| metrics_report(w, &rows))?;
    } else if header.starts_with("distance_m,gamma_q_db,") {
        let rows: Vec<RateRowIn> = parse_rows(&text, &a.input)?;
        out.write_with(&a.output, |w| rate_report(w, &rows, &a.at))?;
    } else {
        return Err(Error::Parse {
            row: 1,
            message: "input is neither metrics nor simulate output".into(),
        });
    }
    out.commit(
        &a.output,
        "report",
        vec![a.input.clone()],
        digest_of(&a.at)?,
        None,
    )
}

fn parse_rows<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<Vec<T>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::Parse {
                row: i + 2,
                message: format!("{}: {e}", path.display()),
            })
        })
        .collect()
}

const REPORT_QUANTILES: [f64; 3] = [0.1, 0.5, 0.9];

/// One line per (scenario, metric): count, mean, std, and the 10/50/90%
/// points of the empirical CDF. Non-finite values (K of a constant or a
/// Rayleigh series) count toward the quantiles but not the moments.
fn metrics_report(w: &mut dyn Write, rows: &[MetricsRow]) -> Result<()> {
    let mut groups: BTreeMap<String, Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.scenario.clone()).or_default().push(r);
        groups.entry("all".into()).or_default().push(r);
    }
    type Getter = fn(&MetricsRow) -> Option<f64>;
    let metrics: [(&str, Getter); 5] = [
        ("path_gain_db", |r| Some(r.path_gain_db)),
        ("eff_azim_gain_db", |r| Some(r.eff_azim_gain_db)),
        ("k_factor_db", |r| r.k_factor_db),
        ("fluct_p90_db", |r| r.fluct_p90_db),
        ("beamswitch_gain_db", |r| r.beamswitch_gain_db),
    ];
    let mut c = csv::Writer::from_writer(w);
    c.write_record([
        "scenario", "metric", "count", "mean", "std", "p10", "p50", "p90",
    ])
    .map_err(csv_error)?;
    for (scenario, members) in &groups {
        for (name, get) in metrics {
            let values: Vec<f64> = members.iter().filter_map(|r| get(r)).collect();
            if values.is_empty() {
                continue;
            }
            let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
            let (mean, std) = moments(&finite);
            let cdf = EmpiricalCdf::new(values.clone())?;
            let mut rec = vec![
                scenario.clone(),
                name.to_string(),
                values.len().to_string(),
                opt(mean),
                opt(std),
            ];
            rec.extend(
                REPORT_QUANTILES
                    .iter()
                    .map(|&q| cdf.quantile(q).to_string()),
            );
            c.write_record(rec).map_err(csv_error)?;
        }
    }
    c.flush().map_err(|e| Error::Serialization(e.to_string()))
}

fn moments(v: &[f64]) -> (Option<f64>, Option<f64>) {
    if v.is_empty() {
        return (None, None);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = (v.len() > 1)
        .then(|| (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (Some(mean), std)
}

/// One line per (config, mode): rate and SNR at the requested distances
/// (linear interpolation in distance) and the largest distance up to which
/// the rate stays at or above 1 Gbit/s and 100 Mbit/s.
fn rate_report(w: &mut dyn Write, rows: &[RateRowIn], at: &[f64]) -> Result<()> {
    let mut groups: Vec<((String, String), Vec<&RateRowIn>)> = Vec::new();
    for r in rows {
        let key = (r.config_label.clone(), r.mode.clone());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    let mut header = vec!["config_label".to_string(), "mode".to_string()];
    for d in at {
        header.push(format!("rate_at_{d}m_bps"));
        header.push(format!("gamma_at_{d}m_db"));
    }
    header.push("range_1gbps_m".into());
    header.push("range_100mbps_m".into());
    let mut c = csv::Writer::from_writer(w);
    c.write_record(&header).map_err(csv_error)?;
    for ((label, mode), mut members) in groups {
        members.sort_by(|a, b| a.distance_m.total_cmp(&b.distance_m));
        let mut rec = vec![label, mode];
        for &d in at {
            rec.push(opt(interpolate(&members, d, |r| r.rate_bps)));
            rec.push(opt(interpolate(&members, d, |r| r.gamma_q_db)));
        }
        rec.push(opt(range_at_rate(&members, 1e9)));
        rec.push(opt(range_at_rate(&members, 1e8)));
        c.write_record(rec).map_err(csv_error)?;
    }
    c.flush().map_err(|e| Error::Serialization(e.to_string()))
}

fn interpolate(rows: &[&RateRowIn], d: f64, get: fn(&RateRowIn) -> f64) -> Option<f64> {
    let i = rows.iter().position(|r| r.distance_m >= d)?;
    if rows[i].distance_m == d {
        return Some(get(rows[i]));
    }
    let lo = rows.get(i.checked_sub(1)?)?;
    let hi = rows[i];
    let t = (d - lo.distance_m) / (hi.distance_m - lo.distance_m);
    Some(get(lo) + t * (get(hi) - get(lo)))
}

fn range_at_rate(rows: &[&RateRowIn], threshold_bps: f64) -> Option<f64> {
    rows.iter()
        .take_while(|r| r.rate_bps >= threshold_bps)
        .last()
        .map(|r| r.distance_m)
}
