//! Scan-record file formats.
//!
//! The text format is comma separated. Each record opens with a metadata
//! header and a sample header:
//!
//! ```text
//! link_id,street_id,scenario,distance_m
//! nj-0001,nj-s03,same_street,57.2
//! time_s,azimuth_deg,power_dbm,turn_index
//! 0,0,-71.2,0
//! 0.0013513513513513514,2.4324324324324325,-71.9,0
//! ```
//!
//! Any number of records may follow one another in the same file. Lines
//! starting with `#` are ignored. The JSON format is an array of objects
//! with the same field names.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Sample, ScanRecord, Scenario};
use crate::error::{Error, Result};

pub const META_HEADER: [&str; 4] = ["link_id", "street_id", "scenario", "distance_m"];
pub const SAMPLE_HEADER: [&str; 4] = ["time_s", "azimuth_deg", "power_dbm", "turn_index"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanFormat {
    Csv,
    Json,
}

impl ScanFormat {
    /// Picks the format from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ScanFormat::Json,
            _ => ScanFormat::Csv,
        }
    }
}

pub fn parse_scan_dataset(path: &Path, format: ScanFormat) -> Result<Vec<ScanRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_scan_dataset(BufReader::new(file), format)
}

pub fn read_scan_dataset<R: Read>(reader: R, format: ScanFormat) -> Result<Vec<ScanRecord>> {
    let records = match format {
        ScanFormat::Csv => read_csv(reader)?,
        ScanFormat::Json => read_json(reader)?,
    };
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    Ok(records)
}

pub fn write_scan_dataset<W: Write>(
    writer: W,
    records: &[ScanRecord],
    format: ScanFormat,
) -> Result<()> {
    match format {
        ScanFormat::Csv => write_csv(writer, records),
        ScanFormat::Json => {
            serde_json::to_writer(writer, records).map_err(|e| Error::Serialization(e.to_string()))
        }
    }
}

enum State {
    ExpectMetaHeader,
    ExpectMeta,
    ExpectSampleHeader,
    Samples,
}

fn parse_err(row: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(raw: &str, name: &str, row: usize) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| parse_err(row, format!("invalid {name} '{raw}'")))
}

fn read_csv<R: Read>(reader: R) -> Result<Vec<ScanRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records: Vec<(usize, ScanRecord)> = Vec::new();
    let mut state = State::ExpectMetaHeader;

    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let fields: Vec<&str> = row.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        let is_meta_header = fields == META_HEADER;

        state = match state {
            State::ExpectMetaHeader if is_meta_header => State::ExpectMeta,
            State::ExpectMetaHeader => {
                return Err(parse_err(
                    line,
                    format!("expected header '{}'", META_HEADER.join(",")),
                ))
            }
            State::ExpectMeta => {
                if fields.len() != 4 {
                    return Err(parse_err(line, "metadata row needs 4 fields"));
                }
                let distance_m: f64 = field(fields[3], "distance_m", line)?;
                if !(distance_m > 0.0) || !distance_m.is_finite() {
                    return Err(parse_err(
                        line,
                        format!("distance_m {distance_m} not positive"),
                    ));
                }
                let scenario: Scenario = fields[2]
                    .parse()
                    .map_err(|_| parse_err(line, format!("unknown scenario '{}'", fields[2])))?;
                records.push((
                    line,
                    ScanRecord {
                        link_id: fields[0].to_string(),
                        street_id: fields[1].to_string(),
                        scenario,
                        distance_m,
                        samples: Vec::new(),
                    },
                ));
                State::ExpectSampleHeader
            }
            State::ExpectSampleHeader if fields == SAMPLE_HEADER => State::Samples,
            State::ExpectSampleHeader => {
                return Err(parse_err(
                    line,
                    format!("expected header '{}'", SAMPLE_HEADER.join(",")),
                ))
            }
            State::Samples if is_meta_header => State::ExpectMeta,
            State::Samples => {
                if fields.len() != 4 {
                    return Err(parse_err(line, "sample row needs 4 fields"));
                }
                let sample = Sample {
                    time_s: field(fields[0], "time_s", line)?,
                    azimuth_deg: field(fields[1], "azimuth_deg", line)?,
                    power_dbm: field(fields[2], "power_dbm", line)?,
                    turn_index: field(fields[3], "turn_index", line)?,
                };
                let (_, rec) = records.last_mut().expect("metadata precedes samples");
                check_sample(&sample, rec.samples.last(), line)?;
                rec.samples.push(sample);
                State::Samples
            }
        };
    }

    match state {
        State::ExpectMetaHeader | State::Samples => {}
        State::ExpectMeta | State::ExpectSampleHeader => {
            return Err(parse_err(0, "truncated record header at end of file"))
        }
    }
    records
        .into_iter()
        .map(|(line, rec)| {
            if rec.samples.is_empty() {
                Err(parse_err(
                    line,
                    format!("record '{}' has no samples", rec.link_id),
                ))
            } else {
                Ok(rec)
            }
        })
        .collect()
}

fn check_sample(sample: &Sample, prev: Option<&Sample>, row: usize) -> Result<()> {
    if !(0.0..360.0).contains(&sample.azimuth_deg) {
        return Err(parse_err(
            row,
            format!("azimuth {} outside [0,360)", sample.azimuth_deg),
        ));
    }
    if !sample.time_s.is_finite() || !sample.power_dbm.is_finite() {
        return Err(parse_err(row, "non-finite time or power"));
    }
    if let Some(p) = prev {
        if !(sample.time_s > p.time_s) {
            return Err(parse_err(
                row,
                format!("non-monotone time {} after {}", sample.time_s, p.time_s),
            ));
        }
        if sample.turn_index < p.turn_index {
            return Err(parse_err(row, "decreasing turn_index"));
        }
    }
    Ok(())
}

fn read_json<R: Read>(reader: R) -> Result<Vec<ScanRecord>> {
    let records: Vec<ScanRecord> =
        serde_json::from_reader(reader).map_err(|e| parse_err(e.line(), e.to_string()))?;
    for rec in &records {
        if !(rec.distance_m > 0.0) {
            return Err(parse_err(
                0,
                format!("record '{}': distance_m not positive", rec.link_id),
            ));
        }
        if rec.samples.is_empty() {
            return Err(parse_err(
                0,
                format!("record '{}' has no samples", rec.link_id),
            ));
        }
        // JSON carries no row numbers; report the 1-based sample index.
        for (i, s) in rec.samples.iter().enumerate() {
            let prev = i.checked_sub(1).map(|j| &rec.samples[j]);
            check_sample(s, prev, i + 1).map_err(|e| match e {
                Error::Parse { row, message } => Error::Parse {
                    row,
                    message: format!("record '{}' sample: {message}", rec.link_id),
                },
                other => other,
            })?;
        }
    }
    Ok(records)
}

fn write_csv<W: Write>(writer: W, records: &[ScanRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(writer);
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    for rec in records {
        w.write_record(META_HEADER).map_err(ser)?;
        w.write_record([
            rec.link_id.as_str(),
            rec.street_id.as_str(),
            rec.scenario.as_str(),
            &rec.distance_m.to_string(),
        ])
        .map_err(ser)?;
        w.write_record(SAMPLE_HEADER).map_err(ser)?;
        for s in &rec.samples {
            // f64 Display is the shortest representation that parses back
            // to the same bits.
            w.write_record([
                s.time_s.to_string(),
                s.azimuth_deg.to_string(),
                s.power_dbm.to_string(),
                s.turn_index.to_string(),
            ])
            .map_err(ser)?;
        }
    }
    w.flush().map_err(|e| Error::Serialization(e.to_string()))?;
    Ok(())
}
