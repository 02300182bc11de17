use crate::error::{Error, Result};
use crate::scan::{AzimuthPattern, Sample, ScanRecord, SounderConfig};
use crate::units::{db_to_linear, linear_to_db};

/// One-degree azimuth bins.
pub const BIN_COUNT: usize = 360;

/// Time-averaged received power per 1° azimuth bin.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularProfile {
    bins_mw: Vec<f64>,
    occupancy: Vec<usize>,
}

pub(crate) fn bin_of(azimuth_deg: f64) -> usize {
    (azimuth_deg.rem_euclid(360.0).floor() as usize) % BIN_COUNT
}

impl AngularProfile {
    pub(crate) fn from_samples(samples: &[Sample]) -> Self {
        let mut sum = vec![0.0; BIN_COUNT];
        let mut occupancy = vec![0usize; BIN_COUNT];
        for s in samples {
            let b = bin_of(s.azimuth_deg);
            sum[b] += db_to_linear(s.power_dbm);
            occupancy[b] += 1;
        }
        let bins_mw = sum
            .iter()
            .zip(&occupancy)
            .map(|(&s, &n)| if n > 0 { s / n as f64 } else { 0.0 })
            .collect();
        Self { bins_mw, occupancy }
    }

    /// Linear mean power of bin `bin` in milliwatts, `None` if unoccupied.
    pub fn bin_mw(&self, bin: usize) -> Option<f64> {
        (self.occupancy[bin] > 0).then(|| self.bins_mw[bin])
    }

    pub fn bin_dbm(&self, bin: usize) -> Option<f64> {
        self.bin_mw(bin).map(linear_to_db)
    }

    pub fn occupancy(&self) -> &[usize] {
        &self.occupancy
    }

    pub fn occupied_bins(&self) -> usize {
        self.occupancy.iter().filter(|&&n| n > 0).count()
    }

    /// (bin, mW) for each occupied bin, in azimuth order.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..BIN_COUNT).filter_map(move |b| self.bin_mw(b).map(|p| (b, p)))
    }

    pub(crate) fn max_bin(&self) -> Option<(usize, f64)> {
        // strict comparison keeps the lowest index on ties
        self.occupied()
            .fold(None, |best: Option<(usize, f64)>, (b, p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((b, p)),
            })
    }

    fn mean_mw(&self) -> Option<f64> {
        let (sum, n) = self
            .occupied()
            .fold((0.0, 0usize), |(s, n), (_, p)| (s + p, n + 1));
        (n > 0).then(|| sum / n as f64)
    }
}

pub fn angular_profile(record: &ScanRecord) -> Result<AngularProfile> {
    let profile = AngularProfile::from_samples(&record.samples);
    if profile.occupied_bins() == 0 {
        return Err(Error::EmptyProfile);
    }
    Ok(profile)
}

/// Omni-equivalent power: linear mean over occupied bins, in dBm.
pub fn azimuth_average_power(profile: &AngularProfile) -> Result<f64> {
    profile
        .mean_mw()
        .map(linear_to_db)
        .ok_or(Error::EmptyProfile)
}

/// Path gain from an azimuth-averaged power, removing transmit power,
/// transmit gain and the receive elevation gain.
pub fn path_gain_from_average(
    average_dbm: f64,
    tx_power_dbm: f64,
    tx_gain_dbi: f64,
    rx_elevation_gain_db: f64,
) -> f64 {
    average_dbm - tx_power_dbm - tx_gain_dbi - rx_elevation_gain_db
}

pub fn compute_path_gain(record: &ScanRecord, sounder: &SounderConfig) -> Result<f64> {
    let avg = azimuth_average_power(&angular_profile(record)?)?;
    Ok(path_gain_from_average(
        avg,
        sounder.tx_power_dbm,
        sounder.tx_gain_dbi,
        sounder.rx_elevation_gain_db(),
    ))
}

/// Peak-to-average ratio of an antenna azimuth pattern.
pub fn nominal_azimuth_gain(pattern: &AzimuthPattern) -> f64 {
    pattern.peak_to_average_db()
}

/// Peak-to-average ratio of the time-averaged angular profile.
pub fn effective_azimuth_gain(profile: &AngularProfile) -> Result<f64> {
    let (_, peak) = profile.max_bin().ok_or(Error::EmptyProfile)?;
    let mean = profile.mean_mw().ok_or(Error::EmptyProfile)?;
    Ok(linear_to_db(peak) - linear_to_db(mean))
}

/// Bin with the highest time-averaged power; ties go to the lowest bin.
pub fn best_on_average_angle(profile: &AngularProfile) -> Result<usize> {
    profile.max_bin().map(|(b, _)| b).ok_or(Error::EmptyProfile)
}
