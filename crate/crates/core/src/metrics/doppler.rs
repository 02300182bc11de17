//! Doppler spectrum of a per-turn power series.
//!
//! The sounder records power only, so the envelope proxy is the amplitude
//! `sqrt(P)` with its mean removed. The one-sided PSD is a Welch estimate:
//! Hann window, 50% overlap, segment length `min(len, 64)`, scaled so the
//! spectrum integrates to the proxy's variance. The removed mean appears
//! separately as `dc_power`.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::temporal::TemporalSeries;
use crate::error::{Error, Result};

pub const MAX_SEGMENT_LEN: usize = 64;
pub const MIN_SERIES_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct DopplerSpectrum {
    /// Bin frequencies from 0 to the Nyquist rate.
    pub frequencies_hz: Vec<f64>,
    /// One-sided PSD of the mean-removed amplitude, mW/Hz.
    pub psd: Vec<f64>,
    /// Bin spacing, fs / segment_len.
    pub resolution_hz: f64,
    pub segment_len: usize,
    pub segments: usize,
    /// Squared mean amplitude (the DC line removed before estimation), mW.
    pub dc_power: f64,
}

impl DopplerSpectrum {
    /// Integral of the PSD over frequency.
    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.resolution_hz
    }

    pub fn peak_frequency_hz(&self) -> f64 {
        let (i, _) = self
            .psd
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| {
                if p > best.1 {
                    (i, p)
                } else {
                    best
                }
            });
        self.frequencies_hz[i]
    }

    /// Least-squares line through the PSD in dB over bins in
    /// [f_lo, f_hi]; returns (level at 0 Hz in dB, slope in dB/Hz).
    pub fn fit_exponential_decay(&self, f_lo: f64, f_hi: f64) -> Result<(f64, f64)> {
        let pts: Vec<(f64, f64)> = self
            .frequencies_hz
            .iter()
            .zip(&self.psd)
            .filter(|(&f, &p)| f >= f_lo && f <= f_hi && p > 0.0)
            .map(|(&f, &p)| (f, 10.0 * p.log10()))
            .collect();
        if pts.len() < 2 {
            return Err(Error::InsufficientData(
                "fewer than 2 PSD bins in fit range".into(),
            ));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        Ok((my - slope * mx, slope))
    }
}

pub fn doppler_spectrum(series: &TemporalSeries) -> Result<DopplerSpectrum> {
    let n = series.len();
    if n < MIN_SERIES_LEN {
        return Err(Error::InsufficientData(format!(
            "Doppler spectrum needs at least {MIN_SERIES_LEN} samples, got {n}"
        )));
    }
    let fs = 1.0 / series.dt_s;
    let amp: Vec<f64> = series.linear_mw().iter().map(|p| p.sqrt()).collect();
    let mean = amp.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = amp.iter().map(|a| a - mean).collect();

    let len = n.min(MAX_SEGMENT_LEN);
    let hop = len / 2;
    let segments = (n - len) / hop + 1;
    let window: Vec<f64> = (0..len)
        .map(|i| {
            let s = (std::f64::consts::PI * i as f64 / len as f64).sin();
            s * s
        })
        .collect();
    let window_energy: f64 = window.iter().map(|w| w * w).sum();

    let fft = FftPlanner::new().plan_fft_forward(len);
    let bins = len / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for s in 0..segments {
        let start = s * hop;
        for (i, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(x[start + i] * window[i], 0.0);
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k].norm_sqr();
        }
    }

    let scale = 1.0 / (fs * window_energy * segments as f64);
    let psd: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let one_sided = if k == 0 || (len.is_multiple_of(2) && k == len / 2) {
                1.0
            } else {
                2.0
            };
            p * scale * one_sided
        })
        .collect();

    Ok(DopplerSpectrum {
        frequencies_hz: (0..bins).map(|k| k as f64 * fs / len as f64).collect(),
        psd,
        resolution_hz: fs / len as f64,
        segment_len: len,
        segments,
        dc_power: mean * mean,
    })
}
