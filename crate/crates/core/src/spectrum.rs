//! Beat-frequency extraction from sampled populations or concurrences.

use rustfft::FftPlanner;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// A resolved spectral line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPeak {
    /// Angular frequency.
    pub frequency: f64,
    /// Estimated amplitude of the corresponding cosine.
    pub amplitude: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct PeakOptions {
    /// Peaks below this fraction of the tallest one are dropped.
    pub rel_threshold: f64,
    /// Bins `0..min_bin` are ignored (DC leakage of the window).
    pub min_bin: usize,
}

impl Default for PeakOptions {
    fn default() -> Self {
        Self { rel_threshold: 0.05, min_bin: 2 }
    }
}

/// Angular-frequency spacing of an `n`-point transform with step `dt`.
pub fn bin_width(n: usize, dt: f64) -> f64 {
    2.0 * std::f64::consts::PI / (n as f64 * dt)
}

/// One-sided Hann-windowed magnitude spectrum with the mean removed,
/// scaled so a pure cosine of amplitude A peaks near A.
pub fn magnitude_spectrum(series: &[f64]) -> Vec<f64> {
    let n = series.len();
    if n < 4 {
        return Vec::new();
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let window: Vec<f64> = (0..n)
        .map(|k| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    let gain: f64 = window.iter().sum();
    let mut buf: Vec<C64> = series
        .iter()
        .zip(&window)
        .map(|(x, w)| C64::new((x - mean) * w, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..n / 2 + 1].iter().map(|z| 2.0 * z.norm() / gain).collect()
}

/// Local maxima of the spectrum of `series` (uniform step `dt`), refined by
/// parabolic interpolation and sorted by frequency.
pub fn find_peaks(series: &[f64], dt: f64, opts: PeakOptions) -> Vec<SpectralPeak> {
    let mag = magnitude_spectrum(series);
    if mag.len() < 3 {
        return Vec::new();
    }
    let lo = opts.min_bin.max(1);
    let top = mag[lo..].iter().cloned().fold(0.0, f64::max);
    // Numerically constant input leaves only round-off.
    let scale = series.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    if top <= 1e-10 * scale {
        return Vec::new();
    }
    let width = bin_width(series.len(), dt);
    let mut peaks = Vec::new();
    for k in lo..mag.len() - 1 {
        let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
        if b > a && b >= c && b >= opts.rel_threshold * top {
            let denom = a - 2.0 * b + c;
            let p = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            peaks.push(SpectralPeak {
                frequency: (k as f64 + p) * width,
                amplitude: b - 0.25 * (a - c) * p,
            });
        }
    }
    peaks
}

/// Beat frequencies expected in the populations for equal detunings:
/// `2ℛ`, `|ℛ − δ/2|` and `ℛ + δ/2`, in ascending order.
pub fn expected_beat_frequencies(params: &SystemParams) -> Result<[f64; 3]> {
    let d = params.common_detuning()?;
    let r = params.rabi;
    let mut f = [2.0 * r, (r - d / 2.0).abs(), r + d.abs() / 2.0];
    f.sort_by(f64::total_cmp);
    Ok(f)
}

/// Output of [`analyze_beats`].
#[derive(Clone, Debug)]
pub struct BeatAnalysis {
    pub expected: [f64; 3],
    pub peaks: Vec<SpectralPeak>,
    /// For each expected frequency, the nearest peak within two bins.
    pub matched: [Option<SpectralPeak>; 3],
    pub bin_width: f64,
    /// The Rabi splitting exceeds the linewidth and every expected line was found.
    pub resolvable: bool,
}

/// Compares the spectrum of a sampled series with the expected beat lines.
/// The window must cover four periods of the slowest nonzero expected line.
pub fn analyze_beats(series: &[f64], dt: f64, params: &SystemParams) -> Result<BeatAnalysis> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidGrid(format!("sample step {dt} must be positive")));
    }
    let expected = expected_beat_frequencies(params)?;
    let slowest = expected.iter().cloned().filter(|&f| f > 0.0).fold(f64::INFINITY, f64::min);
    let span = dt * series.len().saturating_sub(1) as f64;
    let required = if slowest.is_finite() { 4.0 * 2.0 * std::f64::consts::PI / slowest } else { 0.0 };
    if span < required || series.len() < 4 {
        return Err(Error::WindowTooShort { span, required });
    }
    let peaks = find_peaks(series, dt, PeakOptions::default());
    let width = bin_width(series.len(), dt);
    let matched = expected.map(|f| {
        peaks
            .iter()
            .filter(|p| (p.frequency - f).abs() <= 2.0 * width)
            .min_by(|a, b| (a.frequency - f).abs().total_cmp(&(b.frequency - f).abs()))
            .copied()
    });
    let resolvable = 2.0 * params.rabi > params.lambda && matched.iter().all(Option::is_some);
    Ok(BeatAnalysis { expected, peaks, matched, bin_width: width, resolvable })
}
