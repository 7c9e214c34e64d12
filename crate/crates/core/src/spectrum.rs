//! Sampled spectra and uniform sampling grids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Photoluminescence,
    Absorption,
    Lineshape,
    SpectralFunction,
    Odmr,
}

impl SpectrumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumKind::Photoluminescence => "PL",
            SpectrumKind::Absorption => "absorption",
            SpectrumKind::Lineshape => "lineshape",
            SpectrumKind::SpectralFunction => "spectral_function",
            SpectrumKind::Odmr => "odmr",
        }
    }

    /// Column header of the abscissa in CSV output.
    pub fn axis_label(&self) -> &'static str {
        match self {
            SpectrumKind::Odmr => "frequency_MHz",
            _ => "energy_eV",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "PL" => SpectrumKind::Photoluminescence,
            "absorption" => SpectrumKind::Absorption,
            "lineshape" => SpectrumKind::Lineshape,
            "spectral_function" => SpectrumKind::SpectralFunction,
            "odmr" => SpectrumKind::Odmr,
            other => return Err(Error::invalid(format!("unknown spectrum kind `{other}`"))),
        })
    }
}

/// Free-form metadata carried next to a spectrum and written into the CSV
/// header block.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    pub kind: SpectrumKind,
    pub temperature_k: Option<f64>,
    pub normalization: String,
    /// Additional `key = value` pairs, kept in insertion order.
    pub extra: Vec<(String, String)>,
}

impl SpectrumMeta {
    pub fn new(kind: SpectrumKind) -> Self {
        SpectrumMeta {
            kind,
            temperature_k: None,
            normalization: "none".to_string(),
            extra: Vec::new(),
        }
    }

    pub fn with_temperature(mut self, t: f64) -> Self {
        self.temperature_k = Some(t);
        self
    }

    pub fn with_normalization(mut self, n: impl Into<String>) -> Self {
        self.normalization = n.into();
        self
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string();
        match self.extra.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.extra.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.extra
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Intensity sampled on a strictly increasing axis.
///
/// The axis is in eV for optical spectra and in MHz for ODMR spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    axis: Vec<f64>,
    intensity: Vec<f64>,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn new(axis: Vec<f64>, intensity: Vec<f64>, meta: SpectrumMeta) -> Result<Self> {
        if axis.len() != intensity.len() {
            return Err(Error::invalid(format!(
                "axis has {} points but intensity has {}",
                axis.len(),
                intensity.len()
            )));
        }
        if let Some(w) = axis.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(format!(
                "axis is not strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if axis.iter().chain(&intensity).any(|v| !v.is_finite()) {
            return Err(Error::invalid("spectrum contains non-finite values"));
        }
        Ok(Spectrum {
            axis,
            intensity,
            meta,
        })
    }

    pub fn empty(meta: SpectrumMeta) -> Self {
        Spectrum {
            axis: Vec::new(),
            intensity: Vec::new(),
            meta,
        }
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn intensity(&self) -> &[f64] {
        &self.intensity
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn kind(&self) -> SpectrumKind {
        self.meta.kind
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.axis.iter().copied().zip(self.intensity.iter().copied())
    }

    /// Trapezoidal integral over the axis.
    pub fn integral(&self) -> f64 {
        self.axis
            .windows(2)
            .zip(self.intensity.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Trapezoidal first moment, `∫ x I(x) dx`.
    pub fn first_moment(&self) -> f64 {
        self.axis
            .windows(2)
            .zip(self.intensity.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (x[0] * y[0] + x[1] * y[1]))
            .sum()
    }

    /// Axis position and value of the largest sample.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.points()
            .fold(None, |best: Option<(f64, f64)>, p| match best {
                Some(b) if b.1 >= p.1 => Some(b),
                _ => Some(p),
            })
    }

    pub fn max_intensity(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    /// Linear interpolation; zero outside the sampled range.
    pub fn value_at(&self, x: f64) -> f64 {
        let n = self.axis.len();
        if n == 0 || x < self.axis[0] || x > self.axis[n - 1] {
            return 0.0;
        }
        let i = self.axis.partition_point(|&a| a <= x);
        if i == 0 {
            return self.intensity[0];
        }
        if i >= n {
            return self.intensity[n - 1];
        }
        let (x0, x1) = (self.axis[i - 1], self.axis[i]);
        let t = (x - x0) / (x1 - x0);
        self.intensity[i - 1] * (1.0 - t) + self.intensity[i] * t
    }

    /// Trapezoidal L1 distance to another spectrum sampled on the same axis.
    pub fn l1_distance(&self, other: &Spectrum) -> Result<f64> {
        if self.axis != other.axis {
            return Err(Error::invalid("spectra are sampled on different axes"));
        }
        let diff: Vec<f64> = self
            .intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| (a - b).abs())
            .collect();
        Ok(self
            .axis
            .windows(2)
            .zip(diff.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum())
    }

    /// Copy with the intensity scaled so that the maximum is one.
    pub fn normalized_to_peak(&self) -> Spectrum {
        let m = self.max_intensity();
        let mut out = self.clone();
        if m > 0.0 {
            out.intensity.iter_mut().for_each(|v| *v /= m);
        }
        out.meta.normalization = "peak".to_string();
        out
    }
}

/// Uniform grid of `n_points` samples including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n_points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::invalid(format!(
                "grid bounds must satisfy min < max (got {min}, {max})"
            )));
        }
        if n_points < 2 {
            return Err(Error::invalid("grid needs at least two points"));
        }
        Ok(Grid { min, max, n_points })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.max
                } else {
                    self.min + i as f64 * h
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `min:max:n`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("grid `{s}` is not of the form min:max:n")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number `{p}` in grid `{s}`")))
        };
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("bad point count in grid `{s}`")))?;
        Grid::new(num(parts[0])?, num(parts[1])?, n)
    }
}
