//! Flat `key = value` scenario files.
//!
//! Blank lines and lines starting with `#` are ignored. Positions are written
//! as `x, y, z` in metres, angles in degrees and powers in dBm. Keys left out
//! keep the reference deployment value; element dimensions default to half
//! the wavelength of the final frequency.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::link::{PatternAngle, TxSidePattern};
use crate::scenario::{Geometry, Scenario};
use crate::units::{dbm_to_watts, watts_to_dbm};
use crate::vec3::Vec3;
use crate::SPEED_OF_LIGHT;

pub const KEYS: [&str; 17] = [
    "tx_position",
    "rx_position",
    "ris_center",
    "frequency_hz",
    "hpbw_deg",
    "tx_power_dbm",
    "noise_power_dbm",
    "rx_gain",
    "geometry",
    "total_elements",
    "element_width",
    "element_height",
    "element_spacing",
    "sigma1",
    "sigma2",
    "pattern_angle",
    "tx_pattern",
];

/// Raw key/value pairs, checked against [`KEYS`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioSource {
    values: BTreeMap<String, String>,
}

fn split_pair(line: &str) -> Result<(String, String)> {
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| Error::parameter(line.trim(), "expected key=value"))?;
    let key = k.trim();
    if !KEYS.contains(&key) {
        return Err(Error::parameter(key, "unknown scenario key"));
    }
    Ok((key.to_string(), v.trim().to_string()))
}

impl ScenarioSource {
    pub fn parse(text: &str) -> Result<Self> {
        let mut src = Self::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = split_pair(line)?;
            src.values.insert(k, v);
        }
        Ok(src)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::parameter("scenario", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = split_pair(assignment)?;
        self.values.insert(k, v);
        Ok(())
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
        self.values.get(key).map(|v| parse(v)).transpose()
    }

    pub fn build(&self) -> Result<Scenario> {
        let mut s = Scenario::reference(Geometry::Planar2D);
        let f64_of = |key: &'static str| move |v: &str| parse_f64(key, v);
        if let Some(p) = self.get("tx_position", vec_of("tx_position"))? {
            s.tx_position = p;
        }
        if let Some(p) = self.get("rx_position", vec_of("rx_position"))? {
            s.rx_position = p;
        }
        if let Some(p) = self.get("ris_center", vec_of("ris_center"))? {
            s.ris_center = p;
        }
        if let Some(f) = self.get("frequency_hz", f64_of("frequency_hz"))? {
            s.frequency_hz = f;
        }
        if let Some(d) = self.get("hpbw_deg", f64_of("hpbw_deg"))? {
            s.hpbw_rad = d.to_radians();
        }
        if let Some(p) = self.get("tx_power_dbm", f64_of("tx_power_dbm"))? {
            s.tx_power_w = dbm_to_watts(p);
        }
        if let Some(p) = self.get("noise_power_dbm", f64_of("noise_power_dbm"))? {
            s.noise_power_w = dbm_to_watts(p);
        }
        if let Some(g) = self.get("rx_gain", f64_of("rx_gain"))? {
            s.rx_gain = g;
        }
        if let Some(g) = self.get("geometry", |v| v.parse::<Geometry>())? {
            s.ris.geometry = g;
        }
        if let Some(n) = self.get("total_elements", |v| {
            v.parse::<usize>().map_err(|_| {
                Error::parameter(
                    "total_elements",
                    format!("'{v}' is not a non-negative integer"),
                )
            })
        })? {
            s.ris.total_elements = n;
        }
        let half = SPEED_OF_LIGHT / s.frequency_hz / 2.0;
        s.ris.element_width = self
            .get("element_width", f64_of("element_width"))?
            .unwrap_or(half);
        s.ris.element_height = self
            .get("element_height", f64_of("element_height"))?
            .unwrap_or(half);
        s.ris.element_spacing = self
            .get("element_spacing", f64_of("element_spacing"))?
            .unwrap_or(half);
        if let Some(x) = self.get("sigma1", f64_of("sigma1"))? {
            s.fading.sigma1 = x;
        }
        if let Some(x) = self.get("sigma2", f64_of("sigma2"))? {
            s.fading.sigma2 = x;
        }
        if let Some(a) = self.get("pattern_angle", |v| v.parse::<PatternAngle>())? {
            s.pattern.angle = a;
        }
        if let Some(t) = self.get("tx_pattern", |v| v.parse::<TxSidePattern>())? {
            s.pattern.tx_side = t;
        }
        Ok(s)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::parameter(key, format!("'{v}' is not a number")))
}

fn vec_of(key: &'static str) -> impl Fn(&str) -> Result<Vec3> {
    move |v: &str| {
        // Commas, whitespace or both separate the components.
        let parts: Vec<&str> = v
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        if parts.len() != 3 {
            return Err(Error::parameter(
                key,
                format!("expected 'x, y, z', got '{v}'"),
            ));
        }
        Ok(Vec3::new(
            parse_f64(key, parts[0])?,
            parse_f64(key, parts[1])?,
            parse_f64(key, parts[2])?,
        ))
    }
}

/// Scenario from an optional file plus overrides, before validation.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Scenario> {
    let mut src = match path {
        Some(p) => ScenarioSource::read(p)?,
        None => ScenarioSource::default(),
    };
    for o in overrides {
        src.set(o)?;
    }
    src.build()
}

fn fmt_vec(v: Vec3) -> String {
    format!("{}, {}, {}", v.x, v.y, v.z)
}

/// `(key, value)` pairs that reproduce `s` when parsed.
pub fn to_pairs(s: &Scenario) -> Vec<(&'static str, String)> {
    vec![
        ("tx_position", fmt_vec(s.tx_position)),
        ("rx_position", fmt_vec(s.rx_position)),
        ("ris_center", fmt_vec(s.ris_center)),
        ("frequency_hz", s.frequency_hz.to_string()),
        ("hpbw_deg", s.hpbw_rad.to_degrees().to_string()),
        ("tx_power_dbm", watts_to_dbm(s.tx_power_w).to_string()),
        ("noise_power_dbm", watts_to_dbm(s.noise_power_w).to_string()),
        ("rx_gain", s.rx_gain.to_string()),
        ("geometry", s.ris.geometry.to_string()),
        ("total_elements", s.ris.total_elements.to_string()),
        ("element_width", s.ris.element_width.to_string()),
        ("element_height", s.ris.element_height.to_string()),
        ("element_spacing", s.ris.element_spacing.to_string()),
        ("sigma1", s.fading.sigma1.to_string()),
        ("sigma2", s.fading.sigma2.to_string()),
        ("pattern_angle", s.pattern.angle.to_string()),
        ("tx_pattern", s.pattern.tx_side.to_string()),
    ]
}

pub fn to_text(s: &Scenario) -> String {
    to_pairs(s)
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

/// Single-line form for CSV comment headers.
pub fn to_inline(s: &Scenario) -> String {
    to_pairs(s)
        .into_iter()
        .map(|(k, v)| format!("{k}={}", v.replace(", ", " ")))
        .collect::<Vec<_>>()
        .join("; ")
}
