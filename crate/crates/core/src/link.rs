//! Transmit and element radiation patterns and the near-field coherent
//! received-power sum.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::layout::ElementLayout;
use crate::scenario::{normal_azimuth, Scenario};
use crate::vec3::Vec3;

/// Which angle the `cos^3` element pattern is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternAngle {
    /// Angle between the local surface normal and the ray, elevation included.
    Combined,
    /// Horizontal azimuth of the ray in the global frame, elevation ignored.
    Azimuth,
}

/// How the transmit side of the element pattern is weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TxSidePattern {
    /// `cos^3` of the element's angular offset from the beam axis. The beam is
    /// steered at the RIS, so this stays close to one.
    BeamOffset,
    /// `cos^3` of the incidence angle on the element, like the receive side.
    Incidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternModel {
    pub angle: PatternAngle,
    pub tx_side: TxSidePattern,
}

impl Default for PatternModel {
    fn default() -> Self {
        Self {
            angle: PatternAngle::Combined,
            tx_side: TxSidePattern::BeamOffset,
        }
    }
}

impl PatternAngle {
    pub fn name(self) -> &'static str {
        match self {
            PatternAngle::Combined => "combined",
            PatternAngle::Azimuth => "azimuth",
        }
    }
}

impl TxSidePattern {
    pub fn name(self) -> &'static str {
        match self {
            TxSidePattern::BeamOffset => "beam-offset",
            TxSidePattern::Incidence => "incidence",
        }
    }
}

impl fmt::Display for PatternAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for TxSidePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "combined" => Ok(PatternAngle::Combined),
            "azimuth" => Ok(PatternAngle::Azimuth),
            other => Err(Error::parameter(
                "pattern_angle",
                format!("expected combined or azimuth, got '{other}'"),
            )),
        }
    }
}

impl FromStr for TxSidePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "beam-offset" => Ok(TxSidePattern::BeamOffset),
            "incidence" => Ok(TxSidePattern::Incidence),
            other => Err(Error::parameter(
                "tx_pattern",
                format!("expected beam-offset or incidence, got '{other}'"),
            )),
        }
    }
}

/// Transmit beam gain `cos^2(pi * delta / (2 * hpbw))`, truncated to zero at
/// the first null `|delta| >= hpbw`.
pub fn tx_gain(az_element: f64, az_steer: f64, hpbw: f64) -> f64 {
    let delta = az_element - az_steer;
    if delta.abs() >= hpbw {
        return 0.0;
    }
    (PI * delta / (2.0 * hpbw)).cos().powi(2)
}

/// Element pattern `cos^3(angle)`, zero at and beyond grazing.
pub fn element_pattern(angle: f64) -> f64 {
    if angle.abs() >= FRAC_PI_2 {
        return 0.0;
    }
    angle.cos().powi(3)
}

fn pattern_from_cos(c: f64) -> f64 {
    if c <= 0.0 {
        0.0
    } else {
        c.min(1.0).powi(3)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResult {
    pub received_power_w: f64,
    pub mean_snr: f64,
    /// `sum sqrt(G_t F_t F_r) / (r_1n r_2n)` before squaring, 1/m^2.
    pub coherent_sum: f64,
}

impl LinkResult {
    pub fn zero() -> Self {
        Self {
            received_power_w: 0.0,
            mean_snr: 0.0,
            coherent_sum: 0.0,
        }
    }
}

pub fn mean_snr(lr: &LinkResult, noise_w: f64) -> f64 {
    lr.received_power_w / noise_w
}

/// Prefactor `P_t G_r lambda^2 d_x d_y / (64 pi^3)`.
fn power_prefactor(s: &Scenario) -> f64 {
    let lam = s.wavelength();
    s.tx_power_w * s.rx_gain * lam * lam * s.ris.element_width * s.ris.element_height
        / (64.0 * PI.powi(3))
}

fn finish(s: &Scenario, coherent_sum: f64) -> LinkResult {
    let received_power_w = power_prefactor(s) * coherent_sum * coherent_sum;
    LinkResult {
        received_power_w,
        mean_snr: received_power_w / s.noise_power_w,
        coherent_sum,
    }
}

/// Evaluates the pattern product `G_t F_t F_r` of single elements.
struct Weights {
    steer_az: f64,
    facing: f64,
}

impl Weights {
    fn new(s: &Scenario) -> Self {
        Self {
            steer_az: normal_azimuth(s.ris_center, s.tx_position, s.facing_sign()),
            facing: s.facing_sign(),
        }
    }

    /// `ray_t` and `ray_r` point from the element towards Tx and Rx.
    fn product(
        &self,
        s: &Scenario,
        normal: Vec3,
        ray_t: Vec3,
        ray_r: Vec3,
        az_t: f64,
        az_r: f64,
    ) -> f64 {
        let pm = s.pattern;
        let g_t = tx_gain(az_t, self.steer_az, s.hpbw_rad);
        if g_t == 0.0 {
            return 0.0;
        }
        let f_t = match (pm.tx_side, pm.angle) {
            (TxSidePattern::BeamOffset, PatternAngle::Azimuth) => {
                element_pattern(az_t - self.steer_az)
            }
            (TxSidePattern::BeamOffset, PatternAngle::Combined) => {
                let beam = (s.ris_center - s.tx_position).normalized();
                pattern_from_cos(beam.dot(-ray_t.normalized()))
            }
            (TxSidePattern::Incidence, PatternAngle::Azimuth) => element_pattern(az_t),
            (TxSidePattern::Incidence, PatternAngle::Combined) => {
                pattern_from_cos(normal.dot(ray_t.normalized()))
            }
        };
        let f_r = match pm.angle {
            PatternAngle::Azimuth => element_pattern(az_r),
            PatternAngle::Combined => pattern_from_cos(normal.dot(ray_r.normalized())),
        };
        g_t * f_t * f_r
    }
}

/// Near-field coherent received power over the elements of `layout`, phases
/// assumed perfectly compensated.
pub fn received_power(s: &Scenario, layout: &ElementLayout) -> Result<LinkResult> {
    if layout.is_empty() {
        return Err(Error::EmptyLayout);
    }
    let w = Weights::new(s);
    let sum: CompensatedSum = (0..layout.len())
        .map(|i| {
            let p = layout.positions[i];
            let g = w.product(
                s,
                layout.normals[i],
                s.tx_position - p,
                s.rx_position - p,
                layout.azimuth_t_per_element[i],
                layout.azimuth_r_per_element[i],
            );
            g.sqrt() / (layout.r1_per_element[i] * layout.r2_per_element[i])
        })
        .collect();
    Ok(finish(s, sum.value()))
}

/// Far-field form of the same sum: every element sees the Tx and Rx along the
/// centre directions at the centre distances `r1`, `r2`, with its own normal.
pub fn far_field_power(s: &Scenario, layout: &ElementLayout) -> Result<LinkResult> {
    if layout.is_empty() {
        return Err(Error::EmptyLayout);
    }
    let c = s.ris_center;
    let w = Weights::new(s);
    let ray_t = s.tx_position - c;
    let ray_r = s.rx_position - c;
    let r1 = ray_t.norm();
    let r2 = ray_r.norm();
    let az_t = normal_azimuth(c, s.tx_position, w.facing);
    let az_r = normal_azimuth(c, s.rx_position, w.facing);
    let sum: CompensatedSum = layout
        .normals
        .iter()
        .map(|&n| w.product(s, n, ray_t, ray_r, az_t, az_r).sqrt())
        .collect();
    Ok(finish(s, sum.value() / (r1 * r2)))
}
