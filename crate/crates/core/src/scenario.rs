//! Deployment description and the centre-of-RIS geometry derived from it.
//!
//! Coordinates follow the usual indoor layout: the transmitter sits at
//! `(x_t, y_t, h_t)` (normally the origin column), the RIS lies in the vertical
//! plane `y = y_s` and the receiver is on the same side of that plane as the
//! transmitter.
//!
//! Two azimuth conventions are in use and both are kept, under distinct names:
//!
//! * *plane* azimuth: angle between the ray and the RIS plane, 90° at broadside.
//!   The illuminated-ellipse construction uses this one.
//! * *normal* azimuth: angle between the ray and the surface normal, 0 at
//!   broadside. Per-element patterns and beam steering use this one.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::link::PatternModel;
use crate::vec3::Vec3;
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    Linear1D,
    Planar2D,
    Cylindrical3D,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [
        Geometry::Linear1D,
        Geometry::Planar2D,
        Geometry::Cylindrical3D,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Geometry::Linear1D => "1d",
            Geometry::Planar2D => "2d",
            Geometry::Cylindrical3D => "3d",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1d" | "linear" | "linear1d" => Ok(Geometry::Linear1D),
            "2d" | "planar" | "planar2d" => Ok(Geometry::Planar2D),
            "3d" | "cylindrical" | "cylindrical3d" => Ok(Geometry::Cylindrical3D),
            other => Err(Error::parameter(
                "geometry",
                format!("unknown geometry '{other}'"),
            )),
        }
    }
}

/// Element inventory of the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisInventory {
    pub geometry: Geometry,
    pub total_elements: usize,
    pub element_width: f64,
    pub element_height: f64,
    pub element_spacing: f64,
}

impl RisInventory {
    /// Half-wavelength elements and gaps, the usual sub-wavelength design.
    pub fn half_wavelength(geometry: Geometry, total_elements: usize, wavelength: f64) -> Self {
        let h = wavelength / 2.0;
        Self {
            geometry,
            total_elements,
            element_width: h,
            element_height: h,
            element_spacing: h,
        }
    }

    /// Centre-to-centre element pitch, element width plus gap.
    pub fn pitch(&self) -> f64 {
        self.element_width + self.element_spacing
    }
}

/// Rayleigh scales of the Tx–RIS and RIS–Rx fading amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    pub sigma1: f64,
    pub sigma2: f64,
}

impl FadingParams {
    pub fn product(&self) -> f64 {
        self.sigma1 * self.sigma2
    }
}

impl Default for FadingParams {
    fn default() -> Self {
        Self {
            sigma1: 1.0,
            sigma2: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub tx_position: Vec3,
    pub rx_position: Vec3,
    pub ris_center: Vec3,
    pub frequency_hz: f64,
    /// Full half-power beamwidth of the transmit beam.
    pub hpbw_rad: f64,
    pub tx_power_w: f64,
    pub noise_power_w: f64,
    pub rx_gain: f64,
    pub ris: RisInventory,
    pub fading: FadingParams,
    pub pattern: PatternModel,
}

impl Scenario {
    /// Indoor reference deployment: 100 half-wavelength elements at 3.5 GHz,
    /// Tx at (0, 0, 3) m, Rx at (5, 0, 1.5) m, RIS centred at (2, 2, 3) m,
    /// 5° beam, 0 dBm transmit power, -100 dBm noise, unit fading scales.
    pub fn reference(geometry: Geometry) -> Self {
        let frequency_hz = 3.5e9;
        let wavelength = SPEED_OF_LIGHT / frequency_hz;
        Self {
            tx_position: Vec3::new(0.0, 0.0, 3.0),
            rx_position: Vec3::new(5.0, 0.0, 1.5),
            ris_center: Vec3::new(2.0, 2.0, 3.0),
            frequency_hz,
            hpbw_rad: 5f64.to_radians(),
            tx_power_w: 1e-3,
            noise_power_w: 1e-13,
            rx_gain: 1.0,
            ris: RisInventory::half_wavelength(geometry, 100, wavelength),
            fading: FadingParams::default(),
            pattern: PatternModel::default(),
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    /// Half-angle of the beam cone used for the illuminated ellipse.
    pub fn beam_half_angle(&self) -> f64 {
        self.hpbw_rad / 2.0
    }

    pub fn with_geometry(&self, geometry: Geometry) -> Self {
        let mut s = self.clone();
        s.ris.geometry = geometry;
        s
    }

    /// +1 when the transmitter is on the `y < y_s` side of the RIS plane.
    pub(crate) fn facing_sign(&self) -> f64 {
        if self.ris_center.y >= self.tx_position.y {
            1.0
        } else {
            -1.0
        }
    }

    /// Outward unit normal of the RIS at its centre (points towards the Tx side).
    pub fn center_normal(&self) -> Vec3 {
        Vec3::new(0.0, -self.facing_sign(), 0.0)
    }
}

/// Geometric quantities at the RIS centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterGeometry {
    /// 3D Tx-to-centre distance.
    pub r1: f64,
    /// 3D centre-to-Rx distance.
    pub r2: f64,
    /// Horizontal Tx-to-centre distance.
    pub d1: f64,
    pub d2: f64,
    /// Angle between the Tx ray and the RIS plane, 90° at broadside.
    pub azimuth_plane_t: f64,
    /// Signed angle between the Tx ray and the surface normal.
    pub azimuth_normal_t: f64,
    pub elevation_t: f64,
    pub azimuth_plane_r: f64,
    pub azimuth_normal_r: f64,
    pub elevation_r: f64,
    pub wavelength: f64,
}

/// Signed normal-convention azimuth of the ray from `from` towards `to`, with
/// the surface facing direction `facing` (sign of the normal along -y).
///
/// Equals `atan((x_from - x_to) / (y_from - y_to))` for points in front of the
/// surface; points behind it get |azimuth| > 90°.
pub(crate) fn normal_azimuth(from: Vec3, to: Vec3, facing: f64) -> f64 {
    let depth = (from.y - to.y) * facing;
    (from.x - to.x).atan2(depth)
}

/// Elevation of `from` as seen from `to`: `atan((z_from - z_to) / d_horizontal)`.
pub(crate) fn elevation(from: Vec3, to: Vec3) -> f64 {
    let d = from - to;
    d.z.atan2(d.horizontal_norm())
}

pub fn derive_center_geometry(s: &Scenario) -> Result<CenterGeometry> {
    let c = s.ris_center;
    if c.y == s.tx_position.y {
        return Err(Error::RisInTxPlane);
    }
    let facing = s.facing_sign();
    let to_tx = c - s.tx_position;
    let to_rx = c - s.rx_position;
    let azimuth_normal_t = normal_azimuth(c, s.tx_position, facing);
    let azimuth_normal_r = normal_azimuth(c, s.rx_position, facing);
    Ok(CenterGeometry {
        r1: to_tx.norm(),
        r2: to_rx.norm(),
        d1: to_tx.horizontal_norm(),
        d2: to_rx.horizontal_norm(),
        azimuth_plane_t: FRAC_PI_2 - azimuth_normal_t.abs(),
        azimuth_normal_t,
        elevation_t: elevation(c, s.tx_position),
        azimuth_plane_r: FRAC_PI_2 - azimuth_normal_r.abs(),
        azimuth_normal_r,
        elevation_r: elevation(c, s.rx_position),
        wavelength: s.wavelength(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

/// Violated scenario invariants; empty when the scenario is usable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    fn push(&mut self, code: &'static str, message: impl Into<String>) {
        self.violations.push(Violation {
            code,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.code, v.message)?;
        }
        Ok(())
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

pub fn validate(s: &Scenario) -> ValidationReport {
    let mut r = ValidationReport::default();
    for (name, p) in [
        ("tx_position", s.tx_position),
        ("rx_position", s.rx_position),
        ("ris_center", s.ris_center),
    ] {
        if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
            r.push(
                "non-finite-position",
                format!("{name} has a non-finite coordinate"),
            );
        }
    }
    if !positive(s.frequency_hz) {
        r.push("frequency", "frequency_hz must be > 0");
    }
    if !(s.hpbw_rad.is_finite() && s.hpbw_rad > 0.0 && s.hpbw_rad < FRAC_PI_2) {
        r.push("hpbw", "hpbw must lie in (0, 90) degrees");
    }
    if s.ris_center.y == s.tx_position.y {
        r.push(
            "ris-in-tx-plane",
            "ris_center y equals the transmitter y; the RIS plane contains the Tx",
        );
    } else {
        let side_tx = (s.tx_position.y - s.ris_center.y).signum();
        let side_rx = (s.rx_position.y - s.ris_center.y).signum();
        if side_rx != side_tx {
            r.push(
                "rx-behind-ris",
                "rx_position is not on the transmitter side of the RIS plane",
            );
        }
    }
    for (name, v) in [
        ("tx_power", s.tx_power_w),
        ("noise_power", s.noise_power_w),
        ("rx_gain", s.rx_gain),
    ] {
        if !positive(v) {
            r.push("power", format!("{name} must be > 0"));
        }
    }
    let inv = &s.ris;
    if inv.total_elements == 0 {
        r.push("element-count", "total_elements must be > 0");
    }
    if inv.geometry == Geometry::Planar2D {
        let k = (inv.total_elements as f64).sqrt().round() as usize;
        if k * k != inv.total_elements {
            r.push(
                "non-square element count",
                format!(
                    "planar RIS needs a perfect-square element count, got {}",
                    inv.total_elements
                ),
            );
        }
    }
    let half_lambda = s.wavelength() / 2.0;
    let limit = half_lambda * (1.0 + 1e-12);
    for (name, v) in [
        ("element_width", inv.element_width),
        ("element_height", inv.element_height),
        ("element_spacing", inv.element_spacing),
    ] {
        if !positive(v) {
            r.push("element-size", format!("{name} must be > 0"));
        } else if s.frequency_hz > 0.0 && v > limit {
            r.push(
                "element-size",
                format!("{name} = {v} m exceeds half a wavelength ({half_lambda} m)"),
            );
        }
    }
    if !(positive(s.fading.sigma1) && positive(s.fading.sigma2)) {
        r.push("fading", "sigma1 and sigma2 must be > 0");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(x: f64) -> f64 {
        x.to_degrees()
    }

    fn with_ris(c: Vec3) -> Scenario {
        let mut s = Scenario::reference(Geometry::Planar2D);
        s.ris_center = c;
        s
    }

    #[test]
    fn broadside_equal_heights() {
        let cg = derive_center_geometry(&with_ris(Vec3::new(0.0, 2.0, 3.0))).unwrap();
        assert!((cg.r1 - 2.0).abs() < 1e-15);
        assert!((cg.d1 - 2.0).abs() < 1e-15);
        assert_eq!(cg.elevation_t, 0.0);
        assert!((deg(cg.azimuth_plane_t) - 90.0).abs() < 1e-12);
        assert!((cg.wavelength - 0.085655).abs() < 1e-6);
    }

    #[test]
    fn diagonal_symmetry() {
        let cg = derive_center_geometry(&with_ris(Vec3::new(2.0, 2.0, 3.0))).unwrap();
        assert!((cg.d1 - 8f64.sqrt()).abs() < 1e-12);
        assert!((cg.r1 - 8f64.sqrt()).abs() < 1e-12);
        assert!((deg(cg.azimuth_plane_t) - 45.0).abs() < 1e-12);
        assert!((deg(cg.azimuth_normal_t) - 45.0).abs() < 1e-12);
    }

    #[test]
    fn raised_ris() {
        let cg = derive_center_geometry(&with_ris(Vec3::new(2.0, 2.0, 4.0))).unwrap();
        assert!((cg.r1 - 3.0).abs() < 1e-12);
        // atan(1 / sqrt(8)) = 19.4712 deg
        assert!((deg(cg.elevation_t) - 19.471_220_634).abs() < 1e-6);
        assert!((cg.r1 * cg.r1 - cg.d1 * cg.d1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_ris_in_tx_plane() {
        let s = with_ris(Vec3::new(2.0, 0.0, 3.0));
        assert_eq!(derive_center_geometry(&s), Err(Error::RisInTxPlane));
        assert!(validate(&s).contains("ris-in-tx-plane"));
    }

    #[test]
    fn reference_scenario_is_valid() {
        for g in Geometry::ALL {
            let r = validate(&Scenario::reference(g));
            assert!(r.is_ok(), "{g}: {r}");
        }
    }

    #[test]
    fn non_square_planar_count() {
        let mut s = Scenario::reference(Geometry::Planar2D);
        s.ris.total_elements = 99;
        assert!(validate(&s).contains("non-square element count"));
        s.ris.geometry = Geometry::Linear1D;
        assert!(validate(&s).is_ok());
    }

    #[test]
    fn oversized_elements_flagged() {
        let mut s = Scenario::reference(Geometry::Linear1D);
        s.ris.element_width = s.wavelength();
        assert!(validate(&s).contains("element-size"));
    }

    #[test]
    fn mirror_keeps_magnitudes() {
        let s = with_ris(Vec3::new(1.3, 2.0, 3.7));
        let mut m = s.clone();
        m.tx_position = s.tx_position.mirror_x();
        m.rx_position = s.rx_position.mirror_x();
        m.ris_center = s.ris_center.mirror_x();
        let a = derive_center_geometry(&s).unwrap();
        let b = derive_center_geometry(&m).unwrap();
        assert_eq!(a.r1, b.r1);
        assert_eq!(a.r2, b.r2);
        assert_eq!(a.d1, b.d1);
        assert_eq!(a.elevation_t, b.elevation_t);
        assert_eq!(a.azimuth_plane_t, b.azimuth_plane_t);
        assert_eq!(a.azimuth_normal_t, -b.azimuth_normal_t);
    }
}
