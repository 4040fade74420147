//! Elliptical footprint of the transmit main lobe on the RIS plane.
//!
//! The lobe is a cone of half-angle `phi0` around the ray to the RIS centre.
//! Its two horizontal edges hit the plane at distances `a'` and `a*` from the
//! centre (law of sines in the azimuth plane), its two vertical edges at `b'`
//! and `b*`. The real footprint is an asymmetric oval; it is replaced by the
//! ellipse with the averaged semi-axes.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::scenario::{derive_center_geometry, CenterGeometry, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IlluminationEllipse {
    pub a_prime: f64,
    pub a_star: f64,
    pub b_prime: f64,
    pub b_star: f64,
    /// Semi-major axis, `(a' + a*) / 2`.
    pub a: f64,
    /// Semi-minor axis, `(b' + b*) / 2`.
    pub b: f64,
    pub area: f64,
    /// True when the vertical extent exceeded the horizontal one and the axes
    /// were exchanged so that `a >= b`.
    pub swapped: bool,
}

impl IlluminationEllipse {
    /// Semi-axis along the horizontal direction of the surface.
    pub fn horizontal_semi_axis(&self) -> f64 {
        if self.swapped {
            self.b
        } else {
            self.a
        }
    }

    pub fn vertical_semi_axis(&self) -> f64 {
        if self.swapped {
            self.a
        } else {
            self.b
        }
    }

    /// Ellipse with given semi-axes and symmetric segments, normalised to `a >= b`.
    pub fn from_semi_axes(horizontal: f64, vertical: f64) -> Self {
        let swapped = vertical > horizontal;
        let (a, b) = if swapped {
            (vertical, horizontal)
        } else {
            (horizontal, vertical)
        };
        Self {
            a_prime: a,
            a_star: a,
            b_prime: b,
            b_star: b,
            a,
            b,
            area: PI * a * b,
            swapped,
        }
    }
}

/// Footprint of a cone with half-angle `phi0` aimed at the RIS centre.
pub fn ellipse_axes(cg: &CenterGeometry, phi0: f64) -> Result<IlluminationEllipse> {
    let az = cg.azimuth_plane_t;
    let el = cg.elevation_t;
    if !(phi0 > 0.0 && phi0 < FRAC_PI_2) {
        return Err(Error::DegenerateBeam(format!(
            "half-angle {phi0} rad outside (0, pi/2)"
        )));
    }
    if az <= phi0 {
        return Err(Error::DegenerateBeam(format!(
            "azimuth to plane {:.4} deg <= beam half-angle {:.4} deg",
            az.to_degrees(),
            phi0.to_degrees()
        )));
    }
    if el.abs() + phi0 >= FRAC_PI_2 {
        return Err(Error::DegenerateBeam(format!(
            "elevation {:.4} deg + half-angle reaches the plane",
            el.to_degrees()
        )));
    }
    let chord = cg.r1 * phi0.sin();
    let a_prime = chord / (az + phi0).sin();
    let a_star = chord / (az - phi0).sin();
    let b_prime = chord / (el + phi0).cos();
    let b_star = chord / (el - phi0).cos();
    let h = 0.5 * (a_prime + a_star);
    let v = 0.5 * (b_prime + b_star);
    let swapped = v > h;
    let (a_prime, a_star, b_prime, b_star, a, b) = if swapped {
        (b_prime, b_star, a_prime, a_star, v, h)
    } else {
        (a_prime, a_star, b_prime, b_star, h, v)
    };
    Ok(IlluminationEllipse {
        a_prime,
        a_star,
        b_prime,
        b_star,
        a,
        b,
        area: PI * a * b,
        swapped,
    })
}

pub fn illuminated_area(e: &IlluminationEllipse) -> f64 {
    PI * e.a * e.b
}

/// Centre geometry and footprint for a scenario, using half the HPBW as the
/// cone half-angle.
pub fn illuminate(s: &Scenario) -> Result<(CenterGeometry, IlluminationEllipse)> {
    let cg = derive_center_geometry(s)?;
    let e = ellipse_axes(&cg, s.beam_half_angle())?;
    Ok((cg, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(r1: f64, az_deg: f64, el_deg: f64) -> CenterGeometry {
        CenterGeometry {
            r1,
            r2: 1.0,
            d1: r1,
            d2: 1.0,
            azimuth_plane_t: az_deg.to_radians(),
            azimuth_normal_t: (90.0 - az_deg).to_radians(),
            elevation_t: el_deg.to_radians(),
            azimuth_plane_r: FRAC_PI_2,
            azimuth_normal_r: 0.0,
            elevation_r: 0.0,
            wavelength: 0.1,
        }
    }

    #[test]
    fn broadside_is_circular() {
        let e = ellipse_axes(&cg(5.0, 90.0, 0.0), 2.5f64.to_radians()).unwrap();
        let expect = 5.0 * 2.5f64.to_radians().tan();
        assert!((e.a - e.b).abs() < 1e-12);
        assert!((e.a - expect).abs() < 1e-12);
        assert!((e.a - 0.21830).abs() < 1e-5);
        assert!((illuminated_area(&e) - PI * expect * expect).abs() < 1e-15);
        assert!((illuminated_area(&e) - 0.14970).abs() < 5e-5);
    }

    #[test]
    fn oblique_incidence() {
        let e = ellipse_axes(&cg(5.0, 60.0, 20.0), 2.5f64.to_radians()).unwrap();
        assert!((e.a - 0.25224).abs() < 1e-5, "{}", e.a);
        assert!((e.b - 0.23237).abs() < 1e-5, "{}", e.b);
        assert!((e.area - 0.18413).abs() < 1e-5);
        assert!(!e.swapped);
        assert!(e.a_star > e.a_prime);
    }

    #[test]
    fn grazing_beam_is_an_error() {
        let r = ellipse_axes(&cg(5.0, 2.5, 0.0), 2.5f64.to_radians());
        assert!(matches!(r, Err(Error::DegenerateBeam(_))));
        let r = ellipse_axes(&cg(5.0, 90.0, 88.0), 2.5f64.to_radians());
        assert!(matches!(r, Err(Error::DegenerateBeam(_))));
    }

    #[test]
    fn zero_axis_gives_zero_area() {
        let e = IlluminationEllipse::from_semi_axes(0.3, 0.0);
        assert_eq!(illuminated_area(&e), 0.0);
    }

    #[test]
    fn steep_elevation_swaps_axes() {
        let e = ellipse_axes(&cg(3.0, 85.0, 50.0), 2.5f64.to_radians()).unwrap();
        assert!(e.swapped);
        assert!(e.a >= e.b);
        assert_eq!(e.vertical_semi_axis(), e.a);
        assert!((e.a - 0.5 * (e.a_prime + e.a_star)).abs() < 1e-15);
    }

    #[test]
    fn negative_elevation_keeps_segments_positive() {
        let e = ellipse_axes(&cg(4.0, 70.0, -15.0), 2.5f64.to_radians()).unwrap();
        assert!(e.b_prime > 0.0 && e.b_star > 0.0);
        assert!(e.b_prime != e.b_star);
    }

    #[test]
    fn grazing_elongates_far_segment() {
        let phi0 = 2.5f64.to_radians();
        let mut last = 0.0;
        for az in (4..=90).rev() {
            let e = ellipse_axes(&cg(5.0, az as f64, 0.0), phi0).unwrap();
            assert!(!e.swapped);
            assert!(e.a_star > last);
            last = e.a_star;
        }
    }
}
