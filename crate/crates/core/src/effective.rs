//! Effective (illuminated) element counts per geometry and the matching
//! Fraunhofer distances.
//!
//! Counts come from an illuminated area divided by a per-element footprint of
//! `FOOTPRINT_FACTOR * d_s^2`, floored once at the very end. The footprint
//! factor is kept as a named constant; the element pitch of the layout implies
//! a larger footprint (`(d_x + d_s)(d_y + d_s)`), see the README.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::illumination::IlluminationEllipse;
use crate::scenario::{Geometry, RisInventory};

/// Element footprint in units of `d_s^2`.
pub const FOOTPRINT_FACTOR: f64 = 2.0;

/// Tolerance for inverse-trig arguments that overshoot ±1 through rounding.
const TRIG_CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    FullyIlluminated,
    PartialBothAxes,
    PartialMajorOnly,
    CylWrapAround,
    CylMixed,
    CylContained,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::FullyIlluminated => "full",
            Branch::PartialBothAxes => "partial-both",
            Branch::PartialMajorOnly => "partial-major",
            Branch::CylWrapAround => "cyl-wrap",
            Branch::CylMixed => "cyl-mixed",
            Branch::CylContained => "cyl-contained",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCount {
    pub n_eff: usize,
    pub branch: Branch,
    /// RIS length (1D), side `l_2D` (2D) or height `l_3D` (3D).
    pub ris_extent: f64,
    /// `I_2D = (2a - l_2D)(2b - l_2D)`, planar only.
    pub overlap_indicator: Option<f64>,
    /// Count before flooring and capping.
    pub raw_count: f64,
    /// True when the count sits at the geometry's cap.
    pub saturated: bool,
}

/// Illuminated area ahead of flooring. `None` means the whole visible surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreFloorArea {
    pub area: Option<f64>,
    pub branch: Branch,
}

pub(crate) fn clamp_unit(x: f64, what: &'static str) -> Result<f64> {
    if x.abs() <= 1.0 {
        Ok(x)
    } else if x.abs() <= 1.0 + TRIG_CLAMP_TOL {
        Ok(x.signum())
    } else {
        Err(Error::TrigArgument(what))
    }
}

/// Side of the square planar RIS, `(2 sqrt(N) - 1) d_x`.
pub fn planar_extent(inv: &RisInventory) -> f64 {
    (2.0 * (inv.total_elements as f64).sqrt() - 1.0) * inv.element_width
}

/// Height (and diameter) of the cylindrical RIS, `sqrt((d_x d_y + d_s^2) N / pi)`.
pub fn cylinder_extent(inv: &RisInventory) -> f64 {
    ((inv.element_width * inv.element_height + inv.element_spacing.powi(2))
        * inv.total_elements as f64
        / PI)
        .sqrt()
}

/// Total length of the linear RIS.
pub fn linear_extent(inv: &RisInventory) -> f64 {
    let n = inv.total_elements as f64;
    n * inv.element_width + (n - 1.0) * inv.element_spacing
}

pub fn element_footprint(inv: &RisInventory) -> f64 {
    FOOTPRINT_FACTOR * inv.element_spacing.powi(2)
}

/// Maximum number of contributing elements: `N`, or `N/2` on the cylinder
/// since only a quarter of it faces the link.
pub fn count_cap(inv: &RisInventory) -> usize {
    match inv.geometry {
        Geometry::Cylindrical3D => inv.total_elements / 2,
        _ => inv.total_elements,
    }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if b > a {
        (b, a)
    } else {
        (a, b)
    }
}

/// Part of the ellipse beyond the two chords `x = ±l/2`.
pub fn clipped_cap_area(a: f64, b: f64, l: f64) -> Result<f64> {
    let ratio = clamp_unit(l / (2.0 * a), "clipped_cap_area")?;
    let root = (4.0 * a * a - l * l).max(0.0).sqrt();
    Ok(PI * a * b - (b * l / (2.0 * a)) * root - 2.0 * a * b * ratio.asin())
}

/// Arc length on a circle of diameter `l` whose half-chord is `a` (`a <= l/2`).
pub fn arc_semi_axis(a: f64, l: f64) -> Result<f64> {
    let c = clamp_unit(2.0 * a / l, "arc_semi_axis")?;
    Ok(PI * l / 4.0 - (l / 2.0) * c.acos())
}

pub fn planar_pre_floor(a: f64, b: f64, l: f64) -> Result<PreFloorArea> {
    let (a, b) = ordered(a, b);
    let indicator = (2.0 * a - l) * (2.0 * b - l);
    let sm = PI * a * b;
    let (area, branch) = if indicator > 0.0 {
        if sm >= l * l {
            (None, Branch::FullyIlluminated)
        } else {
            (Some(sm), Branch::PartialBothAxes)
        }
    } else if indicator == 0.0 || a <= l / 2.0 {
        (Some(sm), Branch::PartialBothAxes)
    } else {
        (
            Some(sm - clipped_cap_area(a, b, l)?),
            Branch::PartialMajorOnly,
        )
    };
    Ok(PreFloorArea { area, branch })
}

/// The two parts `(S2, S3)` of the illuminated area when the spot is wider
/// than the cylinder diameter but not taller than it.
pub fn cylinder_mixed_terms(a: f64, b: f64, l: f64) -> (f64, f64) {
    // S2 = 2ab cos^2(arccos(pi l / 4a)); cos(arccos x) = x is used directly
    // because the argument exceeds 1 for l/2 < a < pi l / 4.
    let ratio = PI * l / (4.0 * a);
    let s2 = 2.0 * a * b * ratio * ratio;
    let s3 = (PI * b * l / (2.0 * a)) * (4.0 * a * a - l * l).max(0.0).sqrt();
    (s2, s3)
}

pub fn cylinder_pre_floor(a: f64, b: f64, l: f64) -> Result<PreFloorArea> {
    let (a, b) = ordered(a, b);
    let half = l / 2.0;
    if a <= half {
        let arc = arc_semi_axis(a, l)?;
        return Ok(PreFloorArea {
            area: Some(PI * arc * b),
            branch: Branch::CylContained,
        });
    }
    if b > half {
        return Ok(PreFloorArea {
            area: None,
            branch: Branch::CylWrapAround,
        });
    }
    let (s2, s3) = cylinder_mixed_terms(a, b, l);
    Ok(PreFloorArea {
        area: Some(s2 + s3),
        branch: Branch::CylMixed,
    })
}

fn floor_count(raw: f64, cap: usize) -> (usize, bool) {
    let n = if raw <= 0.0 { 0 } else { raw.floor() as usize };
    if n >= cap {
        (cap, true)
    } else {
        (n, false)
    }
}

pub fn n_eff_1d(e: &IlluminationEllipse, inv: &RisInventory) -> EffectiveCount {
    let raw = e.horizontal_semi_axis() / inv.element_spacing;
    let (n_eff, saturated) = floor_count(raw, inv.total_elements);
    EffectiveCount {
        n_eff,
        branch: if saturated {
            Branch::FullyIlluminated
        } else {
            Branch::PartialMajorOnly
        },
        ris_extent: linear_extent(inv),
        overlap_indicator: None,
        raw_count: raw,
        saturated,
    }
}

pub fn n_eff_2d(e: &IlluminationEllipse, inv: &RisInventory) -> Result<EffectiveCount> {
    let l = planar_extent(inv);
    let pre = planar_pre_floor(e.a, e.b, l)?;
    let cap = inv.total_elements;
    let raw = pre
        .area
        .map_or(cap as f64, |area| area / element_footprint(inv));
    let (n_eff, saturated) = floor_count(raw, cap);
    Ok(EffectiveCount {
        n_eff,
        branch: pre.branch,
        ris_extent: l,
        overlap_indicator: Some((2.0 * e.a - l) * (2.0 * e.b - l)),
        raw_count: raw,
        saturated,
    })
}

pub fn n_eff_3d(e: &IlluminationEllipse, inv: &RisInventory) -> Result<EffectiveCount> {
    let l = cylinder_extent(inv);
    let pre = cylinder_pre_floor(e.a, e.b, l)?;
    let cap = count_cap(inv);
    let raw = pre
        .area
        .map_or(cap as f64, |area| area / element_footprint(inv));
    let (n_eff, saturated) = floor_count(raw, cap);
    Ok(EffectiveCount {
        n_eff,
        branch: pre.branch,
        ris_extent: l,
        overlap_indicator: None,
        raw_count: raw,
        saturated,
    })
}

pub fn effective_count(e: &IlluminationEllipse, inv: &RisInventory) -> Result<EffectiveCount> {
    match inv.geometry {
        Geometry::Linear1D => Ok(n_eff_1d(e, inv)),
        Geometry::Planar2D => n_eff_2d(e, inv),
        Geometry::Cylindrical3D => n_eff_3d(e, inv),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NearField,
    FarField,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::NearField => "near",
            Regime::FarField => "far",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraunhoferResult {
    pub distance: f64,
    /// Largest dimension `D` of the active aperture.
    pub aperture: f64,
    pub regime: Regime,
}

/// Largest dimension of the active part of the surface.
///
/// A saturated count uses the whole surface (diagonal of the square, diagonal
/// of the unrolled half cylinder) so the distance stays constant once the
/// count stops growing.
pub fn active_aperture(
    count: &EffectiveCount,
    e: &IlluminationEllipse,
    inv: &RisInventory,
) -> Result<f64> {
    if count.n_eff == 0 {
        return Err(Error::ZeroAperture);
    }
    let n = count.n_eff as f64;
    let d = match inv.geometry {
        Geometry::Linear1D => (n - 1.0) * inv.element_spacing + n * inv.element_width,
        Geometry::Planar2D => {
            let full = 2f64.sqrt() * count.ris_extent;
            if count.saturated || count.branch == Branch::FullyIlluminated {
                full
            } else {
                (2.0 * e.a).min(full)
            }
        }
        Geometry::Cylindrical3D => {
            let l = count.ris_extent;
            if count.saturated || count.branch == Branch::CylWrapAround {
                (1.0 + PI * PI / 4.0).sqrt() * l
            } else {
                let arc = arc_semi_axis(e.a.min(l / 2.0), l)?;
                2.0 * arc
            }
        }
    };
    Ok(d)
}

/// Fraunhofer distance `2 D^2 / lambda`, compared against `link_distance`.
pub fn fraunhofer(
    count: &EffectiveCount,
    e: &IlluminationEllipse,
    inv: &RisInventory,
    wavelength: f64,
    link_distance: f64,
) -> Result<FraunhoferResult> {
    let aperture = active_aperture(count, e, inv)?;
    let distance = 2.0 * aperture * aperture / wavelength;
    Ok(FraunhoferResult {
        distance,
        aperture,
        regime: if link_distance < distance {
            Regime::NearField
        } else {
            Regime::FarField
        },
    })
}
