//! Element coordinates for each geometry, under full or partial illumination,
//! with per-element distances and angles towards the Tx and the Rx.
//!
//! Grids are centred on the RIS centre: even counts use half-integer offsets,
//! odd counts integer offsets, so the centroid always sits at the centre.
//! The pitch is element width plus gap along both surface axes.
//!
//! The cylinder stands on a vertical axis behind the surface, radius
//! `l_3D / 2`. Its visible quarter carries `N/2` elements: rows at the planar
//! pitch, columns at an angular step of `d_s / l_3D`.

use std::cmp::Ordering;

use crate::effective::{arc_semi_axis, cylinder_extent, EffectiveCount};
use crate::error::{Error, Result};
use crate::illumination::IlluminationEllipse;
use crate::scenario::{elevation, normal_azimuth, Geometry, RisInventory, Scenario};
use crate::vec3::Vec3;

/// One element before the link geometry is attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub position: Vec3,
    /// Outward unit normal.
    pub normal: Vec3,
    /// Horizontal in-surface offset from the centre (arc length on the cylinder).
    pub u: f64,
    /// Vertical in-surface offset from the centre.
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementLayout {
    pub geometry: Geometry,
    pub elements: Vec<Element>,
    pub positions: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub r1_per_element: Vec<f64>,
    pub r2_per_element: Vec<f64>,
    /// Normal-convention azimuth of each element seen from the Tx.
    pub azimuth_t_per_element: Vec<f64>,
    pub elevation_t_per_element: Vec<f64>,
    pub azimuth_r_per_element: Vec<f64>,
    pub elevation_r_per_element: Vec<f64>,
}

impl ElementLayout {
    pub fn new(s: &Scenario, geometry: Geometry, elements: Vec<Element>) -> Self {
        let facing = s.facing_sign();
        let (tx, rx) = (s.tx_position, s.rx_position);
        let positions: Vec<Vec3> = elements.iter().map(|e| e.position).collect();
        Self {
            geometry,
            normals: elements.iter().map(|e| e.normal).collect(),
            r1_per_element: positions.iter().map(|p| p.distance(tx)).collect(),
            r2_per_element: positions.iter().map(|p| p.distance(rx)).collect(),
            azimuth_t_per_element: positions
                .iter()
                .map(|&p| normal_azimuth(p, tx, facing))
                .collect(),
            elevation_t_per_element: positions.iter().map(|&p| elevation(p, tx)).collect(),
            azimuth_r_per_element: positions
                .iter()
                .map(|&p| normal_azimuth(p, rx, facing))
                .collect(),
            elevation_r_per_element: positions.iter().map(|&p| elevation(p, rx)).collect(),
            positions,
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Offsets `(k - (n - 1) / 2) * step` for `k = 0..n`.
pub fn centered_offsets(n: usize, step: f64) -> Vec<f64> {
    let mid = (n as f64 - 1.0) / 2.0;
    (0..n).map(|k| (k as f64 - mid) * step).collect()
}

/// Law of cosines `sqrt(r^2 + o^2 + 2 r o cos(gamma))` for an element at
/// signed offset `o` along the array axis, `gamma` being the angle between the
/// axis and the ray from the Tx to the centre.
pub fn law_of_cosines(r: f64, offset: f64, cos_gamma: f64) -> f64 {
    (r * r + offset * offset + 2.0 * r * offset * cos_gamma).sqrt()
}

/// Unit vector along the horizontal surface axis (+x).
const SURFACE_U: Vec3 = Vec3::new(1.0, 0.0, 0.0);

fn planar_element(s: &Scenario, u: f64, v: f64) -> Element {
    let c = s.ris_center;
    Element {
        position: Vec3::new(c.x + u, c.y, c.z + v),
        normal: s.center_normal(),
        u,
        v,
    }
}

/// `n_eff` elements along the x axis through the RIS centre.
pub fn layout_1d(s: &Scenario, count: &EffectiveCount) -> ElementLayout {
    let elems = centered_offsets(count.n_eff, s.ris.pitch())
        .into_iter()
        .map(|u| planar_element(s, u, 0.0))
        .collect();
    ElementLayout::new(s, Geometry::Linear1D, elems)
}

fn planar_side(inv: &RisInventory) -> usize {
    (inv.total_elements as f64).sqrt().round() as usize
}

fn planar_grid(s: &Scenario) -> Vec<Element> {
    let k = planar_side(&s.ris);
    let offs = centered_offsets(k, s.ris.pitch());
    offs.iter()
        .flat_map(|&v| offs.iter().map(move |&u| (u, v)))
        .map(|(u, v)| planar_element(s, u, v))
        .collect()
}

/// Full `sqrt(N) x sqrt(N)` grid in the plane `y = y_s`, row-major from the
/// lowest row.
pub fn layout_2d_full(s: &Scenario) -> ElementLayout {
    ElementLayout::new(s, Geometry::Planar2D, planar_grid(s))
}

/// Rows and columns of the visible quarter cylinder.
pub fn cylinder_grid(inv: &RisInventory) -> (usize, usize) {
    let l = cylinder_extent(inv);
    let rows = ((l / inv.pitch()).round() as usize).max(1);
    let visible = (inv.total_elements / 2).max(1);
    let mut cols = ((inv.total_elements as f64 * inv.pitch() / (2.0 * l)).round() as usize).max(1);
    while cols * rows < visible {
        cols += 1;
    }
    (rows, cols)
}

fn cylinder_elements(s: &Scenario) -> Vec<Element> {
    let inv = &s.ris;
    let l = cylinder_extent(inv);
    let radius = l / 2.0;
    let n0 = s.center_normal();
    let axis = s.ris_center - n0 * radius;
    let (rows, cols) = cylinder_grid(inv);
    let heights = centered_offsets(rows, inv.pitch());
    let angles = centered_offsets(cols, inv.element_spacing / l);
    let mut elems = Vec::with_capacity(rows * cols);
    for &v in &heights {
        for &theta in &angles {
            let normal = n0 * theta.cos() + SURFACE_U * theta.sin();
            let p = axis + normal * radius;
            elems.push(Element {
                position: Vec3::new(p.x, p.y, p.z + v),
                normal,
                u: radius * theta,
                v,
            });
        }
    }
    elems
}

/// Visible quarter of the cylinder, row-major from the lowest row.
pub fn layout_3d_full(s: &Scenario) -> ElementLayout {
    ElementLayout::new(s, Geometry::Cylindrical3D, cylinder_elements(s))
}

fn full_elements(s: &Scenario) -> Vec<Element> {
    match s.ris.geometry {
        Geometry::Linear1D => centered_offsets(s.ris.total_elements, s.ris.pitch())
            .into_iter()
            .map(|u| planar_element(s, u, 0.0))
            .collect(),
        Geometry::Planar2D => planar_grid(s),
        Geometry::Cylindrical3D => cylinder_elements(s),
    }
}

pub fn layout_full(s: &Scenario) -> ElementLayout {
    ElementLayout::new(s, s.ris.geometry, full_elements(s))
}

/// Selection semi-axes in surface coordinates. On the cylinder the horizontal
/// semi-axis is mapped from chord to arc length.
fn selection_axes(s: &Scenario, e: &IlluminationEllipse) -> Result<(f64, f64)> {
    let h = e.horizontal_semi_axis();
    let v = e.vertical_semi_axis();
    if s.ris.geometry == Geometry::Cylindrical3D {
        let l = cylinder_extent(&s.ris);
        return Ok((arc_semi_axis(h.min(l / 2.0), l)?, v));
    }
    Ok((h, v))
}

fn select(
    s: &Scenario,
    full: &[Element],
    e: &IlluminationEllipse,
    need: usize,
) -> Result<Vec<Element>> {
    if full.len() < need {
        return Err(Error::InsufficientElements {
            available: full.len(),
            required: need,
        });
    }
    if full.len() == need {
        return Ok(full.to_vec());
    }
    let (a, b) = selection_axes(s, e)?;
    let radius = |el: &Element| {
        let ru = if a > 0.0 {
            el.u / a
        } else {
            f64::INFINITY * el.u.abs()
        };
        let rv = if b > 0.0 {
            el.v / b
        } else {
            f64::INFINITY * el.v.abs()
        };
        let r = ru * ru + rv * rv;
        if r.is_nan() {
            0.0
        } else {
            r
        }
    };
    let mut order: Vec<(f64, usize)> = full
        .iter()
        .enumerate()
        .map(|(i, el)| (radius(el), i))
        .collect();
    order.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap_or(Ordering::Equal)
            .then(x.1.cmp(&y.1))
    });
    let mut keep: Vec<usize> = order.into_iter().take(need).map(|(_, i)| i).collect();
    keep.sort_unstable();
    Ok(keep.into_iter().map(|i| full[i]).collect())
}

/// The `count.n_eff` elements of `full` with the smallest normalised elliptic
/// radius `(u/a)^2 + (v/b)^2`, ties broken by index, returned in index order.
pub fn layout_partial(
    s: &Scenario,
    full: &ElementLayout,
    e: &IlluminationEllipse,
    count: &EffectiveCount,
) -> Result<ElementLayout> {
    let elems = select(s, &full.elements, e, count.n_eff)?;
    Ok(ElementLayout::new(s, full.geometry, elems))
}

/// Layout of the effective elements for a scenario.
pub fn element_layout(
    s: &Scenario,
    e: &IlluminationEllipse,
    count: &EffectiveCount,
) -> Result<ElementLayout> {
    match s.ris.geometry {
        Geometry::Linear1D => Ok(layout_1d(s, count)),
        g => {
            let elems = select(s, &full_elements(s), e, count.n_eff)?;
            Ok(ElementLayout::new(s, g, elems))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::{effective_count, Branch};
    use crate::illumination::illuminate;

    fn count(n: usize) -> EffectiveCount {
        EffectiveCount {
            n_eff: n,
            branch: Branch::PartialBothAxes,
            ris_extent: 1.0,
            overlap_indicator: None,
            raw_count: n as f64,
            saturated: false,
        }
    }

    fn scenario(g: Geometry, n: usize) -> Scenario {
        let mut s = Scenario::reference(g);
        s.ris.total_elements = n;
        s
    }

    #[test]
    fn law_of_cosines_examples() {
        assert_eq!(law_of_cosines(2.0, 0.0, 0.3), 2.0);
        let r = law_of_cosines(2.0, 0.0428, 0.0);
        assert!((r - 2.000458).abs() < 1e-6);
        assert_eq!(
            law_of_cosines(2.0, 0.1, 0.0),
            law_of_cosines(2.0, -0.1, 0.0)
        );
    }

    #[test]
    fn linear_law_of_cosines_matches_euclid() {
        let s = Scenario::reference(Geometry::Linear1D);
        let lay = layout_1d(&s, &count(9));
        let to_c = s.ris_center - s.tx_position;
        let r1 = to_c.norm();
        let cos_g = to_c.x / r1;
        for (el, r) in lay.elements.iter().zip(&lay.r1_per_element) {
            assert!((law_of_cosines(r1, el.u, cos_g) - r).abs() < 1e-12);
        }
        assert_eq!(lay.elements[4].u, 0.0);
        assert!((lay.r1_per_element[4] - r1).abs() < 1e-15);
    }

    #[test]
    fn planar_grid_is_centred() {
        let s = scenario(Geometry::Planar2D, 4);
        let lay = layout_2d_full(&s);
        assert_eq!(lay.len(), 4);
        let c = lay
            .positions
            .iter()
            .fold(Vec3::default(), |acc, &p| acc + p)
            * 0.25;
        assert!(c.distance(s.ris_center) < 1e-12);
        assert!(lay.positions.iter().all(|p| p.y == s.ris_center.y));
        assert!((lay.elements[0].u + s.ris.element_spacing).abs() < 1e-15);
    }

    #[test]
    fn odd_grid_has_centre_element() {
        let s = scenario(Geometry::Planar2D, 25);
        let lay = layout_2d_full(&s);
        let cg = crate::scenario::derive_center_geometry(&s).unwrap();
        assert_eq!(lay.positions[12], s.ris_center);
        assert_eq!(lay.r1_per_element[12], cg.r1);
    }

    #[test]
    fn planar_corner_farther_than_centre() {
        let s = Scenario::reference(Geometry::Planar2D);
        let lay = layout_2d_full(&s);
        let cg = crate::scenario::derive_center_geometry(&s).unwrap();
        let max = lay.r1_per_element.iter().cloned().fold(f64::MIN, f64::max);
        let min = lay.r1_per_element.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max > cg.r1 && min < cg.r1);
        // farthest from the Tx at (0, 0, 3): largest x, highest or lowest row
        let far = lay.r1_per_element.iter().position(|&r| r == max).unwrap();
        assert!(far == 9 || far == 99);
    }

    #[test]
    fn cylinder_elements_on_surface() {
        let s = Scenario::reference(Geometry::Cylindrical3D);
        let lay = layout_3d_full(&s);
        let (rows, cols) = cylinder_grid(&s.ris);
        assert_eq!((rows, cols), (4, 13));
        assert!(lay.len() >= 50 && lay.len() - 50 < rows);
        let l = cylinder_extent(&s.ris);
        let axis = s.ris_center - s.center_normal() * (l / 2.0);
        for (p, n) in lay.positions.iter().zip(&lay.normals) {
            let d = Vec3::new(p.x - axis.x, p.y - axis.y, 0.0);
            assert!((d.norm() - l / 2.0).abs() < 1e-9);
            assert!((n.norm() - 1.0).abs() < 1e-12);
            assert!(n.dot(s.center_normal()) > 0.0);
        }
        // visible quarter: no element beyond 45 deg from the centre normal
        let max_theta = lay
            .elements
            .iter()
            .map(|e| e.u / (l / 2.0))
            .fold(0.0, f64::max);
        assert!(max_theta < std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn cylinder_centre_column_at_centre() {
        let mut s = Scenario::reference(Geometry::Cylindrical3D);
        s.ris.total_elements = 50;
        let lay = layout_3d_full(&s);
        let (rows, cols) = cylinder_grid(&s.ris);
        assert!(cols % 2 == 1 && rows % 2 == 1, "{rows}x{cols}");
        let mid = (rows / 2) * cols + cols / 2;
        assert!(lay.positions[mid].distance(s.ris_center) < 1e-12);
    }

    #[test]
    fn partial_selection_on_five_by_five() {
        let s = scenario(Geometry::Planar2D, 25);
        let full = layout_2d_full(&s);
        let d = s.ris.element_spacing;
        // radius 1.01 d_s in pitch units of 2 d_s reaches only the centre.
        let e = IlluminationEllipse::from_semi_axes(1.01 * d, 1.01 * d);
        let one = layout_partial(&s, &full, &e, &count(1)).unwrap();
        assert_eq!(one.positions, vec![s.ris_center]);
        let p = s.ris.pitch();
        let e = IlluminationEllipse::from_semi_axes(1.01 * p, 1.01 * p);
        let five = layout_partial(&s, &full, &e, &count(5)).unwrap();
        let idx: Vec<usize> = five
            .positions
            .iter()
            .map(|q| full.positions.iter().position(|x| x == q).unwrap())
            .collect();
        assert_eq!(idx, vec![7, 11, 12, 13, 17]);
    }

    #[test]
    fn partial_identity_and_empty() {
        let s = scenario(Geometry::Planar2D, 25);
        let full = layout_2d_full(&s);
        let e = IlluminationEllipse::from_semi_axes(10.0, 10.0);
        let all = layout_partial(&s, &full, &e, &count(25)).unwrap();
        assert_eq!(all, full);
        let none = layout_partial(&s, &full, &e, &count(0)).unwrap();
        assert!(none.is_empty());
        assert_eq!(
            layout_partial(&s, &full, &e, &count(26)),
            Err(Error::InsufficientElements {
                available: 25,
                required: 26
            })
        );
    }

    #[test]
    fn element_layout_length_matches_count() {
        for g in Geometry::ALL {
            let s = Scenario::reference(g);
            let (_, e) = illuminate(&s).unwrap();
            let c = effective_count(&e, &s.ris).unwrap();
            let lay = element_layout(&s, &e, &c).unwrap();
            assert_eq!(lay.len(), c.n_eff, "{g}");
            assert_eq!(lay.r2_per_element.len(), c.n_eff);
            assert!(lay.r1_per_element.iter().all(|&r| r > 0.0));
        }
    }
}
