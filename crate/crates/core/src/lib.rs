//! Link-level simulation of reconfigurable intelligent surfaces (RIS) whose
//! shape is linear, planar or cylindrical.
//!
//! A directional transmit beam only lights part of a large surface. This crate
//! computes the illuminated footprint, the number of elements that actually
//! take part in the reflection, the near-field received power, the mean SNR and
//! the outage probability under cascaded Rayleigh fading. On top of that it
//! provides parameter sweeps and grid-search placement optimisation.
//!
//! ```
//! use ris_geometry::{Geometry, Scenario, evaluate_point};
//!
//! let scenario = Scenario::reference(Geometry::Planar2D);
//! let point = evaluate_point(&scenario, 20.0).unwrap();
//! assert!(point.received_power_w > 0.0);
//! ```

pub mod cli;
pub mod effective;
pub mod error;
pub mod illumination;
pub mod layout;
pub mod link;
pub mod outage;
pub mod reproduce;
pub mod scenario;
pub mod scenario_file;
pub mod sweep;
pub mod table;
pub mod units;
pub mod vec3;

pub use effective::{
    effective_count, fraunhofer, Branch, EffectiveCount, FraunhoferResult, Regime,
};
pub use error::{Error, Result};
pub use illumination::{ellipse_axes, illuminate, illuminated_area, IlluminationEllipse};
pub use layout::{element_layout, ElementLayout};
pub use link::{received_power, LinkResult, PatternAngle, PatternModel, TxSidePattern};
pub use outage::{outage_probability, reg_lower_incomplete_gamma, MomentMatch};
pub use scenario::{
    derive_center_geometry, validate, CenterGeometry, FadingParams, Geometry, RisInventory,
    Scenario, ValidationReport,
};
pub use sweep::{evaluate_point, PointResult};
pub use vec3::Vec3;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
