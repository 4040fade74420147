//! Grid sweeps over placement, beamwidth and threshold, grid-search placement
//! optimisation, geometry crossovers and the critical beamwidth.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::effective::{effective_count, fraunhofer, Branch, EffectiveCount, FraunhoferResult};
use crate::error::{Error, Result};
use crate::illumination::{illuminate, IlluminationEllipse};
use crate::layout::element_layout;
use crate::link::{received_power, LinkResult};
use crate::outage::{outage_probability, MomentMatch};
use crate::scenario::{validate, CenterGeometry, Geometry, Scenario};
use crate::units::{db_to_linear, linear_to_db, watts_to_dbm};

/// Everything computed for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub geometry: Geometry,
    pub center: CenterGeometry,
    pub ellipse: IlluminationEllipse,
    pub count: EffectiveCount,
    /// `None` when no element is illuminated.
    pub fraunhofer: Option<FraunhoferResult>,
    pub link: LinkResult,
    pub received_power_w: f64,
    pub mean_snr: f64,
    pub outage: f64,
    pub threshold_db: f64,
}

/// Centre geometry, footprint and effective count, without the power sum.
pub fn evaluate_count(
    s: &Scenario,
) -> Result<(CenterGeometry, IlluminationEllipse, EffectiveCount)> {
    let (cg, e) = illuminate(s)?;
    let count = effective_count(&e, &s.ris)?;
    Ok((cg, e, count))
}

/// Full evaluation of a scenario at outage threshold `threshold_db`.
pub fn evaluate_point(s: &Scenario, threshold_db: f64) -> Result<PointResult> {
    let (cg, e, count) = evaluate_count(s)?;
    let (fr, link, outage) = if count.n_eff == 0 {
        (None, LinkResult::zero(), 1.0)
    } else {
        let fr = fraunhofer(&count, &e, &s.ris, cg.wavelength, cg.r1)?;
        let layout = element_layout(s, &e, &count)?;
        let link = received_power(s, &layout)?;
        let mm = MomentMatch::new(&s.fading, count.n_eff);
        let outage = if link.mean_snr > 0.0 {
            outage_probability(&mm, link.mean_snr, db_to_linear(threshold_db))?
        } else {
            1.0
        };
        (Some(fr), link, outage)
    };
    Ok(PointResult {
        geometry: s.ris.geometry,
        center: cg,
        ellipse: e,
        count,
        fraunhofer: fr,
        received_power_w: link.received_power_w,
        mean_snr: link.mean_snr,
        link,
        outage,
        threshold_db,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// RIS centre x, metres.
    RisX,
    /// RIS centre height, metres.
    RisHeight,
    /// RIS centre x and height on a 2D grid, metres.
    RisXHeight,
    /// Full HPBW, degrees.
    Hpbw,
    /// Outage threshold, dB.
    Threshold,
}

impl SweepVariable {
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::RisX | SweepVariable::RisXHeight => "x_s_m",
            SweepVariable::RisHeight => "h_s_m",
            SweepVariable::Hpbw => "hpbw_deg",
            SweepVariable::Threshold => "threshold_db",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "ris-x" => Ok(SweepVariable::RisX),
            "h" | "ris-height" => Ok(SweepVariable::RisHeight),
            "xh" | "ris-xh" => Ok(SweepVariable::RisXHeight),
            "hpbw" => Ok(SweepVariable::Hpbw),
            "threshold" => Ok(SweepVariable::Threshold),
            other => Err(Error::parameter(
                "variable",
                format!("expected x, h, xh, hpbw or threshold, got '{other}'"),
            )),
        }
    }
}

/// Inclusive grid `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    pub fn single(v: f64) -> Self {
        Self::new(v, v, 1.0)
    }

    pub fn check(&self, key: &str) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(Error::parameter(key, "range bounds must be finite"));
        }
        if self.step <= 0.0 {
            return Err(Error::parameter(key, "step must be > 0"));
        }
        if self.start > self.stop {
            return Err(Error::parameter(key, "start must not exceed stop"));
        }
        Ok(())
    }

    /// Grid values, computed by multiplication to avoid drift and rounded to
    /// 1e-12 so that decimal steps print cleanly.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    /// `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::parameter("range", format!("'{p}' is not a number")))
        };
        let r = match parts.as_slice() {
            [v] => Range::single(num(v)?),
            [a, b, c] => Range::new(num(a)?, num(b)?, num(c)?),
            _ => {
                return Err(Error::parameter(
                    "range",
                    format!("expected start:stop:step, got '{s}'"),
                ))
            }
        };
        r.check("range")?;
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub range: Range,
    /// Height range for `RisXHeight`.
    pub second: Option<Range>,
    pub geometries: Vec<Geometry>,
    pub threshold_db: f64,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, range: Range, geometries: &[Geometry]) -> Self {
        Self {
            variable,
            range,
            second: None,
            geometries: geometries.to_vec(),
            threshold_db: 20.0,
        }
    }

    pub fn xh(x: Range, h: Range, geometries: &[Geometry]) -> Self {
        Self {
            second: Some(h),
            ..Self::new(SweepVariable::RisXHeight, x, geometries)
        }
    }

    /// Grid points as `(value, second value)`, x-major.
    pub fn grid(&self) -> Vec<(f64, Option<f64>)> {
        let xs = self.range.points();
        match (self.variable, self.second) {
            (SweepVariable::RisXHeight, Some(h)) => {
                let hs = h.points();
                xs.iter()
                    .flat_map(|&x| hs.iter().map(move |&y| (x, Some(y))))
                    .collect()
            }
            _ => xs.into_iter().map(|x| (x, None)).collect(),
        }
    }

    fn check(&self) -> Result<()> {
        self.range.check("range")?;
        if self.variable == SweepVariable::RisXHeight {
            match self.second {
                Some(h) => h.check("h-range")?,
                None => {
                    return Err(Error::parameter(
                        "h-range",
                        "required for an x-height sweep",
                    ))
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    ReceivedPower,
    MeanSnr,
    OutageAtThreshold,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::ReceivedPower => "power",
            Metric::MeanSnr => "snr",
            Metric::OutageAtThreshold => "outage",
        }
    }

    /// Outage is minimised, the others maximised.
    pub fn maximize(self) -> bool {
        !matches!(self, Metric::OutageAtThreshold)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Metric::ReceivedPower),
            "snr" => Ok(Metric::MeanSnr),
            "outage" => Ok(Metric::OutageAtThreshold),
            other => Err(Error::parameter(
                "metric",
                format!("expected power, snr or outage, got '{other}'"),
            )),
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub geometry: Geometry,
    pub value: f64,
    pub second: Option<f64>,
    /// The beam misses the surface (or the RIS plane holds the Tx) here.
    pub degenerate: bool,
    pub n_eff: usize,
    pub branch: Option<Branch>,
    pub received_power_dbm: f64,
    pub mean_snr_db: f64,
    pub outage: f64,
    pub fraunhofer: Option<FraunhoferResult>,
}

impl SweepRow {
    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::ReceivedPower => self.received_power_dbm,
            Metric::MeanSnr => self.mean_snr_db,
            Metric::OutageAtThreshold => self.outage,
        }
    }
}

/// Scenario and threshold at one grid point.
pub fn apply_point(
    base: &Scenario,
    spec: &SweepSpec,
    geometry: Geometry,
    value: f64,
    second: Option<f64>,
) -> (Scenario, f64) {
    let mut s = base.with_geometry(geometry);
    let mut threshold = spec.threshold_db;
    match spec.variable {
        SweepVariable::RisX => s.ris_center.x = value,
        SweepVariable::RisHeight => s.ris_center.z = value,
        SweepVariable::RisXHeight => {
            s.ris_center.x = value;
            if let Some(h) = second {
                s.ris_center.z = h;
            }
        }
        SweepVariable::Hpbw => s.hpbw_rad = value.to_radians(),
        SweepVariable::Threshold => threshold = value,
    }
    (s, threshold)
}

fn is_coverage_hole(e: &Error) -> bool {
    matches!(e, Error::DegenerateBeam(_) | Error::RisInTxPlane)
}

pub fn evaluate_row(
    base: &Scenario,
    spec: &SweepSpec,
    geometry: Geometry,
    value: f64,
    second: Option<f64>,
) -> Result<SweepRow> {
    let (s, threshold) = apply_point(base, spec, geometry, value, second);
    match evaluate_point(&s, threshold) {
        Ok(p) => Ok(SweepRow {
            geometry,
            value,
            second,
            degenerate: false,
            n_eff: p.count.n_eff,
            branch: Some(p.count.branch),
            received_power_dbm: watts_to_dbm(p.received_power_w),
            mean_snr_db: linear_to_db(p.mean_snr),
            outage: p.outage,
            fraunhofer: p.fraunhofer,
        }),
        Err(e) if is_coverage_hole(&e) => Ok(SweepRow {
            geometry,
            value,
            second,
            degenerate: true,
            n_eff: 0,
            branch: None,
            received_power_dbm: f64::NEG_INFINITY,
            mean_snr_db: f64::NEG_INFINITY,
            outage: 1.0,
            fraunhofer: None,
        }),
        Err(e) => Err(e),
    }
}

/// Evaluates every grid point for every geometry. Rows are ordered by
/// geometry (in the order given), then by grid index.
pub fn sweep(s: &Scenario, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let report = validate(s);
    if !report.is_ok() {
        return Err(Error::Invalid(
            report.to_string().trim_end().replace('\n', "; "),
        ));
    }
    spec.check()?;
    let grid = spec.grid();
    let jobs: Vec<(Geometry, f64, Option<f64>)> = spec
        .geometries
        .iter()
        .flat_map(|&g| grid.iter().map(move |&(v, w)| (g, v, w)))
        .collect();
    jobs.par_iter()
        .map(|&(g, v, w)| evaluate_row(s, spec, g, v, w))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub geometry: Geometry,
    pub value: f64,
    pub second: Option<f64>,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crossover {
    pub position: f64,
    pub first: Geometry,
    pub second: Geometry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    pub metric: Metric,
    pub optima: Vec<Optimum>,
    pub crossovers: Vec<Crossover>,
}

impl OptimumReport {
    pub fn get(&self, g: Geometry) -> Option<&Optimum> {
        self.optima.iter().find(|o| o.geometry == g)
    }
}

fn better(metric: Metric, candidate: f64, current: f64) -> bool {
    if metric.maximize() {
        candidate > current
    } else {
        candidate < current
    }
}

/// Best grid point per geometry. Only strict improvements replace the
/// incumbent, so ties go to the smallest x, then the smallest height.
pub fn best_rows(rows: &[SweepRow], geometries: &[Geometry], metric: Metric) -> Vec<Optimum> {
    let mut out = Vec::new();
    for &g in geometries {
        let mut best: Option<&SweepRow> = None;
        for r in rows.iter().filter(|r| r.geometry == g && !r.degenerate) {
            let v = r.metric(metric);
            if v.is_nan() {
                continue;
            }
            if best.is_none_or(|b| better(metric, v, b.metric(metric))) {
                best = Some(r);
            }
        }
        if let Some(b) = best {
            out.push(Optimum {
                geometry: g,
                value: b.value,
                second: b.second,
                best: b.metric(metric),
            });
        }
    }
    out
}

/// Exhaustive grid search for the best placement of each geometry, plus the
/// crossovers between every geometry pair for one-dimensional sweeps.
pub fn optimize_placement(s: &Scenario, spec: &SweepSpec, metric: Metric) -> Result<OptimumReport> {
    let rows = sweep(s, spec)?;
    let optima = best_rows(&rows, &spec.geometries, metric);
    let mut crossovers = Vec::new();
    if spec.variable != SweepVariable::RisXHeight {
        for (i, &a) in spec.geometries.iter().enumerate() {
            for &b in &spec.geometries[i + 1..] {
                for position in find_crossover(s, spec, &rows, a, b, metric)? {
                    crossovers.push(Crossover {
                        position,
                        first: a,
                        second: b,
                    });
                }
            }
        }
    }
    Ok(OptimumReport {
        metric,
        optima,
        crossovers,
    })
}

fn metric_at(s: &Scenario, spec: &SweepSpec, g: Geometry, v: f64, m: Metric) -> Result<f64> {
    let r = evaluate_row(s, spec, g, v, None)?;
    Ok(if r.degenerate { f64::NAN } else { r.metric(m) })
}

fn sign(d: f64) -> i8 {
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

/// Positions where `metric(a) - metric(b)` changes sign along a
/// one-dimensional sweep, refined by bisection on the model to `step / 100`.
pub fn find_crossover(
    s: &Scenario,
    spec: &SweepSpec,
    rows: &[SweepRow],
    a: Geometry,
    b: Geometry,
    metric: Metric,
) -> Result<Vec<f64>> {
    if a == b {
        return Ok(Vec::new());
    }
    let pick =
        |g: Geometry| -> Vec<&SweepRow> { rows.iter().filter(|r| r.geometry == g).collect() };
    let (ra, rb) = (pick(a), pick(b));
    let diffs: Vec<(f64, f64)> = ra
        .iter()
        .zip(&rb)
        .map(|(x, y)| {
            let d = if x.degenerate || y.degenerate {
                f64::NAN
            } else {
                x.metric(metric) - y.metric(metric)
            };
            (x.value, d)
        })
        .collect();
    let tol = spec.range.step / 100.0;
    let diff_at = |v: f64| -> Result<f64> {
        Ok(metric_at(s, spec, a, v, metric)? - metric_at(s, spec, b, v, metric)?)
    };
    let mut out = Vec::new();
    for w in diffs.windows(2) {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        if d0.is_nan() || d1.is_nan() {
            continue;
        }
        let (s0, s1) = (sign(d0), sign(d1));
        if s0 == 0 || s1 == 0 || s0 == s1 {
            continue;
        }
        let (mut lo, mut hi) = (x0, x1);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let dm = diff_at(mid)?;
            if dm.is_nan() || sign(dm) == s0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Smallest grid beamwidth (degrees) from which the planar count is never
/// again below the cylindrical count, scanning `range` in degrees.
pub fn critical_beamwidth(s: &Scenario, range: Range) -> Result<Option<f64>> {
    let counts = |g: Geometry| -> Result<Vec<Option<usize>>> {
        range
            .points()
            .iter()
            .map(|&phi| {
                let mut sc = s.with_geometry(g);
                sc.hpbw_rad = phi.to_radians();
                match evaluate_count(&sc) {
                    Ok((_, _, c)) => Ok(Some(c.n_eff)),
                    Err(e) if is_coverage_hole(&e) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect()
    };
    let planar = counts(Geometry::Planar2D)?;
    let cyl = counts(Geometry::Cylindrical3D)?;
    let points = range.points();
    let mut found = None;
    for i in (0..points.len()).rev() {
        match (planar[i], cyl[i]) {
            (Some(p), Some(c)) if p >= c => found = Some(points[i]),
            _ => break,
        }
    }
    Ok(found)
}
