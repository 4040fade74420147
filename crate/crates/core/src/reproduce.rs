//! Named datasets for the standard evaluation figures, written as CSV tables.

use std::fmt;
use std::str::FromStr;

use crate::effective::fraunhofer;
use crate::error::{Error, Result};
use crate::outage::{monte_carlo_outage_curve, outage_curve, MomentMatch};
use crate::scenario::{Geometry, Scenario};
use crate::scenario_file::to_inline;
use crate::sweep::{
    critical_beamwidth, evaluate_count, evaluate_point, sweep, Range, SweepRow, SweepSpec,
    SweepVariable,
};
use crate::table::{fixed, num, Table};
use crate::units::{db_to_linear, linear_to_db};

pub const TOOL_VERSION: &str = concat!("risgeo ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataset {
    /// Fraunhofer distance against Tx-RIS distance.
    Fig2,
    /// Effective counts against RIS x position.
    Fig3a,
    /// Effective counts against beamwidth.
    Fig3b,
    /// Received power over RIS x and height.
    Fig4,
    /// Outage probability against threshold, closed form and Monte Carlo.
    Fig5a,
    /// Outage and mean SNR against RIS x position.
    Fig5b,
}

impl Dataset {
    pub const ALL: [Dataset; 6] = [
        Dataset::Fig2,
        Dataset::Fig3a,
        Dataset::Fig3b,
        Dataset::Fig4,
        Dataset::Fig5a,
        Dataset::Fig5b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::Fig2 => "fig2",
            Dataset::Fig3a => "fig3a",
            Dataset::Fig3b => "fig3b",
            Dataset::Fig4 => "fig4",
            Dataset::Fig5a => "fig5a",
            Dataset::Fig5b => "fig5b",
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::parameter("dataset", format!("unknown dataset '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproduceOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            samples: 100_000,
        }
    }
}

pub fn header_comments(t: &mut Table, what: &str, s: &Scenario) {
    t.comment(format!("{TOOL_VERSION} {what}"));
    t.comment(format!("scenario: {}", to_inline(s)));
}

fn regime_cell(r: &SweepRow) -> (String, String) {
    match r.fraunhofer {
        Some(f) => (num(f.distance), f.regime.name().to_string()),
        None => ("nan".to_string(), "none".to_string()),
    }
}

/// One CSV row per sweep row.
pub fn sweep_table(spec: &SweepSpec, rows: &[SweepRow]) -> Table {
    let mut header = vec![spec.variable.column()];
    if spec.variable == SweepVariable::RisXHeight {
        header.push("h_s_m");
    }
    header.extend([
        "geometry",
        "degenerate",
        "n_eff",
        "branch",
        "p_r_dbm",
        "mean_snr_db",
        "p_out",
        "fraunhofer_m",
        "regime",
    ]);
    let mut t = Table::new(&header);
    for r in rows {
        let mut row = vec![num(r.value)];
        if spec.variable == SweepVariable::RisXHeight {
            row.push(num(r.second.unwrap_or(f64::NAN)));
        }
        let (fd, regime) = regime_cell(r);
        row.extend([
            r.geometry.to_string(),
            u8::from(r.degenerate).to_string(),
            r.n_eff.to_string(),
            r.branch.map_or("none", |b| b.name()).to_string(),
            num(r.received_power_dbm),
            num(r.mean_snr_db),
            num(r.outage),
            fd,
            regime,
        ]);
        t.push(row);
    }
    t
}

fn fig2(base: &Scenario) -> Result<Table> {
    let mut t = Table::new(&[
        "r1_m",
        "x_s_m",
        "geometry",
        "n_eff",
        "branch",
        "aperture_m",
        "fraunhofer_m",
        "regime",
    ]);
    header_comments(
        &mut t,
        "dataset=fig2 (RIS moved along x at fixed y_s and h_s = h_t)",
        base,
    );
    let dy = base.ris_center.y - base.tx_position.y;
    for g in Geometry::ALL {
        for r1 in Range::new(2.0, 10.0, 0.05).points() {
            if r1 <= dy.abs() {
                continue;
            }
            let mut s = base.with_geometry(g);
            s.ris_center.z = s.tx_position.z;
            s.ris_center.x = s.tx_position.x + (r1 * r1 - dy * dy).sqrt();
            let (cg, e, c) = evaluate_count(&s)?;
            let (ap, d, regime) = if c.n_eff == 0 {
                (f64::NAN, f64::NAN, "none")
            } else {
                let f = fraunhofer(&c, &e, &s.ris, cg.wavelength, cg.r1)?;
                (f.aperture, f.distance, f.regime.name())
            };
            t.push(vec![
                fixed(r1, 2),
                num(s.ris_center.x),
                g.to_string(),
                c.n_eff.to_string(),
                c.branch.name().to_string(),
                num(ap),
                num(d),
                regime.to_string(),
            ]);
        }
    }
    Ok(t)
}

fn sweep_dataset(base: &Scenario, spec: &SweepSpec, what: &str) -> Result<Table> {
    let rows = sweep(base, spec)?;
    let mut t = sweep_table(spec, &rows);
    header_comments(&mut t, what, base);
    Ok(t)
}

fn fig3b(base: &Scenario) -> Result<Table> {
    let mut s = base.clone();
    s.ris_center.x = 0.0;
    let range = Range::new(1.0, 30.0, 0.1);
    let spec = SweepSpec::new(SweepVariable::Hpbw, range, &Geometry::ALL);
    let mut t = sweep_dataset(&s, &spec, "dataset=fig3b (x_s = 0)")?;
    let phi_c = critical_beamwidth(&s, range)?;
    t.comment(format!(
        "critical_hpbw_deg={}",
        phi_c.map_or("none".to_string(), |p| fixed(p, 1))
    ));
    Ok(t)
}

fn fig5a(base: &Scenario, opts: &ReproduceOptions) -> Result<Table> {
    let mut t = Table::new(&[
        "hpbw_deg",
        "geometry",
        "n_eff",
        "mean_snr_db",
        "threshold_db",
        "p_out_closed",
        "p_out_mc",
    ]);
    header_comments(
        &mut t,
        &format!("dataset=fig5a seed={} samples={}", opts.seed, opts.samples),
        base,
    );
    let thresholds_db = Range::new(-10.0, 40.0, 1.0).points();
    let thresholds: Vec<f64> = thresholds_db.iter().map(|&d| db_to_linear(d)).collect();
    for hpbw in [5.0f64, 10.0] {
        for g in Geometry::ALL {
            let mut s = base.with_geometry(g);
            s.hpbw_rad = hpbw.to_radians();
            let p = evaluate_point(&s, 20.0)?;
            let n = p.count.n_eff;
            let (closed, mc) = if n == 0 || p.mean_snr <= 0.0 {
                (vec![1.0; thresholds.len()], vec![1.0; thresholds.len()])
            } else {
                let mm = MomentMatch::new(&s.fading, n);
                let c = outage_curve(&mm, p.mean_snr, &thresholds)?;
                let m = monte_carlo_outage_curve(
                    n,
                    &s.fading,
                    p.mean_snr,
                    &thresholds,
                    opts.samples,
                    opts.seed,
                );
                (c.probabilities, m)
            };
            for (i, &db) in thresholds_db.iter().enumerate() {
                t.push(vec![
                    num(hpbw),
                    g.to_string(),
                    n.to_string(),
                    num(linear_to_db(p.mean_snr)),
                    num(db),
                    num(closed[i]),
                    num(mc[i]),
                ]);
            }
        }
    }
    Ok(t)
}

pub fn dataset(d: Dataset, base: &Scenario, opts: &ReproduceOptions) -> Result<Table> {
    let x_range = Range::new(0.0, 20.0, 0.05);
    match d {
        Dataset::Fig2 => fig2(base),
        Dataset::Fig3a => sweep_dataset(
            base,
            &SweepSpec::new(SweepVariable::RisX, x_range, &Geometry::ALL),
            "dataset=fig3a",
        ),
        Dataset::Fig3b => fig3b(base),
        Dataset::Fig4 => sweep_dataset(
            base,
            &SweepSpec::xh(x_range, Range::new(0.0, 6.0, 0.05), &Geometry::ALL),
            "dataset=fig4",
        ),
        Dataset::Fig5a => fig5a(base, opts),
        Dataset::Fig5b => {
            let mut spec = SweepSpec::new(SweepVariable::RisX, x_range, &Geometry::ALL);
            spec.threshold_db = 20.0;
            sweep_dataset(base, &spec, "dataset=fig5b threshold_db=20")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_names_round_trip() {
        for d in Dataset::ALL {
            assert_eq!(d.name().parse::<Dataset>().unwrap(), d);
        }
        assert!("fig9".parse::<Dataset>().is_err());
    }

    #[test]
    fn fig2_distances_never_decrease() {
        let t = dataset(
            Dataset::Fig2,
            &Scenario::reference(Geometry::Planar2D),
            &Default::default(),
        )
        .unwrap();
        let gi = t.column("geometry").unwrap();
        let di = t.column("fraunhofer_m").unwrap();
        for g in Geometry::ALL {
            let d: Vec<f64> = t
                .rows
                .iter()
                .filter(|r| r[gi] == g.short_name())
                .map(|r| r[di].parse().unwrap())
                .filter(|x: &f64| !x.is_nan())
                .collect();
            assert!(!d.is_empty());
            assert!(d.windows(2).all(|w| w[1] >= w[0]), "{g}");
        }
    }
}
