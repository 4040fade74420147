//! `risgeo` command-line front end.
//!
//! Exit status: 0 on success, 2 for invalid input (bad scenario, unknown key,
//! failed validation), 1 for runtime failures such as a degenerate beam.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::effective::fraunhofer;
use crate::error::{Error, Result};
use crate::layout::element_layout;
use crate::outage::{monte_carlo_outage_curve, outage_curve, MomentMatch};
use crate::reproduce::{dataset, header_comments, sweep_table, Dataset, ReproduceOptions};
use crate::scenario::{validate, Geometry, Scenario};
use crate::scenario_file::load;
use crate::sweep::{
    evaluate_count, evaluate_point, optimize_placement, sweep, Metric, Range, SweepSpec,
    SweepVariable,
};
use crate::table::{num, Table};
use crate::units::{db_to_linear, linear_to_db, watts_to_dbm};

#[derive(Debug, Parser)]
#[command(name = "risgeo", version, about = "RIS geometry link simulator")]
pub struct Cli {
    /// Scenario file (key = value lines); defaults to the reference deployment.
    #[arg(long, global = true, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Override a scenario key, repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output file (a directory for `reproduce all`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GeometryArg {
    /// 1d, 2d, 3d or all; defaults to the scenario geometry.
    #[arg(long)]
    pub geometry: Option<String>,
}

#[derive(Debug, Args)]
pub struct FadingArgs {
    /// Thresholds in dB: `start:stop:step` or a comma list.
    #[arg(
        long = "threshold-db",
        default_value = "-10:40:1",
        allow_hyphen_values = true
    )]
    pub threshold_db: String,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the scenario and report violated invariants.
    Validate,
    /// Centre geometry and illuminated ellipse.
    Illum,
    /// Effective element count, branch and Fraunhofer distance.
    Neff(GeometryArg),
    /// Per-element coordinates, distances and angles as CSV.
    Layout(GeometryArg),
    /// Received power and mean SNR.
    Power(GeometryArg),
    /// Outage probability over a threshold grid, closed form and Monte Carlo.
    Outage {
        #[command(flatten)]
        geometry: GeometryArg,
        #[command(flatten)]
        fading: FadingArgs,
    },
    /// Monte-Carlo outage only.
    Montecarlo {
        #[command(flatten)]
        geometry: GeometryArg,
        #[command(flatten)]
        fading: FadingArgs,
    },
    /// Sweep one variable (or x and height) and write one row per point.
    Sweep {
        /// x, h, xh, hpbw or threshold.
        #[arg(long, default_value = "x")]
        variable: String,
        /// `start:stop:step` in metres, degrees or dB.
        #[arg(long, default_value = "0:20:0.05", allow_hyphen_values = true)]
        range: String,
        /// Height range for `--variable xh`.
        #[arg(long = "h-range")]
        h_range: Option<String>,
        #[arg(long, default_value = "all")]
        geometry: String,
        /// Outage threshold in dB.
        #[arg(
            long = "threshold-db",
            default_value_t = 20.0,
            allow_hyphen_values = true
        )]
        threshold_db: f64,
    },
    /// Grid-search the best RIS placement per geometry.
    Optimize {
        #[arg(long = "x-range", default_value = "0:20:0.05")]
        x_range: String,
        /// Also search the height over this range.
        #[arg(long = "h-range")]
        h_range: Option<String>,
        /// power, snr or outage.
        #[arg(long, default_value = "power")]
        metric: String,
        #[arg(long, default_value = "all")]
        geometry: String,
        #[arg(
            long = "threshold-db",
            default_value_t = 20.0,
            allow_hyphen_values = true
        )]
        threshold_db: f64,
    },
    /// Regenerate a named figure dataset (fig2, fig3a, fig3b, fig4, fig5a, fig5b) or all.
    Reproduce {
        dataset: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

/// Failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter { .. } | Error::Invalid(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_geometries(arg: &str) -> Result<Vec<Geometry>> {
    if arg.trim() == "all" {
        return Ok(Geometry::ALL.to_vec());
    }
    arg.split(',').map(str::parse).collect()
}

fn geometries(arg: &GeometryArg, s: &Scenario) -> Result<Vec<Geometry>> {
    match &arg.geometry {
        Some(g) => parse_geometries(g),
        None => Ok(vec![s.ris.geometry]),
    }
}

/// `start:stop:step` or a comma-separated list.
pub fn parse_grid(arg: &str) -> Result<Vec<f64>> {
    if arg.contains(':') {
        return Ok(arg.parse::<Range>()?.points());
    }
    arg.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::parameter("threshold-db", format!("'{p}' is not a number")))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn deg(x: f64) -> String {
    num(x.to_degrees())
}

fn illum_report(s: &Scenario) -> Result<String> {
    let (cg, e, _) = evaluate_count(s)?;
    let lines = [
        ("r1_m", num(cg.r1)),
        ("r2_m", num(cg.r2)),
        ("d1_m", num(cg.d1)),
        ("d2_m", num(cg.d2)),
        ("azimuth_plane_t_deg", deg(cg.azimuth_plane_t)),
        ("azimuth_normal_t_deg", deg(cg.azimuth_normal_t)),
        ("elevation_t_deg", deg(cg.elevation_t)),
        ("azimuth_plane_r_deg", deg(cg.azimuth_plane_r)),
        ("elevation_r_deg", deg(cg.elevation_r)),
        ("wavelength_m", num(cg.wavelength)),
        ("a_prime_m", num(e.a_prime)),
        ("a_star_m", num(e.a_star)),
        ("b_prime_m", num(e.b_prime)),
        ("b_star_m", num(e.b_star)),
        ("a_m", num(e.a)),
        ("b_m", num(e.b)),
        ("area_m2", num(e.area)),
        ("swapped", e.swapped.to_string()),
    ];
    Ok(lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect())
}

fn neff_report(s: &Scenario) -> Result<String> {
    let (cg, e, c) = evaluate_count(s)?;
    let mut out = format!(
        "geometry={}\nn_eff={}\nbranch={}\nris_extent_m={}\n",
        s.ris.geometry,
        c.n_eff,
        c.branch.name(),
        num(c.ris_extent)
    );
    if let Some(i) = c.overlap_indicator {
        out += &format!("overlap_indicator_m2={}\n", num(i));
    }
    match fraunhofer(&c, &e, &s.ris, cg.wavelength, cg.r1) {
        Ok(f) => {
            out += &format!(
                "aperture_m={}\nfraunhofer_m={}\nregime={}\n",
                num(f.aperture),
                num(f.distance),
                f.regime.name()
            );
        }
        Err(Error::ZeroAperture) => out += "fraunhofer_m=nan\nregime=none\n",
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn power_report(s: &Scenario) -> Result<String> {
    let p = evaluate_point(s, 20.0)?;
    let (fd, regime) = p.fraunhofer.map_or(("nan".to_string(), "none"), |f| {
        (num(f.distance), f.regime.name())
    });
    Ok(format!(
        "geometry={}\nn_eff={}\nbranch={}\np_r_dbm={}\nmean_snr_db={}\nfraunhofer_m={}\nregime={}\n",
        s.ris.geometry,
        p.count.n_eff,
        p.count.branch.name(),
        num(watts_to_dbm(p.received_power_w)),
        num(linear_to_db(p.mean_snr)),
        fd,
        regime
    ))
}

fn layout_table(s: &Scenario) -> Result<Table> {
    let (_, e, c) = evaluate_count(s)?;
    let lay = element_layout(s, &e, &c)?;
    let mut t = Table::new(&[
        "idx", "x", "y", "z", "r1", "r2", "az_t", "el_t", "az_r", "el_r",
    ]);
    header_comments(
        &mut t,
        &format!("layout geometry={} angles in degrees", s.ris.geometry),
        s,
    );
    for i in 0..lay.len() {
        let p = lay.positions[i];
        t.push(vec![
            i.to_string(),
            num(p.x),
            num(p.y),
            num(p.z),
            num(lay.r1_per_element[i]),
            num(lay.r2_per_element[i]),
            deg(lay.azimuth_t_per_element[i]),
            deg(lay.elevation_t_per_element[i]),
            deg(lay.azimuth_r_per_element[i]),
            deg(lay.elevation_r_per_element[i]),
        ]);
    }
    Ok(t)
}

fn outage_table(s: &Scenario, geoms: &[Geometry], f: &FadingArgs, closed: bool) -> Result<Table> {
    let grid_db = parse_grid(&f.threshold_db)?;
    let grid: Vec<f64> = grid_db.iter().map(|&d| db_to_linear(d)).collect();
    let mut header = vec!["rho_th_db"];
    if closed {
        header.push("p_out_closed");
    }
    header.extend(["p_out_mc", "n_eff"]);
    if geoms.len() > 1 {
        header.insert(0, "geometry");
    }
    let mut t = Table::new(&header);
    header_comments(
        &mut t,
        &format!("outage seed={} samples={}", f.seed, f.samples),
        s,
    );
    for &g in geoms {
        let sg = s.with_geometry(g);
        let p = evaluate_point(&sg, 20.0)?;
        let n = p.count.n_eff;
        let (pc, pm) = if n == 0 || p.mean_snr <= 0.0 {
            (vec![1.0; grid.len()], vec![1.0; grid.len()])
        } else {
            let mm = MomentMatch::new(&sg.fading, n);
            (
                outage_curve(&mm, p.mean_snr, &grid)?.probabilities,
                monte_carlo_outage_curve(n, &sg.fading, p.mean_snr, &grid, f.samples, f.seed),
            )
        };
        for (i, &db) in grid_db.iter().enumerate() {
            let mut row = vec![num(db)];
            if closed {
                row.push(num(pc[i]));
            }
            row.extend([num(pm[i]), n.to_string()]);
            if geoms.len() > 1 {
                row.insert(0, g.to_string());
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn optimize_report(s: &Scenario, spec: &SweepSpec, metric: Metric) -> Result<String> {
    let rep = optimize_placement(s, spec, metric)?;
    let mut out = String::new();
    for o in &rep.optima {
        out += &format!("geometry={} x_s_m={}", o.geometry, num(o.value));
        if let Some(h) = o.second {
            out += &format!(" h_s_m={}", num(h));
        }
        out += &format!(" {}={}\n", metric.name(), num(o.best));
    }
    for c in &rep.crossovers {
        out += &format!(
            "crossover {}-{} x_s_m={}\n",
            c.first,
            c.second,
            num(c.position)
        );
    }
    Ok(out)
}

fn check(s: &Scenario) -> std::result::Result<(), Failure> {
    let report = validate(s);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: report.to_string().trim_end().to_string(),
        })
    }
}

fn per_geometry(
    s: &Scenario,
    geoms: &[Geometry],
    f: impl Fn(&Scenario) -> Result<String>,
) -> Result<String> {
    let mut out = String::new();
    for (i, &g) in geoms.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out += &f(&s.with_geometry(g))?;
    }
    Ok(out)
}

pub fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let s = load(cli.scenario.as_deref(), &cli.set)?;
    let out = cli.out.as_deref();
    if let Command::Validate = cli.command {
        check(&s)?;
        emit(out, "ok\n")?;
        return Ok(());
    }
    check(&s)?;
    match &cli.command {
        Command::Validate => unreachable!(),
        Command::Illum => emit(out, &illum_report(&s)?)?,
        Command::Neff(g) => emit(out, &per_geometry(&s, &geometries(g, &s)?, neff_report)?)?,
        Command::Power(g) => emit(out, &per_geometry(&s, &geometries(g, &s)?, power_report)?)?,
        Command::Layout(g) => {
            let geoms = geometries(g, &s)?;
            if geoms.len() != 1 {
                return Err(Error::parameter("geometry", "layout takes a single geometry").into());
            }
            emit(
                out,
                &layout_table(&s.with_geometry(geoms[0]))?.to_csv_string(),
            )?;
        }
        Command::Outage { geometry, fading } => {
            let t = outage_table(&s, &geometries(geometry, &s)?, fading, true)?;
            emit(out, &t.to_csv_string())?;
        }
        Command::Montecarlo { geometry, fading } => {
            let t = outage_table(&s, &geometries(geometry, &s)?, fading, false)?;
            emit(out, &t.to_csv_string())?;
        }
        Command::Sweep {
            variable,
            range,
            h_range,
            geometry,
            threshold_db,
        } => {
            let variable: SweepVariable = variable.parse()?;
            let mut spec = SweepSpec::new(variable, range.parse()?, &parse_geometries(geometry)?);
            spec.second = h_range.as_deref().map(str::parse).transpose()?;
            spec.threshold_db = *threshold_db;
            let rows = sweep(&s, &spec)?;
            let mut t = sweep_table(&spec, &rows);
            header_comments(&mut t, &format!("sweep variable={variable:?}"), &s);
            emit(out, &t.to_csv_string())?;
        }
        Command::Optimize {
            x_range,
            h_range,
            metric,
            geometry,
            threshold_db,
        } => {
            let geoms = parse_geometries(geometry)?;
            let x: Range = x_range.parse()?;
            let mut spec = match h_range {
                Some(h) => SweepSpec::xh(x, h.parse()?, &geoms),
                None => SweepSpec::new(SweepVariable::RisX, x, &geoms),
            };
            spec.threshold_db = *threshold_db;
            emit(out, &optimize_report(&s, &spec, metric.parse()?)?)?;
        }
        Command::Reproduce {
            dataset: name,
            seed,
            samples,
        } => {
            let opts = ReproduceOptions {
                seed: *seed,
                samples: *samples,
            };
            if name == "all" {
                let dir =
                    out.ok_or_else(|| Error::parameter("out", "reproduce all needs --out <dir>"))?;
                fs::create_dir_all(dir).map_err(Error::from)?;
                for d in Dataset::ALL {
                    let t = dataset(d, &s, &opts)?;
                    fs::write(dir.join(format!("{d}.csv")), t.to_csv_string())
                        .map_err(Error::from)?;
                }
            } else {
                let t = dataset(name.parse()?, &s, &opts)?;
                emit(out, &t.to_csv_string())?;
            }
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
