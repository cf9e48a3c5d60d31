//! The `hypack` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::acceptance::{run_all, run_criterion, AcceptanceOptions};
use crate::density::{density_curve, euclid_density_curve, Evaluation};
use crate::error::{HypackError, Result};
use crate::formats::{cells_to_json, curve_to_csv, render_svg, CellsDoc, PackingDoc, RenderOptions, TileRecord};
use crate::hgeom::{BallSpec, HPoint};
use crate::packings::euclid::{AnnulusSet, EuclidRegion, LatticeDisks};
use crate::packings::{
    BoroczkyPacking, BrickFamily, CenterConvention, DiskSet, HalfSpace, Packing, StripeModel, TightPacking,
};
use crate::regions::SamplePlan;
use crate::voronoi::cells_near;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Stripe,
    Halfspace,
    Annulus,
    Lattice,
    Boroczky,
    Tight,
    Bricks,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Stripe => "stripe",
            Kind::Halfspace => "halfspace",
            Kind::Annulus => "annulus",
            Kind::Lattice => "lattice",
            Kind::Boroczky => "boroczky",
            Kind::Tight => "tight",
            Kind::Bricks => "bricks",
        }
    }

    pub fn euclidean(self) -> bool {
        matches!(self, Kind::Annulus | Kind::Lattice)
    }
}

impl std::str::FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Kind as ValueEnum>::from_str(s, true)
    }
}

/// Everything a run depends on. Written next to outputs so a run can be
/// repeated from it alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Stripe width.
    #[arg(long = "W", default_value_t = 5.0)]
    pub w: f64,
    #[arg(long, default_value_t = 7)]
    pub m: u32,
    /// Disk radius (Böröczky, lattice); defaults to the largest admissible.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Window radius.
    #[arg(long = "R", default_value_t = 6.0)]
    pub r: f64,
    /// Comma separated radii for density curves.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 6.0, 8.0])]
    pub radii: Vec<f64>,
    #[arg(long, value_parser = parse_center, default_value = "0,1")]
    pub center: (f64, f64),
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Brick family offset in [0, 2).
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    /// Euclidean mode: required for the annulus and lattice models; for
    /// Böröczky, places lattice points at Euclidean circle centres.
    #[arg(long)]
    pub euclidean: bool,
    /// Force Monte Carlo even where an exact value is available.
    #[arg(long)]
    pub mc: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_center(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let x = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    if !(y > 0.0) {
        return Err("y must be positive".into());
    }
    Ok((x, y))
}

#[derive(Debug, Parser)]
#[command(name = "hypack", version, about = "Packings and densities in the hyperbolic plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Write a packing document for a window.
    Gen(RunConfig),
    /// Covered fraction over balls of growing radius, as CSV.
    Density {
        #[command(flatten)]
        cfg: RunConfig,
        /// Packing document to use instead of a named model.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Dirichlet cells of body centres in a window, as JSON.
    Voronoi {
        #[command(flatten)]
        cfg: RunConfig,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Distance within which neighbouring sites are considered.
        #[arg(long, default_value_t = 4.0)]
        search: f64,
    },
    /// Draw a packing document (and optional cells) as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cells: Option<PathBuf>,
        #[arg(long)]
        ylog: bool,
        #[arg(long)]
        no_bricks: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    Verify {
        #[arg(long, default_value_t = AcceptanceOptions::default().seed)]
        seed: u64,
        /// Shrink all tolerances so that criteria fail.
        #[arg(long)]
        tamper: bool,
        /// Run a single criterion, e.g. A3.
        #[arg(long)]
        only: Option<String>,
        /// Machine-readable report.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

pub fn main() -> i32 {
    run_args(std::env::args_os())
}

pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hypack: {e}");
            1
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Gen(cfg) => {
            let doc = gen_doc(&cfg)?;
            emit(cfg.out.as_deref(), &doc.to_json()?)?;
        }
        Cmd::Density { cfg, input } => emit(cfg.out.as_deref(), &density_csv(&cfg, input.as_deref())?)?,
        Cmd::Voronoi { cfg, input, search } => {
            let cells = voronoi_cells(&cfg, input.as_deref(), search)?;
            emit(cfg.out.as_deref(), &cells)?;
        }
        Cmd::Render { input, cells, ylog, no_bricks, out } => {
            let doc = PackingDoc::from_json(&read(&input)?)?;
            let cells = match cells {
                Some(p) => serde_json::from_str::<CellsDoc>(&read(&p)?)?.cells,
                None => Vec::new(),
            };
            let opts = RenderOptions { ylog, bricks: !no_bricks, ..Default::default() };
            emit(out.as_deref(), &render_svg(&doc, &cells, &opts))?;
        }
        Cmd::Verify { seed, tamper, only, json } => return verify(seed, tamper, only, json),
    }
    Ok(0)
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| HypackError::Format(format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| HypackError::Format(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { so.write_all(b"\n") })
                .map_err(|e| HypackError::Format(e.to_string()))
        }
    }
}

fn kind_of(cfg: &RunConfig) -> Result<Kind> {
    cfg.kind.ok_or_else(|| HypackError::Domain("--kind is required".into()))
}

fn window(cfg: &RunConfig) -> Result<BallSpec> {
    BallSpec::new(HPoint::try_new(cfg.center.0, cfg.center.1)?, cfg.r)
}

/// Width giving one Böröczky disk per brick for a family offset.
pub fn brick_width(offset: f64) -> f64 {
    if offset <= 0.5 {
        (0.5 - offset).exp()
    } else {
        (2.5 - offset).exp()
    }
}

fn boroczky(cfg: &RunConfig) -> Result<BoroczkyPacking> {
    let convention = if cfg.euclidean { CenterConvention::Euclidean } else { CenterConvention::Hyperbolic };
    BoroczkyPacking::with_convention(cfg.rho.unwrap_or(convention.max_radius()), convention)
}

fn model(cfg: &RunConfig, kind: Kind) -> Result<Box<dyn Packing>> {
    Ok(match kind {
        Kind::Stripe => Box::new(StripeModel::new(cfg.w)?),
        Kind::Halfspace => Box::new(HalfSpace),
        Kind::Boroczky | Kind::Bricks => Box::new(boroczky(cfg)?),
        Kind::Tight => Box::new(TightPacking::new(cfg.m)?),
        Kind::Annulus | Kind::Lattice => {
            return Err(HypackError::Domain(format!("{} is a Euclidean model; pass --euclidean", kind.name())))
        }
    })
}

fn euclid_model(cfg: &RunConfig, kind: Kind) -> Result<Box<dyn EuclidRegion>> {
    Ok(match kind {
        Kind::Annulus => Box::new(AnnulusSet),
        Kind::Lattice => Box::new(LatticeDisks::new(1.0, cfg.rho.unwrap_or(0.5))?),
        _ => return Err(HypackError::Domain(format!("{} has no Euclidean version", kind.name()))),
    })
}

fn params(cfg: &RunConfig, kind: Kind) -> Result<serde_json::Value> {
    Ok(match kind {
        Kind::Stripe => json!({"W": cfg.w}),
        Kind::Halfspace => json!({}),
        Kind::Annulus => json!({}),
        Kind::Lattice => json!({"spacing": 1.0, "rho": cfg.rho.unwrap_or(0.5)}),
        Kind::Boroczky => json!({"rho": boroczky(cfg)?.radius, "euclidean_centers": cfg.euclidean}),
        Kind::Tight => json!({"m": cfg.m, "rho": TightPacking::new(cfg.m)?.radius()}),
        Kind::Bricks => {
            json!({"rho": boroczky(cfg)?.radius, "offset": cfg.offset, "w": brick_width(cfg.offset)})
        }
    })
}

pub fn gen_doc(cfg: &RunConfig) -> Result<PackingDoc> {
    let kind = kind_of(cfg)?;
    let mut doc = PackingDoc::new(kind.name(), params(cfg, kind)?);
    match kind {
        Kind::Annulus => {
            doc.model = "e2".into();
            doc.region = Some("annuli 2^(j-1) <= |z| < 2^j, j even, j >= 2".into());
            return Ok(doc);
        }
        Kind::Lattice => {
            doc.model = "e2".into();
            doc.region = Some("disks about integer points".into());
            return Ok(doc);
        }
        Kind::Stripe => doc.region = Some("floor(ln y / W - 1/2) even".into()),
        Kind::Halfspace => doc.region = Some("x >= 0".into()),
        _ => {}
    }
    let b = window(cfg)?;
    let disks = model(cfg, kind)?.bodies_in_ball(&b)?;
    doc = doc.with_window(&b).with_bodies(&disks);
    if kind == Kind::Bricks {
        doc.tiles = bricks_in_window(cfg, &b)?;
    }
    Ok(doc)
}

fn bricks_in_window(cfg: &RunConfig, b: &BallSpec) -> Result<Vec<TileRecord>> {
    let fam = BrickFamily::new(cfg.offset, brick_width(cfg.offset))?;
    let e = b.euclidean_form();
    let (lo, hi) = ((e.k - e.r).max(f64::MIN_POSITIVE).ln(), (e.k + e.r).ln());
    let mut out = Vec::new();
    let j0 = ((lo - cfg.offset) / 2.0).floor() as i64;
    let j1 = ((hi - cfg.offset) / 2.0).floor() as i64;
    for j in j0..=j1 {
        let step = fam.width * (2.0 * j as f64 + cfg.offset).exp();
        let k0 = ((e.h - e.r) / step).floor() as i64;
        let k1 = ((e.h + e.r) / step).floor() as i64;
        if k1 - k0 > 100_000 {
            return Err(HypackError::Domain("window too large for brick output".into()));
        }
        for k in k0..=k1 {
            out.push(TileRecord::from(&fam.tile(j, k)));
        }
    }
    Ok(out)
}

fn density_csv(cfg: &RunConfig, input: Option<&Path>) -> Result<String> {
    let plan = SamplePlan::new(cfg.seed, cfg.samples)?;
    let eval = if cfg.mc { Evaluation::ForceMc } else { Evaluation::Auto };
    let curve = match input {
        Some(p) => {
            let doc = PackingDoc::from_json(&read(p)?)?;
            let set = DiskSet::new(doc.disks()?, doc.kind.clone());
            density_curve(&set, &HPoint::try_new(cfg.center.0, cfg.center.1)?, &cfg.radii, &plan, eval)?
        }
        None => {
            let kind = kind_of(cfg)?;
            if kind.euclidean() {
                if !cfg.euclidean {
                    return Err(HypackError::Domain(format!("{} lives in the Euclidean plane; pass --euclidean", kind.name())));
                }
                euclid_density_curve(euclid_model(cfg, kind)?.as_ref(), &cfg.radii, &plan, eval)?
            } else {
                let m = model(cfg, kind)?;
                density_curve(m.as_ref(), &HPoint::try_new(cfg.center.0, cfg.center.1)?, &cfg.radii, &plan, eval)?
            }
        }
    };
    Ok(curve_to_csv(&curve))
}

fn voronoi_cells(cfg: &RunConfig, input: Option<&Path>, search: f64) -> Result<String> {
    let b = window(cfg)?;
    let reach = BallSpec::new(b.center, b.radius + search)?;
    let disks = match input {
        Some(p) => PackingDoc::from_json(&read(p)?)?.disks()?,
        None => model(cfg, kind_of(cfg)?)?.bodies_in_ball(&reach)?,
    };
    let sites: Vec<HPoint> = disks.iter().map(|d| d.center).collect();
    cells_to_json(&cells_near(&sites, &b.center, b.radius, search)?)
}

fn verify(seed: u64, tamper: bool, only: Option<String>, json_out: Option<PathBuf>) -> Result<i32> {
    let o = AcceptanceOptions { seed, tamper };
    let reports = match only {
        Some(id) => vec![run_criterion(&id, &o).ok_or_else(|| HypackError::Domain(format!("unknown criterion {id}")))?],
        None => run_all(&o),
    };
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if let Some(p) = json_out {
        let doc = json!({"version": crate::formats::VERSION, "seed": seed, "tamper": tamper, "criteria": reports});
        emit(Some(&p), &serde_json::to_string_pretty(&doc)?)?;
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
