use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hypack::cli::{gen_doc, Kind, RunConfig};
use hypack::density::{density_curve, euclid_density_curve, Evaluation};
use hypack::hgeom::HPoint;
use hypack::packings::euclid::AnnulusSet;
use hypack::packings::{BoroczkyPacking, HalfSpace, Packing, StripeModel, TightPacking};
use hypack::regions::SamplePlan;
use hypack::HypackError;

fn err(e: HypackError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point(p: (f64, f64)) -> PyResult<HPoint> {
    HPoint::try_new(p.0, p.1).map_err(err)
}

#[pyfunction]
fn tight_radius(m: u32) -> PyResult<f64> {
    hypack::packings::tight_radius(m).map_err(err)
}

#[pyfunction]
fn tight_density(m: u32) -> PyResult<f64> {
    hypack::packings::tight_density_formula(m).map_err(err)
}

#[pyfunction]
fn ball_area(r: f64) -> f64 {
    hypack::hgeom::ball_area(r)
}

#[pyfunction]
fn distance(p: (f64, f64), q: (f64, f64)) -> PyResult<f64> {
    Ok(hypack::hgeom::distance(&point(p)?, &point(q)?))
}

fn parse_kind(kind: &str) -> PyResult<Kind> {
    kind.parse::<Kind>().map_err(PyValueError::new_err)
}

/// Rows `(radius, fraction, std_error, samples, method)` of a density curve.
#[pyfunction]
#[pyo3(signature = (kind, radii, center=(0.0, 1.0), seed=1, samples=100_000, w=5.0, m=7, force_mc=false))]
#[allow(clippy::too_many_arguments)]
fn density(
    kind: &str,
    radii: Vec<f64>,
    center: (f64, f64),
    seed: u64,
    samples: u64,
    w: f64,
    m: u32,
    force_mc: bool,
) -> PyResult<Vec<Row>> {
    let plan = SamplePlan::new(seed, samples).map_err(err)?;
    let eval = if force_mc { Evaluation::ForceMc } else { Evaluation::Auto };
    let c = point(center)?;
    let model: Box<dyn Packing> = match parse_kind(kind)? {
        Kind::Stripe => Box::new(StripeModel::new(w).map_err(err)?),
        Kind::Halfspace => Box::new(HalfSpace),
        Kind::Boroczky => Box::new(BoroczkyPacking::maximal()),
        Kind::Tight => Box::new(TightPacking::new(m).map_err(err)?),
        Kind::Annulus => {
            let curve = euclid_density_curve(&AnnulusSet, &radii, &plan, eval).map_err(err)?;
            return Ok(rows(&curve));
        }
        other => return Err(PyValueError::new_err(format!("no density curve for {other:?}"))),
    };
    let curve = density_curve(model.as_ref(), &c, &radii, &plan, eval).map_err(err)?;
    Ok(rows(&curve))
}

type Row = (f64, f64, f64, u64, String);

fn rows(c: &hypack::density::DensityCurve) -> Vec<Row> {
    c.points
        .iter()
        .map(|p| (p.radius, p.fraction, p.std_error, p.samples, p.method.as_str().to_string()))
        .collect()
}

/// Packing document for a window about `center`, as JSON text.
#[pyfunction]
#[pyo3(signature = (kind, radius=6.0, center=(0.0, 1.0), w=5.0, m=7, rho=None, offset=0.0))]
fn generate(
    kind: &str,
    radius: f64,
    center: (f64, f64),
    w: f64,
    m: u32,
    rho: Option<f64>,
    offset: f64,
) -> PyResult<String> {
    let k = parse_kind(kind)?;
    let cfg = RunConfig {
        kind: Some(k),
        w,
        m,
        rho,
        r: radius,
        radii: Vec::new(),
        center,
        seed: 1,
        samples: 1,
        offset,
        euclidean: k.euclidean(),
        mc: false,
        out: None,
    };
    gen_doc(&cfg).and_then(|d| d.to_json()).map_err(err)
}

/// Runs one acceptance criterion; returns `(passed, detail)`.
#[pyfunction]
#[pyo3(signature = (id, seed=None))]
fn verify(id: &str, seed: Option<u64>) -> PyResult<(bool, String)> {
    let mut o = hypack::acceptance::AcceptanceOptions::default();
    if let Some(s) = seed {
        o.seed = s;
    }
    let r = hypack::acceptance::run_criterion(id, &o)
        .ok_or_else(|| PyValueError::new_err(format!("unknown criterion {id}")))?;
    Ok((r.passed, r.detail))
}

#[pymodule]
fn pyhypack(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tight_radius, m)?)?;
    m.add_function(wrap_pyfunction!(tight_density, m)?)?;
    m.add_function(wrap_pyfunction!(ball_area, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
