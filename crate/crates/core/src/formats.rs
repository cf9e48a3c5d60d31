//! File formats: packing documents (JSON), density curves (CSV), Voronoi
//! cells (JSON) and SVG rendering of half-plane windows.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::density::DensityCurve;
use crate::error::{HypackError, Result};
use crate::hgeom::{BallSpec, HDisk, HPoint};
use crate::packings::BrickTile;
use crate::voronoi::{CellRecord, VoronoiCell};

pub const VERSION: &str = "hypack/1";
pub const CSV_HEADER: &str = "radius,fraction,std_error,samples,method";

/// A disk by its hyperbolic centre `(H, K)` and radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyRecord {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl From<&HDisk> for BodyRecord {
    fn from(d: &HDisk) -> Self {
        BodyRecord { h: d.center.x(), k: d.center.y(), r: d.radius }
    }
}

impl BodyRecord {
    pub fn to_disk(&self) -> Result<HDisk> {
        HDisk::new(HPoint::try_new(self.h, self.k)?, self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TileRecord {
    pub j: i64,
    pub k: i64,
    pub offset: f64,
    pub w: f64,
}

impl From<&BrickTile> for TileRecord {
    fn from(t: &BrickTile) -> Self {
        TileRecord { j: t.level, k: t.index, offset: t.offset, w: t.width }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    pub center: HPoint,
    pub radius: f64,
}

/// `{version, model, kind, params, window, bodies, ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingDoc {
    pub version: String,
    /// `"uhp"` for half-plane models, `"e2"` for the Euclidean plane.
    pub model: String,
    pub kind: String,
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowRecord>,
    pub bodies: Vec<BodyRecord>,
    /// Membership rule for region-type models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tiles: Vec<TileRecord>,
}

impl PackingDoc {
    pub fn new(kind: &str, params: Value) -> Self {
        PackingDoc {
            version: VERSION.into(),
            model: "uhp".into(),
            kind: kind.into(),
            params,
            window: None,
            bodies: Vec::new(),
            region: None,
            tiles: Vec::new(),
        }
    }

    pub fn with_window(mut self, b: &BallSpec) -> Self {
        self.window = Some(WindowRecord { center: b.center, radius: b.radius });
        self
    }

    pub fn with_bodies(mut self, disks: &[HDisk]) -> Self {
        self.bodies = disks.iter().map(BodyRecord::from).collect();
        self
    }

    pub fn disks(&self) -> Result<Vec<HDisk>> {
        self.bodies.iter().map(BodyRecord::to_disk).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PackingDoc = serde_json::from_str(s)?;
        if doc.version != VERSION {
            return Err(HypackError::Format(format!("unsupported version {:?}, expected {VERSION:?}", doc.version)));
        }
        if doc.model != "uhp" && doc.model != "e2" {
            return Err(HypackError::Format(format!("unknown model {:?}", doc.model)));
        }
        Ok(doc)
    }
}

/// CSV text of a curve, one row per radius.
pub fn curve_to_csv(c: &DensityCurve) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &c.points {
        let _ = writeln!(out, "{},{},{},{},{}", p.radius, p.fraction, p.std_error, p.samples, p.method.as_str());
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellsDoc {
    pub version: String,
    pub cells: Vec<CellRecord>,
}

pub fn cells_to_json(cells: &[VoronoiCell]) -> Result<String> {
    let doc = CellsDoc { version: VERSION.into(), cells: cells.iter().map(CellRecord::from).collect() };
    Ok(serde_json::to_string_pretty(&doc)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Plot `ln y` instead of `y` on the vertical axis.
    pub ylog: bool,
    pub bricks: bool,
    pub width_px: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { ylog: false, bricks: true, width_px: 800.0 }
    }
}

struct Viewport {
    x0: f64,
    x1: f64,
    v0: f64,
    v1: f64,
    ylog: bool,
}

impl Viewport {
    fn v(&self, y: f64) -> f64 {
        if self.ylog {
            y.ln()
        } else {
            y
        }
    }
}

fn viewport(doc: &PackingDoc, cells: &[CellRecord], ylog: bool) -> Viewport {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64| {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    };
    if let Some(w) = &doc.window {
        let e = BallSpec { center: w.center, radius: w.radius }.euclidean_form();
        grow(e.h - e.r, e.k - e.r);
        grow(e.h + e.r, e.k + e.r);
    }
    for b in &doc.bodies {
        if let Ok(d) = b.to_disk() {
            let e = d.euclidean_form();
            grow(e.h - e.r, e.k - e.r);
            grow(e.h + e.r, e.k + e.r);
        }
    }
    for c in cells {
        for v in &c.vertices {
            grow(v.x(), v.y());
        }
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, 0.5, 2.0);
    }
    let vp = Viewport { x0, x1, v0: 0.0, v1: 0.0, ylog };
    let (v0, v1) = (vp.v(y0.max(f64::MIN_POSITIVE)), vp.v(y1));
    Viewport { v0, v1, ..vp }
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

/// SVG of a packing document (and optional Voronoi cells). Drawing uses
/// half-plane coordinates, flipped so that `y` grows upwards; in `ylog` mode
/// the vertical coordinate is `ln y` and disks are drawn as polylines.
pub fn render_svg(doc: &PackingDoc, cells: &[CellRecord], opts: &RenderOptions) -> String {
    let vp = viewport(doc, cells, opts.ylog);
    let (w, h) = ((vp.x1 - vp.x0).max(1e-12), (vp.v1 - vp.v0).max(1e-12));
    let height_px = if opts.ylog { opts.width_px * 0.75 } else { opts.width_px * h / w };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}" preserveAspectRatio="none">"#,
        fmt(opts.width_px),
        fmt(height_px.clamp(50.0, 4.0 * opts.width_px)),
        fmt(vp.x0),
        fmt(-vp.v1),
        fmt(w),
        fmt(h)
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" vector-effect="non-scaling-stroke">"#);
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" vector-effect="non-scaling-stroke"/>"#,
        fmt(vp.x0),
        fmt(vp.v0),
        fmt(w),
        fmt(h)
    );

    if doc.kind == "stripe" {
        if let Some(width) = doc.params.get("W").and_then(Value::as_f64) {
            let (lo, hi) = if opts.ylog { (vp.v0, vp.v1) } else { (vp.v0.max(1e-300).ln(), vp.v1.ln()) };
            let j0 = (lo / width - 0.5).floor() as i64;
            let j1 = (hi / width - 0.5).floor() as i64;
            for j in j0..=j1 {
                let a = ((j as f64 + 0.5) * width).exp();
                let b = ((j as f64 + 1.5) * width).exp();
                let (va, vb) = (vp.v(a).max(vp.v0), vp.v(b).min(vp.v1));
                let (class, fill) = if j.rem_euclid(2) == 0 { ("stripe-black", "#222") } else { ("stripe-white", "#eee") };
                let _ = writeln!(
                    s,
                    r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
                    fmt(vp.x0),
                    fmt(va),
                    fmt(w),
                    fmt((vb - va).max(0.0))
                );
            }
        }
    }
    if doc.kind == "halfspace" {
        let x = 0f64.clamp(vp.x0, vp.x1);
        let _ = writeln!(
            s,
            r##"<rect class="region" x="{}" y="{}" width="{}" height="{}" fill="#222"/>"##,
            fmt(x),
            fmt(vp.v0),
            fmt((vp.x1 - x).max(0.0)),
            fmt(h)
        );
    }
    if opts.bricks {
        for t in &doc.tiles {
            let s0 = (2.0 * t.j as f64 + t.offset).exp();
            let (bx0, bx1) = (t.w * s0 * t.k as f64, t.w * s0 * (t.k + 1) as f64);
            let (by0, by1) = (vp.v(s0), vp.v(s0 * 2f64.exp()));
            let _ = writeln!(
                s,
                r#"<rect class="brick" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="steelblue" vector-effect="non-scaling-stroke"/>"#,
                fmt(bx0),
                fmt(by0),
                fmt(bx1 - bx0),
                fmt(by1 - by0)
            );
        }
    }
    for c in cells {
        let pts: Vec<String> = c.vertices.iter().map(|v| format!("{},{}", fmt(v.x()), fmt(vp.v(v.y())))).collect();
        let _ = writeln!(
            s,
            r#"<polygon class="cell" points="{}" fill="none" stroke="gray" vector-effect="non-scaling-stroke"/>"#,
            pts.join(" ")
        );
    }
    for b in &doc.bodies {
        let Ok(d) = b.to_disk() else { continue };
        let e = d.euclidean_form();
        if opts.ylog {
            let n = 48;
            let pts: Vec<String> = (0..n)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    format!("{},{}", fmt(e.h + e.r * t.cos()), fmt((e.k + e.r * t.sin()).ln()))
                })
                .collect();
            let _ = writeln!(s, r##"<polygon class="body" points="{}" fill="#c33"/>"##, pts.join(" "));
        } else {
            let _ = writeln!(
                s,
                r##"<circle class="body" cx="{}" cy="{}" r="{}" fill="#c33"/>"##,
                fmt(e.h),
                fmt(e.k),
                fmt(e.r)
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{CurveCenter, CurvePoint, Method};

    #[test]
    fn csv_header_and_rows() {
        let c = DensityCurve {
            center: CurveCenter::Hyperbolic(HPoint::ORIGIN),
            points: vec![CurvePoint { radius: 2.5, fraction: 0.25, std_error: 0.0, samples: 0, method: Method::Quadrature }],
        };
        assert_eq!(curve_to_csv(&c), "radius,fraction,std_error,samples,method\n2.5,0.25,0,0,quadrature\n");
    }

    #[test]
    fn packing_doc_round_trip() {
        let d = HDisk::new(HPoint::new(0.5, 2.0), 0.3).unwrap();
        let doc = PackingDoc::new("tight", serde_json::json!({"m": 7}))
            .with_window(&BallSpec::at_origin(2.0).unwrap())
            .with_bodies(&[d]);
        let text = doc.to_json().unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["version"], "hypack/1");
        assert_eq!(v["model"], "uhp");
        assert_eq!(v["bodies"][0]["H"], 0.5);
        assert_eq!(v["bodies"][0]["K"], 2.0);
        assert_eq!(v["bodies"][0]["R"], 0.3);
        assert_eq!(PackingDoc::from_json(&text).unwrap(), doc);
        let bad = text.replace("hypack/1", "hypack/0");
        assert!(PackingDoc::from_json(&bad).is_err());
    }

    #[test]
    fn svg_counts() {
        let disks: Vec<HDisk> = (0..5).map(|i| HDisk::new(HPoint::new(i as f64, 1.0), 0.2).unwrap()).collect();
        let doc = PackingDoc::new("boroczky", serde_json::json!({})).with_bodies(&disks);
        for ylog in [false, true] {
            let svg = render_svg(&doc, &[], &RenderOptions { ylog, ..Default::default() });
            assert_eq!(svg.matches(r#"class="body""#).count(), 5);
            assert!(svg.starts_with("<svg"));
        }
        let empty = render_svg(&PackingDoc::new("tight", serde_json::json!({})), &[], &RenderOptions::default());
        assert_eq!(empty.matches("class=\"frame\"").count(), 1);
        assert_eq!(empty.matches("class=\"body\"").count(), 0);
    }
}
