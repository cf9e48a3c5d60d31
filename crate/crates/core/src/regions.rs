//! Measurable regions, deterministic Monte Carlo area fractions inside balls,
//! and quadrature for regions bounded by horocycles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{domain, HypackError, Result};
use crate::hgeom::{ball_area, BallSpec, HPoint};
use crate::quad::integrate;
use crate::rng::{SampleRng, SampleStream};

/// A measurable subset of the half-plane.
pub trait Region: Send + Sync {
    fn contains(&self, p: &HPoint) -> bool;

    /// Exact area of the region inside `b`, when the region knows how to
    /// compute it.
    fn exact_area_in_ball(&self, _b: &BallSpec) -> Option<Result<f64>> {
        None
    }

    fn label(&self) -> String;
}

impl<R: Region + ?Sized> Region for &R {
    fn contains(&self, p: &HPoint) -> bool {
        (**self).contains(p)
    }
    fn exact_area_in_ball(&self, b: &BallSpec) -> Option<Result<f64>> {
        (**self).exact_area_in_ball(b)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<R: Region + ?Sized> Region for Box<R> {
    fn contains(&self, p: &HPoint) -> bool {
        (**self).contains(p)
    }
    fn exact_area_in_ball(&self, b: &BallSpec) -> Option<Result<f64>> {
        (**self).exact_area_in_ball(b)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// The whole plane.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPlane;

impl Region for FullPlane {
    fn contains(&self, _p: &HPoint) -> bool {
        true
    }
    fn exact_area_in_ball(&self, b: &BallSpec) -> Option<Result<f64>> {
        Some(Ok(b.area()))
    }
    fn label(&self) -> String {
        "plane".into()
    }
}

/// A region given by an indicator closure.
pub struct FnRegion<F> {
    label: String,
    f: F,
}

impl<F: Fn(&HPoint) -> bool + Send + Sync> FnRegion<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnRegion { label: label.into(), f }
    }
}

impl<F: Fn(&HPoint) -> bool + Send + Sync> Region for FnRegion<F> {
    fn contains(&self, p: &HPoint) -> bool {
        (self.f)(p)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratification {
    None,
    /// Equal-area radial bands, sampled in equal numbers.
    RadialBands(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub samples: u64,
    pub stratification: Stratification,
}

impl SamplePlan {
    pub fn new(seed: u64, samples: u64) -> Result<Self> {
        if samples == 0 {
            return domain("a sample plan needs at least one sample");
        }
        Ok(SamplePlan { seed, samples, stratification: Stratification::None })
    }

    pub fn stratified(seed: u64, samples: u64, bands: u32) -> Result<Self> {
        if bands == 0 || samples < bands as u64 {
            return domain(format!("{samples} samples cannot fill {bands} bands"));
        }
        Ok(SamplePlan { seed, samples, stratification: Stratification::RadialBands(bands) })
    }

    /// Same plan with a different seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        SamplePlan { seed, ..*self }
    }

    fn bands(&self) -> u64 {
        match self.stratification {
            Stratification::None => 1,
            Stratification::RadialBands(b) => b as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub fraction: f64,
    pub std_error: f64,
    pub samples_used: u64,
}

impl AreaEstimate {
    pub fn exact(fraction: f64) -> Self {
        AreaEstimate { fraction, std_error: 0.0, samples_used: 0 }
    }

    pub(crate) fn from_hits(hits: u64, n: u64) -> Self {
        let f = hits as f64 / n as f64;
        AreaEstimate { fraction: f, std_error: (f * (1.0 - f) / n as f64).sqrt(), samples_used: n }
    }
}

/// Point at distance `rho` from `(0,1)` in direction `phi`, moved by the map
/// `z -> y_c z + x_c` onto `center`.
pub(crate) fn polar_point(center: &HPoint, rho: f64, phi: f64) -> HPoint {
    let half = 0.5 * rho;
    let t = half.tanh();
    let one_minus_t = 2.0 / (rho.exp() + 1.0);
    let (s, c) = (0.5 * phi).sin_cos();
    let den = one_minus_t * one_minus_t + 4.0 * t * s * s;
    let ln_cosh = half + (-rho).exp().ln_1p() - std::f64::consts::LN_2;
    let x = -4.0 * t * s * c / den;
    let log_y = -2.0 * ln_cosh - den.ln();
    let sech = 1.0 / half.cosh();
    let y = sech * sech / den;
    let y = y * center.y();
    let log_y = log_y + center.log_y();
    let y = if y.is_normal() { y } else { log_y.exp() };
    HPoint::from_parts(center.x() + center.y() * x, y, log_y)
}

/// Area-uniform point of `b` from two uniforms; `u` is the area fraction
/// enclosed by the sample's radius.
pub(crate) fn ball_point(b: &BallSpec, u: f64, v: f64) -> HPoint {
    let rho = 2.0 * (u.sqrt() * (0.5 * b.radius).sinh()).asinh();
    polar_point(&b.center, rho, 2.0 * std::f64::consts::PI * v)
}

fn plan_point(b: &BallSpec, plan: &SamplePlan, index: u64, rng: &mut SampleRng) -> HPoint {
    let bands = plan.bands();
    let band = index % bands;
    let u = (band as f64 + rng.uniform()) / bands as f64;
    ball_point(b, u, rng.uniform())
}

/// Samples of `b`, area-uniform, reproducible per `(seed, index)`.
pub fn sample_ball_uniform(b: &BallSpec, plan: &SamplePlan) -> Vec<HPoint> {
    let stream = SampleStream::new(plan.seed);
    (0..plan.samples)
        .into_par_iter()
        .map(|i| plan_point(b, plan, i, &mut stream.at(i)))
        .collect()
}

/// Deterministic parallel hit count: `hits[k]` counts indices `i` with
/// `i % groups == k` for which `trial` returns true.
pub(crate) fn count_hits<F>(seed: u64, n: u64, groups: u64, trial: F) -> Vec<u64>
where
    F: Fn(u64, &mut SampleRng) -> bool + Sync,
{
    let stream = SampleStream::new(seed);
    (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; groups as usize],
            |mut acc, i| {
                if trial(i, &mut stream.at(i)) {
                    acc[(i % groups) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; groups as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Monte Carlo estimate of the fraction of `b` covered by `r`.
pub fn mc_area_fraction(r: &dyn Region, b: &BallSpec, plan: &SamplePlan) -> AreaEstimate {
    let bands = plan.bands();
    let hits = count_hits(plan.seed, plan.samples, bands, |i, rng| {
        r.contains(&plan_point(b, plan, i, rng))
    });
    if bands == 1 {
        return AreaEstimate::from_hits(hits[0], plan.samples);
    }
    let mut mean = 0.0;
    let mut var = 0.0;
    for (k, &h) in hits.iter().enumerate() {
        let n_k = plan.samples / bands + u64::from((k as u64) < plan.samples % bands);
        let p = h as f64 / n_k as f64;
        mean += p;
        var += p * (1.0 - p) / n_k as f64;
    }
    let bf = bands as f64;
    AreaEstimate { fraction: mean / bf, std_error: var.sqrt() / bf, samples_used: plan.samples }
}

/// Area of `b ∩ {s_lo <= ln y <= s_hi}`.
///
/// In the variable `s = ln y` the chord length over `y^2` becomes
/// `2 e^{(s_top - s)/2} sqrt((1 - e^{s_bot - s})(1 - e^{s - s_top}))`, where
/// `s_bot`, `s_top` bound the ball. Square-root endpoints are removed with
/// `s = s_bot + t^2` (or `s_top - t^2`).
pub fn band_area_in_ball(b: &BallSpec, s_lo: f64, s_hi: f64) -> Result<f64> {
    let rel = Tolerances::default().quad_rel;
    let (bot, top) = b.log_y_range();
    let lo = s_lo.max(bot);
    let hi = s_hi.min(top);
    if !(lo < hi) {
        return Ok(0.0);
    }
    let g = move |s: f64| -> f64 {
        let e1 = -(bot - s).exp_m1();
        let e2 = -(s - top).exp_m1();
        2.0 * (0.5 * (top - s)).exp() * (e1.max(0.0) * e2.max(0.0)).sqrt()
    };
    let piece = |lo: f64, hi: f64| -> Result<f64> {
        let at_bot = lo <= bot;
        let at_top = hi >= top;
        let q = match (at_bot, at_top) {
            (true, false) => integrate(|t: f64| g(bot + t * t) * 2.0 * t, 0.0, (hi - bot).sqrt(), rel, 0.0)?,
            (false, true) => integrate(|t: f64| g(top - t * t) * 2.0 * t, 0.0, (top - lo).sqrt(), rel, 0.0)?,
            _ => integrate(g, lo, hi, rel, 0.0)?,
        };
        Ok(q.value)
    };
    if lo <= bot && hi >= top {
        let mid = 0.5 * (lo + hi);
        Ok(piece(lo, mid)? + piece(mid, hi)?)
    } else {
        piece(lo, hi)
    }
}

/// Area `A_j` of stripe `j` (between the horocycles `y = e^{(j+1/2)W}` and
/// `y = e^{(j+3/2)W}`) inside the ball of radius `R` about `(0,1)`.
pub fn quad_stripe_area(j: i64, radius: f64, width: f64) -> Result<f64> {
    if !(width > 0.0) {
        return domain(format!("stripe width {width} must be positive"));
    }
    let b = BallSpec::at_origin(radius)?;
    let lo = (j as f64 + 0.5) * width;
    band_area_in_ball(&b, lo, lo + width)
}

/// Indices of the stripes meeting `[s_bot, s_top]`.
pub(crate) fn stripe_range(s_bot: f64, s_top: f64, width: f64) -> std::ops::RangeInclusive<i64> {
    let first = (s_bot / width - 0.5).floor() as i64;
    let last = (s_top / width - 0.5).floor() as i64;
    first..=last
}

/// Black and white area fractions of the ball of radius `R` about `(0,1)`.
/// Black stripes are those with even index.
pub fn quad_stripe_fractions(radius: f64, width: f64) -> Result<(f64, f64)> {
    if !(width > 0.0) {
        return domain(format!("stripe width {width} must be positive"));
    }
    let total = ball_area(radius);
    let mut black = 0.0;
    let mut white = 0.0;
    for j in stripe_range(-radius, radius, width) {
        let a = quad_stripe_area(j, radius, width)?;
        if j.rem_euclid(2) == 0 {
            black += a;
        } else {
            white += a;
        }
    }
    Ok((black / total, white / total))
}

pub fn quad_black_fraction(radius: f64, width: f64) -> Result<f64> {
    Ok(quad_stripe_fractions(radius, width)?.0)
}

/// Fraction of the Euclidean disk of radius `2^K` covered by the union of
/// the annuli `2^{j-1} < |p| <= 2^j` with `j` even, `j >= 2`.
pub fn annulus_fraction_euclid(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(HypackError::Domain(format!("annulus index K={k} must be at least 2")));
    }
    let k = k as i32;
    Ok((2..=k).step_by(2).map(|j| 3.0 * 4f64.powi(j - 1 - k)).sum())
}
